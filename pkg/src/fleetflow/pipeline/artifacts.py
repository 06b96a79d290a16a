"""Artifact directory: the single place where pipeline files are written."""

import hashlib
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import pandas as pd
import structlog
import yaml

from ..core.config import ExperimentMode, RunConfig
from ..core.errors import ArtifactMissingError, ConfigError
from ..core.seeds import derive_seed


logger = structlog.get_logger(__name__)


DATASET_FILE = "dataset.yaml"
CATALOG_FILE = "catalog.yaml"
SCENARIO_DIR = "scenarios"
USAGE_FILE = "usage_stats.csv"
FRONTS_FILE = "fronts.csv"
FLEETS_FILE = "fleets.csv"
CAPABILITY_FILE = "capability_report.csv"
SCORES_FILE = "scores.csv"
HISTOGRAM_FILE = "histogram.csv"
GROWTH_FILE = "growth.yaml"
MANIFEST_FILE = "manifest.yaml"

FLOAT_FORMAT = "%.6f"


def scenario_file(scenario_id: int) -> str:
    return f"{SCENARIO_DIR}/scenario_{scenario_id:03d}.yaml"


def sha256_file(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as f:
        for block in iter(lambda: f.read(1 << 16), b""):
            digest.update(block)
    return digest.hexdigest()


def seed_tree(config: RunConfig) -> Dict[str, Any]:
    """Every stream seed the pipeline derives from the master seed."""
    master = config.seed
    if master is None:
        raise ConfigError("a master seed is required", field="seed")
    scaled = config.simulation.experiment == ExperimentMode.SCALED
    scenarios = []
    for k in range(config.simulation.scenarios):
        entry = {
            "id": k,
            "scenario": derive_seed(master, "scenario", k),
            "evolve": derive_seed(master, "evolve", k),
        }
        if scaled:
            entry["scale"] = derive_seed(master, "scale", k)
        scenarios.append(entry)
    return {
        "master": master,
        "dataset": derive_seed(master, "dataset", 0),
        "scenarios": scenarios,
    }


class ArtifactWriter:
    """Writes artifacts below one output directory and hashes them for the manifest."""

    def __init__(self, root: Union[str, Path], create: bool = True):
        self.root = Path(root)
        if create:
            self.root.mkdir(parents=True, exist_ok=True)

    def path(self, name: str) -> Path:
        return self.root / name

    def exists(self, name: str) -> bool:
        return self.path(name).exists()

    def require(self, name: str) -> Path:
        path = self.path(name)
        if not path.exists():
            raise ArtifactMissingError(str(path))
        return path

    def read_text(self, name: str) -> str:
        return self.require(name).read_text(encoding="utf-8")

    def read_frame(self, name: str) -> pd.DataFrame:
        return pd.read_csv(self.require(name))

    def write_text(self, name: str, text: str) -> Path:
        path = self.path(name)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8", newline="\n")
        logger.debug("Artifact written", artifact=name, bytes=len(text))
        return path

    def write_yaml(self, name: str, doc: Any) -> Path:
        return self.write_text(name, yaml.safe_dump(doc, default_flow_style=None, sort_keys=False, width=4096))

    def write_frame(self, name: str, frame: pd.DataFrame) -> Path:
        text = frame.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
        return self.write_text(name, text)

    def scenario_files(self) -> List[str]:
        directory = self.path(SCENARIO_DIR)
        if not directory.is_dir():
            return []
        return [f"{SCENARIO_DIR}/{p.name}" for p in sorted(directory.glob("scenario_*.yaml"))]

    def clear_scenarios(self) -> int:
        """Remove scenario files left by an earlier run; returns how many were removed."""
        stale = self.scenario_files()
        for name in stale:
            self.path(name).unlink()
        if stale:
            logger.info("Stale scenarios removed", count=len(stale))
        return len(stale)

    def file_hashes(self) -> Dict[str, str]:
        """SHA-256 of every artifact present, keyed by relative path."""
        hashes = {}
        for path in sorted(self.root.rglob("*")):
            if not path.is_file():
                continue
            name = path.relative_to(self.root).as_posix()
            if name == MANIFEST_FILE:
                continue
            hashes[name] = sha256_file(path)
        return hashes

    def write_manifest(self, config: RunConfig, scales: Optional[Dict[int, float]] = None) -> Path:
        """Config snapshot, seed tree, frequency multipliers and file hashes."""
        doc = {
            "config": config.model_dump(mode="json"),
            "seeds": seed_tree(config),
            "scales": {int(k): float(v) for k, v in sorted((scales or {}).items())},
            "files": self.file_hashes(),
        }
        path = self.write_yaml(MANIFEST_FILE, doc)
        logger.info("Manifest written", files=len(doc["files"]))
        return path

    def read_manifest(self) -> Dict[str, Any]:
        return yaml.safe_load(self.read_text(MANIFEST_FILE)) or {}
