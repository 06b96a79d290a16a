"""Catalog cache file keyed by dataset hash."""

from pathlib import Path
from typing import Optional, Tuple, Union

import structlog
import yaml

from .enumeration import AssignmentOption, OptionCatalog


logger = structlog.get_logger(__name__)

CATALOG_SCHEMA_VERSION = 1


def dumps_catalog(catalog: OptionCatalog, dataset_hash: str) -> str:
    doc = {
        "schema_version": CATALOG_SCHEMA_VERSION,
        "dataset_hash": dataset_hash,
        "n_platforms": catalog.n_platforms,
        "tasks": [
            {"task_id": i, "options": [list(o.counts) for o in opts]}
            for i, opts in enumerate(catalog.options)
        ],
    }
    return yaml.safe_dump(doc, default_flow_style=None, sort_keys=False, width=4096)


def parse_catalog(text: str) -> Tuple[str, OptionCatalog]:
    doc = yaml.safe_load(text)
    n_platforms = int(doc["n_platforms"])
    options = tuple(
        tuple(AssignmentOption(task_id=entry["task_id"], counts=tuple(int(c) for c in row)) for row in entry["options"])
        for entry in doc["tasks"]
    )
    return doc["dataset_hash"], OptionCatalog(n_platforms=n_platforms, options=options)


def save_catalog(catalog: OptionCatalog, path: Union[str, Path], dataset_hash: str) -> None:
    Path(path).write_text(dumps_catalog(catalog, dataset_hash), encoding="utf-8")


def load_catalog(path: Union[str, Path], expected_hash: Optional[str] = None) -> Optional[OptionCatalog]:
    """Load a cached catalog; ``None`` when missing or built for another dataset."""
    path = Path(path)
    if not path.exists():
        return None
    cached_hash, catalog = parse_catalog(path.read_text(encoding="utf-8"))
    if expected_hash is not None and cached_hash != expected_hash:
        logger.warning("Stale catalog cache ignored", path=str(path), cached=cached_hash[:12], expected=expected_hash[:12])
        return None
    return catalog
