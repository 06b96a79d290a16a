"""Dataset file format, loading and invariant validation.

The dataset file is a versioned YAML document::

    schema_version: 1
    seed: 7
    platforms:
      columns: [id, cap1, cap2, cost]
      rows:
      - [0, 22.0, 5072.0, 0.9199]
    tasks:
    - id: 0
      duration_type: 3
      requirements: [[1, 1, 401.0], ...]     # cargo_type, subfunction_id, quantity
      suitability: [[0, 0, 1, ...], ...]     # one 0/1 row per requirement
      durations: [0.0, 9.88, ...]
      freq: [min, mode, max]
      dur: [min, mode, max]

Floats are written with Python's shortest round-trip representation, so a
saved file reloads to exactly the same values.
"""

import hashlib
from dataclasses import dataclass
from typing import IO, Any, Dict, List, Union

import yaml
from pydantic import ValidationError

from ..core.errors import DatasetParseError
from .models import Dataset, Platform, SubfunctionRequirement, Task, TriangularParams


SCHEMA_VERSION = 1
PLATFORM_COLUMNS = ["id", "cap1", "cap2", "cost"]


@dataclass(frozen=True)
class Violation:
    """One invariant breach found by :func:`validate_dataset`."""
    record: str
    field: str
    message: str

    def __str__(self) -> str:
        return f"{self.record}.{self.field}: {self.message}"


def _triangular_row(params: TriangularParams) -> List[float]:
    return [float(params.min), float(params.mode), float(params.max)]


def dataset_to_dict(dataset: Dataset) -> Dict[str, Any]:
    """Canonical document for a dataset; field order is fixed."""
    return {
        "schema_version": SCHEMA_VERSION,
        "seed": dataset.seed,
        "platforms": {
            "columns": list(PLATFORM_COLUMNS),
            "rows": [
                [p.id, float(p.capacity_type1), float(p.capacity_type2), float(p.cost)]
                for p in dataset.platforms
            ],
        },
        "tasks": [
            {
                "id": task.id,
                "duration_type": task.duration_type,
                "requirements": [
                    [req.cargo_type, req.subfunction_id, float(req.quantity)]
                    for req in task.requirements
                ],
                "suitability": [[int(v) for v in row] for row in task.suitability],
                "durations": [float(d) for d in task.durations],
                "freq": _triangular_row(task.freq_dist),
                "dur": _triangular_row(task.dur_dist),
            }
            for task in dataset.tasks
        ],
    }


def dumps_dataset(dataset: Dataset) -> str:
    """Serialize a dataset to its canonical text form."""
    return yaml.safe_dump(
        dataset_to_dict(dataset),
        default_flow_style=None,
        sort_keys=False,
        width=4096,
    )


def save_dataset(dataset: Dataset, target: Union[str, IO[str]]) -> None:
    """Write a dataset to a path or text stream."""
    text = dumps_dataset(dataset)
    if hasattr(target, "write"):
        target.write(text)
        return
    with open(target, "w", encoding="utf-8") as f:
        f.write(text)


def dataset_hash(dataset: Dataset) -> str:
    """SHA-256 of the canonical serialization."""
    return hashlib.sha256(dumps_dataset(dataset).encode("utf-8")).hexdigest()


def _parse_triangular(values: Any, record: str, name: str) -> TriangularParams:
    if not isinstance(values, (list, tuple)) or len(values) != 3:
        raise DatasetParseError(record, f"{name} must be [min, mode, max]")
    low, mode, high = values
    return TriangularParams(min=low, mode=mode, max=high)


def _parse_platform(row: Any, index: int) -> Platform:
    record = f"platforms[{index}]"
    if not isinstance(row, (list, tuple)) or len(row) != len(PLATFORM_COLUMNS):
        raise DatasetParseError(record, f"expected columns {PLATFORM_COLUMNS}")
    try:
        return Platform(id=row[0], capacity_type1=row[1], capacity_type2=row[2], cost=row[3])
    except ValidationError as e:
        raise DatasetParseError(record, str(e)) from e


def _parse_task(doc: Any, index: int) -> Task:
    record = f"tasks[{index}]"
    if not isinstance(doc, dict):
        raise DatasetParseError(record, "task entry must be a mapping")
    missing = [k for k in ("id", "duration_type", "requirements", "suitability", "durations", "freq", "dur") if k not in doc]
    if missing:
        raise DatasetParseError(record, f"missing fields {missing}")
    record = f"task {doc['id']}"
    try:
        requirements = []
        for row in doc["requirements"]:
            if not isinstance(row, (list, tuple)) or len(row) != 3:
                raise DatasetParseError(record, "requirement rows are [cargo_type, subfunction_id, quantity]")
            requirements.append(SubfunctionRequirement(cargo_type=row[0], subfunction_id=row[1], quantity=row[2]))
        return Task(
            id=doc["id"],
            requirements=tuple(requirements),
            durations=tuple(doc["durations"]),
            suitability=tuple(tuple(bool(v) for v in row) for row in doc["suitability"]),
            duration_type=doc["duration_type"],
            freq_dist=_parse_triangular(doc["freq"], record, "freq"),
            dur_dist=_parse_triangular(doc["dur"], record, "dur"),
        )
    except ValidationError as e:
        raise DatasetParseError(record, str(e)) from e
    except TypeError as e:
        raise DatasetParseError(record, str(e)) from e


def parse_dataset(text: Union[str, bytes]) -> Dataset:
    """Parse the canonical text form."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as e:
        raise DatasetParseError("document", f"not valid YAML: {e}") from e

    if not isinstance(doc, dict):
        raise DatasetParseError("document", "expected a mapping at top level")
    if "schema_version" not in doc:
        raise DatasetParseError("header", "missing schema_version")
    if doc["schema_version"] != SCHEMA_VERSION:
        raise DatasetParseError("header", f"unsupported schema_version {doc['schema_version']}")

    platforms_doc = doc.get("platforms")
    if not isinstance(platforms_doc, dict) or "rows" not in platforms_doc:
        raise DatasetParseError("platforms", "missing platform rows")
    if platforms_doc.get("columns", PLATFORM_COLUMNS) != PLATFORM_COLUMNS:
        raise DatasetParseError("platforms", f"columns must be {PLATFORM_COLUMNS}")

    tasks_doc = doc.get("tasks")
    if not isinstance(tasks_doc, list):
        raise DatasetParseError("tasks", "missing task list")

    platforms = tuple(_parse_platform(row, i) for i, row in enumerate(platforms_doc["rows"]))
    tasks = tuple(_parse_task(entry, i) for i, entry in enumerate(tasks_doc))
    return Dataset(platforms=platforms, tasks=tasks, seed=doc.get("seed"))


def load_dataset(source: Union[str, bytes, IO]) -> Dataset:
    """Load a dataset from a byte/text stream, raw text, or a file path."""
    if hasattr(source, "read"):
        return parse_dataset(source.read())
    if isinstance(source, bytes):
        return parse_dataset(source)
    with open(source, "r", encoding="utf-8") as f:
        return parse_dataset(f.read())


def _check_triangular(params: TriangularParams, record: str, name: str, violations: List[Violation]) -> None:
    if not (params.min <= params.mode <= params.max):
        violations.append(Violation(record, name, f"expected min <= mode <= max, got {_triangular_row(params)}"))
    elif params.min < 0:
        violations.append(Violation(record, name, "distribution must be non-negative"))


def validate_dataset(dataset: Dataset) -> List[Violation]:
    """Check every platform and task invariant; an empty list means the dataset is valid."""
    violations: List[Violation] = []
    n_platforms = dataset.n_platforms

    for index, platform in enumerate(dataset.platforms):
        record = f"platform {platform.id}"
        if platform.id != index:
            violations.append(Violation(record, "id", f"ids must be dense, expected {index}"))
        if platform.capacity_type1 <= 0 or platform.capacity_type2 <= 0:
            violations.append(Violation(record, "capacity", "capacities must be positive"))
        if platform.cost <= 0:
            violations.append(Violation(record, "cost", "cost must be positive"))

    for index, task in enumerate(dataset.tasks):
        record = f"task {task.id}"
        if task.id != index:
            violations.append(Violation(record, "id", f"ids must be dense, expected {index}"))

        if len(task.durations) != n_platforms:
            violations.append(Violation(record, "durations", f"expected {n_platforms} entries, got {len(task.durations)}"))
            continue
        if len(task.suitability) != len(task.requirements):
            violations.append(Violation(record, "suitability", "one suitability row per requirement is required"))
            continue
        if any(len(row) != n_platforms for row in task.suitability):
            violations.append(Violation(record, "suitability", f"rows must have {n_platforms} entries"))
            continue

        keys = [(req.cargo_type, req.subfunction_id) for req in task.requirements]
        if len(set(keys)) != len(keys):
            violations.append(Violation(record, "requirements", "duplicate (cargo_type, subfunction) entries"))

        for req, row in zip(task.requirements, task.suitability):
            label = f"requirement {req.cargo_type}.{req.subfunction_id}"
            if req.quantity < 0:
                violations.append(Violation(record, label, "quantity must be non-negative"))
            elif req.quantity > 0 and not any(row):
                violations.append(Violation(record, label, "no suitable platform"))

        suitable = set(task.suitable_platforms())
        for nu, duration in enumerate(task.durations):
            if duration < 0:
                violations.append(Violation(record, f"durations[{nu}]", "duration must be non-negative"))
            elif (duration > 0) != (nu in suitable):
                violations.append(Violation(
                    record, f"durations[{nu}]",
                    "positive duration required exactly for suitable platforms",
                ))

        _check_triangular(task.freq_dist, record, "freq_dist", violations)
        _check_triangular(task.dur_dist, record, "dur_dist", violations)
        if suitable and task.dur_dist.mode <= 0:
            violations.append(Violation(record, "dur_dist", "duration mode must be positive"))

    return violations
