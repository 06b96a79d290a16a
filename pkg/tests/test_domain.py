"""Test suite for the platform/task domain: fleets, generation and dataset files."""

import io
import tempfile
from pathlib import Path

import numpy as np
import pytest

from fleetflow.core.config import GeneratorConfig
from fleetflow.core.errors import ConfigError, DatasetParseError, DimensionMismatchError
from fleetflow.domain import (
    REFERENCE_PLATFORMS,
    FleetVector,
    TriangularParams,
    dataset_hash,
    dumps_dataset,
    fleet_contains,
    fleet_cost,
    generate_dataset,
    load_dataset,
    parse_dataset,
    reference_mission,
    reference_platforms,
    save_dataset,
    validate_dataset,
)
from fleetflow.ptma import build_catalog

from .helpers import fleet, make_dataset, make_platforms, make_task


class TestReferenceTable:
    """Test the shipped reference platforms and mission."""

    def test_ten_platforms(self):
        platforms = reference_platforms()

        assert len(platforms) == 10
        assert platforms[3].cost == 20.2813
        assert platforms[8].capacity_type1 == 200
        assert platforms[8].capacity_type2 == 21165

    def test_reference_mission_is_valid(self):
        dataset = make_dataset(reference_platforms(), [reference_mission()])

        assert validate_dataset(dataset) == []
        assert reference_mission().suitable_platforms() == [0, 1, 4, 8]


class TestFleetCost:
    """Test fleet acquisition cost."""

    def test_examples(self):
        platforms = reference_platforms()

        assert fleet_cost(FleetVector.zeros(10), platforms) == 0.0
        assert fleet_cost(FleetVector.from_mapping({0: 1}, 10), platforms) == pytest.approx(0.9199)
        assert fleet_cost(FleetVector.from_mapping({0: 2, 8: 1}, 10), platforms) == pytest.approx(5.2884)

    def test_linear_and_strictly_monotone(self):
        platforms = reference_platforms()
        rng = np.random.default_rng(3)
        for _ in range(200):
            a = FleetVector.from_array(rng.integers(0, 5, size=10))
            b = FleetVector.from_array(rng.integers(0, 5, size=10))
            assert fleet_cost(a + b, platforms) == pytest.approx(fleet_cost(a, platforms) + fleet_cost(b, platforms))
            if not b.is_zero():
                assert fleet_cost(a + b, platforms) > fleet_cost(a, platforms)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            fleet_cost(fleet(1, 2), reference_platforms())

    def test_negative_counts_rejected(self):
        with pytest.raises(ValueError):
            fleet(1, -1)


class TestFleetContains:
    """Test subfleet containment."""

    def test_examples(self):
        assert fleet_contains(fleet(2, 1, 0), fleet(1, 0, 0))
        assert not fleet_contains(fleet(2, 1, 0), fleet(0, 0, 1))
        assert fleet_contains(fleet(2, 1, 0), fleet(2, 1, 0))

    def test_partial_order(self):
        rng = np.random.default_rng(11)
        for _ in range(500):
            a, b, c = (FleetVector.from_array(rng.integers(0, 3, size=4)) for _ in range(3))
            assert fleet_contains(a, a)
            if fleet_contains(a, b) and fleet_contains(b, a):
                assert a == b
            if fleet_contains(a, b) and fleet_contains(b, c):
                assert fleet_contains(a, c)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            fleet_contains(fleet(1, 2), fleet(1, 2, 3))


class TestGenerateDataset:
    """Test the synthetic dataset generator."""

    def test_deterministic(self):
        config = GeneratorConfig(n_tasks=15)
        first = generate_dataset(config, seed=7)
        second = generate_dataset(config, seed=7)

        assert first == second
        assert dataset_hash(first) == dataset_hash(second)
        assert dataset_hash(generate_dataset(config, seed=8)) != dataset_hash(first)

    def test_embeds_reference_table(self):
        dataset = generate_dataset(GeneratorConfig(n_tasks=3), seed=1)
        rows = [(p.capacity_type1, p.capacity_type2, p.cost) for p in dataset.platforms]

        assert rows == [tuple(float(v) for v in row) for row in REFERENCE_PLATFORMS]

    def test_extra_platforms_are_drawn(self):
        dataset = generate_dataset(GeneratorConfig(n_tasks=3, n_platforms=12), seed=1)

        assert dataset.n_platforms == 12
        assert [p.id for p in dataset.platforms] == list(range(12))
        assert validate_dataset(dataset) == []

    def test_minimal_instance(self):
        config = GeneratorConfig(
            n_tasks=1,
            cargo_types_range=(1, 1),
            subfunctions_range=(1, 1),
            max_platforms_per_task=1,
        )
        dataset = generate_dataset(config, seed=5)
        durations = dataset.duration_matrix()

        assert durations.shape == (1, 10)
        assert int((durations > 0).sum()) == 1
        assert len(dataset.tasks[0].requirements) == 1

    def test_generated_datasets_are_valid_and_servable(self):
        for seed in range(2):
            dataset = generate_dataset(GeneratorConfig(n_tasks=15), seed=seed)
            assert validate_dataset(dataset) == []
            catalog = build_catalog(dataset)
            assert all(n >= 1 for n in catalog.option_counts)

    def test_candidate_pool_limit(self):
        dataset = generate_dataset(GeneratorConfig(n_tasks=40, max_platforms_per_task=2), seed=2)

        assert all(len(task.suitable_platforms()) <= 2 for task in dataset.tasks)

    def test_zero_suitability_probability_rejected(self):
        with pytest.raises(ConfigError):
            generate_dataset(GeneratorConfig(suitability_probability=0.0), seed=0)


class TestDatasetFiles:
    """Test dataset serialization and validation."""

    def test_round_trip(self):
        dataset = generate_dataset(GeneratorConfig(n_tasks=10), seed=4)
        text = dumps_dataset(dataset)

        assert parse_dataset(text) == dataset
        assert dumps_dataset(parse_dataset(text)) == text

    def test_load_from_streams_and_paths(self):
        dataset = make_dataset(reference_platforms(), [reference_mission()], seed=1)

        assert load_dataset(io.BytesIO(dumps_dataset(dataset).encode("utf-8"))) == dataset

        with tempfile.TemporaryDirectory() as temp_dir:
            path = Path(temp_dir) / "dataset.yaml"
            save_dataset(dataset, str(path))
            loaded = load_dataset(str(path))

        assert loaded.platforms[3].cost == 20.2813
        assert loaded.n_platforms == 10

    def test_inverted_triangular_is_one_violation(self):
        task = make_task(0, [(1, 1, 5.0)], [[1, 0]])
        task = task.model_copy(update={"freq_dist": TriangularParams(min=3.0, mode=2.0, max=1.0)})
        violations = validate_dataset(make_dataset(make_platforms([1.0, 2.0]), [task]))

        assert len(violations) == 1
        assert violations[0].record == "task 0"
        assert violations[0].field == "freq_dist"

    def test_duration_must_match_suitability(self):
        task = make_task(0, [(1, 1, 5.0)], [[1, 0]], durations=[1.0, 2.0])
        violations = validate_dataset(make_dataset(make_platforms([1.0, 2.0]), [task]))

        assert [v.field for v in violations] == ["durations[1]"]

    def test_unservable_requirement(self):
        task = make_task(0, [(2, 1, 5.0), (2, 2, 1.0)], [[1, 0], [0, 0]])
        violations = validate_dataset(make_dataset(make_platforms([1.0, 2.0]), [task]))

        assert any("no suitable platform" in v.message for v in violations)

    def test_parse_errors_name_the_record(self):
        with pytest.raises(DatasetParseError) as excinfo:
            parse_dataset("schema_version: 2\n")
        assert excinfo.value.record == "header"

        dataset = make_dataset(make_platforms([1.0]), [make_task(0, [(1, 1, 1.0)], [[1]])])
        broken = dumps_dataset(dataset).replace("freq: [1.0, 1.0, 1.0]", "freq: [1.0, 1.0]")
        with pytest.raises(DatasetParseError) as excinfo:
            parse_dataset(broken)
        assert excinfo.value.record == "task 0"


if __name__ == "__main__":
    pytest.main([__file__])
