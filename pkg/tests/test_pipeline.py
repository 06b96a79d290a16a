"""Test suite for the pipeline stages, artifacts and CLI."""

import tempfile
from pathlib import Path

import numpy as np
import pandas as pd
import pytest
import structlog
from typer.testing import CliRunner

from fleetflow.cli import app
from fleetflow.core.config import RunConfig
from fleetflow.core.errors import ArtifactMissingError, ConfigError
from fleetflow.pipeline import ArtifactWriter, run_pipeline, run_stage, seed_tree, summarize
from fleetflow.pipeline.artifacts import (
    CAPABILITY_FILE,
    CATALOG_FILE,
    DATASET_FILE,
    FLEETS_FILE,
    FRONTS_FILE,
    GROWTH_FILE,
    HISTOGRAM_FILE,
    MANIFEST_FILE,
    SCORES_FILE,
    USAGE_FILE,
)
from fleetflow.pipeline.stages import load_dataset_artifact, load_scenarios


runner = CliRunner()

EXPECTED_ARTIFACTS = [
    DATASET_FILE,
    CATALOG_FILE,
    "scenarios/scenario_000.yaml",
    "scenarios/scenario_001.yaml",
    "scenarios/scenario_002.yaml",
    FRONTS_FILE,
    FLEETS_FILE,
    USAGE_FILE,
    SCORES_FILE,
    CAPABILITY_FILE,
    HISTOGRAM_FILE,
    GROWTH_FILE,
    MANIFEST_FILE,
]


def tiny_config(output_dir, seed=5, **sections):
    data = {
        "seed": seed,
        "generator": {"n_tasks": 6},
        "simulation": {"scenarios": 3, "horizon_days": 60},
        "optimizer": {"population_size": 8, "generations": 3},
        "runtime": {"output_dir": str(output_dir), "log_level": "WARNING"},
    }
    for section, values in sections.items():
        data.setdefault(section, {}).update(values)
    return RunConfig(**data)


@pytest.fixture(autouse=True)
def reset_logging():
    """The CLI binds log output to the runner's stream; restore defaults afterwards."""
    yield
    structlog.reset_defaults()


class TestArtifactWriter:
    """Test the artifact directory helpers."""

    def test_write_and_hash(self):
        with tempfile.TemporaryDirectory() as temp_dir:
            writer = ArtifactWriter(temp_dir)
            writer.write_text("scenarios/scenario_000.yaml", "a: 1\n")
            writer.write_frame("table.csv", pd.DataFrame({"x": [0.5, 1.0 / 3.0]}))

            assert writer.read_text("table.csv") == "x\n0.500000\n0.333333\n"
            assert writer.scenario_files() == ["scenarios/scenario_000.yaml"]
            assert sorted(writer.file_hashes()) == ["scenarios/scenario_000.yaml", "table.csv"]

    def test_clear_scenarios(self):
        with tempfile.TemporaryDirectory() as temp_dir:
            writer = ArtifactWriter(temp_dir)
            writer.write_text("scenarios/scenario_000.yaml", "a: 1\n")
            writer.write_text("scenarios/scenario_001.yaml", "a: 2\n")
            writer.write_text("table.csv", "x\n")

            assert writer.clear_scenarios() == 2
            assert writer.scenario_files() == []
            assert writer.read_text("table.csv") == "x\n"
            assert writer.clear_scenarios() == 0

    def test_missing_artifact(self):
        with tempfile.TemporaryDirectory() as temp_dir:
            writer = ArtifactWriter(temp_dir)

            with pytest.raises(ArtifactMissingError):
                writer.read_text(FLEETS_FILE)

    def test_seed_tree(self):
        config = tiny_config("unused", simulation={"experiment": "scaled"})
        tree = seed_tree(config)

        assert tree["master"] == 5
        assert [s["id"] for s in tree["scenarios"]] == [0, 1, 2]
        assert all("scale" in s for s in tree["scenarios"])
        assert tree == seed_tree(config)

        with pytest.raises(ConfigError):
            seed_tree(RunConfig())


class TestRunPipeline:
    """Test the chained stages."""

    def test_complete_artifact_set(self):
        with tempfile.TemporaryDirectory() as temp_dir:
            out = Path(temp_dir) / "run"
            results = run_pipeline(tiny_config(out))

            assert [r.name for r in results] == ["gen-dataset", "enumerate", "simulate", "optimize", "analyze", "growth"]
            for name in EXPECTED_ARTIFACTS:
                assert (out / name).exists(), name

            fronts = pd.read_csv(out / FRONTS_FILE)
            assert list(fronts.columns) == ["scenario_id", "individual_id", "rank", "monetary", "time", "genome", "fleet"]
            assert len(fronts) == 3 * 8
            assert (fronts.groupby("scenario_id")["rank"].min() == 0).all()

            fleets = pd.read_csv(out / FLEETS_FILE)
            assert list(fleets.columns) == ["scenario_id", "fleet_id", "cost"] + [f"P{k}" for k in range(1, 11)]
            assert fleets["fleet_id"].tolist() == list(range(len(fleets)))
            assert set(fleets["scenario_id"]) <= {0, 1, 2}

            scores = pd.read_csv(out / SCORES_FILE)
            assert list(scores.columns[:3]) == ["fleet_id", "scenario_id", "fleet_cost"]
            assert "score@0" in scores.columns and "score@0.05" in scores.columns
            assert ((scores.filter(like="score@") >= 0) & (scores.filter(like="score@") <= 1)).all().all()

            report = pd.read_csv(out / CAPABILITY_FILE)
            assert len(report) == len(fleets) * 3
            own = report.merge(fleets[["fleet_id", "scenario_id"]], on=["fleet_id", "scenario_id"])
            assert (own["classification"] == "robust").all()
            assert list(report.columns) == ["fleet_id", "scenario_id", "augmentation_cost", "additions", "classification"]
            additions = np.array([[int(v) for v in cell.split()] for cell in report["additions"]])
            unit_costs = np.array([p.cost for p in load_dataset_artifact(ArtifactWriter(out)).platforms])
            assert (additions >= 0).all()
            assert np.allclose(additions @ unit_costs, report["augmentation_cost"], atol=1e-5)
            assert (own["additions"].str.split().apply(lambda cell: all(v == "0" for v in cell))).all()

            summary = summarize(out)
            assert summary.n_fleets == len(fleets)
            assert summary.n_scenarios == 3
            assert summary.scores["mean"].is_monotonic_increasing
            assert summary.growth is not None
            assert summary.growth.nodes_per_level[0] == 1

    def test_rerun_is_reproducible(self):
        with tempfile.TemporaryDirectory() as temp_dir:
            first = Path(temp_dir) / "first"
            second = Path(temp_dir) / "second"
            run_pipeline(tiny_config(first))
            run_pipeline(tiny_config(second))

            manifest_one = ArtifactWriter(first).read_manifest()
            manifest_two = ArtifactWriter(second).read_manifest()

            assert manifest_one["files"] == manifest_two["files"]
            assert manifest_one["seeds"] == manifest_two["seeds"]
            assert set(manifest_one["files"]) == set(EXPECTED_ARTIFACTS) - {MANIFEST_FILE}

    def test_scaled_mode_records_scales(self):
        with tempfile.TemporaryDirectory() as temp_dir:
            out = Path(temp_dir) / "scaled"
            config = tiny_config(out, simulation={"experiment": "scaled"})
            run_stage("gen-dataset", config)
            run_stage("simulate", config)

            scales = ArtifactWriter(out).read_manifest()["scales"]
            assert sorted(scales) == [0, 1, 2]
            assert all(1.0 <= r <= 2.0 for r in scales.values())
            assert len(set(scales.values())) == 3

    def test_smaller_rerun_drops_stale_scenarios(self):
        with tempfile.TemporaryDirectory() as temp_dir:
            out = Path(temp_dir) / "rerun"
            run_stage("gen-dataset", tiny_config(out))
            run_stage("simulate", tiny_config(out, simulation={"scenarios": 5}))
            run_stage("simulate", tiny_config(out, simulation={"scenarios": 2}))

            writer = ArtifactWriter(out)
            assert writer.scenario_files() == ["scenarios/scenario_000.yaml", "scenarios/scenario_001.yaml"]
            assert [s.id for s in load_scenarios(writer)] == [0, 1]

    def test_stage_needs_its_inputs(self):
        with tempfile.TemporaryDirectory() as temp_dir:
            with pytest.raises(ArtifactMissingError):
                run_stage("optimize", tiny_config(Path(temp_dir) / "empty"))

    def test_seed_required(self):
        with tempfile.TemporaryDirectory() as temp_dir:
            with pytest.raises(ConfigError):
                run_pipeline(tiny_config(Path(temp_dir), seed=None))


MASTER_SEEDS = (11, 12, 13)


@pytest.fixture(scope="module")
def experiment_scores(tmp_path_factory):
    """Mean score per budget fraction for both experiment modes on a few master seeds."""
    means = {}
    for experiment in ("low-variability", "scaled"):
        for seed in MASTER_SEEDS:
            out = tmp_path_factory.mktemp(f"{experiment}-{seed}")
            config = tiny_config(
                out,
                seed=seed,
                generator={"n_tasks": 20},
                simulation={"scenarios": 20, "horizon_days": 365, "experiment": experiment},
                optimizer={"population_size": 100, "generations": 30},
            )
            for stage in ("gen-dataset", "enumerate", "simulate", "optimize", "analyze"):
                run_stage(stage, config)
            scores = pd.read_csv(out / SCORES_FILE).filter(like="score@")
            means[experiment, seed] = {float(name.split("@")[1]): float(scores[name].mean()) for name in scores.columns}
    structlog.reset_defaults()
    return means


class TestExperiments:
    """Desk-scale runs of the two experiment modes."""

    def test_low_variability_gains_from_a_small_budget(self, experiment_scores):
        for seed in MASTER_SEEDS:
            curve = experiment_scores["low-variability", seed]
            assert sorted(curve) == [0.0, 0.01, 0.02, 0.03, 0.04, 0.05]
            assert all(curve[0.0] <= curve[f] for f in curve)
            assert curve[0.05] > curve[0.0]

    def test_scaled_scenarios_are_harder_to_cover(self, experiment_scores):
        scaled = np.mean([experiment_scores["scaled", seed][0.05] for seed in MASTER_SEEDS])
        steady = np.mean([experiment_scores["low-variability", seed][0.05] for seed in MASTER_SEEDS])

        assert scaled < steady

    def test_scaled_curve_never_decreases(self, experiment_scores):
        for seed in MASTER_SEEDS:
            curve = experiment_scores["scaled", seed]
            ladder = [0.05, 0.15, 0.25, 0.35, 0.5]
            assert all(f in curve for f in ladder)
            values = [curve[f] for f in ladder]
            assert all(a <= b + 1e-12 for a, b in zip(values, values[1:]))


class TestCli:
    """Test the command-line surface."""

    def _config_file(self, temp_dir):
        path = Path(temp_dir) / "fleetflow.yaml"
        tiny_config(Path(temp_dir) / "out").save_to_file(str(path))
        return str(path)

    def test_run_and_report(self):
        with tempfile.TemporaryDirectory() as temp_dir:
            config_path = self._config_file(temp_dir)
            out = Path(temp_dir) / "out"

            result = runner.invoke(app, ["run", "--seed", "5", "-c", config_path, "-o", str(out)])
            assert result.exit_code == 0, result.output
            assert (out / MANIFEST_FILE).exists()

            result = runner.invoke(app, ["report", "-o", str(out)])
            assert result.exit_code == 0, result.output
            assert "robust" in result.output

    def test_stages_one_by_one(self):
        with tempfile.TemporaryDirectory() as temp_dir:
            config_path = self._config_file(temp_dir)
            out = str(Path(temp_dir) / "staged")

            for command in (["gen-dataset", "--tasks", "5"], ["enumerate"], ["simulate", "-y", "2"], ["optimize", "-g", "2"]):
                result = runner.invoke(app, command + ["-c", config_path, "-o", out])
                assert result.exit_code == 0, result.output

            result = runner.invoke(app, ["analyze", "-c", config_path, "-o", out, "--ladder", "0.01,0.1", "--bins", "5"])
            assert result.exit_code == 0, result.output
            histogram = pd.read_csv(Path(out) / HISTOGRAM_FILE)
            assert sorted(histogram["fraction"].unique().tolist()) == [0.0, 0.01, 0.1]
            assert len(histogram) == 15

            result = runner.invoke(app, ["growth", "-c", config_path, "-o", out, "--fleet-id", "0"])
            assert result.exit_code == 0, result.output

    def test_report_on_empty_directory(self):
        with tempfile.TemporaryDirectory() as temp_dir:
            result = runner.invoke(app, ["report", "-o", str(Path(temp_dir) / "nothing")])

            assert result.exit_code == 1
            assert not (Path(temp_dir) / "nothing").exists()

    def test_invalid_configuration(self):
        with tempfile.TemporaryDirectory() as temp_dir:
            config_path = self._config_file(temp_dir)

            result = runner.invoke(app, ["run", "--seed", "5", "-c", config_path, "--mutation-rate", "1.5"])
            assert result.exit_code == 2

            result = runner.invoke(app, ["run", "--seed", "5", "-c", str(Path(temp_dir) / "missing.yaml")])
            assert result.exit_code == 2

    def test_run_requires_seed(self):
        result = runner.invoke(app, ["run"])

        assert result.exit_code != 0

    def test_init(self):
        with tempfile.TemporaryDirectory() as temp_dir:
            path = str(Path(temp_dir) / "new.yaml")

            assert runner.invoke(app, ["init", "-c", path]).exit_code == 0
            assert RunConfig.from_file(path) == RunConfig()
            assert runner.invoke(app, ["init", "-c", path]).exit_code == 1


if __name__ == "__main__":
    pytest.main([__file__])
