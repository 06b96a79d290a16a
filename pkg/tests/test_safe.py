"""Test suite for scenario sampling and platform usage."""

import numpy as np
import pytest

from fleetflow.core.config import DurationMode, GeneratorConfig
from fleetflow.core.errors import ConfigError, MissingAssignmentError
from fleetflow.core.seeds import derive_rng
from fleetflow.domain import TriangularParams, generate_dataset
from fleetflow.safe import (
    Scenario,
    TaskInstance,
    UsageProfile,
    average_usage,
    dumps_scenario,
    instance_tensor,
    parse_scenario,
    sample_scenario,
    scale_frequencies,
    scenario_timeline_length,
    simulate_usage,
    stochastic_round,
    timeline_length,
    usage_profile,
    usage_stats_frame,
)

from .helpers import make_dataset, make_platforms, make_task


def single_task_dataset(freq=1.0, duration=5.0):
    task = make_task(0, [(1, 1, 5.0)], [[1]], durations=[duration], freq=freq, dur=duration)
    return make_dataset(make_platforms([2.0]), [task])


class TestStochasticRound:
    """Test stochastic rounding of frequencies."""

    def test_examples(self):
        assert stochastic_round(2.3, 0.2) == 3
        assert stochastic_round(2.3, 0.5) == 2
        assert stochastic_round(3.0, 0.0) == 3
        assert stochastic_round(3.0, 0.99) == 3

    def test_unbiased(self):
        rng = np.random.default_rng(5)
        draws = [stochastic_round(2.3, r) for r in rng.random(100000)]

        assert np.mean(draws) == pytest.approx(2.3, abs=0.01)

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            stochastic_round(-0.5, 0.1)


class TestSampleScenario:
    """Test scenario sampling."""

    def test_degenerate_distributions(self):
        tasks = [
            make_task(0, [(1, 1, 5.0)], [[1, 0]], durations=[2.0, 0.0], freq=3.0, dur=2.0),
            make_task(1, [(1, 1, 5.0)], [[0, 1]], durations=[0.0, 4.0], freq=0.0, dur=4.0),
        ]
        dataset = make_dataset(make_platforms([1.0, 1.0]), tasks)
        scenario = sample_scenario(dataset, 365, np.random.default_rng(0))

        assert scenario.instance_counts(2).tolist() == [3, 0]
        assert all(i.duration == 2.0 for i in scenario.instances)
        assert all(0 <= i.start <= 365 for i in scenario.instances)

    def test_deterministic(self):
        dataset = generate_dataset(GeneratorConfig(n_tasks=20), seed=3)
        first = sample_scenario(dataset, 365, derive_rng(3, "scenario", 0))
        second = sample_scenario(dataset, 365, derive_rng(3, "scenario", 0))

        assert first == second
        assert first != sample_scenario(dataset, 365, derive_rng(3, "scenario", 1))

    def test_mean_count_matches_distribution(self):
        task = make_task(0, [(1, 1, 5.0)], [[1]], durations=[1.0])
        task = task.model_copy(update={"freq_dist": TriangularParams(min=1.0, mode=2.0, max=4.0)})
        dataset = make_dataset(make_platforms([1.0]), [task])
        rng = np.random.default_rng(17)
        counts = [len(sample_scenario(dataset, 30, rng).instances) for _ in range(400)]

        assert np.mean(counts) == pytest.approx(7.0 / 3.0, abs=0.15)

    def test_invalid_horizon(self):
        with pytest.raises(ConfigError):
            sample_scenario(single_task_dataset(), 0, np.random.default_rng(0))

    def test_file_round_trip(self):
        dataset = generate_dataset(GeneratorConfig(n_tasks=5), seed=9)
        scenario = sample_scenario(dataset, 365, np.random.default_rng(9), scenario_id=4, seed=9, scale=1.5)

        assert parse_scenario(dumps_scenario(scenario)) == scenario


class TestUsageProfile:
    """Test per-day platform usage."""

    def test_empty_scenario(self):
        dataset = single_task_dataset()
        scenario = Scenario(id=0, instances=(), horizon=30)
        profile = usage_profile(scenario, [[2]], dataset)

        assert not profile.usage.any()

    def test_single_instance(self):
        dataset = single_task_dataset()
        scenario = Scenario(id=0, instances=(TaskInstance(task_id=0, start=10, duration=5.0),), horizon=30)
        profile = usage_profile(scenario, [[2]], dataset)

        expected = np.zeros(timeline_length(dataset, 30))
        expected[10:15] = 2.0
        assert profile.usage.shape == (1, 37)
        assert np.array_equal(profile.usage[0], expected)

    def test_overlapping_instances(self):
        dataset = single_task_dataset()
        scenario = Scenario(
            id=0,
            instances=(
                TaskInstance(task_id=0, start=10, duration=5.0),
                TaskInstance(task_id=0, start=12, duration=5.0),
            ),
            horizon=30,
        )
        usage = usage_profile(scenario, [[2]], dataset).usage[0]

        assert usage[10:12].tolist() == [2.0, 2.0]
        assert usage[12:15].tolist() == [4.0, 4.0, 4.0]
        assert usage[15:17].tolist() == [2.0, 2.0]

    def test_fractional_final_day(self):
        dataset = single_task_dataset(duration=2.5)
        scenario = Scenario(id=0, instances=(TaskInstance(task_id=0, start=0, duration=2.5),), horizon=10)
        profile = usage_profile(scenario, [[3]], dataset)

        assert profile.usage[0, :3].tolist() == [3.0, 3.0, 1.5]
        assert profile.total()[0] == pytest.approx(7.5)

        occupancy = instance_tensor(scenario, dataset, fractional=False)
        assert occupancy[0, 0, :3].tolist() == [1.0, 1.0, 1.0]

    def test_baseline_duration_mode(self):
        dataset = single_task_dataset(duration=4.0)
        scenario = Scenario(id=0, instances=(TaskInstance(task_id=0, start=0, duration=2.0),), horizon=10)

        scaled = usage_profile(scenario, [[1]], dataset, DurationMode.SCALED)
        baseline = usage_profile(scenario, [[1]], dataset, DurationMode.BASELINE)

        assert scaled.total()[0] == pytest.approx(2.0)
        assert baseline.total()[0] == pytest.approx(4.0)

    def test_integral_matches_committed_days(self):
        dataset = generate_dataset(GeneratorConfig(n_tasks=10), seed=6)
        rng = np.random.default_rng(6)
        for _ in range(100):
            scenario = sample_scenario(dataset, 365, rng)
            P = rng.integers(0, 3, size=(dataset.n_tasks, dataset.n_platforms))
            profile = usage_profile(scenario, P, dataset)

            committed = np.zeros(dataset.n_platforms)
            for instance in scenario.instances:
                task = dataset.tasks[instance.task_id]
                committed += P[instance.task_id] * np.asarray(task.durations) * instance.duration / task.dur_dist.mode
            assert np.allclose(profile.total(), committed)

    def test_instances_beyond_the_distribution_keep_their_work(self):
        dataset = single_task_dataset(duration=1.0)
        scenario = Scenario(
            id=0,
            instances=(
                TaskInstance(task_id=0, start=10, duration=50.0),
                TaskInstance(task_id=0, start=10, duration=2.5),
            ),
            horizon=10,
        )
        profile = usage_profile(scenario, [[3]], dataset)

        assert scenario_timeline_length(scenario, dataset) > timeline_length(dataset, 10)
        assert profile.total()[0] == pytest.approx(3 * (50.0 + 2.5))
        assert profile.usage[0, 59] == 3.0
        assert profile.usage[0, 60:].sum() == 0.0

    def test_negative_start_rejected(self):
        dataset = single_task_dataset()
        scenario = Scenario(id=0, instances=(TaskInstance(task_id=0, start=-1, duration=1.0),), horizon=10)

        with pytest.raises(ValueError):
            usage_profile(scenario, [[1]], dataset)

    def test_missing_assignment_row(self):
        tasks = [make_task(0, [(1, 1, 1.0)], [[1]]), make_task(1, [(1, 1, 1.0)], [[1]])]
        dataset = make_dataset(make_platforms([1.0]), tasks)
        scenario = Scenario(id=0, instances=(TaskInstance(task_id=1, start=0, duration=1.0),), horizon=10)

        with pytest.raises(MissingAssignmentError) as excinfo:
            usage_profile(scenario, [[1]], dataset)
        assert excinfo.value.task_id == 1


class TestAverageUsage:
    """Test the Monte-Carlo average over iterations."""

    def test_single_profile(self):
        profile = UsageProfile(usage=np.array([[1.0, 3.0, 0.0]]), horizon=3)
        stats = average_usage([profile])

        assert np.array_equal(stats.mean, profile.usage)
        assert not stats.std.any()
        assert stats.iterations == 1

    def test_two_profiles(self):
        stats = average_usage([
            UsageProfile(usage=np.array([[0.0]]), horizon=1),
            UsageProfile(usage=np.array([[2.0]]), horizon=1),
        ])

        assert stats.mean[0, 0] == 1.0
        assert stats.std[0, 0] == 1.0

    def test_rejects_empty_and_mismatched_platforms(self):
        with pytest.raises(ValueError):
            average_usage([])

        with pytest.raises(ValueError):
            average_usage([
                UsageProfile(usage=np.zeros((1, 2)), horizon=1),
                UsageProfile(usage=np.zeros((2, 2)), horizon=1),
            ])

    def test_shorter_timelines_are_padded(self):
        stats = average_usage([
            UsageProfile(usage=np.array([[2.0, 2.0]]), horizon=2),
            UsageProfile(usage=np.array([[0.0, 0.0, 4.0]]), horizon=2),
        ])

        assert stats.mean.tolist() == [[1.0, 1.0, 2.0]]

    def test_simulate_usage(self):
        dataset = single_task_dataset(freq=1.0, duration=1.0)
        stats = simulate_usage(dataset, [[1]], horizon=20, iterations=5, master_seed=11)

        assert stats.iterations == 5
        assert stats.time_average_mean[0] == pytest.approx(1.0 / 20.0)
        assert stats.time_average_std[0] == pytest.approx(0.0)
        assert stats.mean.sum() == pytest.approx(1.0)

        frame = usage_stats_frame(stats)
        assert list(frame.columns) == ["platform", "day", "mean", "std"]
        assert len(frame) == stats.mean.size


class TestScaleFrequencies:
    """Test the frequency multiplier used by the scaled experiment."""

    def test_identity_and_doubling(self):
        task = make_task(0, [(1, 1, 5.0)], [[1]])
        task = task.model_copy(update={"freq_dist": TriangularParams.around(2.3)})
        dataset = make_dataset(make_platforms([1.0]), [task])

        assert scale_frequencies(dataset, 1.0) == dataset
        assert scale_frequencies(dataset, 2.0).tasks[0].freq_dist.mode == pytest.approx(4.6)
        assert scale_frequencies(dataset, 2.0).tasks[0].dur_dist == task.dur_dist

    def test_out_of_range(self):
        with pytest.raises(ConfigError):
            scale_frequencies(single_task_dataset(), 0.5)

        with pytest.raises(ConfigError):
            scale_frequencies(single_task_dataset(), 2.5)


if __name__ == "__main__":
    pytest.main([__file__])
