"""Forward search, its evaluation-count formula, and the rate experiments."""

from __future__ import annotations

import numpy as np
import pytest

from foilmorph.baseline_select import (
    forward_search,
    forward_search_eval_count,
    random_baseline_experiment,
    reconstruction_rate_curve,
)
from foilmorph.dataset import AirfoilCatalog
from foilmorph.errors import ConfigError, DomainError
from foilmorph.evolution import GAConfig
from foilmorph.reconstruct import default_config

from .conftest import four_digit_foil


def tiny_catalog(m: int = 8, F: int = 40) -> AirfoilCatalog:
    shapes = np.array(
        [four_digit_foil(0.05 + 0.02 * i, 0.005 * (i % 3), F) for i in range(m)]
    )
    return AirfoilCatalog(
        names=[f"tiny {i}" for i in range(m)], vectors=shapes, F=F
    )


def tiny_config(seed=0) -> GAConfig:
    config = default_config(seed=seed)
    config.population = 20
    config.max_generations = 10
    return config


class TestEvalCountFormula:
    def test_paper_scale_value(self):
        assert forward_search_eval_count(1644, 10) == 13_108

    def test_small_cases_by_direct_counting(self):
        # step k (building a set of size k from k-1 members) reconstructs
        # the m - (k - 1) non-members, for k = 3..n
        for m in (5, 9, 14):
            for n in range(2, m + 1):
                direct = sum(m - (k - 1) for k in range(3, n + 1))
                assert forward_search_eval_count(m, n) == direct

    def test_n_two_costs_nothing(self):
        assert forward_search_eval_count(100, 2) == 0

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            forward_search_eval_count(10, 1)
        with pytest.raises(DomainError):
            forward_search_eval_count(10, 11)


class TestForwardSearch:
    def test_result_shape_and_count(self):
        catalog = tiny_catalog()
        result = forward_search(catalog, 4, config=tiny_config())
        assert result.baselines.n == 4
        assert len(set(result.baselines.names)) == 4
        total = sum(step.evaluations for step in result.trace)
        assert total == forward_search_eval_count(catalog.m, 4)

    def test_first_pick_is_medoid(self):
        catalog = tiny_catalog()
        from foilmorph.geometry import similarity

        sums = [
            sum(similarity(catalog.vectors[i], v) for v in catalog.vectors)
            for i in range(catalog.m)
        ]
        result = forward_search(catalog, 2, config=tiny_config())
        assert result.baselines.names[0] == catalog.names[int(np.argmin(sums))]

    def test_deterministic(self):
        catalog = tiny_catalog()
        a = forward_search(catalog, 3, config=tiny_config(seed=1))
        b = forward_search(catalog, 3, config=tiny_config(seed=1))
        assert a.baselines.names == b.baselines.names

    def test_resume_reuses_step_files(self, tmp_path):
        catalog = tiny_catalog()
        first = forward_search(
            catalog, 4, config=tiny_config(), resume_dir=tmp_path
        )
        assert any(tmp_path.glob("step_*.json"))
        second = forward_search(
            catalog, 4, config=tiny_config(), resume_dir=tmp_path
        )
        assert first.baselines.names == second.baselines.names

    def test_trace_csv_format(self):
        catalog = tiny_catalog()
        result = forward_search(catalog, 3, config=tiny_config())
        lines = result.trace_csv().strip().splitlines()
        assert lines[0].startswith("step,added,")
        assert len(lines) == 1 + len(result.trace)

    def test_n_out_of_range(self):
        with pytest.raises(ConfigError):
            forward_search(tiny_catalog(), 1, config=tiny_config())
        with pytest.raises(ConfigError):
            forward_search(tiny_catalog(m=5), 6, config=tiny_config())


class TestRateExperiments:
    def test_rate_curve_sizes_and_range(self):
        catalog = tiny_catalog(m=6)
        full = forward_search(catalog, 3, config=tiny_config()).baselines
        curve = reconstruction_rate_curve(
            catalog, full, threshold=0.5, sizes=[2, 3], config=tiny_config()
        )
        assert [k for k, _ in curve] == [2, 3]
        assert all(0.0 <= r <= 1.0 for _, r in curve)

    def test_rate_curve_rejects_bad_sizes(self):
        catalog = tiny_catalog(m=6)
        full = forward_search(catalog, 3, config=tiny_config()).baselines
        with pytest.raises(ConfigError):
            reconstruction_rate_curve(catalog, full, sizes=[5])

    def test_random_experiment_rates(self):
        catalog = tiny_catalog(m=6)
        rates = random_baseline_experiment(
            catalog, 3, trials=2, threshold=0.5, seed=1, config=tiny_config()
        )
        assert len(rates) == 2
        assert all(0.0 <= r <= 1.0 for r in rates)

    def test_random_experiment_n_too_large(self):
        with pytest.raises(ConfigError):
            random_baseline_experiment(tiny_catalog(m=4), 5, trials=1)
