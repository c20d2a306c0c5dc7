"""Compiled and pure kernel backends must agree to round-off."""

from __future__ import annotations

import subprocess
import sys

import numpy as np
import pytest

from foilmorph._kernels import _pure

_core = pytest.importorskip(
    "foilmorph._kernels._core", reason="compiled extension not built"
)


@pytest.mark.parametrize("seed", range(20))
def test_similarity_matches(seed):
    rng = np.random.default_rng(seed)
    a = rng.normal(0.0, 0.1, 201)
    b = rng.normal(0.0, 0.1, 201)
    assert _core.similarity(a, b) == pytest.approx(_pure.similarity(a, b), abs=1e-15)


@pytest.mark.parametrize("seed", range(50))
def test_detector_matches(seed):
    rng = np.random.default_rng(seed)
    y = rng.normal(0.0, 0.05, 41)
    y[20] = 0.0
    assert _core.detect_self_intersection(y) == _pure.detect_self_intersection(y)


def test_detector_zero_cases_match():
    flat = np.zeros(21)
    assert _core.detect_self_intersection(flat) == _pure.detect_self_intersection(flat)
    tiny = np.zeros(3)
    assert _core.detect_self_intersection(tiny) == _pure.detect_self_intersection(tiny)


@pytest.mark.parametrize("seed", range(20))
def test_blend_matches(seed):
    rng = np.random.default_rng(seed)
    baselines = rng.normal(0.0, 0.1, (12, 201))
    w = rng.uniform(-1.0, 1.0, 12)
    w[0] = 1.0
    np.testing.assert_allclose(
        _core.blend(baselines, w), _pure.blend(baselines, w), atol=1e-15
    )


def test_blend_one_hot_bit_exact_both_backends():
    rng = np.random.default_rng(3)
    baselines = rng.normal(0.0, 0.1, (12, 201))
    for i in range(12):
        w = np.zeros(12)
        w[i] = 0.73
        assert np.array_equal(_core.blend(baselines, w), baselines[i])
        assert np.array_equal(_pure.blend(baselines, w), baselines[i])


def test_env_var_forces_pure_backend():
    out = subprocess.run(
        [
            sys.executable,
            "-c",
            "import foilmorph; print(foilmorph.KERNEL_IMPLEMENTATION)",
        ],
        capture_output=True,
        text=True,
        env={"FOILMORPH_PURE": "1", "PATH": "/usr/bin:/bin"},
        check=True,
    )
    assert out.stdout.strip() == "pure"
