"""Shared fixtures: synthetic airfoil shapes, a baseline set carrying the
canonical names, and a small catalog that contains the baselines."""

from __future__ import annotations

import numpy as np
import pytest

from foilmorph.dataset import AirfoilCatalog
from foilmorph.geometry import DEFAULT_F, station_x
from foilmorph.morphing import AIRDBM_BASELINE_NAMES, BaselineSet


def four_digit_foil(thickness: float, camber: float, F: int = DEFAULT_F) -> np.ndarray:
    """Synthetic single-valued airfoil with an open trailing edge.

    Thickness follows the classic four-digit polynomial (open-TE variant,
    so the trailing-edge gap is strictly positive and the section is
    always feasible); camber is a half-sine.
    """
    xs = station_x(F)
    half = F // 2
    yt = (
        5.0
        * thickness
        * (
            0.2969 * np.sqrt(xs)
            - 0.1260 * xs
            - 0.3516 * xs**2
            + 0.2843 * xs**3
            - 0.1015 * xs**4
        )
    )
    yc = camber * np.sin(np.pi * xs)
    y = np.empty(F + 1)
    y[: half + 1] = (yc + yt)[: half + 1]
    y[half:] = (yc - yt)[half:]
    y[half] = 0.0
    return y


def synthetic_baseline_shapes(F: int = DEFAULT_F) -> np.ndarray:
    """Twelve distinct feasible shapes, one per canonical baseline name."""
    return np.array(
        [
            four_digit_foil(0.06 + 0.012 * i, 0.008 * (i % 5) - 0.008, F)
            for i in range(12)
        ]
    )


@pytest.fixture(scope="session")
def baselines() -> BaselineSet:
    return BaselineSet(
        names=list(AIRDBM_BASELINE_NAMES), shapes=synthetic_baseline_shapes()
    )


@pytest.fixture(scope="session")
def catalog(baselines) -> AirfoilCatalog:
    """Forty-entry catalog whose first twelve rows are the baselines."""
    rng = np.random.default_rng(7)
    extra_names = [f"Synthetic Foil {i:02d}" for i in range(28)]
    extra = np.array(
        [
            four_digit_foil(
                0.05 + 0.2 * rng.random(), 0.03 * (rng.random() - 0.4)
            )
            for _ in extra_names
        ]
    )
    return AirfoilCatalog(
        names=list(baselines.names) + extra_names,
        vectors=np.vstack([baselines.shapes, extra]),
        F=DEFAULT_F,
        provenance="synthetic test corpus",
    )
