"""Weighted baseline blending with normalization and feasibility repair."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import _kernels
from .dataset import AirfoilCatalog
from .errors import DegenerateNormalization, DimensionMismatch, MissingBaseline
from .geometry import (
    DEFAULT_REPAIR_EPSILON,
    DEFAULT_SMOOTH_HALFWIDTH,
    as_selig_vector,
    repair_self_intersection,
)

DEGENERATE_WEIGHT_SUM = 1e-9

# Ordered baseline names for the 12-shape morphing set; truncating to the
# first k entries gives the optimal k-shape subset by construction of the
# forward search that produced the ordering.
AIRDBM_BASELINE_NAMES: tuple[str, ...] = (
    "Eppler E195",
    "Wortman FX 79-W-660A",
    "Gottingen 531",
    "Eppler 864 Strut",
    "Roncz R1145MSM VariEze Canard Main",
    "UIUC Chen",
    "Griffith 30% Suction",
    "Selig S9104",
    "Althaus AH 93-W-480B",
    "Althaus AH 81-K-144 W-F KLAPPE",
    "Eppler E664 (Extended)",
    "Saratov R/C Sailplane",
)


@dataclass
class BaselineSet:
    """Ordered baseline shapes; order is significant (search order)."""

    names: list[str]
    shapes: np.ndarray  # (n, F+1)

    def __post_init__(self):
        self.shapes = np.ascontiguousarray(self.shapes, dtype=np.float64)
        if len(self.names) != len(set(self.names)):
            raise ValueError("baseline names must be unique")
        if self.shapes.ndim != 2 or self.shapes.shape[0] != len(self.names):
            raise ValueError("one shape row required per name")
        self.shapes.setflags(write=False)

    @property
    def n(self) -> int:
        return len(self.names)

    @property
    def F(self) -> int:
        return self.shapes.shape[1] - 1

    def truncated(self, k: int) -> "BaselineSet":
        if not 1 <= k <= self.n:
            raise ValueError(f"k={k} outside [1, {self.n}]")
        return BaselineSet(names=self.names[:k], shapes=self.shapes[:k].copy())

    def to_json(self) -> str:
        return json.dumps(
            {"F": self.F, "names": self.names, "shapes": self.shapes.tolist()}
        )

    @classmethod
    def from_json(cls, text: str) -> "BaselineSet":
        data = json.loads(text)
        shapes = np.asarray(data["shapes"], dtype=np.float64)
        if shapes.shape != (len(data["names"]), data["F"] + 1):
            raise ValueError("baseline JSON shape block inconsistent with F/names")
        return cls(names=list(data["names"]), shapes=shapes)

    def save(self, path) -> None:
        Path(path).write_text(self.to_json())

    @classmethod
    def load(cls, path) -> "BaselineSet":
        return cls.from_json(Path(path).read_text())


def validate_weights(w, n: int) -> np.ndarray:
    """Check a weight vector: length n, entries in [-1, 1], sum away from 0.

    Raises:
        DimensionMismatch: wrong length.
        ValueError: an entry outside [-1, 1].
        DegenerateNormalization: |sum w| <= 1e-9.
    """
    arr = np.asarray(w, dtype=np.float64)
    if arr.shape != (n,):
        raise DimensionMismatch(f"expected {n} weights, got shape {arr.shape}")
    if np.any(np.abs(arr) > 1.0 + 1e-12):
        raise ValueError("weights must lie in [-1, 1]")
    if abs(arr.sum()) <= DEGENERATE_WEIGHT_SUM:
        raise DegenerateNormalization(f"sum of weights {arr.sum():.3e} is ~0")
    return arr


def blend(baselines: BaselineSet, w) -> np.ndarray:
    """Pre-repair weighted blend (1/sum w) * sum_i w_i * B_i."""
    arr = validate_weights(w, baselines.n)
    return _kernels.blend(baselines.shapes, arr)


def morph(
    baselines: BaselineSet,
    w,
    epsilon: float = DEFAULT_REPAIR_EPSILON,
    smooth_halfwidth: int = DEFAULT_SMOOTH_HALFWIDTH,
) -> np.ndarray:
    """Blend then repair: the returned shape always passes the detector.

    Raises:
        DegenerateNormalization: sum of weights ~0.
        InfeasibleShape: the blend could not be repaired.
    """
    return repair_self_intersection(
        blend(baselines, w), epsilon=epsilon, smooth_halfwidth=smooth_halfwidth
    )


def _normalize_name(name: str) -> str:
    return " ".join(name.casefold().split())


def load_airdbm_baselines(catalog: AirfoilCatalog) -> BaselineSet:
    """Pull the canonical 12 baselines out of a catalog, in set order.

    Lookup is exact first, then case/whitespace-insensitive.

    Raises:
        MissingBaseline: listing every absent name.
    """
    folded = {_normalize_name(n): n for n in catalog.names}
    rows = []
    missing = []
    for name in AIRDBM_BASELINE_NAMES:
        if name in catalog:
            rows.append(catalog.get(name))
        elif _normalize_name(name) in folded:
            rows.append(catalog.get(folded[_normalize_name(name)]))
        else:
            missing.append(name)
    if missing:
        raise MissingBaseline(missing)
    return BaselineSet(
        names=list(AIRDBM_BASELINE_NAMES),
        shapes=np.array([as_selig_vector(r) for r in rows]),
    )
