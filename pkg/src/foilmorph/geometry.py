"""Shape vector type, similarity measure, and self-intersection handling.

An airfoil shape is held as a length F+1 float vector of y-values sampled
at stations x(s_j) = |1 - s_j|, s_j = 2j/F, traversed from the upper
trailing edge over the leading edge to the lower trailing edge. F must be
even so the leading edge falls exactly on station F/2.
"""

from __future__ import annotations

import io

import numpy as np

from . import _kernels
from .errors import DimensionMismatch, InfeasibleShape

DEFAULT_F = 200
DEFAULT_REPAIR_EPSILON = 1e-3
DEFAULT_SMOOTH_HALFWIDTH = 3


def as_selig_vector(y, F: int | None = None) -> np.ndarray:
    """Validate and return a contiguous float64 shape vector.

    Raises:
        ValueError: odd F, too few stations, or non-finite entries.
        DimensionMismatch: length disagrees with an explicitly given F.
    """
    arr = np.ascontiguousarray(y, dtype=np.float64)
    if arr.ndim != 1 or arr.shape[0] < 3:
        raise ValueError(f"shape vector must be 1-D with >= 3 stations, got {arr.shape}")
    if (arr.shape[0] - 1) % 2 != 0:
        raise ValueError(f"station count F={arr.shape[0] - 1} must be even")
    if F is not None and arr.shape[0] != F + 1:
        raise DimensionMismatch(f"expected F={F}, got F={arr.shape[0] - 1}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("shape vector contains non-finite entries")
    return arr


def stations(F: int) -> np.ndarray:
    """Parameter values s_j = 2j/F for j = 0..F."""
    return 2.0 * np.arange(F + 1) / F


def station_x(F: int) -> np.ndarray:
    """Chordwise x at each station: |1 - s_j|."""
    return np.abs(1.0 - stations(F))


def similarity(a, b) -> float:
    """Shape similarity S': (2/F) * sum_j |a_j - b_j|.

    Symmetric, nonnegative, zero iff the vectors are identical; equals the
    trapezoid-rule integral of |y1 - y2| over s in [0, 2] with the two
    endpoint terms counted at full weight.

    Raises:
        DimensionMismatch: vectors sampled at different station counts.
    """
    av = as_selig_vector(a)
    bv = as_selig_vector(b)
    if av.shape[0] != bv.shape[0]:
        raise DimensionMismatch(
            f"F mismatch: {av.shape[0] - 1} vs {bv.shape[0] - 1}"
        )
    return _kernels.similarity(av, bv)


def detect_self_intersection(a) -> bool:
    """True if the upper and lower surfaces touch or cross.

    Pointwise sign check of upper-minus-lower thickness on the detector's
    station slices: the leading-edge point is dropped, and an exact zero at
    the trailing-edge pair alone (a sealed trailing edge) does not trigger.
    """
    return _kernels.detect_self_intersection(as_selig_vector(a))


def repair_self_intersection(
    a,
    epsilon: float = DEFAULT_REPAIR_EPSILON,
    smooth_halfwidth: int = DEFAULT_SMOOTH_HALFWIDTH,
) -> np.ndarray:
    """Remove self-intersections by local stiffening and smoothing.

    Feasible shapes pass through unchanged (identity map). Otherwise every
    station with thickness below ``epsilon`` is pushed symmetrically about
    the local midline to thickness ``epsilon``, a centered moving average
    of halfwidth ``smooth_halfwidth`` is applied over the affected index
    range plus margin, and thin spots reintroduced by smoothing are
    re-clamped. Trailing-edge and leading-edge values are preserved.

    Raises:
        InfeasibleShape: the result still fails the detector (this happens
            when the trailing edge itself is crossed, which endpoint
            preservation forbids fixing).
    """
    av = as_selig_vector(a)
    if not _kernels.detect_self_intersection(av):
        return av
    repaired = _kernels.stiffen_and_smooth(av, epsilon, smooth_halfwidth)
    if _kernels.detect_self_intersection(repaired):
        raise InfeasibleShape("stiffen-and-smooth did not yield a feasible shape")
    return repaired


def to_coordinates(a) -> np.ndarray:
    """(F+1, 2) array of (x, y) pairs in upper-TE -> LE -> lower-TE order."""
    av = as_selig_vector(a)
    return np.column_stack([station_x(av.shape[0] - 1), av])


def write_coordinate_text(name: str, a) -> str:
    """Serialize a shape as a coordinate file: name line + x/y pairs."""
    buf = io.StringIO()
    buf.write(f"{name}\n")
    # 17 significant digits: re-parsing reproduces the doubles exactly.
    for x, y in to_coordinates(a):
        buf.write(f"  {x:.17g}  {y:.17g}\n")
    return buf.getvalue()
