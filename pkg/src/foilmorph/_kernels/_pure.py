"""Pure NumPy implementations of the hot geometry kernels.

These are the reference semantics; the compiled extension in ``_core.pyx``
must agree with them to floating-point round-off. Selection happens in
``_kernels.__init__``.
"""

from __future__ import annotations

import numpy as np

IMPLEMENTATION = "pure"


def similarity(a: np.ndarray, b: np.ndarray) -> float:
    """Scaled L1 distance (2/F) * sum |a_j - b_j| over all F+1 stations."""
    F = a.shape[0] - 1
    return float(2.0 / F * np.abs(a - b).sum())


def detect_self_intersection(y: np.ndarray) -> bool:
    """Sign-change check between the reversed upper half and the lower half.

    The leading-edge station is dropped; the trailing-edge pair participates
    in sign products but its own exact zero (a sealed trailing edge) does
    not count as an intersection.
    """
    F = y.shape[0] - 1
    half = F // 2
    upper = y[half - 1 :: -1]  # y(s_{F/2-1}) ... y(s_0)
    lower = y[half + 1 :]  # y(s_{F/2+1}) ... y(s_F)
    b = np.sign(upper - lower).astype(np.int64)
    if b.shape[0] < 2:
        return False
    head = b[:-1]
    if np.any(head == 0):
        return True
    return bool(np.any(head * b[1:] < 0))


def stiffen_and_smooth(
    y: np.ndarray, epsilon: float, halfwidth: int
) -> np.ndarray:
    """Raise sub-epsilon thickness to epsilon symmetrically, then smooth.

    Operates on interior stations only; the two trailing-edge endpoints and
    the leading-edge point keep their original values. Returns a new vector.
    """
    F = y.shape[0] - 1
    half = F // 2
    # Surfaces indexed by chordwise station k: k=0 leading edge, k=half TE.
    upper = y[half::-1].copy()
    lower = y[half:].copy()
    thickness = upper - lower
    interior = np.arange(1, half)
    bad = interior[thickness[interior] < epsilon]
    if bad.size > 0:
        mid = 0.5 * (upper[bad] + lower[bad])
        upper[bad] = mid + 0.5 * epsilon
        lower[bad] = mid - 0.5 * epsilon
        lo = max(1, int(bad.min()) - 2 * halfwidth)
        hi = min(half - 1, int(bad.max()) + 2 * halfwidth)
        upper = _smooth_range(upper, lo, hi, halfwidth)
        lower = _smooth_range(lower, lo, hi, halfwidth)
        # Smoothing may re-thin the section; clamp about the smoothed midline.
        thin = interior[(upper[interior] - lower[interior]) < epsilon]
        if thin.size > 0:
            mid = 0.5 * (upper[thin] + lower[thin])
            upper[thin] = mid + 0.5 * epsilon
            lower[thin] = mid - 0.5 * epsilon
    out = np.empty_like(y)
    out[half::-1] = upper
    out[half:] = lower
    out[0] = y[0]
    out[F] = y[F]
    out[half] = y[half]
    return out


def _smooth_range(s: np.ndarray, lo: int, hi: int, halfwidth: int) -> np.ndarray:
    """Centered moving average over indices [lo, hi], edge-padded."""
    if halfwidth <= 0 or hi < lo:
        return s
    padded = np.pad(s, halfwidth, mode="edge")
    window = 2 * halfwidth + 1
    kernel = np.full(window, 1.0 / window)
    averaged = np.convolve(padded, kernel, mode="valid")
    out = s.copy()
    out[lo : hi + 1] = averaged[lo : hi + 1]
    return out


def blend(baselines: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """(1/sum w) * sum_i w_i * B_i over an (n, F+1) baseline matrix.

    Weights are normalized before the product so that a one-hot weight
    vector reproduces its baseline exactly (w_i / sum(w) is then 1.0).
    """
    return (weights / weights.sum()) @ baselines
