"""Competing airfoil parameterizations and the normalized-knob adapter.

Five methods share the generator interface: a flat design-variable vector
in documented bounds maps to a canonical shape vector. The bump, class-
shape, B-spline, and polynomial-section methods build geometry from
scratch; the morphing method blends a baseline set and lives in
``morphing`` (wired in here through :func:`make_generator`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.interpolate import BSpline

from .dataset import RawAirfoilRecord, normalize_and_resample
from .errors import (
    AmbiguousTopology,
    DimensionMismatch,
    IllConditioned,
    InfeasibleShape,
    OutOfRange,
)
from .geometry import DEFAULT_F, detect_self_intersection, station_x

_OPEN_BOUND_MARGIN = 1e-6


@dataclass(frozen=True)
class Variable:
    name: str
    lower: float
    upper: float
    lower_open: bool = False
    upper_open: bool = False

    @property
    def effective_lower(self) -> float:
        margin = _OPEN_BOUND_MARGIN * (self.upper - self.lower)
        return self.lower + margin if self.lower_open else self.lower

    @property
    def effective_upper(self) -> float:
        margin = _OPEN_BOUND_MARGIN * (self.upper - self.lower)
        return self.upper - margin if self.upper_open else self.upper


@dataclass(frozen=True)
class DesignVariableSpec:
    method: str
    variables: tuple[Variable, ...]

    @property
    def knob_count(self) -> int:
        return len(self.variables)

    def bounds(self) -> list[tuple[float, float]]:
        return [(v.effective_lower, v.effective_upper) for v in self.variables]


def _vars(*specs) -> tuple[Variable, ...]:
    return tuple(Variable(*s) for s in specs)


def method_spec(method: str) -> DesignVariableSpec:
    """Design-variable table for one of the five methods."""
    if method == "airdbm":
        variables = _vars(*[(f"w{i + 1}", -1.0, 1.0) for i in range(12)])
    elif method == "hicks_henne":
        variables = _vars(
            *[(f"p_u{i + 1}", 1.0, 4.0) for i in range(3)],
            *[(f"a_u{i + 1}", -0.2, 0.2) for i in range(3)],
            *[(f"p_l{i + 1}", 1.0, 4.0) for i in range(3)],
            *[(f"a_l{i + 1}", -0.2, 0.2) for i in range(3)],
        )
    elif method == "cst":
        variables = _vars(
            ("N1", 0.0, 2.0, True),
            ("N2", 0.0, 2.0, True),
            *[(f"A_u{i + 1}", -0.5, 0.5) for i in range(4)],
            ("dxi_u", -0.5, 0.5),
            *[(f"A_l{i + 1}", -0.5, 0.5) for i in range(4)],
            ("dxi_l", -0.5, 0.5),
        )
    elif method == "nurbs":
        variables = _vars(
            ("x1", 0.0, 1.0),
            ("y1", -0.5, 0.5),
            ("x2", -0.5, 0.5),
            ("y2", -0.5, 0.5),
            ("x3", 0.0, 1.0),
            ("y3", -0.5, 0.5),
            ("y_te_u", -0.5, 0.5),
            ("y_te_l", -0.5, 0.5),
            *[(f"omega{i + 1}", 0.1, 5.0) for i in range(5)],
        )
    elif method == "parsec":
        variables = _vars(
            ("r_le_u", 0.0, 1.0),
            ("x_u", 0.0, 1.0, True, True),
            ("y_u", -0.5, 0.5),
            ("y_xx_u", -0.5, 0.5),
            ("r_le_l", 0.0, 1.0),
            ("x_l", 0.0, 1.0, True, True),
            ("y_l", -0.5, 0.5),
            ("y_xx_l", -0.5, 0.5),
            ("y_te", -0.5, 0.5),
            ("t_te", 0.0, 1.0),
            ("alpha_te", -math.pi / 4, math.pi / 4),
            ("beta_te", 0.0, math.pi / 2),
        )
    else:
        raise ValueError(f"unknown method {method!r}")
    return DesignVariableSpec(method=method, variables=variables)


METHODS = ("airdbm", "hicks_henne", "cst", "nurbs", "parsec")


def knobs_to_dv(spec: DesignVariableSpec, knobs) -> np.ndarray:
    """Affine map from [0, 1] knobs to design-variable bounds.

    Open bound ends are pulled inward by 1e-6 of the range so the mapped
    value never sits on an excluded endpoint.

    Raises:
        DimensionMismatch: wrong knob count.
        OutOfRange: a knob outside [0, 1].
    """
    arr = np.asarray(knobs, dtype=np.float64)
    if arr.shape != (spec.knob_count,):
        raise DimensionMismatch(
            f"{spec.method} takes {spec.knob_count} knobs, got shape {arr.shape}"
        )
    if np.any(arr < 0.0) or np.any(arr > 1.0):
        raise OutOfRange("knobs must lie in [0, 1]")
    lo = np.array([v.effective_lower for v in spec.variables])
    hi = np.array([v.effective_upper for v in spec.variables])
    return lo + arr * (hi - lo)


def dv_to_knobs(spec: DesignVariableSpec, dv) -> np.ndarray:
    """Inverse of :func:`knobs_to_dv` on the effective bounds."""
    arr = np.asarray(dv, dtype=np.float64)
    if arr.shape != (spec.knob_count,):
        raise DimensionMismatch(
            f"{spec.method} takes {spec.knob_count} variables, got shape {arr.shape}"
        )
    lo = np.array([v.effective_lower for v in spec.variables])
    hi = np.array([v.effective_upper for v in spec.variables])
    return (arr - lo) / (hi - lo)


# --- Hicks-Henne bump functions --------------------------------------------

def hicks_henne_peaks(count: int = 3) -> np.ndarray:
    """Cosine-distributed bump peak locations over the chord."""
    i = np.arange(1, count + 1)
    return 0.5 * (1.0 - np.cos(np.pi * i / (count + 1)))


def hicks_henne_bump(x: np.ndarray, peak: float, power: float) -> np.ndarray:
    """sin^t(pi * x^(ln 0.5 / ln peak)): unit height at the peak, zero at 0 and 1."""
    exponent = math.log(0.5) / math.log(peak)
    return np.sin(np.pi * np.power(x, exponent)) ** power


def generate_hicks_henne(dv, F: int = DEFAULT_F) -> np.ndarray:
    """Three bumps per surface added to a zero-thickness flat plate."""
    dv = np.asarray(dv, dtype=np.float64)
    if dv.shape != (12,):
        raise DimensionMismatch(f"expected 12 variables, got {dv.shape}")
    p_u, a_u, p_l, a_l = dv[0:3], dv[3:6], dv[6:9], dv[9:12]
    peaks = hicks_henne_peaks(3)

    def surface(x, powers, amps):
        y = np.zeros_like(x)
        for peak, power, amp in zip(peaks, powers, amps):
            if amp != 0.0:
                y += amp * hicks_henne_bump(x, peak, power)
        return y

    return _assemble(F, lambda x: surface(x, p_u, a_u), lambda x: surface(x, p_l, a_l))


# --- Class-shape transformation --------------------------------------------

def bernstein(i: int, n: int, x: np.ndarray) -> np.ndarray:
    return math.comb(n, i) * x**i * (1.0 - x) ** (n - i)


def generate_cst(dv, F: int = DEFAULT_F) -> np.ndarray:
    """Class function x^N1 (1-x)^N2 times a cubic Bernstein shape function,
    plus a linear trailing-edge height term, per surface."""
    dv = np.asarray(dv, dtype=np.float64)
    if dv.shape != (12,):
        raise DimensionMismatch(f"expected 12 variables, got {dv.shape}")
    n1, n2 = dv[0], dv[1]
    a_up, dxi_u = dv[2:6], dv[6]
    a_lo, dxi_l = dv[7:11], dv[11]
    if n1 <= 0 or n2 <= 0:
        raise OutOfRange("class exponents must be positive")

    def surface(x, coeffs, dxi):
        shape = sum(coeffs[i] * bernstein(i, 3, x) for i in range(4))
        with np.errstate(invalid="ignore"):
            cls = np.where(x > 0, x, 0.0) ** n1 * np.where(x < 1, 1 - x, 0.0) ** n2
        return cls * shape + x * dxi

    return _assemble(F, lambda x: surface(x, a_up, dxi_u), lambda x: surface(x, a_lo, dxi_l))


# --- Rational B-spline closed section --------------------------------------

_NURBS_DEGREE = 3
_NURBS_SAMPLES = 2001


def _nurbs_geometry(dv) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    dv = np.asarray(dv, dtype=np.float64)
    if dv.shape != (13,):
        raise DimensionMismatch(f"expected 13 variables, got {dv.shape}")
    x1, y1, x2, y2, x3, y3, yteu, ytel = dv[:8]
    weights = dv[8:13]
    control = np.array(
        [[1.0, yteu], [x1, y1], [x2, y2], [x3, y3], [1.0, ytel]]
    )
    knots = np.concatenate([[0.0] * 4, [0.5], [1.0] * 4])
    return control, weights, knots


def nurbs_curve_points(dv, num: int = _NURBS_SAMPLES) -> np.ndarray:
    """Dense (num, 2) samples of the rational cubic B-spline section curve."""
    control, weights, knots = _nurbs_geometry(dv)
    homogeneous = np.column_stack([control * weights[:, None], weights])
    spline = BSpline(knots, homogeneous, _NURBS_DEGREE)
    t = np.linspace(0.0, 1.0, num)
    pts = spline(t)
    return pts[:, :2] / pts[:, 2:3]


def generate_nurbs(dv, F: int = DEFAULT_F) -> np.ndarray:
    """Sample the rational spline densely, split at minimum x, resample.

    Raises:
        InfeasibleShape: the curve cannot be split into single-valued
            upper and lower surfaces.
    """
    pts = nurbs_curve_points(dv)
    record = RawAirfoilRecord(name="nurbs", points=pts, source_format="unknown")
    try:
        return normalize_and_resample(record, F)
    except AmbiguousTopology as exc:
        raise InfeasibleShape(str(exc)) from exc


# --- Polynomial section (six-term half-power basis per surface) ------------

_PARSEC_POWERS = np.arange(1, 7) - 0.5  # 1/2, 3/2, ..., 11/2


def _parsec_rows(x: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    value = x**_PARSEC_POWERS
    slope = _PARSEC_POWERS * x ** (_PARSEC_POWERS - 1.0)
    curvature = _PARSEC_POWERS * (_PARSEC_POWERS - 1.0) * x ** (_PARSEC_POWERS - 2.0)
    return value, slope, curvature


def parsec_coefficients(dv) -> tuple[np.ndarray, np.ndarray]:
    """Solve the per-surface 6x6 linear systems for the basis coefficients.

    Conditions per surface: leading-edge radius (c1 = +/- sqrt(2 r_le)),
    crest height, zero crest slope, crest curvature, trailing-edge height
    y_te +/- t_te/2, and trailing-edge slope tan(alpha_te -/+ beta_te/2).

    Raises:
        IllConditioned: singular or numerically hopeless condition matrix.
    """
    dv = np.asarray(dv, dtype=np.float64)
    if dv.shape != (12,):
        raise DimensionMismatch(f"expected 12 variables, got {dv.shape}")
    rle_u, x_u, y_u, yxx_u, rle_l, x_l, y_l, yxx_l, y_te, t_te, a_te, b_te = dv
    if not (0.0 < x_u < 1.0 and 0.0 < x_l < 1.0):
        raise OutOfRange("crest x-coordinates must lie strictly inside (0, 1)")

    def solve(rle_sign, rle, x_c, y_c, yxx_c, y_edge, slope_edge):
        val_c, slope_c, curv_c = _parsec_rows(x_c)
        val_te, slope_te, _ = _parsec_rows(1.0)
        matrix = np.vstack(
            [np.eye(6)[0], val_c, slope_c, curv_c, val_te, slope_te]
        )
        rhs = np.array(
            [rle_sign * math.sqrt(2.0 * rle), y_c, 0.0, yxx_c, y_edge, slope_edge]
        )
        try:
            coeff = np.linalg.solve(matrix, rhs)
            # two steps of iterative refinement: with the condition-number
            # cap below, this keeps the worst-case residual under 1e-8
            for _ in range(2):
                coeff -= np.linalg.solve(matrix, matrix @ coeff - rhs)
        except np.linalg.LinAlgError as exc:
            raise IllConditioned(str(exc)) from exc
        if not np.all(np.isfinite(coeff)) or np.linalg.cond(matrix) > 1e8:
            raise IllConditioned(f"condition matrix ill-posed at crest x={x_c}")
        return coeff

    upper = solve(
        1.0, rle_u, x_u, y_u, yxx_u, y_te + 0.5 * t_te, math.tan(a_te - 0.5 * b_te)
    )
    lower = solve(
        -1.0, rle_l, x_l, y_l, yxx_l, y_te - 0.5 * t_te, math.tan(a_te + 0.5 * b_te)
    )
    return upper, lower


def parsec_condition_residual(dv) -> float:
    """Max absolute residual of the 12 imposed surface conditions."""
    dv = np.asarray(dv, dtype=np.float64)
    upper, lower = parsec_coefficients(dv)
    rle_u, x_u, y_u, yxx_u, rle_l, x_l, y_l, yxx_l, y_te, t_te, a_te, b_te = dv
    residuals = []
    for coeff, sign, rle, x_c, y_c, yxx_c, y_edge, slope_edge in (
        (upper, 1.0, rle_u, x_u, y_u, yxx_u, y_te + 0.5 * t_te, math.tan(a_te - 0.5 * b_te)),
        (lower, -1.0, rle_l, x_l, y_l, yxx_l, y_te - 0.5 * t_te, math.tan(a_te + 0.5 * b_te)),
    ):
        val_c, slope_c, curv_c = _parsec_rows(x_c)
        val_te, slope_te, _ = _parsec_rows(1.0)
        residuals += [
            coeff[0] - sign * math.sqrt(2.0 * rle),
            val_c @ coeff - y_c,
            slope_c @ coeff,
            curv_c @ coeff - yxx_c,
            val_te @ coeff - y_edge,
            slope_te @ coeff - slope_edge,
        ]
    return float(np.max(np.abs(residuals)))


def generate_parsec(dv, F: int = DEFAULT_F) -> np.ndarray:
    upper, lower = parsec_coefficients(dv)

    def surface(x, coeff):
        return np.power.outer(np.where(x > 0, x, 0.0), _PARSEC_POWERS) @ coeff

    return _assemble(F, lambda x: surface(x, upper), lambda x: surface(x, lower))


def _assemble(F: int, upper: Callable, lower: Callable) -> np.ndarray:
    """Evaluate per-surface y(x) callables at the canonical stations."""
    xs = station_x(F)
    half = F // 2
    out = np.empty(F + 1)
    out[: half + 1] = upper(xs[: half + 1])
    out[half:] = lower(xs[half:])
    out[half] = 0.0
    return out


def make_generator(
    method: str, baselines=None, F: int = DEFAULT_F
) -> Callable[[np.ndarray], np.ndarray]:
    """Design-variable -> shape closure for any of the five methods.

    The morphing method needs a loaded baseline set and includes its repair
    step; the other methods are returned as-generated (callers consult the
    detector for feasibility).
    """
    if method == "airdbm":
        if baselines is None:
            raise ValueError("airdbm generator needs a baseline set")
        from .morphing import morph

        return lambda dv: morph(baselines, dv)
    if method == "hicks_henne":
        return lambda dv: generate_hicks_henne(dv, F)
    if method == "cst":
        return lambda dv: generate_cst(dv, F)
    if method == "nurbs":
        return lambda dv: generate_nurbs(dv, F)
    if method == "parsec":
        return lambda dv: generate_parsec(dv, F)
    raise ValueError(f"unknown method {method!r}")


def shape_is_feasible(y) -> bool:
    """Detector-based feasibility flag for generator outputs."""
    return not detect_self_intersection(y)
