"""Aerodynamic evaluation: the evaluator contract, an external-program
adapter, an analytic mock, and objective extraction from polars.

Evaluation is fully nondimensional: the only flow parameters are the
Reynolds and Mach numbers. Objectives are the maximum lift-to-drag ratio
and the stall tolerance (angle margin between the (l/d)max point and the
first local maximum of Cl scanning upward from 0 degrees).
"""

from __future__ import annotations

import math
import re
import shutil
import subprocess
import tempfile
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import (
    ConfigError,
    EmptyPolar,
    EvaluatorUnavailable,
    InsufficientPolar,
)
from .geometry import as_selig_vector, write_coordinate_text


@dataclass
class EvalConfig:
    reynolds: float = 1e6
    mach: float = 0.0
    alpha_start: float = 0.0
    alpha_end: float = 30.0
    alpha_step: float = 0.5
    max_retries: int = 2

    def validate(self) -> None:
        if self.reynolds <= 0:
            raise ConfigError("reynolds must be positive")
        if self.alpha_step <= 0:
            raise ConfigError("alpha_step must be positive")
        if not 0 <= self.mach < 1:
            raise ConfigError("mach must lie in [0, 1)")

    def alphas(self) -> np.ndarray:
        count = int(round((self.alpha_end - self.alpha_start) / self.alpha_step)) + 1
        return self.alpha_start + self.alpha_step * np.arange(count)


@dataclass
class PolarPoint:
    alpha: float
    cl: float
    cd: float
    converged: bool


@dataclass
class AeroObjectives:
    ld_max: float
    alpha_at_ldmax: float
    alpha_stall: float
    delta_alpha: float
    stall_observed: bool = True


# --- Analytic mock evaluator ------------------------------------------------

# The surrogate below is fixed by construction, not fitted: lift follows a
# quarter-sine that peaks at a stall angle growing with thickness, with a
# zero-lift offset proportional to camber; drag is an offset plus terms in
# thickness and Cl^2. Symmetric sections therefore give Cl(0) = 0, and at
# fixed alpha below stall Cl grows strictly with camber.
_MOCK_LIFT_SLOPE = 0.11  # per degree
_MOCK_CAMBER_TO_ALPHA0 = 40.0
_MOCK_STALL_BASE = 8.0
_MOCK_STALL_PER_THICKNESS = 60.0
_MOCK_STALL_PER_CAMBER = 10.0
_MOCK_CD0 = 0.008
_MOCK_CD_THICKNESS = 0.01
_MOCK_CD_QUADRATIC = 0.015


def _mock_geometry(shape: np.ndarray) -> tuple[float, float]:
    y = as_selig_vector(shape)
    half = (y.shape[0] - 1) // 2
    upper = y[half::-1]
    lower = y[half:]
    camber = float(np.mean(0.5 * (upper + lower)))
    thickness = float(np.max(upper - lower))
    return camber, thickness


class MockEvaluator:
    """Deterministic smooth surrogate; always converges."""

    name = "mock"

    def available(self) -> bool:
        return True

    def evaluate(self, shape, config: EvalConfig, alpha: float):
        camber, thickness = _mock_geometry(shape)
        alpha0 = _MOCK_CAMBER_TO_ALPHA0 * camber
        stall = np.clip(
            _MOCK_STALL_BASE
            + _MOCK_STALL_PER_THICKNESS * thickness
            + _MOCK_STALL_PER_CAMBER * camber,
            5.0,
            25.0,
        )
        cl_peak = _MOCK_LIFT_SLOPE * (stall + alpha0)
        argument = (alpha + alpha0) / (stall + alpha0)
        cl = cl_peak * math.sin(0.5 * math.pi * argument)
        cd = (
            _MOCK_CD0
            + _MOCK_CD_THICKNESS * thickness
            + _MOCK_CD_QUADRATIC * cl * cl
        )
        return cl, cd, True


# --- External-program adapter ----------------------------------------------

_POLAR_ROW_RE = re.compile(
    r"^\s*(-?\d+\.\d+)\s+(-?\d+\.\d+)\s+(-?\d+\.\d+)\s+(-?\d+\.\d+)"
)


def parse_polar_text(text: str) -> list[dict]:
    """Parse the fixed-width polar table: alpha, CL, CD, CDp columns.

    Rows before the dashed header separator are ignored.
    """
    rows = []
    seen_rule = False
    for line in text.splitlines():
        if set(line.strip()) and set(line.strip()) <= {"-", " "}:
            seen_rule = True
            continue
        if not seen_rule:
            continue
        match = _POLAR_ROW_RE.match(line)
        if match:
            alpha, cl, cd, cdp = (float(g) for g in match.groups())
            rows.append({"alpha": alpha, "cl": cl, "cd": cd, "cdp": cdp})
    return rows


@dataclass
class XfoilEvaluator:
    """Batch-mode driver for the external viscous panel program.

    Paneling and iteration limits are pinned configuration for
    determinism. Each invocation uses its own temp directory. Points whose
    viscous drag does not exceed the reported pressure drag fail the
    sanity check and are treated as unconverged.
    """

    executable: str = "xfoil"
    panels: int = 200
    iter_limit: int = 100
    timeout: float = 60.0

    name = "xfoil"

    def available(self) -> bool:
        return shutil.which(self.executable) is not None

    def _script(self, coord_file: str, polar_file: str, config: EvalConfig, alphas) -> str:
        lines = [
            "PLOP",
            "G F",
            "",
            f"LOAD {coord_file}",
            "PPAR",
            f"N {self.panels}",
            "",
            "",
            "OPER",
            f"VISC {config.reynolds:.6g}",
            f"MACH {config.mach:.4f}",
            f"ITER {self.iter_limit}",
            "PACC",
            polar_file,
            "",
        ]
        for i, alpha in enumerate(alphas):
            if i > 0:
                lines.append("INIT")
            lines.append(f"ALFA {alpha:.4f}")
        lines += ["PACC", "", "QUIT", ""]
        return "\n".join(lines)

    def run_sweep(self, shape, config: EvalConfig, alphas) -> dict[float, dict]:
        if not self.available():
            raise EvaluatorUnavailable(f"{self.executable!r} not found on PATH")
        with tempfile.TemporaryDirectory(prefix="foilmorph-xfoil-") as tmp:
            tmp_path = Path(tmp)
            coord = tmp_path / "shape.dat"
            polar = tmp_path / "polar.txt"
            coord.write_text(write_coordinate_text("candidate", shape))
            script = self._script(str(coord), str(polar), config, alphas)
            try:
                subprocess.run(
                    [self.executable],
                    input=script,
                    capture_output=True,
                    text=True,
                    timeout=self.timeout,
                    cwd=tmp,
                    check=False,
                )
            except subprocess.TimeoutExpired:
                return {}
            if not polar.exists():
                return {}
            rows = parse_polar_text(polar.read_text())
        return {round(r["alpha"], 4): r for r in rows}

    def evaluate_sweep(self, shape, config: EvalConfig) -> list[PolarPoint]:
        alphas = config.alphas()
        results = self.run_sweep(shape, config, alphas)
        missing = [a for a in alphas if round(float(a), 4) not in results]
        for _ in range(config.max_retries):
            if not missing:
                break
            retry = self.run_sweep(shape, config, missing)
            results.update(retry)
            missing = [a for a in alphas if round(float(a), 4) not in results]
        points = []
        for a in alphas:
            row = results.get(round(float(a), 4))
            if row is None:
                points.append(PolarPoint(float(a), math.nan, math.nan, False))
                continue
            ok = row["cd"] > 0 and row["cd"] > row["cdp"]
            points.append(PolarPoint(float(a), row["cl"], row["cd"], ok))
        return points


EVALUATORS = {"mock": MockEvaluator, "xfoil": XfoilEvaluator}


def resolve_evaluator(evaluator):
    """Accept an evaluator object or one of the names in EVALUATORS."""
    if isinstance(evaluator, str):
        try:
            evaluator = EVALUATORS[evaluator]()
        except KeyError:
            raise ConfigError(f"unknown evaluator {evaluator!r}") from None
    if not evaluator.available():
        raise EvaluatorUnavailable(f"evaluator {evaluator.name!r} unavailable")
    return evaluator


def evaluate_polar(shape, config: EvalConfig, evaluator) -> list[PolarPoint]:
    """One PolarPoint per angle of attack in the sweep.

    Raises:
        EvaluatorUnavailable: the evaluator cannot run at all.
        EmptyPolar: no point converged.
    """
    config.validate()
    evaluator = resolve_evaluator(evaluator)
    if hasattr(evaluator, "evaluate_sweep"):
        points = evaluator.evaluate_sweep(shape, config)
    else:
        points = [
            PolarPoint(float(a), *evaluator.evaluate(shape, config, float(a)))
            for a in config.alphas()
        ]
    if not any(p.converged for p in points):
        raise EmptyPolar("no converged polar point in the sweep")
    return points


def extract_objectives(polar: list[PolarPoint]) -> AeroObjectives:
    """Objectives from a polar; unconverged points are ignored.

    alpha_at_ldmax is the argmax of Cl/Cd. The stall angle is the first
    local maximum of Cl scanning upward (a strict rise must precede it);
    if Cl never drops, the last swept angle is used and flagged. The
    stall tolerance is clamped at zero.

    Raises:
        InsufficientPolar: fewer than 3 converged points.
    """
    usable = [p for p in polar if p.converged]
    if len(usable) < 3:
        raise InsufficientPolar(f"only {len(usable)} converged points")
    usable.sort(key=lambda p: p.alpha)
    ratios = [p.cl / p.cd for p in usable]
    i_ld = int(np.argmax(ratios))

    alpha_stall = usable[-1].alpha
    stall_observed = False
    has_risen = False
    for i in range(1, len(usable)):
        if usable[i].cl > usable[i - 1].cl:
            has_risen = True
        elif has_risen and usable[i].cl < usable[i - 1].cl:
            alpha_stall = usable[i - 1].alpha
            stall_observed = True
            break
    delta = max(0.0, alpha_stall - usable[i_ld].alpha)
    return AeroObjectives(
        ld_max=float(ratios[i_ld]),
        alpha_at_ldmax=float(usable[i_ld].alpha),
        alpha_stall=float(alpha_stall),
        delta_alpha=float(delta),
        stall_observed=stall_observed,
    )
