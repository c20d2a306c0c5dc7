"""End-to-end bi-objective shape optimization: morphing-weight genomes
evaluated aerodynamically, seeded by two single-objective pre-runs."""

from __future__ import annotations

import csv
import io
import json
import os
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .aero import EvalConfig, evaluate_polar, extract_objectives, resolve_evaluator
from .errors import FoilmorphError
from .evolution import GAConfig, ParetoArchive, ga_minimize, nsga2
from .morphing import BaselineSet, morph

INVALID_OBJECTIVES = (0.0, 0.0)  # zero hypervolume contribution at the origin


def paper_scale_config(seed: int = 0, workers: int = 0) -> GAConfig:
    """Full-scale settings: pop 372, 1,000 generations, intermediate
    crossover at fraction 0.8, adaptive mutation, Pareto fraction 0.35."""
    return GAConfig(
        population=372,
        max_generations=1000,
        crossover="intermediate",
        crossover_fraction=0.8,
        mutation="adaptive_feasible",
        pareto_fraction=0.35,
        seed=seed,
        workers=workers,
    )


def aero_objectives_fn(baselines: BaselineSet, eval_config: EvalConfig, evaluator):
    """Genome (12 weights) -> ((l/d)max, delta alpha); invalid -> (0, 0)."""
    eval_config.validate()

    def objectives(w: np.ndarray) -> tuple[float, float]:
        try:
            shape = morph(baselines, w)
            polar = evaluate_polar(shape, eval_config, evaluator)
            result = extract_objectives(polar)
        except FoilmorphError:
            return INVALID_OBJECTIVES
        if not np.isfinite(result.ld_max) or result.ld_max <= 0:
            return INVALID_OBJECTIVES
        return (result.ld_max, result.delta_alpha)

    return objectives


@dataclass
class PreRunConfig:
    population: int = 128
    generations: int = 100


def seed_population(
    objectives_fn,
    bounds,
    config: GAConfig,
    pre_run: PreRunConfig,
) -> list[np.ndarray]:
    """Champions of two single-objective GA pre-runs (one per objective),
    to be injected into the first multi-objective generation."""
    champions = []
    for component in (0, 1):
        single = GAConfig(
            population=pre_run.population,
            max_generations=pre_run.generations,
            crossover=config.crossover,
            crossover_fraction=config.crossover_fraction,
            mutation=config.mutation,
            seed=config.seed + 1000 + component,
            workers=config.workers,
        )
        best_x, _, _ = ga_minimize(
            lambda w, c=component: -objectives_fn(w)[c], bounds, single
        )
        champions.append(best_x)
    return champions


def optimize_airfoil(
    baselines: BaselineSet,
    eval_config: EvalConfig,
    ga_config: GAConfig,
    evaluator,
    pre_run: PreRunConfig | None = None,
    checkpoint_dir=None,
    checkpoint_every: int = 10,
) -> ParetoArchive:
    """Run the full pipeline and return the best-ever Pareto archive.

    The evaluator is resolved up front so an unavailable external program
    fails at startup, not mid-run. When ``checkpoint_dir`` is given the
    archive is written atomically every ``checkpoint_every`` generations.
    """
    evaluator = resolve_evaluator(evaluator)
    objectives = aero_objectives_fn(baselines, eval_config, evaluator)
    bounds = [(-1.0, 1.0)] * baselines.n
    initial = None
    if pre_run is not None:
        initial = seed_population(objectives, bounds, ga_config, pre_run)

    checkpoint = Path(checkpoint_dir) if checkpoint_dir else None
    if checkpoint:
        checkpoint.mkdir(parents=True, exist_ok=True)

    def on_generation(gen, archive, pop, objs):
        if checkpoint and gen % checkpoint_every == 0:
            _atomic_write(checkpoint / "archive.json", archive.to_json())
            state = {
                "generation": gen,
                "population": pop.tolist(),
                "objectives": objs.tolist(),
                "seed": ga_config.seed,
            }
            _atomic_write(checkpoint / "state.json", json.dumps(state))

    return nsga2(
        objectives,
        bounds,
        ga_config,
        initial_population=initial,
        generation_callback=on_generation,
    )


def _atomic_write(path: Path, text: str) -> None:
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(text)
    os.replace(tmp, path)


def hypervolume_csv(archive: ParetoArchive) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["generation", "hypervolume"])
    for gen, hv in archive.hypervolume_trace:
        writer.writerow([gen, f"{hv:.8g}"])
    return buf.getvalue()


def final_report(archive: ParetoArchive, ga_config: GAConfig, baselines: BaselineSet) -> dict:
    """JSON-ready run summary: config, front, genomes as weight vectors."""
    return {
        "seed": ga_config.seed,
        "population": ga_config.population,
        "generations": ga_config.max_generations,
        "baseline_names": baselines.names,
        "front": [
            {"ld_max": p[0], "delta_alpha": p[1], "weights": g.tolist()}
            for p, g in zip(archive.points, archive.genomes)
        ],
        "final_hypervolume": archive.hypervolume_trace[-1][1]
        if archive.hypervolume_trace
        else 0.0,
        "hypervolume_note": "trace records the best-ever archive, not the per-generation population front",
    }
