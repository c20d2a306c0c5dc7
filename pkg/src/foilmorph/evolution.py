"""Evolutionary optimizers: a real-coded single-objective GA, a
bi-objective NSGA-II, non-dominated filtering, and the hypervolume
indicator with the origin as reference point.

Both objectives of the bi-objective path are maximized; the single-
objective path minimizes. Objective functions must be total: invalid
candidates return a finite penalty (or (0, 0) in the bi-objective case),
never raise.
"""

from __future__ import annotations

import json
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import ConfigError, DomainError


@dataclass
class GAConfig:
    population: int = 100
    max_generations: int = 500
    crossover: str = "simulated_binary"  # or "intermediate"
    crossover_fraction: float = 0.9
    crossover_eta: float = 15.0
    mutation: str = "polynomial"  # or "adaptive_feasible"
    mutation_eta: float = 20.0
    termination_window: int = 20
    x_tolerance: float = 1e-6
    f_tolerance: float = 1e-8
    seed: int = 0
    pareto_fraction: float = 0.35
    workers: int = 0

    def validate(self) -> None:
        if self.population < 4:
            raise ConfigError("population must be >= 4")
        if self.x_tolerance <= 0 or self.f_tolerance <= 0:
            raise ConfigError("tolerances must be positive")
        if self.crossover not in ("simulated_binary", "intermediate"):
            raise ConfigError(f"unknown crossover {self.crossover!r}")
        if self.mutation not in ("polynomial", "adaptive_feasible"):
            raise ConfigError(f"unknown mutation {self.mutation!r}")


def _check_bounds(bounds) -> tuple[np.ndarray, np.ndarray]:
    lo = np.array([b[0] for b in bounds], dtype=np.float64)
    hi = np.array([b[1] for b in bounds], dtype=np.float64)
    if not (np.all(np.isfinite(lo)) and np.all(np.isfinite(hi))):
        raise ConfigError("bounds must be finite")
    if np.any(lo >= hi):
        raise ConfigError("each lower bound must be below its upper bound")
    return lo, hi


def _evaluate(objective, population, workers: int):
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(objective, population))
    return [objective(x) for x in population]


def _sbx_pair(p1, p2, lo, hi, eta, rng):
    u = rng.random(p1.shape[0])
    beta = np.where(
        u <= 0.5,
        (2.0 * u) ** (1.0 / (eta + 1.0)),
        (1.0 / (2.0 * (1.0 - u))) ** (1.0 / (eta + 1.0)),
    )
    c1 = 0.5 * ((1.0 + beta) * p1 + (1.0 - beta) * p2)
    c2 = 0.5 * ((1.0 - beta) * p1 + (1.0 + beta) * p2)
    return np.clip(c1, lo, hi), np.clip(c2, lo, hi)


def _intermediate_pair(p1, p2, lo, hi, rng):
    r1 = rng.random(p1.shape[0])
    r2 = rng.random(p1.shape[0])
    c1 = p1 + r1 * (p2 - p1)
    c2 = p2 + r2 * (p1 - p2)
    return np.clip(c1, lo, hi), np.clip(c2, lo, hi)


def _polynomial_mutate(x, lo, hi, eta, rate, rng):
    out = x.copy()
    mask = rng.random(x.shape[0]) < rate
    if not np.any(mask):
        return out
    u = rng.random(int(mask.sum()))
    delta = np.where(
        u < 0.5,
        (2.0 * u) ** (1.0 / (eta + 1.0)) - 1.0,
        1.0 - (2.0 * (1.0 - u)) ** (1.0 / (eta + 1.0)),
    )
    out[mask] = np.clip(out[mask] + delta * (hi[mask] - lo[mask]), lo[mask], hi[mask])
    return out


def _gaussian_mutate(x, lo, hi, sigma_scale, rate, rng):
    out = x.copy()
    mask = rng.random(x.shape[0]) < rate
    if np.any(mask):
        step = rng.normal(0.0, sigma_scale, int(mask.sum())) * (hi[mask] - lo[mask])
        out[mask] = np.clip(out[mask] + step, lo[mask], hi[mask])
    return out


def ga_minimize(
    objective: Callable[[np.ndarray], float],
    bounds: Sequence[tuple[float, float]],
    config: GAConfig,
    warm_start: Sequence[np.ndarray] | None = None,
) -> tuple[np.ndarray, float, int]:
    """Elitist real-coded GA. Returns (best x, best f, generations used).

    Termination: ``max_generations`` reached, or over a rolling window of
    ``termination_window`` generations both the incumbent's max per-
    variable change stayed <= x_tolerance and its objective change stayed
    <= f_tolerance. Warm-start vectors are injected verbatim into the
    initial population.
    """
    config.validate()
    lo, hi = _check_bounds(bounds)
    nvar = lo.shape[0]
    rng = np.random.default_rng(config.seed)
    pop = rng.uniform(lo, hi, size=(config.population, nvar))
    if warm_start:
        for i, w in enumerate(warm_start[: config.population]):
            pop[i] = np.clip(np.asarray(w, dtype=np.float64), lo, hi)
    fitness = np.array(_evaluate(objective, list(pop), config.workers))

    best_idx = int(np.argmin(fitness))
    best_x, best_f = pop[best_idx].copy(), float(fitness[best_idx])
    history: deque[tuple[np.ndarray, float]] = deque(
        maxlen=config.termination_window + 1
    )
    history.append((best_x.copy(), best_f))
    mutation_rate = 1.0 / nvar
    sigma = 0.1  # adaptive_feasible step scale, adapted per generation

    generation = 0
    for generation in range(1, config.max_generations + 1):
        children = [best_x.copy()]  # elitism
        improved_before = best_f
        while len(children) < config.population:
            i1, i2 = rng.integers(0, config.population, 2)
            j1, j2 = rng.integers(0, config.population, 2)
            p1 = pop[i1] if fitness[i1] <= fitness[i2] else pop[i2]
            p2 = pop[j1] if fitness[j1] <= fitness[j2] else pop[j2]
            if rng.random() < config.crossover_fraction:
                if config.crossover == "simulated_binary":
                    c1, c2 = _sbx_pair(p1, p2, lo, hi, config.crossover_eta, rng)
                else:
                    c1, c2 = _intermediate_pair(p1, p2, lo, hi, rng)
            else:
                c1, c2 = p1.copy(), p2.copy()
            for child in (c1, c2):
                if config.mutation == "polynomial":
                    child = _polynomial_mutate(
                        child, lo, hi, config.mutation_eta, mutation_rate, rng
                    )
                else:
                    child = _gaussian_mutate(child, lo, hi, sigma, mutation_rate, rng)
                children.append(child)
        pop = np.array(children[: config.population])
        fitness = np.array(_evaluate(objective, list(pop), config.workers))

        gen_best = int(np.argmin(fitness))
        if fitness[gen_best] < best_f:
            best_f = float(fitness[gen_best])
            best_x = pop[gen_best].copy()
        if config.mutation == "adaptive_feasible":
            sigma = min(0.5, sigma * 1.05) if best_f < improved_before else max(
                1e-4, sigma * 0.95
            )
        history.append((best_x.copy(), best_f))
        if len(history) == history.maxlen:
            xs = [h[0] for h in history]
            fs = [h[1] for h in history]
            dx = max(
                float(np.max(np.abs(a - b))) for a, b in zip(xs[1:], xs[:-1])
            )
            df = max(abs(a - b) for a, b in zip(fs[1:], fs[:-1]))
            if dx <= config.x_tolerance and df <= config.f_tolerance:
                break
    return best_x, best_f, generation


def non_dominated_filter(points, sense: str = "max") -> list[int]:
    """Indices of the maximal non-dominated subset, in stable input order."""
    pts = np.asarray(points, dtype=np.float64)
    if pts.size == 0:
        return []
    if sense == "min":
        pts = -pts
    n = pts.shape[0]
    ge = (pts[:, None, :] >= pts[None, :, :]).all(axis=2)
    gt = (pts[:, None, :] > pts[None, :, :]).any(axis=2)
    dominated = (ge & gt).any(axis=0)
    return [i for i in range(n) if not dominated[i]]


def hypervolume(points) -> float:
    """Area of the union of [0, f1] x [0, f2] boxes (nadir at the origin).

    Raises:
        DomainError: any negative coordinate.
    """
    pts = np.asarray(points, dtype=np.float64)
    if pts.size == 0:
        return 0.0
    if np.any(pts < 0):
        raise DomainError("hypervolume requires nonnegative coordinates")
    keep = non_dominated_filter(pts, sense="max")
    pts = pts[keep]
    order = np.argsort(pts[:, 0])
    area = 0.0
    prev_f1 = 0.0
    for f1, f2 in pts[order]:
        area += (f1 - prev_f1) * f2
        prev_f1 = f1
    return float(area)


def _fast_nondominated_fronts(points: np.ndarray) -> list[list[int]]:
    """Maximization-sense front ranking (front 0 is the best)."""
    n = points.shape[0]
    ge = (points[:, None, :] >= points[None, :, :]).all(axis=2)
    gt = (points[:, None, :] > points[None, :, :]).any(axis=2)
    dominates = ge & gt  # dominates[i, j]: i dominates j
    dom_count = dominates.sum(axis=0).astype(int)
    fronts = []
    current = [i for i in range(n) if dom_count[i] == 0]
    assigned = 0
    while current:
        fronts.append(current)
        assigned += len(current)
        nxt = []
        for i in current:
            for j in np.flatnonzero(dominates[i]):
                dom_count[j] -= 1
                if dom_count[j] == 0:
                    nxt.append(int(j))
        current = sorted(set(nxt))
    if assigned < n:  # numerical ties; shove leftovers into a last front
        leftover = [i for i in range(n) if all(i not in f for f in fronts)]
        fronts.append(leftover)
    return fronts


def _crowding_distance(points: np.ndarray) -> np.ndarray:
    n = points.shape[0]
    dist = np.zeros(n)
    if n <= 2:
        return np.full(n, np.inf)
    for k in range(points.shape[1]):
        order = np.argsort(points[:, k])
        spread = points[order[-1], k] - points[order[0], k]
        dist[order[0]] = dist[order[-1]] = np.inf
        if spread <= 0:
            continue
        dist[order[1:-1]] += (
            points[order[2:], k] - points[order[:-2], k]
        ) / spread
    return dist


@dataclass
class ParetoArchive:
    """Best-ever non-dominated front with genomes and a hypervolume trace."""

    points: list[tuple[float, float]] = field(default_factory=list)
    genomes: list[np.ndarray] = field(default_factory=list)
    hypervolume_trace: list[tuple[int, float]] = field(default_factory=list)

    def update(self, points, genomes) -> None:
        all_points = self.points + [tuple(map(float, p)) for p in points]
        all_genomes = self.genomes + [np.asarray(g, dtype=np.float64) for g in genomes]
        keep = non_dominated_filter(all_points, sense="max")
        # drop exact duplicates so the archive stays compact
        seen = set()
        points_out, genomes_out = [], []
        for i in keep:
            key = all_points[i]
            if key in seen:
                continue
            seen.add(key)
            points_out.append(all_points[i])
            genomes_out.append(all_genomes[i])
        self.points = points_out
        self.genomes = genomes_out

    def record_hypervolume(self, generation: int) -> float:
        hv = hypervolume(self.points) if self.points else 0.0
        self.hypervolume_trace.append((generation, hv))
        return hv

    def to_json(self) -> str:
        return json.dumps(
            {
                "points": [list(p) for p in self.points],
                "genomes": [g.tolist() for g in self.genomes],
                "hypervolume_trace": [list(t) for t in self.hypervolume_trace],
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "ParetoArchive":
        data = json.loads(text)
        return cls(
            points=[tuple(p) for p in data["points"]],
            genomes=[np.asarray(g) for g in data["genomes"]],
            hypervolume_trace=[tuple(t) for t in data["hypervolume_trace"]],
        )


def nsga2(
    objectives: Callable[[np.ndarray], tuple[float, float]],
    bounds: Sequence[tuple[float, float]],
    config: GAConfig,
    initial_population: Sequence[np.ndarray] | None = None,
    generation_callback: Callable[[int, ParetoArchive, np.ndarray, np.ndarray], None]
    | None = None,
) -> ParetoArchive:
    """Bi-objective NSGA-II, both objectives maximized.

    Environmental selection is rank + crowding distance, with the first
    front capped at ceil(pareto_fraction * population) members. The
    archive keeps the best-ever front; its hypervolume is recorded every
    generation (nondecreasing by construction). Deterministic under a
    fixed seed.
    """
    config.validate()
    lo, hi = _check_bounds(bounds)
    nvar = lo.shape[0]
    rng = np.random.default_rng(config.seed)
    pop = rng.uniform(lo, hi, size=(config.population, nvar))
    if initial_population:
        for i, x in enumerate(initial_population[: config.population]):
            pop[i] = np.clip(np.asarray(x, dtype=np.float64), lo, hi)
    objs = np.array(_evaluate(objectives, list(pop), config.workers))

    archive = ParetoArchive()
    archive.update(objs, pop)
    archive.record_hypervolume(0)
    if generation_callback is not None:
        generation_callback(0, archive, pop, objs)

    mutation_rate = 1.0 / nvar
    sigma = 0.1
    front_cap = max(2, int(np.ceil(config.pareto_fraction * config.population)))

    for generation in range(1, config.max_generations + 1):
        fronts = _fast_nondominated_fronts(objs)
        rank = np.empty(config.population, dtype=int)
        crowd = np.empty(config.population)
        for r, front in enumerate(fronts):
            rank[front] = r
            crowd[front] = _crowding_distance(objs[front])

        def better(i, j):
            if rank[i] != rank[j]:
                return i if rank[i] < rank[j] else j
            return i if crowd[i] >= crowd[j] else j

        children = []
        while len(children) < config.population:
            a = better(*rng.integers(0, config.population, 2))
            b = better(*rng.integers(0, config.population, 2))
            p1, p2 = pop[a], pop[b]
            if rng.random() < config.crossover_fraction:
                if config.crossover == "simulated_binary":
                    c1, c2 = _sbx_pair(p1, p2, lo, hi, config.crossover_eta, rng)
                else:
                    c1, c2 = _intermediate_pair(p1, p2, lo, hi, rng)
            else:
                c1, c2 = p1.copy(), p2.copy()
            for child in (c1, c2):
                if config.mutation == "polynomial":
                    child = _polynomial_mutate(
                        child, lo, hi, config.mutation_eta, mutation_rate, rng
                    )
                else:
                    child = _gaussian_mutate(child, lo, hi, sigma, mutation_rate, rng)
                children.append(child)
        child_pop = np.array(children[: config.population])
        child_objs = np.array(_evaluate(objectives, list(child_pop), config.workers))

        merged = np.vstack([pop, child_pop])
        merged_objs = np.vstack([objs, child_objs])
        fronts = _fast_nondominated_fronts(merged_objs)
        selected: list[int] = []
        for r, front in enumerate(fronts):
            cap = front_cap if r == 0 else config.population - len(selected)
            cap = min(cap, config.population - len(selected))
            if cap <= 0:
                break
            if len(front) <= cap:
                selected.extend(front)
            else:
                cd = _crowding_distance(merged_objs[front])
                order = np.argsort(-cd, kind="stable")
                selected.extend(front[i] for i in order[:cap])
        if len(selected) < config.population:
            # pareto_fraction starved the population; refill from front 0
            leftovers = [i for i in fronts[0] if i not in set(selected)]
            cd = _crowding_distance(merged_objs[fronts[0]])
            ranked = sorted(
                leftovers, key=lambda i: -cd[fronts[0].index(i)]
            )
            selected.extend(ranked[: config.population - len(selected)])
        pop = merged[selected]
        objs = merged_objs[selected]

        prev_sigma_ref = archive.hypervolume_trace[-1][1]
        archive.update(child_objs, child_pop)
        hv = archive.record_hypervolume(generation)
        if config.mutation == "adaptive_feasible":
            sigma = min(0.5, sigma * 1.05) if hv > prev_sigma_ref else max(
                1e-4, sigma * 0.95
            )
        if generation_callback is not None:
            generation_callback(generation, archive, pop, objs)
    return archive
