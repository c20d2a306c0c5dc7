"""Greedy forward search for a compact, maximally representative baseline
set, plus the bookkeeping around it (evaluation-count formula, rate
curves, and the random-subset control experiment).

Exhaustive and backward subset search are documented in reports via their
cost formulas only; their evaluation counts are combinatorial (choose(m, n)
subsets, respectively ~m^2/2 reconstructions) and both are impractical at
database scale.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .dataset import AirfoilCatalog
from .errors import ConfigError, DomainError
from .evolution import GAConfig
from .geometry import similarity
from .morphing import BaselineSet
from .reconstruct import DEFAULT_THRESHOLD, batch_reconstruct, default_config, reconstruct


def forward_search_eval_count(m: int, n: int) -> int:
    """Number of non-trivial reconstructions the forward search performs:
    (n - 2)(2m - n - 1) / 2.

    Raises:
        DomainError: outside 2 <= n <= m.
    """
    if not 2 <= n <= m:
        raise DomainError(f"need 2 <= n <= m, got n={n}, m={m}")
    return (n - 2) * (2 * m - n - 1) // 2


@dataclass
class ForwardSearchStep:
    added: str
    worst_before: float
    worst_after: float
    evaluations: int


@dataclass
class ForwardSearchResult:
    baselines: BaselineSet
    trace: list[ForwardSearchStep] = field(default_factory=list)

    def trace_csv(self) -> str:
        lines = ["step,added,worst_s_prime_before,worst_s_prime_after,evaluations"]
        for i, step in enumerate(self.trace, start=1):
            lines.append(
                f"{i},{step.added!r},{step.worst_before:.8g},"
                f"{step.worst_after:.8g},{step.evaluations}"
            )
        return "\n".join(lines) + "\n"


def forward_search(
    catalog: AirfoilCatalog,
    n: int,
    config: GAConfig | None = None,
    parallel: int = 0,
    resume_dir=None,
) -> ForwardSearchResult:
    """Build a baseline set of size ``n`` by greedy addition.

    Step 1 picks the catalog medoid (minimum summed similarity to every
    other entry; no optimization involved). Each later step reconstructs
    all non-member targets against the current set, warm-started from the
    previous step's solutions zero-padded with the new baseline, and adds
    the worst-reconstructed target. Per-step results are persisted to
    ``resume_dir`` when given, so an interrupted search resumes.

    Raises:
        ConfigError: n outside [2, m].
    """
    if not 2 <= n <= catalog.m:
        raise ConfigError(f"n={n} outside [2, {catalog.m}]")
    config = config or default_config()
    resume = Path(resume_dir) if resume_dir else None
    if resume:
        resume.mkdir(parents=True, exist_ok=True)

    # Step 1: medoid by summed similarity, ties broken by catalog order.
    # Row-wise so the m x m pairwise block never materializes; the self
    # term contributes zero.
    F = catalog.F
    sums = np.array(
        [
            2.0 / F * np.abs(catalog.vectors - catalog.vectors[i]).sum()
            for i in range(catalog.m)
        ]
    )
    first = int(np.argmin(sums))
    member_names = [catalog.names[first]]
    trace: list[ForwardSearchStep] = []
    prev_weights: dict[str, np.ndarray] = {}

    evaluations_total = 0
    while len(member_names) < n:
        step_index = len(member_names) + 1
        state_file = resume / f"step_{step_index:03d}.json" if resume else None
        current = BaselineSet(
            names=list(member_names),
            shapes=np.array([catalog.get(name) for name in member_names]),
        )
        non_members = [name for name in catalog.names if name not in member_names]
        if state_file and state_file.exists():
            data = json.loads(state_file.read_text())
            results = {k: (np.asarray(v["w"]), v["s"]) for k, v in data.items()}
        elif current.n == 1:
            # A one-baseline morph is the baseline itself at any nonzero
            # weight, so no optimization is needed (or counted).
            results = {
                name: (np.array([1.0]), similarity(current.shapes[0], catalog.get(name)))
                for name in non_members
            }
        else:
            results = {}
            for name in non_members:
                warm = None
                if name in prev_weights:
                    warm = np.concatenate([prev_weights[name], [0.0]])
                    warm = warm[: current.n]
                per_target = GAConfig(
                    **{**config.__dict__, "seed": config.seed + step_index}
                )
                w, s = reconstruct(catalog.get(name), current, per_target, warm_start=warm)
                results[name] = (w, s)
        if state_file and not state_file.exists():
            state_file.write_text(
                json.dumps(
                    {k: {"w": np.asarray(w).tolist(), "s": s} for k, (w, s) in results.items()}
                )
            )
        evaluations = len(non_members) if current.n >= 2 else 0
        evaluations_total += evaluations
        worst_before = max(s for _, s in results.values())
        # ties for worst broken by name order
        worst_name = min(
            (name for name in results if results[name][1] == worst_before)
        )
        member_names.append(worst_name)
        prev_weights = {k: w for k, (w, s) in results.items() if k != worst_name}
        worst_after = max(
            (s for name, (_, s) in results.items() if name != worst_name),
            default=0.0,
        )
        trace.append(
            ForwardSearchStep(
                added=worst_name,
                worst_before=worst_before,
                worst_after=worst_after,
                evaluations=evaluations,
            )
        )

    expected = forward_search_eval_count(catalog.m, n) if n >= 2 else 0
    assert evaluations_total == expected, (
        f"driver performed {evaluations_total} reconstructions, "
        f"formula gives {expected}"
    )
    return ForwardSearchResult(
        baselines=BaselineSet(
            names=list(member_names),
            shapes=np.array([catalog.get(name) for name in member_names]),
        ),
        trace=trace,
    )


def reconstruction_rate_curve(
    catalog: AirfoilCatalog,
    full_set: BaselineSet,
    threshold: float = DEFAULT_THRESHOLD,
    sizes=None,
    config: GAConfig | None = None,
    names: list[str] | None = None,
    parallel: int = 0,
) -> list[tuple[int, float]]:
    """Success rate of batch reconstruction using the first k baselines,
    for each k in ``sizes`` (default 2..n)."""
    config = config or default_config()
    sizes = list(sizes) if sizes is not None else list(range(2, full_set.n + 1))
    if any(not 1 <= k <= full_set.n for k in sizes):
        raise ConfigError(f"sizes must lie in [1, {full_set.n}]")
    curve = []
    for k in sorted(sizes):
        report = batch_reconstruct(
            catalog,
            full_set.truncated(k),
            config=config,
            threshold=threshold,
            names=names,
            parallel=parallel,
        )
        curve.append((k, report.success_rate))
    return curve


def random_baseline_experiment(
    catalog: AirfoilCatalog,
    n: int,
    trials: int,
    threshold: float = DEFAULT_THRESHOLD,
    seed: int = 0,
    config: GAConfig | None = None,
    names: list[str] | None = None,
    parallel: int = 0,
) -> list[float]:
    """Success rates of ``trials`` uniformly random n-subsets used as
    baselines; the control against the searched set."""
    if n > catalog.m:
        raise ConfigError(f"n={n} exceeds catalog size {catalog.m}")
    rng = np.random.default_rng(seed)
    rates = []
    for trial in range(trials):
        subset = rng.choice(catalog.m, size=n, replace=False)
        baselines = BaselineSet(
            names=[catalog.names[i] for i in subset],
            shapes=np.array([catalog.vectors[i] for i in subset]),
        )
        trial_config = GAConfig(
            **{**(config or default_config()).__dict__, "seed": seed + trial}
        )
        report = batch_reconstruct(
            catalog,
            baselines,
            config=trial_config,
            threshold=threshold,
            names=names,
            parallel=parallel,
        )
        rates.append(report.success_rate)
    return rates
