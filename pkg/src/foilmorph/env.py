"""Episodic geometry-guessing environment: an agent turns normalized
knobs on a black-box shape generator and is rewarded by negative shape
error against a hidden target.

Observations are the agent's own knobs; nothing about the generator
(method identity, variable bounds) leaks through the interface. A
line-delimited JSON protocol lets external agents drive the environment
out of process; a Gaussian hill-climb agent serves as the built-in
baseline.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import FoilmorphError, InfeasibleShape, ProtocolError
from .geometry import DEFAULT_F, detect_self_intersection, similarity
from .morphing import BaselineSet
from .paramgen import knobs_to_dv, make_generator, method_spec

INFEASIBLE_REWARD = -10.0
DEFAULT_EPISODE_LENGTH = 100


@dataclass
class EnvConfig:
    method: str
    target: np.ndarray
    baselines: BaselineSet | None = None  # required for the morphing method
    episode_length: int = DEFAULT_EPISODE_LENGTH
    seed: int = 0
    F: int = DEFAULT_F

    def validate(self) -> None:
        if self.episode_length < 1:
            raise ValueError("episode_length must be >= 1")
        target = np.asarray(self.target)
        if target.shape[0] != self.F + 1:
            raise ValueError(
                f"target has {target.shape[0] - 1} stations, generator emits {self.F}"
            )


@dataclass
class StepResult:
    observation: np.ndarray
    reward: float
    terminated: bool
    info: dict = field(default_factory=dict)


class GeometryEnv:
    """Single-session environment; reset() starts a fresh episode."""

    def __init__(self, config: EnvConfig):
        config.validate()
        self._config = config
        self._spec = method_spec(config.method)
        self._generate = make_generator(
            config.method, baselines=config.baselines, F=config.F
        )
        self._target = np.asarray(config.target, dtype=np.float64)
        self._steps = 0
        self._best_mae = np.inf
        self._knobs = np.full(self._spec.knob_count, 0.5)

    @property
    def knob_count(self) -> int:
        return self._spec.knob_count

    @property
    def episode_length(self) -> int:
        return self._config.episode_length

    def reset(self) -> np.ndarray:
        """Start an episode; the initial observation is mid-range knobs."""
        self._steps = 0
        self._best_mae = np.inf
        self._knobs = np.full(self._spec.knob_count, 0.5)
        return self._knobs.copy()

    def step(self, action) -> StepResult:
        """Apply a knob vector, generate, and reward by negative error.

        Values are clamped to [0, 1]. Degenerate or unrepairable
        generations get the fixed infeasible reward.

        Raises:
            ProtocolError: wrong action length.
        """
        action = np.asarray(action, dtype=np.float64)
        if action.shape != (self._spec.knob_count,):
            raise ProtocolError(
                f"expected {self._spec.knob_count} knob values, got {action.shape}"
            )
        self._knobs = np.clip(action, 0.0, 1.0)
        self._steps += 1
        feasible = True
        try:
            dv = knobs_to_dv(self._spec, self._knobs)
            shape = self._generate(dv)
            if self._config.method != "airdbm" and detect_self_intersection(shape):
                raise InfeasibleShape("generated surfaces cross")
            mae = similarity(shape, self._target)
            reward = -mae
        except FoilmorphError:
            feasible = False
            mae = -INFEASIBLE_REWARD
            reward = INFEASIBLE_REWARD
        if mae < self._best_mae:
            self._best_mae = mae
        return StepResult(
            observation=self._knobs.copy(),
            reward=float(reward),
            terminated=self._steps >= self._config.episode_length,
            info={
                "mae": float(mae),
                "feasible": feasible,
                "best_mae_so_far": float(self._best_mae),
            },
        )


def handle_protocol_line(env: GeometryEnv, line: str) -> str:
    """One request -> one response, both single-line JSON documents."""
    try:
        message = json.loads(line)
        kind = message["type"]
    except (json.JSONDecodeError, KeyError, TypeError):
        return json.dumps({"error": "malformed message"})
    if kind == "spec":
        return json.dumps(
            {"knobs": env.knob_count, "episode_length": env.episode_length}
        )
    if kind == "reset":
        return json.dumps({"observation": env.reset().tolist()})
    if kind == "step":
        try:
            result = env.step(np.asarray(message.get("action", []), dtype=np.float64))
        except (ProtocolError, ValueError) as exc:
            return json.dumps({"error": str(exc)})
        return json.dumps(
            {
                "observation": result.observation.tolist(),
                "reward": result.reward,
                "terminated": result.terminated,
                "info": result.info,
            }
        )
    return json.dumps({"error": f"unknown message type {kind!r}"})


def serve_agent_protocol(env: GeometryEnv, reader, writer) -> None:
    """Run the line protocol until the transport closes.

    ``reader``/``writer`` are text streams (e.g. stdin/stdout or a socket
    file pair). Malformed lines produce an error response; the session
    continues.
    """
    for line in reader:
        line = line.strip()
        if not line:
            continue
        writer.write(handle_protocol_line(env, line) + "\n")
        writer.flush()


def hill_climb_agent(
    env: GeometryEnv, episodes: int, seed: int = 0, step_scale: float = 0.1
) -> list[float]:
    """Gaussian-perturbation hill climbing on knobs around the best point
    found so far; returns the best MAE after each cumulative episode.

    The agent carries its memory (best knobs and error) across episodes;
    the environment itself is memoryless across resets.
    """
    if episodes < 1:
        raise ValueError("episodes must be >= 1")
    rng = np.random.default_rng(seed)
    best_knobs = None
    best_mae = np.inf
    trace = []
    for _ in range(episodes):
        observation = env.reset()
        center = best_knobs if best_knobs is not None else observation
        while True:
            if best_knobs is None:
                action = center
            else:
                action = np.clip(
                    center + rng.normal(0.0, step_scale, center.shape[0]), 0.0, 1.0
                )
            result = env.step(action)
            if result.info["feasible"] and result.info["mae"] < best_mae:
                best_mae = result.info["mae"]
                best_knobs = action.copy()
                center = best_knobs
            elif best_knobs is None:
                best_knobs = action.copy()
            if result.terminated:
                break
        trace.append(float(best_mae))
    return trace
