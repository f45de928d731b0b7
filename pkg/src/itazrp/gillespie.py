"""Continuous-time simulation at fixed numeric rates.

Random numbers come from numpy's PCG64 bit generator seeded through
``SeedSequence``; replicas use spawned child sequences, so a (seed, replica
count) pair fixes every trajectory.  Holding times are drawn by inverse CDF,
``-log(1 - U) / R``.  Occupancy is time weighted: each visited state is
credited with the time spent in it.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import accumulate
from typing import Mapping, Sequence

import numpy as np

from .markov import config_transitions, total_variation
from .states import Configuration, Sector, enumerate_sector, format_config

__all__ = [
    "SimConfig",
    "EmpiricalDistribution",
    "event_list",
    "step",
    "run",
    "run_replicas",
    "make_rng",
]

_BATCH = 1 << 16


def make_rng(seed: int | np.random.SeedSequence) -> np.random.Generator:
    if not isinstance(seed, np.random.SeedSequence):
        seed = np.random.SeedSequence(int(seed))
    return np.random.Generator(np.random.PCG64(seed))


@dataclass(frozen=True)
class SimConfig:
    """``events`` counts every jump, the ``burn_in`` discarded ones included."""

    sector: Sector
    w: tuple
    seed: int = 0
    events: int = 1_000_000
    burn_in: int = 0
    start: Configuration | None = None

    def __post_init__(self):
        object.__setattr__(self, "w", tuple(float(x) for x in self.w))
        self.sector.require_basic()
        if len(self.w) != self.sector.n:
            raise ValueError(f"need {self.sector.n} rates, got {len(self.w)}")
        if any(not (x > 0 and math.isfinite(x)) for x in self.w):
            raise ValueError("rates must be positive and finite")
        if not 0 <= self.burn_in < self.events:
            raise ValueError("need 0 <= burn_in < events")
        if self.start is not None and not self.sector.contains(self.start):
            raise ValueError("start configuration lies outside the sector")


@dataclass
class EmpiricalDistribution:
    weights: dict = field(default_factory=dict)
    total_time: float = 0.0

    def fractions(self) -> dict:
        t = self.total_time
        return {c: v / t for c, v in self.weights.items()} if t else {}

    def merge(self, other: "EmpiricalDistribution") -> "EmpiricalDistribution":
        out = dict(self.weights)
        for c, v in other.weights.items():
            out[c] = out.get(c, 0.0) + v
        return EmpiricalDistribution(out, self.total_time + other.total_time)

    def tv_distance(self, exact: Mapping) -> float:
        return total_variation(self.fractions(), exact)

    def to_json(self, basis: Sequence | None = None) -> dict:
        fr = self.fractions()
        keys = basis if basis is not None else sorted(fr)
        return {format_config(c): fr.get(c, 0.0) for c in keys}


def event_list(state: Configuration, w: Sequence[float]) -> list:
    """Every ``(target, rate)`` jump out of ``state``; events stay separate
    even when several lead to the same target."""
    return [(target, float(w[sp - 1])) for _, target, sp in config_transitions(state)]


@lru_cache(maxsize=1 << 16)
def _table(state, w):
    ev = event_list(state, w)
    if not ev:
        raise AssertionError(f"no events out of {format_config(state)}")
    targets = [t for t, _ in ev]
    cum = list(accumulate(r for _, r in ev))
    return targets, cum, cum[-1]


def step(state: Configuration, w: Sequence[float], rng: np.random.Generator) -> tuple:
    """One jump: ``(next_state, holding_time)``."""
    targets, cum, total = _table(tuple(state), tuple(float(x) for x in w))
    u1, u2 = rng.random(2)
    hold = -math.log1p(-u1) / total
    k = min(bisect_right(cum, u2 * total), len(cum) - 1)
    return targets[k], hold


def _trajectory(cfg: SimConfig, rng: np.random.Generator) -> EmpiricalDistribution:
    state = cfg.start if cfg.start is not None else enumerate_sector(cfg.sector)[0]
    w = cfg.w
    weights: dict = {}
    total_time = 0.0
    done = 0
    while done < cfg.events:
        chunk = min(_BATCH, cfg.events - done)
        holds = -np.log1p(-rng.random(chunk))
        picks = rng.random(chunk)
        for h, u in zip(holds.tolist(), picks.tolist()):
            targets, cum, total = _table(state, w)
            if done >= cfg.burn_in:
                dt = h / total
                weights[state] = weights.get(state, 0.0) + dt
                total_time += dt
            k = bisect_right(cum, u * total)
            state = targets[k if k < len(cum) else len(cum) - 1]
            done += 1
    return EmpiricalDistribution(weights, total_time)


def run(cfg: SimConfig) -> EmpiricalDistribution:
    """One trajectory; deterministic given ``cfg.seed``."""
    return _trajectory(cfg, make_rng(cfg.seed))


def run_replicas(cfg: SimConfig, replicas: int, threads: int = 1) -> EmpiricalDistribution:
    """Independent trajectories from spawned seeds, merged in replica order.

    The thread count only changes scheduling, never the result.
    """
    if replicas < 1:
        raise ValueError("need at least one replica")
    children = np.random.SeedSequence(cfg.seed).spawn(replicas)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda s: _trajectory(cfg, make_rng(s)), children))
    else:
        parts = [_trajectory(cfg, make_rng(s)) for s in children]
    out = EmpiricalDistribution()
    for p in parts:
        out = out.merge(p)
    return out
