"""Lazy random walks of Nielsen moves and their empirical distributions.

The walk stays put with probability ``laziness`` and otherwise applies a
move drawn uniformly from every legal move.  When the orbit of the start
tuple can be enumerated the walk runs on a precomputed transition table and
its occupation measure is compared with the uniform distribution on the
orbit.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .groups import FiniteGroup, build
from .nielsen import Move, _apply_rows, all_moves, apply, orbit, pack, unpack


@dataclass
class WalkConfig:
    group: str | FiniteGroup
    n: int
    start: tuple[int, ...]
    steps: int
    burn_in: int = 0
    seed: int = 0
    laziness: float = 0.5
    cap: int | None = 2_000_000

    def __post_init__(self):
        if not self.steps > self.burn_in >= 0:
            raise ValueError("need steps > burn_in >= 0")
        if not 0 <= self.laziness < 1:
            raise ValueError("laziness must lie in [0, 1)")
        if len(self.start) != self.n:
            raise ValueError("start tuple has the wrong length")

    def resolve(self) -> FiniteGroup:
        return build(self.group) if isinstance(self.group, str) else self.group


@dataclass
class MixReport:
    group: str
    n: int
    steps: int
    burn_in: int
    seed: int
    laziness: float
    orbit_size: int
    exact: bool
    counts: dict[tuple[int, ...], int] = field(repr=False)
    tv: float
    chi2: float
    dof: int
    coverage: float

    def to_json(self) -> dict:
        return {
            "group": self.group, "n": self.n, "steps": self.steps, "burn_in": self.burn_in,
            "seed": self.seed, "laziness": self.laziness, "orbit_size": self.orbit_size,
            "exact": self.exact, "tv": self.tv, "chi2": self.chi2, "dof": self.dof,
            "coverage": self.coverage,
            "counts": [[list(k), v] for k, v in sorted(self.counts.items())],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def transition_table(g: FiniteGroup, codes: np.ndarray, n: int, moves: Sequence[Move]) -> np.ndarray:
    """``table[s, k]``: index of the state reached from state ``s`` by ``moves[k]``."""
    rows = unpack(g, codes, n)
    table = np.empty((len(codes), len(moves)), dtype=np.int64)
    for k, m in enumerate(moves):
        nxt = pack(g, _apply_rows(g, m, rows))
        idx = np.searchsorted(codes, nxt)
        if (idx >= len(codes)).any() or (codes[np.minimum(idx, len(codes) - 1)] != nxt).any():
            raise ValueError("state set is not closed under the moves")
        table[:, k] = idx
    return table


def _stats(counts: np.ndarray, size: int) -> tuple[float, float, int, float]:
    total = counts.sum()
    p = counts / total
    tv = 0.5 * float(np.abs(p - 1.0 / size).sum() + (size - len(counts)) / size)
    expected = total / size
    chi2 = float((((counts - expected) ** 2) / expected).sum() + (size - len(counts)) * expected)
    coverage = float((counts > 0).sum()) / size
    return tv, chi2, size - 1, coverage


def walk(cfg: WalkConfig) -> MixReport:
    g = cfg.resolve()
    start = tuple(int(x) for x in cfg.start)
    moves = all_moves(cfg.n)
    rng = np.random.default_rng(cfg.seed)
    orb = orbit(g, start, cap=cfg.cap)
    if orb.complete:
        codes = orb.codes
        table = transition_table(g, codes, cfg.n, moves).tolist()
        state = int(np.searchsorted(codes, pack(g, np.asarray([start]))[0]))
        visits = np.zeros(len(codes), dtype=np.int64)
        chunk = 1 << 16
        done = 0
        while done < cfg.steps:
            k = min(chunk, cfg.steps - done)
            stay = (rng.random(k) < cfg.laziness).tolist()
            pick = rng.integers(0, len(moves), size=k).tolist()
            trail = np.empty(k, dtype=np.int64)
            for t in range(k):
                if not stay[t]:
                    state = table[state][pick[t]]
                trail[t] = state
            lo = max(0, cfg.burn_in - done)
            if lo < k:
                visits += np.bincount(trail[lo:], minlength=len(codes))
            done += k
        tv, chi2, dof, cov = _stats(visits.astype(float), len(codes))
        tuples = unpack(g, codes[visits > 0], cfg.n)
        counts = {tuple(int(x) for x in row): int(c) for row, c in zip(tuples, visits[visits > 0])}
        return MixReport(g.name, cfg.n, cfg.steps, cfg.burn_in, cfg.seed, cfg.laziness,
                         len(codes), True, counts, tv, chi2, dof, cov)
    # orbit too large: walk on tuples directly and compare with the visited set
    state = start
    counts: dict[tuple[int, ...], int] = {}
    stay = rng.random(cfg.steps) < cfg.laziness
    pick = rng.integers(0, len(moves), size=cfg.steps)
    for t in range(cfg.steps):
        if not stay[t]:
            state = apply(g, moves[pick[t]], state)
        if t >= cfg.burn_in:
            counts[state] = counts.get(state, 0) + 1
    arr = np.array(list(counts.values()), dtype=float)
    tv, chi2, dof, cov = _stats(arr, len(arr))
    return MixReport(g.name, cfg.n, cfg.steps, cfg.burn_in, cfg.seed, cfg.laziness,
                     len(arr), False, counts, tv, chi2, dof, cov)


def spawn_seeds(seed: int, count: int) -> list[int]:
    """Independent child seeds for parallel walks."""
    children = np.random.SeedSequence(seed).spawn(count)
    return [int(c.generate_state(1)[0]) for c in children]


def invariance_check(g: FiniteGroup, n: int, distribution: Mapping[tuple[int, ...], float]) -> float:
    """Largest total variation distance between ``distribution`` and its
    image under a single move, over all moves."""
    support = {tuple(int(x) for x in k): float(v) for k, v in distribution.items() if v}
    worst = 0.0
    for m in all_moves(n):
        pushed: dict[tuple[int, ...], float] = {}
        for t, p in support.items():
            s = apply(g, m, t)
            pushed[s] = pushed.get(s, 0.0) + p
        keys = set(support) | set(pushed)
        tv = 0.5 * sum(abs(support.get(k, 0.0) - pushed.get(k, 0.0)) for k in keys)
        worst = max(worst, tv)
    return worst


def uniform_on(tuples) -> dict[tuple[int, ...], float]:
    tuples = [tuple(t) for t in tuples]
    return {t: 1.0 / len(tuples) for t in tuples}
