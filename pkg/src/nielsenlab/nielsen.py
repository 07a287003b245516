"""Nielsen moves on tuples of group elements and their orbits.

A tuple ``(g_1, ..., g_n)`` of element ids stands for the homomorphism from
the free group of rank ``n`` sending the i-th basis element to ``g_i``.
Moves use 0-based positions internally; the JSON witness format is 1-based.
"""

from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from typing import Iterable, Iterator, Sequence

import numpy as np

from .groups import (FiniteGroup, UnsupportedOperation, basis_matrix, build, closure_mask,
                     determinant_class, elementary_abelian_params)
from .lattice import BudgetExceeded, SubgroupLattice

KINDS = ("swap", "invert", "rmul", "rmulinv")


@dataclass(frozen=True)
class Move:
    """One elementary move.

    ``swap`` exchanges positions ``i`` and ``j``; ``invert`` replaces ``g_i``
    by its inverse; ``rmul`` replaces ``g_i`` by ``g_i g_j`` and ``rmulinv``
    by ``g_i g_j^-1``.
    """

    op: str
    i: int
    j: int | None = None

    def __post_init__(self):
        if self.op not in KINDS:
            raise ValueError(f"unknown move {self.op!r}")
        if self.op == "invert":
            if self.j is not None:
                raise ValueError("invert takes a single index")
        elif self.j is None:
            raise ValueError(f"{self.op} needs two indices")
        elif self.op != "swap" and self.i == self.j:
            raise ValueError("multiplication moves need i != j")

    def inverse(self) -> "Move":
        if self.op == "rmul":
            return Move("rmulinv", self.i, self.j)
        if self.op == "rmulinv":
            return Move("rmul", self.i, self.j)
        return self

    def to_json(self) -> dict:
        if self.op == "invert":
            return {"op": "invert", "i": self.i + 1}
        if self.op == "swap":
            return {"op": "swap", "i": self.i + 1, "j": self.j + 1}
        return {"op": "rmul", "i": self.i + 1, "j": self.j + 1, "inv": self.op == "rmulinv"}

    @classmethod
    def from_json(cls, d: dict) -> "Move":
        op = d["op"]
        if op == "invert":
            return cls("invert", d["i"] - 1)
        if op == "swap":
            return cls("swap", d["i"] - 1, d["j"] - 1)
        if op == "rmul":
            return cls("rmulinv" if d.get("inv") else "rmul", d["i"] - 1, d["j"] - 1)
        raise ValueError(f"unknown move {op!r}")

    def __str__(self) -> str:
        if self.op == "invert":
            return f"Invert({self.i + 1})"
        name = {"swap": "Swap", "rmul": "RightMul", "rmulinv": "RightMulInv"}[self.op]
        return f"{name}({self.i + 1},{self.j + 1})"


def swap(i: int, j: int) -> Move:
    return Move("swap", i, j)


def invert(i: int) -> Move:
    return Move("invert", i)


def rmul(i: int, j: int, inverse: bool = False) -> Move:
    return Move("rmulinv" if inverse else "rmul", i, j)


def apply(g: FiniteGroup, move: Move, t: Sequence[int]) -> tuple[int, ...]:
    n = len(t)
    for idx in (move.i, move.j):
        if idx is not None and not 0 <= idx < n:
            raise IndexError(f"{move} out of range for a {n}-tuple")
    out = list(t)
    if move.op == "swap":
        out[move.i], out[move.j] = out[move.j], out[move.i]
    elif move.op == "invert":
        out[move.i] = g.inv(out[move.i])
    elif move.op == "rmul":
        out[move.i] = g.mul(out[move.i], out[move.j])
    else:
        out[move.i] = g.mul(out[move.i], g.inv(out[move.j]))
    return tuple(out)


def replay(g: FiniteGroup, moves: Iterable[Move], t: Sequence[int]) -> tuple[int, ...]:
    t = tuple(t)
    for m in moves:
        t = apply(g, m, t)
    return t


def trace(g: FiniteGroup, moves: Iterable[Move], t: Sequence[int]) -> Iterator[tuple[int, ...]]:
    """Yield the tuple before the first move and after every move."""
    t = tuple(t)
    yield t
    for m in moves:
        t = apply(g, m, t)
        yield t


def inverse_sequence(moves: Sequence[Move]) -> list[Move]:
    return [m.inverse() for m in reversed(moves)]


def witness_to_json(moves: Sequence[Move]) -> list[dict]:
    return [m.to_json() for m in moves]


def witness_from_json(data) -> list[Move]:
    if isinstance(data, str):
        data = json.loads(data)
    return [Move.from_json(d) for d in data]


def image(g: FiniteGroup, t: Sequence[int]) -> np.ndarray:
    """Membership mask of the subgroup generated by the entries."""
    return closure_mask(g, t)


def verify_witness(g: FiniteGroup, source: Sequence[int], moves: Sequence[Move],
                   endpoint: Sequence[int] | None = None, check_image: bool = True) -> bool:
    """Replay ``moves`` from ``source``; optionally compare the endpoint and
    check the generated subgroup at every intermediate step."""
    ref = image(g, source) if check_image else None
    last = None
    try:
        for last in trace(g, moves, source):
            if ref is not None and not (image(g, last) == ref).all():
                return False
    except (IndexError, ValueError):
        return False
    return endpoint is None or tuple(last) == tuple(endpoint)


def generator_moves(n: int) -> list[Move]:
    """Inverse-closed generating moves used for orbit search."""
    out = [swap(i, i + 1) for i in range(n - 1)] + [invert(i) for i in range(n)]
    for i in range(n):
        for j in range(n):
            if i != j:
                out += [rmul(i, j), rmul(i, j, inverse=True)]
    return out


def all_moves(n: int) -> list[Move]:
    """Every legal move: swaps ``i < j``, inversions and both multiplications for ``i != j``."""
    out = [swap(i, j) for i in range(n) for j in range(i + 1, n)]
    out += [invert(i) for i in range(n)]
    for i in range(n):
        for j in range(n):
            if i != j:
                out += [rmul(i, j), rmul(i, j, inverse=True)]
    return out


# ---------------------------------------------------------------------------
# Orbits of explicit tuples


def pack(g: FiniteGroup, rows: np.ndarray) -> np.ndarray:
    rows = np.asarray(rows, dtype=np.int64)
    radix = g.order ** np.arange(rows.shape[-1] - 1, -1, -1, dtype=np.int64)
    return rows @ radix


def unpack(g: FiniteGroup, codes: np.ndarray, n: int) -> np.ndarray:
    codes = np.asarray(codes, dtype=np.int64)
    out = np.empty(codes.shape + (n,), dtype=np.int64)
    for k in range(n - 1, -1, -1):
        out[..., k] = codes % g.order
        codes = codes // g.order
    return out


def _apply_rows(g: FiniteGroup, move: Move, rows: np.ndarray) -> np.ndarray:
    out = rows.copy()
    if move.op == "swap":
        out[:, [move.i, move.j]] = rows[:, [move.j, move.i]]
    elif move.op == "invert":
        out[:, move.i] = g.inverses[rows[:, move.i]]
    elif move.op == "rmul":
        out[:, move.i] = g.mul_vec(rows[:, move.i], rows[:, move.j])
    else:
        out[:, move.i] = g.mul_vec(rows[:, move.i], g.inverses[rows[:, move.j]])
    return out


@dataclass
class Orbit:
    group: FiniteGroup = field(repr=False)
    n: int
    codes: np.ndarray = field(repr=False)
    complete: bool

    def __len__(self) -> int:
        return len(self.codes)

    def __contains__(self, t) -> bool:
        code = int(pack(self.group, np.asarray(t)[None, :])[0])
        pos = np.searchsorted(self.codes, code)
        return pos < len(self.codes) and self.codes[pos] == code

    def tuples(self) -> list[tuple[int, ...]]:
        return [tuple(int(x) for x in row) for row in unpack(self.group, self.codes, self.n)]


def orbit(g: FiniteGroup, t: Sequence[int], cap: int | None = None) -> Orbit:
    """Breadth-first closure of ``t`` under :func:`generator_moves`.

    With ``cap`` set, the search stops once more than ``cap`` tuples are known
    and the result is flagged incomplete.
    """
    n = len(t)
    if g.order ** n >= 2**62:
        raise BudgetExceeded(f"|G|^n = {g.order}^{n} is too large to pack")
    moves = generator_moves(n)
    frontier = np.asarray([t], dtype=np.int64)
    visited = pack(g, frontier)
    while len(frontier):
        new = np.concatenate([_apply_rows(g, m, frontier) for m in moves])
        codes, first = np.unique(pack(g, new), return_index=True)
        fresh = ~np.isin(codes, visited, assume_unique=True)
        frontier = new[first[fresh]]
        visited = np.union1d(visited, codes[fresh])
        if cap is not None and len(visited) > cap:
            return Orbit(g, n, visited, complete=False)
    return Orbit(g, n, visited, complete=True)


# ---------------------------------------------------------------------------
# Classification


@dataclass
class OrbitInfo:
    representative: tuple[int, ...]
    size: int
    image_subgroup: int
    is_epi_of_image: bool = False
    label: tuple | None = None
    canonical_states: int = 0

    @property
    def redundant(self) -> bool:
        """Whether the orbit contains a tuple with an identity entry, i.e. is
        1-redundant.  The representative is the orbit's least canonical state
        and identity entries sort first, so it suffices to look at it."""
        return 0 in self.representative

    def to_json(self, g: FiniteGroup) -> dict:
        return {
            "representative": list(self.representative),
            "representative_labels": [g.label(x) for x in self.representative],
            "size": self.size,
            "image_subgroup": self.image_subgroup,
            "is_epi_of_image": self.is_epi_of_image,
            "label": list(self.label) if self.label is not None else None,
            "redundant": self.redundant,
        }


@dataclass
class OrbitReport:
    group: FiniteGroup = field(repr=False)
    n: int
    orbits: list[OrbitInfo]
    matched_classification: bool
    anomalies: list[int] = field(default_factory=list)
    cap: int | None = None

    @property
    def total(self) -> int:
        return sum(o.size for o in self.orbits)

    def orbits_with_image(self, h: int) -> list[OrbitInfo]:
        return [o for o in self.orbits if o.image_subgroup == h]

    def to_json(self) -> dict:
        return {
            "group": self.group.name,
            "order": self.group.order,
            "n": self.n,
            "cap": self.cap,
            "num_orbits": len(self.orbits),
            "matched_classification": self.matched_classification,
            "anomalies": self.anomalies,
            "orbits": [o.to_json(self.group) for o in self.orbits],
        }


def _canonical_moves(rows: np.ndarray, g: FiniteGroup, reps: np.ndarray, cls: np.ndarray,
                     i: int, j: int, kind: int) -> np.ndarray:
    a, b = reps[rows[:, i]], reps[rows[:, j]]
    if kind == 0:
        new = g.mul_vec(a, b)
    elif kind == 1:
        new = g.mul_vec(a, g.inverses[b])
    elif kind == 2:
        new = g.mul_vec(b, a)
    else:
        new = g.mul_vec(g.inverses[b], a)
    out = rows.copy()
    out[:, i] = cls[new]
    out.sort(axis=1)
    return out


def classify(g: FiniteGroup, n: int, lat: SubgroupLattice, cap: int = 50_000_000,
             samples: int = 16, seed: int = 0) -> OrbitReport:
    """Partition ``G^n`` into orbits of the automorphism group of the free group.

    Permutations of positions and inversions of entries are themselves in
    the acting group, so every orbit is a union of their orbits.  The search
    therefore runs on multisets of ``{g, g^-1}`` classes and moves between
    them by the four one-sided multiplications (closed under conjugation by
    permutations and inversions).  Each multiset stands for exactly
    ``n!/prod(mult!) * 2^(#entries with g != g^-1)`` tuples.
    """
    inv = g.inverses
    ids = np.arange(g.order)
    rep_of = np.minimum(ids, inv)
    reps = np.unique(rep_of)
    cls = np.searchsorted(reps, rep_of)
    K = len(reps)
    two = (reps != inv[reps]).astype(np.int64)
    count = math.comb(K + n - 1, n)
    if count > cap:
        raise BudgetExceeded(f"{count} canonical states exceed cap={cap}")
    if K ** n >= 2**62:
        raise BudgetExceeded("canonical states too wide to pack")
    states = np.array(list(combinations_with_replacement(range(K), n)), dtype=np.int64).reshape(-1, n)
    radix = K ** np.arange(n - 1, -1, -1, dtype=np.int64)
    keys = states @ radix  # already increasing
    # multiplicity weight of each multiset
    fact = np.array([math.factorial(k) for k in range(n + 1)], dtype=np.float64)
    denom = np.ones(len(states), dtype=np.int64)
    for c in range(K):
        denom *= fact[(states == c).sum(axis=1)].astype(np.int64)
    twos = two[states].sum(axis=1)
    weight = [math.factorial(n) // int(dd) * (1 << int(tw)) for dd, tw in zip(denom, twos)]
    weight = np.array(weight, dtype=object)

    label = np.full(len(states), -1, dtype=np.int64)
    pairs = [(i, j, k) for i in range(n) for j in range(n) if i != j for k in range(4)]
    rng = np.random.default_rng(seed)
    orbits: list[OrbitInfo] = []
    for start in range(len(states)):
        if label[start] >= 0:
            continue
        comp = len(orbits)
        label[start] = comp
        frontier = np.array([start])
        members = [frontier]
        while len(frontier):
            rows = states[frontier]
            found = []
            for i, j, k in pairs:
                nb = _canonical_moves(rows, g, reps, cls, i, j, k)
                idx = np.searchsorted(keys, nb @ radix)
                found.append(idx)
            idx = np.unique(np.concatenate(found))
            idx = idx[label[idx] < 0]
            label[idx] = comp
            frontier = idx
            members.append(idx)
        members = np.concatenate(members)
        rep_tuple = tuple(int(x) for x in reps[states[start]])
        h = lat.generated(rep_tuple)
        for s in rng.choice(members, size=min(samples, len(members)), replace=False):
            if lat.generated(reps[states[s]]) != h:
                raise AssertionError("image subgroup not constant on an orbit")
        size = int(sum(weight[members]))
        orbits.append(OrbitInfo(rep_tuple, size, h, canonical_states=len(members)))

    total = sum(o.size for o in orbits)
    if total != g.order ** n:
        raise AssertionError(f"orbit sizes sum to {total}, expected {g.order ** n}")
    by_image: dict[int, list[OrbitInfo]] = {}
    for o in orbits:
        by_image.setdefault(o.image_subgroup, []).append(o)
    for h, os in by_image.items():
        if len(os) == 1:
            os[0].is_epi_of_image = True
    matched = all(len(os) == 1 for os in by_image.values())
    anomalies: list[int] = []
    if not matched:
        anomalies = _label_orbits(g, n, lat, by_image)
    orbits.sort(key=lambda o: (o.image_subgroup, o.label or (), o.representative))
    return OrbitReport(g, n, orbits, matched, anomalies)


def _label_orbits(g: FiniteGroup, n: int, lat: SubgroupLattice,
                  by_image: dict[int, list[OrbitInfo]]) -> list[int]:
    """Attach determinant labels where they explain split orbits; return the
    image subgroups whose splitting stays unexplained."""
    params = elementary_abelian_params(g)
    gl = None
    if params is not None and params[0] == n:
        r, q = params
        gl = build(f"gl:{r},{q}")
    anomalies = []
    for h, os in sorted(by_image.items()):
        if len(os) == 1:
            continue
        if gl is not None and h == lat.full:
            for o in os:
                o.label = determinant_class(gl, basis_matrix(g, o.representative, gl))
            if len({o.label for o in os}) == len(os):
                continue
        anomalies.append(h)
    return anomalies


def epi_count(g: FiniteGroup, n: int, lat: SubgroupLattice, h: int | None = None) -> int:
    """Number of ``n``-tuples generating lattice subgroup ``h`` (default: all of ``g``),
    by Moebius inversion over the subgroups of ``h``."""
    h = lat.full if h is None else h
    below = [i for i in range(len(lat.subgroups)) if lat.contains(h, i)]
    mu: dict[int, int] = {h: 1}
    for i in sorted(below, key=lambda i: -lat.subgroups[i].order):
        if i == h:
            continue
        mu[i] = -sum(mu[k] for k in below if k != i and k in mu and lat.contains(k, i))
    return sum(mu[i] * lat.subgroups[i].order ** n for i in below)


# ---------------------------------------------------------------------------
# Redundancy


@dataclass
class RedundancyResult:
    result: bool | None
    witness: list[Move]
    endpoint: tuple[int, ...] | None
    complete: bool = True

    def to_json(self) -> dict:
        return {"result": self.result, "complete": self.complete,
                "endpoint": list(self.endpoint) if self.endpoint is not None else None,
                "witness": witness_to_json(self.witness)}


def _prefix_generates(g: FiniteGroup, t: Sequence[int], keep: int, target: np.ndarray) -> bool:
    return bool((closure_mask(g, t[:keep]) == target).all())


def greedy_compress(g: FiniteGroup, t: Sequence[int]) -> tuple[list[Move], tuple[int, ...]]:
    """Clear every entry lying in the subgroup generated by the others
    (lowest index first) and move the cleared entries to the end."""
    from .normalize import clear_entry

    moves: list[Move] = []
    cur = tuple(t)
    changed = True
    while changed:
        changed = False
        for i, x in enumerate(cur):
            if x == 0:
                continue
            others = [y for k, y in enumerate(cur) if k != i]
            if closure_mask(g, others)[x]:
                seq, cur = clear_entry(g, cur, i)
                moves += seq
                changed = True
                break
    seq, cur = push_identities_back(cur)
    return moves + seq, cur


def push_identities_back(t: Sequence[int]) -> tuple[list[Move], tuple[int, ...]]:
    """Swaps moving identity entries behind all others, keeping their order."""
    cur = list(t)
    moves = []
    n = len(cur)
    target = 0
    for i in range(n):
        if cur[i] != 0:
            if i != target:
                moves.append(swap(target, i))
                cur[target], cur[i] = cur[i], cur[target]
            target += 1
    return moves, tuple(cur)


def is_redundant(g: FiniteGroup, t: Sequence[int], k: int = 1, cap: int = 1_000_000
                 ) -> RedundancyResult:
    """Decide whether some tuple in the orbit of ``t`` has its first ``n-k``
    entries generating the same subgroup as all of ``t``."""
    t = tuple(int(x) for x in t)
    n = len(t)
    if not 1 <= k < n:
        raise ValueError("need 1 <= k < n")
    target = image(g, t)
    if _prefix_generates(g, t, n - k, target):
        return RedundancyResult(True, [], t)
    moves, end = greedy_compress(g, t)
    if _prefix_generates(g, end, n - k, target):
        return RedundancyResult(True, moves, end)
    # exhaustive search with parent pointers
    gens = generator_moves(n)
    parent: dict[tuple[int, ...], tuple[tuple[int, ...], Move] | None] = {t: None}
    queue = deque([t])
    while queue:
        cur = queue.popleft()
        for m in gens:
            nxt = apply(g, m, cur)
            if nxt in parent:
                continue
            parent[nxt] = (cur, m)
            if _prefix_generates(g, nxt, n - k, target):
                path = []
                node = nxt
                while parent[node] is not None:
                    prev, mv = parent[node]
                    path.append(mv)
                    node = prev
                return RedundancyResult(True, path[::-1], nxt)
            if len(parent) > cap:
                return RedundancyResult(None, [], None, complete=False)
            queue.append(nxt)
    return RedundancyResult(False, [], None)


def partial_redundancy_lift(g: FiniteGroup, t: Sequence[int], prefix_len: int,
                            prefix_witness: Sequence[Move]) -> list[Move]:
    """Turn a redundancy witness for ``t[:prefix_len]`` into one for ``t``.

    After the prefix moves, the last prefix entry lies in the subgroup of the
    other prefix entries, hence in that of all remaining entries; a swap puts
    it at the end of the tuple.
    """
    t = tuple(t)
    j = prefix_len
    if not 1 <= j <= len(t):
        raise ValueError("prefix_len out of range")
    for m in prefix_witness:
        if max(m.i, m.j if m.j is not None else 0) >= j:
            raise ValueError(f"prefix witness move {m} leaves the prefix")
    prefix = replay(g, prefix_witness, t[:j])
    if not (closure_mask(g, prefix[:j - 1]) == closure_mask(g, t[:j])).all():
        raise ValueError("prefix witness does not exhibit redundancy of the prefix")
    moves = list(prefix_witness)
    if j != len(t):
        moves.append(swap(j - 1, len(t) - 1))
    return moves
