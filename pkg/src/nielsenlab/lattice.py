"""Subgroup lattices of small finite groups.

Subgroups are found by seeding with the cyclic subgroups and then closing
joins ``<H, c>`` of known subgroups with cyclic subgroups until nothing new
appears.  Every subgroup is a join of cyclic subgroups, so the fixed point is
the whole lattice.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .groups import FiniteGroup, Subgroup, closure_mask, is_normal

DEFAULT_MAX_ORDER = 10_000


class BudgetExceeded(RuntimeError):
    """A search hit its budget; ``partial`` carries whatever was found."""

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial


def _key(mask: np.ndarray) -> bytes:
    return np.packbits(mask).tobytes()


@dataclass
class SubgroupLattice:
    owner: FiniteGroup = field(repr=False)
    subgroups: list[Subgroup]
    inclusion: list[tuple[int, int]]
    conjugacy_classes: list[list[int]]

    def __post_init__(self):
        self._index = {_key(h.mask): i for i, h in enumerate(self.subgroups)}
        self._joins: dict[tuple[int, int], int] = {}

    def __len__(self) -> int:
        return len(self.subgroups)

    @property
    def trivial(self) -> int:
        return 0

    @property
    def full(self) -> int:
        return len(self.subgroups) - 1

    def index_of(self, members) -> int:
        """Lattice index of the subgroup with the given members (mask or ids)."""
        members = np.asarray(members)
        if members.dtype != bool:
            mask = np.zeros(self.owner.order, dtype=bool)
            mask[members] = True
            members = mask
        return self._index[_key(members)]

    def generated(self, elems) -> int:
        """Index of the subgroup generated by ``elems``."""
        h = 0
        for x in elems:
            h = self.join_element(h, int(x))
        return h

    def join_element(self, h: int, x: int) -> int:
        """Index of ``<H_h, x>``, memoized."""
        if self.subgroups[h].mask[x]:
            return h
        key = (h, x)
        out = self._joins.get(key)
        if out is None:
            gens = list(self.subgroups[h].generators) + [x]
            out = self._index[_key(closure_mask(self.owner, gens))]
            self._joins[key] = out
        return out

    @cached_property
    def orders(self) -> np.ndarray:
        return np.array([h.order for h in self.subgroups])

    @cached_property
    def normal(self) -> list[int]:
        return [i for i, h in enumerate(self.subgroups) if is_normal(self.owner, h.members)]

    @cached_property
    def class_of(self) -> list[int]:
        out = [0] * len(self.subgroups)
        for c, members in enumerate(self.conjugacy_classes):
            for i in members:
                out[i] = c
        return out

    @cached_property
    def covers(self) -> list[list[int]]:
        """``covers[j]`` lists the maximal subgroups of subgroup ``j``."""
        out: list[list[int]] = [[] for _ in self.subgroups]
        for i, j in self.inclusion:
            out[j].append(i)
        return out

    def contains(self, big: int, small: int) -> bool:
        return bool(self.subgroups[big].mask[list(self.subgroups[small].members)].all())

    def to_json(self) -> dict:
        return {
            "group": self.owner.name,
            "order": self.owner.order,
            "subgroups": [list(h.members) for h in self.subgroups],
            "covering_pairs": [list(p) for p in self.inclusion],
            "conjugacy_classes": self.conjugacy_classes,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def _cyclic_masks(g: FiniteGroup) -> dict[bytes, tuple[np.ndarray, int]]:
    out: dict[bytes, tuple[np.ndarray, int]] = {}
    for x in range(g.order):
        m = closure_mask(g, [x])
        out.setdefault(_key(m), (m, x))
    return out


def enumerate_subgroups(g: FiniteGroup, budget: int | None = None,
                        max_order: int = DEFAULT_MAX_ORDER) -> SubgroupLattice:
    """All subgroups of ``g`` with covering relation and conjugacy classes.

    Subgroups are listed by increasing order (ties broken by member set), so
    index 0 is the trivial group and the last index is ``g`` itself.
    """
    if g.order > max_order:
        raise BudgetExceeded(f"group order {g.order} exceeds max_order={max_order}")
    cyclic = list(_cyclic_masks(g).values())
    found: dict[bytes, tuple[np.ndarray, tuple[int, ...]]] = {}
    frontier = []
    for m, x in cyclic:
        gens = () if x == 0 else (x,)
        found[_key(m)] = (m, gens)
        frontier.append(_key(m))
    cyc_gens = [x for _, x in cyclic if x != 0]
    while frontier:
        nxt = []
        for k in frontier:
            m, gens = found[k]
            for x in cyc_gens:
                if m[x]:
                    continue
                joined = closure_mask(g, gens + (x,))
                jk = _key(joined)
                if jk not in found:
                    found[jk] = (joined, gens + (x,))
                    nxt.append(jk)
                    if budget is not None and len(found) > budget:
                        raise BudgetExceeded(
                            f"more than {budget} subgroups", partial=_partial(g, found))
        frontier = nxt
    return _assemble(g, list(found.values()))


def _partial(g: FiniteGroup, found) -> list[Subgroup]:
    return [Subgroup(g, tuple(int(i) for i in np.flatnonzero(m)), gens) for m, gens in found.values()]


def _assemble(g: FiniteGroup, entries) -> SubgroupLattice:
    entries.sort(key=lambda e: (int(e[0].sum()), tuple(np.flatnonzero(e[0]))))
    subs = [Subgroup(g, tuple(int(i) for i in np.flatnonzero(m)), gens) for m, gens in entries]
    masks = np.array([m for m, _ in entries])
    n = len(subs)
    # contain[i, j]: H_i <= H_j
    contain = np.zeros((n, n), dtype=bool)
    for i in range(n):
        contain[i] = masks[:, masks[i]].all(axis=1)
    strict = contain & ~np.eye(n, dtype=bool)
    inclusion = []
    for j in range(n):
        below = np.flatnonzero(strict[:, j])
        for i in below:
            # maximal iff nothing strictly between
            if not (strict[i, below]).any():
                inclusion.append((int(i), int(j)))
    # conjugacy classes
    index = {_key(m): i for i, (m, _) in enumerate(entries)}
    ids = np.arange(g.order)
    inv = g.inverses
    cls = [-1] * n
    classes: list[list[int]] = []
    for i in range(n):
        if cls[i] >= 0:
            continue
        members = np.flatnonzero(masks[i])
        conj = g.mul_vec(g.mul_vec(ids[:, None], members[None, :]), inv[ids][:, None])
        seen = set()
        for row in conj:
            m = np.zeros(g.order, dtype=bool)
            m[row] = True
            seen.add(index[_key(m)])
        c = len(classes)
        for k in seen:
            cls[k] = c
        classes.append(sorted(seen))
    return SubgroupLattice(g, subs, inclusion, classes)


def chain_length(lat: SubgroupLattice) -> int:
    """Longest chain of subgroups from the trivial group to the whole group."""
    return chain_witness(lat)[0]


def chain_witness(lat: SubgroupLattice) -> tuple[int, list[int]]:
    n = len(lat.subgroups)
    best = [0] * n
    prev = [-1] * n
    # subgroups are sorted by order, so covers come first
    for j in range(n):
        for i in lat.covers[j]:
            if best[i] + 1 > best[j]:
                best[j], prev[j] = best[i] + 1, i
    chain, k = [], lat.full
    while k >= 0:
        chain.append(k)
        k = prev[k]
    return best[lat.full], chain[::-1]
