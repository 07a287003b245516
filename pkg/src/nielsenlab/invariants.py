"""Rank, incompressibility and chain invariants of finite groups.

All searches run over the subgroup lattice, so ``<S, x>`` is a memoized join
rather than a fresh closure.  Incompressibility is inherited by subsets,
which lets the incompressible-set search grow sets one element at a time and
prune with the chain bound: ``|S| + height(<S>)`` caps every extension of
``S``, where ``height(H)`` is the longest subgroup chain from ``H`` up to ``G``.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .groups import FiniteGroup, closure_mask
from .lattice import BudgetExceeded, SubgroupLattice, chain_witness, enumerate_subgroups


def lattice_of(g: FiniteGroup) -> SubgroupLattice:
    """Subgroup lattice of ``g``, computed once and cached on the group."""
    lat = g.__dict__.get("_lattice")
    if lat is None:
        lat = enumerate_subgroups(g)
        g.__dict__["_lattice"] = lat
    return lat


def binary_ones(n: int) -> int:
    """Number of 1 digits in the binary expansion of ``n``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return bin(n).count("1")


def element_class_reps(g: FiniteGroup) -> list[int]:
    """Smallest id in each conjugacy class of elements."""
    ids = np.arange(g.order)
    seen = np.zeros(g.order, dtype=bool)
    reps = []
    for x in range(g.order):
        if not seen[x]:
            reps.append(x)
            seen[g.mul_vec(g.mul_vec(ids, x), g.inverses)] = True
    return reps


def _chain_profile(lat: SubgroupLattice) -> tuple[list[int], list[int]]:
    """``depth[h] = cl(H_h)`` and ``height[h]`` = longest chain from ``H_h`` up to ``G``."""
    n = len(lat.subgroups)
    depth = [0] * n
    for j in range(n):
        for i in lat.covers[j]:
            depth[j] = max(depth[j], depth[i] + 1)
    height = [0] * n
    for j in range(n - 1, -1, -1):
        for i in lat.covers[j]:
            height[i] = max(height[i], height[j] + 1)
    return depth, height


def generates(g: FiniteGroup, elems) -> bool:
    return bool(closure_mask(g, elems).all())


def is_incompressible(g: FiniteGroup, s) -> bool:
    """True iff no element of ``s`` lies in the subgroup generated by the others."""
    s = list(s)
    if len(set(s)) != len(s):
        return False
    for i, x in enumerate(s):
        if closure_mask(g, s[:i] + s[i + 1:])[x]:
            return False
    return True


def rank(g: FiniteGroup, lat: SubgroupLattice | None = None, target: int | None = None
         ) -> tuple[int, tuple[int, ...]]:
    """Smallest generating set of ``g`` (or of lattice subgroup ``target``).

    Returns ``(d, witness)``; the witness is the first minimum generating set
    in lexicographic search order.
    """
    lat = lat or lattice_of(g)
    full = lat.full if target is None else target
    members = [x for x in lat.subgroups[full].members if x != 0]
    if not members:
        return 0, ()
    if target is None:
        firsts = [x for x in element_class_reps(g) if x != 0]
    else:
        firsts = members

    def search(k: int, chosen: list[int], h: int, start: int) -> tuple[int, ...] | None:
        if h == full:
            return tuple(chosen)
        if len(chosen) == k:
            return None
        for pos in range(start, len(members)):
            x = members[pos]
            # a minimum generating set never repeats what it already generates
            if lat.subgroups[h].mask[x]:
                continue
            found = search(k, chosen + [x], lat.join_element(h, x), pos + 1)
            if found is not None:
                return found
        return None

    k = 1
    while True:
        for x in firsts:
            # with the first element fixed, the rest range over all members
            found = search(k, [x], lat.join_element(0, x), 0)
            if found is not None:
                return k, found
        k += 1


def _incompressible_search(g: FiniteGroup, lat: SubgroupLattice, generating: bool,
                           node_budget: int | None = None) -> tuple[int, tuple[int, ...]]:
    depth, height = _chain_profile(lat)
    full = lat.full
    elems = list(range(1, g.order))
    reps = [x for x in element_class_reps(g) if x != 0]
    best: list = [0, ()]
    nodes = [0]
    join = lat.join_element
    masks = [h.mask for h in lat.subgroups]

    def extend(chosen: list[int], h: int, leave_out: list[int], start: int) -> None:
        nodes[0] += 1
        if node_budget is not None and nodes[0] > node_budget:
            raise BudgetExceeded("incompressible-set search exceeded its node budget",
                                 partial=tuple(best))
        size = len(chosen)
        if (h == full or not generating) and size > best[0]:
            best[0], best[1] = size, tuple(chosen)
        if size + height[h] <= best[0]:
            return
        for x in elems[start:]:
            if x in chosen or masks[h][x]:
                continue
            new_leave = []
            ok = True
            for s, l in zip(chosen, leave_out):
                lx = join(l, x)
                if masks[lx][s]:
                    ok = False
                    break
                new_leave.append(lx)
            if not ok:
                continue
            new_leave.append(h)
            extend(chosen + [x], join(h, x), new_leave, x)
            if size + height[h] <= best[0]:
                return

    for r in reps:
        # conjugating an incompressible set keeps it incompressible, so one
        # member can be taken to be a class representative
        extend([r], join(0, r), [0], 0)
    if best[0] == 0 and not generating:
        return 0, ()
    return best[0], best[1]


def ic(g: FiniteGroup, lat: SubgroupLattice | None = None, node_budget: int | None = None
       ) -> tuple[int, tuple[int, ...]]:
    """Largest incompressible generating set."""
    lat = lat or lattice_of(g)
    if g.order == 1:
        return 0, ()
    return _incompressible_search(g, lat, True, node_budget)


def ic_tilde(g: FiniteGroup, lat: SubgroupLattice | None = None, node_budget: int | None = None
             ) -> tuple[int, tuple[int, ...]]:
    """Largest incompressible subset of ``g``."""
    lat = lat or lattice_of(g)
    if g.order == 1:
        return 0, ()
    return _incompressible_search(g, lat, False, node_budget)


def d_tilde(g: FiniteGroup, lat: SubgroupLattice | None = None) -> tuple[int, int, tuple[int, ...]]:
    """Largest rank of a subgroup: ``(d~, subgroup index, its generating set)``."""
    lat = lat or lattice_of(g)
    best = (0, 0, ())
    for cls in lat.conjugacy_classes:
        h = cls[0]
        k, w = rank(g, lat, target=h) if h != lat.full else rank(g, lat)
        if k > best[0]:
            best = (k, h, w)
    return best


def chain_length(g: FiniteGroup, lat: SubgroupLattice | None = None) -> int:
    return chain_witness(lat or lattice_of(g))[0]


def jordan_size_check(g: FiniteGroup, J: int, R: int, lat: SubgroupLattice | None = None
                      ) -> tuple[bool, int | None]:
    """Is there a normal abelian subgroup of rank <= R and index <= J?

    Returns ``(answer, lattice index of a witness subgroup or None)``; among
    witnesses the one of largest order is returned.
    """
    lat = lat or lattice_of(g)
    for h in sorted(lat.normal, key=lambda i: -lat.subgroups[i].order):
        sub = lat.subgroups[h]
        if g.order // sub.order > J:
            continue
        members = list(sub.members)
        t = g.mul_vec(np.asarray(members)[:, None], np.asarray(members)[None, :])
        if not (t == t.T).all():
            continue
        if rank(g, lat, target=h)[0] <= R:
            return True, h
    return False, None


@dataclass
class InvariantReport:
    group: str
    order: int
    d: int
    d_tilde: int | None
    ic: int
    ic_tilde: int | None
    cl: int
    log2_order: float
    witnesses: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return asdict(self)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    def chain_holds(self) -> bool:
        """``d <= ic <= ic~ <= cl <= log2 |G|`` (skipping fields left unset)."""
        vals = [self.d, self.ic, self.ic_tilde, self.cl]
        vals = [v for v in vals if v is not None]
        return all(a <= b for a, b in zip(vals, vals[1:])) and 2 ** self.cl <= self.order


def invariants(g: FiniteGroup, skip: tuple[str, ...] = ()) -> InvariantReport:
    lat = lattice_of(g)
    d, dw = rank(g, lat)
    icv, icw = ic(g, lat)
    cl, chain = chain_witness(lat)
    wit = {
        "d": [g.label(x) for x in dw],
        "ic": [g.label(x) for x in icw],
        "cl": [list(lat.subgroups[h].generators) for h in chain],
    }
    ict = dt = None
    if "ic_tilde" not in skip:
        ict, ictw = ic_tilde(g, lat)
        wit["ic_tilde"] = [g.label(x) for x in ictw]
    if "d_tilde" not in skip:
        dt, h, dtw = d_tilde(g, lat)
        wit["d_tilde"] = {"subgroup_order": lat.subgroups[h].order,
                          "generators": [g.label(x) for x in dtw]}
    return InvariantReport(g.name, g.order, d, dt, icv, ict, cl, math.log2(g.order), wit)
