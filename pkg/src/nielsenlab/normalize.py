"""Explicit move sequences realizing the normalization arguments.

Every construction manipulates words: to change entry ``i`` by an element
``h`` of the subgroup generated by other entries, a closure search writes
``h`` as a word in those entries and the word is spelled out letter by
letter with right multiplications (:func:`compress_step`).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .groups import (FiniteGroup, Subgroup, closure, closure_mask, invert_word, is_normal,
                     quotient)
from .invariants import ic as ic_search
from .invariants import ic_tilde, d_tilde, lattice_of, rank
from .nielsen import Move, apply, invert, push_identities_back, replay, rmul, swap, witness_to_json

Word = tuple[int, ...]


class BoundViolation(ValueError):
    """A normalization was asked for below the size its argument needs."""


@dataclass
class CanonicalForm:
    source: tuple[int, ...]
    target: tuple[int, ...]
    witness: list[Move]
    mode: str = "epi"

    def replays(self, g: FiniteGroup) -> bool:
        return replay(g, self.witness, self.source) == self.target

    def to_json(self, g: FiniteGroup | None = None) -> dict:
        out = {"mode": self.mode, "source": list(self.source), "target": list(self.target),
               "witness": witness_to_json(self.witness)}
        if g is not None:
            out["target_labels"] = [g.label(x) for x in self.target]
        return out

    def dumps(self, g: FiniteGroup | None = None) -> str:
        return json.dumps(self.to_json(g), sort_keys=True)


# ---------------------------------------------------------------------------
# Word plumbing


def word_over(g: FiniteGroup, values: Sequence[int], positions: Sequence[int], x: int
              ) -> Word | None:
    """A word in the entries at ``positions`` evaluating to ``x`` in ``g``.

    Letters are signed 1-based tuple positions; None if ``x`` is not generated.
    """
    positions = list(positions)
    sub = closure(g, [values[p] for p in positions], with_witnesses=True)
    if x not in sub:
        return None
    return tuple((1 if a > 0 else -1) * (positions[abs(a) - 1] + 1) for a in sub.word_for(x))


def eval_positions(g: FiniteGroup, values: Sequence[int], word: Word) -> int:
    out = 0
    for a in word:
        y = values[abs(a) - 1]
        out = g.mul(out, y if a > 0 else g.inv(y))
    return out


def compress_step(g: FiniteGroup, t: Sequence[int], i: int, word: Word, sign: int = 1,
                  side: str = "right") -> tuple[tuple[int, ...], list[Move]]:
    """Replace ``t[i]`` by ``t[i] h^sign`` (or ``h^sign t[i]`` for ``side="left"``)
    where ``h`` is the value of ``word`` in the other entries.

    ``word`` uses signed 1-based positions.  Left multiplication is done as
    Invert(i), right multiplication by the inverse word, Invert(i).
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    if any(abs(a) == i + 1 for a in word):
        raise ValueError(f"word refers to the entry being changed (position {i + 1})")
    if any(not 1 <= abs(a) <= len(t) for a in word):
        raise ValueError("word letter out of range")
    w = tuple(word) if sign == 1 else invert_word(word)
    moves: list[Move] = []
    if side == "left":
        moves.append(invert(i))
        w = invert_word(w)
    elif side != "right":
        raise ValueError("side must be 'left' or 'right'")
    moves += [rmul(i, abs(a) - 1, inverse=a < 0) for a in w]
    if side == "left":
        moves.append(invert(i))
    return replay(g, moves, t), moves


def clear_entry(g: FiniteGroup, t: Sequence[int], i: int) -> tuple[list[Move], tuple[int, ...]]:
    """Turn ``t[i]`` into the identity using a word in the other entries."""
    others = [k for k in range(len(t)) if k != i]
    w = word_over(g, t, others, t[i])
    if w is None:
        raise ValueError(f"entry {i + 1} is not generated by the others")
    cur, moves = compress_step(g, t, i, w, sign=-1)
    return moves, cur


def arrange(t: Sequence[int], order: Sequence[int]) -> tuple[list[Move], tuple[int, ...]]:
    """Swaps placing ``t[order[0]], t[order[1]], ...`` at positions 0, 1, ..."""
    cur = list(t)
    where = list(range(len(t)))  # where[k]: current position of original entry k
    at = list(range(len(t)))  # at[p]: original entry now at position p
    moves = []
    for dest, src in enumerate(order):
        p = where[src]
        if p != dest:
            moves.append(swap(dest, p))
            cur[dest], cur[p] = cur[p], cur[dest]
            a, b = at[dest], at[p]
            at[dest], at[p] = b, a
            where[a], where[b] = p, dest
    return moves, tuple(cur)


def min_generators(g: FiniteGroup, members) -> tuple[int, ...]:
    """Lexicographically first smallest generating set of a subgroup."""
    lat = lattice_of(g)
    h = lat.index_of(members)
    if h == 0:
        return ()
    return tuple(int(x) for x in rank(g, lat, target=h)[1])


# ---------------------------------------------------------------------------
# Generating tuples


def compress(g: FiniteGroup, t: Sequence[int]) -> tuple[list[Move], tuple[int, ...]]:
    """Clear entries lying in the subgroup of the others, lowest index first,
    until the non-identity entries are incompressible."""
    moves: list[Move] = []
    cur = tuple(t)
    while True:
        for i, x in enumerate(cur):
            if x != 0 and closure_mask(g, [y for k, y in enumerate(cur) if k != i])[x]:
                seq, cur = clear_entry(g, cur, i)
                moves += seq
                break
        else:
            return moves, cur


def canonicalize_epi(g: FiniteGroup, t: Sequence[int], targets: Sequence[int],
                     ic_value: int | None = None) -> CanonicalForm:
    """Move a generating tuple to ``(targets, 1, ..., 1)``.

    Phases: compress to an incompressible generating prefix ``h`` (at most
    ``ic(G)`` entries), write the targets into free slots as words in ``h``,
    erase ``h`` using words in the targets, and permute the targets to the
    front.
    """
    t = tuple(int(x) for x in t)
    targets = tuple(int(x) for x in targets)
    n, d = len(t), len(targets)
    if not closure_mask(g, t).all():
        raise BoundViolation("tuple does not generate the group")
    if not closure_mask(g, targets).all():
        raise BoundViolation("targets do not generate the group")
    goal = targets + (0,) * (n - d)
    if t == goal:
        return CanonicalForm(t, goal, [], "epi")
    if ic_value is None:
        ic_value = ic_search(g, lattice_of(g))[0]
    if n < ic_value + d:
        raise BoundViolation(f"n = {n} is below ic(G) + len(targets) = {ic_value} + {d}")
    moves, cur = compress(g, t)
    seq, cur = push_identities_back(cur)
    moves += seq
    m = sum(1 for x in cur if x != 0)
    prefix = list(range(m))
    for k, y in enumerate(targets):
        w = word_over(g, cur, prefix, y)
        cur, seq = compress_step(g, cur, m + k, w)
        moves += seq
    slots = list(range(m, m + d))
    for i in range(m):
        w = word_over(g, cur, slots, cur[i])
        cur, seq = compress_step(g, cur, i, w, sign=-1)
        moves += seq
    seq, cur = arrange(cur, slots + [i for i in range(n) if i not in slots])
    moves += seq
    assert cur == goal
    return CanonicalForm(t, cur, moves, "epi")


# ---------------------------------------------------------------------------
# Abelian blocks


def _order_mod(g: FiniteGroup, y: int, n_mask: np.ndarray) -> int:
    k, z = 1, y
    while not n_mask[z]:
        z = g.mul(z, y)
        k += 1
    return k


def _smallest_prime(k: int) -> int:
    p = 2
    while k % p:
        p += 1
    return p


def _dunwoody(g: FiniteGroup, cur: tuple[int, ...], block: list[int], targets: tuple[int, ...],
              target_words: dict[int, Word], h_mask: np.ndarray, n_mask: np.ndarray
              ) -> tuple[list[Move], tuple[int, ...]]:
    """Make ``cur`` agree with ``(targets, 1, ...)`` on ``block`` modulo ``N``.

    ``target_words[x]`` writes ``x`` in the targets (letter ``k`` = ``targets[k-1]``).
    """
    if not (h_mask & ~n_mask).any():
        return [], cur
    # the next chain step: a prime-order subgroup of H/N
    y = int(np.flatnonzero(h_mask & ~n_mask)[0])
    o = _order_mod(g, y, n_mask)
    y = g.power(y, o // _smallest_prime(o))
    k_mask = closure_mask(g, list(np.flatnonzero(n_mask)) + [y])
    moves, cur = _dunwoody(g, cur, block, targets, target_words, h_mask, k_mask)
    d = len(targets)
    head, tail = block[:d], block[d:]

    def residue(p: int, i: int | None) -> int:
        # the K-part of the entry at position p
        x = cur[p]
        return x if i is None else g.mul(g.inv(targets[i]), x)

    def in_n(x: int) -> bool:
        return bool(n_mask[x])

    def as_targets_at_head(x: int) -> Word:
        return tuple((1 if a > 0 else -1) * (head[abs(a) - 1] + 1) for a in target_words[x])

    j = next((p for p in tail if not in_n(cur[p])), None)
    if j is None:
        # every tail entry is trivial mod N, so the head generates H modulo N
        # and yields an element of K \ N to put into the first tail slot
        j = tail[0]
        sub = closure(g, [cur[p] for p in head], with_witnesses=True)
        x = next(x for x in sub.members if n_mask[g.mul(g.inv(y), x)])
        w = tuple((1 if a > 0 else -1) * (head[abs(a) - 1] + 1) for a in sub.word_for(x))
        cur, seq = compress_step(g, cur, j, w)
        moves += seq
    z = cur[j]
    powers = [0]
    while len(powers) < _order_mod(g, z, n_mask):
        powers.append(g.mul(powers[-1], z))
    for idx, p in enumerate(block):
        if p == j:
            continue
        r = residue(p, idx if idx < d else None)
        if in_n(r):
            continue
        a = next(a for a, zp in enumerate(powers) if n_mask[g.mul(g.inv(zp), r)])
        cur, seq = compress_step(g, cur, p, (j + 1,) * a, sign=-1)
        moves += seq
    # z is a word in the targets, and the head now agrees with them mod N
    cur, seq = compress_step(g, cur, j, as_targets_at_head(z), sign=-1)
    moves += seq
    return moves, cur


def dunwoody_block(g: FiniteGroup, t: Sequence[int], block: Sequence[int],
                   targets: Sequence[int]) -> tuple[list[Move], tuple[int, ...]]:
    """Bring the entries at ``block`` to ``(targets, 1, ..., 1)`` with moves
    touching only those positions.

    The block entries must commute pairwise and generate the same subgroup as
    ``targets``; the block must be longer than ``targets``.
    """
    t = tuple(int(x) for x in t)
    block = list(block)
    targets = tuple(int(x) for x in targets)
    if len(block) <= len(targets):
        raise BoundViolation(f"block of size {len(block)} must exceed the {len(targets)} targets")
    vals = [t[p] for p in block]
    h_mask = closure_mask(g, vals)
    if not (closure_mask(g, targets) == h_mask).all():
        raise ValueError("targets and block entries generate different subgroups")
    members = np.flatnonzero(h_mask)
    prods = g.mul_vec(members[:, None], members[None, :])
    if not (prods == prods.T).all():
        raise ValueError("block entries do not generate an abelian subgroup")
    words = closure(g, targets, with_witnesses=True).witnesses
    n_mask = np.zeros(g.order, dtype=bool)
    n_mask[0] = True
    moves, cur = _dunwoody(g, t, block, targets, words, h_mask, n_mask)
    expect = list(targets) + [0] * (len(block) - len(targets))
    assert [cur[p] for p in block] == expect
    return moves, cur


def dunwoody_abelian(g: FiniteGroup, t: Sequence[int], targets: Sequence[int] | None = None
                     ) -> CanonicalForm:
    """Move ``t`` to ``(targets, 1, ..., 1)`` by induction along a chain of
    subgroups of prime index steps.  ``targets`` defaults to the first
    smallest generating set of the subgroup generated by ``t``."""
    t = tuple(int(x) for x in t)
    if targets is None:
        targets = min_generators(g, closure_mask(g, t))
    targets = tuple(int(x) for x in targets)
    if len(t) <= len(targets):
        raise BoundViolation(f"n = {len(t)} must exceed d = {len(targets)}; with n = d "
                             "transitivity can fail (determinant obstruction)")
    moves, cur = dunwoody_block(g, t, range(len(t)), targets)
    return CanonicalForm(t, cur, moves, "abelian")


# ---------------------------------------------------------------------------
# Extensions by abelian groups


@dataclass
class ExactSequenceData:
    group: FiniteGroup = field(repr=False)
    A: Subgroup
    Q: FiniteGroup = field(repr=False)
    projection: np.ndarray = field(repr=False)
    dA: int
    icQ_tilde: int
    dQ_tilde: int

    @property
    def exseq_bound(self) -> int:
        return self.dA + self.icQ_tilde + 1

    @property
    def jordan_bound(self) -> int:
        return 1 + self.dA + self.dQ_tilde + self.icQ_tilde


def exact_sequence(g: FiniteGroup, a_members: Sequence[int] | None = None) -> ExactSequenceData:
    """``0 -> A -> G -> G/A -> 1`` for a normal abelian ``A`` (default: the
    largest one, first in lattice order among equals)."""
    lat = lattice_of(g)
    if a_members is None:
        best = None
        for h in lat.normal:
            sub = lat.subgroups[h]
            if _is_abelian_set(g, sub.members) and (best is None or sub.order > best.order):
                best = sub
        a_members = best.members
    a_members = tuple(sorted(int(x) for x in a_members))
    if not is_normal(g, a_members):
        raise ValueError("A is not normal")
    if not _is_abelian_set(g, a_members):
        raise ValueError("A is not abelian")
    idx = lat.index_of(a_members)
    A = lat.subgroups[idx]
    q, proj = quotient(g, A)
    if set(np.flatnonzero(proj == 0)) != set(a_members):
        raise AssertionError("projection kernel differs from A")
    qlat = lattice_of(q)
    dA = rank(g, lat, target=idx)[0]
    return ExactSequenceData(g, A, q, proj, dA, ic_tilde(q, qlat)[0], d_tilde(q, qlat)[0])


def _is_abelian_set(g: FiniteGroup, members) -> bool:
    m = np.asarray(members)
    p = g.mul_vec(m[:, None], m[None, :])
    return bool((p == p.T).all())


def _omega1(g: FiniteGroup, t: tuple[int, ...], data: ExactSequenceData
            ) -> tuple[list[Move], tuple[int, ...], int]:
    """Moves making the entries outside ``A`` incompressible modulo ``A`` and
    pushing every other entry into ``A``; returns the count ``I`` of
    entries outside ``A``, which come first."""
    q, proj = data.Q, data.projection
    moves: list[Move] = []
    cur = t
    while True:
        bar = [int(proj[x]) for x in cur]
        for i, xb in enumerate(bar):
            if xb == 0:
                continue
            others = [k for k in range(len(cur)) if k != i]
            w = word_over(q, bar, others, xb)
            if w is not None:
                cur, seq = compress_step(g, cur, i, w, sign=-1)
                moves += seq
                break
        else:
            break
    outside = [i for i, x in enumerate(cur) if proj[x] != 0]
    seq, cur = arrange(cur, outside + [i for i in range(len(cur)) if i not in outside])
    return moves + seq, cur, len(outside)


def exseq_redundancy(g: FiniteGroup, t: Sequence[int], data: ExactSequenceData
                     ) -> CanonicalForm:
    """Witness that ``t`` is redundant: the endpoint ends with the identity
    and generates the same subgroup."""
    t = tuple(int(x) for x in t)
    n = len(t)
    if n < data.exseq_bound:
        raise BoundViolation(f"n = {n} is below d(A) + ic~(Q) + 1 = {data.exseq_bound}")
    moves, cur, I = _omega1(g, t, data)
    block = list(range(I, n))
    b = min_generators(g, closure_mask(g, [cur[p] for p in block]))
    seq, cur = dunwoody_block(g, cur, block, b)
    moves += seq
    assert cur[-1] == 0
    return CanonicalForm(t, cur, moves, "exseq")


def jordan_targets(g: FiniteGroup, t: Sequence[int], data: ExactSequenceData
                   ) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """``(u, q)``: first smallest generators of ``A`` meet ``H`` and lifts (the
    smallest id in ``H`` over each) of first smallest generators of the image of ``H``."""
    h_mask = closure_mask(g, t)
    proj = data.projection
    a_h = h_mask & (proj == 0)
    u = min_generators(g, a_h)
    qmask = np.zeros(data.Q.order, dtype=bool)
    qmask[proj[h_mask]] = True
    qbar = min_generators(data.Q, qmask)
    members = np.flatnonzero(h_mask)
    lifts = tuple(int(members[np.argmax(proj[members] == x)]) for x in qbar)
    return u, lifts


def jordan_canonical(g: FiniteGroup, t: Sequence[int], data: ExactSequenceData
                     ) -> CanonicalForm:
    """Move ``t`` to ``(u_1..u_e, q_1..q_d, 1, ..., 1)`` determined by its image
    ``H`` alone (see :func:`jordan_targets`)."""
    t = tuple(int(x) for x in t)
    n = len(t)
    if n < data.jordan_bound:
        raise BoundViolation(
            f"n = {n} is below 1 + d(A) + d~(Q) + ic~(Q) = {data.jordan_bound}")
    u, qs = jordan_targets(g, t, data)
    e, d = len(u), len(qs)
    goal = u + qs + (0,) * (n - e - d)
    if t == goal:
        return CanonicalForm(t, goal, [], "jordan")
    proj = data.projection
    # omega_1 and omega_2
    moves, cur, I = _omega1(g, t, data)
    block = list(range(I, n))
    b = min_generators(g, closure_mask(g, [cur[p] for p in block]))
    seq, cur = dunwoody_block(g, cur, block, b)
    moves += seq
    # write the q's after the b's
    qpos = list(range(I + len(b), I + len(b) + d))
    used = list(range(I + len(b)))
    for k, y in zip(qpos, qs):
        cur, seq = compress_step(g, cur, k, word_over(g, cur, used, y))
        moves += seq
    # omega_3: push the leading entries into A using the q's
    bar = [int(proj[x]) for x in cur]
    for i in range(I):
        w = word_over(data.Q, bar, qpos, bar[i])
        cur, seq = compress_step(g, cur, i, w, sign=-1)
        moves += seq
    # grow the A-block until it generates A meet H, then normalize it to u
    ablock = [p for p in range(I, n) if p not in qpos]
    target_mask = closure_mask(g, u)
    while True:
        bmask = closure_mask(g, [cur[p] for p in ablock])
        missing = [x for x in u if not bmask[x]]
        if not missing:
            break
        seq, cur = dunwoody_block(g, cur, ablock, min_generators(g, bmask))
        moves += seq
        slot = next(p for p in ablock if cur[p] == 0)
        others = [p for p in range(n) if p != slot]
        cur, seq = compress_step(g, cur, slot, word_over(g, cur, others, missing[0]))
        moves += seq
    assert (closure_mask(g, [cur[p] for p in ablock]) == target_mask).all()
    seq, cur = dunwoody_block(g, cur, ablock, u)
    moves += seq
    upos = ablock[:e]
    for i in range(I):
        if cur[i] != 0:
            cur, seq = compress_step(g, cur, i, word_over(g, cur, upos, cur[i]), sign=-1)
            moves += seq
    seq, cur = arrange(cur, upos + qpos + [p for p in range(n) if p not in upos + qpos])
    moves += seq
    assert cur == goal, (cur, goal)
    return CanonicalForm(t, cur, moves, "jordan")


def verify_form(g: FiniteGroup, form: CanonicalForm) -> bool:
    """Replay the witness, checking the generated subgroup at every step."""
    from .nielsen import verify_witness

    return verify_witness(g, form.source, form.witness, form.target, check_image=True)


__all__ = [
    "BoundViolation", "CanonicalForm", "ExactSequenceData", "arrange", "canonicalize_epi",
    "clear_entry", "compress", "compress_step", "dunwoody_abelian", "dunwoody_block",
    "exact_sequence", "exseq_redundancy", "jordan_canonical", "jordan_targets",
    "min_generators", "verify_form", "word_over",
]
