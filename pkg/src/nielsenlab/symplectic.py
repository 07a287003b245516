"""Integer unimodular and symplectic reductions of vectors.

Coordinates of ``Z^{2g}`` are ordered as hyperbolic pairs
``(u_1, v_1, u_2, v_2, ..., u_g, v_g)`` and the form is block diagonal with
``g`` copies of ``[[0, 1], [-1, 0]]``.  All arithmetic uses Python integers.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Sequence

Matrix = list[list[int]]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def matvec(a: Matrix, v: Sequence[int]) -> list[int]:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def transpose(a: Matrix) -> Matrix:
    return [list(r) for r in zip(*a)]


def det(a: Matrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    m = [list(r) for r in a]
    n = len(m)
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1] if n else 1


def form(g: int) -> Matrix:
    """The interleaved symplectic form on ``Z^{2g}``."""
    j = [[0] * (2 * g) for _ in range(2 * g)]
    for i in range(g):
        j[2 * i][2 * i + 1] = 1
        j[2 * i + 1][2 * i] = -1
    return j


def is_symplectic(m: Matrix) -> bool:
    g = len(m) // 2
    j = form(g)
    return matmul(matmul(transpose(m), j), m) == j


def egcd(a: int, b: int) -> tuple[int, int, int]:
    """``(g, x, y)`` with ``x*a + y*b = g = gcd(a, b) >= 0``."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def _rotation(a: int, b: int) -> tuple[list[list[int]], list[list[int]]]:
    """A 2x2 integer matrix of determinant 1 sending ``(a, b)`` to ``(gcd, 0)``, and its inverse."""
    c, x, y = egcd(a, b)
    p, q = a // c, b // c
    return [[x, y], [-q, p]], [[p, -y], [q, x]]


def _apply_rows(m: Matrix, i: int, j: int, block) -> None:
    """Left-multiply ``m`` by ``block`` acting on rows ``i, j``."""
    (a, b), (c, d) = block
    ri, rj = m[i], m[j]
    m[i] = [a * x + b * y for x, y in zip(ri, rj)]
    m[j] = [c * x + d * y for x, y in zip(ri, rj)]


def _apply_cols(m: Matrix, i: int, j: int, block) -> None:
    """Right-multiply ``m`` by ``block`` acting on columns ``i, j``."""
    (a, b), (c, d) = block
    for row in m:
        x, y = row[i], row[j]
        row[i], row[j] = a * x + c * y, b * x + d * y


def _sl_reduce(w: Sequence[int]) -> tuple[Matrix, Matrix]:
    w = [int(x) for x in w]
    g = len(w)
    if not any(w):
        raise ValueError("cannot reduce the zero vector")
    m, minv = identity(g), identity(g)
    for k in range(1, g):
        if w[k] == 0:
            continue
        rot, rinv = _rotation(w[0], w[k])
        _apply_rows(m, 0, k, rot)
        _apply_cols(minv, 0, k, rinv)
        w[0], w[k] = rot[0][0] * w[0] + rot[0][1] * w[k], 0
    if w[0] < 0 and g >= 2:
        flip = [[-1, 0], [0, -1]]
        _apply_rows(m, 0, 1, flip)
        _apply_cols(minv, 0, 1, flip)
    return m, minv


def sl_reduce(w: Sequence[int]) -> Matrix:
    """``M`` in ``SL_g(Z)`` with ``M w = (gcd(w), 0, ..., 0)``.

    Built from extended-Euclid rotations of the first coordinate against each
    later one.  For ``g = 1`` the only choice is ``M = [[1]]``, so a negative
    entry stays negative.
    """
    return _sl_reduce(w)[0]


def _interleave(g: int) -> list[int]:
    # position in the interleaved basis of block coordinate k (u's then v's)
    return [2 * k for k in range(g)] + [2 * k + 1 for k in range(g)]


def sp_reduce(w: Sequence[int]) -> Matrix:
    """Symplectic ``M`` with ``M w = u_1`` for a primitive ``w`` of length ``2g``.

    First an ``SL_2`` block in every hyperbolic plane clears the ``v``
    coordinate, then ``diag(S, S^-T)`` (written in the interleaved basis)
    reduces the remaining ``u`` coordinates with ``S = sl_reduce``.
    """
    w = [int(x) for x in w]
    if len(w) % 2 or not w:
        raise ValueError("need a vector of even positive length")
    if math.gcd(*w) != 1:
        raise ValueError("vector is not primitive")
    g = len(w) // 2
    m = identity(2 * g)
    for i in range(g):
        a, b = w[2 * i], w[2 * i + 1]
        if b == 0:
            continue
        rot, _ = _rotation(a, b)
        _apply_rows(m, 2 * i, 2 * i + 1, rot)
    cur = matvec(m, w)
    us = [cur[2 * i] for i in range(g)]
    if g > 1:
        s, sinv = _sl_reduce(us)
        sinv_t = transpose(sinv)
        pos = _interleave(g)
        emb = [[0] * (2 * g) for _ in range(2 * g)]
        for r in range(g):
            for c in range(g):
                emb[pos[r]][pos[c]] = s[r][c]
                emb[pos[g + r]][pos[g + c]] = sinv_t[r][c]
        m = matmul(emb, m)
    out = matvec(m, w)
    target = [1] + [0] * (2 * g - 1)
    if out != target or not is_symplectic(m):
        raise AssertionError("symplectic reduction failed its own check")
    return m


@dataclass
class SpReduction:
    g: int
    moduli: tuple[int, ...]
    matrix: Matrix
    source: list[list[int]]
    vector: list[list[int]]

    def check(self) -> bool:
        """Recompute ``M v`` from scratch and test the claims."""
        recomputed = reduce_mod(matmul(self.matrix, self.source), self.moduli)
        last = self.vector[-2:]
        return (recomputed == self.vector and is_symplectic(self.matrix)
                and all(x == 0 for row in last for x in row))

    def to_json(self) -> dict:
        return {"g": self.g, "moduli": list(self.moduli), "matrix": self.matrix,
                "source": self.source, "stabilized": self.vector, "check": self.check()}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def reduce_mod(v: list[list[int]], moduli: Sequence[int]) -> list[list[int]]:
    return [[x % d for x, d in zip(row, moduli)] for row in v]


def stabilize(v: Sequence[Sequence[int]], g: int, moduli: Sequence[int]) -> SpReduction:
    """Symplectic ``M`` killing the last hyperbolic pair of ``v`` in ``A^{2g}``.

    ``v`` has ``2g`` rows and one column per cyclic factor ``Z/d_i`` of ``A``.
    Each nonzero column is lifted to ``[0, d_i)`` on the coordinates not yet
    used, divided by its gcd ``c`` and sent to ``c u`` of the next free pair by
    :func:`sp_reduce`; earlier pairs are left alone.
    """
    moduli = tuple(int(d) for d in moduli)
    r = len(moduli)
    if any(d < 1 for d in moduli):
        raise ValueError("moduli must be >= 1")
    if g < r + 1:
        raise ValueError(f"need g >= r + 1 = {r + 1} (got g = {g})")
    src = [[int(x) for x in row] for row in v]
    if len(src) != 2 * g or any(len(row) != r for row in src):
        raise ValueError(f"v must be a {2 * g} x {r} residue matrix")
    src = reduce_mod(src, moduli)
    total = identity(2 * g)
    cur = [list(row) for row in src]
    used = 0
    for i, d in enumerate(moduli):
        w = [cur[k][i] % d for k in range(2 * used, 2 * g)]
        if not any(w):
            continue
        c = math.gcd(*w)
        sp = sp_reduce([x // c for x in w])
        size = 2 * used
        step = identity(2 * g)
        for a in range(len(sp)):
            for b in range(len(sp)):
                step[size + a][size + b] = sp[a][b]
        total = matmul(step, total)
        cur = reduce_mod(matmul(step, cur), moduli)
        used += 1
    out = SpReduction(g, moduli, total, src, cur)
    if not out.check():
        raise AssertionError("stabilization failed its independent recomputation")
    return out
