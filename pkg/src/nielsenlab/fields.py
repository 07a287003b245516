"""Small finite fields as lookup tables.

Elements of GF(q) are integers ``0..q-1``.  For a prime ``q`` they are the
residues themselves.  For ``q = p**k`` with ``k > 1`` an integer ``x`` encodes
the polynomial whose base-``p`` digits are its coefficients, reduced modulo a
fixed monic irreducible polynomial of degree ``k``.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product

import numpy as np


def factor_prime_power(q: int) -> tuple[int, int] | None:
    """Return ``(p, k)`` with ``q == p**k``, or None if ``q`` is not a prime power."""
    if q < 2:
        return None
    p = 2
    while p * p <= q:
        if q % p == 0:
            break
        p += 1
    else:
        return q, 1
    k = 0
    while q % p == 0:
        q //= p
        k += 1
    return (p, k) if q == 1 else None


def _polymulmod(a: list[int], b: list[int], mod: list[int], p: int) -> list[int]:
    k = len(mod) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            prod[i + j] = (prod[i + j] + x * y) % p
    # mod is monic of degree k
    for top in range(len(prod) - 1, k - 1, -1):
        c = prod[top]
        if c:
            for t in range(k + 1):
                prod[top - k + t] = (prod[top - k + t] - c * mod[t]) % p
    return (prod + [0] * k)[:k]


def _is_irreducible(mod: list[int], p: int) -> bool:
    k = len(mod) - 1
    # no factor of degree <= k // 2
    for deg in range(1, k // 2 + 1):
        for coeffs in product(range(p), repeat=deg):
            div = list(coeffs) + [1]
            rem = list(mod)
            for top in range(len(rem) - 1, deg - 1, -1):
                c = rem[top]
                if c:
                    for t in range(deg + 1):
                        rem[top - deg + t] = (rem[top - deg + t] - c * div[t]) % p
            if not any(rem[:deg]):
                return False
    return True


@lru_cache(maxsize=None)
def field_tables(q: int) -> tuple[np.ndarray, np.ndarray]:
    """Addition and multiplication tables of GF(q), each of shape ``(q, q)``."""
    pk = factor_prime_power(q)
    if pk is None:
        raise ValueError(f"q={q} is not a prime power")
    p, k = pk
    if k == 1:
        r = np.arange(q)
        return (r[:, None] + r[None, :]) % q, (r[:, None] * r[None, :]) % q
    for coeffs in product(range(p), repeat=k):
        mod = list(coeffs) + [1]
        if coeffs[0] and _is_irreducible(mod, p):
            break
    digits = [[(x // p**i) % p for i in range(k)] for x in range(q)]
    add = np.zeros((q, q), dtype=np.int64)
    mul = np.zeros((q, q), dtype=np.int64)
    for a in range(q):
        for b in range(q):
            add[a, b] = sum(((digits[a][i] + digits[b][i]) % p) * p**i for i in range(k))
            c = _polymulmod(digits[a], digits[b], mod, p)
            mul[a, b] = sum(c[i] * p**i for i in range(k))
    return add, mul


def field_neg_inv(q: int) -> tuple[np.ndarray, np.ndarray]:
    """Negation and multiplicative inverse (``inv[0] == 0``) arrays of GF(q)."""
    add, mul = field_tables(q)
    neg = np.argmin(add, axis=1)  # add[a, neg[a]] == 0 and 0 is the minimum
    inv = np.zeros(q, dtype=np.int64)
    for a in range(1, q):
        inv[a] = int(np.nonzero(mul[a] == 1)[0][0])
    return neg, inv
