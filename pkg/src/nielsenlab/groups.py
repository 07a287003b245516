"""Finite groups with dense integer element ids.

Every group is stored as an array of structured rows (permutations, matrix
entries, residue vectors, ...) sorted so that id 0 is the identity and the
remaining ids follow the lexicographic order of the rows.  Multiplication is
a Cayley-table lookup for groups of order at most ``TABLE_LIMIT`` and a
vectorized structured product followed by a row lookup above that.

The group-spec mini-language accepted by :func:`parse_spec` is::

    sym:n | cyc:N | ab:d1,d2,... | gl:r,q | sl:r,q | lamp:r,q
    | prod(spec;spec;...) | cayley:path.json
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from itertools import permutations, product
from pathlib import Path
from typing import Callable, Iterable, Sequence

import numpy as np

from .fields import factor_prime_power, field_neg_inv, field_tables

TABLE_LIMIT = 4096

Word = tuple[int, ...]
"""Signed 1-based generator indices; ``-k`` is the inverse of generator ``k``."""


class GroupSpecError(ValueError):
    """Invalid group specification; ``field`` names the offending parameter."""

    def __init__(self, field_name: str, message: str):
        super().__init__(f"{field_name}: {message}")
        self.field = field_name


class UnsupportedOperation(TypeError):
    pass


# ---------------------------------------------------------------------------
# Specs


@dataclass(frozen=True)
class GroupSpec:
    variant: str
    params: tuple = ()
    factors: tuple["GroupSpec", ...] = ()
    table: tuple[tuple[int, ...], ...] | None = field(default=None, compare=False)
    names: tuple[str, ...] | None = field(default=None, compare=False)
    source: str | None = None

    def __str__(self) -> str:
        if self.variant == "prod":
            return "prod(" + ";".join(str(f) for f in self.factors) + ")"
        if self.variant == "cayley":
            return f"cayley:{self.source}" if self.source else f"cayley:<inline order {len(self.table)}>"
        return f"{self.variant}:" + ",".join(str(p) for p in self.params)


_ARITY = {"sym": 1, "cyc": 1, "gl": 2, "sl": 2, "lamp": 2}


def _split_top(text: str, sep: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return parts


def parse_spec(text: str) -> GroupSpec:
    """Parse a group-spec string into a validated :class:`GroupSpec`."""
    text = text.strip()
    if text.startswith("prod(") and text.endswith(")"):
        inner = text[5:-1]
        factors = tuple(parse_spec(part) for part in _split_top(inner, ";"))
        if not factors:
            raise GroupSpecError("prod", "needs at least one factor")
        return GroupSpec("prod", factors=factors)
    if ":" not in text:
        raise GroupSpecError("variant", f"cannot parse group spec {text!r}")
    variant, _, rest = text.partition(":")
    if variant == "cayley":
        return cayley_spec_from_file(rest)
    if variant not in _ARITY and variant != "ab":
        raise GroupSpecError("variant", f"unknown group family {variant!r}")
    try:
        params = tuple(int(x) for x in rest.split(","))
    except ValueError:
        field = _PARAM_NAMES.get(variant, ("d_1",))[0]
        raise GroupSpecError(field, f"parameters must be integers, got {rest!r}") from None
    spec = GroupSpec(variant, params)
    validate_spec(spec)
    return spec


_PARAM_NAMES = {"sym": ("n",), "cyc": ("N",), "gl": ("r", "q"), "sl": ("r", "q"),
                "lamp": ("r", "q")}


def validate_spec(spec: GroupSpec) -> None:
    v, p = spec.variant, spec.params
    if v in _ARITY and len(p) != _ARITY[v]:
        raise GroupSpecError(v, f"expects {_ARITY[v]} parameter(s), got {len(p)}")
    if v == "ab" and not p:
        raise GroupSpecError("ab", "needs at least one modulus")
    names = _PARAM_NAMES.get(v, ())
    for k, x in enumerate(p):
        if x < 1:
            name = names[k] if k < len(names) else f"d_{k + 1}"
            raise GroupSpecError(name, f"must be >= 1, got {x}")
    if v in ("gl", "sl") and factor_prime_power(p[1]) is None:
        raise GroupSpecError("q", f"{p[1]} is not a prime power")
    if v == "cayley":
        _validate_table(spec.table)
    for f in spec.factors:
        validate_spec(f)


def cayley_spec(table: Sequence[Sequence[int]], names: Sequence[str] | None = None,
                source: str | None = None) -> GroupSpec:
    spec = GroupSpec("cayley", table=tuple(tuple(int(x) for x in row) for row in table),
                     names=tuple(names) if names is not None else None, source=source)
    validate_spec(spec)
    return spec


DATA_DIR = Path(__file__).with_name("data")


def cayley_spec_from_file(path: str | Path) -> GroupSpec:
    """Read a Cayley-table JSON file.  A bare name such as ``D4.json`` that
    does not exist on disk is looked up among the bundled tables."""
    path = Path(path)
    if not path.exists() and (DATA_DIR / path.name).exists():
        path = DATA_DIR / path.name
    try:
        data = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise GroupSpecError("cayley", f"cannot read {path}: {exc}") from None
    table = data.get("table")
    if table is None:
        raise GroupSpecError("table", "missing 'table'")
    if "order" in data and data["order"] != len(table):
        raise GroupSpecError("order", f"declared {data['order']} but table has {len(table)} rows")
    return cayley_spec(table, data.get("names"), source=str(path))


def _validate_table(table) -> None:
    if not table:
        raise GroupSpecError("table", "empty table")
    t = np.asarray(table, dtype=np.int64)
    n = len(t)
    if t.shape != (n, n):
        raise GroupSpecError("table", "must be square")
    if t.min() < 0 or t.max() >= n:
        raise GroupSpecError("table", "entries out of range")
    r = np.arange(n)
    if not (np.sort(t, axis=1) == r).all() or not (np.sort(t, axis=0) == r[:, None]).all():
        raise GroupSpecError("table", "not a Latin square")
    if not (t[0] == r).all() or not (t[:, 0] == r).all():
        raise GroupSpecError("table", "id 0 is not the identity")
    if n <= 200:
        # (a*b)*c == a*(b*c) for all triples
        lhs = t[t[:, :, None], r[None, None, :]]
        rhs = t[r[:, None, None], t[None, :, :]]
        if not (lhs == rhs).all():
            raise GroupSpecError("table", "operation is not associative")
    else:
        rng = np.random.default_rng(0)
        a, b, c = rng.integers(0, n, size=(3, 10_000))
        if not (t[t[a, b], c] == t[a, t[b, c]]).all():
            raise GroupSpecError("table", "operation is not associative")


# ---------------------------------------------------------------------------
# Groups


class FiniteGroup:
    """A finite group on ids ``0..order-1`` with 0 the identity.

    ``rows`` holds one structured representative per element; ``compose``
    multiplies two equally shaped row arrays elementwise.
    """

    def __init__(self, spec: GroupSpec, rows: np.ndarray,
                 compose: Callable[[np.ndarray, np.ndarray], np.ndarray],
                 fmt: Callable[[np.ndarray], str], name: str | None = None):
        self.spec = spec
        self.name = name or str(spec)
        rows = np.asarray(rows, dtype=np.int64)
        if rows.ndim == 1:
            rows = rows[:, None]
        self._compose = compose
        self._fmt = fmt
        self._radix = np.ones(rows.shape[1], dtype=np.int64)
        base = int(rows.max()) + 1 if rows.size else 1
        for i in range(rows.shape[1] - 2, -1, -1):
            self._radix[i] = self._radix[i + 1] * base
        if base ** rows.shape[1] >= 2**62:
            raise GroupSpecError("order", "element rows too wide to index")
        # in a group the only idempotent is the identity
        idem = np.flatnonzero((compose(rows, rows) == rows).all(axis=1))
        if len(idem) != 1:
            raise GroupSpecError("rows", "no unique identity element")
        keys = rows @ self._radix
        order = np.lexsort(rows.T[::-1])
        is_id = keys[order] == keys[idem[0]]
        order = np.concatenate([order[is_id], order[~is_id]])
        self.rows = rows[order]
        self.order = len(rows)
        self._keys = self.rows @ self._radix
        self._key_sort = np.argsort(self._keys, kind="stable")
        self._sorted_keys = self._keys[self._key_sort]

    def __repr__(self) -> str:
        return f"<FiniteGroup {self.name} order={self.order}>"

    def __len__(self) -> int:
        return self.order

    identity = 0

    def _index(self, rows: np.ndarray) -> np.ndarray:
        keys = rows @ self._radix
        pos = np.searchsorted(self._sorted_keys, keys)
        if (pos >= self.order).any() or (self._sorted_keys[np.minimum(pos, self.order - 1)] != keys).any():
            raise ValueError("product left the group")
        return self._key_sort[pos]

    def index_of_row(self, row: Sequence[int]) -> int:
        return int(self._index(np.asarray(row, dtype=np.int64)[None, :])[0])

    @cached_property
    def table(self) -> np.ndarray | None:
        """Full Cayley table ``table[a, b] = a*b`` (None above ``TABLE_LIMIT``)."""
        if self.order > TABLE_LIMIT:
            return None
        n = self.order
        t = np.empty((n, n), dtype=np.int32 if n < 2**31 else np.int64)
        for a in range(n):
            t[a] = self._index(self._compose(np.repeat(self.rows[a:a + 1], n, 0), self.rows))
        return t

    def mul_vec(self, a, b) -> np.ndarray:
        a, b = np.broadcast_arrays(np.asarray(a), np.asarray(b))
        t = self.table
        if t is not None:
            return t[a, b]
        flat = self._index(self._compose(self.rows[a.ravel()], self.rows[b.ravel()]))
        return flat.reshape(a.shape)

    def mul(self, a: int, b: int) -> int:
        t = self.table
        if t is not None:
            return int(t[a, b])
        return int(self.mul_vec(np.array([a]), np.array([b]))[0])

    @cached_property
    def inverses(self) -> np.ndarray:
        t = self.table
        if t is not None:
            return np.argmin(t, axis=1)  # the unique b with a*b == 0
        # a^(k) == e first at k = ord(a); then a^(k-1) is the inverse
        ids = np.arange(self.order)
        power = ids.copy()
        prev = np.zeros(self.order, dtype=np.int64)
        inv = np.full(self.order, -1, dtype=np.int64)
        inv[0] = 0
        while (inv < 0).any():
            todo = inv < 0
            prev[todo] = power[todo]
            power[todo] = self.mul_vec(power[todo], ids[todo])
            done = todo & (power == 0)
            inv[done] = prev[done]
        return inv

    def inv(self, a: int) -> int:
        return int(self.inverses[a])

    @cached_property
    def element_orders(self) -> np.ndarray:
        ids = np.arange(self.order)
        orders = np.zeros(self.order, dtype=np.int64)
        power = ids.copy()
        k = 1
        while (orders == 0).any():
            hit = (power == 0) & (orders == 0)
            orders[hit] = k
            power = self.mul_vec(power, ids)
            k += 1
        return orders

    @cached_property
    def is_abelian(self) -> bool:
        t = self.table
        if t is not None:
            return bool((t == t.T).all())
        rng = np.random.default_rng(0)
        a, b = rng.integers(0, self.order, size=(2, 10_000))
        return bool((self.mul_vec(a, b) == self.mul_vec(b, a)).all())

    def power(self, a: int, k: int) -> int:
        k %= int(self.element_orders[a])
        result, base = 0, a
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    def product(self, elems: Iterable[int]) -> int:
        out = 0
        for x in elems:
            out = self.mul(out, x)
        return out

    def conj(self, x: int, g: int) -> int:
        """``g x g^-1``."""
        return self.mul(self.mul(g, x), self.inv(g))

    def label(self, a: int) -> str:
        return self._fmt(self.rows[a])

    def parse_element(self, token: str) -> int:
        """Element from an integer id or a label such as ``(12)`` or ``-i``."""
        token = token.strip().replace(" ", "")
        if not (self.spec.variant == "cayley" and self.spec.names):
            try:
                value = int(token)
            except ValueError:
                pass
            else:
                if not 0 <= value < self.order:
                    raise ValueError(f"element id {value} out of range for {self.name}")
                return value
        for a in range(self.order):
            if self.label(a).replace(" ", "") == token:
                return a
        raise ValueError(f"unknown element {token!r} of {self.name}")

    def eval_word(self, gens: Sequence[int], word: Sequence[int]) -> int:
        out = 0
        for letter in word:
            g = gens[abs(letter) - 1]
            out = self.mul(out, g if letter > 0 else self.inv(g))
        return out


# ---------------------------------------------------------------------------
# Family constructors


def _sym(spec: GroupSpec) -> FiniteGroup:
    (n,) = spec.params
    rows = np.array(list(permutations(range(n))), dtype=np.int64).reshape(-1, n)

    def compose(a, b):
        # (a*b)(x) = a(b(x)): apply b first
        return np.take_along_axis(a, b, axis=1)

    def fmt(row):
        seen, cycles = set(), []
        for start in range(len(row)):
            if start in seen or row[start] == start:
                continue
            cyc, x = [], start
            while x not in seen:
                seen.add(x)
                cyc.append(x + 1)
                x = int(row[x])
            cycles.append("(" + "".join(str(c) if n < 10 else f"{c} " for c in cyc).strip() + ")")
        return "".join(cycles) or "()"

    return FiniteGroup(spec, rows, compose, fmt, name=f"S{n}")


def _abelian(spec: GroupSpec, moduli: Sequence[int], name: str) -> FiniteGroup:
    mods = np.array(moduli, dtype=np.int64)
    rows = np.array(list(product(*[range(d) for d in moduli])), dtype=np.int64).reshape(-1, len(moduli))

    def compose(a, b):
        return (a + b) % mods

    def fmt(row):
        return str(int(row[0])) if len(row) == 1 else "(" + ",".join(str(int(x)) for x in row) + ")"

    return FiniteGroup(spec, rows, compose, fmt, name=name)


def _matrix_group(spec: GroupSpec) -> FiniteGroup:
    r, q = spec.params
    add, mul = field_tables(q)
    rows = []
    for entries in product(range(q), repeat=r * r):
        m = np.array(entries, dtype=np.int64).reshape(r, r)
        d = _det(m, q)
        if d == 0 or (spec.variant == "sl" and d != 1):
            continue
        rows.append(entries)
    rows = np.array(rows, dtype=np.int64).reshape(-1, r * r)

    def compose(a, b):
        A = a.reshape(-1, r, r)
        B = b.reshape(-1, r, r)
        out = np.zeros_like(A)
        for k in range(r):
            out = add[out, mul[A[:, :, k][:, :, None], B[:, k, :][:, None, :]]]
        return out.reshape(-1, r * r)

    def fmt(row):
        m = row.reshape(r, r)
        return "[" + ",".join("[" + ",".join(str(int(x)) for x in line) + "]" for line in m) + "]"

    tag = "GL" if spec.variant == "gl" else "SL"
    return FiniteGroup(spec, rows, compose, fmt, name=f"{tag}{r}(F{q})")


def _det(m: np.ndarray, q: int) -> int:
    """Determinant over GF(q) by Gaussian elimination on table arithmetic."""
    add, mul = field_tables(q)
    neg, inv = field_neg_inv(q)
    m = [list(map(int, line)) for line in m]
    n = len(m)
    det = 1
    for col in range(n):
        piv = next((i for i in range(col, n) if m[i][col]), None)
        if piv is None:
            return 0
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = int(neg[det])
        det = int(mul[det, m[col][col]])
        pinv = int(inv[m[col][col]])
        for i in range(col + 1, n):
            if m[i][col]:
                f = int(mul[m[i][col], pinv])
                m[i] = [int(add[m[i][k], neg[mul[f, m[col][k]]]]) for k in range(n)]
    return det


def _lamplighter(spec: GroupSpec) -> FiniteGroup:
    r, q = spec.params
    rows = np.array([(s,) + f for s in range(r) for f in product(range(q), repeat=r)],
                    dtype=np.int64)
    shift_idx = (np.arange(r)[None, :] - np.arange(r)[:, None]) % r  # [s, x] -> x - s

    def compose(a, b):
        # (s1, f1)(s2, f2) = (s1 + s2, f1 + s1.f2) with (s.f)(x) = f(x - s)
        s1, f1 = a[:, 0], a[:, 1:]
        s2, f2 = b[:, 0], b[:, 1:]
        moved = np.take_along_axis(f2, shift_idx[s1], axis=1)
        return np.concatenate([((s1 + s2) % r)[:, None], (f1 + moved) % q], axis=1)

    def fmt(row):
        return f"({int(row[0])};" + "".join(str(int(x)) for x in row[1:]) + ")"

    return FiniteGroup(spec, rows, compose, fmt, name=f"Lamp({r},{q})")


def _cayley(spec: GroupSpec, name: str | None = None) -> FiniteGroup:
    t = np.asarray(spec.table, dtype=np.int64)
    n = len(t)
    names = spec.names

    def compose(a, b):
        return t[a[:, 0], b[:, 0]][:, None]

    def fmt(row):
        return names[int(row[0])] if names else str(int(row[0]))

    g = FiniteGroup(spec, np.arange(n)[:, None], compose, fmt, name=name)
    g.__dict__["table"] = t.astype(np.int32)
    return g


def _direct_product(spec: GroupSpec) -> FiniteGroup:
    comps = [build(f) for f in spec.factors]
    rows = np.array(list(product(*[range(c.order) for c in comps])), dtype=np.int64)
    rows = rows.reshape(-1, len(comps))

    def compose(a, b):
        return np.stack([c.mul_vec(a[:, i], b[:, i]) for i, c in enumerate(comps)], axis=1)

    def fmt(row):
        return "(" + ", ".join(c.label(int(x)) for c, x in zip(comps, row)) + ")"

    g = FiniteGroup(spec, rows, compose, fmt, name=" x ".join(c.name for c in comps))
    g.factors = comps
    return g


def build(spec: GroupSpec | str) -> FiniteGroup:
    """Construct the group described by ``spec`` (a :class:`GroupSpec` or DSL string)."""
    if isinstance(spec, str):
        spec = parse_spec(spec)
    validate_spec(spec)
    v = spec.variant
    if v == "sym":
        return _sym(spec)
    if v == "cyc":
        return _abelian(spec, spec.params, name=f"Z/{spec.params[0]}")
    if v == "ab":
        return _abelian(spec, spec.params, name="x".join(f"Z/{d}" for d in spec.params))
    if v in ("gl", "sl"):
        return _matrix_group(spec)
    if v == "lamp":
        return _lamplighter(spec)
    if v == "cayley":
        return _cayley(spec, name=Path(spec.source).stem if spec.source else None)
    if v == "prod":
        return _direct_product(spec)
    raise GroupSpecError("variant", f"unknown group family {v!r}")


def from_table(table, names=None, name: str | None = None) -> FiniteGroup:
    return _cayley(cayley_spec(table, names), name=name)


def dihedral(n: int) -> FiniteGroup:
    """Dihedral group of order ``2n`` (symmetries of an ``n``-gon)."""
    if n < 1:
        raise GroupSpecError("n", "must be >= 1")
    elems = [(s, k) for s in range(2) for k in range(n)]  # r^k s^s written as (s, k)

    def mul(x, y):
        (s1, k1), (s2, k2) = x, y
        return ((s1 + s2) % 2, (k1 + (k2 if s1 == 0 else -k2)) % n)

    table = [[elems.index(mul(x, y)) for y in elems] for x in elems]
    names = [("r^%d" % k if k else "1") if s == 0 else ("s" if k == 0 else "r^%ds" % k)
             for s, k in elems]
    names = [nm.replace("r^1", "r") for nm in names]
    return from_table(table, names, name=f"D{n}")


def quaternion() -> FiniteGroup:
    """Quaternion group Q8 on ``1,-1,i,-i,j,-j,k,-k``."""
    units = ["1", "i", "j", "k"]
    mult = {("1", u): (1, u) for u in units}
    mult.update({(u, "1"): (1, u) for u in units})
    for u in "ijk":
        mult[(u, u)] = (-1, "1")
    mult.update({("i", "j"): (1, "k"), ("j", "k"): (1, "i"), ("k", "i"): (1, "j"),
                 ("j", "i"): (-1, "k"), ("k", "j"): (-1, "i"), ("i", "k"): (-1, "j")})
    elems = [(s, u) for u in units for s in (1, -1)]

    def mul(x, y):
        s, u = mult[(x[1], y[1])]
        return (x[0] * y[0] * s, u)

    table = [[elems.index(mul(x, y)) for y in elems] for x in elems]
    names = [("" if s == 1 else "-") + u for s, u in elems]
    return from_table(table, names, name="Q8")


# ---------------------------------------------------------------------------
# Subgroups


@dataclass(frozen=True)
class Subgroup:
    owner: FiniteGroup = field(repr=False, compare=False)
    members: tuple[int, ...]
    generators: tuple[int, ...] = field(default=(), compare=False)
    witnesses: dict[int, Word] | None = field(default=None, compare=False, repr=False)

    @property
    def order(self) -> int:
        return len(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, x: int) -> bool:
        return x in self._member_set

    @cached_property
    def _member_set(self) -> frozenset[int]:
        return frozenset(self.members)

    @cached_property
    def mask(self) -> np.ndarray:
        m = np.zeros(self.owner.order, dtype=bool)
        m[list(self.members)] = True
        return m

    def is_full(self) -> bool:
        return self.order == self.owner.order

    def word_for(self, x: int) -> Word:
        if self.witnesses is None:
            raise ValueError("subgroup was built without witnesses")
        return self.witnesses[x]


def closure_mask(g: FiniteGroup, gens: Iterable[int]) -> np.ndarray:
    """Boolean membership mask of the subgroup generated by ``gens``."""
    gens = np.unique(np.asarray([x for x in gens if x != 0], dtype=np.int64))
    mask = np.zeros(g.order, dtype=bool)
    mask[0] = True
    if gens.size == 0:
        return mask
    # finite group: closing under multiplication by gens suffices
    frontier = np.array([0])
    while frontier.size:
        prods = g.mul_vec(gens[:, None], frontier[None, :]).ravel()
        prods = np.unique(prods)
        prods = prods[~mask[prods]]
        mask[prods] = True
        frontier = prods
    return mask


def closure(g: FiniteGroup, gens: Sequence[int], with_witnesses: bool = False) -> Subgroup:
    """Subgroup generated by ``gens``.

    With ``with_witnesses`` every member carries a word in the generators
    (signed 1-based indices into ``gens``) found by breadth-first search, so
    the words are shortest possible.
    """
    gens = tuple(int(x) for x in gens)
    for x in gens:
        if not 0 <= x < g.order:
            raise ValueError(f"element {x} does not belong to {g.name}")
    if not with_witnesses:
        members = tuple(int(x) for x in np.flatnonzero(closure_mask(g, gens)))
        return Subgroup(g, members, gens)
    words: dict[int, Word] = {0: ()}
    letters = []
    for k, x in enumerate(gens, start=1):
        letters.append((k, x))
        letters.append((-k, g.inv(x)))
    frontier = [0]
    while frontier:
        nxt = []
        for y in frontier:
            for letter, x in letters:
                z = g.mul(x, y)
                if z not in words:
                    words[z] = (letter,) + words[y]
                    nxt.append(z)
        frontier = nxt
    return Subgroup(g, tuple(sorted(words)), gens, words)


def reduce_word(word: Iterable[int]) -> Word:
    """Cancel adjacent inverse letter pairs."""
    out: list[int] = []
    for letter in word:
        if out and out[-1] == -letter:
            out.pop()
        else:
            out.append(letter)
    return tuple(out)


def invert_word(word: Sequence[int]) -> Word:
    return tuple(-x for x in reversed(word))


def is_normal(g: FiniteGroup, members: Sequence[int]) -> bool:
    members = np.asarray(members)
    mask = np.zeros(g.order, dtype=bool)
    mask[members] = True
    ids = np.arange(g.order)
    conj = g.mul_vec(g.mul_vec(ids[:, None], members[None, :]), g.inverses[ids][:, None])
    return bool(mask[conj].all())


def quotient(g: FiniteGroup, n: Subgroup | Sequence[int]) -> tuple[FiniteGroup, np.ndarray]:
    """Quotient group ``g/n`` on cosets and the projection as an id array."""
    members = np.asarray(n.members if isinstance(n, Subgroup) else sorted(n), dtype=np.int64)
    if not is_normal(g, members):
        raise ValueError("subgroup is not normal")
    label = np.full(g.order, -1, dtype=np.int64)
    reps = []
    for a in range(g.order):
        if label[a] < 0:
            label[g.mul_vec(np.full(len(members), a), members)] = len(reps)
            reps.append(a)
    reps = np.asarray(reps)
    qtable = label[g.mul_vec(reps[:, None], reps[None, :])]
    names = [g.label(int(a)) + "N" for a in reps]
    q = from_table(qtable, names, name=f"{g.name}/N{len(members)}")
    _check_homomorphism(g, q, label)
    return q, label


def _check_homomorphism(g: FiniteGroup, h: FiniteGroup, phi: np.ndarray) -> None:
    if g.order <= 200:
        a, b = np.meshgrid(np.arange(g.order), np.arange(g.order), indexing="ij")
    else:
        rng = np.random.default_rng(0)
        a, b = rng.integers(0, g.order, size=(2, 10_000))
    if not (phi[g.mul_vec(a, b)] == h.mul_vec(phi[a], phi[b])).all():
        raise AssertionError("projection is not a homomorphism")


def subgroup_as_group(g: FiniteGroup, sub: Subgroup | Sequence[int],
                      name: str | None = None) -> tuple[FiniteGroup, np.ndarray]:
    """Realize a subgroup as a standalone group; returns it and the embedding ids."""
    members = np.asarray(sub.members if isinstance(sub, Subgroup) else sorted(sub), dtype=np.int64)
    index = np.full(g.order, -1, dtype=np.int64)
    index[members] = np.arange(len(members))
    table = index[g.mul_vec(members[:, None], members[None, :])]
    if (table < 0).any():
        raise ValueError("members are not closed under multiplication")
    names = [g.label(int(a)) for a in members]
    h = from_table(table, names, name=name or f"<{len(members)} in {g.name}>")
    return h, members


# ---------------------------------------------------------------------------
# Determinants


def _matrix_of(g: FiniteGroup, e: int) -> tuple[np.ndarray, int]:
    if g.spec.variant not in ("gl", "sl"):
        raise UnsupportedOperation(f"{g.name} is not a matrix group")
    r, q = g.spec.params
    return g.rows[e].reshape(r, r), q


def determinant(g: FiniteGroup, e: int) -> int:
    m, q = _matrix_of(g, e)
    return _det(m, q)


def determinant_class(g: FiniteGroup, e: int) -> tuple[int, ...]:
    """``det(e)`` up to sign, as the sorted tuple ``{det, -det}`` of field elements."""
    m, q = _matrix_of(g, e)
    d = _det(m, q)
    neg, _ = field_neg_inv(q)
    return tuple(sorted({d, int(neg[d])}))


def elementary_abelian_params(g: FiniteGroup) -> tuple[int, int] | None:
    """``(r, q)`` when ``g`` was built as ``ab:q,...,q`` (r factors) or ``cyc:q``, q prime."""
    if g.spec.variant not in ("ab", "cyc"):
        return None
    mods = set(g.spec.params)
    if len(mods) != 1:
        return None
    (q,) = mods
    pk = factor_prime_power(q)
    if pk is None or pk[1] != 1:
        return None
    return len(g.spec.params), q


def basis_matrix(a: FiniteGroup, t: Sequence[int], gl: FiniteGroup | None = None) -> int:
    """Element of GL_r(F_q) whose columns are the entries of a basis tuple of F_q^r."""
    params = elementary_abelian_params(a)
    if params is None:
        raise UnsupportedOperation(f"{a.name} is not F_q^r with q prime")
    r, q = params
    if len(t) != r:
        raise ValueError(f"need a tuple of length {r}")
    gl = gl or build(GroupSpec("gl", (r, q)))
    cols = np.stack([a.rows[x] for x in t], axis=1)
    return gl.index_of_row(cols.ravel())


def _family_order(spec: GroupSpec) -> int:
    """Order predicted by the family formula (used as a self-check in tests)."""
    v, p = spec.variant, spec.params
    if v == "sym":
        return math.factorial(p[0])
    if v == "cyc":
        return p[0]
    if v == "ab":
        return math.prod(p)
    if v in ("gl", "sl"):
        r, q = p
        n = math.prod(q**r - q**i for i in range(r))
        return n if v == "gl" else n // (q - 1)
    if v == "lamp":
        r, q = p
        return r * q**r
    if v == "prod":
        return math.prod(_family_order(f) for f in spec.factors)
    return len(spec.table)


family_order = _family_order
