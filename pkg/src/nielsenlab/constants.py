"""Rank and redundancy thresholds as exact numbers.

Every constant has the shape ``a + c*log2(J)`` with rational ``a, c`` and a
positive integer ``J``.  Signs of such numbers are decided exactly by
comparing integer powers of 2 and ``J``, so threshold predicates never
depend on floating point rounding.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

COLLINS_EXACT_FROM = 71


def _frac_pow_compare(a: Fraction, c: Fraction, base: int) -> int:
    """Sign of ``2**a - base**c`` for ``a, c >= 0``."""
    # 2^(p/q) vs base^(r/s)  <=>  2^(p*s) vs base^(r*q)
    lhs = 1 << (a.numerator * c.denominator)
    rhs = base ** (c.numerator * a.denominator)
    return (lhs > rhs) - (lhs < rhs)


def log_sign(a: Fraction, c: Fraction, base: int) -> int:
    """Exact sign of ``a + c*log2(base)``."""
    a, c = Fraction(a), Fraction(c)
    if base < 1:
        raise ValueError("log base argument must be >= 1")
    if c == 0 or base == 1:
        return (a > 0) - (a < 0)
    approx = float(a) + float(c) * math.log2(base)
    scale = abs(float(a)) + abs(float(c)) * math.log2(base)
    if abs(approx) > 1e-9 * scale:
        return 1 if approx > 0 else -1
    if a >= 0 and c >= 0:
        return 1
    if a <= 0 and c <= 0:
        return -1
    if c > 0:  # a < 0: compare c*L with -a
        return -_frac_pow_compare(-a, c, base)
    return _frac_pow_compare(a, -c, base)


def _two_log_sign(a: Fraction, c1: Fraction, b1: int, c2: Fraction, b2: int) -> int:
    """Exact sign of ``a + c1*log2(b1) + c2*log2(b2)``."""
    approx = float(a) + float(c1) * math.log2(b1) + float(c2) * math.log2(b2)
    scale = abs(float(a)) + abs(float(c1)) * math.log2(b1) + abs(float(c2)) * math.log2(b2)
    if abs(approx) > 1e-9 * scale:
        return 1 if approx > 0 else -1
    # scale by L so the exponents are integers: a*L + log2(b1^(c1 L) b2^(c2 L))
    L = math.lcm(c1.denominator, c2.denominator)
    r = Fraction(b1) ** int(c1 * L) * Fraction(b2) ** int(c2 * L)
    p, q = (a * L).numerator, (a * L).denominator
    x = Fraction(2) ** p * r ** q
    return (x > 1) - (x < 1)


@dataclass(frozen=True)
class LogValue:
    """The real number ``a + c*log2(base)``."""

    a: Fraction
    c: Fraction = Fraction(0)
    base: int = 1

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "c", Fraction(self.c))
        if self.base == 1 or self.c == 0:
            object.__setattr__(self, "c", Fraction(0))
            object.__setattr__(self, "base", 1)

    def _check(self, other: "LogValue") -> int:
        if self.base != other.base and 1 not in (self.base, other.base):
            raise ValueError("cannot combine logarithms of different arguments")
        return max(self.base, other.base)

    def __add__(self, other):
        if not isinstance(other, LogValue):
            return LogValue(self.a + Fraction(other), self.c, self.base)
        return LogValue(self.a + other.a, self.c + other.c, self._check(other))

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-1) * other if isinstance(other, LogValue) else self + (-Fraction(other))

    def __mul__(self, k):
        k = Fraction(k)
        return LogValue(self.a * k, self.c * k, self.base)

    __rmul__ = __mul__

    def sign(self) -> int:
        return log_sign(self.a, self.c, self.base)

    def compare(self, other) -> int:
        if isinstance(other, LogValue) and 1 not in (self.base, other.base) \
                and self.base != other.base:
            return _two_log_sign(self.a - other.a, self.c, self.base, -other.c, other.base)
        return (self - other).sign()

    def __lt__(self, other):
        return self.compare(other) < 0

    def __le__(self, other):
        return self.compare(other) <= 0

    def __gt__(self, other):
        return self.compare(other) > 0

    def __ge__(self, other):
        return self.compare(other) >= 0

    def __eq__(self, other):
        if isinstance(other, LogValue):
            return self.compare(other) == 0
        return self.compare(Fraction(other)) == 0

    def __hash__(self):
        return hash((self.a, self.c, self.base))

    def __float__(self) -> float:
        return float(self.a) + (float(self.c) * math.log2(self.base) if self.c else 0.0)

    def meets(self, n: int) -> bool:
        """Exact test of ``n >= self``."""
        return (LogValue(n) - self).sign() >= 0

    def ceil(self) -> int:
        """Smallest integer ``n`` with ``n >= self``."""
        n = math.floor(float(self)) - 1
        while not self.meets(n):
            n += 1
        return n

    def __str__(self) -> str:
        if self.c == 0:
            return str(self.a)
        return f"{self.a} + {self.c}*log2({self.base})"

    def to_json(self) -> dict:
        return {"rational": str(self.a), "log2_coeff": str(self.c), "log2_arg": self.base,
                "approx": float(self), "ceil": self.ceil()}


# ---------------------------------------------------------------------------
# Jordan constants


@dataclass
class JordanPolicy:
    """Where ``J(m)`` comes from.

    ``collins_large_m`` uses ``(m+1)!``, which is exact from ``m = 71`` on and
    a lower bound below; ``J(1) = 1`` since finite subgroups of ``GL_1`` are
    abelian.  ``user_supplied`` reads values from ``table`` and falls back
    to the factorial rule for missing ``m``.
    """

    mode: str = "collins_large_m"
    table: dict[int, int] = field(default_factory=dict)

    def __post_init__(self):
        if self.mode not in ("collins_large_m", "user_supplied"):
            raise ValueError(f"unknown Jordan policy {self.mode!r}")
        self.table = {int(k): int(v) for k, v in self.table.items()}
        for m, j in self.table.items():
            if m < 1:
                raise ValueError("table keys must be >= 1")
            if j < _floor_value(m):
                raise ValueError(f"J({m}) = {j} is below the lower bound {_floor_value(m)}")

    @classmethod
    def from_file(cls, path: str | Path) -> "JordanPolicy":
        data = json.loads(Path(path).read_text())
        return cls("user_supplied", {int(k): int(v) for k, v in data.items()})

    def J(self, m: int) -> int:
        if m < 1:
            raise ValueError("m must be >= 1")
        if self.mode == "user_supplied" and m in self.table:
            return self.table[m]
        return _floor_value(m)

    def is_exact(self, m: int) -> bool:
        return m == 1 or m >= COLLINS_EXACT_FROM or (self.mode == "user_supplied" and m in self.table)


def _floor_value(m: int) -> int:
    return 1 if m == 1 else math.factorial(m + 1)


DEFAULT_POLICY = JordanPolicy()


# ---------------------------------------------------------------------------
# Constants


def N_sharp(m: int, policy: JordanPolicy = DEFAULT_POLICY) -> LogValue:
    """``1 + 5m/2 + log2 J(m)``."""
    if m < 1:
        raise ValueError("m must be >= 1")
    return LogValue(1 + Fraction(5 * m, 2), 1, policy.J(m))


def N_recursive(m: int, D: int, policy: JordanPolicy = DEFAULT_POLICY) -> LogValue:
    """``N(m,0) = N_#(m)`` and ``N(m,D+1) = N(m,0) + max_{j<=D} N(m,j)``."""
    if D < 0:
        raise ValueError("D must be >= 0")
    base = N_sharp(m, policy)
    value = top = base
    for _ in range(D):
        value = base + top
        top = max(top, value)  # running max over N(m, 0..j)
    return value


def N_closed(m: int, D: int, policy: JordanPolicy = DEFAULT_POLICY) -> LogValue:
    if D < 0:
        raise ValueError("D must be >= 0")
    return (D + 1) * N_sharp(m, policy)


def N(m: int, policy: JordanPolicy = DEFAULT_POLICY) -> LogValue:
    """``N(m) = N(m, 2m-1) = 2m N_#(m)``."""
    return 2 * m * N_sharp(m, policy)


def Z(m: int, policy: JordanPolicy = DEFAULT_POLICY) -> LogValue:
    """``Z(m) = N(m, m(m+3)/2) = m(m+5)/2 * N_#(m)``."""
    return Fraction(m * (m + 5), 2) * N_sharp(m, policy)


def T(m: int, policy: JordanPolicy = DEFAULT_POLICY) -> int:
    return 2 * m * (1 + m + policy.J(m))


def ell_U(m: int) -> int:
    return 2 * m - 1


def ell_a_GL(m: int) -> int:
    return m * (m + 3) // 2


def generator_bound(m: int) -> int:
    """``2 + floor(3m/2)``."""
    return 2 + (3 * m) // 2


def sufficient_n(m: int, policy: JordanPolicy = DEFAULT_POLICY) -> int:
    return N(m, policy).ceil() + 2 + (3 * m) // 2


def intro_value(m: int, b: int = 0) -> LogValue:
    """``2 m^2 log2(m) + 3 m^2 + b``."""
    return LogValue(3 * m * m + b, 2 * m * m, m)


def intro_bound(m: int, b: int = 0) -> int:
    return intro_value(m, b).ceil()


@dataclass
class ConstantReport:
    m: int
    J: int
    J_exact: bool
    policy: str
    N_sharp: LogValue
    N_sharp_min_n: int
    N: LogValue
    Z: LogValue
    T: int
    ell_Um: int
    ell_a_GLm: int
    generator_bound: int
    sufficient_n_thmA: int
    b: int
    intro_bound: int

    def to_json(self) -> dict:
        out = {}
        for k, v in self.__dict__.items():
            out[k] = v.to_json() if isinstance(v, LogValue) else v
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def report(m: int, policy: JordanPolicy = DEFAULT_POLICY, b: int = 1000) -> ConstantReport:
    if b < 0:
        raise ValueError("b must be >= 0")
    ns = N_sharp(m, policy)
    return ConstantReport(
        m=m, J=policy.J(m), J_exact=policy.is_exact(m), policy=policy.mode,
        N_sharp=ns, N_sharp_min_n=ns.ceil(), N=N(m, policy), Z=Z(m, policy), T=T(m, policy),
        ell_Um=ell_U(m), ell_a_GLm=ell_a_GL(m), generator_bound=generator_bound(m),
        sufficient_n_thmA=sufficient_n(m, policy), b=b, intro_bound=intro_bound(m, b))
