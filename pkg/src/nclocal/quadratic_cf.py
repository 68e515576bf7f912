"""Exact arithmetic of quadratic irrationals and their continued fractions.

A value (P+sqrt(D))/Q with nonsquare D > 0 is kept in a canonical integer
triple, so equality is triple equality.  Expansions are computed with the
classical integer recurrence; periods are detected by first repetition of
the (P, Q) state.  Everything here is immutable and pure.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt
from typing import Iterator, Sequence

from ._factor import squarefree_split
from .intmat import IntMatrix

__all__ = [
    "QuadraticIrrational",
    "CFExpansion",
    "cf_expand",
    "is_reduced",
    "incidence_matrix",
    "boundary_to_theta",
    "gl2z_equivalent",
    "convergents",
    "cf_value",
]

_MAX_CF_STATES = 10**6  # defensive cap; the state orbit is always finite


def _lcm(*vals: int) -> int:
    out = 1
    for v in vals:
        out = out * v // gcd(out, v)
    return out


class QuadraticIrrational:
    """The exact value (P+sqrt(D))/Q, canonicalized.

    Canonical form: with value a + b*sqrt(d) (a, b rational, d
    squarefree), Q is the minimal-magnitude integer carrying the sign of
    b such that P = a*Q, D = (b*Q)^2*d are integers and Q | D - P^2.
    The sqrt coefficient in the numerator is always +1; a negative
    irrational part is encoded by Q < 0.
    """

    __slots__ = ("P", "D", "Q", "_a", "_b", "_d")

    def __init__(self, P: int, D: int, Q: int):
        if Q == 0:
            raise ValueError("Q must be nonzero")
        if D <= 0:
            raise ValueError("D must be positive")
        g, d = squarefree_split(D)
        if d == 1:
            raise ValueError(f"D={D} is a perfect square; the value is rational")
        self._init_from_pair(Fraction(P, Q), Fraction(g, Q), d)

    def _init_from_pair(self, a: Fraction, b: Fraction, d: int):
        c = b * b * d - a * a
        t = _lcm(a.denominator, b.denominator, c.denominator)
        if b < 0:
            t = -t
        self._a, self._b, self._d = a, b, d
        self.P = int(a * t)
        self.Q = t
        bt = int(b * t)
        self.D = bt * bt * d
        assert (self.D - self.P * self.P) % self.Q == 0

    @classmethod
    def from_value_pair(cls, a: Fraction, b: Fraction, d: int) -> "QuadraticIrrational":
        """Build from the exact value a + b*sqrt(d), d squarefree."""
        if b == 0:
            raise ValueError("value is rational")
        if squarefree_split(d) != (1, d) or d == 1:
            raise ValueError("d must be squarefree and > 1")
        self = cls.__new__(cls)
        self._init_from_pair(Fraction(a), Fraction(b), d)
        return self

    # -- value access -------------------------------------------------

    def value_pair(self) -> tuple:
        """(a, b, d) with value = a + b*sqrt(d), d squarefree."""
        return self._a, self._b, self._d

    def conjugate(self) -> "QuadraticIrrational":
        """The algebraic conjugate (P-sqrt(D))/Q."""
        return QuadraticIrrational.from_value_pair(self._a, -self._b, self._d)

    def compare_to(self, q) -> int:
        """Exact sign of (self - q) for rational q: -1, or +1 (never 0)."""
        s = self._a - Fraction(q)
        b, d = self._b, self._d
        if s == 0:
            return 1 if b > 0 else -1
        if s > 0 and b > 0:
            return 1
        if s < 0 and b < 0:
            return -1
        # opposite signs: the larger square magnitude wins
        if s > 0:
            return 1 if s * s > b * b * d else -1
        return 1 if b * b * d > s * s else -1

    def floor(self) -> int:
        return _floor_quadratic(self.P, self.D, self.Q)

    def __float__(self) -> float:
        return float(self._a) + float(self._b) * self._d ** 0.5

    def __eq__(self, other) -> bool:
        if not isinstance(other, QuadraticIrrational):
            return NotImplemented
        return (self.P, self.D, self.Q) == (other.P, other.D, other.Q)

    def __hash__(self) -> int:
        return hash((self.P, self.D, self.Q))

    def __str__(self) -> str:
        return f"({self.P}+sqrt({self.D}))/{self.Q}"

    __repr__ = __str__

    _PATTERNS = (
        re.compile(r"^\(\s*(?:(-?\d+)\s*\+\s*)?sqrt\(\s*(\d+)\s*\)\s*\)\s*(?:/\s*(-?\d+))?$"),
        re.compile(r"^(?:(-?\d+)\s*\+\s*)?sqrt\(\s*(\d+)\s*\)\s*(?:/\s*(-?\d+))?$"),
    )

    @classmethod
    def parse(cls, text: str) -> "QuadraticIrrational":
        """Parse "(P+sqrt(D))/Q"; P, /Q and the parentheses may be omitted."""
        for pattern in cls._PATTERNS:
            m = pattern.match(text.strip())
            if m:
                p = int(m.group(1)) if m.group(1) else 0
                d = int(m.group(2))
                q = int(m.group(3)) if m.group(3) else 1
                return cls(p, d, q)
        raise ValueError(f"cannot parse quadratic irrational {text!r}")


def _floor_quadratic(p: int, d: int, q: int) -> int:
    # exact floor of (p + sqrt(d))/q; sqrt(d) irrational
    s = isqrt(d)
    if q > 0:
        return (p + s) // q
    return -((p + s) // (-q)) - 1


@dataclass(frozen=True)
class CFExpansion:
    """Eventually periodic continued fraction: preperiod then repeating period.

    The period is minimal as a word; all period entries are >= 1, and so
    is every preperiod entry except the leading a0, which may be any
    integer (negative values have a negative a0).
    """

    preperiod: tuple
    period: tuple

    def __post_init__(self):
        if not self.period:
            raise ValueError("period must be nonempty")
        if any(a < 1 for a in self.period):
            raise ValueError("period entries must be >= 1")
        if any(a < 1 for a in self.preperiod[1:]):
            raise ValueError("preperiod entries after a0 must be >= 1")
        m = len(self.period)
        for k in range(1, m):
            if m % k == 0 and all(self.period[i] == self.period[i % k] for i in range(m)):
                raise ValueError(f"period {self.period} is not minimal (repeats with length {k})")

    @property
    def is_purely_periodic(self) -> bool:
        return not self.preperiod

    def digits(self) -> Iterator[int]:
        """Infinite digit stream a0, a1, ..."""
        yield from self.preperiod
        while True:
            yield from self.period

    def __str__(self) -> str:
        per = "(" + ", ".join(str(a) for a in self.period) + ")"
        if not self.preperiod:
            return f"[{per}]"
        head = str(self.preperiod[0])
        rest = [str(a) for a in self.preperiod[1:]] + [per]
        return f"[{head}; " + ", ".join(rest) + "]"


def cf_expand(x: QuadraticIrrational) -> CFExpansion:
    """Continued fraction of x by the integer (P, Q) recurrence.

    The first repeated state marks the cycle; since a state determines
    the value, the detected preperiod and period are already minimal.
    A divisor scan re-checks word minimality as a cheap safeguard.
    """
    d_full = x.D
    seen = {}
    digits = []
    p, q = x.P, x.Q
    while (p, q) not in seen:
        seen[(p, q)] = len(digits)
        a = _floor_quadratic(p, d_full, q)
        digits.append(a)
        p_next = a * q - p
        q_next = (d_full - p_next * p_next) // q
        p, q = p_next, q_next
        if len(digits) > _MAX_CF_STATES:
            raise RuntimeError("continued fraction state cap exceeded")
    k = seen[(p, q)]
    pre, per = digits[:k], digits[k:]
    m = len(per)
    for w in range(1, m):
        if m % w == 0 and all(per[i] == per[i % w] for i in range(m)):
            per = per[:w]
            break
    return CFExpansion(tuple(pre), tuple(per))


def is_reduced(x: QuadraticIrrational) -> bool:
    """Galois criterion: x > 1 and the conjugate lies strictly in (-1, 0)."""
    if x.compare_to(1) <= 0:
        return False
    conj = x.conjugate()
    return conj.compare_to(-1) > 0 and conj.compare_to(0) < 0


def incidence_matrix(period: Sequence[int]) -> IntMatrix:
    """Left-to-right product of (a_i,1;1,0) over the period word."""
    period = list(period)
    if not period:
        raise ValueError("empty period")
    if any(a < 1 for a in period):
        raise ValueError("period entries must be >= 1")
    m = IntMatrix(2, 2, (1, 0, 0, 1))
    for a in period:
        m = m * IntMatrix(2, 2, (a, 1, 1, 0))
    return m


def boundary_to_theta(x: QuadraticIrrational) -> QuadraticIrrational:
    """The boundary parameterization |x|/(1+|x|), exactly; lands in (0, 1)."""
    a, b, d = x.value_pair()
    if x.compare_to(0) < 0:
        a, b = -a, -b
    # (a+b*sqrt(d)) / (1+a+b*sqrt(d)), rationalized by the conjugate
    c, e = 1 + a, b
    norm = c * c - e * e * d
    theta = QuadraticIrrational.from_value_pair(
        (a * c - b * e * d) / norm, (b * c - a * e) / norm, d
    )
    assert theta.compare_to(0) > 0 and theta.compare_to(1) < 0
    return theta


def gl2z_equivalent(x: QuadraticIrrational, y: QuadraticIrrational) -> bool:
    """Serret's criterion: equivalent under integer Moebius maps of
    determinant +-1 iff the minimal periods are cyclic shifts."""
    px = cf_expand(x).period
    py = cf_expand(y).period
    if len(px) != len(py):
        return False
    doubled = px + px
    return any(doubled[k : k + len(py)] == py for k in range(len(px)))


def convergents(exp: CFExpansion, count: int) -> list:
    """First ``count`` convergents p_n/q_n as exact fractions."""
    out = []
    p_prev, p_cur = 0, 1
    q_prev, q_cur = 1, 0
    for a, _ in zip(exp.digits(), range(count)):
        p_prev, p_cur = p_cur, a * p_cur + p_prev
        q_prev, q_cur = q_cur, a * q_cur + q_prev
        out.append(Fraction(p_cur, q_cur))
    return out


def _recip(pair: tuple) -> tuple:
    a, b, d = pair
    norm = a * a - b * b * d
    return (a / norm, -b / norm, d)


def cf_value(exp: CFExpansion) -> QuadraticIrrational:
    """Exact value of an eventually periodic continued fraction.

    The purely periodic tail is the attracting fixed point of the
    incidence matrix acting as a Moebius map; the preperiod folds back
    as x = a + 1/y in exact quadratic arithmetic.
    """
    m = incidence_matrix(exp.period)
    p, q, r, s = m.entries
    # tail solves r*t^2 + (s-p)*t - q = 0; take the positive root
    tail = QuadraticIrrational(p - s, (p - s) ** 2 + 4 * r * q, 2 * r)
    a, b, d = tail.value_pair()
    for digit in reversed(exp.preperiod):
        a, b, d = _recip((a, b, d))
        a += digit
    return QuadraticIrrational.from_value_pair(a, b, d)
