"""Weierstrass models: invariants, admissible changes of variable,
reduction mod p, reduction-type classification, point counting over
F_{p^n}, and the group structure of the rational points.

Models live either over Q (exact Fraction coefficients) or over a finite
field (FieldElement coefficients).  No minimal-model search happens
anywhere: the classifier sees exactly the model it is given, and callers
supply p-integral equations.  Counting is brute force behind desk-scale
guards; all derived counts go through the trace recurrence.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import gcd
from typing import Iterator, Optional

from ._factor import factorize
from .ck_k0 import AbelianGroupInv
from .ffield import FieldElement, PrimeField, finite_field, is_square

__all__ = [
    "WeierstrassModel",
    "AdmissibleTransform",
    "ReductionKind",
    "ReductionType",
    "UnclassifiableReductionError",
    "invariants",
    "WInvariants",
    "j_invariant",
    "transform",
    "reduce_mod_p",
    "classify_reduction",
    "count_points",
    "count_nonsingular",
    "trace_of_frobenius",
    "point_counts_via_recurrence",
    "group_structure",
    "isomorphic_over_closure",
    "isomorphism_witness",
    "model_over_ext",
    "COUNT_GUARD",
    "GROUP_GUARD",
    "CLASSIFY_GUARD",
]

COUNT_GUARD = 10**7
GROUP_GUARD = 10**6
CLASSIFY_GUARD = 10**4


class UnclassifiableReductionError(ValueError):
    """Raised when a singular model defeats the classifier (degenerate
    small-characteristic corner with no unique singular point)."""


@dataclass(frozen=True)
class WeierstrassModel:
    """y^2 + a1*xy + a3*y = x^3 + a2*x^2 + a4*x + a6.

    ``field`` is None for a model over Q (Fraction coefficients) or a
    field descriptor (FieldElement coefficients).
    """

    a1: object
    a2: object
    a3: object
    a4: object
    a6: object
    field: object = None

    @classmethod
    def over_q(cls, a1, a2, a3, a4, a6) -> "WeierstrassModel":
        return cls(*(Fraction(a) for a in (a1, a2, a3, a4, a6)))

    @classmethod
    def over_field(cls, field, a1, a2, a3, a4, a6) -> "WeierstrassModel":
        coeffs = [
            a if isinstance(a, FieldElement) else FieldElement.of(field, a)
            for a in (a1, a2, a3, a4, a6)
        ]
        return cls(*coeffs, field=field)

    @classmethod
    def parse(cls, text: str) -> "WeierstrassModel":
        """Parse the CLI form "[a1,a2,a3,a4,a6]" with rationals as "n/d"."""
        try:
            data = json.loads(text)
        except json.JSONDecodeError:
            inner = text.strip()
            if not (inner.startswith("[") and inner.endswith("]")):
                raise ValueError(f"cannot parse model {text!r}") from None
            data = [tok.strip() for tok in inner[1:-1].split(",")]
        if not isinstance(data, list) or len(data) != 5:
            raise ValueError(f"model must have 5 coefficients, got {text!r}")
        try:
            return cls.over_q(*(Fraction(str(a)) for a in data))
        except (ValueError, ZeroDivisionError) as e:
            raise ValueError(f"cannot parse model {text!r}: {e}") from None

    @property
    def coefficients(self) -> tuple:
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    def coefficient_strings(self) -> list:
        return [str(a) for a in self.coefficients]

    def __str__(self) -> str:
        return "[" + ",".join(self.coefficient_strings()) + "]"


@dataclass(frozen=True)
class WInvariants:
    b2: object
    b4: object
    b6: object
    b8: object
    c4: object
    c6: object
    disc: object


def invariants(e: WeierstrassModel) -> WInvariants:
    """Standard quantities b2, b4, b6, b8, c4, c6 and the discriminant."""
    a1, a2, a3, a4, a6 = e.coefficients
    b2 = a1 * a1 + 4 * a2
    b4 = 2 * a4 + a1 * a3
    b6 = a3 * a3 + 4 * a6
    b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    c4 = b2 * b2 - 24 * b4
    c6 = -b2 * b2 * b2 + 36 * b2 * b4 - 216 * b6
    disc = -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6
    assert 4 * b8 == b2 * b6 - b4 * b4, "b8 consistency identity failed"
    return WInvariants(b2, b4, b6, b8, c4, c6, disc)


def j_invariant(e: WeierstrassModel):
    """j = c4^3 / disc; defined only for nonsingular models."""
    inv = invariants(e)
    if inv.disc == 0:
        raise ValueError("singular model")
    return inv.c4 * inv.c4 * inv.c4 / inv.disc


def is_singular(e: WeierstrassModel) -> bool:
    return invariants(e).disc == 0


@dataclass(frozen=True)
class AdmissibleTransform:
    """x = u^2 x' + r,  y = u^3 y' + s u^2 x' + t,  with u invertible."""

    u: object
    r: object
    s: object
    t: object

    def __post_init__(self):
        if self.u == 0:
            raise ValueError("u must be nonzero")

    @classmethod
    def over_q(cls, u, r=0, s=0, t=0) -> "AdmissibleTransform":
        return cls(Fraction(u), Fraction(r), Fraction(s), Fraction(t))

    def then(self, other: "AdmissibleTransform") -> "AdmissibleTransform":
        """Composite with ``other`` applied second:
        transform(transform(E, self), other) == transform(E, self.then(other))."""
        u1, r1, s1, t1 = self.u, self.r, self.s, self.t
        u2, r2, s2, t2 = other.u, other.r, other.s, other.t
        return AdmissibleTransform(
            u1 * u2,
            u1 * u1 * r2 + r1,
            u1 * s2 + s1,
            u1 * u1 * u1 * t2 + s1 * u1 * u1 * r2 + t1,
        )

    def inverse(self) -> "AdmissibleTransform":
        u, r, s, t = self.u, self.r, self.s, self.t
        iu = 1 / u
        return AdmissibleTransform(iu, -r * iu * iu, -s * iu, (r * s - t) * iu * iu * iu)


def transform(e: WeierstrassModel, tr: AdmissibleTransform) -> WeierstrassModel:
    """Apply an admissible change of variable; disc scales by u^-12, c4 by
    u^-4, and j is unchanged."""
    a1, a2, a3, a4, a6 = e.coefficients
    u, r, s, t = tr.u, tr.r, tr.s, tr.t
    u2 = u * u
    u3 = u2 * u
    na1 = (a1 + 2 * s) / u
    na2 = (a2 - s * a1 + 3 * r - s * s) / u2
    na3 = (a3 + r * a1 + 2 * t) / u3
    na4 = (a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t) / (u2 * u2)
    na6 = (a6 + r * a4 + r * r * a2 + r * r * r - t * a3 - t * t - r * t * a1) / (u3 * u3)
    return WeierstrassModel(na1, na2, na3, na4, na6, field=e.field)


def reduce_mod_p(e: WeierstrassModel, p: int) -> WeierstrassModel:
    """Coefficientwise reduction of a p-integral model over Q."""
    if e.field is not None:
        raise ValueError("model is not over Q")
    fp = PrimeField(p)
    vals = []
    for a in e.coefficients:
        if a.denominator % p == 0:
            raise ValueError(f"model not p-integral at p={p} (coefficient {a})")
        vals.append(a.numerator * fp.inv(a.denominator % p) % p)
    return WeierstrassModel.over_field(fp, *vals)


def model_over_ext(e: WeierstrassModel, ext) -> WeierstrassModel:
    """Base-change a model over F_p to an extension of F_p."""
    if not isinstance(e.field, PrimeField) or ext.char != e.field.p:
        raise ValueError("model must be over the prime subfield of ext")
    return WeierstrassModel.over_field(ext, *(a.val for a in e.coefficients))


# ---------------------------------------------------------------------------
# reduction types
# ---------------------------------------------------------------------------


class ReductionKind(Enum):
    GOOD = "good"
    SPLIT_MULTIPLICATIVE = "split_multiplicative"
    NONSPLIT_MULTIPLICATIVE = "nonsplit_multiplicative"
    ADDITIVE = "additive"


@dataclass(frozen=True)
class ReductionType:
    kind: ReductionKind
    alpha: Optional[int] = None

    @property
    def is_good(self) -> bool:
        return self.kind is ReductionKind.GOOD

    def __str__(self) -> str:
        if self.is_good:
            return "good"
        return f"{self.kind.value} (alpha={self.alpha})"


def _singular_points(e: WeierstrassModel) -> list:
    """All affine singular points of a model over F_p (they are rational)."""
    field = e.field
    p = field.p
    if p > CLASSIFY_GUARD:
        raise ValueError("classification guard exceeded")
    a1, a2, a3, a4, a6 = e.coefficients

    def on_curve_singular(x, y):
        f = y * y + a1 * x * y + a3 * y - (x * x * x + a2 * x * x + a4 * x + a6)
        fx = a1 * y - (3 * x * x + 2 * a2 * x + a4)
        fy = 2 * y + a1 * x + a3
        return f == 0 and fx == 0 and fy == 0

    pts = []
    if p <= 3:
        for xv in range(p):
            for yv in range(p):
                x, y = FieldElement.of(field, xv), FieldElement.of(field, yv)
                if on_curve_singular(x, y):
                    pts.append((x, y))
        return pts
    for xv in range(p):
        x = FieldElement.of(field, xv)
        y = -(a1 * x + a3) / 2
        if on_curve_singular(x, y):
            pts.append((x, y))
    return pts


def classify_reduction(e: WeierstrassModel) -> ReductionType:
    """Reduction type of a model over F_p.

    Good when the discriminant is nonzero.  Otherwise the unique singular
    point is translated to the origin and the tangent-cone discriminant
    decides node vs cusp and split vs non-split (p > 3); for p <= 3 the
    kind comes from c4 and alpha from the count of nonsingular points.
    The slope verdict is always cross-checked against #E_ns = p - alpha.
    """
    if not isinstance(e.field, PrimeField):
        raise ValueError("classification needs a model over F_p")
    p = e.field.p
    inv = invariants(e)
    if inv.disc != 0:
        return ReductionType(ReductionKind.GOOD)
    sing = _singular_points(e)
    if len(sing) != 1:
        raise UnclassifiableReductionError(
            f"expected a unique singular point, found {len(sing)}"
        )
    x0, y0 = sing[0]
    ns_count = count_nonsingular(e, 1)
    alpha_by_count = p - ns_count
    if p <= 3:
        if inv.c4 == 0:
            kind = ReductionKind.ADDITIVE
        elif alpha_by_count == 1:
            kind = ReductionKind.SPLIT_MULTIPLICATIVE
        else:
            kind = ReductionKind.NONSPLIT_MULTIPLICATIVE
        if (kind is ReductionKind.ADDITIVE) != (alpha_by_count == 0):
            raise UnclassifiableReductionError("c4 and counting disagree")
        return ReductionType(kind, alpha_by_count)
    shifted = transform(e, AdmissibleTransform(FieldElement.of(e.field, 1), x0, FieldElement.of(e.field, 0), y0))
    assert shifted.a3 == 0 and shifted.a4 == 0 and shifted.a6 == 0
    tangent_disc = shifted.a1 * shifted.a1 + 4 * shifted.a2
    if tangent_disc == 0:
        kind, alpha = ReductionKind.ADDITIVE, 0
    elif is_square(e.field, tangent_disc.val):
        kind, alpha = ReductionKind.SPLIT_MULTIPLICATIVE, 1
    else:
        kind, alpha = ReductionKind.NONSPLIT_MULTIPLICATIVE, -1
    if alpha != alpha_by_count:
        raise UnclassifiableReductionError(
            f"slope method alpha={alpha} but #E_ns gives alpha={alpha_by_count}"
        )
    if (kind is ReductionKind.ADDITIVE) != (inv.c4 == 0):
        raise UnclassifiableReductionError("tangent cone and c4 disagree")
    return ReductionType(kind, alpha)


# ---------------------------------------------------------------------------
# point counting
# ---------------------------------------------------------------------------

_SQUARE_TABLE_LIMIT = 2 * 10**5


def _affine_count(e: WeierstrassModel, n: int) -> int:
    """Number of affine F_{p^n}-solutions of the Weierstrass equation."""
    field = e.field
    p = field.p
    q = p**n
    if q > COUNT_GUARD:
        raise ValueError("guard exceeded: p^n > 10^7")
    a1, a2, a3, a4, a6 = (a.val for a in e.coefficients)
    if n == 1:
        if p == 2:
            return sum(
                1
                for x in range(2)
                for y in range(2)
                if (y * y + a1 * x * y + a3 * y - (x**3 + a2 * x * x + a4 * x + a6)) % 2 == 0
            )
        use_table = p <= _SQUARE_TABLE_LIMIT
        squares = frozenset(x * x % p for x in range(p // 2 + 1)) if use_table else None
        half = (p - 1) // 2
        total = 0
        for x in range(p):
            b = (a1 * x + a3) % p
            c = (x * x * x + a2 * x * x + a4 * x + a6) % p
            disc = (b * b + 4 * c) % p
            if disc == 0:
                total += 1
            elif (disc in squares) if use_table else (pow(disc, half, p) == 1):
                total += 2
        return total
    ext = finite_field(p, n)
    av1, av2, av3, av4, av6 = (ext.from_int(v) for v in (a1, a2, a3, a4, a6))
    mul, add = ext.mul, ext.add
    zero = ext.zero()
    if p == 2:
        # y^2 + B y = C has one solution when B = 0, else two iff
        # Tr(C / B^2) = 0 after the substitution y = B z
        total = 0
        for x in ext.elements():
            x2 = mul(x, x)
            b = add(mul(av1, x), av3)
            c = add(add(mul(x2, x), mul(av2, x2)), add(mul(av4, x), av6))
            if b == zero:
                total += 1
            else:
                binv2 = ext.inv(mul(b, b))
                if ext.absolute_trace(mul(c, binv2)) == 0:
                    total += 2
        return total
    squares = frozenset(mul(z, z) for z in ext.elements())
    total = 0
    neg = ext.neg
    for x in ext.elements():
        x2 = mul(x, x)
        b = add(mul(av1, x), av3)
        rhs = add(add(mul(x2, x), mul(av2, x2)), add(mul(av4, x), av6))
        disc = add(mul(b, b), mul(ext.from_int(4), rhs))
        if disc == zero:
            total += 1
        elif disc in squares:
            total += 2
    return total


def count_points(e: WeierstrassModel, n: int = 1) -> int:
    """#E(F_{p^n}) including the point at infinity, by brute force."""
    if is_singular(e):
        raise ValueError("singular model (use count_nonsingular)")
    return _affine_count(e, n) + 1


def count_nonsingular(e: WeierstrassModel, n: int = 1) -> int:
    """Number of nonsingular F_{p^n}-points including infinity.

    The singular points of a Weierstrass cubic are rational over the
    prime field, so excluding them is an exact subtraction.
    """
    sing = 0 if not is_singular(e) else len(_singular_points(e))
    return _affine_count(e, n) - sing + 1


def trace_of_frobenius(e: WeierstrassModel) -> int:
    """a_p = p + 1 - #E(F_p); the Hasse bound is asserted."""
    p = e.field.p
    ap = p + 1 - count_points(e, 1)
    if ap * ap > 4 * p:
        raise RuntimeError(f"count bug: |a_p|={abs(ap)} violates the Hasse bound at p={p}")
    return ap


def point_counts_via_recurrence(ap: int, p: int, n_max: int) -> list:
    """[N_1, ..., N_n] from s_0=2, s_1=a_p, s_{k+1} = a_p s_k - p s_{k-1},
    N_k = p^k + 1 - s_k."""
    if ap * ap > 4 * p:
        raise ValueError("a_p violates the Hasse bound")
    out = []
    s_prev, s_cur = 2, ap
    for k in range(1, n_max + 1):
        out.append(p**k + 1 - s_cur)
        s_prev, s_cur = s_cur, ap * s_cur - p * s_prev
    return out


# ---------------------------------------------------------------------------
# the group of points
# ---------------------------------------------------------------------------


# raw group-law core: points are None or (x, y) in the field's native
# representation; the FieldElement wrappers delegate here


def _raw_consts(e: WeierstrassModel) -> tuple:
    return tuple(a.val for a in e.coefficients)


def _raw_neg(f, consts, pt):
    if pt is None:
        return None
    a1, _, a3, _, _ = consts
    x, y = pt
    return (x, f.sub(f.neg(y), f.add(f.mul(a1, x), a3)))


def _raw_add(f, consts, pt1, pt2):
    if pt1 is None:
        return pt2
    if pt2 is None:
        return pt1
    a1, a2, a3, a4, a6 = consts
    x1, y1 = pt1
    x2, y2 = pt2
    if x1 == x2 and y2 == f.sub(f.neg(y1), f.add(f.mul(a1, x1), a3)):
        return None
    if pt1 == pt2:
        denom = f.add(f.add(y1, y1), f.add(f.mul(a1, x1), a3))
        inv = f.inv(denom)
        x1sq = f.mul(x1, x1)
        lam_num = f.sub(
            f.add(f.add(x1sq, f.add(x1sq, x1sq)), f.add(f.add(f.mul(a2, x1), f.mul(a2, x1)), a4)),
            f.mul(a1, y1),
        )
        nu_num = f.sub(f.add(f.mul(a4, x1), f.add(a6, a6)), f.add(f.mul(x1sq, x1), f.mul(a3, y1)))
        lam = f.mul(lam_num, inv)
        nu = f.mul(nu_num, inv)
    else:
        inv = f.inv(f.sub(x2, x1))
        lam = f.mul(f.sub(y2, y1), inv)
        nu = f.mul(f.sub(f.mul(y1, x2), f.mul(y2, x1)), inv)
    x3 = f.sub(f.sub(f.add(f.mul(lam, lam), f.mul(a1, lam)), a2), f.add(x1, x2))
    y3 = f.sub(f.neg(f.mul(f.add(lam, a1), x3)), f.add(nu, a3))
    return (x3, y3)


def _raw_mul(f, consts, pt, k: int):
    if k < 0:
        return _raw_mul(f, consts, _raw_neg(f, consts, pt), -k)
    acc = None
    base = pt
    while k:
        if k & 1:
            acc = _raw_add(f, consts, acc, base)
        base = _raw_add(f, consts, base, base)
        k >>= 1
    return acc


def _ec_add(e: WeierstrassModel, pt1, pt2):
    f = e.field
    unwrap = lambda pt: None if pt is None else (pt[0].val, pt[1].val)  # noqa: E731
    out = _raw_add(f, _raw_consts(e), unwrap(pt1), unwrap(pt2))
    if out is None:
        return None
    return (FieldElement(f, out[0]), FieldElement(f, out[1]))


def _ec_mul(e: WeierstrassModel, pt, k: int):
    f = e.field
    raw = None if pt is None else (pt[0].val, pt[1].val)
    out = _raw_mul(f, _raw_consts(e), raw, k)
    if out is None:
        return None
    return (FieldElement(f, out[0]), FieldElement(f, out[1]))


def _affine_points_raw(e: WeierstrassModel) -> Iterator:
    """All affine points of a model over its (small) field, raw values."""
    f = e.field
    a1, a2, a3, a4, a6 = _raw_consts(e)
    mul, add, sub = f.mul, f.add, f.sub
    if f.char == 2:
        halves: dict = {}
        for z in f.elements():
            halves.setdefault(add(mul(z, z), z), []).append(z)
        for x in f.elements():
            xsq = mul(x, x)
            b = add(mul(a1, x), a3)
            c = add(add(mul(xsq, x), mul(a2, xsq)), add(mul(a4, x), a6))
            if b == f.zero():
                # y^2 = c: the Frobenius is bijective
                yield (x, f.pow(c, f.order // 2) if f.order > 2 else c)
            else:
                scaled = mul(c, f.inv(mul(b, b)))
                for z in halves.get(scaled, []):
                    yield (x, mul(b, z))
        return
    roots: dict = {}
    for z in f.elements():
        roots.setdefault(mul(z, z), z)
    inv2 = f.inv(f.from_int(2))
    four = f.from_int(4)
    for x in f.elements():
        xsq = mul(x, x)
        b = add(mul(a1, x), a3)
        c = add(add(mul(xsq, x), mul(a2, xsq)), add(mul(a4, x), a6))
        disc = add(mul(b, b), mul(four, c))
        if disc == f.zero():
            yield (x, mul(f.neg(b), inv2))
        elif disc in roots:
            r = roots[disc]
            yield (x, mul(sub(r, b), inv2))
            yield (x, mul(sub(f.neg(r), b), inv2))


def _divisors(n: int) -> list:
    out = [1]
    for prime, exp in factorize(n).items():
        out = [d * prime**k for d in out for k in range(exp + 1)]
    return sorted(out)


def group_structure(e: WeierstrassModel, n: int = 1) -> AbelianGroupInv:
    """E(F_{p^n}) as Z/d1 x Z/d2 with d1 | d2, by full enumeration.

    d2 is the group exponent (lcm of point orders), d1 = N/d2; the
    classical constraint d1 | q-1 is asserted.  The point scan stops
    early once the running lcm L is the only divisor of N that is a
    multiple of L with N/L dividing q-1: the true exponent always has
    both properties, so no later point can change the answer.
    """
    if is_singular(e):
        raise ValueError("singular model")
    p = e.field.p
    q = p**n
    if q > GROUP_GUARD:
        raise ValueError("guard exceeded: p^n > 10^6")
    curve = e if n == 1 else model_over_ext(e, finite_field(p, n))
    field = curve.field
    consts = _raw_consts(curve)
    pts = list(_affine_points_raw(curve))
    n_points = len(pts) + 1
    if n_points == 1:
        return AbelianGroupInv((1, 1))
    fac = sorted(factorize(n_points))
    divisors = _divisors(n_points)
    exponent = 1
    for pt in pts:
        # a point killed by the current lcm cannot enlarge it
        if exponent > 1 and _raw_mul(field, consts, pt, exponent) is None:
            continue
        order = n_points
        for ell in fac:
            while order % ell == 0 and _raw_mul(field, consts, pt, order // ell) is None:
                order //= ell
        exponent = exponent * order // gcd(exponent, order)
        candidates = [d for d in divisors if d % exponent == 0 and (q - 1) % (n_points // d) == 0]
        if candidates == [exponent]:
            break
    d2 = exponent
    d1 = n_points // d2
    assert d1 * d2 == n_points and d2 % d1 == 0, "structure bookkeeping failed"
    assert (q - 1) % d1 == 0, "d1 must divide q-1"
    return AbelianGroupInv((d1, d2))


# ---------------------------------------------------------------------------
# isomorphism over the algebraic closure
# ---------------------------------------------------------------------------


def isomorphic_over_closure(e1: WeierstrassModel, e2: WeierstrassModel) -> bool:
    """Nonsingular curves over the same F_p are isomorphic over the
    algebraic closure iff their j-invariants agree."""
    if e1.field != e2.field:
        raise ValueError("models live over different fields")
    return j_invariant(e1) == j_invariant(e2)


def _short_form(e: WeierstrassModel) -> tuple:
    """(E_short, T) with transform(e, T) = E_short: y^2 = x^3 + Ax + B.
    Needs characteristic 0 or > 3."""
    field = e.field
    one = Fraction(1) if field is None else FieldElement.of(field, 1)
    zero = one - one
    t1 = AdmissibleTransform(one, zero, -e.a1 / 2, -e.a3 / 2)
    mid = transform(e, t1)
    t2 = AdmissibleTransform(one, -invariants(mid).b2 / 12, zero, zero)
    total = t1.then(t2)
    short = transform(e, total)
    assert short.a1 == 0 and short.a2 == 0 and short.a3 == 0
    return short, total


def _embed_transform(tr: AdmissibleTransform, ext) -> AdmissibleTransform:
    return AdmissibleTransform(
        *(FieldElement(ext, ext.from_int(v.val) if ext.degree > 1 else v.val) for v in (tr.u, tr.r, tr.s, tr.t))
    )


def isomorphism_witness(e1: WeierstrassModel, e2: WeierstrassModel, max_degree: Optional[int] = None):
    """Explicit (u,r,s,t) over a small extension witnessing isomorphism.

    Searches twist scalars u over F_{p^k} with k <= 2 generically and
    k <= 6 for j in {0, 1728}; returns (transform, field) or None when
    the j-invariants differ.  Requires p > 3.
    """
    if not isinstance(e1.field, PrimeField):
        raise ValueError("witness search needs models over F_p")
    p = e1.field.p
    if p <= 3:
        raise ValueError("witness search requires p > 3")
    if not isomorphic_over_closure(e1, e2):
        return None
    s1, t1 = _short_form(e1)
    s2, t2 = _short_form(e2)
    a_1, b_1 = s1.a4, s1.a6
    a_2, b_2 = s2.a4, s2.a6
    j = j_invariant(e1)
    special = b_1 == 0 or a_1 == 0
    degrees = (1, 2, 3, 4, 6) if special else (1, 2)
    if max_degree is not None:
        degrees = tuple(k for k in degrees if k <= max_degree)
    for k in degrees:
        if p**k > COUNT_GUARD:
            break
        ext = finite_field(p, k)
        if k == 1:
            field = e1.field
            embed = lambda v: v  # noqa: E731
        else:
            field = ext
            embed = lambda v: FieldElement(ext, ext.from_int(v.val))  # noqa: E731
        ea1, eb1, ea2, eb2 = embed(a_1), embed(b_1), embed(a_2), embed(b_2)
        for uv in field.elements():
            if uv == field.zero():
                continue
            u = FieldElement(field, uv)
            u4 = u**4
            u6 = u4 * u * u
            if ea2 * u4 == ea1 and eb2 * u6 == eb1:
                tw = AdmissibleTransform(
                    u, FieldElement.of(field, 0), FieldElement.of(field, 0), FieldElement.of(field, 0)
                )
                if k == 1:
                    total = t1.then(tw).then(t2.inverse())
                    base1, base2 = e1, e2
                else:
                    total = _embed_transform(t1, ext).then(tw).then(_embed_transform(t2, ext).inverse())
                    base1, base2 = model_over_ext(e1, ext), model_over_ext(e2, ext)
                if transform(base1, total) == base2:
                    return total, field
    return None
