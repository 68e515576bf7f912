"""Arbitrary-precision integer matrix algebra.

Exact powers, traces, determinants, Smith normal form with unimodular
transforms, and GL(2,Z) conjugacy testing for 2x2 matrices.  Matrices are
immutable; every operation is a pure function, safe for concurrent use.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

__all__ = [
    "IntMatrix",
    "ConjugacyVerdict",
    "identity",
    "mat_pow",
    "smith_normal_form",
    "conjugacy_test",
    "brute_force_conjugator",
    "unimodular_2x2",
    "word_of_matrix",
    "cyclically_equivalent",
]


@dataclass(frozen=True)
class IntMatrix:
    """Immutable integer matrix; ``entries`` is row-major."""

    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise ValueError("matrix dimensions must be positive")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError("entries length must equal rows*cols")
        if not all(isinstance(e, int) for e in self.entries):
            raise ValueError("entries must be integers")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "IntMatrix":
        r = len(rows)
        if r == 0:
            raise ValueError("no rows")
        c = len(rows[0])
        if any(len(row) != c for row in rows):
            raise ValueError("ragged rows")
        return cls(r, c, tuple(int(x) for row in rows for x in row))

    @classmethod
    def parse(cls, text: str) -> "IntMatrix":
        """Parse the CLI form ``[[a,b],[c,d]]``."""
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise ValueError(f"cannot parse matrix {text!r}: {e}") from None
        if not isinstance(data, list) or not data or not all(isinstance(r, list) for r in data):
            raise ValueError(f"cannot parse matrix {text!r}: expected list of rows")
        return cls.from_rows(data)

    def at(self, i: int, j: int) -> int:
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def to_rows(self) -> list:
        return [list(self.row(i)) for i in range(self.rows)]

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __mul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch in matrix product")
        n, m, k = self.rows, other.cols, self.cols
        out = []
        for i in range(n):
            ri = self.row(i)
            for j in range(m):
                out.append(sum(ri[t] * other.at(t, j) for t in range(k)))
        return IntMatrix(n, m, tuple(out))

    def transpose(self) -> "IntMatrix":
        return IntMatrix(
            self.cols, self.rows, tuple(self.at(i, j) for j in range(self.cols) for i in range(self.rows))
        )

    def trace(self) -> int:
        if not self.is_square:
            raise ValueError("trace of non-square matrix")
        return sum(self.at(i, i) for i in range(self.rows))

    def det(self) -> int:
        """Exact determinant by fraction-free (Bareiss) elimination."""
        if not self.is_square:
            raise ValueError("determinant of non-square matrix")
        n = self.rows
        if n == 1:
            return self.entries[0]
        if n == 2:
            a, b, c, d = self.entries
            return a * d - b * c
        m = self.to_rows()
        sign = 1
        prev = 1
        for k in range(n - 1):
            if m[k][k] == 0:
                pivot = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
                if pivot is None:
                    return 0
                m[k], m[pivot] = m[pivot], m[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
                m[i][k] = 0
            prev = m[k][k]
        return sign * m[n - 1][n - 1]

    def __str__(self) -> str:
        return "[" + ",".join("[" + ",".join(str(x) for x in self.row(i)) + "]" for i in range(self.rows)) + "]"


def identity(n: int) -> IntMatrix:
    return IntMatrix(n, n, tuple(1 if i == j else 0 for i in range(n) for j in range(n)))


def mat_pow(a: IntMatrix, n: int) -> IntMatrix:
    """Exact a**n by binary exponentiation; a**0 is the identity."""
    if not a.is_square:
        raise ValueError("power of non-square matrix")
    if n < 0:
        raise ValueError("negative exponent")
    result = identity(a.rows)
    base = a
    while n:
        if n & 1:
            result = result * base
        base = base * base
        n >>= 1
    return result


def _inverse_unimodular_2x2(b: IntMatrix) -> IntMatrix:
    a, bb, c, d = b.entries
    det = a * d - bb * c
    if det not in (1, -1):
        raise ValueError("matrix is not unimodular")
    # adjugate divided by det; det is +-1 so the inverse stays integral
    return IntMatrix(2, 2, (d * det, -bb * det, -c * det, a * det))


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------


def smith_normal_form(m: IntMatrix) -> tuple:
    """Diagonalize over Z: returns (U, S, V) with U*m*V = S.

    U and V are unimodular, S is diagonal with nonnegative entries
    d1 | d2 | ... (zeros, if any, come last).  Pivots are chosen by
    smallest nonzero absolute value in a fixed scan order, so the
    output is deterministic.
    """
    nr, nc = m.rows, m.cols
    s = m.to_rows()
    u = identity(nr).to_rows()
    v = identity(nc).to_rows()

    def swap_rows(i, j):
        s[i], s[j] = s[j], s[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in s:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, c):
        s[dst] = [x + c * y for x, y in zip(s[dst], s[src])]
        u[dst] = [x + c * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, c):
        for row in s:
            row[dst] += c * row[src]
        for row in v:
            row[dst] += c * row[src]

    def negate_row(i):
        s[i] = [-x for x in s[i]]
        u[i] = [-x for x in u[i]]

    def find_pivot(t):
        best = None
        for i in range(t, nr):
            for j in range(t, nc):
                e = s[i][j]
                if e != 0 and (best is None or abs(e) < best[0]):
                    best = (abs(e), i, j)
        return best

    for t in range(min(nr, nc)):
        pivot = find_pivot(t)
        if pivot is None:
            break
        _, pi, pj = pivot
        if pi != t:
            swap_rows(t, pi)
        if pj != t:
            swap_cols(t, pj)
        while True:
            if s[t][t] < 0:
                negate_row(t)
            # clear the pivot column with Euclidean row steps
            restart = False
            for i in range(t + 1, nr):
                if s[i][t] != 0:
                    q = s[i][t] // s[t][t]
                    add_row(i, t, -q)
                    if s[i][t] != 0:
                        swap_rows(t, i)
                        restart = True
                        break
            if restart:
                continue
            for j in range(t + 1, nc):
                if s[t][j] != 0:
                    q = s[t][j] // s[t][t]
                    add_col(j, t, -q)
                    if s[t][j] != 0:
                        swap_cols(t, j)
                        restart = True
                        break
            if restart:
                continue
            # pivot must divide every remaining entry for the d1|d2|... chain

            offender = None
            for i in range(t + 1, nr):
                for j in range(t + 1, nc):
                    if s[i][j] % s[t][t] != 0:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            add_row(t, offender, 1)

    for t in range(min(nr, nc)):
        if s[t][t] < 0:
            negate_row(t)

    return (IntMatrix.from_rows(u), IntMatrix.from_rows(s), IntMatrix.from_rows(v))


# ---------------------------------------------------------------------------
# GL(2,Z) conjugacy
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConjugacyVerdict:
    """Tri-state outcome of a GL(2,Z) conjugacy test.

    ``status`` is one of "conjugate", "not_conjugate", "unknown".  A
    conjugate verdict carries an exactly verified witness B with
    B*A*B^-1 = A'; a negative verdict carries the distinguishing
    invariant; unknown carries the exhausted search bound.
    """

    status: str
    witness: Optional[IntMatrix] = None
    reason: Optional[str] = None
    bound: Optional[int] = None

    @property
    def is_conjugate(self) -> bool:
        return self.status == "conjugate"


def _incidence_product(word: Sequence[int]) -> IntMatrix:
    m = identity(2)
    for a in word:
        m = m * IntMatrix(2, 2, (a, 1, 1, 0))
    return m


def word_of_matrix(m: IntMatrix) -> Optional[tuple]:
    """Recover the factorization m = prod (a_i,1;1,0) with a_i >= 1, if any.

    Returns the word as a tuple, or None when m is not such a product
    (the empty product, i.e. the identity, also returns None).  The word
    is unique once the determinant fixes the length parity.
    """
    if m.rows != 2 or m.cols != 2:
        return None
    p, q, r, s = m.entries
    if min(p, q, r, s) < 0 or r == 0 or q == 0:
        return None
    det = p * s - q * r
    if det not in (1, -1):
        return None
    if p < r:
        return None
    # continued-fraction digits of p/r determine the word up to the
    # trailing [a] vs [a-1,1] ambiguity; parity of the length picks one
    x, y = p, r
    digits = []
    while y:
        a, rem = divmod(x, y)
        digits.append(a)
        x, y = y, rem
    candidates = [digits]
    if digits[-1] >= 2:
        candidates.append(digits[:-1] + [digits[-1] - 1, 1])
    for word in candidates:
        if any(a < 1 for a in word):
            continue
        if det != (-1) ** len(word):
            continue
        if _incidence_product(word) == m:
            return tuple(word)
    return None


def cyclically_equivalent(w1: Sequence[int], w2: Sequence[int]) -> Optional[int]:
    """Return a shift k with w2 == w1[k:]+w1[:k], or None."""
    w1, w2 = list(w1), list(w2)
    if len(w1) != len(w2):
        return None
    for k in range(len(w1)):
        if w1[k:] + w1[:k] == w2:
            return k
    return None


def unimodular_2x2(bound: int) -> Iterator[IntMatrix]:
    """All 2x2 integer matrices with entries in [-bound, bound] and det +-1,
    in a fixed deterministic order."""
    rng = range(-bound, bound + 1)
    for a in rng:
        for b in rng:
            for c in rng:
                for d in rng:
                    if a * d - b * c in (1, -1):
                        yield IntMatrix(2, 2, (a, b, c, d))


def brute_force_conjugator(a: IntMatrix, a2: IntMatrix, bound: int) -> Optional[IntMatrix]:
    """Exhaustive oracle: first unimodular B with entries <= bound and
    B*a = a2*B, else None.  Independent of the word-based decision path."""
    if not (a.rows == a.cols == 2 and a2.rows == a2.cols == 2):
        raise ValueError("brute_force_conjugator expects 2x2 matrices")
    p, q, r, s = a.entries
    p2, q2, r2, s2 = a2.entries
    rng = range(-bound, bound + 1)
    for ba in rng:
        for bb in rng:
            for bc in rng:
                for bd in rng:
                    if ba * bd - bb * bc not in (1, -1):
                        continue
                    # B*a == a2*B, entrywise
                    if (
                        ba * p + bb * r == p2 * ba + q2 * bc
                        and ba * q + bb * s == p2 * bb + q2 * bd
                        and bc * p + bd * r == r2 * ba + s2 * bc
                        and bc * q + bd * s == r2 * bb + s2 * bd
                    ):
                        return IntMatrix(2, 2, (ba, bb, bc, bd))
    return None


def _verified_conjugate(b: IntMatrix, a: IntMatrix, a2: IntMatrix) -> ConjugacyVerdict:
    if b.det() not in (1, -1):
        raise AssertionError("witness is not unimodular")
    if b * a != a2 * b:
        raise AssertionError("witness fails B*A = A'*B")
    return ConjugacyVerdict(status="conjugate", witness=b)


def conjugacy_test(a: IntMatrix, a2: IntMatrix, bound: int = 10) -> ConjugacyVerdict:
    """Decide GL(2,Z) conjugacy of two 2x2 integer matrices.

    Trace or determinant mismatch settles the negative case.  When both
    matrices factor as products of (a_i,1;1,0) the decision is exact:
    conjugate iff the factor words are cyclic shifts (witness built from
    the shift).  Otherwise an exhaustive search over unimodular
    conjugators with entries up to ``bound`` runs; exhaustion without a
    witness yields an "unknown" verdict, never a negative one.
    """
    if not (a.rows == a.cols == 2 and a2.rows == a2.cols == 2):
        raise ValueError("conjugacy_test expects 2x2 matrices")
    if a == a2:
        return _verified_conjugate(identity(2), a, a2)
    if a.trace() != a2.trace():
        return ConjugacyVerdict(
            status="not_conjugate", reason=f"trace mismatch: {a.trace()} vs {a2.trace()}"
        )
    if a.det() != a2.det():
        return ConjugacyVerdict(
            status="not_conjugate", reason=f"determinant mismatch: {a.det()} vs {a2.det()}"
        )
    w1 = word_of_matrix(a)
    w2 = word_of_matrix(a2)
    if w1 is not None and w2 is not None:
        shift = cyclically_equivalent(w1, w2)
        if shift is None:
            return ConjugacyVerdict(
                status="not_conjugate",
                reason=f"cyclic-period mismatch: {list(w1)} vs {list(w2)}",
            )
        prefix = _incidence_product(w1[:shift])
        return _verified_conjugate(_inverse_unimodular_2x2(prefix), a, a2)
    found = brute_force_conjugator(a, a2, bound)
    if found is not None:
        return _verified_conjugate(found, a, a2)
    return ConjugacyVerdict(status="unknown", bound=bound)
