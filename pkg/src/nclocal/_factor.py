"""Internal integer factorization helpers.

Deterministic Miller-Rabin primality below 2^64, Brent-Pollard rho for
larger composites, and squarefree decomposition.  Inputs at desk scale
factor instantly; the rho loop is deterministic (fixed parameter sweep)
so results are reproducible.
"""

from __future__ import annotations

from math import gcd, isqrt

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin; exact for n < 2^64 (and correct with
    overwhelming margin beyond)."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _brent_rho(n: int) -> int:
    # returns a nontrivial factor of composite odd n
    if n % 2 == 0:
        return 2
    for c in range(1, 1000):
        y, m = 2, 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = gcd(abs(x - ys), n)
        if g != n:
            return g
    raise ValueError(f"cannot factor {n}")


def factorize(n: int) -> dict:
    """Prime factorization {p: e} of n >= 1."""
    if n < 1:
        raise ValueError("positive integer required")
    out: dict = {}
    for p in (2, 3, 5):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    f = 7
    wheel = (4, 2, 4, 2, 4, 6, 2, 6)
    i = 0
    while f * f <= n and f < 10**5:
        while n % f == 0:
            out[f] = out.get(f, 0) + 1
            n //= f
        f += wheel[i]
        i = (i + 1) % 8
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        s = isqrt(m)
        if s * s == m:
            stack.extend((s, s))
            continue
        g = _brent_rho(m)
        stack.extend((g, m // g))
    return out


def squarefree_split(n: int) -> tuple:
    """Write n = g*g*d with d squarefree; returns (g, d).

    Small primes are stripped by trial division; a rough remainder that
    is a perfect square is caught by isqrt, so continuant-sized inputs
    whose squarefree kernel is small stay cheap.
    """
    if n <= 0:
        raise ValueError("positive integer required")
    g, d = 1, 1
    rest = n
    f = 2
    while f * f <= rest and f < 10**4:
        if rest % f == 0:
            e = 0
            while rest % f == 0:
                rest //= f
                e += 1
            g *= f ** (e // 2)
            if e % 2:
                d *= f
        f += 1 if f == 2 else 2
    if rest > 1:
        s = isqrt(rest)
        if s * s == rest:
            g *= s
        elif f * f > rest or is_prime(rest):
            d *= rest
        else:
            for p, e in factorize(rest).items():
                g *= p ** (e // 2)
                if e % 2:
                    d *= p
    return g, d
