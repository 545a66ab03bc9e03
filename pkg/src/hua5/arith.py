"""Exact integer primitives: primes, multiplicative functions, Jacobi symbols,
square-free structure, smoothness and continued-fraction approximation."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np


class InvalidArgument(ValueError):
    pass


class NotCubeFree(ValueError):
    pass


# ----------------------------------------------------------------------
# primes and factorization
# ----------------------------------------------------------------------

def primes_upto(n: int) -> np.ndarray:
    """All primes <= n as an int64 array (sieve of Eratosthenes)."""
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    sieve[4::2] = False
    for p in range(3, math.isqrt(n) + 1, 2):
        if sieve[p]:
            sieve[p * p::2 * p] = False
    return np.flatnonzero(sieve).astype(np.int64)


def prime_mask(n: int) -> np.ndarray:
    """Boolean array m of length n+1 with m[k] True iff k is prime."""
    mask = np.zeros(n + 1, dtype=bool)
    mask[primes_upto(n)] = True
    return mask


_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(n: int) -> bool:
    # deterministic for n < 3.3e24 with these bases
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class Factorization:
    value: int
    factors: tuple  # ((p, e), ...) with p increasing

    def __post_init__(self):
        prod = 1
        last = 1
        for p, e in self.factors:
            if p <= last or e < 1:
                raise InvalidArgument(f"malformed factorization {self.factors}")
            last = p
            prod *= p ** e
        if prod != self.value:
            raise InvalidArgument(f"factors {self.factors} do not multiply to {self.value}")

    @property
    def primes(self) -> list[int]:
        return [p for p, _ in self.factors]


@lru_cache(maxsize=65536)
def factorize(n: int) -> Factorization:
    """Trial-division factorization (desk-scale inputs)."""
    if n < 1:
        raise InvalidArgument(f"cannot factor {n}")
    m = n
    out = []
    for p in (2, 3):
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        if e:
            out.append((p, e))
    p = 5
    step = 2
    while p * p <= m:
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        if e:
            out.append((p, e))
        p += step
        step = 6 - step
    if m > 1:
        out.append((m, 1))
    return Factorization(n, tuple(out))


def phi(n: int) -> int:
    r = n
    for p, _ in factorize(n).factors:
        r -= r // p
    return r


def mobius(n: int) -> int:
    f = factorize(n).factors
    if any(e > 1 for _, e in f):
        return 0
    return -1 if len(f) % 2 else 1


def divisor_count(n: int) -> int:
    return math.prod(e + 1 for _, e in factorize(n).factors)


def divisors(n: int) -> list[int]:
    ds = [1]
    for p, e in factorize(n).factors:
        ds = [d * p ** k for d in ds for k in range(e + 1)]
    return sorted(ds)


def is_squarefree(n: int) -> bool:
    return all(e == 1 for _, e in factorize(n).factors)


def lcm(a: int, b: int) -> int:
    return a // math.gcd(a, b) * b


def modinv(a: int, m: int) -> int:
    """Inverse of a mod m in [0, m); validated by multiplying back."""
    if m == 1:
        return 0
    inv = pow(a, -1, m)
    assert (a * inv) % m == 1
    return inv


def crt(residues, moduli) -> tuple[int, int]:
    """Combine x = r_i (mod m_i) for pairwise coprime m_i."""
    x, M = 0, 1
    for r, m in zip(residues, moduli):
        if math.gcd(M, m) != 1:
            raise InvalidArgument("moduli must be pairwise coprime")
        t = ((r - x) * modinv(M, m)) % m
        x += M * t
        M *= m
    return x % M, M


# ----------------------------------------------------------------------
# Jacobi symbol
# ----------------------------------------------------------------------

def jacobi_symbol(a: int, n: int) -> int:
    """Jacobi symbol (a/n) for odd n >= 1, by binary quadratic reciprocity."""
    if n < 1 or n % 2 == 0:
        raise InvalidArgument(f"Jacobi symbol needs odd positive n, got {n}")
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def legendre_euler(a: int, p: int) -> int:
    """Legendre symbol by Euler's criterion; p an odd prime."""
    t = pow(a % p, (p - 1) // 2, p)
    return -1 if t == p - 1 else t


def jacobi_by_factorization(a: int, n: int) -> int:
    # independent route: product of Euler-criterion Legendre symbols
    return math.prod(legendre_euler(a, p) ** e for p, e in factorize(n).factors)


# ----------------------------------------------------------------------
# square-free split and smoothness
# ----------------------------------------------------------------------

def squarefree_split(q: int) -> tuple[int, int]:
    """Write a cube-free q as q1 * q2**2 with q1 squarefree and gcd(q1, q2) = 1."""
    if q < 1:
        raise InvalidArgument(f"q must be positive, got {q}")
    q1 = q2 = 1
    for p, e in factorize(q).factors:
        if e >= 3:
            raise NotCubeFree(f"{p}^3 divides {q}")
        if e == 1:
            q1 *= p
        else:
            q2 *= p
    return q1, q2


def is_smooth(q: int, w: float) -> bool:
    """True iff every prime factor of q is <= w (1 is smooth)."""
    return all(p <= w for p, _ in factorize(q).factors)


def smoothness_classify(q: int, w: float) -> str:
    return "smooth" if is_smooth(q, w) else "rough"


def primorial(y: float) -> int:
    """Product of all primes <= y."""
    return math.prod(int(p) for p in primes_upto(int(math.floor(y))))


# ----------------------------------------------------------------------
# rational approximation
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class RationalApproximation:
    theta: float
    a: int
    q: int
    beta: float

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.a, self.q)


def convergents(theta, qmax: int | None = None):
    """Continued-fraction convergents (p, q) of theta, in order of increasing q.

    theta is converted exactly to a Fraction so a float input has a finite
    expansion. Stops once q would exceed qmax.
    """
    x = Fraction(theta)
    p0, q0, p1, q1 = 0, 1, 1, 0
    while True:
        a = math.floor(x)
        p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
        if qmax is not None and q1 > qmax:
            return
        yield p1, q1
        frac = x - a
        if frac == 0:
            return
        x = 1 / frac


def rational_approx(theta: float, bound: int) -> RationalApproximation:
    """Dirichlet approximation a/q with q <= bound and |theta - a/q| <= 1/(q*bound).

    Uses the last continued-fraction convergent with denominator <= bound.
    """
    if bound < 1:
        raise InvalidArgument(f"bound must be >= 1, got {bound}")
    a, q = math.floor(theta), 1
    for a, q in convergents(theta, bound):
        pass
    beta = float(Fraction(theta) - Fraction(a, q))
    return RationalApproximation(float(theta), a, q, beta)
