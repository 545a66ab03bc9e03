"""The W-trick world and quadratic-residue sumsets used to pick the five shifts."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from itertools import product

import numpy as np

from .arith import InvalidArgument, crt, factorize, is_prime, jacobi_symbol, primes_upto


class NotAResidue(ValueError):
    pass


class InvalidShift(ValueError):
    pass


def w_modulus(w: int) -> int:
    """8 times the product of the odd primes <= w."""
    return 8 * math.prod(int(p) for p in primes_upto(w) if p > 2)


def square_roots_mod(b: int, W: int) -> list[int]:
    """All h in [1, W] with h^2 = b (mod W), by direct scan."""
    h = np.arange(1, W + 1, dtype=np.int64)
    return [int(x) for x in h[(h * h - b) % W == 0]]


def root_count_crt(b: int, W: int) -> int:
    """sigma(b) as a product of per-prime-power root counts (b coprime to W)."""
    count = 1
    for p, e in factorize(W).factors:
        if p == 2:
            # roots of x^2 = b mod 2^e, b odd: 1, 2, or 4 depending on e and b mod 8
            if e == 1:
                c = 1
            elif e == 2:
                c = 2 if b % 4 == 1 else 0
            else:
                c = 4 if b % 8 == 1 else 0
        else:
            # Hensel: the count mod p^e equals the count mod p
            c = 1 + jacobi_symbol(b, p)
        count *= c
    return count


@dataclass(frozen=True)
class WContext:
    w: int
    W: int
    b: int
    sigma_b: int
    roots: tuple
    delta: float
    z: int
    N: int
    P_primes: tuple = field(default=())

    def to_dict(self) -> dict:
        d = asdict(self)
        d["roots"] = list(self.roots)
        d["P_primes"] = list(self.P_primes)
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "WContext":
        d = dict(d)
        d["roots"] = tuple(d["roots"])
        d["P_primes"] = tuple(d["P_primes"])
        return cls(**d)

    @property
    def P(self) -> int:
        return math.prod(self.P_primes)


def sieve_level(N: int, delta: float) -> int:
    """floor(N^(1/4 - 2 delta)), clamped below at 2."""
    if N < 1:
        return 2
    return max(2, math.floor(N ** (0.25 - 2 * delta)))


def build_w_context(w: int, b: int, N: int, delta: float = 0.001,
                    z_override: int | None = None) -> WContext:
    if w < 3:
        raise InvalidArgument(f"w must be >= 3, got {w}")
    W = w_modulus(w)
    if math.gcd(b, W) != 1:
        raise InvalidShift(f"gcd({b}, {W}) > 1")
    roots = square_roots_mod(b, W)
    if not roots:
        raise NotAResidue(f"{b} is not a quadratic residue mod {W}")
    z = int(z_override) if z_override is not None else sieve_level(N, delta)
    if z < 2:
        raise InvalidArgument(f"sieve level must be >= 2, got {z}")
    P_primes = tuple(int(p) for p in primes_upto(z - 1) if W % p)
    return WContext(w=w, W=W, b=b, sigma_b=len(roots), roots=tuple(roots),
                    delta=delta, z=z, N=N, P_primes=P_primes)


# ----------------------------------------------------------------------
# quadratic residue sumsets
# ----------------------------------------------------------------------

def quadratic_residues(p: int) -> set[int]:
    if p < 3 or not is_prime(p):
        raise InvalidArgument(f"{p} is not an odd prime")
    return {x * x % p for x in range(1, p)}


def sumset(A, B, p: int) -> set[int]:
    return {(x + y) % p for x in A for y in B}


def sumset_cover_check(p: int) -> bool:
    """Does the five-fold sumset of the nonzero squares mod p cover Z/pZ?"""
    A = quadratic_residues(p)
    S = set(A)
    for _ in range(4):
        S = sumset(S, A, p)
    return len(S) == p


@dataclass(frozen=True)
class CauchyDavenportResult:
    hypothesis: bool  # |A| + |B| + |C| >= p + 2
    covers: bool      # A + B + C = Z/pZ


def cauchy_davenport_check(A, B, C, p: int) -> CauchyDavenportResult:
    A, B, C = ({x % p for x in S} for S in (A, B, C))
    if not (A and B and C):
        raise InvalidArgument("sets must be non-empty")
    covers = len(sumset(sumset(A, B, p), C, p)) == p
    return CauchyDavenportResult(len(A) + len(B) + len(C) >= p + 2, covers)


def coprime_residues(W: int) -> list[int]:
    """Quadratic residues b in [1, W] with gcd(b, W) = 1."""
    h = np.arange(1, W + 1, dtype=np.int64)
    h = h[np.gcd(h, W) == 1]
    return sorted({int(x) for x in (h * h) % W})


def decompose_target(M: int, W) -> tuple[int, ...]:
    """Lexicographically smallest (b1..b5) of coprime quadratic residues mod W
    with b1 + ... + b5 = M (mod W), each b_i in [1, W].

    Greedy over reachable-sum tables: b1 is the smallest residue r for which
    M - r is a sum of four residues, and so on.
    """
    if isinstance(W, WContext):
        W = W.W
    if W % 24:
        raise InvalidArgument(f"24 must divide W, got {W}")
    if M % 24 != 5:
        raise InvalidArgument(f"M must be 5 mod 24, got {M} = {M % 24} mod 24")
    R = coprime_residues(W)
    reach = [np.zeros(W, dtype=bool)]
    reach[0][0] = True
    for _ in range(4):
        prev = reach[-1]
        nxt = np.zeros(W, dtype=bool)
        for r in R:
            nxt |= np.roll(prev, r)
        reach.append(nxt)
    out = []
    target = M % W
    for k in range(4, -1, -1):
        for r in R:
            if reach[k][(target - r) % W]:
                out.append(r)
                target = (target - r) % W
                break
        else:
            raise AssertionError(f"no decomposition of {M} mod {W}")
    return tuple(out)


def decompose_target_crt(M: int, W: int) -> tuple[int, ...]:
    """Constructive decomposition along the CRT: b_i = 1 mod 24, and for each
    prime p > 3 dividing W five nonzero squares mod p summing to M mod p."""
    if W % 24 or M % 24 != 5:
        raise InvalidArgument("need 24 | W and M = 5 mod 24")
    moduli = [24]
    per_prime = [(1,) * 5]
    for p, e in factorize(W).factors:
        if p <= 3:
            continue
        if e != 1:
            raise InvalidArgument("W must be 8 times a squarefree odd number")
        A = sorted(quadratic_residues(p))
        for combo in product(A, repeat=5):
            if sum(combo) % p == M % p:
                per_prime.append(combo)
                break
        else:
            raise AssertionError(f"five-fold sumset mod {p} misses {M % p}")
        moduli.append(p)
    bs = []
    for i in range(5):
        x, mod = crt([c[i] for c in per_prime], moduli)
        bs.append(x if x else mod)
    return tuple(bs)


def is_valid_decomposition(M: int, W: int, bs) -> bool:
    if len(bs) != 5 or sum(bs) % W != M % W:
        return False
    R = set(coprime_residues(W))
    return all(1 <= b <= W and b in R for b in bs)
