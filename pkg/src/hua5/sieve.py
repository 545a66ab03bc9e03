"""Selberg Lambda^2 weights, the W-tricked prime-square sequence a(n) and its
sieve majorant v(n), and the divisor sums T(q)."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

import numpy as np

from .arith import InvalidArgument, divisors, factorize, is_squarefree, lcm, phi, prime_mask
from .residues import WContext

ROLES = ("a_raw", "v_majorant", "a_smooth", "a_uniform", "custom")


class WeightConstructionError(RuntimeError):
    pass


def admissible_divisors(z: int, W: int) -> list[int]:
    """Squarefree d < z with gcd(d, W) = 1, i.e. the d | P with d < z."""
    return [d for d in range(1, z) if math.gcd(d, W) == 1 and is_squarefree(d)]


def normalization_sum(z: int, W: int) -> Fraction:
    """J = sum over squarefree d < z coprime to W of 1/phi(d), exactly."""
    return sum((Fraction(1, phi(d)) for d in admissible_divisors(z, W)), Fraction(0))


def normalization_sum_float(z: int, W: int) -> float:
    return math.fsum(1.0 / phi(d) for d in admissible_divisors(z, W))


@dataclass(frozen=True)
class SieveSystem:
    z: int
    W: int
    weights: dict = field(repr=False)  # d -> Fraction
    J: Fraction

    @property
    def support(self) -> list[int]:
        return sorted(self.weights)

    def float_weights(self) -> dict:
        return {d: float(r) for d, r in self.weights.items()}


def selberg_weights(z: int, ctx_or_W) -> SieveSystem:
    """Selberg weights for sifting density 1/d on the primes coprime to W:

        rho_d = mu(d) * d/phi(d) * J_d / J,
        J_d = sum over e < z/d, e | P, (e, d) = 1 of 1/phi(e),

    in exact rationals. rho_1 = 1 and |rho_d| <= 1 are asserted, not enforced.
    """
    if z < 2:
        raise InvalidArgument(f"sieve level must be >= 2, got {z}")
    W = ctx_or_W.W if isinstance(ctx_or_W, WContext) else int(ctx_or_W)
    ds = admissible_divisors(z, W)
    inv_phi = {d: Fraction(1, phi(d)) for d in ds}
    J = sum(inv_phi.values(), Fraction(0))
    weights = {}
    for d in ds:
        Jd = sum((inv_phi[e] for e in ds if e * d < z and math.gcd(e, d) == 1), Fraction(0))
        mu = -1 if len(factorize(d).factors) % 2 else 1
        weights[d] = mu * Fraction(d, phi(d)) * Jd / J
    if weights[1] != 1:
        raise WeightConstructionError(f"rho_1 = {weights[1]}")
    worst = max(abs(r) for r in weights.values())
    if worst > 1:
        raise WeightConstructionError(f"max |rho_d| = {float(worst)} > 1")
    return SieveSystem(z=z, W=W, weights=weights, J=J)


# ----------------------------------------------------------------------
# sequences
# ----------------------------------------------------------------------

@dataclass
class WeightedSequence:
    """Real sequence with values[i] at n = start + i."""
    N: int
    values: np.ndarray
    role: str = "custom"
    ctx_ref: WContext | None = None
    start: int = 1

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.role not in ROLES:
            raise InvalidArgument(f"unknown role {self.role!r}")

    @classmethod
    def from_values(cls, values, role: str = "custom", ctx_ref=None) -> "WeightedSequence":
        values = np.asarray(values, dtype=float)
        return cls(N=len(values), values=values, role=role, ctx_ref=ctx_ref)

    @property
    def indices(self) -> np.ndarray:
        return np.arange(self.start, self.start + len(self.values))

    def mean(self) -> float:
        return float(self.values.sum()) / self.N

    def on_range(self, lo: int, hi: int) -> np.ndarray:
        """Values at n = lo..hi, zero outside the stored support."""
        out = np.zeros(hi - lo + 1)
        s, e = max(lo, self.start), min(hi, self.start + len(self.values) - 1)
        if s <= e:
            out[s - lo:e - lo + 1] = self.values[s - self.start:e - self.start + 1]
        return out

    def truncated(self, n_max: int) -> "WeightedSequence":
        """Restriction to [1, n_max] with N = n_max."""
        return WeightedSequence(N=n_max, values=self.on_range(1, n_max), role=self.role,
                                ctx_ref=self.ctx_ref)

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            wr = csv.writer(fh)
            wr.writerow(["n", "value"])
            for n, v in zip(self.indices, self.values):
                wr.writerow([int(n), repr(float(v))])

    def to_binary(self, path) -> None:
        np.save(path, self.values)


def square_support(ctx: WContext, N: int | None = None):
    """(n, x) for all 1 <= n <= N with W n + b = x^2."""
    N = ctx.N if N is None else N
    W, b = ctx.W, ctx.b
    X = math.isqrt(W * N + b)
    x = np.arange(1, X + 1, dtype=np.int64)
    x = x[(x * x - b) % W == 0]
    n = (x * x - b) // W
    keep = (n >= 1) & (n <= N)
    return n[keep], x[keep]


def sequence_prefactor(ctx: WContext) -> float:
    """2 phi(W) log z / (W sigma(b)); a(n) is this times sqrt(W n + b)."""
    return 2 * phi(ctx.W) * math.log(ctx.z) / (ctx.W * ctx.sigma_b)


def sieve_sums(x: np.ndarray, sieve: SieveSystem) -> np.ndarray:
    """sum over d | gcd(x, P) of rho_d, for each x."""
    out = np.zeros(len(x))
    for d, r in sieve.float_weights().items():
        out[x % d == 0] += r
    return out


def build_sequences(ctx: WContext, sieve: SieveSystem | None = None):
    """The raw sequence a(n) (primes x >= z) and its majorant v(n)."""
    if sieve is None:
        sieve = selberg_weights(ctx.z, ctx)
    if sieve.z != ctx.z or sieve.W != ctx.W:
        raise InvalidArgument("sieve level / modulus do not match the context")
    N = ctx.N
    n, x = square_support(ctx)
    pref = sequence_prefactor(ctx)
    a = np.zeros(N)
    v = np.zeros(N)
    if len(x):
        isp = prime_mask(int(x.max()))[x]
        sel = isp & (x >= ctx.z)
        a[n[sel] - 1] = pref * x[sel]
        v[n - 1] = pref * x * sieve_sums(x, sieve) ** 2
        # exact equality where a(n) > 0: the sieve sum is rho_1 = 1 there
        v[n[sel] - 1] = a[n[sel] - 1]
    return (WeightedSequence(N, a, "a_raw", ctx),
            WeightedSequence(N, v, "v_majorant", ctx))


# ----------------------------------------------------------------------
# T(q)
# ----------------------------------------------------------------------

def t_sum(q: int, sieve: SieveSystem, restrict_k: int | None = None) -> Fraction:
    """T(q) = sum over d1, d2 in the support with q | [d1,d2] of rho rho / [d1,d2].

    With restrict_k the pairs are those with gcd(q, [d1,d2]^2) = k instead.
    """
    ds = sieve.support
    rho = sieve.weights
    total = Fraction(0)
    if restrict_k is None:
        if not is_squarefree(q) or math.gcd(q, sieve.W) != 1 or any(
                p >= sieve.z for p, _ in factorize(q).factors):
            raise InvalidArgument(f"{q} does not divide P")
        for d1, d2 in product(ds, ds):
            L = lcm(d1, d2)
            if L % q == 0:
                total += rho[d1] * rho[d2] / L
        return total
    k = restrict_k
    if q % k or k >= q:
        raise InvalidArgument(f"need k | q and k < q, got k={k}, q={q}")
    for d1, d2 in product(ds, ds):
        L = lcm(d1, d2)
        if math.gcd(q, L * L) == k:
            total += rho[d1] * rho[d2] / L
    return total


def t_sum_bound_ratio(q: int, sieve: SieveSystem) -> float:
    """|T(q)| J q^{3/4}: bounded if |T(q)| << J^{-1} q^{-1+eps} with eps = 1/4."""
    return abs(float(t_sum(q, sieve))) * float(sieve.J) * q ** 0.75


def squarefree_divisors_of_P(sieve: SieveSystem, bound: int) -> list[int]:
    """Squarefree products q <= bound of primes p < z coprime to W."""
    primes = [p for p in range(2, sieve.z) if math.gcd(p, sieve.W) == 1
              and len(factorize(p).factors) == 1 and factorize(p).factors[0][1] == 1]
    out = [1]
    for p in primes:
        out += [d * p for d in out if d * p <= bound]
    return sorted(out)


__all__ = [
    "SieveSystem", "WeightedSequence", "WeightConstructionError", "admissible_divisors",
    "build_sequences", "normalization_sum", "normalization_sum_float", "selberg_weights",
    "sequence_prefactor", "square_support", "squarefree_divisors_of_P", "t_sum",
    "t_sum_bound_ratio", "divisors",
]
