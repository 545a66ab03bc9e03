"""Generalized Gauss sums G(a,b,c), the sums S_q(a,z), and the bookkeeping that
turns the twisted sums f_{d1,d2}(Y, a/q) into closed forms."""

from __future__ import annotations

import cmath
import math
from dataclasses import asdict, dataclass

import numpy as np

from .arith import InvalidArgument, factorize, is_smooth, jacobi_symbol, lcm, modinv
from .residues import WContext

TWO_PI_I = 2j * math.pi


class HypothesisViolation(ValueError):
    pass


class BranchExcluded(ValueError):
    """q divides [d1,d2]^2: handled by the epsilon_q main term, not here."""


class RoughBranchInapplicable(ValueError):
    """h = (W, q) does not divide 2."""


def e(x: float) -> complex:
    return cmath.exp(TWO_PI_I * x)


def e_frac(num: int, den: int) -> complex:
    """e(num/den) with the numerator reduced exactly mod den first."""
    return cmath.exp(TWO_PI_I * ((num % den) / den))


# ----------------------------------------------------------------------
# Gauss sums
# ----------------------------------------------------------------------

def gauss_sum_direct(a: int, b: int, c: int) -> complex:
    """G(a,b,c) = sum_{n=1}^{c} e((a n^2 + b n)/c) by direct summation."""
    if c < 1:
        raise InvalidArgument(f"c must be positive, got {c}")
    n = np.arange(1, c + 1, dtype=np.int64)
    k = ((a % c) * (n * n % c) + (b % c) * n) % c
    return complex(np.exp(TWO_PI_I * k / c).sum())


def gauss_sum_table(c: int, a_values) -> np.ndarray:
    """Direct sums G(a, b, c) for every a in a_values and every b in [0, c).

    Row i holds b = 0..c-1 for a = a_values[i]; computed as a matrix product of
    the two exponential factors, each with its phase reduced mod c.
    """
    a_values = np.asarray(a_values, dtype=np.int64) % c
    n = np.arange(1, c + 1, dtype=np.int64)
    quad = np.exp(TWO_PI_I * ((a_values[:, None] * (n * n % c)[None, :]) % c) / c)
    lin = np.exp(TWO_PI_I * ((n[:, None] * np.arange(c)[None, :]) % c) / c)
    return quad @ lin


def _quadratic_gauss_value(a: int, c: int) -> complex:
    # (a/c) sqrt(c) or (a/c) i sqrt(c)
    root = math.sqrt(c) if c % 4 == 1 else 1j * math.sqrt(c)
    return jacobi_symbol(a, c) * root


def gauss_sum_closed(a: int, b: int, c: int) -> complex:
    """Closed form of G(a,b,c) for odd c with gcd(c, 2a) = 1."""
    if c < 1 or math.gcd(c, 2 * a) != 1:
        raise HypothesisViolation(f"need gcd(c, 2a) = 1, got a={a}, c={c}")
    inv2 = modinv(2, c)
    inva = modinv(a % c, c)
    return e_frac(-(inv2 * inv2 * inva * b * b), c) * _quadratic_gauss_value(a, c)


def gauss_sum_closed_table(c: int, a_values) -> np.ndarray:
    """Closed forms for every a in a_values (coprime to 2c) and b in [0, c)."""
    b = np.arange(c, dtype=np.int64)
    inv2 = modinv(2, c)
    rows = []
    for a in a_values:
        inva = modinv(int(a) % c, c)
        k = (-(inv2 * inv2 % c) * inva % c * (b * b % c)) % c
        rows.append(np.exp(TWO_PI_I * k / c) * _quadratic_gauss_value(int(a), c))
    return np.array(rows)


# ----------------------------------------------------------------------
# S_q(a, z)
# ----------------------------------------------------------------------

def _check_root(z: int, ctx: WContext) -> None:
    if (z * z - ctx.b) % ctx.W:
        raise InvalidArgument(f"{z} is not a square root of {ctx.b} mod {ctx.W}")


def s_q_sum(a: int, z: int, q: int, ctx: WContext) -> complex:
    """S_q(a,z) = sum_{r=1}^{q} e(a (W r^2 + 2 z r + (z^2 - b)/W) / q)."""
    _check_root(z, ctx)
    W = ctx.W
    c = (z * z - ctx.b) // W
    r = np.arange(1, q + 1, dtype=np.int64)
    k = (W % q * (r * r % q) + (2 * z) % q * r + c % q) % q
    k = (k * (a % q)) % q
    return complex(np.exp(TWO_PI_I * k / q).sum())


def s_q_all_a(z: int, q: int, ctx: WContext) -> np.ndarray:
    """S_q(a, z) for every a in [0, q): a length-q DFT of the exponent histogram."""
    _check_root(z, ctx)
    W = ctx.W
    c = (z * z - ctx.b) // W
    r = np.arange(1, q + 1, dtype=np.int64)
    k = (W % q * (r * r % q) + (2 * z) % q * r + c % q) % q
    hist = np.bincount(k, minlength=q).astype(float)
    # sum_k hist[k] e(a k / q) for all a
    return np.fft.ifft(hist) * q


# ----------------------------------------------------------------------
# main-term coefficients of f_{d1,d2}(Y, a/q)
# ----------------------------------------------------------------------

def roots_for_divisor(L: int, ctx: WContext) -> list[int]:
    """z in [1, W] with z^2 L^2 = b (mod W)."""
    W = ctx.W
    L2 = L * L % W
    return [z for z in range(1, W + 1) if (z * z * L2 - ctx.b) % W == 0]


def epsilon_q(a: int, q: int, L: int, ctx: WContext) -> complex:
    """epsilon_q for q | L^2: (1/sigma(b)) sum_z e(a (L^2 z^2 - b) / (q W))."""
    if (L * L) % q:
        raise InvalidArgument(f"{q} does not divide {L}^2")
    W = ctx.W
    s = sum(e_frac(a * (L * L * z * z - ctx.b), q * W) for z in roots_for_divisor(L, ctx))
    return s / ctx.sigma_b


def main_coefficient(a: int, q: int, d1: int, d2: int, ctx: WContext) -> complex:
    """The constant c with f_{d1,d2}(Y, a/q) = c Y + O(sqrt(Y)), computed by
    summing the exact phase over every residue class of x mod L W q_dd."""
    L = lcm(d1, d2)
    if math.gcd(L, ctx.W) != 1:
        raise InvalidArgument("[d1, d2] must be coprime to W")
    W = ctx.W
    k = math.gcd(q, L * L)
    q_dd = q // k
    a_dd = a * L * L // k
    mod = q_dd * W
    total = 0j
    for z in roots_for_divisor(L, ctx):
        m = z + W * np.arange(1, q_dd + 1, dtype=np.int64)
        ph = (a_dd % mod) * (m * m % mod) % mod
        total += np.exp(TWO_PI_I * ph / mod).sum()
    return e_frac(-a * ctx.b, q * W) * total / (ctx.sigma_b * L * q_dd)


# ----------------------------------------------------------------------
# decomposition for the w-rough, h | 2 branch
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class GaussDecomposition:
    a: int
    q: int
    d1: int
    d2: int
    L: int
    k: int
    q_dd: int
    a_dd: int
    h: int
    W1: int
    q_Wdd: int
    V: complex
    rough: bool
    g_k: int | None = None
    g_k_literal: int | None = None
    s_k: int | None = None
    u_k: int | None = None
    jacobi: int | None = None
    t_k: complex | None = None
    S_abv: int | None = None

    def to_dict(self) -> dict:
        d = asdict(self)
        for key in ("V", "t_k"):
            if d[key] is not None:
                d[key] = [d[key].real, d[key].imag]
        return d

    def predicted_coefficient(self) -> complex:
        """Main-term constant of the closed form: t_k / (L sqrt(q_dd h))."""
        if self.t_k is None:
            raise RoughBranchInapplicable("closed form only on the rough, h | 2 branch")
        return self.t_k / (self.L * math.sqrt(self.q_dd * self.h))


def build_gauss_decomposition(a: int, q: int, d1: int, d2: int, ctx: WContext,
                              require_rough: bool = True) -> GaussDecomposition:
    """Bookkeeping for f_{d1,d2}(Y, a/q) when q does not divide [d1,d2]^2.

    On the w-rough branch with h = (W, q) in {1, 2} the main term of f is
    t_k Y / ([d1,d2] sqrt(q_dd h)). For h = 1 the root phase is e(g_k / W)
    with g_k = -s_k a b k^{-1} (mod W), where W inv(W) = 1 + s_k q_dd; the
    literal formula with the extra factor (2^{-1})^2 (2/h)^2 is kept in
    g_k_literal for comparison. For h = 2 the roots z and z + W/2 carry
    opposite phases, the main term vanishes and t_k is 0.
    """
    if math.gcd(a, q) != 1:
        raise InvalidArgument(f"gcd({a}, {q}) != 1")
    W, b = ctx.W, ctx.b
    L = lcm(d1, d2)
    if math.gcd(L, W) != 1:
        raise InvalidArgument("[d1, d2] must be coprime to W")
    k = math.gcd(q, L * L)
    if k == q:
        raise BranchExcluded(f"{q} | [{d1},{d2}]^2")
    q_dd = q // k
    a_dd = a * L * L // k
    h = math.gcd(W, q)
    W1 = W // h
    q_Wdd = q_dd // h
    V = 1 if q_Wdd % 4 == 1 else 1j
    rough = not is_smooth(q_dd, ctx.w)
    base = dict(a=a, q=q, d1=d1, d2=d2, L=L, k=k, q_dd=q_dd, a_dd=a_dd, h=h,
                W1=W1, q_Wdd=q_Wdd, V=V, rough=rough)
    if h not in (1, 2) or not rough:
        if require_rough:
            raise RoughBranchInapplicable(f"h={h}, q_dd={q_dd} rough={rough}")
        return GaussDecomposition(**base)

    inv_W1 = modinv(W1 % q_Wdd, q_Wdd)
    s_k = (W1 * inv_W1 - 1) // q_Wdd
    u_k = modinv(2, q_Wdd)
    k_bar = modinv(k % W, W)
    g_lit = (-s_k * a * b * k_bar * u_k * u_k * (2 // h) ** 2) % W1
    jac = jacobi_symbol(W1 * a_dd, q_Wdd)
    S_abv = invariance_sign(W1 * a, q // h, k)
    if h == 1:
        g_k = (-s_k * a * b * k_bar) % W1
        t_k = e_frac(-a * b, q * W) * e_frac(g_k, W1) * V * jac
    else:
        g_k = None
        t_k = 0j
    return GaussDecomposition(**base, g_k=g_k, g_k_literal=g_lit, s_k=s_k, u_k=u_k,
                              jacobi=jac, t_k=t_k, S_abv=S_abv)


def root_phases(decomp: GaussDecomposition, ctx: WContext) -> list[complex]:
    """Per-root product of the quadratic phase and the completed-square phase
    of the Gauss sum; one entry per root z of z^2 [d1,d2]^2 = b (mod W)."""
    W = ctx.W
    d = decomp
    u = modinv(2, d.q_Wdd)
    inv_W1a = modinv((d.W1 * d.a_dd) % d.q_Wdd, d.q_Wdd)
    out = []
    for z in roots_for_divisor(d.L, ctx):
        lin = 2 * z * d.a_dd // d.h
        out.append(e_frac(d.a_dd * z * z, d.q_dd * W)
                   * e_frac(-(u * u) * inv_W1a * lin * lin, d.q_Wdd))
    return out


def phase_dependence_check(a: int, q: int, pairs, ctx: WContext) -> dict:
    """Recompute g_k and t_k for every (d1, d2) in pairs and group by k.

    Returns {k: {"g_k", "t_k", "measured", "pairs", "consistent", "matches"}}.
    consistent: all pairs sharing k produced the same g_k and t_k.
    matches: t_k agrees with the unit recovered from main_coefficient,
    i.e. c * L * sqrt(q_dd * h), for every pair.
    """
    groups: dict = {}
    for d1, d2 in pairs:
        try:
            dec = build_gauss_decomposition(a, q, d1, d2, ctx)
        except (BranchExcluded, RoughBranchInapplicable):
            continue
        g = groups.setdefault(dec.k, {"g_k": set(), "t_k": [], "measured": [], "pairs": []})
        g["g_k"].add(dec.g_k)
        g["t_k"].append(dec.t_k)
        c = main_coefficient(a, q, d1, d2, ctx)
        g["measured"].append(c * dec.L * math.sqrt(dec.q_dd * dec.h))
        g["pairs"].append((d1, d2))
    for g in groups.values():
        t0 = g["t_k"][0]
        g["consistent"] = len(g["g_k"]) == 1 and all(abs(t - t0) < 1e-12 for t in g["t_k"])
        g["matches"] = all(abs(t - m) < 1e-9 for t, m in zip(g["t_k"], g["measured"]))
    return groups


# ----------------------------------------------------------------------
# Jacobi symbol invariance
# ----------------------------------------------------------------------

def jacobi_invariance_check(a: int, b: int, v: int, c_list) -> bool:
    """True iff (a c^2/v | b/v) takes one value over every c in c_list."""
    if a < 1 or b < 1 or v < 1:
        raise InvalidArgument("a, b, v must be positive")
    if math.gcd(a, b) != 1 or b % v or (b // v) % 2 == 0:
        raise InvalidArgument("need gcd(a,b)=1, v | b and b/v odd")
    values = set()
    for c in c_list:
        if math.gcd(c * c, b) != v:
            raise InvalidArgument(f"gcd({c}^2, {b}) != {v}")
        values.add(jacobi_symbol(a * (c * c // v), b // v))
    return len(values) <= 1


def invariance_sign(a: int, b: int, v: int) -> int:
    """The c-independent sign: (a | b/v) times (p | b/v) over p with odd exponent in v."""
    s = jacobi_symbol(a, b // v)
    for p, g in factorize(v).factors:
        if g % 2:
            s *= jacobi_symbol(p, b // v)
    return s


# ----------------------------------------------------------------------
# sweeps
# ----------------------------------------------------------------------

def closed_form_sweep(c_max: int, a_span: str = "full") -> dict:
    """Worst |closed - direct| / c over odd c <= c_max, gcd(c, 2a) = 1, 0 <= b < c.

    a_span "full" takes -c <= a <= c, "residues" only 1 <= a < c.
    """
    worst, cases, worst_at = 0.0, 0, None
    for c in range(1, c_max + 1, 2):
        lo = -c if a_span == "full" else 1
        hi = c if a_span == "full" else c - 1
        a_vals = [a for a in range(lo, hi + 1) if math.gcd(c, 2 * a) == 1]
        if not a_vals:
            continue
        direct = gauss_sum_table(c, a_vals)
        closed = gauss_sum_closed_table(c, a_vals)
        err = np.abs(direct - closed).max() / c
        cases += direct.size
        if err > worst:
            worst, worst_at = float(err), c
    return {"c_max": c_max, "cases": cases, "max_rel_error": worst, "worst_c": worst_at}
