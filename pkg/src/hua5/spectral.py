"""Grid Fourier transforms, the twisted prime-square sums, arc partitions,
Weyl sums and L^q norms of transforms.

Convention: f^(theta) = sum_n f(n) e(n theta), with e(x) = exp(2 pi i x).
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy import fft as sfft
from scipy.signal import fftconvolve

from .arith import InvalidArgument, convergents, lcm, rational_approx
from .gauss import e_frac, epsilon_q
from .residues import WContext
from .sieve import WeightedSequence


# ----------------------------------------------------------------------
# grid transform
# ----------------------------------------------------------------------

@dataclass
class SpectrumGrid:
    """values[r] = f^(r/M) for r = 0..M-1, where M = len(values).

    N is the nominal length of the source sequence; M is N unless the grid
    was oversampled. `start` and `length` describe the source support so the
    sequence can be recovered when length <= M.
    """
    N: int
    values: np.ndarray
    start: int = 1
    length: int | None = None

    @property
    def size(self) -> int:
        return len(self.values)

    def sequence(self) -> np.ndarray:
        """Recover f(start), ..., f(start + length - 1) from the grid."""
        M = self.size
        L = self.N if self.length is None else self.length
        if L > M:
            raise InvalidArgument(f"support of length {L} aliases on a grid of size {M}")
        coeffs = sfft.fft(self.values) / M  # coeffs[n mod M] = f(n)
        idx = (np.arange(self.start, self.start + L)) % M
        return coeffs[idx]

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            wr = csv.writer(fh)
            wr.writerow(["r", "re", "im", "abs"])
            for r, z in enumerate(self.values):
                wr.writerow([r, repr(z.real), repr(z.imag), repr(abs(z))])


def _as_support(f):
    if isinstance(f, WeightedSequence):
        return f.N, np.asarray(f.values), f.start
    arr = np.asarray(f)
    return len(arr), arr, 1


def transform_at(f, M: int) -> np.ndarray:
    """f^(r/M) for r = 0..M-1 (any finite support, reduced mod M)."""
    _, vals, start = _as_support(f)
    arr = np.zeros(M, dtype=complex if np.iscomplexobj(vals) else float)
    np.add.at(arr, (np.arange(start, start + len(vals))) % M, vals)
    return M * sfft.ifft(arr)


def dft_grid(f, size: int | None = None) -> SpectrumGrid:
    """The transform of f at the points r/size, size defaulting to N."""
    N, vals, start = _as_support(f)
    M = N if size is None else size
    return SpectrumGrid(N=N, values=transform_at(f, M), start=start, length=len(vals))


def dft_direct(values, thetas, start: int = 1) -> np.ndarray:
    """O(len(values) * len(thetas)) oracle for the transform."""
    n = np.arange(start, start + len(values))
    thetas = np.asarray(thetas, dtype=float)
    return np.exp(2j * np.pi * np.outer(thetas, n)) @ np.asarray(values)


# ----------------------------------------------------------------------
# twisted sums over the square progression
# ----------------------------------------------------------------------

def f_twisted(Y: int, alpha, d1: int, d2: int, ctx: WContext) -> complex:
    """Sum over 1 <= n <= Y with W n + b = x^2 and [d1,d2] | x of (2x/sigma) e(alpha n).

    alpha may be a Fraction, in which case phases are reduced exactly.
    """
    L = lcm(d1, d2)
    W, b = ctx.W, ctx.b
    X = math.isqrt(W * Y + b)
    x = np.arange(L, X + 1, L, dtype=np.int64)
    x = x[(x * x - b) % W == 0]
    n = (x * x - b) // W
    keep = (n >= 1) & (n <= Y)
    x, n = x[keep], n[keep]
    if not len(x):
        return 0j
    if isinstance(alpha, Fraction):
        num, den = alpha.numerator, alpha.denominator
        ph = np.exp(2j * np.pi * ((num * (n % den)) % den) / den)
    else:
        ph = np.exp(2j * np.pi * ((alpha % 1.0) * n % 1.0))
    return complex(np.sum(2.0 * x * ph) / ctx.sigma_b)


def f_twisted_residual(Y: int, a: int, q: int, d1: int, d2: int, ctx: WContext) -> dict:
    """Compare f(Y, a/q) with eps_q * Y / [d1,d2] for q | [d1,d2]^2."""
    L = lcm(d1, d2)
    if (L * L) % q:
        raise InvalidArgument(f"need q | [d1,d2]^2, got q={q}, [d1,d2]={L}")
    value = f_twisted(Y, Fraction(a, q), d1, d2, ctx)
    main = epsilon_q(a, q, L, ctx) * Y / L
    window = math.sqrt(Y * ctx.W)
    return {"value": value, "main": main, "residual": abs(value - main),
            "window": window, "ratio": abs(value - main) / window}


# ----------------------------------------------------------------------
# arcs
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class ArcPartition:
    N: int
    delta: float
    Q: int
    R: int
    U: float

    def __post_init__(self):
        if not (self.Q < self.U < self.R < self.N):
            raise InvalidArgument(f"need Q < U < R < N, got Q={self.Q}, U={self.U:.4g}, "
                                  f"R={self.R}, N={self.N}")

    @classmethod
    def from_length(cls, N: int, delta: float = 0.001, Q=None, R=None, U=None) -> "ArcPartition":
        Q = math.floor(N ** (2 * delta / 5)) if Q is None else Q
        R = math.floor(N ** (1 - delta / 2)) if R is None else R
        U = N ** (0.5 - delta / 100) if U is None else U
        return cls(N, delta, Q, R, U)


@dataclass(frozen=True)
class ArcLabel:
    major: bool
    a: int | None = None
    q: int | None = None

    def __str__(self):
        return f"major({self.a},{self.q})" if self.major else "minor"


def _near(theta: Fraction, a: int, q: int, R: int) -> bool:
    return abs(theta - Fraction(a, q)) * q * R <= 1


def classify_arc(theta, partition: ArcPartition, level: str = "Q") -> ArcLabel:
    """major(a1, q1) with the smallest q1 <= bound having |theta - a1/q1| <= 1/(q1 R).

    theta is taken mod 1; level "Q" uses the first family of arcs, "U" the
    second (denominators up to U).
    """
    th = Fraction(theta) % 1
    bound = partition.Q if level == "Q" else math.floor(partition.U)
    R = partition.R
    if R >= 2 * bound:
        # |theta - a/q| <= 1/(qR) <= 1/(2q^2) forces a/q to be a convergent
        hits = [(q, a) for a, q in convergents(th, bound) if _near(th, a, q, R)]
        # the endpoint 1/1 is the same point as 0/1 on the circle
        if _near(th, 1, 1, R):
            hits.append((1, 1))
        if hits:
            q, a = min(hits)
            return ArcLabel(True, a % q, q)
        return ArcLabel(False)
    for q in range(1, bound + 1):
        a = round(th * q)
        if math.gcd(a, q) == 1 and _near(th, a, q, R):
            return ArcLabel(True, a % q, q)
    return ArcLabel(False)


def classify_arc_brute(theta, partition: ArcPartition, level: str = "Q") -> ArcLabel:
    th = Fraction(theta) % 1
    bound = partition.Q if level == "Q" else math.floor(partition.U)
    for q in range(1, bound + 1):
        for a in range(0, q + 1):
            if math.gcd(a, q) == 1 and _near(th, a, q, partition.R):
                return ArcLabel(True, a % q, q)
    return ArcLabel(False)


# ----------------------------------------------------------------------
# Weyl sums
# ----------------------------------------------------------------------

WEYL_SAFETY = 3.0


@dataclass(frozen=True)
class WeylReport:
    value: complex
    terms: int
    q: int
    shape_bound: float
    differencing_bound: float

    @property
    def ratio(self) -> float:
        return abs(self.value) / self.shape_bound if self.shape_bound else 0.0

    @property
    def within(self) -> bool:
        return abs(self.value) <= WEYL_SAFETY * self.shape_bound + 1e-9


def _frac_part(x) -> float:
    if isinstance(x, Fraction):
        return float(x % 1)
    return float(x) % 1.0


def weyl_sum(K: int, theta, g: int, modulus: int, scale=1) -> WeylReport:
    """U = sum over 1 <= x <= K, x = g (mod m) of e(theta * scale * x^2).

    Writing x = g + m s turns this into a quadratic Weyl sum in s with
    leading coefficient alpha = theta * scale * m^2. Two bounds are reported:
    the Weyl shape S (1/q + 1/S + q/S^2)^(1/2) at the approximation a/q of
    alpha with q <= S, and the differencing bound
    |U|^2 <= S + 2 sum_h min(S - h, 1/(2||2 alpha h||)), which always holds.
    """
    if K < 1 or modulus < 1:
        raise InvalidArgument("K and modulus must be >= 1")
    m = modulus
    g = g % m or m
    if g > K:
        return WeylReport(0j, 0, 1, 0.0, 0.0)
    S = (K - g) // m + 1
    t = Fraction(theta) * Fraction(scale)
    s = np.arange(S, dtype=np.int64)
    x = g + m * s
    if t.denominator < 2 ** 31:
        num, den = t.numerator % t.denominator, t.denominator
        ph = ((x % den) * (x % den)) % den
        ph = (ph.astype(object) * num % den).astype(np.float64) / den
    else:
        # long double keeps ~1e-7 turns of phase at x^2 ~ 1e12
        ph = np.mod(np.longdouble(float(t % 1)) * x.astype(np.longdouble) ** 2, 1)
        ph = ph.astype(np.float64)
    value = complex(np.exp(2j * np.pi * ph).sum())

    alpha = _frac_part(t * m * m)
    ra = rational_approx(alpha, S)
    q = ra.q
    shape = S * math.sqrt(1 / q + 1 / S + q / S ** 2)
    h = np.arange(1, S)
    dist = np.abs(((2 * alpha * h) + 0.5) % 1 - 0.5)
    with np.errstate(divide="ignore"):
        geo = np.where(dist > 0, 1 / (2 * np.maximum(dist, 1e-300)), np.inf)
    diff_sq = S + 2 * np.minimum(S - h, geo).sum()
    return WeylReport(value, S, q, shape, math.sqrt(diff_sq))


def weyl_sum_direct(K: int, theta: float, g: int, modulus: int, scale: float = 1.0) -> complex:
    xs = [x for x in range(1, K + 1) if (x - g) % modulus == 0]
    return sum(complex(math.cos(2 * math.pi * theta * scale * x * x),
                       math.sin(2 * math.pi * theta * scale * x * x)) for x in xs)


# ----------------------------------------------------------------------
# L^q norms
# ----------------------------------------------------------------------

def _is_integral(arr: np.ndarray) -> bool:
    return (not np.iscomplexobj(arr)) and np.all(np.abs(arr) < 2 ** 31) and np.all(arr == np.round(arr))


def self_convolve(vals: np.ndarray, k: int) -> np.ndarray:
    """k-fold self convolution; exact for small integer inputs."""
    vals = np.asarray(vals)
    if _is_integral(vals):
        iv = np.round(vals).astype(np.int64)
        out = iv
        for _ in range(k - 1):
            if len(out) * len(iv) <= 4 * 10 ** 7:
                out = np.convolve(out, iv)
            else:
                out = np.round(fftconvolve(out.astype(float), iv.astype(float))).astype(np.int64)
        return out
    out = vals
    for _ in range(k - 1):
        out = fftconvolve(out, vals)
    return out


def even_moment(vals, k: int):
    """Integral over [0,1) of |f^|^(2k) = sum_m |f*...*f (m)|^2 (k-fold)."""
    c = self_convolve(np.asarray(vals), k)
    if c.dtype == np.int64:
        return int(sum(int(v) * int(v) for v in c)) if len(c) < 20000 else float(np.dot(c.astype(float), c))
    return float(np.sum(np.abs(c) ** 2))


def grid_moment(values: np.ndarray, q: float) -> float:
    """Periodic trapezoid rule: mean of |f^|^q over the grid."""
    return float(np.mean(np.abs(values) ** q))


def quadrature_moment(f, q: float, refine: int = 1, rtol: float = 1e-4, cap: int = 64) -> dict:
    """Trapezoid estimate of the integral of |f^|^q, doubling the oversampling
    factor until successive estimates agree to rtol (or refine hits cap)."""
    N, vals, _ = _as_support(f)
    base = max(N, len(vals))
    r = max(1, int(refine))
    prev = grid_moment(transform_at(f, r * base), q)
    while True:
        if 2 * r > cap:
            return {"value": prev, "refine": r, "rel_change": None, "converged": False}
        cur = grid_moment(transform_at(f, 2 * r * base), q)
        rel = abs(cur - prev) / max(abs(cur), 1e-300)
        r *= 2
        if rel < rtol:
            return {"value": cur, "refine": r, "rel_change": rel, "converged": True}
        prev = cur


def lq_moment(source, q: float, refine: int = 1) -> float:
    """Integral over [0,1) of |f^(theta)|^q.

    source is a SpectrumGrid (the sequence is recovered from it) or a
    sequence. Even integer q goes through exact solution counting, anything
    else through quadrature.
    """
    if q <= 1:
        raise InvalidArgument(f"q must exceed 1, got {q}")
    if refine < 1:
        raise InvalidArgument("refine must be >= 1")
    if isinstance(source, SpectrumGrid):
        vals = source.sequence()
        if np.allclose(vals.imag, 0, atol=1e-9 * (1 + np.abs(vals).max())):
            vals = vals.real
            r = np.round(vals)
            if np.allclose(vals, r, atol=1e-7):
                vals = r
        f = WeightedSequence(N=source.N, values=vals, start=source.start) if not np.iscomplexobj(vals) else vals
    else:
        f = source
    N, vals, _ = _as_support(f)
    if float(q).is_integer() and int(q) % 2 == 0:
        return float(even_moment(vals, int(q) // 2))
    return quadrature_moment(f, q, refine)["value"]


def lq_norm(source, q: float, refine: int = 1) -> float:
    return lq_moment(source, q, refine) ** (1 / q)


__all__ = [
    "ArcLabel", "ArcPartition", "SpectrumGrid", "WEYL_SAFETY", "WeylReport", "classify_arc",
    "classify_arc_brute", "dft_direct", "dft_grid", "e_frac", "even_moment", "f_twisted",
    "f_twisted_residual", "grid_moment", "lq_moment", "lq_norm", "quadrature_moment",
    "self_convolve", "transform_at", "weyl_sum", "weyl_sum_direct",
]
