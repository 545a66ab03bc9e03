"""Large spectrum, Bohr sets, the smoothing a = a' + a'' and weighted
solution counts for n1 + ... + n5 = N."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.signal import fftconvolve

from .arith import InvalidArgument
from .sieve import WeightedSequence
from .spectral import dft_grid, grid_moment, transform_at


class DegenerateBohrError(ValueError):
    pass


@dataclass(frozen=True)
class BohrData:
    epsilon: float
    N: int
    T_eps: tuple  # grid indices r with |a^(r/N)| >= eps N
    B: tuple      # 1 <= b <= eps N with ||b r / N|| < eps for every r in T_eps

    def to_dict(self) -> dict:
        return {"epsilon": self.epsilon, "N": self.N, "T_eps": list(self.T_eps), "B": list(self.B)}


def circle_distance(x: np.ndarray) -> np.ndarray:
    return np.abs((x + 0.5) % 1.0 - 0.5)


def large_spectrum(a: WeightedSequence, epsilon: float) -> np.ndarray:
    vals = dft_grid(a).values
    return np.flatnonzero(np.abs(vals) >= epsilon * a.N)


def bohr_spectrum(a: WeightedSequence, epsilon: float) -> BohrData:
    if not 0 < epsilon < 1:
        raise InvalidArgument(f"epsilon must lie in (0, 1), got {epsilon}")
    N = a.N
    T = large_spectrum(a, epsilon)
    cand = np.arange(1, math.floor(epsilon * N) + 1, dtype=np.int64)
    keep = np.ones(len(cand), dtype=bool)
    # exact residues: ||b r / N|| = min(b r mod N, N - b r mod N) / N
    for chunk in np.array_split(T, max(1, len(T) // 256 + 1)):
        if not len(chunk):
            continue
        m = (cand[:, None] * chunk[None, :]) % N
        dist = np.minimum(m, N - m)
        keep &= np.all(dist < epsilon * N, axis=1)
    B = cand[keep]
    if not len(B):
        raise DegenerateBohrError(f"Bohr set empty at epsilon={epsilon}; increase epsilon")
    return BohrData(epsilon, N, tuple(int(r) for r in T), tuple(int(b) for b in B))


def bohr_autocorrelation(B) -> tuple[np.ndarray, int]:
    """c(k) = #{(b1, b2) in B^2 : b1 - b2 = k} for k = -D..D, and D."""
    B = np.asarray(B)
    lo, hi = int(B.min()), int(B.max())
    ind = np.zeros(hi - lo + 1)
    ind[B - lo] = 1.0
    c = np.round(np.correlate(ind, ind, mode="full"))
    return c, hi - lo


@dataclass
class Decomposition:
    smooth: WeightedSequence   # a' on [1 - D, N + D]
    rough: WeightedSequence    # a'' = a - a' on the same support
    bohr: BohrData
    summary: dict = field(default_factory=dict)


def _norms(values: np.ndarray, qs) -> dict:
    return {str(q): grid_moment(values, q) ** (1 / q) for q in qs}


def smooth_decompose(a: WeightedSequence, bohr: BohrData, qs=(2, 4, 4.5)) -> Decomposition:
    """a'(n) = mean over b1, b2 in B of a(n + b1 - b2), reading a as 0 off [1, N].

    a' is kept on its full support [1 - D, N + D] (D = max B - min B), so its
    transform is exactly a^ * |1_B^|^2 / |B|^2. a'' = a - a'.
    """
    if not bohr.B:
        raise DegenerateBohrError("empty Bohr set")
    N = a.N
    base = a.on_range(1, N)
    c, D = bohr_autocorrelation(bohr.B)
    nB2 = float(len(bohr.B)) ** 2
    if len(base) * len(c) <= 5 * 10 ** 7:
        smooth_vals = np.convolve(base, c) / nB2
    else:
        smooth_vals = fftconvolve(base, c) / nB2
    start = 1 - D
    ext = np.zeros(N + 2 * D)
    ext[D:D + N] = base
    rough_vals = ext - smooth_vals
    smooth = WeightedSequence(N, smooth_vals, "a_smooth", a.ctx_ref, start=start)
    rough = WeightedSequence(N, rough_vals, "custom", a.ctx_ref, start=start)

    grid_a = transform_at(a.on_range(1, N), N) if a.start == 1 else transform_at(a, N)
    grid_s = transform_at(smooth, N)
    grid_r = transform_at(rough, N)
    inner = smooth.on_range(1, N)
    summary = {
        "B_size": len(bohr.B),
        "T_size": len(bohr.T_eps),
        "spread": D,
        "mean_a": float(base.sum()) / N,
        "mean_smooth_full": float(smooth_vals.sum()) / N,
        "mean_smooth_truncated": float(inner.sum()) / N,
        "smooth_min": float(smooth_vals.min()),
        "smooth_max": float(smooth_vals.max()),
        "rough_sup_over_N": float(np.abs(grid_r).max()) / N,
        "boundary_positions": 2 * D,
        "norms_a": _norms(grid_a, qs),
        "norms_smooth": _norms(grid_s, qs),
        "norms_rough": _norms(grid_r, qs),
    }
    return Decomposition(smooth, rough, bohr, summary)


def norm_inequalities(dec: Decomposition, rtol: float = 1e-9) -> dict:
    """q -> (||a'^||_q <= ||a^||_q, ||a''^||_q <= ||a^||_q) on the grid."""
    s = dec.summary
    out = {}
    for q, na in s["norms_a"].items():
        tol = rtol * max(na, 1e-300)
        out[q] = (s["norms_smooth"][q] <= na + tol, s["norms_rough"][q] <= na + tol)
    return out


def pointwise_multiplier_check(a: WeightedSequence, dec: Decomposition, M: int | None = None) -> float:
    """max over the grid of | a'^ - a^ |1_B^|^2/|B|^2 |, relative to max |a^|."""
    N = a.N
    M = N if M is None else M
    fa = transform_at(a, M)
    B = np.asarray(dec.bohr.B)
    ind = np.zeros(int(B.max()) + 1)
    ind[B] = 1.0
    fb = transform_at(ind[1:], M)  # indicator starts at n = 1
    mult = np.abs(fb) ** 2 / len(B) ** 2
    diff = np.abs(transform_at(dec.smooth, M) - fa * mult)
    return float(diff.max() / max(np.abs(fa).max(), 1e-300))


# ----------------------------------------------------------------------
# solution counts
# ----------------------------------------------------------------------

def part_lengths(N: int) -> tuple[int, ...]:
    return (N // 6, N // 6, N // 2, N // 2, N)


def _values(s, upto: int) -> np.ndarray:
    if isinstance(s, WeightedSequence):
        return s.on_range(1, upto)
    arr = np.asarray(s, dtype=float)
    out = np.zeros(upto)
    m = min(upto, len(arr))
    out[:m] = arr[:m]
    return out


def _integral(arr: np.ndarray) -> bool:
    return bool(np.all(arr == np.round(arr)) and np.all(np.abs(arr) < 2 ** 20))


def count_weighted_solutions(seqs, N: int, enforce_ranges: bool = False):
    """sum over n1 + ... + nk = N, n_i >= 1 of prod a_i(n_i).

    With enforce_ranges (k = 5) each n_i is further limited to [1, N_i] with
    N_i = N/6, N/6, N/2, N/2, N (floored). Integer inputs give an exact int.
    """
    k = len(seqs)
    if k < 1:
        raise InvalidArgument("need at least one sequence")
    if N < k:
        return 0
    top = N - k + 1  # largest admissible part
    arrs = [_values(s, top) for s in seqs]
    if enforce_ranges:
        if k != 5:
            raise InvalidArgument("range limits are defined for five sequences")
        for arr, L in zip(arrs, part_lengths(N)):
            arr[L:] = 0.0
    if all(_integral(x) for x in arrs):
        conv = np.round(arrs[0]).astype(object)
        for x in arrs[1:-1]:
            conv = np.convolve(conv, np.round(x).astype(object))
        last = np.round(arrs[-1]).astype(object)
        # coefficient of N: conv index j is a sum of k-1 parts equal to j + k - 1
        total = 0
        for j in range(len(conv)):
            m = N - (j + k - 1)
            if 1 <= m <= top:
                total += conv[j] * last[m - 1]
        return int(total)
    conv = arrs[0]
    for x in arrs[1:-1]:
        conv = fftconvolve(conv, x) if len(conv) * len(x) > 10 ** 6 else np.convolve(conv, x)
    j = np.arange(len(conv))
    m = N - (j + k - 1)
    ok = (m >= 1) & (m <= top)
    return float(np.dot(conv[ok], arrs[-1][m[ok] - 1]))


def count_brute_force(seqs, N: int) -> float:
    """O(N^4) oracle for five sequences (inner two sums vectorized)."""
    if len(seqs) != 5:
        raise InvalidArgument("oracle is written for five sequences")
    a = [_values(s, N) for s in seqs]
    idx = np.arange(1, N + 1)
    total = 0.0
    for n1 in range(1, N + 1):
        w1 = a[0][n1 - 1]
        if w1 == 0:
            continue
        for n2 in range(1, N - n1 + 1):
            w2 = w1 * a[1][n2 - 1]
            if w2 == 0:
                continue
            rest = N - n1 - n2
            n3 = idx[idx < rest][:, None]
            n4 = idx[idx < rest][None, :]
            n5 = rest - n3 - n4
            valid = n5 >= 1
            vals = a[2][n3 - 1] * a[3][n4 - 1] * np.where(valid, a[4][np.clip(n5, 1, N) - 1], 0.0)
            total += w2 * float(vals.sum())
    return total


def count_fourier(seqs, N: int, M: int | None = None) -> float:
    """(1/M) sum_r prod f_i^(r/M) e(-N r/M) with M > k N; equals the count."""
    k = len(seqs)
    M = k * N + 1 if M is None else M
    if M <= k * N:
        raise InvalidArgument("grid too small for an exact identity")
    prod = np.ones(M, dtype=complex)
    for s in seqs:
        prod *= transform_at(_values(s, N), M)
    r = np.arange(M)
    return float((prod * np.exp(-2j * np.pi * ((N * r) % M) / M)).real.sum() / M)


def three_term_density(a1, a2, a3, N: int) -> float:
    """sum over n1 + n2 + n3 = N of a1 a2 a3, divided by N^2."""
    return count_weighted_solutions([a1, a2, a3], N) / N ** 2


def stars_and_bars(N: int, k: int = 5) -> int:
    return math.comb(N - 1, k - 1)


__all__ = [
    "BohrData", "Decomposition", "DegenerateBohrError", "bohr_autocorrelation",
    "bohr_spectrum", "circle_distance", "count_brute_force", "count_fourier",
    "count_weighted_solutions", "large_spectrum", "norm_inequalities", "part_lengths",
    "pointwise_multiplier_check", "smooth_decompose", "stars_and_bars", "three_term_density",
]
