"""End-to-end check of the five-prime-squares representation: shift
selection, sequence construction, condition reports, weighted solution count
and brute-force r5(M) with witnesses."""

from __future__ import annotations

import math
import time
from collections import Counter
from dataclasses import asdict, dataclass, field
from itertools import combinations_with_replacement

import numpy as np

from .arith import is_prime, primes_upto
from .conditions import (ConditionReport, check_mean, check_mean_five, check_pseudorandom,
                         check_regularity, check_restriction)
from .residues import build_w_context, decompose_target, w_modulus
from .sieve import build_sequences, selberg_weights
from .transference import count_weighted_solutions, part_lengths


class CongruenceError(ValueError):
    pass


class TargetTooSmall(ValueError):
    pass


def prime_squares(limit: int) -> np.ndarray:
    return primes_upto(math.isqrt(limit)) ** 2


# ----------------------------------------------------------------------
# r5 tables
# ----------------------------------------------------------------------

class SquareSumTable:
    """Ordered representation counts s_k(m) of m as a sum of k prime squares,
    for k = 1..5 and 0 <= m <= limit, by exact shifted-add convolution."""

    def __init__(self, limit: int):
        self.limit = limit
        self.squares = prime_squares(limit)
        s = np.zeros(limit + 1, dtype=np.int64)
        s[self.squares] = 1
        self.levels = [None, s]
        for _ in range(4):
            prev = self.levels[-1]
            nxt = np.zeros_like(prev)
            for q in self.squares:
                nxt[q:] += prev[:limit + 1 - q]
            self.levels.append(nxt)

    def r5(self, M: int) -> int:
        return int(self.levels[5][M])

    def witness(self, M: int) -> tuple[int, ...] | None:
        """Primes p1 <= ... <= p5 with squares summing to M, by descent."""
        if self.levels[5][M] == 0:
            return None
        out = []
        rest = M
        for k in range(5, 1, -1):
            q = self.squares[self.squares < rest]
            ok = np.flatnonzero(self.levels[k - 1][rest - q] > 0)
            p2 = int(q[ok[0]])
            out.append(p2)
            rest -= p2
        out.append(rest)
        return tuple(sorted(math.isqrt(x) for x in out))


def r5_single(M: int) -> int:
    """Meet in the middle: ordered two-square sums against three-square sums."""
    if M < 20:
        return 0
    sq = prime_squares(M)
    pair = (sq[:, None] + sq[None, :]).ravel()
    pair = pair[pair <= M]
    vals2, cnt2 = np.unique(pair, return_counts=True)
    three = np.zeros(M + 1, dtype=np.int64)
    for q in sq:
        v = vals2 + q
        keep = v <= M
        np.add.at(three, v[keep], cnt2[keep])
    rest = M - vals2
    keep = rest >= 0
    return int(np.dot(cnt2[keep].astype(np.int64), three[rest[keep]]))


def r5_nested(M: int) -> int:
    """Plain enumeration of sorted quintuples, converted to ordered counts."""
    primes = [int(p) for p in primes_upto(math.isqrt(M))]
    total = 0
    for combo in combinations_with_replacement(primes, 4):
        rest = M - sum(p * p for p in combo)
        if rest < combo[-1] ** 2:
            continue
        p5 = math.isqrt(rest)
        if p5 * p5 == rest and is_prime(p5):
            five = combo + (p5,)
            mult = Counter(five)
            total += math.factorial(5) // math.prod(math.factorial(c) for c in mult.values())
    return total


def verify_witness(M: int, primes, shifts=None, W: int | None = None) -> bool:
    if len(primes) != 5 or not all(is_prime(p) for p in primes):
        return False
    if sum(p * p for p in primes) != M:
        return False
    if shifts is not None:
        return all((p * p - b) % W == 0 for p, b in zip(primes, shifts))
    return True


def scan_window(M0: int, M1: int, table: SquareSumTable | None = None) -> dict:
    """r5(M) for every M = 5 (mod 24) in [M0, M1], with witnesses.

    The exception list is whatever the enumeration finds; nothing is assumed.
    """
    table = table if table is not None and table.limit >= M1 else SquareSumTable(M1)
    first = M0 + (5 - M0) % 24
    Ms = np.arange(first, M1 + 1, 24)
    counts = table.levels[5][Ms]
    exceptions = [int(m) for m in Ms[counts == 0]]
    bad_witness = []
    for m in Ms[counts > 0]:
        w = table.witness(int(m))
        if not verify_witness(int(m), w):
            bad_witness.append(int(m))
    return {"M0": M0, "M1": M1, "checked": int(len(Ms)), "exceptions": exceptions,
            "witness_failures": bad_witness, "min_count": int(counts.min()) if len(Ms) else None}


# ----------------------------------------------------------------------
# end-to-end
# ----------------------------------------------------------------------

@dataclass
class HuaReport:
    M: int
    w: int
    delta: float
    W: int
    b_shifts: tuple
    N: int
    part_lengths: tuple
    condition_reports: list = field(default_factory=list)
    weighted_count: float = 0.0
    brute_count: int = 0
    witness: dict | None = None
    runtime: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["b_shifts"] = list(self.b_shifts)
        d["part_lengths"] = list(self.part_lengths)
        d["condition_reports"] = [r.to_dict() if isinstance(r, ConditionReport) else r
                                  for r in self.condition_reports]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "HuaReport":
        d = dict(d)
        d["b_shifts"] = tuple(d["b_shifts"])
        d["part_lengths"] = tuple(d["part_lengths"])
        d["condition_reports"] = [ConditionReport.from_dict(r) for r in d["condition_reports"]]
        return cls(**d)

    @property
    def consistent(self) -> bool:
        ok = self.W * self.N + sum(self.b_shifts) == self.M
        if self.weighted_count > 0:
            ok &= self.brute_count > 0
        if self.brute_count > 0:
            ok &= self.witness is not None and self.witness.get("verified", False)
        return bool(ok)


def _weighted_witness(seqs, N: int, ctxs):
    """Backtrack a solution n1 + ... + n5 = N with every a_i(n_i) > 0."""
    lens = part_lengths(N)
    supp = [set(int(n) for n in np.flatnonzero(s.on_range(1, L) > 0) + 1)
            for s, L in zip(seqs, lens)]
    # reach[i] = sums attainable by parts i..4
    reach = [None] * 6
    reach[5] = {0}
    for i in range(4, -1, -1):
        reach[i] = {x + y for x in supp[i] for y in reach[i + 1] if x + y <= N}
    if N not in reach[0]:
        return None
    parts, rest = [], N
    for i in range(5):
        n = min(n for n in supp[i] if rest - n in reach[i + 1])
        parts.append(n)
        rest -= n
    return [math.isqrt(c.W * n + c.b) for n, c in zip(parts, ctxs)], parts


def verify_hua(M: int, w: int = 3, delta: float = 0.001, z_override: int | None = None,
               table: SquareSumTable | None = None) -> HuaReport:
    if M % 24 != 5:
        raise CongruenceError(f"M = {M} is {M % 24} mod 24, need 5")
    runtime = {}
    t0 = time.perf_counter()
    W = w_modulus(w)
    shifts = decompose_target(M, W)
    N, rem = divmod(M - sum(shifts), W)
    assert rem == 0
    if N <= 0:
        raise TargetTooSmall(f"M = {M} leaves N = {N} for W = {W}")
    lens = part_lengths(N)
    runtime["decompose"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    ctxs, seqs, majorants = [], [], []
    for b, L in zip(shifts, lens):
        ctx = build_w_context(w, b, L, delta, z_override)
        a, v = build_sequences(ctx, selberg_weights(ctx.z, ctx))
        ctxs.append(ctx)
        seqs.append(a)
        majorants.append(v)
    runtime["sequences"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    reports = []
    for a, v in zip(seqs, majorants):
        if a.N < 1:
            continue
        reports.append(check_mean(a, delta))
        reports.append(check_pseudorandom(v))
        if a.N >= 2:
            reports.append(check_restriction(a))
    if all(s.N >= 1 for s in seqs):
        reports.append(check_mean_five(seqs, delta))
    if seqs[3].N >= 2:
        reports.append(check_regularity(seqs[3], delta / 50, 0.0))
    runtime["conditions"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    weighted = count_weighted_solutions(seqs, N, enforce_ranges=True)
    runtime["weighted_count"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    brute = table.r5(M) if table is not None and table.limit >= M else r5_single(M)
    witness = None
    found = _weighted_witness(seqs, N, ctxs) if weighted > 0 else None
    if found is not None:
        primes, parts = found
        witness = {"primes": primes, "parts": parts, "source": "weighted",
                   "verified": verify_witness(M, primes, shifts, W)}
    elif brute > 0:
        tab = table if table is not None and table.limit >= M else SquareSumTable(M)
        primes = list(tab.witness(M))
        witness = {"primes": primes, "parts": None, "source": "brute",
                   "verified": verify_witness(M, primes)}
    runtime["brute_count"] = time.perf_counter() - t0

    return HuaReport(M=M, w=w, delta=delta, W=W, b_shifts=tuple(shifts), N=N,
                     part_lengths=lens, condition_reports=reports,
                     weighted_count=float(weighted), brute_count=int(brute),
                     witness=witness, runtime=runtime)


__all__ = [
    "CongruenceError", "HuaReport", "SquareSumTable", "TargetTooSmall", "prime_squares",
    "r5_nested", "r5_single", "scan_window", "verify_hua", "verify_witness",
]
