"""Numerical checks of the hypotheses fed into the transference theorem:
mean, pseudorandomness of the majorant, restriction (moment) bounds and
regularity.

Sequences built from a WContext are desk-scale stand-ins for objects that are
only controlled asymptotically, so their reports carry verdict "report-only".
Synthetic sequences (ctx_ref None) get a hard pass/fail verdict.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .arith import InvalidArgument, primes_upto, primorial
from .residues import WContext, build_w_context
from .sieve import WeightedSequence, build_sequences, selberg_weights
from .spectral import dft_grid, even_moment, grid_moment, quadrature_moment

CONDITIONS = ("mean", "pseudorandom", "restriction", "regularity")
VERDICTS = ("pass", "fail", "report-only")


@dataclass
class ConditionReport:
    condition: str
    parameters: dict = field(default_factory=dict)
    observed: dict = field(default_factory=dict)
    reference: dict = field(default_factory=dict)
    verdict: str = "report-only"

    def __post_init__(self):
        if self.condition not in CONDITIONS:
            raise InvalidArgument(f"unknown condition {self.condition!r}")
        if self.verdict not in VERDICTS:
            raise InvalidArgument(f"unknown verdict {self.verdict!r}")

    def to_dict(self) -> dict:
        return _plain(asdict(self))

    @classmethod
    def from_dict(cls, d: dict) -> "ConditionReport":
        return cls(**d)


def _plain(x):
    # json-friendly copy: numpy scalars to python, tuples to lists
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, np.generic):
        return x.item()
    if isinstance(x, complex):
        return [x.real, x.imag]
    return x


def _verdict(seq: WeightedSequence, ok: bool) -> str:
    if seq.ctx_ref is not None:
        return "report-only"
    return "pass" if ok else "fail"


def _ctx_params(seq: WeightedSequence) -> dict:
    c = seq.ctx_ref
    if c is None:
        return {"N": seq.N, "role": seq.role}
    return {"N": seq.N, "role": seq.role, "w": c.w, "W": c.W, "b": c.b, "z": c.z}


# ----------------------------------------------------------------------
# mean
# ----------------------------------------------------------------------

def check_mean(a: WeightedSequence, delta: float = 0.001) -> ConditionReport:
    alpha = a.mean()
    ref = 0.5 - 5 * delta
    return ConditionReport("mean", {**_ctx_params(a), "delta": delta},
                           {"alpha": alpha}, {"lower_bound": ref}, _verdict(a, alpha >= ref))


def mean_composite(alphas) -> float:
    a3, a4, a5 = alphas[2], alphas[3], alphas[4]
    return 0.5 * (min(1.0, a3 + a4) + a4) + a5


def check_mean_five(seqs, delta: float = 0.001, delta1: float = 0.2) -> ConditionReport:
    """The five-sequence mean condition: alpha_1, alpha_2 >= delta1,
    alpha_3..5 >= delta and (min(1, a3 + a4) + a4)/2 + a5 >= 1 + delta."""
    if len(seqs) != 5:
        raise InvalidArgument("need exactly five sequences")
    if not 0.1 < delta1 < 1:
        raise InvalidArgument("delta1 must lie in (1/10, 1)")
    alphas = [s.mean() for s in seqs]
    comp = mean_composite(alphas)
    ok = (min(alphas[:2]) >= delta1 and min(alphas[2:]) >= delta and comp >= 1 + delta)
    synthetic = all(s.ctx_ref is None for s in seqs)
    return ConditionReport(
        "mean", {"delta": delta, "delta1": delta1, "N": [s.N for s in seqs]},
        {"alphas": alphas, "composite": comp},
        {"composite_lower": 1 + delta, "single_lower": 0.5 - 5 * delta},
        ("pass" if ok else "fail") if synthetic else "report-only")


# ----------------------------------------------------------------------
# pseudorandomness
# ----------------------------------------------------------------------

def pseudorandom_deviation(v: WeightedSequence) -> dict:
    N = v.N
    vals = dft_grid(v).values
    mag = np.abs(vals)
    dev = mag.copy()
    dev[0] = abs(vals[0] - N)
    r_star = int(np.argmax(mag[1:])) + 1 if N > 1 else 0
    return {
        "D": float(dev.max() / N),
        "D_nonzero": float(mag[1:].max() / N) if N > 1 else 0.0,
        "r_max": r_star,
        "zero_mode_deviation": float(dev[0] / N),
        "v_hat_0": float(vals[0].real),
    }


def check_pseudorandom(v: WeightedSequence, eta: float = 0.25) -> ConditionReport:
    obs = pseudorandom_deviation(v)
    return ConditionReport("pseudorandom", {**_ctx_params(v), "eta": eta}, obs,
                           {"eta": eta}, _verdict(v, obs["D"] <= eta))


def pseudorandom_sweep(N: int, ws=(3, 5, 7, 11), b: int = 1, z_override: int | None = 50,
                       delta: float = 0.001) -> dict:
    """Majorant deviation for each w; monotone flag and log-log slope of D vs w."""
    rows = []
    z = None
    for w in ws:
        ctx = build_w_context(w, b, N, delta, z_override)
        _, v = build_sequences(ctx, selberg_weights(ctx.z, ctx))
        rep = check_pseudorandom(v)
        rows.append({"w": w, "W": ctx.W, **rep.observed})
        z = ctx.z
    D = [r["D_nonzero"] for r in rows]
    slope = float(np.polyfit(np.log(ws), np.log(D), 1)[0]) if len(ws) > 1 else float("nan")
    return {
        "N": N, "z": z,
        "rows": rows,
        "non_increasing": all(D[i + 1] <= D[i] for i in range(len(D) - 1)),
        "fitted_exponent": slope,
    }


# ----------------------------------------------------------------------
# restriction
# ----------------------------------------------------------------------

def level_set_measure(values: np.ndarray, N: int, delta1: float) -> float:
    """(1/N) #{r : |f^(r/N)| > delta1 N}."""
    return float(np.count_nonzero(np.abs(values) > delta1 * N)) / N


def check_restriction(a: WeightedSequence, q_exponent: float = 4.5,
                      deltas=(0.1, 0.2, 0.5), quadrature: bool = False) -> ConditionReport:
    if not 4 < q_exponent < 5:
        raise InvalidArgument(f"exponent must lie in (4, 5), got {q_exponent}")
    N = a.N
    grid = dft_grid(a).values
    moment_q = grid_moment(grid, q_exponent)
    fourth = even_moment(a.values, 2)
    meas = {d: level_set_measure(grid, N, d) for d in deltas}
    obs = {
        "ratio_q": moment_q / N ** (q_exponent - 1),
        "fourth_moment": fourth,
        "ratio_4": fourth / N ** 3,
        "level_set": {str(d): m for d, m in meas.items()},
        "scaled_level_set": {str(d): d ** 4 * m * N for d, m in meas.items()},
    }
    if quadrature:
        qd = quadrature_moment(a, q_exponent)
        obs["ratio_q_quadrature"] = qd["value"] / N ** (q_exponent - 1)
    return ConditionReport("restriction", {**_ctx_params(a), "q": q_exponent,
                                           "deltas": list(deltas)},
                           obs, {"log4N": math.log(N) ** 4 if N > 1 else 0.0}, "report-only")


# ----------------------------------------------------------------------
# regularity
# ----------------------------------------------------------------------

def smallest_prime_factor(n: int) -> np.ndarray:
    spf = np.zeros(n + 1, dtype=np.int64)
    for p in primes_upto(math.isqrt(n) if n >= 4 else 1)[::-1]:
        spf[p * p::p] = p
    idx = np.arange(n + 1)
    spf[(spf == 0)] = idx[(spf == 0)]
    return spf


def regularity_sum(values: np.ndarray, beta: float) -> float:
    """sum over u <= beta N, v >= (1 - beta) N, (v - u, P(1/beta)) = 1 of f(u) f(v)."""
    f = np.asarray(values, dtype=float)
    N = len(f)
    y = math.floor(1 / beta)
    us = np.arange(1, math.floor(beta * N) + 1)
    vs = np.arange(math.ceil((1 - beta) * N), N + 1)
    if not len(us) or not len(vs):
        return 0.0
    spf = smallest_prime_factor(N)
    d = vs[None, :] - us[:, None]
    ok = (d == 1) | (spf[d] > y)
    return float(f[us - 1] @ ok.astype(float) @ f[vs - 1])


def regularity_sum_brute(values, beta: float) -> float:
    N = len(values)
    P = primorial(1 / beta)
    total = 0.0
    for u in range(1, N + 1):
        if u > beta * N:
            break
        for v in range(1, N + 1):
            if v >= (1 - beta) * N and math.gcd(v - u, P) == 1:
                total += values[u - 1] * values[v - 1]
    return total


def parity_flip_check(ctx: WContext) -> dict:
    """For each root h with h^2 = c W + b and c even, h + W/2 gives odd c."""
    W, b = ctx.W, ctx.b
    out = {"checked": 0, "ok": True}
    for h in ctx.roots:
        c = (h * h - b) // W
        if c % 2 == 0:
            h1 = h + W // 2
            c1 = (h1 * h1 - b) // W
            out["checked"] += 1
            if (h1 * h1 - b) % W or c1 % 2 != 1:
                out["ok"] = False
    return out


def check_regularity(f: WeightedSequence, beta: float, kappa: float) -> ConditionReport:
    if not 0 < beta < 0.5:
        raise InvalidArgument(f"beta must lie in (0, 1/2), got {beta}")
    vals = f.on_range(1, f.N)
    S = regularity_sum(vals, beta)
    params = {**_ctx_params(f), "beta": beta, "kappa": kappa}
    obs = {"S": S, "kappa_empirical": S / f.N ** 2}
    if f.ctx_ref is not None:
        obs["parity"] = parity_flip_check(f.ctx_ref)
    return ConditionReport("regularity", params, obs, {"kappa_N2": kappa * f.N ** 2},
                           _verdict(f, S >= kappa * f.N ** 2))


__all__ = [
    "ConditionReport", "check_mean", "check_mean_five", "check_pseudorandom",
    "check_regularity", "check_restriction", "level_set_measure", "mean_composite",
    "parity_flip_check", "pseudorandom_deviation", "pseudorandom_sweep",
    "regularity_sum", "regularity_sum_brute", "smallest_prime_factor",
]
