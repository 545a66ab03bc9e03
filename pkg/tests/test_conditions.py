import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hua5.arith import InvalidArgument, primorial
from hua5.conditions import (ConditionReport, check_mean, check_mean_five, check_pseudorandom,
                             check_regularity, check_restriction, level_set_measure,
                             mean_composite, parity_flip_check, pseudorandom_deviation,
                             pseudorandom_sweep, regularity_sum, regularity_sum_brute,
                             smallest_prime_factor)
from hua5.residues import build_w_context
from hua5.sieve import WeightedSequence, build_sequences
from hua5.spectral import dft_grid


def ones(N):
    return WeightedSequence.from_values(np.ones(N))


def test_report_validation():
    with pytest.raises(InvalidArgument):
        ConditionReport("bogus")
    with pytest.raises(InvalidArgument):
        ConditionReport("mean", verdict="maybe")
    r = ConditionReport("mean", {"N": 3}, {"alpha": 1.0}, {}, "pass")
    assert ConditionReport.from_dict(r.to_dict()) == r


# -- mean ----------------------------------------------------------------

def test_mean_examples():
    assert check_mean(ones(100)).verdict == "pass"
    assert check_mean(ones(100)).observed["alpha"] == 1.0
    assert check_mean(WeightedSequence.from_values(np.zeros(100))).verdict == "fail"


def test_mean_five_composite():
    assert mean_composite([1, 1, 0.5, 0.5, 0.5]) == 0.5 * (1 + 0.5) + 0.5
    seqs = [ones(50) for _ in range(5)]
    assert check_mean_five(seqs).verdict == "pass"
    half = WeightedSequence.from_values(np.tile([1.0, 0.0], 25))
    assert check_mean_five([ones(50)] * 2 + [half] * 3).verdict == "pass"  # composite 1.25
    quarter = WeightedSequence.from_values(np.tile([1.0, 0.0, 0.0, 0.0], 25))
    rep = check_mean_five([ones(100)] * 2 + [quarter] * 3)
    assert rep.verdict == "fail" and rep.observed["composite"] == pytest.approx(0.625)
    with pytest.raises(InvalidArgument):
        check_mean_five(seqs[:4])


def test_mean_w_tricked_is_report_only():
    ctx = build_w_context(5, 1, 5000, z_override=20)
    a, _ = build_sequences(ctx)
    rep = check_mean(a)
    assert rep.verdict == "report-only" and rep.reference["lower_bound"] == pytest.approx(0.495)
    assert rep.parameters["W"] == 120


# -- pseudorandom --------------------------------------------------------

def test_pseudorandom_constant_exact():
    obs = pseudorandom_deviation(ones(1000))
    assert obs["D"] < 1e-12
    assert check_pseudorandom(ones(1000)).verdict == "pass"


def test_pseudorandom_even_indicator():
    N = 1000
    v = WeightedSequence.from_values([2.0 if n % 2 == 0 else 0.0 for n in range(1, N + 1)])
    obs = pseudorandom_deviation(v)
    assert obs["D"] == pytest.approx(1.0) and obs["r_max"] == N // 2
    assert check_pseudorandom(v).verdict == "fail"


def test_pseudorandom_sweep_small():
    out = pseudorandom_sweep(20000, ws=(3, 5), z_override=30)
    assert len(out["rows"]) == 2 and out["z"] == 30
    assert all(math.isfinite(r["D"]) for r in out["rows"])


# -- restriction ---------------------------------------------------------

def test_restriction_constant():
    rep = check_restriction(ones(200), 4.5)
    assert rep.observed["ratio_q"] == pytest.approx(1.0)
    assert rep.verdict == "report-only"


def test_restriction_pair_fourth():
    rep = check_restriction(WeightedSequence.from_values([1, 1]), 4.5)
    assert rep.observed["fourth_moment"] == 6


def test_restriction_rejects_exponent():
    for q in (4, 5, 3.9, 6):
        with pytest.raises(InvalidArgument):
            check_restriction(ones(10), q)


def test_restriction_quadrature_agrees():
    ctx = build_w_context(3, 1, 3000, z_override=10)
    a, _ = build_sequences(ctx)
    rep = check_restriction(a, 4.5, quadrature=True)
    assert rep.observed["ratio_q_quadrature"] == pytest.approx(rep.observed["ratio_q"], rel=0.5)


@settings(max_examples=60)
@given(st.lists(st.integers(0, 1), min_size=1, max_size=30))
def test_fourth_moment_brute(bits):
    seq = WeightedSequence.from_values(bits)
    idx = [i for i, b in enumerate(bits) if b]
    brute = sum(1 for a, b, c, d in itertools.product(idx, repeat=4) if a + b == c + d)
    assert check_restriction(seq).observed["fourth_moment"] == brute


def test_level_set_monotone():
    rng = np.random.default_rng(8)
    for _ in range(20):
        seq = WeightedSequence.from_values(rng.random(300) * 3)
        grid = dft_grid(seq).values
        ms = [level_set_measure(grid, 300, d) for d in np.linspace(0.01, 1, 40)]
        assert all(ms[i + 1] <= ms[i] for i in range(len(ms) - 1))


# -- regularity ----------------------------------------------------------

def test_spf():
    spf = smallest_prime_factor(30)
    assert spf[2:11].tolist() == [2, 3, 2, 5, 2, 7, 2, 3, 2]
    assert spf[29] == 29 and spf[25] == 5


def test_regularity_ones_parity():
    N, beta = 200, 0.49
    assert primorial(1 / beta) == 2
    brute = sum(1 for u in range(1, N + 1) for v in range(1, N + 1)
                if u <= beta * N and v >= (1 - beta) * N and (v - u) % 2 == 1)
    assert regularity_sum(np.ones(N), beta) == brute


def test_regularity_zero():
    rep = check_regularity(WeightedSequence.from_values(np.zeros(100)), 0.3, 0.01)
    assert rep.observed["S"] == 0 and rep.verdict == "fail"


def test_regularity_rejects_beta():
    with pytest.raises(InvalidArgument):
        check_regularity(ones(10), 0.5, 0.1)
    with pytest.raises(InvalidArgument):
        check_regularity(ones(10), 0.0, 0.1)


def test_regularity_vs_brute():
    rng = np.random.default_rng(9)
    for _ in range(40):
        N = int(rng.integers(2, 301))
        beta = float(rng.uniform(0.02, 0.49))
        f = rng.random(N)
        assert regularity_sum(f, beta) == pytest.approx(regularity_sum_brute(f, beta), abs=1e-9)


def test_regularity_w_tricked():
    ctx = build_w_context(3, 1, 4000, z_override=10)
    a, _ = build_sequences(ctx)
    rep = check_regularity(a, 0.001 / 50 * 1000, 0.0)
    assert rep.verdict == "report-only"
    assert rep.observed["parity"]["ok"]


@pytest.mark.parametrize("w,b", [(3, 1), (5, 1), (5, 49), (7, 1), (7, 121)])
def test_parity_flip(w, b):
    out = parity_flip_check(build_w_context(w, b, 100))
    assert out["ok"] and out["checked"] > 0
