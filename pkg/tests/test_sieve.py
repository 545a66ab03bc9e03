import math
from fractions import Fraction

import numpy as np
import pytest

from hua5.arith import InvalidArgument, is_prime, lcm, phi
from hua5.residues import build_w_context
from hua5.sieve import (WeightedSequence, admissible_divisors, build_sequences,
                        normalization_sum, normalization_sum_float, selberg_weights,
                        sequence_prefactor, squarefree_divisors_of_P, t_sum, t_sum_bound_ratio)


def brute_T(q, sieve):
    total = Fraction(0)
    for d1, r1 in sieve.weights.items():
        for d2, r2 in sieve.weights.items():
            L = d1 * d2 // math.gcd(d1, d2)
            if L % q == 0:
                total += r1 * r2 / L
    return total


def test_level_two():
    s = selberg_weights(2, 24)
    assert s.weights == {1: 1} and s.J == 1
    assert t_sum(1, s) == 1


def test_z10_w24():
    s = selberg_weights(10, 24)
    assert s.support == [1, 5, 7]
    assert s.J == Fraction(17, 12) == 1 + Fraction(1, 4) + Fraction(1, 6)
    assert t_sum(5, s) == brute_T(5, s)
    assert t_sum(5, s) == Fraction(-45, 289)


def test_rejects_low_level():
    with pytest.raises(InvalidArgument):
        selberg_weights(1, 24)


@pytest.mark.parametrize("z,W", [(10, 24), (40, 24), (60, 120), (97, 840)])
def test_weights_minimize_quadratic_form(z, W):
    # oracle: minimize sum rho rho / [d1,d2] subject to rho_1 = 1 by linear algebra
    s = selberg_weights(z, W)
    ds = s.support
    G = np.array([[1 / lcm(a, b) for b in ds] for a in ds])
    x = np.concatenate([[1.0], np.linalg.solve(G[1:, 1:], -G[1:, 0])])
    assert np.allclose(x, [float(s.weights[d]) for d in ds], atol=1e-10)
    assert abs(x @ G @ x - 1 / float(s.J)) < 1e-12


def test_weight_properties_sweep():
    for W in (24, 120, 840):
        for z in range(2, 120):
            s = selberg_weights(z, W)
            assert s.weights[1] == 1
            assert all(abs(r) <= 1 for r in s.weights.values())
            assert all(d < z and math.gcd(d, W) == 1 for d in s.weights)


def test_t1_times_j_exact():
    for W in (24, 120):
        for z in range(2, 51):
            s = selberg_weights(z, W)
            assert t_sum(1, s) * s.J == 1


def test_t_sum_restricted_partition():
    # the k-restricted sums over k | q, k < q plus the k = q part give sum_{all pairs}
    s = selberg_weights(30, 24)
    q = 35
    full = Fraction(0)
    for d1, r1 in s.weights.items():
        for d2, r2 in s.weights.items():
            full += r1 * r2 / lcm(d1, d2)
    parts = sum(t_sum(q, s, restrict_k=k) for k in (1, 5, 7))
    rest = sum((r1 * r2 / lcm(d1, d2) for d1, r1 in s.weights.items()
                for d2, r2 in s.weights.items() if math.gcd(q, lcm(d1, d2) ** 2) == q),
               Fraction(0))
    assert parts + rest == full


def test_t_sum_errors():
    s = selberg_weights(30, 24)
    with pytest.raises(InvalidArgument):
        t_sum(3, s)      # 3 | W
    with pytest.raises(InvalidArgument):
        t_sum(31, s)     # 31 >= z
    with pytest.raises(InvalidArgument):
        t_sum(35, s, restrict_k=35)


def test_t_sum_shape_bounded():
    s = selberg_weights(40, 24)
    ratios = [t_sum_bound_ratio(q, s) for q in squarefree_divisors_of_P(s, 40 * 40)]
    assert max(ratios) < 10


def test_j_grows_like_log():
    prev = None
    for z in (100, 1000, 10000):
        J = normalization_sum_float(z, 24)
        ratio = J / ((phi(24) / 24) * math.log(z))
        assert 1 < ratio < 2
        if prev is not None:
            assert ratio < prev
        prev = ratio
    assert float(normalization_sum(100, 24)) == pytest.approx(normalization_sum_float(100, 24))


# -- sequences -----------------------------------------------------------

def test_sequence_support_examples():
    ctx = build_w_context(3, 1, 50, z_override=5)
    a, v = build_sequences(ctx)
    assert a.values[0] > 0  # 24 + 1 = 25 = 5^2, 5 >= z
    assert a.values[2] == 0 and v.values[2] == 0  # 73 is not a square
    ctx6 = build_w_context(3, 1, 50, z_override=6)
    a6, _ = build_sequences(ctx6)
    assert a6.values[0] == 0


def test_sequence_values_oracle():
    ctx = build_w_context(5, 49, 3000, z_override=20)
    s = selberg_weights(20, ctx)
    a, v = build_sequences(ctx, s)
    pref = 2 * phi(120) * math.log(20) / (120 * ctx.sigma_b)
    assert pref == pytest.approx(sequence_prefactor(ctx))
    for n in range(1, 3001):
        m = 120 * n + 49
        x = math.isqrt(m)
        if x * x != m:
            assert a.values[n - 1] == 0 and v.values[n - 1] == 0
            continue
        want_a = pref * x if (is_prime(x) and x >= 20) else 0.0
        sieve_sum = sum(float(r) for d, r in s.weights.items() if x % d == 0)
        assert a.values[n - 1] == pytest.approx(want_a)
        assert v.values[n - 1] == pytest.approx(pref * x * sieve_sum ** 2, abs=1e-9)


@pytest.mark.parametrize("w,b,z", [(3, 1, 10), (5, 1, 30), (5, 49, 50), (7, 1, 100)])
def test_majorant_dominates(w, b, z):
    ctx = build_w_context(w, b, 20000, z_override=z)
    a, v = build_sequences(ctx)
    assert np.all(a.values >= 0) and np.all(v.values >= 0)
    assert np.all(v.values - a.values >= -1e-12)
    on = a.values > 0
    assert np.array_equal(v.values[on], a.values[on])


def test_sequence_mismatch():
    ctx = build_w_context(3, 1, 100, z_override=10)
    with pytest.raises(InvalidArgument):
        build_sequences(ctx, selberg_weights(11, 24))


def test_weighted_sequence_io(tmp_path):
    seq = WeightedSequence.from_values([0.0, 1.5, 2.0])
    seq.to_csv(tmp_path / "s.csv")
    lines = (tmp_path / "s.csv").read_text().splitlines()
    assert lines[0] == "n,value" and len(lines) == 4 and lines[2].startswith("2,")
    seq.to_binary(tmp_path / "s.npy")
    assert np.load(tmp_path / "s.npy").tolist() == [0.0, 1.5, 2.0]
    with pytest.raises(InvalidArgument):
        WeightedSequence(3, [1, 2, 3], role="bogus")


def test_on_range_and_offsets():
    seq = WeightedSequence(3, [1.0, 2.0, 3.0, 4.0], start=0)
    assert seq.on_range(1, 5).tolist() == [2.0, 3.0, 4.0, 0.0, 0.0]
    assert seq.truncated(2).values.tolist() == [2.0, 3.0]


def test_admissible_divisors():
    assert admissible_divisors(20, 24) == [1, 5, 7, 11, 13, 17, 19]
