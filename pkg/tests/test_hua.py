import math

import pytest

from hua5.arith import is_prime
from hua5.hua import (CongruenceError, HuaReport, SquareSumTable, TargetTooSmall, prime_squares,
                      r5_nested, r5_single, scan_window, verify_hua, verify_witness)


@pytest.fixture(scope="module")
def table():
    return SquareSumTable(20000)


def test_prime_squares():
    assert prime_squares(50).tolist() == [4, 9, 25, 49]


def test_small_targets(table):
    assert r5_single(29) == r5_nested(29) == table.r5(29) == 0
    assert r5_single(53) == r5_nested(53) == table.r5(53) == 0
    assert table.r5(125) >= 1
    # oracle: every ordered quintuple from {4, 9, 25, 49}
    from itertools import product
    assert sum(1 for t in product([4, 9, 25, 49], repeat=5) if sum(t) == 53) == 0


def test_r5_methods_agree(table):
    for M in list(range(20, 400)) + [1205, 5549, 19997]:
        assert r5_single(M) == table.r5(M)
    for M in range(20, 2000, 7):
        assert r5_nested(M) == table.r5(M)


def test_witness_descent(table):
    for M in range(125, 20000, 24 * 37):
        p = table.witness(M)
        assert p is not None and verify_witness(M, p)
    assert table.witness(29) is None


def test_verify_witness():
    assert verify_witness(125, [5, 5, 5, 5, 5])
    assert not verify_witness(125, [5, 5, 5, 5])
    assert not verify_witness(126, [5, 5, 5, 5, 5])
    assert not verify_witness(25 * 4 + 1, [5, 5, 5, 5, 1])
    assert verify_witness(125, [5, 5, 5, 5, 5], [1] * 5, 24)


def test_scan_small(table):
    out = scan_window(20, 2000, table)
    assert out["exceptions"] == [29, 53]
    assert out["witness_failures"] == []
    assert out["checked"] == len(range(29, 2001, 24))


def test_verify_125():
    rep = verify_hua(125)
    assert rep.W == 24 and rep.W * rep.N + sum(rep.b_shifts) == 125
    assert rep.brute_count >= 1
    p = rep.witness["primes"]
    assert sum(x * x for x in p) == 125 and all(is_prime(x) for x in p)
    assert rep.witness["verified"] and rep.consistent


def test_verify_errors():
    with pytest.raises(CongruenceError):
        verify_hua(126)
    with pytest.raises(TargetTooSmall):
        verify_hua(5)


def test_verify_w5_weighted_witness():
    M = 5 + 24 * 400
    rep = verify_hua(M, w=5, z_override=10)
    assert rep.W == 120 and rep.consistent
    assert rep.weighted_count > 0 and rep.witness["source"] == "weighted"
    assert all((p * p - b) % 120 == 0 for p, b in zip(rep.witness["primes"], rep.b_shifts))
    assert {r.condition for r in rep.condition_reports} == {"mean", "pseudorandom", "restriction",
                                                            "regularity"}


def test_report_dict_roundtrip():
    rep = verify_hua(5 + 24 * 100, z_override=7)
    assert HuaReport.from_dict(rep.to_dict()) == rep


def test_consistency_flags():
    rep = verify_hua(125)
    bad = HuaReport.from_dict({**rep.to_dict(), "N": rep.N + 1})
    assert not bad.consistent
