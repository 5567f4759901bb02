"""Program enumeration: the M lower bound, Mn normalization, and KM."""

import math
from fractions import Fraction
from itertools import product

import pytest

from mincomp.enumerator import approx_km, approx_m, build_mn
from mincomp.errors import InvalidBudgetError, NoProgramFoundError
from mincomp.machine import run_trm1
from mincomp.rng import SplitMix64


def brute_force_m(x: str, side: str, max_len: int, max_steps: int):
    """Independent route: run every program through the plain interpreter and
    apply the minimal-program rule by direct prefix checks."""

    def qualifies(p: str) -> bool:
        r = run_trm1(p, side, max_steps) if p else run_trm1("", side, max_steps)
        return r.consumed == len(p) and len(r.output) >= len(x) and r.output.startswith(x)

    total = Fraction(0)
    count = 0
    for nops in range(0, max_len // 3 + 1):
        for ops in product(range(8), repeat=nops):
            p = "".join(format(o, "03b") for o in ops)
            if not qualifies(p):
                continue
            if any(qualifies(p[:j]) for j in range(0, len(p), 3)):
                continue  # a proper prefix already qualifies
            total += Fraction(1, 2 ** len(p))
            count += 1
    return total, count


def test_matches_brute_force_enumeration():
    for side in ("", "1", "1011"):
        for x in ("", "0", "1", "00", "01", "111", "010", "1011"):
            expect_value, expect_count = brute_force_m(x, side, 9, 50)
            got = approx_m(x, side, max_len=9, max_steps=50)
            assert got.value == expect_value, (x, side)
            assert got.programs_counted == expect_count, (x, side)


def test_single_zero_has_short_witness():
    est = approx_m("0", max_len=18, max_steps=1000)
    assert est.value >= Fraction(1, 64)
    assert est.shortest_len == 3  # OUT0 alone, stopped by exhaustion


def test_golden_m_lower_bound():
    # regression fixture from the shipped machine at L=18, S=1000
    assert approx_m("0", max_len=18, max_steps=1000).value == Fraction(52283, 131072)


def test_semimeasure_level_sum():
    s = sum(
        approx_m(format(i, "03b"), max_len=18, max_steps=1000).value
        for i in range(8)
    )
    assert s <= 1
    assert s == Fraction(94935, 262144)  # regression fixture


def test_value_nondecreasing_in_budgets():
    for x in ("0", "01", "110"):
        small = approx_m(x, max_len=9, max_steps=30).value
        more_len = approx_m(x, max_len=12, max_steps=30).value
        more_steps = approx_m(x, max_len=9, max_steps=300).value
        assert more_len >= small
        assert more_steps >= small


def test_witness_lower_bound_for_each_qualifying_program():
    # every individually verified qualifying program contributes its weight
    for x, p in (("0", "000"), ("1", "001"), ("11", "001101")):
        r = run_trm1(p, "", 100)
        assert r.consumed == len(p) and r.output.startswith(x)
        assert approx_m(x, max_len=18, max_steps=1000).value >= Fraction(1, 2 ** len(p))


def test_budget_validation():
    with pytest.raises(InvalidBudgetError):
        approx_m("0", max_len=10, max_steps=100)
    with pytest.raises(InvalidBudgetError):
        approx_m("0", max_len=9, max_steps=0)
    with pytest.raises(InvalidBudgetError):
        build_mn(0)


def test_km_upper_bound_and_error():
    assert approx_km("0", max_len=18, max_steps=1000) <= 6
    with pytest.raises(NoProgramFoundError):
        approx_km("10011010110101", max_len=9, max_steps=100)


def test_km_monotone_under_extension():
    for length in range(4):
        for i in range(2 ** length):
            x = format(i, f"0{length}b") if length else ""
            mx = approx_m(x, max_len=15, max_steps=200).value
            for b in "01":
                assert approx_m(x + b, max_len=15, max_steps=200).value <= mx


def test_periodic_beats_random_strings():
    km_periodic = approx_km("01" * 8, max_len=18, max_steps=1000)
    gen = SplitMix64(5)
    wins = 0
    for _ in range(100):
        x = "".join(str(gen.bit(0.5)) for _ in range(16))
        try:
            km_rand = approx_km(x, max_len=18, max_steps=1000)
        except NoProgramFoundError:
            km_rand = math.inf
        wins += km_periodic < km_rand
    assert wins >= 95


def test_mn_table_basics():
    table = build_mn(4, max_len=18, max_steps=1000)
    assert table[""] == 1
    for length in range(4):
        for i in range(2 ** length):
            x = format(i, f"0{length}b") if length else ""
            assert table[x + "0"] + table[x + "1"] == table[x]


def test_mn_golden_values():
    table = build_mn(4, max_len=18, max_steps=1000)
    assert table["0000"] == Fraction(14002169, 34758906)
    assert table["0101"] == Fraction(229, 3032)
    assert table["0000"] > table["0101"]


def test_mn_fallback_splits_evenly():
    # a tiny budget leaves deep nodes without any program: mass splits evenly
    table = build_mn(3, max_len=3, max_steps=10)
    assert table.fallback
    x = sorted(table.fallback)[0]
    assert table[x + "0"] == table[x + "1"] == table[x] / 2
    for length in range(1, 4):
        assert sum(table[format(i, f"0{length}b")] for i in range(2 ** length)) == 1
