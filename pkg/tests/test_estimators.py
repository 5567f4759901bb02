"""KT coding lengths and the estimator interface."""

import math

import pytest

from mincomp.enumerator import approx_km
from mincomp.errors import NoProgramFoundError, OutOfRangeError
from mincomp.estimators import (
    EstimatorSpec,
    conditional_complexity,
    enum_estimator,
    function_complexity,
    kt_code_length,
    kt_estimator,
    parse_estimator,
)
from mincomp.model import Problem, first_bit_problem
from mincomp.rng import SplitMix64


def kt_oracle_r0(target: str, warm: str = "") -> float:
    """One-line product-of-probabilities oracle for the order-0 rule."""
    c = [warm.count("0"), warm.count("1")]
    prob = 1.0
    for ch in target:
        b = ch == "1"
        prob *= (c[b] + 0.5) / (c[0] + c[1] + 1)
        c[b] += 1
    return -math.log2(prob)


def test_empty_target_costs_nothing():
    assert kt_code_length("") == 0.0
    assert kt_code_length("", warm="0110", order=2) == 0.0


def test_first_symbol_is_one_bit():
    assert kt_code_length("0") == 1.0
    assert kt_code_length("1") == 1.0


def test_two_zeros_closed_form():
    assert kt_code_length("00") == pytest.approx(-math.log2(0.5 * 0.75), abs=1e-12)
    assert kt_code_length("00") == pytest.approx(1.415037499278844, abs=1e-12)


def test_matches_r0_oracle_on_random_strings():
    gen = SplitMix64(77)
    for _ in range(100):
        warm = "".join(str(gen.bit(0.5)) for _ in range(gen.below(20)))
        target = "".join(str(gen.bit(0.5)) for _ in range(1 + gen.below(30)))
        assert kt_code_length(target, warm, 0) == pytest.approx(
            kt_oracle_r0(target, warm), abs=1e-9
        )


def test_nonnegative_and_zero_iff_empty():
    gen = SplitMix64(13)
    for _ in range(100):
        t = "".join(str(gen.bit(0.5)) for _ in range(1 + gen.below(20)))
        assert kt_code_length(t, "", gen.below(3)) > 0.0


def test_chain_rule_of_sequential_coding():
    # float sums are associated differently on the two sides, hence the 1e-9
    gen = SplitMix64(21)
    for _ in range(100):
        r = gen.below(3)
        warm = "".join(str(gen.bit(0.5)) for _ in range(gen.below(16)))
        u = "".join(str(gen.bit(0.5)) for _ in range(gen.below(16)))
        v = "".join(str(gen.bit(0.5)) for _ in range(gen.below(16)))
        whole = kt_code_length(u + v, warm, r)
        split = kt_code_length(u, warm, r) + kt_code_length(v, warm + u, r)
        assert whole == pytest.approx(split, abs=1e-9)


@pytest.mark.parametrize("order", [0, 1, 2])
def test_kt_is_a_proper_sequential_probability(order):
    for m in (1, 4, 8, 12):
        total = sum(
            2.0 ** -kt_code_length(format(i, f"0{m}b"), "", order)
            for i in range(2 ** m)
        )
        assert abs(total - 1.0) <= 1e-9


def test_constant_run_closed_form_and_sublinearity():
    for n in (8, 64, 256):
        closed = sum(-math.log2((i + 0.5) / (i + 1)) for i in range(n))
        assert kt_code_length("0" * n) == pytest.approx(closed, abs=1e-9)
        assert kt_code_length("0" * n) <= 0.5 * math.log2(n) + 2.0
    # against a balanced warm the cost is linear, not sublinear (see ledger);
    # it still never exceeds one bit per symbol by more than rounding
    p = first_bit_problem(3)
    assert function_complexity(p, "0" * 8, kt_estimator(0)) <= 8 * 1.01


def test_order_validation():
    with pytest.raises(OutOfRangeError):
        kt_code_length("0", order=-1)


def test_conditional_repeat_is_cheaper():
    y = "0110" * 32
    assert conditional_complexity(y, y, kt_estimator(1)) < conditional_complexity(
        y, "", kt_estimator(1)
    )


def test_conditional_empty_target():
    assert conditional_complexity("", "101", kt_estimator(2)) == 0.0


def test_enum_conditional_copies_side():
    y = "10110100"
    est = enum_estimator(L=18, S=1000)
    assert conditional_complexity(y, y, est) <= 6.0  # CPY,LOOP witness
    assert conditional_complexity(y, y, est) == approx_km(y, side=y, max_len=18, max_steps=1000)


def test_conditional_unconditional_coincide_on_empty_side():
    est = enum_estimator(L=15, S=500)
    assert conditional_complexity("010", "", est) == approx_km("010", max_len=15, max_steps=500)


def test_function_complexity_structured_vs_random_labels():
    p = first_bit_problem(4)
    est = kt_estimator(1)
    structured = function_complexity(p, p.labels, est)
    gen = SplitMix64(31)
    wins = 0
    for _ in range(100):
        random_labels = "".join(str(gen.bit(0.5)) for _ in range(16))
        wins += structured < function_complexity(p, random_labels, est)
    assert wins >= 95


def test_function_complexity_single_point():
    p = Problem(k=3, features=("101",), labels="1")
    est = kt_estimator(0)
    # warm is the 3-bit feature string; cost is -log2 p(1 | its counts)
    expect = -math.log2((2 + 0.5) / (3 + 1))
    assert function_complexity(p, "1", est) == pytest.approx(expect, abs=1e-12)
    with pytest.raises(OutOfRangeError):
        function_complexity(p, "11", est)


def test_enum_conditional_no_program():
    with pytest.raises(NoProgramFoundError):
        conditional_complexity("10011010110101", "", enum_estimator(L=9, S=100))


def test_estimator_spec_strings():
    assert str(parse_estimator("kt:r=2")) == "kt:r=2"
    assert str(parse_estimator("enum:L=18,S=1000")) == "enum:L=18,S=1000"
    assert str(parse_estimator("enumerator:S=1000,L=18")) == "enum:L=18,S=1000"
    assert parse_estimator("kt:r=2") == kt_estimator(2)
    with pytest.raises(ValueError):
        parse_estimator("zip:x=1")
    with pytest.raises(ValueError):
        EstimatorSpec("kt", (("r", -1),))
    with pytest.raises(ValueError):
        EstimatorSpec("enum", (("L", 9),))
