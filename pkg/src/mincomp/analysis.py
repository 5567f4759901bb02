"""Exact no-free-lunch computations, the simplicity-prior free lunch,
entropy identities, and the loss-bound formulas.

Expected losses over whole function classes are computed by full enumeration
with exact rational arithmetic, so equalities hold with no tolerance.  An
algorithm here is any callable

    algorithm(features, visible, test_positions, n_labels) -> predictions

receiving only the training labels (`visible` maps 1-based position to
label); it must return one predicted label per test position, in order.
All logs are base 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from types import MappingProxyType
from typing import Callable, Mapping, Sequence

from .enumerator import build_mn
from .errors import (
    DegenerateDenominatorError,
    DomainError,
    EmptySubsetError,
    EmptyTestSetError,
    LengthMismatchError,
    OutOfRangeError,
    TooLargeError,
)
from .model import Mask, prefix_mask, split_from_mask

Algorithm = Callable[
    [tuple[str, ...], dict[int, int], tuple[int, ...], int], Sequence[int]
]

ENUMERATION_GUARD = 10 ** 7


# ---------------------------------------------------------------------------
# Entropy and the coding-rate identities
# ---------------------------------------------------------------------------


def entropy(theta: float) -> float:
    """Binary entropy in bits; 0 at both endpoints."""
    if not 0.0 <= theta <= 1.0:
        raise DomainError(f"entropy needs theta in [0,1], got {theta}")
    if theta in (0.0, 1.0):
        return 0.0
    return -(theta * math.log2(theta) + (1.0 - theta) * math.log2(1.0 - theta))


def indicator_code_rate(theta_bar: float, alpha: float) -> float:
    """Per-symbol ideal code rate for the correct-test indicator string.

    With training fraction theta_bar and test error rate alpha, the indicator
    of "test position classified correctly" can be coded at this rate: the
    positions where truth and model disagree are free, and the rest is a
    biased-coin subsequence of relative weight w = theta_bar +
    (1-theta_bar)(1-alpha) carrying entropy H(theta_bar / w).
    """
    if not 0.0 <= theta_bar <= 1.0 or not 0.0 <= alpha <= 1.0:
        raise DomainError(f"arguments must be in [0,1], got {theta_bar}, {alpha}")
    w = theta_bar + (1.0 - theta_bar) * (1.0 - alpha)
    if w == 0.0:
        return 0.0
    return w * entropy(min(1.0, theta_bar / w))


def entropy_inequality_chain(theta: float, alpha: float) -> tuple[float, float, float]:
    """The three quantities of the entropy inequality, in order.

    Returns (0, alpha*(1-theta)*log2(1/(1-theta)), H(theta) - rate(theta, alpha));
    callers assert lower <= middle <= upper.  Equality of middle and upper
    holds only at alpha = 0 or theta in {0, 1}.
    """
    if not 0.0 <= theta <= 1.0 or not 0.0 <= alpha <= 1.0:
        raise DomainError(f"arguments must be in [0,1], got {theta}, {alpha}")
    middle = 0.0 if theta == 1.0 else alpha * (1.0 - theta) * math.log2(1.0 / (1.0 - theta))
    upper = entropy(theta) - indicator_code_rate(theta, alpha)
    return 0.0, middle, upper


# ---------------------------------------------------------------------------
# The correct-test indicator and its counting identities
# ---------------------------------------------------------------------------


def correct_test_indicator(y: str, y_hat: str, mask: Mask) -> str:
    """Indicator string: 1 where the position is test and y agrees with y_hat."""
    if len(y) != len(y_hat) or len(y) != mask.n:
        raise LengthMismatchError(
            f"lengths disagree: {len(y)}, {len(y_hat)}, mask {mask.n}"
        )
    return "".join(
        "1" if chi == "0" and a == b else "0"
        for chi, a, b in zip(mask.bits, y, y_hat)
    )


def indicator_count_identities(y: str, y_hat: str, mask: Mask) -> tuple[bool, bool, bool, bool]:
    """Check the four exact counting identities tying the indicator to loss.

    With alpha the fraction of test positions where y_hat errs and theta_bar
    the training fraction: the indicator has (1-alpha)(1-theta_bar)n ones and
    (1-(1-alpha)(1-theta_bar))n zeros, disagreement forces a zero, and the
    xor of y with a training-consistent y_hat has alpha(1-theta_bar)n ones.
    """
    psi = correct_test_indicator(y, y_hat, mask)
    test = split_from_mask(mask).test
    if not test:
        raise EmptyTestSetError("all positions are training positions")
    n = mask.n
    wrong = sum(1 for pos in test if y[pos - 1] != y_hat[pos - 1])
    alpha = Fraction(wrong, len(test))
    theta_bar = mask.theta_bar
    ones = psi.count("1")
    zeros = psi.count("0")
    xor_ones = sum(1 for a, b in zip(y, y_hat) if a != b)
    return (
        ones == (1 - alpha) * (1 - theta_bar) * n,
        zeros == (1 - (1 - alpha) * (1 - theta_bar)) * n,
        all(psi[i] == "0" for i in range(n) if y[i] != y_hat[i]),
        xor_ones == alpha * (1 - theta_bar) * n,
    )


# ---------------------------------------------------------------------------
# Expected loss over function classes
# ---------------------------------------------------------------------------


def _lex_features(size_x: int) -> tuple[str, ...]:
    k = max(1, (size_x - 1).bit_length())
    return tuple(format(i, f"0{k}b") for i in range(size_x))


def _run_on_function(
    algorithm: Algorithm,
    features: tuple[str, ...],
    f: Sequence[int],
    train: tuple[int, ...],
    test: tuple[int, ...],
    n_labels: int,
) -> int:
    """Number of test positions the algorithm gets wrong on function f."""
    visible = {pos: f[pos - 1] for pos in train}
    preds = algorithm(features, visible, test, n_labels)
    if len(preds) != len(test):
        raise LengthMismatchError(
            f"algorithm returned {len(preds)} predictions for {len(test)} test positions"
        )
    return sum(1 for p, pos in zip(preds, test) if p != f[pos - 1])


def nfl_expected_loss(
    algorithm: Algorithm, size_x: int, size_y: int, mask: Mask
) -> Fraction:
    """Expected loss under the uniform distribution over all functions X -> Y.

    Enumerates all size_y**size_x functions exactly; the result is
    (size_y - 1)/size_y for every algorithm.
    """
    if size_x < 1 or size_y < 2:
        raise OutOfRangeError(f"need size_x >= 1 and size_y >= 2")
    if size_y ** size_x > ENUMERATION_GUARD:
        raise TooLargeError(
            f"{size_y}**{size_x} functions exceed the {ENUMERATION_GUARD} guard"
        )
    if mask.n != size_x:
        raise LengthMismatchError(f"mask has {mask.n} bits for |X| = {size_x}")
    split = split_from_mask(mask)
    if not split.test:
        raise EmptyTestSetError("mask is all ones")
    features = _lex_features(size_x)
    wrong_total = 0
    count = 0
    for f in product(range(size_y), repeat=size_x):
        wrong_total += _run_on_function(
            algorithm, features, f, split.train, split.test, size_y
        )
        count += 1
    return Fraction(wrong_total, count * len(split.test))


@dataclass(frozen=True)
class PriorTable:
    """Nonnegative rational weight for every n-bit label string."""

    n: int
    weights: Mapping[str, Fraction]

    @property
    def total(self) -> Fraction:
        return sum(self.weights.values(), Fraction(0))


def uniform_prior(n: int) -> PriorTable:
    w = Fraction(1, 2 ** n)
    return PriorTable(
        n=n,
        weights=MappingProxyType(
            {format(i, f"0{n}b"): w for i in range(2 ** n)}
        ),
    )


def point_mass_prior(labels: str) -> PriorTable:
    n = len(labels)
    weights = {format(i, f"0{n}b"): Fraction(0) for i in range(2 ** n)}
    weights[labels] = Fraction(1)
    return PriorTable(n=n, weights=MappingProxyType(weights))


def mn_prior(n: int, max_len: int = 18, max_steps: int = 1000) -> PriorTable:
    """Prior proportional to the normalized machine measure of the label string."""
    table = build_mn(n, "", max_len, max_steps)
    return PriorTable(
        n=n,
        weights=MappingProxyType(
            {format(i, f"0{n}b"): table[format(i, f"0{n}b")] for i in range(2 ** n)}
        ),
    )


def expected_loss(prior: PriorTable, algorithm: Algorithm, mask: Mask) -> Fraction:
    """Prior-weighted expected loss, normalized when the prior is subnormal."""
    if 2 ** prior.n > ENUMERATION_GUARD:
        raise TooLargeError(f"2**{prior.n} functions exceed the guard")
    if mask.n != prior.n:
        raise LengthMismatchError(f"mask has {mask.n} bits for n = {prior.n}")
    split = split_from_mask(mask)
    if not split.test:
        raise EmptyTestSetError("mask is all ones")
    features = _lex_features(prior.n)
    acc = Fraction(0)
    for labels in sorted(prior.weights):
        w = prior.weights[labels]
        if w == 0:
            continue
        f = tuple(int(c) for c in labels)
        wrong = _run_on_function(algorithm, features, f, split.train, split.test, 2)
        acc += w * Fraction(wrong, len(split.test))
    total = prior.total
    return acc / total if total < 1 else acc


def better_constant(
    subset: Callable[[str], bool], prior: PriorTable, mask: Mask
) -> int:
    """The constant label (0 or 1) with smaller prior-weighted loss on a subset.

    Ties go to 0.  The winner's weighted loss is at most half the subset's
    prior mass, because the two constants' losses sum to 1 on every function.
    """
    split = split_from_mask(mask)
    if not split.test:
        raise EmptyTestSetError("mask is all ones")
    t = len(split.test)
    mass = Fraction(0)
    loss0 = Fraction(0)
    for labels in prior.weights:
        if not subset(labels):
            continue
        w = prior.weights[labels]
        mass += w
        ones = sum(1 for pos in split.test if labels[pos - 1] == "1")
        loss0 += w * Fraction(ones, t)
    if mass == 0:
        raise EmptySubsetError("subset carries no prior mass")
    loss1 = mass - loss0
    return 0 if loss0 <= loss1 else 1


@dataclass(frozen=True)
class FreeLunchResult:
    """Outcome of the simplicity-prior experiment."""

    expected: Fraction
    margin: Fraction  # 1/2 - expected
    constant_for_rest: int
    mask: Mask
    prior: PriorTable


def free_lunch_experiment(
    m: int,
    test_count: int,
    max_len: int = 18,
    max_steps: int = 1000,
    uniform: bool = False,
) -> FreeLunchResult:
    """Expected loss of the all-ones-else-best-constant algorithm under the
    machine prior on functions over B^m, with the last `test_count` features
    held out.

    The algorithm predicts 1 everywhere when every training label is 1;
    otherwise it predicts the constant with smaller prior-weighted loss over
    the remaining functions.  Under the machine prior the expected loss is
    below 1/2; under the uniform control it is exactly 1/2.
    """
    if m > 4:
        raise TooLargeError(f"2**(2**{m}) label strings exceed the guard")
    n = 2 ** m
    if not 1 <= test_count < n:
        raise OutOfRangeError(f"need 1 <= test_count < {n}, got {test_count}")
    mask = prefix_mask(n, n - test_count)
    train = split_from_mask(mask).train
    prior = uniform_prior(n) if uniform else mn_prior(n, max_len, max_steps)

    def in_rest(labels: str) -> bool:
        return any(labels[pos - 1] == "0" for pos in train)

    constant = better_constant(in_rest, prior, mask)

    def algorithm(features, visible, test, n_labels):
        if all(visible[pos] == 1 for pos in visible):
            return [1] * len(test)
        return [constant] * len(test)

    value = expected_loss(prior, algorithm, mask)
    return FreeLunchResult(
        expected=value,
        margin=Fraction(1, 2) - value,
        constant_for_rest=constant,
        mask=mask,
        prior=prior,
    )


# ---------------------------------------------------------------------------
# Loss bounds
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BoundParams:
    """Machine-dependent constants of the loss bounds.

    All default to 0 so bound-shape studies are constant-free; the
    ILLUSTRATIVE profile uses 300 everywhere, a representative magnitude for
    the shortest programs computing the simple recodings the bounds rely on.
    """

    c1: float = 0.0
    c2: float = 0.0
    c3: float = 0.0
    c: float = 0.0


ILLUSTRATIVE = BoundParams(c1=300.0, c2=300.0, c3=300.0, c=300.0)


def _bound_denominator(n: int, theta: float, c1: float) -> float:
    u = 1.0 - theta - c1 / n
    v = 1.0 - theta + c1 / n
    if u <= 0.0 or v <= 0.0 or v >= 1.0:
        raise DegenerateDenominatorError(
            f"denominator not positive for n={n}, theta={theta}, c1={c1}"
        )
    return n * u * math.log2(1.0 / v)


def loss_bound_km_features(
    km_f: float, km_x: float, n: int, theta: float, params: BoundParams = BoundParams()
) -> float:
    """Loss bound whose numerator pays for the feature string's code length.

    (2*km_f + km_x + c2 + c3) / (n (1-theta-c1/n) log2 (1-theta+c1/n)^-1).
    Values above 1 are returned as-is: the bound is then vacuous.
    """
    return (2.0 * km_f + km_x + params.c2 + params.c3) / _bound_denominator(
        n, theta, params.c1
    )


def loss_bound_log_size(
    km_f: float, n: int, size_x: int, theta: float, params: BoundParams = BoundParams()
) -> float:
    """Loss bound paying 2(log2 |X| + log2 log2 |X|) instead of the feature cost.

    Preferable whenever the feature string's code length exceeds that term.
    """
    if size_x < 2:
        raise DomainError(f"need |X| >= 2 for log log, got {size_x}")
    extra = 2.0 * (math.log2(size_x) + math.log2(math.log2(size_x)))
    return (2.0 * km_f + extra + params.c) / _bound_denominator(n, theta, params.c1)


def small_theta_approx(km_f: float, n: int, theta: float) -> float:
    """Small-theta limit of the zero-constant bounds: 2*km_f*ln(2)/(n*theta).

    The natural-units rule of thumb 2*km_f/(n*theta) differs from this exact
    base-2 limit by the factor ln 2; both are reported in the bounds output.
    """
    if theta <= 0.0:
        raise DomainError(f"need theta > 0, got {theta}")
    return 2.0 * km_f * math.log(2.0) / (n * theta)
