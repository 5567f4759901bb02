"""Minimum-complexity transductive classification and baseline predictors.

The main classifier picks, among all label completions that agree with the
training data, one of minimum code length under the configured estimator,
and answers test queries from it.  The argmin is realized by exhaustive,
greedy, or beam search.  Search never sees a test label: the public entry
point strips them before the search core runs.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction

from . import analysis
from .enumerator import approx_m
from .errors import (
    DegenerateDenominatorError,
    DomainError,
    EmptyTestSetError,
    ExhaustiveTooLargeError,
    NoProgramFoundError,
)
from .estimators import EstimatorSpec, conditional_complexity, function_complexity
from .model import Mask, Problem, loss, split_from_mask
from .rng import SplitMix64

BASELINE_KINDS = ("constant0", "constant1", "best_constant_on_train", "random")


@dataclass(frozen=True)
class SearchStrategy:
    """How to search the space of consistent completions."""

    kind: str  # exhaustive | greedy | beam
    width: int = 1
    exhaustive_limit: int = 20

    def __post_init__(self):
        if self.kind not in ("exhaustive", "greedy", "beam"):
            raise ValueError(f"unknown strategy {self.kind!r}")
        if self.width < 1:
            raise ValueError(f"beam width must be >= 1, got {self.width}")

    def __str__(self) -> str:
        return f"beam:w={self.width}" if self.kind == "beam" else self.kind


def parse_strategy(text: str) -> SearchStrategy:
    """Parse a CLI strategy string: ``exhaustive``, ``greedy``, or ``beam:w=8``."""
    kind, _, args = text.partition(":")
    kind = kind.strip()
    width = 1
    for part in args.split(","):
        name, _, value = part.partition("=")
        if name.strip() == "w":
            width = int(value)
    return SearchStrategy(kind=kind, width=width)


@dataclass(frozen=True)
class Completion:
    """A full labeling consistent with the training data, and its code length."""

    labels: str
    cost: float


class _KtCursor:
    """Incremental KT chain coder over one label stream."""

    __slots__ = ("counts", "ctx", "mask", "cost")

    def __init__(self, order: int, warm: str):
        self.counts = [0] * (2 << order)
        self.mask = (1 << order) - 1
        self.ctx = 0
        self.cost = 0.0
        for ch in warm:
            self.feed(ch == "1", charge=False)

    def clone(self) -> "_KtCursor":
        c = object.__new__(_KtCursor)
        c.counts = self.counts[:]
        c.ctx = self.ctx
        c.mask = self.mask
        c.cost = self.cost
        return c

    def feed(self, bit: int, charge: bool = True) -> None:
        i = self.ctx * 2
        if charge:
            c0 = self.counts[i]
            c1 = self.counts[i + 1]
            p = (2 * (c1 if bit else c0) + 1) / (2 * (c0 + c1) + 2)
            self.cost -= math.log2(p)
        self.counts[i + bit] += 1
        self.ctx = ((self.ctx << 1) | bit) & self.mask

    def prefers_zero(self) -> bool:
        """True when the next-bit KT probability of 0 is >= that of 1."""
        i = self.ctx * 2
        return self.counts[i] >= self.counts[i + 1]


def _candidate_labels(visible: dict[int, int], free: list[int], bits: int, n: int) -> str:
    """Full label string from training labels plus an assignment of free bits."""
    lab = []
    shift = len(free) - 1
    j = 0
    for pos in range(1, n + 1):
        if pos in visible:
            lab.append("1" if visible[pos] else "0")
        else:
            lab.append("1" if (bits >> (shift - j)) & 1 else "0")
            j += 1
    return "".join(lab)


def _search_exhaustive_kt(features, visible, n, order, limit):
    free = [p for p in range(1, n + 1) if p not in visible]
    t = len(free)
    if t > limit:
        raise ExhaustiveTooLargeError(f"{t} free bits > limit {limit}")
    warm = _KtCursor(order, "".join(features))
    best_cost = None
    best_labels = None
    for assignment in range(1 << t):
        lab = _candidate_labels(visible, free, assignment, n)
        cur = warm.clone()
        for ch in lab:
            cur.feed(ch == "1")
        if best_cost is None or cur.cost < best_cost:
            best_cost = cur.cost
            best_labels = lab
    return best_labels, best_cost


def _search_exhaustive_enum(features, visible, n, est, limit):
    free = [p for p in range(1, n + 1) if p not in visible]
    t = len(free)
    if t > limit:
        raise ExhaustiveTooLargeError(f"{t} free bits > limit {limit}")
    side = "".join(features)
    best_cost = math.inf
    best_labels = None
    for assignment in range(1 << t):
        lab = _candidate_labels(visible, free, assignment, n)
        m = approx_m(lab, side, est["L"], est["S"]).value
        cost = math.inf if m == 0 else -math.log2(m)
        if cost < best_cost:
            best_cost = cost
            best_labels = lab
    if best_labels is None:
        raise NoProgramFoundError(
            "no completion has a qualifying program within the enumeration budget"
        )
    return best_labels, best_cost


def _search_greedy_kt(features, visible, n, order):
    cur = _KtCursor(order, "".join(features))
    lab = []
    for pos in range(1, n + 1):
        if pos in visible:
            bit = visible[pos]
        else:
            bit = 0 if cur.prefers_zero() else 1
        cur.feed(bit)
        lab.append("1" if bit else "0")
    return "".join(lab), cur.cost


def _search_beam_kt(features, visible, n, order, width):
    warm = _KtCursor(order, "".join(features))
    beam = [("", warm)]
    for pos in range(1, n + 1):
        nxt = []
        choices = (visible[pos],) if pos in visible else (0, 1)
        for lab, cur in beam:
            for bit in choices:
                c = cur.clone()
                c.feed(bit)
                nxt.append((lab + ("1" if bit else "0"), c))
        nxt.sort(key=lambda item: (item[1].cost, item[0]))
        beam = nxt[:width]
    lab, cur = min(beam, key=lambda item: (item[1].cost, item[0]))
    return lab, cur.cost


def astar(
    problem: Problem,
    mask: Mask,
    est: EstimatorSpec,
    strategy: SearchStrategy = SearchStrategy("exhaustive"),
) -> tuple[str, Completion]:
    """Classify the test positions with the minimum-complexity completion.

    Returns (predictions over test positions in ascending order, the chosen
    completion).  Exhaustive search scans all consistent completions and
    breaks exact cost ties toward the lexicographically smallest labeling;
    beam search with width 2^t reproduces it bit for bit.  Only training
    labels are ever read.
    """
    split = split_from_mask(mask)
    if not split.test:
        raise EmptyTestSetError("mask is all ones: nothing to classify")
    visible = {pos: int(problem.labels[pos - 1]) for pos in split.train}
    n = problem.n

    if est.kind == "enum":
        if strategy.kind != "exhaustive":
            raise ValueError(
                "the enumerator estimator supports exhaustive search only"
            )
        lab, cost = _search_exhaustive_enum(
            problem.features, visible, n, est, strategy.exhaustive_limit
        )
    elif strategy.kind == "exhaustive":
        lab, cost = _search_exhaustive_kt(
            problem.features, visible, n, est["r"], strategy.exhaustive_limit
        )
    elif strategy.kind == "greedy":
        lab, cost = _search_greedy_kt(problem.features, visible, n, est["r"])
    else:
        lab, cost = _search_beam_kt(
            problem.features, visible, n, est["r"], strategy.width
        )

    predictions = "".join(lab[pos - 1] for pos in split.test)
    return predictions, Completion(labels=lab, cost=cost)


def baseline(kind: str, problem: Problem, mask: Mask, seed: int = 0) -> str:
    """Predictions of a baseline algorithm over the test positions."""
    split = split_from_mask(mask)
    if not split.test:
        raise EmptyTestSetError("mask is all ones: nothing to classify")
    t = len(split.test)
    if kind == "constant0":
        return "0" * t
    if kind == "constant1":
        return "1" * t
    if kind == "best_constant_on_train":
        train_labels = [problem.labels[pos - 1] for pos in split.train]
        ones = sum(1 for b in train_labels if b == "1")
        return ("1" if ones > len(train_labels) - ones else "0") * t
    if kind == "random":
        gen = SplitMix64(seed)
        return "".join("1" if gen.bit(0.5) else "0" for _ in range(t))
    raise ValueError(f"unknown baseline {kind!r}")


# ---------------------------------------------------------------------------
# Experiment reporting
# ---------------------------------------------------------------------------

CSV_COLUMNS = (
    "experiment", "seed", "n", "k", "theta", "mask_kind", "estimator",
    "strategy", "loss_num", "loss_den", "alpha", "theta_bar", "km_f_bits",
    "km_x_bits", "bound2", "bound3", "runtime_ms",
)


@dataclass(frozen=True)
class ExperimentReport:
    """One row of experiment results."""

    experiment: str
    seed: int | None
    n: int
    k: int
    theta: float | None
    mask_kind: str
    estimator: str
    strategy: str
    loss: Fraction
    theta_bar: Fraction
    km_f_bits: float
    km_x_bits: float
    bound2: float
    bound3: float
    runtime_ms: int

    def row(self) -> tuple:
        def num(v):
            return "" if v is None else format(v, ".10g")

        return (
            self.experiment,
            "" if self.seed is None else self.seed,
            self.n,
            self.k,
            num(self.theta),
            self.mask_kind,
            self.estimator,
            self.strategy,
            self.loss.numerator,
            self.loss.denominator,
            num(float(self.loss)),
            num(float(self.theta_bar)),
            num(self.km_f_bits),
            num(self.km_x_bits),
            num(self.bound2),
            num(self.bound3),
            self.runtime_ms,
        )


def evaluate(
    problem: Problem,
    mask: Mask,
    algorithm: str,
    est: EstimatorSpec,
    strategy: SearchStrategy = SearchStrategy("exhaustive"),
    seed: int | None = None,
    theta: float | None = None,
    mask_kind: str = "file",
    bound_params: "analysis.BoundParams | None" = None,
    experiment: str | None = None,
) -> ExperimentReport:
    """Run one algorithm on one instance and report loss, complexities, bounds.

    `theta` is the Bernoulli bias used for the bound formulas; when absent
    the observed training fraction is used.  The complexity columns describe
    the true labeling and the feature string under `est`; they are reporting
    quantities, not inputs to the algorithm.
    """
    t0 = time.perf_counter()
    if algorithm == "astar":
        predictions, _ = astar(problem, mask, est, strategy)
        strat_str = str(strategy)
    elif algorithm in BASELINE_KINDS:
        predictions = baseline(algorithm, problem, mask, seed or 0)
        strat_str = ""
    else:
        raise ValueError(f"unknown algorithm {algorithm!r}")
    alpha = loss(predictions, problem, mask)
    km_f = function_complexity(problem, problem.labels, est)
    km_x = conditional_complexity(problem.feature_string(), "", est)
    params = bound_params if bound_params is not None else analysis.BoundParams()
    th = theta if theta is not None else float(mask.theta_bar)
    try:
        b2 = analysis.loss_bound_km_features(km_f, km_x, problem.n, th, params)
    except DegenerateDenominatorError:
        b2 = math.inf
    try:
        b3 = analysis.loss_bound_log_size(km_f, problem.n, problem.n, th, params)
    except (DegenerateDenominatorError, DomainError):
        b3 = math.inf
    runtime_ms = int((time.perf_counter() - t0) * 1000)
    return ExperimentReport(
        experiment=experiment or algorithm,
        seed=seed,
        n=problem.n,
        k=problem.k,
        theta=theta,
        mask_kind=mask_kind,
        estimator=str(est),
        strategy=strat_str,
        loss=alpha,
        theta_bar=mask.theta_bar,
        km_f_bits=km_f,
        km_x_bits=km_x,
        bound2=b2,
        bound3=b3,
        runtime_ms=runtime_ms,
    )
