"""Binary classification problems, training masks, splits, and the misclassification loss.

A problem is a fixed ordered list of distinct k-bit feature strings with one
true binary label each.  A mask is an indicator string choosing which
positions are revealed for training; everything else is test.  Positions are
1-based throughout.  Loss is an exact rational so no-free-lunch checks can
assert equality with no tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .errors import (
    EmptyTestSetError,
    InvalidThetaError,
    LengthMismatchError,
    OutOfRangeError,
)
from .rng import bernoulli_bits

_BITS = frozenset("01")


def _check_bitstring(s: str, what: str) -> None:
    if not set(s) <= _BITS:
        raise ValueError(f"{what} must contain only 0/1 characters, got {s!r}")


@dataclass(frozen=True)
class Problem:
    """Ordered distinct k-bit features with an n-bit true label string."""

    k: int
    features: tuple[str, ...]
    labels: str

    def __post_init__(self):
        if len(self.features) < 1:
            raise ValueError("a problem needs at least one feature")
        if len(self.labels) != len(self.features):
            raise LengthMismatchError(
                f"{len(self.features)} features but {len(self.labels)} labels"
            )
        _check_bitstring(self.labels, "labels")
        seen = set()
        for f in self.features:
            _check_bitstring(f, "feature")
            if len(f) != self.k:
                raise ValueError(f"feature {f!r} is not {self.k} bits wide")
            if f in seen:
                raise ValueError(f"duplicate feature {f!r}")
            seen.add(f)

    @property
    def n(self) -> int:
        return len(self.features)

    def label_string(self) -> str:
        """The n-bit string of true labels in problem order."""
        return self.labels

    def feature_string(self) -> str:
        """Concatenation of all features in problem order (n*k bits)."""
        return "".join(self.features)


@dataclass(frozen=True)
class Mask:
    """Indicator string: 1 = training position, 0 = test position."""

    bits: str

    def __post_init__(self):
        _check_bitstring(self.bits, "mask")
        if len(self.bits) < 1:
            raise ValueError("mask must be non-empty")

    @property
    def n(self) -> int:
        return len(self.bits)

    @property
    def ones(self) -> int:
        return self.bits.count("1")

    @property
    def theta_bar(self) -> Fraction:
        """Observed training fraction, ones/n."""
        return Fraction(self.ones, self.n)


@dataclass(frozen=True)
class Split:
    """1-based training and test positions induced by a mask."""

    train: tuple[int, ...]
    test: tuple[int, ...]


def split_from_mask(mask: Mask) -> Split:
    train = tuple(i + 1 for i, b in enumerate(mask.bits) if b == "1")
    test = tuple(i + 1 for i, b in enumerate(mask.bits) if b == "0")
    return Split(train=train, test=test)


def prefix_mask(n: int, m: int) -> Mask:
    """The mask 1^m 0^(n-m)."""
    if not 0 <= m <= n:
        raise OutOfRangeError(f"need 0 <= m <= n, got m={m}, n={n}")
    return Mask("1" * m + "0" * (n - m))


def bernoulli_mask(n: int, theta: float, seed: int) -> Mask:
    """Each bit independently 1 with probability theta from the seeded stream."""
    if not 0.0 < theta < 1.0:
        raise InvalidThetaError(f"theta must be in (0,1), got {theta}")
    if n < 1:
        raise OutOfRangeError(f"mask size must be >= 1, got {n}")
    return Mask(bernoulli_bits(n, theta, seed))


def loss(predictions: str, problem: Problem, mask: Mask) -> Fraction:
    """Misclassification fraction over test positions, as an exact rational.

    `predictions` covers exactly the test positions, in ascending order.
    """
    if mask.n != problem.n:
        raise LengthMismatchError(f"mask has {mask.n} bits for {problem.n} features")
    test = split_from_mask(mask).test
    if not test:
        raise EmptyTestSetError("mask is all ones: nothing to classify")
    _check_bitstring(predictions, "predictions")
    if len(predictions) != len(test):
        raise LengthMismatchError(
            f"{len(predictions)} predictions for {len(test)} test positions"
        )
    wrong = sum(1 for p, i in zip(predictions, test) if p != problem.labels[i - 1])
    return Fraction(wrong, len(test))


def first_bit_problem(k: int) -> Problem:
    """All of B^k in lexicographic order, labeled by the first bit of each feature."""
    feats = tuple(format(i, f"0{k}b") for i in range(2 ** k))
    return Problem(k=k, features=feats, labels="".join(f[0] for f in feats))


# ---------------------------------------------------------------------------
# File formats
# ---------------------------------------------------------------------------
#
# Problem file: first non-comment line is k, then one record per line
# "<k-bit feature> <0|1>".  Lines starting with '#' are comments.
# Mask file: a single line of 0/1 characters.


def load_problem(path: str | Path) -> Problem:
    lines = []
    for raw in Path(path).read_text().splitlines():
        line = raw.strip()
        if line and not line.startswith("#"):
            lines.append(line)
    if not lines:
        raise ValueError(f"{path}: empty problem file")
    k = int(lines[0])
    features = []
    labels = []
    for line in lines[1:]:
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"{path}: bad record {line!r}")
        features.append(parts[0])
        labels.append(parts[1])
    return Problem(k=k, features=tuple(features), labels="".join(labels))


def save_problem(problem: Problem, path: str | Path) -> None:
    rows = [str(problem.k)]
    rows += [f"{f} {y}" for f, y in zip(problem.features, problem.labels)]
    Path(path).write_text("\n".join(rows) + "\n")


def load_mask(path: str | Path) -> Mask:
    return Mask(Path(path).read_text().strip())


def save_mask(mask: Mask, path: str | Path) -> None:
    Path(path).write_text(mask.bits + "\n")
