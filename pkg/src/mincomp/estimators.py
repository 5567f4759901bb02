"""Pluggable complexity estimators returning ideal code lengths in bits.

Two estimator kinds share one interface:

  * ``kt``   — an order-r binary context model with the Krichevsky-Trofimov
               rule p(1 | ctx) = (c1 + 1/2) / (c0 + c1 + 1), all counts
               starting at 0.  The code length is the ideal (real-valued)
               length -sum log2 p, not a materialized bitstream.
  * ``enum`` — the TRM-1 enumerator's KM upper bound (-log2 of the M lower
               bound), with the conditioning string on the side tape.

Conditional complexity is warm-start: the model is trained on the
conditioning string first and charged only for the target.  The complexity
of a labeling relative to its features is the conditional complexity of the
label string given the concatenated feature string.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .enumerator import approx_km
from .errors import OutOfRangeError
from .model import Problem


def kt_code_length(target: str, warm: str = "", order: int = 0) -> float:
    """Ideal KT code length of `target` in bits, after warming up on `warm`.

    Context for each bit is the previous `order` bits of the combined
    warm+target stream, left-padded with zeros at the start.  Warm bits
    update the counts but cost nothing.
    """
    if order < 0:
        raise OutOfRangeError(f"context order must be >= 0, got {order}")
    counts = [0] * (2 << order)  # ctx * 2 + bit
    ctx_mask = (1 << order) - 1
    ctx = 0
    for ch in warm:
        bit = ch == "1"
        counts[ctx * 2 + bit] += 1
        ctx = ((ctx << 1) | bit) & ctx_mask
    bits = 0.0
    for ch in target:
        bit = ch == "1"
        c0 = counts[ctx * 2]
        c1 = counts[ctx * 2 + 1]
        p = (2 * (c1 if bit else c0) + 1) / (2 * (c0 + c1) + 2)
        bits -= math.log2(p)
        counts[ctx * 2 + bit] += 1
        ctx = ((ctx << 1) | bit) & ctx_mask
    return bits


@dataclass(frozen=True)
class EstimatorSpec:
    """Which estimator to use and its parameters.

    kind 'kt' uses params['r']; kind 'enum' uses params['L'] and params['S'].
    The string forms are ``kt:r=2`` and ``enum:L=18,S=1000``.
    """

    kind: str
    params: tuple[tuple[str, int], ...] = field(default_factory=tuple)

    def __post_init__(self):
        p = dict(self.params)
        if self.kind == "kt":
            if set(p) != {"r"} or p["r"] < 0:
                raise ValueError(f"kt estimator needs r >= 0, got {p}")
        elif self.kind == "enum":
            if set(p) != {"L", "S"}:
                raise ValueError(f"enum estimator needs L and S, got {p}")
        else:
            raise ValueError(f"unknown estimator kind {self.kind!r}")

    def __getitem__(self, name: str) -> int:
        return dict(self.params)[name]

    def __str__(self) -> str:
        args = ",".join(f"{k}={v}" for k, v in self.params)
        return f"{self.kind}:{args}"


def kt_estimator(r: int = 2) -> EstimatorSpec:
    return EstimatorSpec("kt", (("r", r),))

def enum_estimator(L: int = 18, S: int = 1000) -> EstimatorSpec:
    return EstimatorSpec("enum", (("L", L), ("S", S)))


def parse_estimator(text: str) -> EstimatorSpec:
    """Parse a CLI estimator string like ``kt:r=2`` or ``enum:L=18,S=1000``."""
    kind, _, args = text.partition(":")
    kind = kind.strip()
    if kind == "enumerator":
        kind = "enum"
    params = []
    if args.strip():
        for part in args.split(","):
            name, _, value = part.partition("=")
            params.append((name.strip(), int(value)))
    order = {"kt": ("r",), "enum": ("L", "S")}.get(kind)
    if order is None:
        raise ValueError(f"unknown estimator kind {kind!r}")
    params.sort(key=lambda kv: order.index(kv[0]) if kv[0] in order else 99)
    return EstimatorSpec(kind, tuple(params))


def conditional_complexity(y: str, x: str, est: EstimatorSpec) -> float:
    """Code length of y given x in bits; x = "" gives the unconditional value."""
    if est.kind == "kt":
        return kt_code_length(y, warm=x, order=est["r"])
    return approx_km(y, side=x, max_len=est["L"], max_steps=est["S"])


def function_complexity(problem: Problem, labels: str, est: EstimatorSpec) -> float:
    """Code length of a labeling given the problem's concatenated features."""
    if len(labels) != problem.n:
        raise OutOfRangeError(
            f"{len(labels)} labels for a problem of size {problem.n}"
        )
    return conditional_complexity(labels, problem.feature_string(), est)
