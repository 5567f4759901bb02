"""Minimum-complexity classification on the canonical first-bit problem.

The problem: all 16 four-bit strings, labeled by their first bit, so the
true label string is 00000000 11111111.  We reveal training labels through
a mask and ask the classifier for the rest.  A prefix mask shows it only
zeros and it confidently learns the all-zero function; random masks spread
the evidence and it does far better.
"""

from fractions import Fraction

from mincomp import (
    SearchStrategy,
    astar,
    baseline,
    bernoulli_mask,
    first_bit_problem,
    loss,
    prefix_mask,
)
from mincomp.estimators import kt_estimator

problem = first_bit_problem(4)
est = kt_estimator(1)
exhaustive = SearchStrategy("exhaustive")

print("features :", " ".join(problem.features))
print("labels   :", problem.labels)
print()

print("--- worst-case training: the first eight points (all labeled 0) ---")
mask = prefix_mask(16, 8)
pred, completion = astar(problem, mask, est, exhaustive)
print("mask       :", mask.bits)
print("model      :", completion.labels, f"({completion.cost:.3f} bits)")
print("predictions:", pred, "-> loss", loss(pred, problem, mask))
print()

print("--- random training masks, same amount of data on average ---")
total = Fraction(0)
for seed in range(10):
    mask = bernoulli_mask(16, 0.5, seed)
    pred, completion = astar(problem, mask, est, exhaustive)
    l = loss(pred, problem, mask)
    total += l
    print(f"seed {seed}: mask {mask.bits}  model {completion.labels}  loss {l}")
print("mean loss over 10 seeds:", float(total / 10))
print()

print("--- baselines on the prefix mask ---")
mask = prefix_mask(16, 8)
for kind in ("constant0", "constant1", "best_constant_on_train", "random"):
    pred = baseline(kind, problem, mask, seed=1)
    print(f"{kind:24s} loss {loss(pred, problem, mask)}")
