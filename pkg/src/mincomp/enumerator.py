"""Dovetailing enumeration of TRM-1 programs: lower bounds on the universal
semimeasure M, the normalized measure Mn, and the code length KM = -log2 M.

M(x) is approximated by summing 2^(-len(p)) over all *minimal* programs p of
at most `max_len` bits whose run (within the step budget) consumes exactly
len(p) bits and outputs a string extending x.  Minimal means no proper prefix
of p also qualifies; this prevents double counting and makes the level sums
obey sum_{x in B^m} M(x) <= 1 exactly.  All arithmetic is exact rational;
logs are taken only at the reporting boundary.

The enumeration walks the opcode prefix tree once, sharing machine state
between programs with a common prefix, and reuses the result for every query
string against the same (side, budget) configuration.  Replay loops that can
never read another program bit are detected and cut short; this changes no
recorded output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from types import MappingProxyType
from typing import Mapping

from .errors import InvalidBudgetError, NoProgramFoundError
from .machine import CPY, LEFT, LOOP, OPCODE_WIDTH, OUT0, OUT1, RIGHT, SKIP

_FETCH, _TERMINAL = 0, 1


@lru_cache(maxsize=32)
def _enumerate(side: str, max_len: int, max_steps: int, out_cap: int) -> Mapping:
    """One pass over all programs up to max_len bits.

    Returns a mapping (output, parent_output_len, program_len_bits) -> count
    of programs, where `output` is the run's output truncated to `out_cap`
    bits and `parent_output_len` is the output length of the one-opcode-
    shorter prefix program.  Runs that emit nothing beyond their parent are
    dropped (they can never be minimal for any string), except the empty
    program itself.
    """
    max_ops = max_len // OPCODE_WIDTH
    side_len = len(side)
    clamp_floor = side_len if side_len > 1 else 1
    runs: dict[tuple[str, int, int], int] = {}
    out: list[str] = []
    memory: list[int] = []

    def dfs(parent_outlen: int, ip: int, steps: int, head: int, pending: bool):
        # --- run this node's segment to its end ---------------------------
        status = _TERMINAL
        visited = None  # head -> output length, at LOOP executions
        prev_head = -1
        prev_outlen = -1
        min_since = 0
        while True:
            if steps >= max_steps:
                break
            if ip == len(memory):
                status = _FETCH
                break
            op = memory[ip]
            ip += 1
            if pending:
                pending = False
                continue
            steps += 1
            if op == OUT0:
                out.append("0")
                if len(out) >= out_cap:
                    break
            elif op == OUT1:
                out.append("1")
                if len(out) >= out_cap:
                    break
            elif op == CPY:
                out.append(side[head] if head < side_len else "0")
                head += 1
                if len(out) >= out_cap:
                    break
            elif op == LEFT:
                if head > 0:
                    head -= 1
                if head < min_since:
                    min_since = head
            elif op == RIGHT:
                head += 1
            elif op == LOOP:
                ip = 0
                outlen = len(out)
                if visited is None:
                    visited = {head: outlen}
                else:
                    if visited.get(head) == outlen:
                        break  # exact state repeat with no new output
                    if (
                        head > prev_head
                        and outlen == prev_outlen
                        and min_since >= clamp_floor
                    ):
                        break  # silent rightward-drifting replay in the 0-padding
                    visited[head] = outlen
                prev_head = head
                prev_outlen = outlen
                min_since = head
            elif op == SKIP:
                if (side[head] if head < side_len else "0") == "1":
                    pending = True
            else:  # HALT
                break

        # --- record the exact program consisting of the consumed opcodes --
        outlen = len(out)
        if outlen != parent_outlen or not memory:
            key = ("".join(out), parent_outlen, OPCODE_WIDTH * len(memory))
            runs[key] = runs.get(key, 0) + 1

        # --- branch over the next opcode ----------------------------------
        if status == _FETCH and len(memory) < max_ops:
            for op in range(8):
                memory.append(op)
                dfs(outlen, ip, steps, head, pending)
                del out[outlen:]
                memory.pop()

    dfs(-1, 0, 0, 0, False)
    return MappingProxyType(runs)


def _check_budget(max_len: int, max_steps: int) -> None:
    if max_len < 0 or max_len % OPCODE_WIDTH != 0:
        raise InvalidBudgetError(
            f"max_len must be a nonnegative multiple of {OPCODE_WIDTH}, got {max_len}"
        )
    if max_steps < 1:
        raise InvalidBudgetError(f"max_steps must be >= 1, got {max_steps}")


def _cap_for(length: int) -> int:
    return 32 * max(1, -(-length // 32))  # smallest multiple of 32 >= length


@lru_cache(maxsize=256)
def _level_table(
    side: str, max_len: int, max_steps: int, length: int
) -> Mapping[str, tuple[int, int, int]]:
    """For every x in B^length with a qualifying program: (scaled numerator
    of the M lower bound, number of minimal programs, shortest program bits).

    The numerator is scaled by 2^max_len so it stays an integer.
    """
    runs = _enumerate(side, max_len, max_steps, _cap_for(length))
    table: dict[str, tuple[int, int, int]] = {}
    for (output, parent_outlen, plen), count in runs.items():
        if len(output) >= length > parent_outlen:
            x = output[:length]
            num, cnt, shortest = table.get(x, (0, 0, max_len + 1))
            table[x] = (
                num + (count << (max_len - plen)),
                cnt + count,
                min(shortest, plen),
            )
    return MappingProxyType(table)


@dataclass(frozen=True)
class MEstimate:
    """Exact lower bound on M for one string, with enumeration metadata."""

    value: Fraction
    programs_counted: int
    max_len: int
    max_steps: int
    shortest_len: int | None  # bits of the shortest qualifying program

    @property
    def km_bits(self) -> float:
        """-log2 of the bound: an upper bound on KM under TRM-1."""
        if self.value == 0:
            raise NoProgramFoundError(
                f"no qualifying program within L={self.max_len}, S={self.max_steps}"
            )
        return -math.log2(self.value)


def approx_m(
    x: str, side: str = "", max_len: int = 18, max_steps: int = 1000
) -> MEstimate:
    """Lower bound on M(x), or M(x | side) when a side string is given."""
    _check_budget(max_len, max_steps)
    table = _level_table(side, max_len, max_steps, len(x))
    num, cnt, shortest = table.get(x, (0, 0, 0))
    return MEstimate(
        value=Fraction(num, 1 << max_len),
        programs_counted=cnt,
        max_len=max_len,
        max_steps=max_steps,
        shortest_len=shortest if cnt else None,
    )


def approx_km(
    x: str, side: str = "", max_len: int = 18, max_steps: int = 1000
) -> float:
    """Upper bound on KM(x) in bits; raises NoProgramFoundError on a zero estimate."""
    return approx_m(x, side, max_len, max_steps).km_bits


@dataclass(frozen=True)
class MnTable:
    """Normalization of the M lower bounds into a proper measure.

    entries maps every string of length <= depth to an exact rational with
    Mn(empty) = 1 and Mn(x0) + Mn(x1) = Mn(x).  Nodes where both children
    had a zero M estimate split their mass evenly and are listed in
    `fallback`.
    """

    depth: int
    entries: Mapping[str, Fraction]
    fallback: frozenset[str]
    max_len: int
    max_steps: int

    def __getitem__(self, x: str) -> Fraction:
        return self.entries[x]


def build_mn(
    depth: int, side: str = "", max_len: int = 18, max_steps: int = 1000
) -> MnTable:
    """Mn table for all strings up to `depth` bits via the child-ratio recursion."""
    if depth < 1:
        raise InvalidBudgetError(f"depth must be >= 1, got {depth}")
    _check_budget(max_len, max_steps)
    entries: dict[str, Fraction] = {"": Fraction(1)}
    fallback = set()
    level = [""]
    for m in range(depth):
        table = _level_table(side, max_len, max_steps, m + 1)
        nxt = []
        for x in level:
            m0 = Fraction(table.get(x + "0", (0, 0, 0))[0], 1 << max_len)
            m1 = Fraction(table.get(x + "1", (0, 0, 0))[0], 1 << max_len)
            total = m0 + m1
            if total == 0:
                entries[x + "0"] = entries[x] / 2
                entries[x + "1"] = entries[x] / 2
                fallback.add(x)
            else:
                entries[x + "0"] = entries[x] * m0 / total
                entries[x + "1"] = entries[x] * m1 / total
            nxt.append(x + "0")
            nxt.append(x + "1")
        level = nxt
    return MnTable(
        depth=depth,
        entries=MappingProxyType(entries),
        fallback=frozenset(fallback),
        max_len=max_len,
        max_steps=max_steps,
    )
