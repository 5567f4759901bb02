"""TRM-1: a tiny monotone machine with a one-way program tape.

Programs are streams of 3-bit opcodes consumed left to right:

    000 OUT0   write 0 to the output tape
    001 OUT1   write 1 to the output tape
    010 CPY    copy the bit under the side head to the output, move head right
    011 LEFT   move the side head left (no-op at the left end)
    100 RIGHT  move the side head right
    101 LOOP   restart the already-consumed instruction stream from its
               beginning, without consuming new program bits
    110 SKIP   skip the next instruction if the bit under the side head is 1
    111 HALT   stop

The side tape holds the side string padded with 0s to the right; the head
starts on the first character.  Execution stops at HALT, at an attempt to
read past the program's last bit, or when the step budget is spent.  Each
executed instruction costs one step; an instruction discarded by SKIP is
consumed from the stream but costs nothing.

Behavior depends only on the consumed program bits and the side tape, so the
machine is monotone: whenever p is a prefix of q, the output for p is a
prefix of the output for q.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidBudgetError

OUT0, OUT1, CPY, LEFT, RIGHT, LOOP, SKIP, HALT = range(8)

OPCODE_WIDTH = 3

OPCODE_NAMES = ("OUT0", "OUT1", "CPY", "LEFT", "RIGHT", "LOOP", "SKIP", "HALT")


@dataclass(frozen=True)
class ProgramRun:
    """Outcome of running one program."""

    program: str
    output: str
    consumed: int
    halted: bool
    steps: int


def parse_program(program: str) -> list[int]:
    """Split a bitstring into whole 3-bit opcodes; trailing partial bits are dropped."""
    return [int(program[i : i + 3], 2) for i in range(0, len(program) - 2, 3)]


def run_trm1(program: str, side: str = "", max_steps: int = 1000) -> ProgramRun:
    """Execute `program` on side tape `side` for at most `max_steps` steps."""
    if max_steps < 1:
        raise InvalidBudgetError(f"max_steps must be >= 1, got {max_steps}")
    ops = parse_program(program)
    side_len = len(side)
    out: list[str] = []
    memory: list[int] = []
    ip = 0
    head = 0
    steps = 0
    skip_pending = False
    halted = False

    while True:
        if steps >= max_steps:
            break
        if ip == len(memory):
            # need a fresh opcode from the program tape
            if len(memory) == len(ops):
                break  # exhaustion: would read past the last bit
            memory.append(ops[len(memory)])
        op = memory[ip]
        ip += 1
        if skip_pending:
            skip_pending = False
            continue
        steps += 1
        if op == OUT0:
            out.append("0")
        elif op == OUT1:
            out.append("1")
        elif op == CPY:
            out.append(side[head] if head < side_len else "0")
            head += 1
        elif op == LEFT:
            if head > 0:
                head -= 1
        elif op == RIGHT:
            head += 1
        elif op == LOOP:
            ip = 0
        elif op == SKIP:
            if (side[head] if head < side_len else "0") == "1":
                skip_pending = True
        else:  # HALT
            halted = True
            break

    return ProgramRun(
        program=program,
        output="".join(out),
        consumed=3 * len(memory),
        halted=halted,
        steps=steps,
    )
