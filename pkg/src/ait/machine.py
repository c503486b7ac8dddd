"""Reference machines, run outcomes and budgets.

Both machines share one execution protocol so the enumerator can treat them
uniformly.  A machine keeps its state in a small list whose first slot is the
number of program bits consumed.  ``advance(state, bits, oracle, budget)``
runs until the machine either terminates or needs program bit number
``len(bits)``; in the latter case it returns ``NEED_BIT`` and the caller may
extend ``bits`` and call ``advance`` again on the same state (or on a
``clone`` of it).  ``children(state, bits, limit)`` lists the extensions by
one whole instruction that can still reach a halting program within
``limit`` bits.  Running a fixed program is the special case where all bits
are supplied up front.

Domain convention: a program is in a machine's domain iff the machine halts
having consumed exactly the program's bits.  This makes every domain
prefix-free.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import UnknownMachine
from .oracle import OracleSpec

# advance() status codes
NEED_BIT = 0
HALTED = 1
DIVERGED = 2
OUT_OF_BUDGET = 3
ABORTED = 4

STATUS_NAMES = {
    HALTED: "Halted",
    DIVERGED: "Diverged",
    OUT_OF_BUDGET: "OutOfBudget",
    ABORTED: "Aborted",
}

# Reasons
ORACLE_OUT_OF_RANGE = "OracleOutOfRange"
NO_TERMINATOR = "NoTerminator"
RAN_OFF_END = "RanOffEnd"
TRAILING_BITS = "TrailingBits"
OUTPUT_OVERFLOW = "OutputOverflow"


@dataclass(frozen=True, order=True)
class Budget:
    max_program_len: int
    max_steps: int
    max_output_len: int

    def __post_init__(self):
        for name in ("max_program_len", "max_steps", "max_output_len"):
            v = getattr(self, name)
            if not isinstance(v, int) or v <= 0:
                raise ValueError(f"budget field {name} must be a positive integer, got {v!r}")

    def doubled(self) -> Budget:
        return Budget(2 * self.max_program_len, 2 * self.max_steps, 2 * self.max_output_len)

    def covers(self, other: Budget) -> bool:
        """Componentwise ``self >= other``."""
        return (
            self.max_program_len >= other.max_program_len
            and self.max_steps >= other.max_steps
            and self.max_output_len >= other.max_output_len
        )

    @property
    def fingerprint(self) -> str:
        return f"L{self.max_program_len}-T{self.max_steps}-O{self.max_output_len}"

    def to_json(self) -> dict:
        return {
            "max_program_len": self.max_program_len,
            "max_steps": self.max_steps,
            "max_output_len": self.max_output_len,
        }

    @classmethod
    def from_json(cls, d: dict) -> Budget:
        return cls(int(d["max_program_len"]), int(d["max_steps"]), int(d["max_output_len"]))


@dataclass(frozen=True)
class MachineId:
    name: str
    semantics_version: str


@dataclass(frozen=True)
class RunOutcome:
    status: str
    output: str = ""
    bits_consumed: int = 0
    steps: int = 0
    reason: str = ""

    @property
    def halted(self) -> bool:
        return self.status == "Halted"

    def render(self) -> str:
        """``<status>:<output>:<steps>`` as used in golden-run files."""
        status = self.status if not self.reason else f"{self.status}({self.reason})"
        out = self.output if self.halted and self.output else "-"
        return f"{status}:{out}:{self.steps}"


class TokVM:
    """Two-bit token machine whose complexity depends only on output length."""

    id = MachineId("TOK", "tok-1")

    DESCRIPTION = """\
# TOK (semantics version tok-1)

The program is read left to right as 2-bit tokens.  One token is one step.

| token | action |
|-------|--------|
| `00`  | append 0 to the output |
| `01`  | append 1 to the output |
| `11`  | append the oracle bit at the internal cursor c (initially 0), then c <- c+1; Diverged(OracleOutOfRange) if there is no oracle or a finite oracle is exhausted |
| `10`  | halt |

* Aborted(RanOffEnd): the program ends mid-token or before a halt token.
* Aborted(TrailingBits): bits remain after the halt token.
* Aborted(OutputOverflow): the output would exceed max_output_len.
* OutOfBudget: more than max_steps tokens would be executed.

Without an oracle the domain is exactly `{00,01}* 10`; the unique program for
x has length 2|x|+2.
"""

    @staticmethod
    def initial() -> list:
        # pos, oracle cursor, steps, output
        return [0, 0, 0, ""]

    @staticmethod
    def clone(state: list) -> list:
        return state[:]

    @staticmethod
    def children(state: list, bits: str, limit: int) -> list[str]:
        """Extensions by one token that can still lead to a halting program within ``limit``."""
        n = len(bits)
        out = [bits + "10"] if n + 2 <= limit else []
        if n + 4 <= limit:
            out += [bits + "00", bits + "01", bits + "11"]
        return out

    @staticmethod
    def output(state: list) -> str:
        return state[3]

    @staticmethod
    def steps(state: list) -> int:
        return state[2]

    @staticmethod
    def advance(state: list, bits: str, oracle: OracleSpec | None, budget: Budget) -> tuple[int, str]:
        pos, cur, steps, out = state
        n = len(bits)
        max_steps = budget.max_steps
        max_out = budget.max_output_len
        status, reason = NEED_BIT, ""
        while True:
            if pos + 2 > n:
                break
            if steps >= max_steps:
                status = OUT_OF_BUDGET
                break
            tok = bits[pos:pos + 2]
            pos += 2
            steps += 1
            if tok == "10":
                status = HALTED
                break
            if tok == "11":
                b = None if oracle is None else oracle.bit_at(cur)
                if b is None:
                    status, reason = DIVERGED, ORACLE_OUT_OF_RANGE
                    break
                cur += 1
                out += "1" if b else "0"
            else:
                out += tok[1]
            if len(out) > max_out:
                status, reason = ABORTED, OUTPUT_OVERFLOW
                break
        state[0], state[1], state[2], state[3] = pos, cur, steps, out
        return status, reason


def _registry() -> dict:
    from .uvm import UVM

    return {"TOK": TokVM, "UVM": UVM}


def get_machine(name: str):
    try:
        return _registry()[name]
    except KeyError:
        raise UnknownMachine(f"unknown machine {name!r}; expected one of TOK, UVM") from None


def describe_machine(name: str) -> str:
    m = get_machine(name)
    return m.DESCRIPTION


def run(machine: str, program: str, oracle: OracleSpec | None, budget: Budget) -> RunOutcome:
    """Run one program under the exact-consumption convention."""
    if len(program) > budget.max_program_len:
        raise ValueError("program longer than budget.max_program_len")
    m = get_machine(machine)
    state = m.initial()
    status, reason = m.advance(state, program, oracle, budget)
    pos = state[0]
    steps = m.steps(state)
    if status == NEED_BIT:
        return RunOutcome("Aborted", bits_consumed=pos, steps=steps, reason=RAN_OFF_END)
    if status == HALTED:
        if pos != len(program):
            return RunOutcome("Aborted", bits_consumed=pos, steps=steps, reason=TRAILING_BITS)
        return RunOutcome("Halted", m.output(state), pos, steps)
    return RunOutcome(STATUS_NAMES[status], bits_consumed=pos, steps=steps, reason=reason)


def machine_document() -> str:
    """The normative semantics of every machine, as stored in MACHINE.md."""
    reg = _registry()
    # Each description starts with a level-1 heading; nest them under the title.
    return "# Reference machines\n\n" + "\n".join("#" + reg[k].DESCRIPTION for k in sorted(reg))
