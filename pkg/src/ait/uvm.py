"""UVM: a small universal register machine that fetches its code on demand.

Instructions are decoded from the program bits only when the program counter
first reaches them, so the machine reads exactly as many bits as it needs and
its halting domain is prefix-free under the exact-consumption convention.
Two counters with increment, test-and-decrement and conditional jumps in both
directions make it Turing complete modulo budgets.

The module also carries an assembler (``assemble``), a disassembler and
``stream``, which runs a non-halting program as an algorithmic operator and
resolves its infinite output to an :class:`~ait.oracle.OracleSpec` when a
provable cycle is found.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .machine import (
    ABORTED,
    DIVERGED,
    HALTED,
    NEED_BIT,
    NO_TERMINATOR,
    ORACLE_OUT_OF_RANGE,
    OUT_OF_BUDGET,
    OUTPUT_OVERFLOW,
    RAN_OFF_END,
    TRAILING_BITS,
    Budget,
    MachineId,
)
from .oracle import EVENTUALLY_ZERO, OracleSpec, eventually_periodic

OUT0, OUT1, HALT, ENC, CPY, JMP, JZ, ODEC, RD, OUTF, INP, INC, DEC, IDX = range(14)

MNEMONICS = ["OUT0", "OUT1", "HALT", "ENC", "CPY", "JMP", "JZ", "ODEC", "RD", "OUTF", "INP", "INC", "DEC", "IDX"]

# Fixed opcode bits; JMP/JZ are followed by <dir><0^k 1>, INC/DEC by a register bit.
OPCODES = {
    OUT0: "00",
    OUT1: "01",
    HALT: "100",
    ENC: "1010",
    CPY: "1011",
    JMP: "1100",
    JZ: "1101",
    ODEC: "1110",
    RD: "111100",
    OUTF: "111101",
    INP: "1111100",
    INC: "1111101",
    DEC: "1111110",
    IDX: "1111111",
}

DESCRIPTION = """\
# UVM (semantics version uvm-1)

State: output word O (initially empty), flag bit F = 0, oracle cursor C = 0,
counters R0 = R1 = 0, program counter pc = 0 indexing the list of decoded
instructions.  Program bits are consumed only by instruction decoding and by
INP.  Whenever pc is at or beyond the end of the decoded list, the next
instruction is decoded from the next unread program bits and appended
(instructions decoded while skipping forward are not executed).  Each
executed instruction is one step; ODEC costs one further step per oracle
bit it reads.  alpha[i] is the i-th oracle bit; reading a missing
oracle or past the end of a finite oracle is Diverged(OracleOutOfRange).

| opcode      | mnemonic | action |
|-------------|----------|--------|
| `00`        | OUT0     | O <- O 0 |
| `01`        | OUT1     | O <- O 1 |
| `100`       | HALT     | halt |
| `1010`      | ENC      | O <- 0^|O| 1 O (prefix-code the output so far) |
| `1011`      | CPY      | F <- alpha[C]; C <- C+1; O <- O F |
| `1100` d u  | JMP      | jump (see below) |
| `1101` d u  | JZ       | jump if F = 0 |
| `1110`      | ODEC     | read 0^n 1 u from the oracle at C, C <- C+2n+1, O <- O u; Diverged(NoTerminator) if only zeros remain |
| `111100`    | RD       | F <- alpha[C]; C <- C+1 |
| `111101`    | OUTF     | O <- O F |
| `1111100`   | INP      | F <- next program bit |
| `1111101` r | INC r    | R_r <- R_r + 1 |
| `1111110` r | DEC r    | if R_r = 0 then F <- 0 else R_r <- R_r - 1 and F <- 1 |
| `1111111`   | IDX      | F <- alpha[R0] |

Jump operand: a direction bit d followed by k in unary (0^k 1).  For the jump
decoded at index i, d = 0 targets max(0, i-1-k) and d = 1 targets i+2+k.
The opcode set is a complete prefix code, so every bit string decodes.

* Halted only when HALT executes and every program bit has been consumed.
* Aborted(RanOffEnd): a decode or INP needs a bit past the end of the program.
* Aborted(TrailingBits): HALT executes with program bits left over.
* Aborted(OutputOverflow): |O| would exceed max_output_len.
* OutOfBudget: more than max_steps steps would be executed.

Stream convention (algorithmic operators and computable sequences): a
program that never halts denotes the infinite sequence of bits it appends to
O.  ENC makes the output non-monotone and is rejected in stream mode.  An
output is accepted as an infinite sequence only when a provable cycle is
observed: two output events with equal (program position, pc, F, R0, R1)
whose oracle cursors are both in the oracle's periodic tail and differ by a
multiple of its period (or are equal).
"""


def _decode(bits: str, pos: int, index: int):
    """Decode the instruction starting at ``pos``; ``None`` if more bits are needed.

    Jump targets are resolved to absolute instruction indices using ``index``,
    the position the instruction will occupy in the decoded list.
    """
    n = len(bits)
    if pos + 2 > n:
        return None
    if bits[pos] == "0":
        return (OUT0 if bits[pos + 1] == "0" else OUT1, 0), pos + 2
    if pos + 3 > n:
        return None
    if bits[pos + 1] == "0":
        if bits[pos + 2] == "0":
            return (HALT, 0), pos + 3
        if pos + 4 > n:
            return None
        return (ENC if bits[pos + 3] == "0" else CPY, 0), pos + 4
    if pos + 4 > n:
        return None
    if bits[pos + 2] == "0":
        op = JMP if bits[pos + 3] == "0" else JZ
        p = pos + 4
        if p >= n:
            return None
        forward = bits[p] == "1"
        p += 1
        k = 0
        while True:
            if p >= n:
                return None
            if bits[p] == "1":
                break
            k += 1
            p += 1
        target = index + 2 + k if forward else max(0, index - 1 - k)
        return (op, target), p + 1
    if bits[pos + 3] == "0":
        return (ODEC, 0), pos + 4
    # 1111 extension
    if pos + 6 > n:
        return None
    if bits[pos + 4] == "0":
        return (RD if bits[pos + 5] == "0" else OUTF, 0), pos + 6
    if pos + 7 > n:
        return None
    sel = bits[pos + 5:pos + 7]
    if sel == "00":
        return (INP, 0), pos + 7
    if sel == "11":
        return (IDX, 0), pos + 7
    if pos + 8 > n:
        return None
    return (INC if sel == "01" else DEC, int(bits[pos + 7])), pos + 8


_WORDS = [code for op, code in OPCODES.items() if op not in (JMP, JZ, INC, DEC, HALT)]
_WORDS += [OPCODES[op] + r for op in (INC, DEC) for r in "01"]
_HALT_WORD = OPCODES[HALT]
_JUMPS = (OPCODES[JMP], OPCODES[JZ])


def children(state: list, bits: str, limit: int) -> list[str]:
    """Extensions of a NEED_BIT node by one whole instruction word (or INP's data bit).

    Only programs of length <= ``limit`` that can still halt are kept: unless
    a HALT is already decoded, a later HALT costs at least 3 more bits.
    """
    pos, pc, code = state[0], state[1], state[8]
    n = len(bits)
    assert pos == n, "expansion only at instruction boundaries"
    tail = 0 if (HALT, 0) in code else 3
    if pc < len(code):  # INP waiting for its data bit
        return [bits + "0", bits + "1"] if n + 1 + tail <= limit else []
    out = [bits + _HALT_WORD] if n + 3 <= limit else []
    room = limit - n - tail
    for w in _WORDS:
        if len(w) <= room:
            out.append(bits + w)
    for op in _JUMPS:
        for d in "01":
            for k in range(room - 6 + 1):
                out.append(bits + op + d + "0" * k + "1")
    return out


class UVM:
    id = MachineId("UVM", "uvm-1")
    DESCRIPTION = DESCRIPTION

    # state: [pos, pc, F, C, R0, R1, steps, out, code, enc_used]

    @staticmethod
    def initial() -> list:
        return [0, 0, 0, 0, 0, 0, 0, "", (), False]

    children = staticmethod(children)

    @staticmethod
    def clone(state: list) -> list:
        return state[:]

    @staticmethod
    def output(state: list) -> str:
        return state[7]

    @staticmethod
    def steps(state: list) -> int:
        return state[6]

    @staticmethod
    def advance(state: list, bits: str, oracle: OracleSpec | None, budget: Budget, trace=None) -> tuple[int, str]:
        pos, pc, F, C, R0, R1, steps, out, code, enc_used = state
        max_steps = budget.max_steps
        max_out = budget.max_output_len
        n = len(bits)
        bit_at = oracle.bit_at if oracle is not None else None
        ez_tail = len(oracle.prefix) if oracle is not None and oracle.kind == EVENTUALLY_ZERO else -1
        status, reason = NEED_BIT, ""
        while True:
            ncode = len(code)
            if pc >= ncode:
                dec = _decode(bits, pos, ncode)
                if dec is None:
                    break
                instr, pos = dec
                code = code + (instr,)
                continue
            if steps >= max_steps:
                status = OUT_OF_BUDGET
                break
            steps += 1
            op, arg = code[pc]
            pc += 1
            emitted = False
            if op <= OUT1:
                out += "0" if op == OUT0 else "1"
                emitted = True
            elif op == JMP:
                pc = arg
            elif op == JZ:
                if F == 0:
                    pc = arg
            elif op == CPY or op == RD:
                b = None if bit_at is None else bit_at(C)
                if b is None:
                    status, reason = DIVERGED, ORACLE_OUT_OF_RANGE
                    break
                F = b
                C += 1
                if op == CPY:
                    out += "1" if b else "0"
                    emitted = True
            elif op == HALT:
                status = HALTED
                break
            elif op == ENC:
                out = "0" * len(out) + "1" + out
                enc_used = True
            elif op == ODEC:
                if bit_at is None:
                    status, reason = DIVERGED, ORACLE_OUT_OF_RANGE
                    break
                k = 0
                while True:
                    if 0 <= ez_tail <= C:
                        status, reason = DIVERGED, NO_TERMINATOR
                        break
                    b = bit_at(C)
                    if b is None:
                        status, reason = DIVERGED, ORACLE_OUT_OF_RANGE
                        break
                    C += 1
                    steps += 1
                    if b:
                        break
                    k += 1
                if status != NEED_BIT:
                    break
                word = []
                for _ in range(k):
                    b = bit_at(C)
                    if b is None:
                        status, reason = DIVERGED, ORACLE_OUT_OF_RANGE
                        break
                    C += 1
                    word.append("1" if b else "0")
                if status != NEED_BIT:
                    break
                steps += k
                if steps > max_steps:
                    status = OUT_OF_BUDGET
                    break
                out += "".join(word)
                emitted = k > 0
            elif op == OUTF:
                out += "1" if F else "0"
                emitted = True
            elif op == INP:
                if pos >= n:
                    # Undo the fetch so the instruction re-executes once the bit arrives.
                    pc -= 1
                    steps -= 1
                    break
                F = 1 if bits[pos] == "1" else 0
                pos += 1
            elif op == INC:
                if arg:
                    R1 += 1
                else:
                    R0 += 1
            elif op == DEC:
                r = R1 if arg else R0
                if r == 0:
                    F = 0
                else:
                    F = 1
                    if arg:
                        R1 -= 1
                    else:
                        R0 -= 1
            else:  # IDX
                b = None if bit_at is None else bit_at(R0)
                if b is None:
                    status, reason = DIVERGED, ORACLE_OUT_OF_RANGE
                    break
                F = b
            if len(out) > max_out:
                status, reason = ABORTED, OUTPUT_OVERFLOW
                break
            if emitted and trace is not None:
                if trace(pos, pc, F, C, R0, R1, len(out), enc_used):
                    break
        state[:] = [pos, pc, F, C, R0, R1, steps, out, code, enc_used]
        return status, reason


# ---------------------------------------------------------------------------
# assembler

_LABEL = re.compile(r"^([A-Za-z_]\w*):\s*(.*)$")


def assemble(source: str) -> str:
    """Assemble ``;``/newline separated mnemonics with optional ``label:`` prefixes.

    ``JMP``/``JZ`` take a label; ``INC``/``DEC`` take a register ``0`` or ``1``.
    """
    items = []
    labels: dict[str, int] = {}
    for raw in re.split(r"[;\n]", source):
        text = raw.split("#", 1)[0].strip()
        while True:
            m = _LABEL.match(text)
            if not m:
                break
            labels[m.group(1)] = len(items)
            text = m.group(2).strip()
        if not text:
            continue
        parts = text.split()
        name = parts[0].upper()
        if name not in MNEMONICS:
            raise ValueError(f"unknown mnemonic {parts[0]!r}")
        items.append((MNEMONICS.index(name), parts[1:]))
    out = []
    for index, (op, args) in enumerate(items):
        code = OPCODES[op]
        if op in (JMP, JZ):
            if len(args) != 1 or args[0] not in labels:
                raise ValueError(f"{MNEMONICS[op]} needs a known label, got {args}")
            target = labels[args[0]]
            if target <= index - 1:
                code += "0" + "0" * (index - 1 - target) + "1"
            elif target >= index + 2:
                code += "1" + "0" * (target - index - 2) + "1"
            else:
                raise ValueError(f"jump at {index} cannot target {target} (self or next)")
        elif op in (INC, DEC):
            if len(args) != 1 or args[0] not in ("0", "1"):
                raise ValueError(f"{MNEMONICS[op]} needs register 0 or 1")
            code += args[0]
        elif args:
            raise ValueError(f"{MNEMONICS[op]} takes no operand")
        out.append(code)
    return "".join(out)


def disassemble(bits: str) -> list[str]:
    """Decode a complete program into mnemonics; trailing partial code is shown raw."""
    pos, listing = 0, []
    while pos < len(bits):
        dec = _decode(bits, pos, len(listing))
        if dec is None:
            listing.append(f"<partial {bits[pos:]}>")
            break
        (op, arg), pos = dec
        if op in (JMP, JZ):
            listing.append(f"{MNEMONICS[op]} @{arg}")
        elif op in (INC, DEC):
            listing.append(f"{MNEMONICS[op]} {arg}")
        else:
            listing.append(MNEMONICS[op])
    return listing


# ---------------------------------------------------------------------------
# stream mode


@dataclass(frozen=True)
class StreamResult:
    emitted: str
    sequence: OracleSpec | None
    reason: str = ""

    @property
    def resolved(self) -> bool:
        return self.sequence is not None


def stream(program: str, oracle: OracleSpec | None, max_steps: int = 20000, max_output: int = 4096) -> StreamResult:
    """Run ``program`` as an operator and try to resolve its infinite output."""
    tail = oracle.tail if oracle is not None else (0, 1)
    seen: dict[tuple, list[tuple[int, int]]] = {}
    found: list = []

    def trace(pos, pc, F, C, R0, R1, outlen, enc_used):
        if enc_used:
            found.append("enc")
            return True
        key = (pos, pc, F, R0, R1)
        for c0, len0 in seen.get(key, ()):
            delta = C - c0
            if delta == 0 or (tail is not None and c0 >= tail[0] and delta % tail[1] == 0):
                found.append((len0, outlen))
                return True
        seen.setdefault(key, []).append((C, outlen))
        return False

    state = UVM.initial()
    status, reason = UVM.advance(state, program, oracle, Budget(max(1, len(program)), max_steps, max_output), trace)
    out = state[7]
    pos = state[0]
    if found:
        if found[0] == "enc":
            return StreamResult(out, None, "ENC in stream mode")
        if pos != len(program):
            return StreamResult(out, None, TRAILING_BITS)
        start, end = found[0]
        return StreamResult(out, eventually_periodic(out[:start], out[start:end]))
    if status == NEED_BIT:
        return StreamResult(out, None, RAN_OFF_END)
    if status == HALTED:
        return StreamResult(out, None, "HaltedWithFiniteOutput")
    if status == DIVERGED:
        return StreamResult(out, None, f"Diverged({reason})")
    if status == ABORTED:
        return StreamResult(out, None, reason or OUTPUT_OVERFLOW)
    return StreamResult(out, None, "NoCycleWithinBudget")


def literal_program(x: str) -> str:
    """The UVM program that prints ``x`` literally and halts."""
    return "".join(OPCODES[OUT1] if c == "1" else OPCODES[OUT0] for c in x) + OPCODES[HALT]
