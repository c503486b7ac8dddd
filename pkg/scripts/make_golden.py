"""Regenerate tests/golden/*.txt from the current machine semantics.

Only rerun this when a semantics_version is bumped; the golden files are
what freezes observable behaviour.
"""

from __future__ import annotations

from pathlib import Path

from ait.bitcore import render_bits, strings_up_to
from ait.machine import Budget, get_machine, run
from ait.oracle import parse_optional_oracle
from ait.uvm import assemble

GOLDEN = Path(__file__).resolve().parent.parent / "tests" / "golden"
BUDGET = Budget(64, 200, 32)

TOK_ORACLES = ["none", "zeros", "fin:01", "per::10"]
UVM_ORACLES = ["none", "zeros", "ez:011", "fin:1"]
UVM_PROGRAMS = [
    "OUT1; ENC; OUT0; HALT",
    "ODEC; HALT",
    "ODEC; OUT0; HALT",
    "RD; OUTF; CPY; HALT",
    "INC 0; INC 0; L: DEC 0; JZ E; OUT1; JMP L; E: HALT",
    "IDX; OUTF; INC 0; IDX; OUTF; HALT",
    "L: OUT0; JMP L",
]


def lines(machine: str, programs: list[str], oracles: list[str]) -> list[str]:
    out = [f"# {machine} {get_machine(machine).id.semantics_version} budget {BUDGET.fingerprint}"]
    for p in programs:
        for fp in oracles:
            r = run(machine, p, parse_optional_oracle(fp), BUDGET)
            out.append(f"{render_bits(p)} {fp} {r.render()}")
    return out


def main() -> None:
    GOLDEN.mkdir(parents=True, exist_ok=True)
    tok = lines("TOK", strings_up_to(6), TOK_ORACLES)
    # INP reads the next program bit as data, so the data bit is spliced in by hand.
    inp = assemble("INP") + "1" + assemble("OUTF; HALT")
    uvm = lines("UVM", strings_up_to(7) + [assemble(s) for s in UVM_PROGRAMS] + [inp], UVM_ORACLES)
    (GOLDEN / "tok_runs.txt").write_text("\n".join(tok) + "\n")
    (GOLDEN / "uvm_runs.txt").write_text("\n".join(uvm) + "\n")


if __name__ == "__main__":
    main()
