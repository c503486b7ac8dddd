from __future__ import annotations

from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from ait.bitcore import render_bits
from ait.errors import UnknownMachine
from ait.machine import Budget, describe_machine, get_machine, machine_document, run
from ait.oracle import ZEROS, eventually_periodic, eventually_zero, finite_word, parse_optional_oracle
from ait.uvm import assemble, disassemble, literal_program, stream

ROOT = Path(__file__).resolve().parent.parent
GOLDEN = Path(__file__).resolve().parent / "golden"
BIG = Budget(64, 200, 32)

programs = st.text(alphabet="01", max_size=20)
oracles = st.sampled_from([None, ZEROS, eventually_zero("011"), finite_word("1"), eventually_periodic("", "10")])


def _golden_lines(name: str):
    lines = (GOLDEN / name).read_text().splitlines()
    header, body = lines[0], lines[1:]
    return header, [ln.split(" ") for ln in body]


@pytest.mark.parametrize("machine,name", [("TOK", "tok_runs.txt"), ("UVM", "uvm_runs.txt")])
def test_golden_runs(machine, name):
    header, rows = _golden_lines(name)
    assert get_machine(machine).id.semantics_version in header
    assert BIG.fingerprint in header
    assert len(rows) > 100
    for prog, fp, expected in rows:
        program = "" if prog == "-" else prog
        assert run(machine, program, parse_optional_oracle(fp), BIG).render() == expected, (prog, fp)


def test_tok_examples():
    assert run("TOK", "0110", None, BIG).output == "1"
    assert run("TOK", "010010", None, BIG).output == "10"
    assert run("TOK", "1110", eventually_zero("1"), BIG).output == "1"
    r = run("TOK", "11", None, BIG)
    assert r.status == "Diverged" and r.reason == "OracleOutOfRange"
    assert run("TOK", "1000", None, BIG).reason == "TrailingBits"
    assert run("TOK", "000", None, BIG).reason == "RanOffEnd"
    assert run("TOK", "000010", None, Budget(8, 2, 8)).status == "OutOfBudget"
    assert run("TOK", "000010", None, Budget(8, 8, 1)).reason == "OutputOverflow"


@given(st.text(alphabet="01", max_size=8))
def test_tok_literal_length(x):
    p = "".join("0" + c for c in x) + "10"
    r = run("TOK", p, None, BIG)
    assert r.halted and r.output == x and len(p) == 2 * len(x) + 2


@pytest.mark.parametrize("src,oracle,out", [
    ("OUT1; ENC; OUT0; HALT", None, "0110"),
    ("ODEC; HALT", eventually_zero("011"), "1"),
    ("RD; OUTF; CPY; HALT", eventually_zero("01"), "01"),
    ("INC 0; INC 0; L: DEC 0; JZ E; OUT1; JMP L; E: HALT", None, "11"),
    ("IDX; OUTF; INC 0; IDX; OUTF; HALT", eventually_zero("01"), "01"),
])
def test_uvm_programs(src, oracle, out):
    r = run("UVM", assemble(src), oracle, BIG)
    assert r.halted and r.output == out


def test_uvm_inp_reads_program_bit():
    p = assemble("INP") + "1" + assemble("OUTF; HALT")
    assert run("UVM", p, None, BIG).output == "1"


def test_uvm_oracle_index_out_of_range():
    r = run("UVM", assemble("INC 0; IDX; HALT"), finite_word("1"), BIG)
    assert r.status == "Diverged" and r.reason == "OracleOutOfRange"


@given(st.text(alphabet="01", max_size=10))
def test_uvm_literal_program(x):
    r = run("UVM", literal_program(x), None, BIG)
    assert r.halted and r.output == x


@pytest.mark.parametrize("src", [
    "OUT1; ENC; OUT0; HALT",
    "INC 0; INC 0; L: DEC 0; JZ E; OUT1; JMP L; E: HALT",
    "L: OUT0; JMP L",
    "RD; OUTF; CPY; ODEC; IDX; DEC 1; HALT",
])
def test_assemble_disassemble(src):
    bits = assemble(src)
    listing = disassemble(bits)
    assert len(listing) == len([s for s in src.split(";") if s.strip()])
    assert not any(s.startswith("<partial") for s in listing)


@pytest.mark.parametrize("bad", ["FOO", "JMP nowhere", "INC 2", "HALT 1", "L: JMP L"])
def test_assemble_errors(bad):
    with pytest.raises(ValueError):
        assemble(bad)


@settings(max_examples=300)
@given(st.sampled_from(["TOK", "UVM"]), programs, oracles, st.text(alphabet="01", min_size=1, max_size=6))
def test_domain_is_prefix_free(machine, p, oracle, ext):
    budget = Budget(32, 64, 16)
    if run(machine, p, oracle, budget).halted:
        assert not run(machine, p + ext, oracle, budget).halted
        for i in range(len(p)):
            assert not run(machine, p[:i], oracle, budget).halted


@given(st.sampled_from(["TOK", "UVM"]), programs, oracles)
def test_run_is_deterministic(machine, p, oracle):
    assert run(machine, p, oracle, BIG) == run(machine, p, oracle, BIG)


def test_stream_resolves_periodic_output():
    assert stream(assemble("L: OUT0; JMP L"), None).sequence == ZEROS
    r = stream(assemble("L: CPY; JMP L"), eventually_periodic("1", "10"))
    assert r.sequence == eventually_periodic("1", "10")
    assert not stream(assemble("OUT1; HALT"), None).resolved
    assert stream(assemble("L: OUT1; ENC; JMP L"), None).reason == "ENC in stream mode"


def test_machine_document_matches_file():
    assert (ROOT / "MACHINE.md").read_text() == machine_document()
    for name in ("TOK", "UVM"):
        assert describe_machine(name) in machine_document().replace("\n##", "\n#")


def test_unknown_machine():
    with pytest.raises(UnknownMachine):
        get_machine("FOO")


def test_budget_validation_and_doubling():
    b = Budget(10, 20, 5)
    assert b.doubled() == Budget(20, 40, 10)
    assert b.doubled().covers(b)
    with pytest.raises(ValueError):
        Budget(0, 1, 1)
    assert render_bits("") == "-"
