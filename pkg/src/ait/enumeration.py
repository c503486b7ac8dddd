"""Exhaustive enumeration of halting programs into complexity tables.

The program space up to ``max_program_len`` is explored as a trie: a machine
state is advanced until it asks for another program bit and is then cloned
for both continuations.  This visits every program of length <= L exactly as
``run`` would judge it, but shares the work of common prefixes.

The space is split into disjoint partitions (all programs shorter than
``split_depth`` and one subtree per root word of that length).  Partitions
are independent, can run in worker processes and are reduced with
:func:`merge_tables`, which is associative and commutative, so the table is
independent of scheduling.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import NamedTuple

from .bitcore import render_bits, shortlex_key, strings_of_length
from .errors import IncompatibleTables, ResourceLimit
from .machine import ABORTED, DIVERGED, HALTED, NEED_BIT, OUT_OF_BUDGET, Budget, get_machine
from .oracle import OracleSpec, parse_optional_oracle

TABLE_FORMAT = "ait-table v1"
DEFAULT_ENTRY_CAP = 4_000_000
STAT_KEYS = ("halted", "diverged", "out_of_budget", "aborted")


class Entry(NamedTuple):
    """One output's record; ``m_hat == m_num / 2**m_exp`` with the pair in lowest terms."""

    k_hat: int
    m_num: int
    m_exp: int
    witness: str

    @property
    def m_hat(self) -> Fraction:
        return Fraction(self.m_num, 1 << self.m_exp)


def dyadic_reduce(num: int, exp: int) -> tuple[int, int]:
    if num == 0:
        return 0, 0
    tz = min((num & -num).bit_length() - 1, exp)
    return num >> tz, exp - tz


def dyadic_add(a: tuple[int, int], b: tuple[int, int]) -> tuple[int, int]:
    (n1, e1), (n2, e2) = a, b
    e = max(e1, e2)
    return dyadic_reduce((n1 << (e - e1)) + (n2 << (e - e2)), e)


@dataclass
class ComplexityTable:
    machine: str
    semantics_version: str
    oracle: str
    budget: Budget
    entries: dict[str, Entry] = field(default_factory=dict)
    stats: dict[str, int] = field(default_factory=lambda: dict.fromkeys(STAT_KEYS, 0))

    @property
    def kraft(self) -> Fraction:
        return kraft_sum(self)

    def __contains__(self, x: str) -> bool:
        return x in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    def metadata(self) -> tuple:
        return (self.machine, self.semantics_version, self.oracle, self.budget)

    def dumps(self) -> str:
        return dumps_table(self)


def to_dyadic(q: Fraction) -> tuple[int, int]:
    """``(numerator, exponent)`` with ``q == numerator / 2**exponent`` and minimal exponent."""
    den = q.denominator
    exp = den.bit_length() - 1
    if den != 1 << exp:
        raise ValueError(f"{q} is not dyadic")
    return q.numerator, exp


def kraft_sum(t: ComplexityTable) -> Fraction:
    acc = (0, 0)
    for e in t.entries.values():
        acc = dyadic_add(acc, (e.m_num, e.m_exp))
    return Fraction(acc[0], 1 << acc[1])


def _better(a: Entry, b: Entry) -> bool:
    return (a.k_hat, a.witness) < (b.k_hat, b.witness)


def _merge_into(entries: dict[str, Entry], other: dict[str, Entry]) -> None:
    for x, e in other.items():
        old = entries.get(x)
        if old is None:
            entries[x] = e
        else:
            best = e if _better(e, old) else old
            num, exp = dyadic_add((old.m_num, old.m_exp), (e.m_num, e.m_exp))
            entries[x] = Entry(best.k_hat, num, exp, best.witness)


def merge_tables(a: ComplexityTable, b: ComplexityTable) -> ComplexityTable:
    """Combine tables built from disjoint program sets under the same settings."""
    if a.metadata() != b.metadata():
        raise IncompatibleTables(f"cannot merge {a.metadata()} with {b.metadata()}")
    entries = dict(a.entries)
    _merge_into(entries, b.entries)
    stats = {k: a.stats.get(k, 0) + b.stats.get(k, 0) for k in STAT_KEYS}
    return ComplexityTable(a.machine, a.semantics_version, a.oracle, a.budget, entries, stats)


def empty_table(machine: str, oracle: OracleSpec | None, budget: Budget) -> ComplexityTable:
    m = get_machine(machine)
    return ComplexityTable(machine, m.id.semantics_version, _fp(oracle), budget)


def _fp(oracle: OracleSpec | None) -> str:
    return "none" if oracle is None else oracle.fingerprint


# ---------------------------------------------------------------------------
# exploration


def _start_nodes(m, oracle: OracleSpec | None, budget: Budget, root: str) -> list[tuple[str, list]]:
    """The nodes of the full search tree that are minimal extensions of ``root``.

    The tree is walked from the empty program along ``root``; every node on
    the way is shorter than ``root`` and belongs to the partition of short
    programs.
    """
    L = budget.max_program_len
    d = len(root)
    starts = []
    stack = [("", m.initial())]
    while stack:
        bits, st = stack.pop()
        if m.advance(st, bits, oracle, budget)[0] != NEED_BIT:
            continue
        for c in m.children(st, bits, L):
            if len(c) >= d:
                if c.startswith(root):
                    starts.append((c, m.clone(st)))
            elif root.startswith(c):
                stack.append((c, m.clone(st)))
    return starts


def explore(machine: str, oracle: OracleSpec | None, budget: Budget, root: str = "",
            max_len: int | None = None) -> ComplexityTable:
    """Enumerate the search tree below ``root``, keeping nodes of length <= ``max_len``.

    The tree grows by whole instructions and omits branches that cannot halt
    within L bits.  Partitions only distribute its nodes, so tables and their
    statistics do not depend on how the space is split.
    """
    m = get_machine(machine)
    L = budget.max_program_len
    limit = L if max_len is None else max_len
    advance, clone, output, children = m.advance, m.clone, m.output, m.children
    acc: dict[str, list] = {}
    stats = dict.fromkeys(STAT_KEYS, 0)
    stack = [("", m.initial())] if not root else _start_nodes(m, oracle, budget, root)
    while stack:
        bits, st = stack.pop()
        status, _ = advance(st, bits, oracle, budget)
        if status == NEED_BIT:
            kids = [c for c in children(st, bits, L) if len(c) <= limit]
            for c in kids[1:]:
                stack.append((c, clone(st)))
            if kids:
                stack.append((kids[0], st))
            continue
        if status == HALTED:
            stats["halted"] += 1
            pos = st[0]
            x = output(st)
            rec = acc.get(x)
            weight = 1 << (L - pos)
            if rec is None:
                acc[x] = [pos, bits, weight]
            else:
                if (pos, bits) < (rec[0], rec[1]):
                    rec[0], rec[1] = pos, bits
                rec[2] += weight
        elif status == DIVERGED:
            stats["diverged"] += 1
        elif status == OUT_OF_BUDGET:
            stats["out_of_budget"] += 1
        elif status == ABORTED:
            stats["aborted"] += 1
    t = empty_table(machine, oracle, budget)
    t.entries = {x: Entry(k, *dyadic_reduce(w8, L), w) for x, (k, w, w8) in acc.items()}
    t.stats = stats
    return t


def halting_programs(machine: str, oracle: OracleSpec | None, budget: Budget):
    """Yield ``(program, output)`` for every halting program of length <= L, in DFS order."""
    m = get_machine(machine)
    stack = [("", m.initial())]
    while stack:
        bits, st = stack.pop()
        status, _ = m.advance(st, bits, oracle, budget)
        if status == NEED_BIT:
            if len(bits) < budget.max_program_len:
                stack.append((bits + "1", m.clone(st)))
                stack.append((bits + "0", st))
        elif status == HALTED:
            yield bits[:st[0]], m.output(st)


def partitions(budget: Budget, split_depth: int) -> list[tuple[str, int]]:
    """Disjoint ``(root, max_len)`` jobs covering all programs of length <= L."""
    L = budget.max_program_len
    if split_depth <= 0 or split_depth > L:
        return [("", L)]
    return [("", split_depth - 1)] + [(r, L) for r in strings_of_length(split_depth)]


def _cache_key(machine: str, oracle: OracleSpec | None, budget: Budget, root: str, max_len: int) -> str:
    sem = get_machine(machine).id.semantics_version
    text = f"{machine}|{sem}|{_fp(oracle)}|{budget.fingerprint}|{root}|{max_len}"
    return hashlib.sha256(text.encode()).hexdigest()


def _run_job(args) -> ComplexityTable:
    """One partition, served from the content-addressed cache when present."""
    machine, oracle_fp, budget_t, root, max_len, cache_dir = args
    oracle = parse_optional_oracle(oracle_fp)
    budget = Budget(*budget_t)
    if not cache_dir:
        return explore(machine, oracle, budget, root, max_len)
    key = _cache_key(machine, oracle, budget, root, max_len)
    path = Path(cache_dir) / key[:2] / f"{key}.table"
    if path.exists():
        return load_table(path)
    t = explore(machine, oracle, budget, root, max_len)
    # Idempotent: concurrent writers of one key produce identical bytes.
    atomic_write(path, dumps_table(t))
    return t


def enumerate_table(machine: str, oracle: OracleSpec | None, budget: Budget, *, workers: int = 1,
                    split_depth: int = 6, cache_dir: str | os.PathLike | None = None,
                    entry_cap: int = DEFAULT_ENTRY_CAP) -> ComplexityTable:
    """Run every program of length <= L and tabulate the halting ones."""
    get_machine(machine)
    jobs = [
        (machine, _fp(oracle), (budget.max_program_len, budget.max_steps, budget.max_output_len),
         root, max_len, str(cache_dir) if cache_dir else None)
        for root, max_len in partitions(budget, split_depth)
    ]
    table = empty_table(machine, oracle, budget)

    def absorb(part: ComplexityTable) -> None:
        if part.metadata() != table.metadata():
            raise IncompatibleTables(f"partition metadata {part.metadata()} != {table.metadata()}")
        _merge_into(table.entries, part.entries)
        for k in STAT_KEYS:
            table.stats[k] += part.stats.get(k, 0)
        if len(table.entries) > entry_cap:
            raise ResourceLimit(f"table exceeds entry cap {entry_cap}")

    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for part in pool.map(_run_job, jobs, chunksize=max(1, len(jobs) // (4 * workers))):
                absorb(part)
    else:
        for job in jobs:
            absorb(_run_job(job))
    return table


# ---------------------------------------------------------------------------
# persistence


def atomic_write(path: str | os.PathLike, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-", suffix=path.suffix)
    with os.fdopen(fd, "w", newline="\n") as fh:
        fh.write(text)
    os.replace(tmp, path)


def dumps_table(t: ComplexityTable) -> str:
    num, exp = to_dyadic(kraft_sum(t))
    lines = [
        f"# {TABLE_FORMAT}",
        f"machine {t.machine}",
        f"semantics_version {t.semantics_version}",
        f"oracle {t.oracle}",
        f"budget {t.budget.max_program_len} {t.budget.max_steps} {t.budget.max_output_len}",
        "stats " + " ".join(f"{k}={t.stats.get(k, 0)}" for k in STAT_KEYS),
        f"kraft {num} {exp}",
        f"entries {len(t.entries)}",
    ]
    for x in sorted(t.entries, key=shortlex_key):
        e = t.entries[x]
        lines.append(f"{render_bits(x)} {e.k_hat} {e.m_num} {e.m_exp} {render_bits(e.witness)}")
    return "\n".join(lines) + "\n"


def loads_table(text: str) -> ComplexityTable:
    lines = text.splitlines()
    if not lines or lines[0] != f"# {TABLE_FORMAT}":
        raise ValueError("not an ait table file")
    head = {}
    i = 1
    while i < len(lines) and not lines[i].startswith("entries "):
        key, _, value = lines[i].partition(" ")
        head[key] = value
        i += 1
    count = int(lines[i].split()[1])
    L, T, O = (int(v) for v in head["budget"].split())
    stats = {k: int(v) for k, v in (item.split("=") for item in head["stats"].split())}
    entries = {}
    for line in lines[i + 1:i + 1 + count]:
        x, k, n, e, w = line.split()
        x = "" if x == "-" else x
        w = "" if w == "-" else w
        entries[x] = Entry(int(k), *dyadic_reduce(int(n), int(e)), w)
    return ComplexityTable(head["machine"], head["semantics_version"], head["oracle"], Budget(L, T, O), entries, stats)


def save_table(t: ComplexityTable, path: str | os.PathLike) -> None:
    atomic_write(path, dumps_table(t))


def load_table(path: str | os.PathLike) -> ComplexityTable:
    return loads_table(Path(path).read_text())


def table_json(t: ComplexityTable) -> str:
    """Compact JSON rendering (used by the CLI)."""
    num, exp = to_dyadic(kraft_sum(t))
    rows = []
    for x in sorted(t.entries, key=shortlex_key):
        e = t.entries[x]
        rows.append({"output": x, "k_hat": e.k_hat, "m_num": e.m_num, "m_exp": e.m_exp, "witness": e.witness})
    return json.dumps({
        "machine": t.machine, "semantics_version": t.semantics_version, "oracle": t.oracle,
        "budget": t.budget.to_json(), "kraft": {"num": num, "exp": exp}, "stats": t.stats, "entries": rows,
    }, sort_keys=True)
