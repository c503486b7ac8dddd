"""Queries over complexity tables: K-hat, m-hat, conditional complexity.

Conditions enter only through oracles: ``K(x|y)`` is read off the table
relativized to ``tilde(y)``, the sequence ``0^|y| 1 y 0 0 ...``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from statistics import fmean

from .enumeration import ComplexityTable, enumerate_table
from .errors import NotInTable
from .exact import log2, pow2
from .machine import Budget, get_machine, run
from .oracle import OracleSpec, tilde
from .uvm import literal_program


def k_hat(t: ComplexityTable, x: str) -> int:
    """Length of the shortest halting program found for ``x``."""
    e = t.entries.get(x)
    if e is None:
        raise NotInTable(f"{x or 'ε'} not produced by any program within {t.budget.fingerprint} on oracle {t.oracle}")
    return e.k_hat


def m_hat(t: ComplexityTable, x: str) -> Fraction:
    e = t.entries.get(x)
    return e.m_hat if e is not None else Fraction(0)


def literal_program_for(machine: str, x: str) -> str:
    if machine == "TOK":
        return "".join("01" if c == "1" else "00" for c in x) + "10"
    return literal_program(x)


def literal_upper_bound(machine: str, x: str) -> int:
    """Length of a verified literal-printing program for ``x``: a budget-free upper bound on K."""
    p = literal_program_for(machine, x)
    out = run(machine, p, None, Budget(len(p), len(p) + 1, max(1, len(x))))
    assert out.halted and out.output == x
    return len(p)


def k_upper(t: ComplexityTable, x: str) -> int:
    """``min(k_hat, literal bound)``; always defined."""
    bound = literal_upper_bound(t.machine, x)
    e = t.entries.get(x)
    return bound if e is None else min(e.k_hat, bound)


@dataclass(frozen=True)
class CodingTheoremGap:
    """``k_hat(x) + log2 m_hat(x)``, kept exactly as ``2**k_hat * m_hat``."""

    x: str
    pow2_gap: Fraction

    @property
    def gap(self) -> float:
        return log2(self.pow2_gap)


def coding_theorem_gap(t: ComplexityTable) -> dict[str, CodingTheoremGap]:
    return {x: CodingTheoremGap(x, pow2(e.k_hat) * e.m_hat) for x, e in t.entries.items()}


def coding_theorem_summary(t: ComplexityTable) -> dict:
    gaps = [g.gap for g in coding_theorem_gap(t).values()]
    if not gaps:
        return {"count": 0, "min": None, "max": None, "mean": None}
    return {"count": len(gaps), "min": min(gaps), "max": max(gaps), "mean": fmean(gaps)}


@dataclass(frozen=True)
class ComplexityQueryResult:
    value: int | Fraction
    budget: Budget
    is_exact_on_TOK: bool


class TableStore:
    """Memoized tables for one machine and budget, keyed by oracle."""

    def __init__(self, machine: str, budget: Budget, *, workers: int = 1,
                 cache_dir: str | os.PathLike | None = None, split_depth: int = 6):
        get_machine(machine)
        self.machine = machine
        self.budget = budget
        self.workers = workers
        self.cache_dir = cache_dir
        self.split_depth = split_depth
        self._tables: dict[str, ComplexityTable] = {}

    def table(self, oracle: OracleSpec | None = None) -> ComplexityTable:
        key = "none" if oracle is None else oracle.fingerprint
        t = self._tables.get(key)
        if t is None:
            t = enumerate_table(self.machine, oracle, self.budget, workers=self.workers,
                                split_depth=self.split_depth, cache_dir=self.cache_dir)
            self._tables[key] = t
        return t

    @property
    def plain(self) -> ComplexityTable:
        return self.table(None)

    def with_budget(self, budget: Budget) -> TableStore:
        return TableStore(self.machine, budget, workers=self.workers, cache_dir=self.cache_dir,
                          split_depth=self.split_depth)

    def doubled(self) -> TableStore:
        return self.with_budget(self.budget.doubled())

    def provenance(self) -> list[str]:
        return [f"{self.machine}|{k}|{self.budget.fingerprint}" for k in sorted(self._tables)]

    def k(self, x: str, oracle: OracleSpec | None = None) -> int:
        return k_hat(self.table(oracle), x)

    def m(self, x: str, oracle: OracleSpec | None = None) -> Fraction:
        return m_hat(self.table(oracle), x)

    def k_cond(self, x: str, y: str) -> int:
        return k_hat(self.table(tilde(y)), x)

    def query(self, x: str, oracle: OracleSpec | None = None) -> ComplexityQueryResult:
        return ComplexityQueryResult(self.k(x, oracle), self.budget, self.machine == "TOK" and oracle is None)


def k_cond_hat(machine: str, x: str, y: str, budget: Budget, **store_kwargs) -> int:
    """``K(x|y)`` estimate: ``k_hat`` of x relative to the oracle ``tilde(y)``."""
    t = enumerate_table(machine, tilde(y), budget, **store_kwargs)
    return k_hat(t, x)
