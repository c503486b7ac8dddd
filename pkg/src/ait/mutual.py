"""Mutual information for strings and for (finitely represented) sequences.

The sequence version is a sum over all pairs of strings, evaluated over
a finite support.  Each term is either ``2**(I(x:y) - K^a(x) - K^b(y))`` (the
complexity form) or ``m^a(x) m^b(y) m(<x,y>) / (m(x) m(y))`` (the a-priori
form).  Sums are exact rationals; ``log2`` values are for display.

These are budget-bounded estimates that mix upper bounds with both signs, so
they are neither certified upper nor certified lower bounds of the true
quantity.  What is exact is the arithmetic over the recorded support and the
monotonicity of the sum in the support.
"""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass, field
from fractions import Fraction

from .bitcore import pair, shortlex_key, strings_up_to
from .complexity import TableStore, k_hat, m_hat
from .enumeration import ComplexityTable
from .errors import NotInTable
from .exact import NEG_INF, frac_json, log2, pow2, render_log2
from .oracle import OracleSpec, tilde

Support = list[tuple[str, str]]


@dataclass
class MutualInfoEstimate:
    sum: Fraction
    support: str
    support_size: int
    skipped: int = 0
    tables: list[str] = field(default_factory=list)
    mode: str = "sum"

    @property
    def log2_value(self) -> float:
        return log2(self.sum)

    def to_json(self) -> dict:
        return {
            "mode": self.mode,
            "sum": frac_json(self.sum),
            "log2": render_log2(self.sum),
            "support": self.support,
            "support_size": self.support_size,
            "skipped_terms": self.skipped,
            "tables": self.tables,
        }


def mi_finite(t: ComplexityTable, x: str, y: str) -> int:
    """``K(x) + K(y) - K(<x,y>)`` from one unrelativized table."""
    return k_hat(t, x) + k_hat(t, y) - k_hat(t, pair(x, y))


def mi_asymmetry(t: ComplexityTable, x: str, y: str) -> int:
    return mi_finite(t, x, y) - mi_finite(t, y, x)


def default_support(n: int) -> Support:
    """All pairs with ``|x|, |y| <= n``, which includes every pair of prefixes up to n."""
    strings = strings_up_to(n)
    return [(x, y) for x in strings for y in strings]


def sort_support(support: Iterable[tuple[str, str]]) -> Support:
    return sorted(set(support), key=lambda p: (shortlex_key(p[0]), shortlex_key(p[1])))


def _describe(support: Support) -> str:
    if not support:
        return "empty"
    nx = max(len(x) for x, _ in support)
    ny = max(len(y) for _, y in support)
    return f"{len(support)} pairs, |x|<={nx}, |y|<={ny}"


def sum_terms(plain: ComplexityTable, ta: ComplexityTable, tb: ComplexityTable, support: Iterable[tuple[str, str]]):
    """Yield ``(x, y, term)`` with ``term`` None when an entry is missing."""
    for x, y in support:
        try:
            e = mi_finite(plain, x, y) - k_hat(ta, x) - k_hat(tb, y)
        except NotInTable:
            yield x, y, None
            continue
        yield x, y, pow2(e)


def apriori_terms(plain: ComplexityTable, ta: ComplexityTable, tb: ComplexityTable, support: Iterable[tuple[str, str]]):
    for x, y in support:
        factors = (m_hat(ta, x), m_hat(tb, y), m_hat(plain, pair(x, y)), m_hat(plain, x), m_hat(plain, y))
        if not all(factors):
            yield x, y, None
            continue
        ma, mb, mxy, mx, my = factors
        yield x, y, ma * mb * mxy / (mx * my)


def _estimate(terms, support: Support, tables: list[str], mode: str) -> MutualInfoEstimate:
    total, skipped = Fraction(0), 0
    for _, _, term in terms:
        if term is None:
            skipped += 1
        else:
            total += term
    return MutualInfoEstimate(total, _describe(support), len(support), skipped, tables, mode)


def _tables(store: TableStore, alpha: OracleSpec, beta: OracleSpec):
    plain, ta, tb = store.plain, store.table(alpha), store.table(beta)
    prov = [f"{t.machine}|{t.oracle}|{t.budget.fingerprint}" for t in (plain, ta, tb)]
    return plain, ta, tb, prov


def mi_infinite_sum(store: TableStore, alpha: OracleSpec, beta: OracleSpec, support: Support) -> MutualInfoEstimate:
    """Truncated ``sum 2**(I(x:y) - K^alpha(x) - K^beta(y))``; missing entries are skipped and counted."""
    plain, ta, tb, prov = _tables(store, alpha, beta)
    return _estimate(sum_terms(plain, ta, tb, support), support, prov, "sum")


def mi_infinite_apriori(store: TableStore, alpha: OracleSpec, beta: OracleSpec, support: Support) -> MutualInfoEstimate:
    """Truncated ``sum m^alpha(x) m^beta(y) m(x,y) / (m(x) m(y))``."""
    plain, ta, tb, prov = _tables(store, alpha, beta)
    return _estimate(apriori_terms(plain, ta, tb, support), support, prov, "apriori")


def mi_infinite_sup(store: TableStore, alpha: OracleSpec, beta: OracleSpec, max_prefix_len: int) -> int | float:
    """Max over prefixes x of alpha and y of beta of ``I(x:y) - K^alpha(x) - K^beta(y)``.

    Returns ``-inf`` when no term is computable.
    """
    plain, ta, tb, _ = _tables(store, alpha, beta)
    xs = sorted({alpha.first_bits(i) for i in range(max_prefix_len + 1)}, key=len)
    ys = sorted({beta.first_bits(j) for j in range(max_prefix_len + 1)}, key=len)
    best: int | float = NEG_INF
    for x in xs:
        for y in ys:
            try:
                v = mi_finite(plain, x, y) - k_hat(ta, x) - k_hat(tb, y)
            except NotInTable:
                continue
            best = max(best, v)
    return best


@dataclass
class TermBoundReport:
    u: str
    v: str
    lhs: Fraction
    rhs: Fraction
    estimate: MutualInfoEstimate

    @property
    def holds(self) -> bool:
        return self.lhs >= self.rhs


def term_bound_check(store: TableStore, u: str, v: str, support: Support | None = None,
                     support_len: int = 2) -> TermBoundReport:
    """The sum for ``(tilde u, tilde v)`` dominates its ``(u, v)`` term.

    The term is ``2**(I(u:v) - K(u|u) - K(v|v))`` with conditional
    complexities read from the ``tilde`` tables, i.e. exactly the summand.
    """
    if support is None:
        support = default_support(support_len)
    if (u, v) not in support:
        support = list(support) + [(u, v)]
    a, b = tilde(u), tilde(v)
    est = mi_infinite_sum(store, a, b, support)
    rhs = pow2(mi_finite(store.plain, u, v) - store.k_cond(u, u) - store.k_cond(v, v))
    return TermBoundReport(u, v, est.sum, rhs, est)
