"""Budget-bounded prefix complexity, a-priori probability and mutual information on small reference machines."""

from __future__ import annotations

__version__ = "0.1.0"

from .bitcore import decode_pref, encode_pref, pair, unpair
from .complexity import TableStore, k_cond_hat, k_hat, m_hat
from .enumeration import ComplexityTable, enumerate_table, kraft_sum, merge_tables
from .machine import Budget, describe_machine, run
from .mutual import mi_finite, mi_infinite_apriori, mi_infinite_sum, mi_infinite_sup
from .oracle import OracleSpec, interleave, parse_oracle, tilde

__all__ = [
    "Budget", "ComplexityTable", "OracleSpec", "TableStore",
    "decode_pref", "describe_machine", "encode_pref", "enumerate_table", "interleave",
    "k_cond_hat", "k_hat", "kraft_sum", "m_hat", "merge_tables", "mi_finite",
    "mi_infinite_apriori", "mi_infinite_sum", "mi_infinite_sup", "pair", "parse_oracle",
    "run", "tilde", "unpair",
]
