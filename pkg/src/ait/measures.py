"""Finite rational measures, P-tests, the Markov implication and deficiency tests.

Test values are integers (possibly negative); ``None`` stands for minus
infinity, i.e. an outcome contributing nothing to ``E 2**t``.
"""

from __future__ import annotations

import json
from collections.abc import Callable, Iterable
from dataclasses import dataclass, field
from fractions import Fraction

from .bitcore import pair, strings_of_length
from .enumeration import ComplexityTable
from .errors import CertifiedInvariantBroken, NotInTable
from .exact import pow2
from .mutual import mi_finite
from .oracle import OracleSpec, parse_oracle


@dataclass(frozen=True)
class FiniteMeasure:
    atoms: dict[str, Fraction]

    def __post_init__(self):
        for k, p in self.atoms.items():
            if p < 0:
                raise ValueError(f"negative probability {p} at {k!r}")

    @property
    def total(self) -> Fraction:
        return sum(self.atoms.values(), Fraction(0))

    @property
    def is_probability(self) -> bool:
        return self.total == 1

    @property
    def is_semimeasure(self) -> bool:
        return self.total <= 1

    def __getitem__(self, key: str) -> Fraction:
        return self.atoms.get(key, Fraction(0))

    def items(self):
        return self.atoms.items()

    def to_json(self) -> dict:
        return {"atoms": [{"key": k, "num": p.numerator, "den": p.denominator} for k, p in self.atoms.items()]}

    @classmethod
    def from_json(cls, d: dict) -> FiniteMeasure:
        atoms: dict[str, Fraction] = {}
        for a in d["atoms"]:
            atoms[a["key"]] = atoms.get(a["key"], Fraction(0)) + Fraction(int(a["num"]), int(a["den"]))
        return cls(atoms)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def uniform(keys: Iterable[str]) -> FiniteMeasure:
    keys = list(dict.fromkeys(keys))
    return FiniteMeasure({k: Fraction(1, len(keys)) for k in keys})


def point_mass(key: str) -> FiniteMeasure:
    return FiniteMeasure({key: Fraction(1)})


def uniform_on_length(n: int) -> FiniteMeasure:
    return uniform(strings_of_length(n))


def oracle_atoms(m: FiniteMeasure) -> list[tuple[OracleSpec, Fraction]]:
    """Atoms of a measure on sequences, keyed by oracle fingerprints."""
    return [(parse_oracle(k), p) for k, p in m.items()]


def cylinder_probability(m: FiniteMeasure, x: str) -> Fraction:
    """P of the set of sequences extending ``x`` for a finite-support measure on sequences."""
    return sum((p for s, p in oracle_atoms(m) if s.first_bits(len(x)) == x), Fraction(0))


@dataclass
class MeasureFamily:
    """A measure ``P_x`` for each index ``x``, with a text description of the rule."""

    description: str
    rule: Callable[[str], FiniteMeasure]
    overrides: dict[str, FiniteMeasure] = field(default_factory=dict)

    def __call__(self, x: str) -> FiniteMeasure:
        return self.overrides[x] if x in self.overrides else self.rule(x)


def family_from_description(text: str) -> MeasureFamily:
    """``uniform:<k>`` | ``uniform-len-of-x`` | ``point:<bits or ->``."""
    if text.startswith("uniform:"):
        k = int(text.split(":", 1)[1])
        return MeasureFamily(text, lambda x, k=k: uniform_on_length(k))
    if text == "uniform-len-of-x":
        return MeasureFamily(text, lambda x: uniform_on_length(len(x)))
    if text.startswith("point:"):
        key = text.split(":", 1)[1]
        key = "" if key == "-" else key
        return MeasureFamily(text, lambda x, key=key: point_mass(key))
    raise ValueError(f"unknown measure family {text!r}")


@dataclass(frozen=True)
class TestFn:
    values: dict[str, int | None]
    default: int | None = None

    __test__ = False  # not a pytest class

    def __call__(self, z: str) -> int | None:
        return self.values.get(z, self.default)

    def to_json(self) -> dict:
        return {"values": [{"key": k, "value": v} for k, v in self.values.items()], "default": self.default}

    @classmethod
    def from_json(cls, d: dict) -> TestFn:
        return cls({a["key"]: a["value"] for a in d["values"]}, d.get("default"))


def expectation(t: TestFn, P: FiniteMeasure) -> Fraction:
    """``E_P 2**t`` exactly."""
    total = Fraction(0)
    for z, p in P.items():
        v = t(z)
        if v is not None and p:
            total += p * pow2(v)
    return total


def tail(t: TestFn, P: FiniteMeasure, n: int) -> Fraction:
    """``P{t >= n}``."""
    return sum((p for z, p in P.items() if t(z) is not None and t(z) >= n), Fraction(0))


def _max_value(t: TestFn, P: FiniteMeasure) -> int:
    vals = [t(z) for z, p in P.items() if p and t(z) is not None]
    return max(vals, default=0)


def is_expectation_bounded(t: TestFn, P: FiniteMeasure) -> tuple[bool, Fraction]:
    e = expectation(t, P)
    return e <= 1, e


def is_probability_bounded(t: TestFn, P: FiniteMeasure) -> tuple[bool, int | None, Fraction]:
    """Check ``P{t >= n} <= 2**-n`` for n = 1 .. max t.

    Returns ``(flag, n, tail)``: the first violated n when the check fails,
    otherwise the tightest n (largest ``2**n P{t >= n}``), or ``None`` when no
    outcome has a positive value.
    """
    worst, worst_score, worst_tail = None, Fraction(-1), Fraction(0)
    for n in range(1, _max_value(t, P) + 1):
        q = tail(t, P, n)
        if q > pow2(-n):
            return False, n, q
        score = q * pow2(n)
        if score > worst_score:
            worst, worst_score, worst_tail = n, score, q
    return True, worst, worst_tail


@dataclass
class MarkovReport:
    expectation: Fraction
    expectation_bounded: bool
    probability_bounded: bool
    violated_n: int | None
    converse_failure: bool

    @property
    def passed(self) -> bool:
        return not self.expectation_bounded or self.probability_bounded


def markov_verify(t: TestFn, P: FiniteMeasure) -> MarkovReport:
    """Expectation-bounded implies probability-bounded, plus ``2**n P{t>=n} <= E 2**t``.

    For tests that are not expectation bounded only the converse status is
    reported.  A failure of the implication raises, since it is impossible.
    """
    eb, e = is_expectation_bounded(t, P)
    pb, n, _ = is_probability_bounded(t, P)
    if eb:
        if not pb:
            raise CertifiedInvariantBroken(f"expectation-bounded test violates tail bound at n={n}")
        for k in range(1, _max_value(t, P) + 1):
            if tail(t, P, k) * pow2(k) > e:
                raise CertifiedInvariantBroken(f"quantitative Markov bound fails at n={k}")
    return MarkovReport(e, eb, pb, None if pb else n, pb and not eb)


@dataclass
class DeficiencyTest:
    test: TestFn
    skipped: list[str]
    base: int  # I(x:y)


def build_deficiency_test(plain: ComplexityTable, x: str, y: str, P: FiniteMeasure, c: int) -> DeficiencyTest:
    """``t(z) = I(<x,z>:y) - I(x:y) - c`` on the atoms of ``P``; atoms lacking entries are skipped."""
    base = mi_finite(plain, x, y)
    values: dict[str, int | None] = {}
    skipped = []
    for z in P.atoms:
        try:
            values[z] = mi_finite(plain, pair(x, z), y) - base - c
        except NotInTable:
            skipped.append(z)
    return DeficiencyTest(TestFn(values, None), skipped, base)


def shifted_expectation(t: TestFn, P: FiniteMeasure, shift: int) -> Fraction:
    """``E 2**(shift + t)``, computed term by term (for the factoring identity)."""
    total = Fraction(0)
    for z, p in P.items():
        v = t(z)
        if v is not None:
            total += p * pow2(shift + v)
    return total
