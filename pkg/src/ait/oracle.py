"""Finitely represented infinite binary sequences used as oracles.

Three kinds are supported:

* ``EventuallyZero(prefix)``: ``prefix`` followed by zeros forever.
* ``EventuallyPeriodic(prefix, period)``: ``prefix`` followed by ``period`` repeated.
* ``FiniteWord(word)``: a finite oracle; reading past its end is divergence.

Values are canonicalized on construction, so two specs denote the same
sequence iff their fingerprints are equal.  The textual grammar is::

    zeros | ez:<bits> | per:<prefix>:<period> | fin:<bits>
          | tilde:<bits> | pair(<spec>,<spec>)

``tilde`` and ``pair`` are parse-time sugar and never appear in fingerprints.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import lcm

from .bitcore import check_bits, encode_pref
from .errors import UnsupportedOracle

EVENTUALLY_ZERO = "ez"
EVENTUALLY_PERIODIC = "per"
FINITE_WORD = "fin"


@dataclass(frozen=True)
class OracleSpec:
    kind: str
    prefix: str
    period: str = ""

    # Use the module constructors; they canonicalize.

    @property
    def fingerprint(self) -> str:
        if self.kind == EVENTUALLY_ZERO:
            return "zeros" if not self.prefix else f"ez:{self.prefix}"
        if self.kind == EVENTUALLY_PERIODIC:
            return f"per:{self.prefix}:{self.period}"
        return f"fin:{self.prefix}"

    def __str__(self) -> str:
        return self.fingerprint

    @property
    def is_infinite(self) -> bool:
        return self.kind != FINITE_WORD

    @property
    def tail(self) -> tuple[int, int] | None:
        """``(start, period)`` such that bit i == bit i+period for all i >= start."""
        if self.kind == EVENTUALLY_ZERO:
            return len(self.prefix), 1
        if self.kind == EVENTUALLY_PERIODIC:
            return len(self.prefix), len(self.period)
        return None

    def bit_at(self, i: int) -> int | None:
        """The i-th bit (0-indexed), or ``None`` when a finite word is exhausted."""
        n = len(self.prefix)
        if i < n:
            return 1 if self.prefix[i] == "1" else 0
        if self.kind == EVENTUALLY_ZERO:
            return 0
        if self.kind == EVENTUALLY_PERIODIC:
            return 1 if self.period[(i - n) % len(self.period)] == "1" else 0
        return None

    def first_bits(self, n: int) -> str:
        """The first ``n`` bits (fewer for an exhausted finite word)."""
        out = []
        for i in range(n):
            b = self.bit_at(i)
            if b is None:
                break
            out.append("1" if b else "0")
        return "".join(out)


def eventually_zero(prefix: str = "") -> OracleSpec:
    check_bits(prefix)
    return OracleSpec(EVENTUALLY_ZERO, prefix.rstrip("0"))


ZEROS = eventually_zero("")


def _primitive_root(period: str) -> str:
    n = len(period)
    for d in range(1, n + 1):
        if n % d == 0 and period[:d] * (n // d) == period:
            return period[:d]
    return period


def eventually_periodic(prefix: str, period: str) -> OracleSpec:
    check_bits(prefix)
    check_bits(period)
    if not period:
        raise ValueError("period must be nonempty")
    period = _primitive_root(period)
    while prefix and prefix[-1] == period[-1]:
        prefix = prefix[:-1]
        period = period[-1] + period[:-1]
    if period == "0":
        return eventually_zero(prefix)
    return OracleSpec(EVENTUALLY_PERIODIC, prefix, period)


def finite_word(word: str) -> OracleSpec:
    return OracleSpec(FINITE_WORD, check_bits(word))


def tilde(u: str) -> OracleSpec:
    """The sequence ``0^|u| 1 u 0 0 0 ...``."""
    return eventually_zero(encode_pref(u))


def interleave(rho: OracleSpec, omega: OracleSpec) -> OracleSpec:
    """Even 0-based positions from ``rho``, odd positions from ``omega``."""
    if not (rho.is_infinite and omega.is_infinite):
        raise UnsupportedOracle("interleave needs two infinite sequences")
    (s1, p1), (s2, p2) = rho.tail, omega.tail
    start = max(s1, s2)
    per = lcm(p1, p2)
    prefix = "".join(rho.first_bits(start)[i] + omega.first_bits(start)[i] for i in range(start))
    a = rho.first_bits(start + per)[start:]
    b = omega.first_bits(start + per)[start:]
    period = "".join(x + y for x, y in zip(a, b))
    return eventually_periodic(prefix, period)


def project(spec: OracleSpec, parity: int, n: int) -> str:
    """First ``n`` bits at positions congruent to ``parity`` mod 2."""
    return "".join(str(spec.bit_at(2 * k + parity)) for k in range(n))


def parse_oracle(text: str) -> OracleSpec:
    """Parse the oracle grammar described in the module docstring."""
    spec, rest = _parse(text.strip())
    if rest:
        raise ValueError(f"trailing text in oracle spec: {rest!r}")
    return spec


def parse_optional_oracle(text: str | None) -> OracleSpec | None:
    if text is None or text in ("", "none"):
        return None
    return parse_oracle(text)


def _take_bits(text: str) -> tuple[str, str]:
    i = 0
    while i < len(text) and text[i] in "01":
        i += 1
    return text[:i], text[i:]


def _parse(text: str) -> tuple[OracleSpec, str]:
    if text.startswith("zeros"):
        return ZEROS, text[5:]
    if text.startswith("pair("):
        left, rest = _parse(text[5:])
        if not rest.startswith(","):
            raise ValueError(f"expected ',' in pair spec near {rest!r}")
        right, rest = _parse(rest[1:].lstrip())
        if not rest.startswith(")"):
            raise ValueError(f"expected ')' in pair spec near {rest!r}")
        return interleave(left, right), rest[1:]
    for tag, build in (("ez:", eventually_zero), ("fin:", finite_word), ("tilde:", tilde)):
        if text.startswith(tag):
            bits, rest = _take_bits(text[len(tag):])
            return build(bits), rest
    if text.startswith("per:"):
        prefix, rest = _take_bits(text[4:])
        if not rest.startswith(":"):
            raise ValueError("per spec needs per:<prefix>:<period>")
        period, rest = _take_bits(rest[1:])
        return eventually_periodic(prefix, period), rest
    raise ValueError(f"cannot parse oracle spec {text!r}")
