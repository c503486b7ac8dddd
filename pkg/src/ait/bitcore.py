"""Bit strings, the unary-length prefix code and the pairing built on it.

Bit strings are plain ``str`` values over the characters ``'0'`` and ``'1'``;
the empty string is the empty word.  Everything here is a pure function.
"""

from __future__ import annotations

from collections.abc import Iterator
from itertools import product

from .errors import MalformedCode

EMPTY = ""


def is_bits(s: object) -> bool:
    return isinstance(s, str) and all(c in "01" for c in s)


def check_bits(s: str) -> str:
    if not is_bits(s):
        raise ValueError(f"not a bit string: {s!r}")
    return s


def parse_bits(token: str) -> str:
    """Parse a CLI bit-string argument, where ``-`` stands for the empty word."""
    if token == "-":
        return EMPTY
    return check_bits(token)


def render_bits(s: str) -> str:
    return s if s else "-"


def encode_pref(u: str) -> str:
    """Return ``0^|u| 1 u``."""
    return "0" * len(u) + "1" + u


def decode_pref(w: str) -> tuple[str, str]:
    """Split ``w`` into ``(u, rest)`` where ``w == encode_pref(u) + rest``."""
    n = w.find("1")
    if n < 0:
        raise MalformedCode(f"no terminating 1 in {w!r}")
    start = n + 1
    if len(w) - start < n:
        raise MalformedCode(f"code word {w!r} announces {n} bits but has {len(w) - start}")
    return w[start:start + n], w[start + n:]


def pair(x: str, y: str) -> str:
    return encode_pref(x) + y


def unpair(w: str) -> tuple[str, str]:
    return decode_pref(w)


def triple(x: str, y: str, z: str) -> str:
    """``<x, <y, z>>``, the nested pairing used for three-argument a-priori terms."""
    return pair(x, pair(y, z))


def strings_of_length(n: int) -> Iterator[str]:
    for bits in product("01", repeat=n):
        yield "".join(bits)


def strings_up_to(n: int) -> list[str]:
    """All bit strings of length <= n in length-lexicographic order."""
    return [s for k in range(n + 1) for s in strings_of_length(k)]


def shortlex_key(s: str) -> tuple[int, str]:
    return (len(s), s)
