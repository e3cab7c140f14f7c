"""Radius-3 binary rule tables and their hexadecimal codec.

A rule is a lookup table with 2**7 = 128 entries.  Entry ``n`` holds the
next state of a cell whose seven-cell neighborhood (three cells to the
left, the cell itself, three cells to the right), read left to right,
forms the binary number ``n`` with the leftmost cell as the most
significant bit.

The canonical text form is a 32-digit hex string: each digit expands to
four bits, most significant first, and the concatenated 128-bit string
lists the outputs for neighborhoods 0..127 in order.  The leftmost bit of
the expansion therefore serves the numerically smallest neighborhood.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

RADIUS = 3
NEIGHBORHOOD_CELLS = 2 * RADIUS + 1
RULE_BITS = 1 << NEIGHBORHOOD_CELLS  # 128
RULE_HEX_DIGITS = RULE_BITS // 4  # 32

_HEX_CHARS = set("0123456789abcdefABCDEF")


class RuleFormatError(ValueError):
    """Malformed rule string or rule-list file."""


@dataclass(frozen=True, eq=False)
class RuleTable:
    """Immutable 128-entry lookup table for a radius-3 binary rule."""

    outputs: np.ndarray  # (128,) uint8, values 0/1, read-only

    def __post_init__(self):
        arr = np.ascontiguousarray(self.outputs, dtype=np.uint8)
        if arr.shape != (RULE_BITS,):
            raise ValueError(f"rule table needs {RULE_BITS} outputs, got shape {arr.shape}")
        if not np.all(arr <= 1):
            raise ValueError("rule table outputs must be 0 or 1")
        arr.setflags(write=False)
        object.__setattr__(self, "outputs", arr)

    @classmethod
    def from_hex(cls, s: str) -> "RuleTable":
        return parse_hex(s)

    def to_hex(self) -> str:
        return format_hex(self)

    def __eq__(self, other):
        if not isinstance(other, RuleTable):
            return NotImplemented
        return bool(np.array_equal(self.outputs, other.outputs))

    def __hash__(self):
        return hash(self.outputs.tobytes())

    def __repr__(self):
        return f"RuleTable({self.to_hex()!r})"


def parse_hex(s: str) -> RuleTable:
    """Decode a 32-digit hex string into a rule table.

    Digit expansion is most-significant-bit first; the 128-bit
    concatenation is read as outputs for neighborhoods 0, 1, ..., 127.
    """
    if len(s) != RULE_HEX_DIGITS:
        raise RuleFormatError(
            f"rule string has {len(s)} characters, expected {RULE_HEX_DIGITS}"
        )
    for pos, ch in enumerate(s):
        if ch not in _HEX_CHARS:
            raise RuleFormatError(f"invalid hex digit {ch!r} at position {pos}")
    bits = np.unpackbits(np.frombuffer(bytes.fromhex(s), dtype=np.uint8))
    return RuleTable(bits)


def format_hex(rule: RuleTable) -> str:
    """Uppercase 32-digit hex form; exact inverse of :func:`parse_hex`."""
    return np.packbits(rule.outputs).tobytes().hex().upper()


def random_rule(rng: np.random.Generator) -> RuleTable:
    """Uniform random 128-bit rule table."""
    return RuleTable(rng.integers(0, 2, size=RULE_BITS, dtype=np.uint8))


def load_rule_file(path) -> list[RuleTable]:
    """Read a rule-list file: one hex rule per line.

    Blank lines and lines starting with '#' are ignored.  All parse errors
    are collected and reported together with their line numbers.
    """
    rules = []
    errors = []
    text = Path(path).read_text()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            rules.append(parse_hex(line))
        except RuleFormatError as exc:
            errors.append(f"line {lineno}: {exc}")
    if errors:
        raise RuleFormatError("\n".join(errors))
    return rules


def save_rule_file(path, rules, comment: str | None = None) -> None:
    """Write rules as one hex string per line, optionally with a '#' header."""
    lines = []
    if comment:
        lines.extend(f"# {ln}" for ln in comment.splitlines())
    lines.extend(format_hex(r) for r in rules)
    Path(path).write_text("\n".join(lines) + "\n")
