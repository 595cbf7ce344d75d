"""Binary generator matrices of regular two-level designs.

A column with ones in positions h1, ..., hr is written ``"h1...hr"`` (so
``[1 2 12 3]`` is the 3-row matrix with columns 100, 010, 110, 001) and stored
as a bitmask with bit ``h - 1`` set for position ``h``.  Ordering columns by
mask value gives the familiar sequence 1, 2, 12, 3, 13, 23, 123, 4, ...
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, Union

from .errors import InvalidSelectionError


def label(mask: int) -> str:
    return "".join(str(h + 1) for h in range(mask.bit_length()) if mask >> h & 1)


def mask_of(token: str, rows: int) -> int:
    token = token.strip()
    if not token or not token.isdigit():
        raise InvalidSelectionError(f"bad column token {token!r}")
    mask = 0
    for ch in token:
        h = int(ch)
        if h < 1 or h > rows:
            raise InvalidSelectionError(f"position {h} in {token!r} is outside 1..{rows}")
        if mask >> (h - 1) & 1:
            raise InvalidSelectionError(f"position {h} repeated in {token!r}")
        mask |= 1 << (h - 1)
    return mask


@dataclass(frozen=True)
class BinaryMatrix:
    rows: int
    columns: tuple[int, ...]

    def __post_init__(self):
        cols = tuple(int(c) for c in self.columns)
        object.__setattr__(self, "columns", cols)
        if self.rows < 1:
            raise InvalidSelectionError("a binary matrix needs at least one row")
        for c in cols:
            if c <= 0 or c >= 1 << self.rows:
                raise InvalidSelectionError(f"column {c:#b} is null or has too many rows")
        if len(set(cols)) != len(cols):
            raise InvalidSelectionError("binary matrix columns must be distinct")

    @property
    def m(self) -> int:
        return len(self.columns)

    def tokens(self) -> list[str]:
        return [label(c) for c in self.columns]

    def __str__(self) -> str:
        return "[" + " ".join(self.tokens()) + "]"

    def entry(self, h: int, j: int) -> int:
        """Row ``h`` (1-based) of column ``j`` (0-based)."""
        return self.columns[j] >> (h - 1) & 1

    def rank(self) -> int:
        basis: list[int] = []
        for c in self.columns:
            for b in basis:
                c = min(c, c ^ b)
            if c:
                basis.append(c)
        return len(basis)


def parse_b_notation(tokens: Union[str, Sequence[str]], rows: int) -> BinaryMatrix:
    if isinstance(tokens, str):
        tokens = tokens.strip().strip("[]").split()
    cols = [mask_of(t, rows) for t in tokens]
    if len(set(cols)) != len(cols):
        raise InvalidSelectionError(f"duplicate columns in {' '.join(tokens)}")
    return BinaryMatrix(rows, tuple(cols))


def gamma(rows: int) -> list[int]:
    """Binary vectors x of length ``rows`` in canonical order, as masks (bit h-1 = x_h).

    Canonical order is lexicographic in (x_1, ..., x_rows).
    """
    out = []
    for i in range(1 << rows):
        mask = 0
        for h in range(1, rows + 1):
            if i >> (rows - h) & 1:
                mask |= 1 << (h - 1)
        out.append(mask)
    return out


def parity(x: int) -> int:
    return x.bit_count() & 1
