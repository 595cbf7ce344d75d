"""Gray-map construction of two-level designs from Z4 generator matrices."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Sequence

import numpy as np

from . import _kernels
from .errors import ConsistencyError, InvalidGeneratorError, NotHalvableError
from .z4 import Z4Vector, as_vector, is_valid_column, run_index_array

# gray_sign(z) for z = 0, 1, 2, 3; the real value of (i**z + i**(3 - z)) / (1 - i)
GRAY_SIGN = np.array([1, -1, -1, 1], dtype=np.int8)
# i**x + i**(-x) for x = 0, 1, 2, 3
TRACE = np.array([2, 0, -2, 0], dtype=np.int64)


def gray_sign(z: int) -> int:
    return int(GRAY_SIGN[z % 4])


def gray_pair(z: int) -> tuple[int, int]:
    if z not in (0, 1, 2, 3):
        raise ValueError(f"{z!r} is not an element of Z4")
    return gray_sign(-z), gray_sign(z)


@dataclass(frozen=True)
class GeneratorMatrix:
    n: int
    columns: tuple[Z4Vector, ...]

    def __post_init__(self):
        cols = tuple(as_vector(c) for c in self.columns)
        object.__setattr__(self, "columns", cols)
        if not cols:
            raise InvalidGeneratorError("generator matrix needs at least one column")
        for c in cols:
            if c.n != self.n:
                raise InvalidGeneratorError(f"column {c} does not have length {self.n}")
            if not is_valid_column(c):
                raise InvalidGeneratorError(f"column {c} is not admissible (first odd digit must be 1)")
        if len(set(cols)) != len(cols):
            raise InvalidGeneratorError("generator columns repeat")

    @classmethod
    def of(cls, columns: Sequence) -> "GeneratorMatrix":
        cols = tuple(as_vector(c) for c in columns)
        if not cols:
            raise InvalidGeneratorError("generator matrix needs at least one column")
        return cls(cols[0].n, cols)

    def array(self) -> np.ndarray:
        """``n x s`` integer array."""
        return np.array([c.digits for c in self.columns], dtype=np.int64).T

    def last_row_even(self) -> bool:
        return all(c.digits[-1] % 2 == 0 for c in self.columns)

    def digit_strings(self) -> list[str]:
        return [str(c) for c in self.columns]


@dataclass(frozen=True, eq=False)
class SignMatrix:
    """An ``N x q`` design with entries +-1.

    ``row_labels[i]`` is the run index u of row ``i`` when the design came from
    a generator matrix; generic designs carry ``None``.
    """

    entries: np.ndarray
    row_labels: Optional[tuple[Z4Vector, ...]] = None
    kind: str = "generic"

    def __post_init__(self):
        e = np.ascontiguousarray(self.entries, dtype=np.int8)
        if e.ndim != 2:
            raise ValueError("design must be a 2-d array")
        if not np.all((e == 1) | (e == -1)):
            raise ValueError("design entries must be +1 or -1")
        e.setflags(write=False)
        object.__setattr__(self, "entries", e)
        if self.row_labels is not None and len(self.row_labels) != e.shape[0]:
            raise ValueError("row label count does not match run count")

    @property
    def runs(self) -> int:
        return self.entries.shape[0]

    @property
    def factors(self) -> int:
        return self.entries.shape[1]

    @cached_property
    def packed(self) -> tuple[np.ndarray, np.ndarray]:
        return _kernels.pack_columns(self.entries)

    def row(self, u) -> np.ndarray:
        if self.row_labels is None:
            raise KeyError("design rows are not indexed by Z4 vectors")
        return self.entries[self._row_pos[as_vector(u)]]

    @cached_property
    def _row_pos(self) -> dict:
        return {u: i for i, u in enumerate(self.row_labels)}

    def __eq__(self, other):
        return isinstance(other, SignMatrix) and np.array_equal(self.entries, other.entries)

    __hash__ = None


def _codeword_digits(G: GeneratorMatrix) -> tuple[np.ndarray, tuple[Z4Vector, ...]]:
    U = run_index_array(G.n)
    labels = tuple(Z4Vector(tuple(r)) for r in U)
    return (U @ G.array()) % 4, labels


def construct_even(G: GeneratorMatrix) -> SignMatrix:
    """``4**n`` runs, two columns (gray_sign(-u'g), gray_sign(u'g)) per generator column."""
    Z, labels = _codeword_digits(G)
    N, s = Z.shape
    out = np.empty((N, 2 * s), dtype=np.int8)
    out[:, 0::2] = GRAY_SIGN[(-Z) % 4]
    out[:, 1::2] = GRAY_SIGN[Z]
    return SignMatrix(out, labels, "qc_even")


def construct_odd(G: GeneratorMatrix) -> SignMatrix:
    """As :func:`construct_even` but the last generator column keeps only gray_sign(-u'g)."""
    if len(G.columns) < 2:
        raise InvalidGeneratorError("odd construction needs s + 1 >= 2 generator columns")
    full = construct_even(G)
    return SignMatrix(full.entries[:, :-1], full.row_labels, "qc_odd")


def halve(D: SignMatrix, G: GeneratorMatrix) -> SignMatrix:
    """Keep the runs with last index digit 0 or 1 after checking both halves agree."""
    if not G.last_row_even():
        raise NotHalvableError("last row of the generator matrix has an odd entry")
    if D.row_labels is None:
        raise NotHalvableError("design rows are not indexed by Z4 vectors")
    keep, partner = [], []
    pos = D._row_pos
    for i, u in enumerate(D.row_labels):
        if u.digits[-1] in (0, 1):
            keep.append(i)
            shifted = Z4Vector(u.digits[:-1] + (u.digits[-1] + 2,))
            partner.append(pos[shifted])
    if not np.array_equal(D.entries[keep], D.entries[partner]):
        raise ConsistencyError("the two halves of the design are not identical")
    labels = tuple(D.row_labels[i] for i in keep)
    return SignMatrix(D.entries[keep], labels, D.kind + "_half")
