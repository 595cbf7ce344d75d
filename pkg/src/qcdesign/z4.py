"""Arithmetic over Z4 and the reference sets of admissible generator columns.

Vectors are written as compact digit strings, ``"1220"`` being the column
(1, 2, 2, 0)'.  Every enumeration here is in lexicographic digit order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Literal, Optional, Sequence

import numpy as np

from .errors import InfeasibleError, InvalidDimensionError, InvalidSelectionError

Kind = Literal["full", "last_even"]


@dataclass(frozen=True, order=True)
class Z4Vector:
    digits: tuple[int, ...]

    def __post_init__(self):
        digits = tuple(int(d) % 4 for d in self.digits)
        object.__setattr__(self, "digits", digits)

    @classmethod
    def parse(cls, text: str) -> "Z4Vector":
        text = text.strip()
        if not text or any(c not in "0123" for c in text):
            raise InvalidSelectionError(f"not a Z4 digit string: {text!r}")
        return cls(tuple(int(c) for c in text))

    @property
    def n(self) -> int:
        return len(self.digits)

    def __str__(self) -> str:
        return "".join(str(d) for d in self.digits)

    def __repr__(self) -> str:
        return f"Z4Vector({str(self)!r})"

    def __iter__(self):
        return iter(self.digits)

    def __len__(self):
        return len(self.digits)

    def _check(self, other: "Z4Vector"):
        if len(other.digits) != len(self.digits):
            raise InvalidDimensionError(
                f"length mismatch: {len(self.digits)} vs {len(other.digits)}"
            )

    def __add__(self, other: "Z4Vector") -> "Z4Vector":
        self._check(other)
        return Z4Vector(tuple(a + b for a, b in zip(self.digits, other.digits)))

    def __sub__(self, other: "Z4Vector") -> "Z4Vector":
        self._check(other)
        return Z4Vector(tuple(a - b for a, b in zip(self.digits, other.digits)))

    def __neg__(self) -> "Z4Vector":
        return Z4Vector(tuple(-a for a in self.digits))

    def scale(self, c: int) -> "Z4Vector":
        return Z4Vector(tuple(c * a for a in self.digits))

    def dot(self, other: "Z4Vector") -> int:
        self._check(other)
        return sum(a * b for a, b in zip(self.digits, other.digits)) % 4

    def is_null(self) -> bool:
        return not any(self.digits)

    def all_even(self) -> bool:
        return all(d % 2 == 0 for d in self.digits)


def as_vector(v) -> Z4Vector:
    if isinstance(v, Z4Vector):
        return v
    if isinstance(v, str):
        return Z4Vector.parse(v)
    return Z4Vector(tuple(v))


def all_vectors(n: int) -> list[Z4Vector]:
    """Every vector of length ``n`` over Z4 (the run index set), in canonical order."""
    return [Z4Vector(t) for t in itertools.product(range(4), repeat=n)]


def run_index_array(n: int) -> np.ndarray:
    """``4**n x n`` integer array of all run indices u, row ``i`` being the base-4 digits of ``i``."""
    return np.array(list(itertools.product(range(4), repeat=n)), dtype=np.int64).reshape(4**n, n)


@dataclass(frozen=True)
class ReferenceSet:
    n: int
    vectors: tuple[Z4Vector, ...]
    kind: Kind = "full"

    def __len__(self):
        return len(self.vectors)

    def __iter__(self):
        return iter(self.vectors)

    def __contains__(self, g) -> bool:
        return as_vector(g) in self._lookup

    @cached_property
    def _lookup(self) -> frozenset:
        return frozenset(self.vectors)

    def index(self, g) -> int:
        return self.vectors.index(as_vector(g))


@dataclass(frozen=True)
class ComplementSet:
    n: int
    vectors: tuple[Z4Vector, ...]
    reference_kind: Kind = "full"
    odd_role: Optional[Z4Vector] = None

    def __post_init__(self):
        vs = tuple(as_vector(v) for v in self.vectors)
        object.__setattr__(self, "vectors", vs)
        if self.reference_kind not in ("full", "last_even"):
            raise InvalidSelectionError(f"unknown reference kind {self.reference_kind!r}")
        if len(set(vs)) != len(vs):
            raise InvalidSelectionError("complement set has repeated vectors")
        # distinct valid columns are never Z4-multiples: 3g starts with 3, 2g is all even
        for g in vs:
            if g.n != self.n or not is_valid_column(g):
                raise InvalidSelectionError(f"{g} is not an admissible column for n={self.n}")
            if self.reference_kind == "last_even" and g.digits[-1] % 2:
                raise InvalidSelectionError(f"{g} has an odd last digit")
        if self.odd_role is not None:
            role = as_vector(self.odd_role)
            object.__setattr__(self, "odd_role", role)
            if role not in vs:
                raise InvalidSelectionError(f"odd role {role} is not in the set")

    def __len__(self):
        return len(self.vectors)

    def __iter__(self):
        return iter(self.vectors)

    def with_odd_role(self, g) -> "ComplementSet":
        return ComplementSet(self.n, self.vectors, self.reference_kind, as_vector(g))

    def digit_strings(self) -> list[str]:
        return [str(v) for v in self.vectors]


def _check_n(n: int):
    if not isinstance(n, (int, np.integer)) or n < 2:
        raise InvalidDimensionError(f"n must be an integer >= 2, got {n!r}")


def is_valid_column(g) -> bool:
    """True iff ``g`` has an odd digit and its first odd digit is 1."""
    for d in as_vector(g).digits:
        if d % 2:
            return d == 1
    return False


def are_multiples(g, h) -> bool:
    g, h = as_vector(g), as_vector(h)
    g._check(h)
    return any(h == g.scale(c) or g == h.scale(c) for c in (1, 2, 3))


def enumerate_omega(n: int) -> ReferenceSet:
    _check_n(n)
    vecs = tuple(
        Z4Vector(t) for t in itertools.product(range(4), repeat=n) if is_valid_column(t)
    )
    return ReferenceSet(n, vecs, "full")


def enumerate_omega0(n: int) -> ReferenceSet:
    _check_n(n)
    vecs = tuple(v for v in enumerate_omega(n).vectors if v.digits[-1] % 2 == 0)
    return ReferenceSet(n, vecs, "last_even")


def reference_set(n: int, kind: Kind = "full") -> ReferenceSet:
    if kind == "full":
        return enumerate_omega(n)
    if kind == "last_even":
        return enumerate_omega0(n)
    raise InvalidSelectionError(f"unknown reference kind {kind!r}")


def omega_size(n: int, kind: Kind = "full") -> int:
    if kind == "full":
        return (4**n - 2**n) // 2
    return 4 ** (n - 1) - 2 ** (n - 1)


def complement(
    selected: Iterable, reference: ReferenceSet, odd_role=None
) -> ComplementSet:
    chosen = [as_vector(g) for g in selected]
    lookup = reference._lookup
    for g in chosen:
        if g not in lookup:
            raise InvalidSelectionError(f"{g} is not in the {reference.kind} reference set")
    taken = set(chosen)
    rest = tuple(g for g in reference.vectors if g not in taken)
    return ComplementSet(reference.n, rest, reference.kind, odd_role)


def is_even_set(sbar) -> bool:
    vecs = list(sbar.vectors if isinstance(sbar, ComplementSet) else sbar)
    return all((a + b).all_even() for a, b in itertools.combinations(vecs, 2))


def even_tails(length: int) -> list[tuple[int, ...]]:
    """All-even vectors of the given length over Z4, in canonical order."""
    return list(itertools.product((0, 2), repeat=length))


def build_even_set(n: int, size: int, reference_kind: Kind = "full") -> ComplementSet:
    """Even set of vectors (1, t)' with t running over the first ``size`` all-even tails."""
    _check_n(n)
    cap = 2 ** (n - 1)
    if size < 1 or size > cap:
        raise InfeasibleError(f"an even set of size {size} needs 1 <= size <= {cap} at n={n}")
    vecs = tuple(Z4Vector((1,) + t) for t in even_tails(n - 1)[:size])
    return ComplementSet(n, vecs, reference_kind)


def parse_vector_list(items: Sequence[str] | str) -> list[Z4Vector]:
    """Parse ``"1000,1200"`` or ``["1000", "1200"]`` into vectors."""
    if isinstance(items, str):
        items = [t for t in items.replace(",", " ").split() if t]
    return [Z4Vector.parse(t) for t in items]
