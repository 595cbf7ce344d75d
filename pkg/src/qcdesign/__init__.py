"""Two-level designs from quaternary codes, with minimum aberration selection."""

from ._version import __version__
from ._kernels import BACKEND
from .binmat import BinaryMatrix, parse_b_notation
from .errors import (
    ConsistencyError,
    DesignParseError,
    InfeasibleError,
    InvalidDimensionError,
    InvalidGeneratorError,
    InvalidSelectionError,
    NotGroupInvariantError,
    NotHalvableError,
    OutOfRegimeError,
    QCDesignError,
    SearchSpaceTooLargeError,
)
from .gray import GeneratorMatrix, SignMatrix, construct_even, construct_odd, gray_pair, halve, gray_sign
from .regsel import ma_design, regular_wlp, select_b, optimal_b_table
from .wlp import WordLengthPattern, resolution, wlp_direct, wlp_distance
from .z4 import ComplementSet, ReferenceSet, Z4Vector, enumerate_omega, enumerate_omega0

__all__ = [
    "__version__",
    "BACKEND",
    "BinaryMatrix",
    "ComplementSet",
    "ConsistencyError",
    "DesignParseError",
    "GeneratorMatrix",
    "InfeasibleError",
    "InvalidDimensionError",
    "InvalidGeneratorError",
    "InvalidSelectionError",
    "NotGroupInvariantError",
    "NotHalvableError",
    "OutOfRegimeError",
    "QCDesignError",
    "ReferenceSet",
    "SearchSpaceTooLargeError",
    "SignMatrix",
    "WordLengthPattern",
    "Z4Vector",
    "construct_even",
    "construct_odd",
    "enumerate_omega",
    "enumerate_omega0",
    "gray_pair",
    "halve",
    "ma_design",
    "parse_b_notation",
    "gray_sign",
    "regular_wlp",
    "resolution",
    "select_b",
    "optimal_b_table",
    "wlp_direct",
    "wlp_distance",
]
