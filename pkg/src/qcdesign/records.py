"""Design records (JSON) and design matrices (CSV) on disk."""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional, Union

import numpy as np

from ._version import __version__
from .errors import DesignParseError, InvalidGeneratorError
from .gray import GeneratorMatrix, SignMatrix, construct_even, construct_odd, halve
from .wlp import UNBOUNDED, WordLengthPattern, resolution, wlp_distance


@dataclass(frozen=True)
class DesignRecord:
    n: int
    runs: int
    factors: int
    parity: str
    halved: bool
    generator: tuple[str, ...]
    complement: tuple[str, ...]
    b: Optional[tuple[str, ...]]
    wlp: WordLengthPattern
    resolution: Union[Fraction, float]
    version: str = field(default=__version__)

    @property
    def filename(self) -> str:
        return f"qc_n{self.n}_N{self.runs}_q{self.factors}.json"

    def to_json(self) -> dict:
        res = "unbounded" if self.resolution == UNBOUNDED else [self.resolution.numerator, self.resolution.denominator]
        return {
            "n": self.n,
            "runs": self.runs,
            "factors": self.factors,
            "parity": self.parity,
            "halved": self.halved,
            "generator": list(self.generator),
            "complement": list(self.complement),
            "B": None if self.b is None else list(self.b),
            "wlp": self.wlp.to_json()["A"],
            "resolution": res,
            "version": self.version,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, data: dict) -> "DesignRecord":
        res = data["resolution"]
        res = UNBOUNDED if res == "unbounded" else Fraction(int(res[0]), int(res[1]))
        wlp = WordLengthPattern.from_json({"runs": data["runs"], "factors": data["factors"], "A": data["wlp"]})
        return cls(
            n=int(data["n"]),
            runs=int(data["runs"]),
            factors=int(data["factors"]),
            parity=data["parity"],
            halved=bool(data["halved"]),
            generator=tuple(data["generator"]),
            complement=tuple(data["complement"]),
            b=None if data.get("B") is None else tuple(data["B"]),
            wlp=wlp,
            resolution=res,
            version=data.get("version", __version__),
        )

    @classmethod
    def loads(cls, text: str) -> "DesignRecord":
        return cls.from_json(json.loads(text))

    def design(self) -> SignMatrix:
        """Rebuild the design from the stored generator columns."""
        G = GeneratorMatrix.of(list(self.generator))
        if self.parity == "odd":
            D = construct_odd(G)
        elif self.parity == "even":
            D = construct_even(G)
        else:
            raise InvalidGeneratorError(f"unknown parity {self.parity!r}")
        return halve(D, G) if self.halved else D


def record_from_ma(ma) -> DesignRecord:
    """Record for a :class:`qcdesign.regsel.MADesign`."""
    return DesignRecord(
        n=ma.n,
        runs=ma.runs,
        factors=ma.factors,
        parity=ma.parity,
        halved=ma.halved,
        generator=tuple(ma.generator.digit_strings()),
        complement=tuple(ma.sbar.digit_strings()),
        b=None if ma.b is None else tuple(ma.b.tokens()),
        wlp=ma.wlp,
        resolution=resolution(ma.design),
    )


def verify_record(rec: DesignRecord) -> bool:
    """Recomputed WLP and resolution match, and the serialization is a fixed point."""
    D = rec.design()
    if D.runs != rec.runs or D.factors != rec.factors:
        return False
    if wlp_distance(D).numerators != rec.wlp.numerators:
        return False
    if resolution(D) != rec.resolution:
        return False
    return DesignRecord.loads(rec.dumps()).dumps() == rec.dumps()


def atomic_write(path: Union[str, Path], text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def design_to_csv(D: SignMatrix, header: bool = False) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if header:
        w.writerow(range(1, D.factors + 1))
    w.writerows(D.entries.tolist())
    return buf.getvalue()


def design_from_csv(text: str, header: Optional[bool] = None) -> SignMatrix:
    """Parse a +-1 CSV.  ``header=None`` skips a first line reading 1, 2, ..., q."""
    rows = []
    width = None
    first = True
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        cells = [c.strip() for c in line.split(",")]
        if first:
            first = False
            if _is_header(cells, header):
                continue
        try:
            vals = [int(c) for c in cells]
        except ValueError:
            raise DesignParseError(f"non-integer entry in {line!r}", lineno) from None
        if any(x not in (1, -1) for x in vals):
            raise DesignParseError("entries must be 1 or -1", lineno)
        if width is None:
            width = len(vals)
        elif len(vals) != width:
            raise DesignParseError(f"expected {width} entries, found {len(vals)}", lineno)
        rows.append(vals)
    if not rows:
        raise DesignParseError("no design rows found")
    return SignMatrix(np.array(rows, dtype=np.int8))


def _is_header(cells: list[str], header: Optional[bool]) -> bool:
    if header is not None:
        return header
    return len(cells) > 1 and cells == [str(i) for i in range(1, len(cells) + 1)]


def read_design(path: Union[str, Path], header: Optional[bool] = None) -> SignMatrix:
    return design_from_csv(Path(path).read_text(), header)
