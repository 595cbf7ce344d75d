"""Command-line entry point: ``qcdesign <command> ...``.

Exit status is 0 on success, 2 for invalid input or out-of-regime requests
and 3 when an internal consistency check fails.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from . import _kernels, compset, oracle, records, regsel
from ._version import __version__
from .errors import ConsistencyError, QCDesignError
from .wlp import UNBOUNDED, _default_direct_kmax, wlp_direct, wlp_distance
from .z4 import ComplementSet, parse_vector_list, reference_set

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_CONSISTENCY = 3


def _fmt(f: Fraction) -> str:
    text = str(f)
    return text if f.denominator == 1 else f"{text} ({float(f):.6g})"


def _fmt_resolution(r) -> str:
    return "unbounded" if r == UNBOUNDED else _fmt(r)


def _emit(obj, as_json: bool, text: str) -> None:
    if as_json:
        print(json.dumps(obj, indent=2, sort_keys=True))
    else:
        print(text)


def cmd_omega(args) -> int:
    ref = reference_set(args.n, "last_even" if args.last_even else "full")
    strings = [str(g) for g in ref.vectors]
    _emit(
        {"n": args.n, "kind": ref.kind, "size": len(strings), "vectors": strings},
        args.json,
        "\n".join(strings) + f"\n# {len(strings)} columns",
    )
    return EXIT_OK


def cmd_ma(args) -> int:
    ma = regsel.ma_design(args.n, args.runs, args.q)
    rec = records.record_from_ma(ma)
    out = Path(args.out)
    json_path = records.atomic_write(out / rec.filename, rec.dumps())
    csv_path = records.atomic_write(
        out / rec.filename.replace(".json", ".csv"), records.design_to_csv(ma.design, args.header)
    )
    lines = [
        f"n={ma.n} runs={ma.runs} factors={ma.factors} parity={ma.parity} halved={ma.halved}",
        f"complement ({ma.deficiency}): {' '.join(ma.sbar.digit_strings()) or '-'}",
        f"B: {ma.b if ma.b is not None else '-'}",
    ]
    for k in range(3, min(6, ma.factors) + 1):
        lines.append(f"A{k} = {_fmt(ma.wlp.A(k))}")
    lines.append(f"resolution = {_fmt_resolution(rec.resolution)}")
    lines.append(f"wrote {json_path} and {csv_path}")
    _emit(rec.to_json(), args.json, "\n".join(lines))
    return EXIT_OK


def cmd_wlp(args) -> int:
    D = records.read_design(args.design, True if args.header else None)
    k_max = args.max_k
    if k_max is not None and not 1 <= k_max <= D.factors:
        raise QCDesignError(f"--max-k must lie in 1..{D.factors}")
    result = {}
    if args.method in ("direct", "both"):
        result["direct"] = wlp_direct(D, k_max or _default_direct_kmax(D.factors))
    if args.method in ("distance", "both"):
        full = wlp_distance(D)
        result["distance"] = full.truncated(k_max) if k_max else full
    if args.method == "both":
        d, w = result["direct"], result["distance"]
        if w.numerators[: d.k_max + 1] != d.numerators:
            print("direct and distance methods disagree", file=sys.stderr)
            return EXIT_CONSISTENCY
        result = {"both": d}
    (method, pattern), = result.items()
    lines = [f"runs={D.runs} factors={D.factors} method={method}"]
    lines += [f"A{k} = {_fmt(pattern.A(k))}" for k in range(1, pattern.k_max + 1)]
    _emit({"method": method, **pattern.to_json()}, args.json, "\n".join(lines))
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.record:
        rec = records.DesignRecord.loads(Path(args.record).read_text())
        ok = records.verify_record(rec)
        _emit({"record": args.record, "passed": ok}, args.json, f"{args.record}: {'ok' if ok else 'MISMATCH'}")
        return EXIT_OK if ok else EXIT_CONSISTENCY
    rep = oracle.verify_claims(args.n)
    lines = [f"{'PASS' if c.passed else 'FAIL'}  {c.name}  {c.detail}".rstrip() for c in rep.claims]
    lines.append(f"{sum(c.passed for c in rep.claims)}/{len(rep.claims)} claims hold at n={args.n}")
    _emit(rep.to_json(), args.json, "\n".join(lines))
    return EXIT_OK if rep.all_passed else EXIT_CONSISTENCY


def cmd_table1(args) -> int:
    rows = regsel.optimal_b_table(args.n, args.parity)
    payload = [
        {
            "deficiency": d,
            "B": sel.matrix.tokens(),
            "key": list(sel.key),
            "optimal": sel.n_optimal,
            "candidates": sel.n_candidates,
        }
        for d, sel in rows
    ]
    width = max(len(str(sel.matrix)) for _, sel in rows)
    lines = [f"n={args.n} ({args.parity} factor count)", f"{'v-s':>4}  {'B':<{width}}  key"]
    for d, sel in rows:
        lines.append(f"{d:>4}  {str(sel.matrix):<{width}}  {' '.join(map(str, sel.key)) or '-'}")
    _emit({"n": args.n, "parity": args.parity, "rows": payload}, args.json, "\n".join(lines))
    return EXIT_OK


def cmd_profile(args) -> int:
    kind = "last_even" if args.last_even else "full"
    vecs = parse_vector_list(args.complement)
    role = parse_vector_list(args.odd_role)[0] if args.odd_role else None
    if not vecs:
        raise QCDesignError("complement must list at least one column")
    sbar = ComplementSet(vecs[0].n, tuple(vecs), kind, role)
    print(compset.dumps_profile(compset.profile(sbar)))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qcdesign", description="Quaternary-code two-level designs.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__} ({_kernels.BACKEND} kernels)")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("omega", help="list the admissible generator columns")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--last-even", action="store_true", help="only columns with an even last digit")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_omega)

    s = sub.add_parser("ma", help="build the minimum aberration design and write CSV + JSON")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--runs", type=int, required=True)
    s.add_argument("--q", type=int, required=True, help="number of factors")
    s.add_argument("--out", default=".", help="output directory")
    s.add_argument("--header", action="store_true", help="write factor indices as a CSV header")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_ma)

    s = sub.add_parser("wlp", help="wordlength pattern of a CSV design")
    s.add_argument("design")
    s.add_argument("--max-k", type=int)
    s.add_argument("--method", choices=("direct", "distance", "both"), default="distance")
    s.add_argument("--header", action="store_true", help="the first line is a header")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_wlp)

    s = sub.add_parser("verify", help="numerical checks of the construction theory, or of a saved record")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--n", type=int, choices=(2, 3))
    g.add_argument("--record")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("table1", help="optimal binary matrices for every deficiency")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--parity", choices=("even", "odd"), default="even")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_table1)

    s = sub.add_parser("profile", help="run sums and cubic score diagnostics of a complement")
    s.add_argument("--complement", required=True, help="comma-separated digit strings, e.g. 10,12")
    s.add_argument("--odd-role", help="complement member kept as a single Gray column")
    s.add_argument("--last-even", action="store_true")
    s.set_defaults(func=cmd_profile)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConsistencyError as exc:
        print(f"consistency failure: {exc}", file=sys.stderr)
        return EXIT_CONSISTENCY
    except (QCDesignError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
