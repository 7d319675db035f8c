"""Command-line front end.

Exit codes: 0 success, 2 invalid arguments, 3 enumeration budget exceeded,
4 a verification disagreed (theorem, recursion or formula mismatch).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import formulas, montecarlo, patterns, series_verify
from .fillings import (
    DEFAULT_MAX_CELLS,
    BudgetExceeded,
    Filling,
    PatternClass,
    iter_sigmas,
    iter_sigmas_bruteforce,
)

EXIT_OK, EXIT_USAGE, EXIT_BUDGET, EXIT_MISMATCH = 0, 2, 3, 4
DEFAULT_ORDER = 8
DEFAULT_SAMPLES = 100_000


class Mismatch(Exception):
    """Raised after output is written when the mathematics disagreed."""


class Output:
    def __init__(self, config: dict, fmt: str):
        self.config = config
        self.fmt = fmt
        self.header: list[str] | None = None
        self.rows: list[list] = []
        self.payload: dict = {}

    def table(self, header: list[str], rows: list[list]) -> None:
        self.header, self.rows = header, rows

    def render(self) -> str:
        if self.fmt == "json":
            body = {"config": self.config}
            if self.header is not None:
                body["rows"] = [dict(zip(self.header, map(_plain, r))) for r in self.rows]
            body.update(self.payload)
            return json.dumps(body, indent=2) + "\n"
        buf = io.StringIO()
        buf.write("# config: " + json.dumps(self.config) + "\n")
        w = csv.writer(buf, lineterminator="\n")
        if self.header is not None:
            w.writerow(self.header)
            w.writerows([[_plain(v) for v in r] for r in self.rows])
        else:
            for key, val in self.payload.items():
                w.writerow([key, json.dumps(val) if isinstance(val, (dict, list)) else val])
        return buf.getvalue()


def _plain(v):
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, bool):
        return "true" if v else "false"
    return v


def _cls(args) -> PatternClass:
    return PatternClass.parse(args.cls)


def _read_pattern(path: str) -> Filling:
    return Filling.from_text(Path(path).read_text())


# --- subcommands -----------------------------------------------------------------


def cmd_enumerate(args, out: Output) -> None:
    cls = _cls(args)
    gen = iter_sigmas_bruteforce if args.oracle else iter_sigmas
    rows = [
        [cls.value, args.k, args.n, Filling.from_sigma(s, args.k).compact()]
        for s in gen(args.n, args.k, cls, args.max_cells)
    ]
    out.table(["class", "k", "n", "filling"], rows)


def cmd_classify(args, out: Output) -> None:
    cls = _cls(args)
    if args.pattern:
        P = _read_pattern(args.pattern)
        prof = patterns.overlap_profile(P, cls)
        row = [P.compact(), cls.value, "minimal" if prof.is_minimal else "overlapping",
               " ".join(map(str, sorted(prof.self_overlap_positions)))]
        header = ["pattern", "class", "verdict", "self_overlaps"]
        if args.oracle:
            oracle = patterns.is_minimal_oracle(P, cls, args.max_cells)
            row.append("minimal" if oracle else "overlapping")
            header.append("oracle")
            out.table(header, [row])
            if oracle != prof.is_minimal:
                raise Mismatch("fast classification disagrees with the oracle")
            return
        out.table(header, [row])
        return
    fast = patterns.fast_classification(args.n, args.k, cls, args.max_cells)
    oracle = patterns.oracle_classification(args.n, args.k, cls, args.max_cells) if args.oracle else None
    rows = []
    for p, ok in fast.items():
        row = [Filling.from_sigma(p, args.k).compact(), cls.value, "minimal" if ok else "overlapping"]
        if oracle is not None:
            row.append("minimal" if oracle[p] else "overlapping")
        rows.append(row)
    header = ["pattern", "class", "verdict"] + (["oracle"] if oracle is not None else [])
    out.table(header, rows)
    if oracle is not None and oracle != fast:
        raise Mismatch("fast classification disagrees with the oracle")


def _closed_count(cls: PatternClass, n: int, k: int) -> int:
    return patterns.class_cardinality(n, k, cls)


def cmd_count(args, out: Output) -> None:
    cls = _cls(args)
    closed = _closed_count(cls, args.n, args.k)
    row = [cls.value, args.k, args.n, closed]
    header = ["family", "k", "n", "count"]
    if args.enumerate:
        enumerated = sum(1 for _ in iter_sigmas(args.n, args.k, cls, args.max_cells))
        row.append(enumerated)
        header.append("enumerated")
        out.table(header, [row])
        if enumerated != closed:
            raise Mismatch("enumeration disagrees with the closed form")
        return
    out.table(header, [row])


def cmd_proportion(args, out: Output) -> None:
    cls = _cls(args)
    minimal = patterns.count_minimal(args.n, args.k, cls, args.max_cells, args.workers)
    total = _closed_count(cls, args.n, args.k)
    out.table(
        ["family", "k", "n", "minimal", "total", "proportion"],
        [[cls.value, args.k, args.n, minimal, total, Fraction(minimal, total)]],
    )


def cmd_bounds(args, out: Output) -> None:
    fam = args.family.upper()
    compute = {
        "L": formulas.lower_bound_L,
        "LS": formulas.lower_bound_LS,
        "LE": formulas.lower_bound_LE,
    }
    if fam in compute:
        res = compute[fam](args.k, args.digits)
    elif fam == "CAT":
        res = formulas.catalan_reciprocal_sum(args.digits)
    elif fam == "UE":
        res = formulas.ue_limit(args.digits)
    else:
        raise ValueError(f"unknown bound family {args.family!r}")
    out.table(
        ["family", "k", "certified_low", "certified_high", "decimal", "terms_used"],
        [[fam, args.k, res.low, res.high, res.decimal, res.terms_used]],
    )


def cmd_recursion(args, out: Output) -> None:
    n, k = args.n, args.k
    table = formulas.a_table_bruteforce(k, n // 2, args.max_cells)
    if n % 2 == 0:
        predicted = formulas.a_even(n, k, table)
        parity = "even"
    else:
        predicted = formulas.a_odd(n, k, table, args.max_cells)
        parity = "odd"
    brute = Fraction(patterns.count_minimal(n, k, PatternClass.COLUMN_STRICT, args.max_cells, args.workers),
                     formulas.count_F(n, k))
    out.table(["k", "n", "parity", "recursion", "bruteforce", "agree"],
              [[k, n, parity, predicted, brute, predicted == brute]])
    if predicted != brute:
        raise Mismatch("recursion disagrees with brute force")


def _parse_sample(text: str) -> tuple[Fraction, Fraction, Fraction]:
    parts = [Fraction(p) for p in text.split(",")]
    if len(parts) != 3:
        raise ValueError(f"sample must be x,p,q: {text!r}")
    return tuple(parts)


def cmd_verify(args, out: Output) -> None:
    P = _read_pattern(args.pattern)
    if args.theorem == "main":
        report = series_verify.verify_thm_main(P, args.order, args.max_cells)
    else:
        samples = [_parse_sample(s) for s in args.sample] if args.sample else series_verify.DEFAULT_SAMPLES
        report = series_verify.verify_thm_DR(P, args.order, samples, args.max_cells)
    out.payload.update(report.to_json())
    if report.verdict != "verified":
        raise Mismatch("theorem coefficients disagree")


def cmd_mc(args, out: Output) -> None:
    if args.target == "a":
        n = args.n or montecarlo.proxy_width(args.k)
        est = montecarlo.estimate_a(n, args.k, args.samples, args.seed, args.workers)
    elif args.target == "b":
        n = args.n or montecarlo.proxy_width(args.k)
        est = montecarlo.estimate_b(n, args.k, args.samples, args.seed, args.workers)
    else:
        n = args.n or montecarlo.proxy_width(1)
        est = montecarlo.estimate_prefix(n, args.m, args.samples, args.seed, args.workers)
    out.payload.update(est.to_json())


def cmd_wilf(args, out: Output) -> None:
    P, Q = _read_pattern(args.pattern), _read_pattern(args.pattern2)
    res = patterns.cwilf_compare(P, Q, _cls(args), args.max_n, args.strong, args.max_cells)
    out.payload.update({"P": P.compact(), "Q": Q.compact(), **res})


def cmd_overlap_euler(args, out: Output) -> None:
    rows, bad = [], False
    for n in args.n_values:
        enumerated = patterns.overlap4_updown_count(n, args.max_cells)
        formula = formulas.overlap4_formula(n)
        ue = formulas.upper_bound_UE(n) if n >= 4 else ""
        rows.append([n, enumerated, formula, enumerated == formula, ue])
        bad |= enumerated != formula
    out.table(["n", "enumerated", "formula", "agree", "UE"], rows)
    if bad:
        raise Mismatch("overlap count disagrees with the formula")


def cmd_overlap_syt(args, out: Output) -> None:
    rows, bad = [], False
    for n in args.n_values:
        c1, c2 = patterns.syt_case_counts(n, max(args.max_cells, 2 * (n + 2)))
        st, sk = formulas.count_syt_rect(n, 2), formulas.skew_count(n)
        us = formulas.upper_bound_US(n) if n >= 3 else ""
        closed = formulas.upper_bound_US_closed(n) if n >= 3 else ""
        ok = c1 == st and c2 == sk and us == closed
        rows.append([n, c1, st, c2, sk, us, closed, ok])
        bad |= not ok
    out.table(["n", "case1", "st_n2", "case2", "skew", "US", "US_closed", "agree"], rows)
    if bad:
        raise Mismatch("tableau case counts disagree with the formulas")


# --- parser ---------------------------------------------------------------------------


def _env_seed() -> int:
    raw = os.environ.get("MINOVL_SEED")
    return int(raw) if raw else 0


def build_parser() -> argparse.ArgumentParser:
    def common(fmt: str = "csv") -> list[argparse.ArgumentParser]:
        # a fresh parent each time: parents share action objects, so defaults would leak
        c = argparse.ArgumentParser(add_help=False)
        c.add_argument("--format", choices=["csv", "json"], default=fmt)
        c.add_argument("--output", help="write here instead of stdout")
        c.add_argument("--max-cells", type=int, default=DEFAULT_MAX_CELLS,
                       help="enumeration budget on k*n (default %(default)s)")
        c.add_argument("--workers", type=int, default=1)
        return [c]

    def sized(p, need_n=True):
        p.add_argument("--class", dest="cls", default="F", help="F, C or ST")
        p.add_argument("--k", type=int, default=1)
        p.add_argument("--n", type=int, required=need_n)

    parser = argparse.ArgumentParser(prog="minovl", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", parents=common(), help="list reduced class members")
    sized(p)
    p.add_argument("--oracle", action="store_true", help="filter all permutations instead")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("classify", parents=common(), help="minimal-overlap verdicts")
    sized(p, need_n=False)
    p.add_argument("--pattern", help="pattern file; otherwise every pattern of width --n")
    p.add_argument("--oracle", action="store_true", help="cross-check against enumeration")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("count", parents=common(), help="class cardinality")
    sized(p)
    p.add_argument("--enumerate", action="store_true", help="also count by enumeration")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("proportion", parents=common(), help="exact minimal-overlap proportion")
    sized(p)
    p.set_defaults(func=cmd_proportion)

    p = sub.add_parser("bounds", parents=common(), help="certified bound constants")
    p.add_argument("--family", required=True, help="L, LS, LE, CAT or UE")
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--digits", type=int, default=12)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("recursion", parents=common(), help="even/odd recursion vs brute force")
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_recursion)

    p = sub.add_parser("verify", parents=common("json"), help="check a generating function identity")
    p.add_argument("--theorem", choices=["main", "DR"], required=True)
    p.add_argument("--pattern", required=True)
    p.add_argument("--order", type=int, default=DEFAULT_ORDER)
    p.add_argument("--sample", action="append", help="x,p,q (DR only; repeatable)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("mc", parents=common("json"), help="Monte Carlo proportion estimate")
    p.add_argument("--target", choices=["a", "b", "prefix"], required=True)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_mc)

    p = sub.add_parser("wilf", parents=common("json"), help="compare avoidance counts of two patterns")
    p.add_argument("--class", dest="cls", default="F")
    p.add_argument("--pattern", required=True)
    p.add_argument("--pattern2", required=True)
    p.add_argument("--max-n", type=int, default=6)
    p.add_argument("--strong", action="store_true", help="compare full match distributions")
    p.set_defaults(func=cmd_wilf)

    p = sub.add_parser("overlap-euler", parents=common(), help="4-entry overlaps of up-down permutations")
    p.add_argument("--n", dest="n_values", type=int, nargs="+", default=[4, 5])
    p.set_defaults(func=cmd_overlap_euler)

    p = sub.add_parser("overlap-syt", parents=common(), help="two-column overlaps of 2-row tableaux")
    p.add_argument("--n", dest="n_values", type=int, nargs="+", default=[3, 4, 5])
    p.set_defaults(func=cmd_overlap_syt)
    return parser


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "seed", "absent") is None:
        args.seed = _env_seed()
    config = {k: v for k, v in vars(args).items() if k != "func"}
    out = Output(config, args.format)
    code = EXIT_OK
    try:
        args.func(args, out)
    except Mismatch as exc:
        print(f"minovl: verification failed: {exc}", file=sys.stderr)
        code = EXIT_MISMATCH
    except BudgetExceeded as exc:
        print(f"minovl: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (ValueError, KeyError, OSError) as exc:
        print(f"minovl: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = out.render()
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return code


def main() -> None:
    sys.exit(run())
