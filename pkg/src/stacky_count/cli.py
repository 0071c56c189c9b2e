"""stacky-count command line interface.

Exit codes: 0 ok, 1 verification mismatch, 2 usage or library error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import sympy

from . import __version__
from .binary_forms import WeightVector
from .errors import StackyError
from .finite_field import field_from_q
from .graded_algebra import (
    BaseRing,
    ChernData,
    PoincarePolynomial,
    class_to_json,
    jacobian_chern_data,
    pushforward_powers,
    wpb_poincare,
    wpb_relation,
)
from .spectral_sequence import CohomologyTable, genus0_pages, stable_cohomology_table
from .stack_count import (
    DEFAULT_BUDGET,
    HomStackParams,
    brute_iso_count,
    brute_weighted_count,
    closed_iso_count,
    closed_weighted_count,
    count,
)
from .zeta_trace import (
    LPolynomial,
    batyrev_manin_sum,
    manin_closed_form,
    moduli_lookup,
    picard_group,
    trace_count_split,
)

log = logging.getLogger("stacky_count")

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE = 0, 1, 2

# (q, weights, n, method) rows checked by `verify` with no --grid
DEFAULT_GRID = [
    (2, (1, 1), 1, "weighted"),
    (3, (1, 1), 1, "weighted"),
    (3, (1, 1), 2, "weighted"),
    (3, (1, 2), 1, "weighted"),
    (5, (1, 2), 1, "weighted"),
    (3, (2, 4), 1, "weighted"),
    (5, (1, 1, 1), 1, "weighted"),
    (7, (1, 1), 1, "weighted"),
    (3, (2, 4), 1, "iso"),
    (3, (1, 2), 1, "iso"),
    (3, (1, 2, 2), 1, "iso"),
    (5, (2, 2), 1, "iso"),
]


# -- parsing helpers ----------------------------------------------------------------


def parse_weights(text: str) -> WeightVector:
    try:
        return WeightVector.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad weight vector {text!r}: {exc}") from None


def parse_int_expr(text: str) -> int:
    """Integers written plainly or as a power "a^b"."""
    text = text.strip().replace("**", "^")
    try:
        if "^" in text:
            a, b = text.split("^", 1)
            return int(a) ** int(b)
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None


def parse_q(text: str):
    """Numeric q (plain or p^k) or the symbol q."""
    if text.strip() == "q":
        return sympy.Symbol("q")
    return parse_int_expr(text)


def parse_grid(text: str, methods: list[str]) -> list:
    rows = []
    for item in filter(None, (s.strip() for s in text.split(";"))):
        parts = item.split(":")
        if len(parts) != 3:
            raise argparse.ArgumentTypeError(f"grid entry {item!r} is not q:weights:n")
        q, w, n = parse_int_expr(parts[0]), parse_weights(parts[1]), int(parts[2])
        rows.extend((q, w.lambdas, n, m) for m in methods)
    return rows


def fmt(v) -> str:
    if isinstance(v, Fraction):
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    if isinstance(v, sympy.Basic):
        return str(sympy.expand(v))
    return str(v)


def _emit_json(obj, out):
    out.write(json.dumps(obj, indent=2, sort_keys=False) + "\n")


def _emit_csv(header, rows, out):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    out.write(buf.getvalue())


# -- verify ------------------------------------------------------------------------------


@dataclass
class VerificationRecord:
    q: int
    weights: tuple
    n: int
    method: str
    closed: Optional[Fraction] = None
    oracle: Optional[Fraction] = None
    match: Optional[bool] = None
    error: Optional[str] = None
    wall_time: float = 0.0

    @property
    def status(self) -> str:
        if self.error is not None:
            return "error"
        return "ok" if self.match else "mismatch"

    def as_dict(self, timing=False) -> dict:
        d = {
            "q": str(self.q),
            "weights": list(self.weights),
            "n": self.n,
            "method": self.method,
            "closed": None if self.closed is None else fmt(self.closed),
            "oracle": None if self.oracle is None else fmt(self.oracle),
            "match": self.match,
            "status": self.status,
        }
        if self.error is not None:
            d["error"] = self.error
        if timing:
            d["wall_time"] = round(self.wall_time, 6)
        return d


@dataclass
class VerificationReport:
    records: list = field(default_factory=list)

    @property
    def summary(self) -> dict:
        s = {"total": len(self.records), "ok": 0, "mismatch": 0, "error": 0}
        for r in self.records:
            s[r.status] += 1
        return s


def run_verification(grid, workers=1, budget=None, strategy="memo") -> VerificationReport:
    report = VerificationReport()
    for q, w, n, method in grid:
        rec = VerificationRecord(q, tuple(w), n, method)
        t0 = time.perf_counter()
        try:
            if method == "weighted":
                rec.closed = closed_weighted_count(q, w, n).value
                rec.oracle = brute_weighted_count(field_from_q(q), w, n, workers, budget,
                                                  strategy).value
            elif method == "iso":
                rec.closed = closed_iso_count(q, w, n).value
                rec.oracle = brute_iso_count(field_from_q(q), w, n, workers, budget,
                                             strategy).value
            else:
                raise StackyError(f"unknown verification method {method!r}")
            rec.match = rec.closed == rec.oracle
        except StackyError as exc:
            rec.error = f"{type(exc).__name__}: {exc}"
        rec.wall_time = time.perf_counter() - t0
        log.info("verify q=%s weights=%s n=%s %s -> %s", q, w, n, method, rec.status)
        report.records.append(rec)
    return report


def cmd_verify(args, out) -> int:
    methods = [m.strip() for m in args.methods.split(",") if m.strip()] if args.methods else None
    if args.grid is None:
        grid = [row for row in DEFAULT_GRID if methods is None or row[3] in methods]
    else:
        grid = parse_grid(args.grid, methods or ["weighted"])
    report = run_verification(grid, args.workers, args.budget, args.strategy)
    if args.json:
        _emit_json({"records": [r.as_dict(args.timing) for r in report.records],
                    "summary": report.summary}, out)
    elif args.csv:
        header = ["q", "weights", "n", "method", "closed", "oracle", "status"]
        if args.timing:
            header.append("wall_time")
        rows = []
        for r in report.records:
            d = r.as_dict(args.timing)
            row = [d["q"], ",".join(map(str, r.weights)), r.n, r.method,
                   d["closed"] or "", d["oracle"] or "", d["status"]]
            if args.timing:
                row.append(d["wall_time"])
            rows.append(row)
        _emit_csv(header, rows, out)
    else:
        for r in report.records:
            d = r.as_dict(args.timing)
            line = (f"q={d['q']:<3} weights={','.join(map(str, r.weights)):<10} n={r.n} "
                    f"{r.method:<8} closed={d['closed']} oracle={d['oracle']} {d['status']}")
            if r.error:
                line += f" ({r.error})"
            if args.timing:
                line += f" {r.wall_time:.3f}s"
            out.write(line + "\n")
        s = report.summary
        out.write(f"{s['total']} rows: {s['ok']} ok, {s['mismatch']} mismatch, {s['error']} error\n")
    s = report.summary
    if s["mismatch"] or (args.errors_fail and s["error"]):
        return EXIT_MISMATCH
    return EXIT_OK


# -- thin adapters ------------------------------------------------------------------


def cmd_count(args, out) -> int:
    q = args.q
    spec = None if isinstance(q, sympy.Basic) else field_from_q(q)
    params = HomStackParams(args.weights, args.n, 0, spec)
    if args.method in ("brute", "iso-brute") and spec is not None:
        if args.method == "brute":
            res = brute_weighted_count(spec, args.weights, args.n, args.workers, args.budget,
                                       args.strategy, progress=_progress)
        else:
            res = brute_iso_count(spec, args.weights, args.n, args.workers, args.budget,
                                  args.strategy)
    else:
        res = count(params, args.method, args.workers, args.budget)
    value = fmt(res.value)
    tc = None if res.tuple_count is None else str(res.tuple_count)
    if args.json:
        _emit_json({"q": str(q), "weights": list(args.weights.lambdas), "n": args.n,
                    "method": args.method, "value": value, "tuple_count": tc,
                    "wild": res.wild}, out)
    elif args.csv:
        _emit_csv(["q", "weights", "n", "method", "value", "tuple_count"],
                  [[str(q), ",".join(map(str, args.weights)), args.n, args.method, value,
                    tc or ""]], out)
    else:
        out.write(value + "\n")
    if res.wild:
        print("warning: wild characteristic; closed forms do not apply", file=sys.stderr)
    return EXIT_OK


def _progress(done, total):
    log.info("partition %d/%d done", done, total)


def _table_for(args):
    N = args.N
    w = args.weights or WeightVector((1,) * (N + 1))
    if args.genus == 0:
        E1, E2, table = genus0_pages(N, args.n, w)
        return table, {"e1": E1, "e2": E2}
    table = stable_cohomology_table(args.genus, N, w, args.n)
    from .spectral_sequence import stable_e2_table

    return table, {"e2": stable_e2_table(args.genus, N, args.n)}


def cmd_cohomology(args, out) -> int:
    table, pages = _table_for(args)
    if args.page != "table":
        page = pages.get(args.page)
        if page is None:
            raise StackyError(f"page {args.page} is not available for genus {args.genus}")
        rows = [(-mp, q, d) for (mp, q), d in page.dims().items()]
        rows.sort()
        if args.json:
            _emit_json({"page": args.page, "entries": [
                {"p": p, "q": q, "dim": d} for p, q, d in rows]}, out)
        elif args.csv:
            _emit_csv(["p", "q", "dim"], rows, out)
        else:
            for p, q, d in rows:
                out.write(f"E^{{-{p},{q}}}: {d}\n")
        return EXIT_OK
    if args.json:
        _emit_json(table.to_json(), out)
    elif args.csv:
        rows = []
        for g in table.to_json()["groups"]:
            for c in g["classes"]:
                rows.append([g["i"], c["kind"], c["j"], c.get("wedge", ""), c.get("sym", ""),
                             c["mult"]])
        _emit_csv(["i", "kind", "j", "wedge", "sym", "mult"], rows, out)
    else:
        out.write(f"dimension {table.dimension}\n")
        for i in table.degrees():
            parts = [f"{m}x{wc}" if m > 1 else str(wc) for wc, m in sorted(table.groups[i].items())]
            flag = "" if table.is_reliable(i) else "  (outside stable range)"
            out.write(f"H^{i}: {' + '.join(parts)}{flag}\n")
        for wmsg in table.warnings:
            print(f"warning: {wmsg}", file=sys.stderr)
    return EXIT_OK


def cmd_chow(args, out) -> int:
    w = args.weights
    base = args.base.strip()
    if base == "point":
        data = ChernData(tuple((1, ()) for _ in w), w.eta, BaseRing.point())
        betti = PoincarePolynomial.point()
    elif base.startswith("jacobian:"):
        g = int(base.split(":", 1)[1])
        if args.n is None:
            raise StackyError("--n is required for a jacobian base")
        data = jacobian_chern_data(g, args.n, w)
        betti = PoincarePolynomial.jacobian(g)
    else:
        raise StackyError(f"unknown base {base!r} (use point or jacobian:g)")
    rel = wpb_relation(data, w)
    push = pushforward_powers(rel, args.extra)
    N_fibre = rel.degree - 1
    result = {
        "weights": list(w.lambdas),
        "base": base,
        "n": args.n,
        "relation": {
            "degree": rel.degree,
            "zeta_normalization": rel.zeta_normalization,
            "coefficients": {str(j): class_to_json(c) for j, c in rel.nonzero_terms()},
        },
        "pushforward": [class_to_json(c) for c in push],
        "poincare": str(wpb_poincare(betti, N_fibre)),
    }
    if args.json:
        _emit_json(result, out)
    elif args.csv:
        _emit_csv(["index", "pushforward"],
                  [[m, fmt(c)] for m, c in enumerate(push)], out)
    else:
        out.write(f"relation: {sympy.expand(rel.expr())} = 0  (zeta = {rel.zeta_normalization} c1(O(1)))\n")
        for m, c in enumerate(push):
            out.write(f"pi_* zeta^{rel.degree - 1 + m} = {fmt(c)}\n")
        out.write(f"poincare: {result['poincare']}\n")
    return EXIT_OK


def cmd_zeta(args, out) -> int:
    if args.table == "-":
        data = json.load(sys.stdin)
    else:
        with open(args.table) as fh:
            data = json.load(fh)
    table = CohomologyTable.from_json(data)
    lpoly = LPolynomial.parse(args.lpoly, args.q) if args.lpoly else None
    split = trace_count_split(table, args.q, lpoly)
    total = fmt(sympy.sympify(fmt(split.stable)) + sympy.sympify(fmt(split.tail)))
    if args.json:
        _emit_json({"q": str(args.q), "value": total, "stable": fmt(split.stable),
                    "tail": fmt(split.tail)}, out)
    elif args.csv:
        _emit_csv(["q", "value", "stable", "tail"],
                  [[str(args.q), total, fmt(split.stable), fmt(split.tail)]], out)
    else:
        out.write(total + "\n")
    return EXIT_OK


def cmd_bmanin(args, out) -> int:
    spec = moduli_lookup(args.moduli)
    value = batyrev_manin_sum(spec, args.q, args.B)
    closed = None
    if args.closed_form:
        closed = fmt(manin_closed_form(spec, args.q, args.B))
    if args.json:
        d = {"moduli": spec.name, "weights": list(spec.weights), "q": str(args.q),
             "B": str(args.B), "value": str(value)}
        if closed is not None:
            d["closed_form"] = closed
        _emit_json(d, out)
    elif args.csv:
        _emit_csv(["moduli", "q", "B", "value"], [[spec.name, args.q, args.B, value]], out)
    else:
        out.write(f"{value}\n")
        if closed is not None:
            out.write(f"closed form: {closed}\n")
    return EXIT_OK


def cmd_picard(args, out) -> int:
    grp = picard_group(args.weights, args.n)
    if args.json:
        _emit_json({"weights": list(args.weights.lambdas), "n": args.n, "group": str(grp),
                    "kind": grp.kind,
                    "order": None if grp.order is None else str(grp.order),
                    "resultant_degree": None if grp.resultant_degree is None
                    else str(grp.resultant_degree)}, out)
    elif args.csv:
        _emit_csv(["weights", "n", "group"], [[",".join(map(str, args.weights)), args.n, str(grp)]], out)
    else:
        out.write(f"{grp}\n")
    return EXIT_OK


# -- parser ----------------------------------------------------------------------------

_GLOBAL_DEFAULTS = {"json": False, "csv": False, "workers": 1, "budget": DEFAULT_BUDGET,
                    "verbose": False}


def _global_flags() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                   help="machine-readable JSON output")
    p.add_argument("--csv", action="store_true", default=argparse.SUPPRESS,
                   help="flat CSV rows")
    p.add_argument("--workers", type=int, default=argparse.SUPPRESS,
                   help="brute-force worker processes (default 1)")
    p.add_argument("--budget", type=parse_int_expr, default=argparse.SUPPRESS,
                   help="enumeration budget in tuples (default 10^9)")
    p.add_argument("-v", "--verbose", action="store_true", default=argparse.SUPPRESS,
                   help="progress messages on stderr")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _global_flags()
    parser = argparse.ArgumentParser(prog="stacky-count", parents=[common], allow_abbrev=False,
                                     description="Point counts and cohomology of Hom stacks "
                                                 "into weighted projective stacks.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        sp = sub.add_parser(name, parents=[common], help=help_, allow_abbrev=False)
        sp.set_defaults(func=func)
        return sp

    sp = add("count", cmd_count, "point count of Hom_n(P^1, P(lambda))")
    sp.add_argument("--weights", type=parse_weights, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--q", type=parse_q, required=True, help="prime power, p^k, or the symbol q")
    sp.add_argument("--method", default="closed",
                    choices=["closed", "brute", "iso-brute", "iso-closed", "discriminant"])
    sp.add_argument("--strategy", default="memo", choices=["memo", "naive"])

    sp = add("verify", cmd_verify, "closed forms against brute-force oracles")
    sp.add_argument("--grid", default=None, help='entries "q:weights:n" separated by ";"')
    sp.add_argument("--methods", default=None, help="comma list of weighted, iso")
    sp.add_argument("--strategy", default="memo", choices=["memo", "naive"])
    sp.add_argument("--errors-fail", action="store_true",
                    help="count rows that raised (e.g. wild characteristic) as failures")
    sp.add_argument("--timing", action="store_true", help="include wall times")

    sp = add("cohomology", cmd_cohomology, "cohomology table (exact for genus 0, stable model else)")
    sp.add_argument("--genus", type=int, default=0)
    sp.add_argument("--N", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--weights", type=parse_weights, default=None)
    sp.add_argument("--page", choices=["table", "e1", "e2"], default="table")

    sp = add("chow", cmd_chow, "weighted projective bundle relation and pushforwards")
    sp.add_argument("--weights", type=parse_weights, required=True)
    sp.add_argument("--base", default="point", help="point or jacobian:g")
    sp.add_argument("--n", type=int, default=None)
    sp.add_argument("--extra", type=int, default=3, help="number of pushforwards past the first")

    sp = add("zeta", cmd_zeta, "trace formula on a cohomology table")
    sp.add_argument("--table", required=True, help="JSON table file, or - for stdin")
    sp.add_argument("--q", type=parse_q, required=True)
    sp.add_argument("--lpoly", default=None, help='L-polynomial coefficients, e.g. "1,-a,q"')

    sp = add("bmanin", cmd_bmanin, "fibrations of bounded discriminant height")
    sp.add_argument("--moduli", required=True)
    sp.add_argument("--q", type=parse_int_expr, required=True)
    sp.add_argument("--B", type=parse_int_expr, required=True)
    sp.add_argument("--closed-form", action="store_true",
                    help="also print the geometric-series closed form (B a power of q^deg)")

    sp = add("picard", cmd_picard, "Picard group of Hom_n(P^1, P(lambda))")
    sp.add_argument("--weights", type=parse_weights, required=True)
    sp.add_argument("--n", type=int, required=True)
    return parser


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    for k, v in _GLOBAL_DEFAULTS.items():
        if not hasattr(args, k):
            setattr(args, k, v)
    if args.json and args.csv:
        print("error: --json and --csv are exclusive", file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(message)s", stream=sys.stderr)
    try:
        return args.func(args, out)
    except (StackyError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, TypeError, argparse.ArgumentTypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def run():  # console-script entry point
    sys.exit(main())


if __name__ == "__main__":  # pragma: no cover
    run()
