"""Command line front end.

    hallforge orbits  --quiver A2 --p 2 --dim 1,1
    hallforge hall mul S1 S2 --quiver A2 --p 2
    hallforge verify green --quiver Jordan --p 3 --limit-dim 3 --threads 4
    hallforge census --quiver Kronecker --p 2 --dim 1,1 --s 1 2

Exit codes: 0 ok, 1 identity violated, 2 input error, 3 size guard.
Output never carries timings, so it is identical for any ``--threads``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path
from typing import Sequence

from .census import CensusRow, census_row
from .errors import HallforgeError, InputError, NonIntegerResult, SizeGuardExceeded
from .gf import FieldSpec, field_make
from .hall import HallAlgebra, HallElement, TensorElement
from .quiver import Quiver, builtin, fmt_dim, parse_dim
from .rep import (
    DEFAULT_MAX_HOM,
    default_max_points,
    is_absolutely_indecomposable,
    is_indecomposable,
    minimal_field_of_definition,
    orbit_census,
)
from .verify import (
    SweepResult,
    parallel_map,
    sweep_adjointness,
    sweep_antipode,
    sweep_antipode_relations,
    sweep_bialgebra,
    sweep_coassociativity,
    sweep_coincide,
    sweep_green,
    sweep_riedtmann_peng,
    sweep_serre,
)

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_GUARD = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _positive(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return n


def _limit(text: str) -> int | tuple[int, ...]:
    """``3`` bounds the total dimension, ``2,2`` bounds componentwise."""
    if "," in text:
        return parse_dim(text)
    n = int(text)
    if n < 0:
        raise argparse.ArgumentTypeError("limit must be nonnegative")
    return n


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--quiver", required=True, help="quiver JSON file or builtin name (A2, A3, Jordan, Kronecker)")
    common.add_argument("--p", type=_positive, required=True)
    common.add_argument("--e", type=_positive, default=1)
    common.add_argument("--format", choices=("table", "json", "csv"), default="table")
    common.add_argument("--max-points", type=_positive, default=None)
    common.add_argument("--max-hom", type=_positive, default=None)
    common.add_argument("--threads", type=_positive, default=1)

    ap = _Parser(prog="hallforge", description="Exact Ringel-Hall algebras over finite fields.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("orbits", parents=[common], help="iso classes of representations")
    p.add_argument("--dim", action="append", required=True, help="dimension vector, e.g. 1,1 (repeatable)")

    p = sub.add_parser("hall", parents=[common], help="products, coproducts, antipode, pairing")
    p.add_argument("op", choices=("mul", "comul", "antipode", "pairing"))
    p.add_argument("classes", nargs="+", help="class ids like 1,1:0, or S<vertex> for a simple")
    p.add_argument("--twisted", action="store_true")

    p = sub.add_parser("verify", parents=[common], help="run identity sweeps")
    p.add_argument("which", choices=("green", "rp", "bialgebra", "adjoint", "antipode", "serre", "coincide", "all"))
    p.add_argument("--limit-dim", type=_limit, default=3, help="total bound (3) or componentwise bound (2,2)")

    p = sub.add_parser("census", parents=[common], help="M, I, A and Frobenius-orbit counts")
    p.add_argument("--dim", action="append", default=[])
    p.add_argument("--s", type=_positive, nargs="+", default=[1])
    return ap


# -- run context ----------------------------------------------------------------------------------


def load_quiver(source: str) -> Quiver:
    path = Path(source)
    if path.suffix == ".json" or path.exists():
        return Quiver.load(path)
    return builtin(source)


class Run:
    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.quiver = load_quiver(args.quiver)
        self.field: FieldSpec = field_make(args.p, args.e)
        self.max_points = args.max_points or default_max_points()
        self.max_hom = args.max_hom or DEFAULT_MAX_HOM
        self._H: HallAlgebra | None = None

    @property
    def H(self) -> HallAlgebra:
        if self._H is None:
            self._H = HallAlgebra(self.quiver, self.field, self.max_points, self.max_hom)
        return self._H

    def dims(self) -> list[tuple[int, ...]]:
        out = [parse_dim(d) for d in self.args.dim]
        for d in out:
            self.quiver.check(d)
        return out

    def class_arg(self, text: str) -> str:
        if ":" not in text and text[:1] in "Ss" and text[1:] in self.quiver.vertices:
            return self.H.simple(text[1:])
        return self.H.iso_class(text).id


# -- emission ---------------------------------------------------------------------------------------


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _table(rows: list[dict], fields: Sequence[str]) -> str:
    cells = [[str(f) for f in fields]] + [[_cell(r[f]) for f in fields] for r in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(fields))]
    return "\n".join("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() for row in cells)


def _cell(v) -> str:
    if isinstance(v, bool):
        return "yes" if v else "no"
    return str(v)


def _csv(rows: list[dict], fields: Sequence[str]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(fields), lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: str(r[k]).lower() if isinstance(r[k], bool) else r[k] for k in fields})
    return buf.getvalue().rstrip("\n")


def emit_rows(rows: list[dict], fields: Sequence[str], fmt: str) -> str:
    if fmt == "json":
        return "\n".join(_dump({k: r[k] for k in fields}) for r in rows)
    if fmt == "csv":
        return _csv(rows, fields)
    return _table(rows, fields)


# -- commands ---------------------------------------------------------------------------------------

ORBIT_FIELDS = ("id", "dim", "orbit_size", "aut", "indecomposable", "absolutely_indecomposable", "min_field_degree")


def cmd_orbits(run: Run) -> tuple[int, str]:
    rows = []
    for alpha in run.dims():
        cen = orbit_census(run.quiver, alpha, run.field, run.max_points)
        for c in cen:
            rows.append({
                "id": c.id,
                "dim": fmt_dim(c.dim),
                "orbit_size": c.orbit_size,
                "aut": c.aut_count,
                "indecomposable": is_indecomposable(c.rep, run.max_hom),
                "absolutely_indecomposable": is_absolutely_indecomposable(c.rep, run.max_hom),
                "min_field_degree": minimal_field_of_definition(c.rep, None, run.max_hom),
            })
    return EXIT_OK, emit_rows(rows, ORBIT_FIELDS, run.args.format)


def _element_out(x: HallElement | TensorElement, fmt: str) -> str:
    if fmt == "json":
        return x.dumps()
    if fmt == "csv":
        rows = [{"key": k if isinstance(k, str) else " (x) ".join(k), "a": _frac(c.a), "b": _frac(c.b)} for k, c in x.items()]
        return _csv(rows, ("key", "a", "b"))
    return str(x)


def _frac(x) -> str:
    return f"{x.numerator}/{x.denominator}"


def cmd_hall(run: Run) -> tuple[int, str]:
    a = run.args
    H = run.H
    ids = [run.class_arg(c) for c in a.classes]
    arity = {"mul": None, "comul": 1, "antipode": 1, "pairing": 2}[a.op]
    if arity is not None and len(ids) != arity:
        raise InputError(f"{a.op} takes {arity} class id(s), got {len(ids)}")
    if a.op == "mul":
        if len(ids) < 2:
            raise InputError("mul takes at least two class ids")
        return EXIT_OK, _element_out(H.multiply_many(ids, a.twisted), a.format)
    if a.op == "comul":
        return EXIT_OK, _element_out(H.comultiply(ids[0], a.twisted), a.format)
    if a.op == "antipode":
        return EXIT_OK, _element_out(H.antipode(ids[0], a.twisted), a.format)
    c = H.hopf_pairing(ids[0], ids[1])
    if a.format == "json":
        return EXIT_OK, _dump(c.to_json())
    if a.format == "csv":
        return EXIT_OK, _csv([{"a": _frac(c.a), "b": _frac(c.b)}], ("a", "b"))
    return EXIT_OK, str(c)


def _sweeps(run: Run, which: str) -> list[SweepResult]:
    H, lim, th = run.H, run.args.limit_dim, run.args.threads
    table = {
        "green": lambda: [sweep_green(H, lim, th)],
        "rp": lambda: [sweep_riedtmann_peng(H, lim, th)],
        "bialgebra": lambda: [sweep_bialgebra(H, lim, th)],
        "adjoint": lambda: [sweep_adjointness(H, lim, th)],
        "antipode": lambda: [
            sweep_coassociativity(H, lim, th),
            sweep_antipode(H, lim, th),
            sweep_antipode_relations(H, lim, th),
        ],
        "serre": lambda: [sweep_serre(H, th)],
        "coincide": lambda: [sweep_coincide(H, th)],
    }
    if which != "all":
        return table[which]()
    return [r for key in ("green", "rp", "bialgebra", "adjoint", "antipode", "serre", "coincide") for r in table[key]()]


def cmd_verify(run: Run) -> tuple[int, str]:
    results = _sweeps(run, run.args.which)
    ok = all(r.ok for r in results)
    if run.args.format == "json":
        out = [_dump({
            "sweep": r.name,
            "checked": r.checked,
            "failed": len(r.failures),
            "diagnostics": len(r.diagnostics),
            "ok": r.ok,
            "failures": [f.to_json() for f in r.failures],
            "reports": [x.to_json() for x in r.reports],
        }) for r in results]
    elif run.args.format == "csv":
        rows = [{"sweep": r.name, "checked": r.checked, "failed": len(r.failures),
                 "diagnostics": len(r.diagnostics), "ok": r.ok} for r in results]
        out = [_csv(rows, ("sweep", "checked", "failed", "diagnostics", "ok"))]
    else:
        out = []
        for r in results:
            line = r.summary()
            if r.diagnostics:
                line += f", {len(r.diagnostics)} diagnostics"
            out.append(line)
            out.extend("  " + str(x) for x in r.reports)
            out.extend("  " + str(f) for f in r.failures)
    return (EXIT_OK if ok else EXIT_FAIL), "\n".join(out)


def cmd_census(run: Run) -> tuple[int, str]:
    dims = run.dims()
    if not dims:
        raise InputError("census needs at least one --dim")
    q = run.field.q
    jobs = [(d, s) for d in dims for s in run.args.s]
    rows = parallel_map(lambda job: census_row(run.quiver, job[0], q, job[1], run.max_points, run.max_hom), jobs, run.args.threads)
    dicts = [r.as_dict() for r in rows]
    code = EXIT_OK if all(r.agree for r in rows) else EXIT_FAIL
    return code, emit_rows(dicts, CensusRow.FIELDS, run.args.format)


COMMANDS = {"orbits": cmd_orbits, "hall": cmd_hall, "verify": cmd_verify, "census": cmd_census}


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        code, text = COMMANDS[args.command](Run(args))
    except SizeGuardExceeded as exc:
        print(f"hallforge: size guard: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except NonIntegerResult as exc:
        print(f"hallforge: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (InputError, HallforgeError) as exc:
        print(f"hallforge: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if text:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
