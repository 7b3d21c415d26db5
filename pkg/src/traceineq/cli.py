"""Command-line front end: ``traceineq {scan,cex,gt,verify}``.

Exit codes: 0 every check passed, 1 a mathematical violation or failed
expectation, 2 bad usage or input.
"""

from __future__ import annotations

import argparse
import contextlib
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__, aho, cex, gt, suites
from .matcore import DomainError, InputError, PARSE_RTOL, as_hermitian

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    return format(float(x), ".17g")


def manifest(command: str, parameters: dict, seed=None) -> dict:
    return {
        "command": command,
        "parameters": parameters,
        "seed": seed,
        "artifact_version": __version__,
    }


def _jsonable(x):
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return fmt(x) if not math.isfinite(x) else x
    if isinstance(x, np.integer):
        return int(x)
    return x


def dump_json(obj) -> str:
    return json.dumps(_jsonable(obj), indent=2, sort_keys=True) + "\n"


def manifest_line(m: dict) -> str:
    return "# " + json.dumps(_jsonable(m), sort_keys=True) + "\n"


# -- MatrixFile -------------------------------------------------------------


def read_matrix_file(path) -> np.ndarray:
    """Parse ``{"n": ..., "real": [[...]], "imag": [[...]]}`` into a Hermitian
    array. Asymmetry up to ``1e-10 ||A||_F`` is symmetrised away."""
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise InputError(f"{path}: {exc}") from exc
    if not isinstance(doc, dict) or "n" not in doc or "real" not in doc:
        raise InputError(f"{path}: expected an object with fields n and real")
    n = doc["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise InputError(f"{path}: n must be a positive integer")

    def grid(key):
        try:
            arr = np.array(doc[key], dtype=float)
        except (TypeError, ValueError) as exc:
            raise InputError(f"{path}: {key} is not a numeric array") from exc
        if arr.shape != (n, n):
            raise InputError(f"{path}: {key} has shape {arr.shape}, expected ({n}, {n})")
        return arr

    A = grid("real")
    if doc.get("imag") is not None:
        A = A + 1j * grid("imag")
    return as_hermitian(A, rtol=PARSE_RTOL)


def matrix_document(A: np.ndarray) -> dict:
    A = np.asarray(A)
    doc = {"n": int(A.shape[0]), "real": np.real(A).tolist()}
    if np.iscomplexobj(A) and np.any(A.imag):
        doc["imag"] = np.imag(A).tolist()
    return doc


def write_matrix_file(path, A: np.ndarray) -> None:
    # repr-exact floats so that re-reading gives the same matrix
    Path(path).write_text(json.dumps(matrix_document(A)) + "\n", encoding="utf-8")


# -- output -----------------------------------------------------------------


@contextlib.contextmanager
def _output(path):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            yield fh


SCAN_COLUMNS = ["s", "t", "re_trace", "im_trace", "abs_trace", "tr_xy", "upper_margin",
                "upper_ok", "lower_value", "lower_margin", "lower_ok"]


def _scan_record(row: aho.ScanRow) -> list:
    return [row.s, row.t, row.trace.real, row.trace.imag, abs(row.trace), row.tr_xy,
            row.upper.margin, row.upper.holds, row.lower.left, row.lower.margin, row.lower.holds]


def cmd_scan(args) -> int:
    X = read_matrix_file(args.x_file)
    Y = read_matrix_file(args.y_file)
    if X.shape != Y.shape:
        raise InputError("X and Y differ in size")
    if not 0 < args.step <= 0.25:
        raise UsageError("--step must lie in (0, 0.25]")
    rows = aho.scan(X, Y, args.step)
    m = manifest("scan", {"x_file": str(args.x_file), "y_file": str(args.y_file), "step": args.step})
    violated = any(not (r.upper.holds and r.lower.holds) for r in rows)
    with _output(args.out) as fh:
        if args.format == "csv":
            fh.write(manifest_line(m))
            fh.write(",".join(SCAN_COLUMNS) + "\n")
            for r in rows:
                fh.write(",".join(fmt(v) for v in _scan_record(r)) + "\n")
        else:
            records = [dict(zip(SCAN_COLUMNS, _scan_record(r))) for r in rows]
            fh.write(dump_json({"manifest": m, "rows": records, "violations": violated}))
    return EXIT_VIOLATION if violated else EXIT_OK


# -- cex --------------------------------------------------------------------

EXAMPLES = {"4.1": cex.example_4_1, "4.2": cex.example_4_2}


def _instance(args) -> cex.CexInstance:
    explicit = [args.a, args.b, args.x, args.c, args.d]
    if args.example is not None:
        if any(v is not None for v in explicit):
            raise UsageError("give either an example id or explicit parameters, not both")
        return EXAMPLES[args.example]()
    if any(v is None for v in explicit):
        raise UsageError("explicit parameters need all of --a --b --x --c --d")
    return cex.build(cex.CexParams(*explicit))


def _claims(inst: cex.CexInstance, example: str):
    """``(description, claimed, computed, passed)`` for a preset."""
    if example == "4.1":
        txy = cex.aho_trace_structured(inst, 1.0, 1.0)
        val = cex.aho_trace_structured(inst, 0.79, 0.79)
        return [
            ("Tr[XY] < 1.50001e-10", 1.50001e-10, txy, txy < 1.50001e-10),
            ("Tr[X^0.79 Y^0.79 X^0.21 Y^0.21] > 1.61022e-10", 1.61022e-10, val, val > 1.61022e-10),
        ]
    val = cex.aho_trace_structured(inst, 0.98, 0.98)
    tstar = cex.zero_crossing(inst, 0.5, 0.98)
    at_star = cex.aho_trace_structured(inst, tstar, tstar)
    half = cex.aho_trace_structured(inst, 0.5, 0.5)
    return [
        ("Tr[X^0.98 Y^0.98 X^0.02 Y^0.02] < -2.38674 (as stated)", -2.38674, val, val < -2.38674),
        ("Tr[X^0.98 Y^0.98 X^0.02 Y^0.02] < -2.38674e-7", -2.38674e-7, val, val < -2.38674e-7),
        ("Tr[X^1/2 Y^1/2 X^1/2 Y^1/2] > 0", 0.0, half, half > 0),
        (f"zero crossing of the s=t trace in (0.5, 0.98): t*={fmt(tstar)}", 0.0, at_star, 0.5 < tstar < 0.98),
    ]


def cmd_cex(args) -> int:
    inst = _instance(args)
    p = inst.params
    params = {"example": args.example, "a": p.a, "b": p.b, "x": p.x, "c": p.c, "d": p.d, "action": args.action}
    m = manifest("cex", params)
    if args.action == "emit":
        out = Path(args.out or ".")
        out.mkdir(parents=True, exist_ok=True)
        write_matrix_file(out / "X.json", inst.X)
        write_matrix_file(out / "Y.json", inst.Y)
        sys.stdout.write(manifest_line(m))
        sys.stdout.write(f"wrote {out / 'X.json'} and {out / 'Y.json'}\n")
        return EXIT_OK
    with _output(args.out) as fh:
        if args.action == "reproduce":
            if args.example is None:
                raise UsageError("reproduce needs an example id")
            claims = _claims(inst, args.example)
            if args.format == "json":
                fh.write(dump_json({"manifest": m, "claims": [
                    {"claim": c, "bound": b, "computed": v, "pass": ok} for c, b, v, ok in claims]}))
            else:
                fh.write(manifest_line(m))
                for c, _, v, ok in claims:
                    fh.write(f"{'PASS' if ok else 'FAIL'}  {c}  computed={fmt(v)}\n")
            return EXIT_OK if all(ok for *_, ok in claims) else EXIT_VIOLATION
        if args.action == "zero-crossing":
            lo, hi = args.lo, args.hi
            try:
                tstar = cex.zero_crossing(inst, lo, hi)
            except DomainError as exc:
                raise UsageError(str(exc)) from exc
            val = cex.aho_trace_structured(inst, tstar, tstar)
            result = {"t_star": tstar, "trace_at_t_star": val, "lo": lo, "hi": hi}
        else:
            if inst.params.c == 0 and inst.params.d == 0:
                raise UsageError("gt-derivative needs c > 0 or d > 0")
            swapped = cex.build(inst.params.swapped())
            result = {
                "fprime_at_1": cex.gt_cex_derivative(inst),
                "fprime_at_1_swapped_ab": cex.gt_cex_derivative(swapped),
            }
        if args.format == "json":
            fh.write(dump_json({"manifest": m, **result}))
        else:
            fh.write(manifest_line(m))
            for k, v in result.items():
                fh.write(f"{k}={fmt(v)}\n")
    return EXIT_OK


# -- gt ---------------------------------------------------------------------


def _graph(spec: str) -> gt.GraphSpec:
    kind, _, rest = spec.partition(":")
    try:
        if kind == "path":
            return gt.GraphSpec.path(int(rest))
        if kind == "complete":
            return gt.GraphSpec.complete(int(rest))
        if kind == "cycle":
            return gt.GraphSpec.cycle(int(rest))
        if kind == "edges":
            n_str, _, edge_str = rest.partition(":")
            edges = [tuple(int(v) for v in e.split("-")) for e in edge_str.split(",") if e]
            return gt.GraphSpec(int(n_str), edges)
    except ValueError as exc:
        raise UsageError(f"bad graph spec {spec!r}: {exc}") from exc
    raise UsageError(f"unknown graph kind {kind!r} (path:N, complete:N, cycle:N, edges:N:0-1,1-2)")


def cmd_gt(args) -> int:
    sources = [args.h_file is not None, args.graph is not None, args.cex is not None]
    if sum(sources) != 1:
        raise UsageError("give exactly one of --h/--k, --graph/--potential, --cex")
    if args.points < 2:
        raise UsageError("--points must be at least 2")
    params = {"points": args.points}
    if args.h_file is not None:
        if args.k_file is None:
            raise UsageError("--h needs --k")
        H, K = read_matrix_file(args.h_file), read_matrix_file(args.k_file)
        params.update(h_file=str(args.h_file), k_file=str(args.k_file))
        prof = gt.gt_profile(H, K, args.points)
    elif args.graph is not None:
        g = _graph(args.graph)
        if args.potential is None:
            raise UsageError("--graph needs --potential")
        try:
            v = [float(x) for x in args.potential.split(",")]
        except ValueError as exc:
            raise UsageError(f"bad potential: {exc}") from exc
        params.update(graph=args.graph, potential=v)
        prof = gt.gt_graph_demo(g, v, args.points)
    else:
        inst = EXAMPLES[args.cex]()
        H, K = cex.cex_operators(inst, d_floor=args.d_floor)
        params.update(cex=args.cex, d_floor=args.d_floor)
        prof = gt.gt_profile(H, K, args.points)
    summary = {
        "monotone": prof.monotone,
        "min_derivative": prof.min_derivative,
        "f0": prof.f_values[0],
        "f1": prof.f_values[-1],
        "golden_thompson_ok": prof.golden_thompson_ok,
    }
    m = manifest("gt", params)
    with _output(args.out) as fh:
        if args.format == "csv":
            fh.write(manifest_line(m))
            fh.write("u,f,fprime\n")
            for u, f, fp in zip(prof.u_grid, prof.f_values, prof.fprime_values):
                fh.write(f"{fmt(u)},{fmt(f)},{fmt(fp)}\n")
            fh.write(json.dumps(_jsonable(summary), sort_keys=True) + "\n")
        else:
            rows = [{"u": u, "f": f, "fprime": fp}
                    for u, f, fp in zip(prof.u_grid, prof.f_values, prof.fprime_values)]
            fh.write(dump_json({"manifest": m, "rows": rows, "summary": summary}))
    return EXIT_OK


# -- verify -----------------------------------------------------------------


def cmd_verify(args) -> int:
    if args.trials < 1:
        raise UsageError("--trials must be at least 1")
    names = list(suites.SUITES) if args.suite == "all" else [args.suite]
    m = manifest("verify", {"suite": args.suite, "trials": args.trials}, seed=args.seed)
    results = {name: suites.SUITES[name](args.trials, args.seed) for name in names}
    ok = all(t.ok for tallies in results.values() for t in tallies)
    with _output(args.out) as fh:
        if args.format == "json":
            fh.write(dump_json({"manifest": m, "ok": ok, "suites": {
                name: [{"property": t.name, "passed": t.passed, "total": t.total, "worst": t.worst}
                       for t in tallies] for name, tallies in results.items()}}))
        else:
            fh.write(manifest_line(m))
            for name, tallies in results.items():
                for t in tallies:
                    status = "PASS" if t.ok else "FAIL"
                    fh.write(f"{status}  {name}: {t.name}  {t.passed}/{t.total}  worst={fmt(t.worst)}\n")
    return EXIT_OK if ok else EXIT_VIOLATION


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="traceineq", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, default_format="csv"):
        p.add_argument("--format", choices=("csv", "json"), default=default_format)
        p.add_argument("--out", default=None, help="output path (default: stdout)")

    p = sub.add_parser("scan", help="upper/lower bound checks on the [1/2,1]^2 grid")
    p.add_argument("x_file")
    p.add_argument("y_file")
    p.add_argument("--step", type=float, default=0.05)
    common(p)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("cex", help="counterexample presets and constructions")
    p.add_argument("example", nargs="?", choices=sorted(EXAMPLES))
    p.add_argument("--action", choices=("reproduce", "emit", "zero-crossing", "gt-derivative"),
                   default="reproduce")
    for name in "abxcd":
        p.add_argument(f"--{name}", type=float, default=None)
    p.add_argument("--lo", type=float, default=0.5)
    p.add_argument("--hi", type=float, default=0.98)
    common(p)
    p.set_defaults(func=cmd_cex)

    p = sub.add_parser("gt", help="Golden-Thompson interpolation profile")
    p.add_argument("--h", dest="h_file")
    p.add_argument("--k", dest="k_file")
    p.add_argument("--graph", help="path:N, complete:N, cycle:N or edges:N:0-1,1-2")
    p.add_argument("--potential", help="comma-separated vertex potential")
    p.add_argument("--cex", choices=sorted(EXAMPLES), help="H = log Y, K = log X of a preset")
    p.add_argument("--d-floor", type=float, default=1e-30,
                   help="replacement for d = 0 so that log Y is finite (with --cex)")
    p.add_argument("--points", type=int, default=101)
    common(p)
    p.set_defaults(func=cmd_gt)

    p = sub.add_parser("verify", help="seeded property suites")
    p.add_argument("suite", choices=(*suites.SUITES, "all"))
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    common(p, default_format="csv")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except BrokenPipeError:
        # downstream reader closed early (e.g. `| head`); not our error
        sys.stderr.close()
        return EXIT_OK
    except (UsageError, InputError, DomainError, cex.PrecisionRegimeError) as exc:
        print(f"traceineq: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
