"""``taubessel`` command line: solve, sweep, matrices, approx, verify."""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path

import mpmath

from . import linalg
from .approx import project_function, project_polynomial
from .basis import DEFAULT_PRECISION, BasisSpec, build_change_matrices
from .newton import NewtonConfig, NotConverged, SingularJacobian, solve
from .opmat import build_c_tilde, build_opmatrices
from .problems import PROBLEMS, build_problem, nusselt, reference_tables
from .taucore import residual_at, tau_project

log = logging.getLogger("taubessel")

EXIT_FAIL, EXIT_NOT_CONVERGED, EXIT_CONFIG = 1, 2, 3
MATRICES = ("y", "s", "m", "minv", "p", "d", "l", "i", "k")
FUNCTIONS = {
    "sin": mpmath.sin,
    "exp_x2": lambda x: mpmath.exp(x * x),
}


class ConfigError(ValueError):
    pass


# ---------------------------------------------------------------------------
# formatting


def decimal(v, digits: int) -> str:
    return mpmath.nstr(linalg.as_mpf(v), digits)


def _short(text: str, digits: int = 3) -> str:
    return mpmath.nstr(mpmath.mpf(text), digits)


def rational(v) -> str:
    f = linalg.to_fraction(v)
    return f"{f.numerator}/{f.denominator}"


def exact_decimal(f: Fraction) -> str:
    """Short decimal for a fraction with a terminating expansion, else ``p/q``."""
    den = f.denominator
    for p in (2, 5):
        while den % p == 0:
            den //= p
    if den != 1:
        return rational(f)
    sign = "-" if f < 0 else ""
    f = abs(f)
    whole, frac = divmod(f.numerator, f.denominator)
    digits = ""
    while frac:
        frac *= 10
        d, frac = divmod(frac, f.denominator)
        digits += str(d)
    return f"{sign}{whole}.{digits}" if digits else f"{sign}{whole}"


def write_table(path: Path | None, header: list[str], rows: list[list[str]], fmt: str, meta: dict | None = None) -> str:
    if fmt == "json":
        doc = dict(meta or {})
        doc["columns"] = header
        doc["rows"] = rows
        text = json.dumps(doc, indent=2) + "\n"
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        text = buf.getvalue()
    if path is None:
        sys.stdout.write(text)
    else:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="\n", encoding="utf-8") as fh:
            fh.write(text)
    return text


# ---------------------------------------------------------------------------
# argument handling


def parse_params(items: list[str] | None) -> dict[str, str]:
    out = {}
    for item in items or []:
        key, sep, value = item.partition("=")
        if not sep or not key or not value:
            raise ConfigError(f"expected key=value, got {item!r}")
        out[key.strip()] = value.strip()
    return out


def parse_sweep(text: str) -> tuple[str, list[Fraction]]:
    """``name=start:stop:count`` as exact, evenly spaced values."""
    try:
        name, spec = text.split("=", 1)
        start, stop, count = spec.split(":")
        start, stop, count = Fraction(start), Fraction(stop), int(count)
    except ValueError:
        raise ConfigError(f"sweep must look like name=start:stop:count, got {text!r}") from None
    if count < 1:
        raise ConfigError("sweep count must be >= 1")
    if count == 1:
        return name, [start]
    step = (stop - start) / (count - 1)
    return name, [start + k * step for k in range(count)]


def sample_points(text: str | None, default: tuple[str, ...], interval: tuple[str, str]) -> list[str]:
    if not text:
        return list(default)
    a, b = Fraction(interval[0]), Fraction(interval[1])
    if "," not in text and text.strip().isdigit():
        count = int(text)
        if count < 2:
            raise ConfigError("a point count must be >= 2")
        pts = [a + (b - a) * k / (count - 1) for k in range(count)]
        return [exact_decimal(p) for p in pts]
    pts = [p.strip() for p in text.split(",") if p.strip()]
    for p in pts:
        try:
            v = Fraction(p)
        except ValueError:
            raise ConfigError(f"bad sample point {p!r}") from None
        if not a <= v <= b:
            raise ConfigError(f"sample point {p} outside [{interval[0]}, {interval[1]}]")
    return pts


def read_values(path: str) -> list[str]:
    text = Path(path).read_text(encoding="utf-8")
    return [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]


def _checked_decimal(v) -> str:
    mpmath.mpf(str(v))
    return str(v)


def newton_config(args) -> NewtonConfig:
    init = getattr(args, "init", "bc")
    if init.startswith("file:"):
        path = init[5:]
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read initial state: {exc}") from None
        try:
            doc = json.loads(text)
            init = doc["coefficients"] if isinstance(doc, dict) else doc
        except (json.JSONDecodeError, KeyError):
            init = read_values(path)
        # left as strings: the solver parses them at its working precision
        try:
            if isinstance(init, dict):
                init = {k: [_checked_decimal(v) for v in vs] for k, vs in init.items()}
            else:
                init = [_checked_decimal(v) for v in init]
        except (TypeError, ValueError):
            raise ConfigError(f"{path} does not hold decimal coefficients") from None
    elif init not in ("zero", "bc"):
        raise ConfigError("--init must be zero, bc or file:<path>")
    try:
        return NewtonConfig(
            tol=getattr(args, "tol", None),
            max_iter=getattr(args, "max_iter", 50),
            init=init,
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


# ---------------------------------------------------------------------------
# solving and sampling


def solve_and_sample(name: str, n, precision: int, params: dict, points, cfg: NewtonConfig) -> dict:
    """Build, solve and sample one problem; returns a JSON-ready record."""
    problem = build_problem(name, n, precision, params)
    report = solve(tau_project(problem), cfg)
    entry = PROBLEMS[name]
    digits = precision
    rows = []
    with problem.basis.workdps():
        if name == "squeezing-flow":
            header = ["x", "f", "df", "theta", "dtheta", "residual_f", "residual_theta"]
            exps = [problem.expansion(report.state, k) for k in ("f", "df", "theta", "dtheta")]
        else:
            header = ["x", "value", "deriv", "residual"]
            exps = [problem.expansion(report.state, k) for k in ("y", "dy")]
        for p in points:
            x = linalg.as_mpf(Fraction(p))
            vals = [decimal(e(x), digits) for e in exps]
            res = [decimal(r, digits) for r in residual_at(problem, report.state, x)]
            rows.append([p, *vals, *res])
        extra = {}
        if name == "squeezing-flow":
            extra["nusselt"] = decimal(nusselt(problem, report.state), digits)
        # coefficients keep the guard digits so that --init file: restarts exactly
        coeffs = {k: [decimal(v, problem.basis.working_digits) for v in c] for k, c in report.state.items()}
        rec = {
            "problem": name,
            "n": problem.basis.order_n,
            "interval": list(entry.interval),
            "precision": precision,
            "params": {k: str(v) for k, v in problem.params.items()},
            "iterations": report.iterations,
            "residual_norm": decimal(report.residual_norm, digits),
            "condition_estimate": decimal(report.condition_estimate, digits),
            "init": report.init,
            **extra,
            "header": header,
            "rows": rows,
            "coefficients": coeffs,
        }
    return rec


def comparisons(rec: dict) -> list[str]:
    """Lines comparing a solve record with matching reference tables."""
    lines = []
    by_x = {Fraction(r[0]): r for r in rec["rows"]}
    col = {h: i for i, h in enumerate(rec["header"])}
    for tbl in reference_tables():
        if tbl.problem != rec["problem"] or tbl.n != rec["n"]:
            continue
        if tbl.quantity == "nusselt":
            for row in tbl.column("present"):
                params = dict(tbl.params)
                params.update(dict(row.params))
                if _same_params(params, rec["params"]):
                    diff = abs(mpmath.mpf(rec["nusselt"]) - mpmath.mpf(row.value))
                    lines.append(f"table {tbl.table}: nusselt {_short(rec['nusselt'], 18)} vs {row.value}, |diff| {mpmath.nstr(diff, 3)}")
            continue
        if not _same_params(tbl.params, rec["params"]):
            continue
        key = {"y": "value", "df": "df", "theta": "theta"}[tbl.quantity]
        for source in tbl.sources():
            if source == "residual":
                continue
            diffs = [
                abs(mpmath.mpf(by_x[Fraction(r.x)][col[key]]) - mpmath.mpf(r.value))
                for r in tbl.column(source)
                if r.x is not None and Fraction(r.x) in by_x
            ]
            if diffs:
                lines.append(f"table {tbl.table} vs {source}: max |diff| {mpmath.nstr(max(diffs), 3)} over {len(diffs)} points")
    return lines


def _same_params(ref: dict, got: dict) -> bool:
    try:
        return all(Fraction(str(v)) == Fraction(str(got[k])) for k, v in ref.items())
    except (KeyError, ValueError):
        return False


def _job(payload):
    name, n, precision, params, points, cfg = payload
    try:
        return solve_and_sample(name, n, precision, params, points, cfg), None
    except (NotConverged, SingularJacobian) as exc:
        return None, f"{type(exc).__name__}: {exc}"


# ---------------------------------------------------------------------------
# commands


def _problem_settings(args) -> tuple[str, int | None, int, dict, list[str]]:
    name = args.problem
    if name not in PROBLEMS:
        raise ConfigError(f"unknown problem {name!r}; choose from {', '.join(PROBLEMS)}")
    entry = PROBLEMS[name]
    for flag, want in (("a", entry.interval[0]), ("b", entry.interval[1])):
        got = getattr(args, flag, None)
        if got is not None and Fraction(got) != Fraction(want):
            raise ConfigError(f"{name} is posed on [{entry.interval[0]}, {entry.interval[1]}]; --{flag} cannot change it")
    n = getattr(args, "n", None)
    if n is not None and n < entry.min_n:
        raise ConfigError(f"{name} needs N >= {entry.min_n}")
    params = parse_params(args.param)
    unknown = set(params) - set(entry.params)
    if unknown:
        raise ConfigError(f"unknown parameter(s) {sorted(unknown)} for {name}; known: {sorted(entry.params)}")
    points = sample_points(args.points, entry.samples, entry.interval)
    return name, n, getattr(args, "precision", DEFAULT_PRECISION), params, points


def cmd_solve(args) -> int:
    name, n, precision, params, points = _problem_settings(args)
    cfg = newton_config(args)
    try:
        rec = solve_and_sample(name, n, precision, params, points, cfg)
    except (NotConverged, SingularJacobian) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_CONVERGED
    out = Path(args.out) if getattr(args, "out", None) else None
    fmt = getattr(args, "format", "csv")
    meta = {k: v for k, v in rec.items() if k not in ("header", "rows")}
    write_table(out, rec["header"], rec["rows"], fmt, meta)
    info = sys.stderr if out is None else sys.stdout
    print(f"{name}: N={rec['n']} converged in {rec['iterations']} iterations, |R| = {_short(rec['residual_norm'])}", file=info)
    if "nusselt" in rec:
        print(f"nusselt = {_short(rec['nusselt'], 18)}", file=info)
    for line in comparisons(rec):
        print(line, file=info)
    return 0


def cmd_sweep(args) -> int:
    name, n, precision, params, points = _problem_settings(args)
    pname, values = parse_sweep(args.sweep)
    if pname not in PROBLEMS[name].params:
        raise ConfigError(f"{name} has no parameter {pname!r}")
    cfg = newton_config(args)
    fmt = getattr(args, "format", "csv")
    outdir = Path(getattr(args, "out", None) or f"sweep-{name}-{pname}")
    labels = [exact_decimal(v) for v in values]
    payloads = [(name, n, precision, {**params, pname: lab}, points, cfg) for lab in labels]
    jobs = max(1, getattr(args, "jobs", 1))
    if jobs > 1 and len(payloads) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_job, payloads))
    else:
        results = [_job(p) for p in payloads]

    index_header = ["parameter", "value", "file", "status", "iterations", "residual_norm"]
    if name == "squeezing-flow":
        index_header.append("nusselt")
    index_rows = []
    for lab, (rec, err) in zip(labels, results):
        fname = f"{name}_{pname}={lab.replace('/', '_')}.{fmt}"
        if rec is None:
            row = [pname, lab, "", err, "", ""]
            if name == "squeezing-flow":
                row.append("")
        else:
            meta = {k: v for k, v in rec.items() if k not in ("header", "rows")}
            write_table(outdir / fname, rec["header"], rec["rows"], fmt, meta)
            row = [pname, lab, fname, "converged", str(rec["iterations"]), rec["residual_norm"]]
            if name == "squeezing-flow":
                row.append(rec["nusselt"])
        index_rows.append(row)
    write_table(outdir / f"index.{fmt}", index_header, index_rows, fmt, {"problem": name, "sweep": args.sweep})
    failed = sum(1 for rec, _ in results if rec is None)
    print(f"{len(results) - failed}/{len(results)} sweep points converged; index in {outdir / f'index.{fmt}'}")
    return 0


def _basis_from(args) -> BasisSpec:
    n = getattr(args, "n", None)
    if n is None:
        raise ConfigError("--n is required")
    try:
        return BasisSpec(
            n,
            linalg.to_fraction(getattr(args, "a", None) or "0"),
            linalg.to_fraction(getattr(args, "b", None) or "1"),
            getattr(args, "precision", DEFAULT_PRECISION),
        )
    except (ValueError, TypeError) as exc:
        raise ConfigError(str(exc)) from None


def cmd_matrices(args) -> int:
    spec = _basis_from(args)
    if args.product_from:
        try:
            coeffs = [linalg.to_fraction(v) for v in read_values(args.product_from)]
        except (OSError, ValueError) as exc:
            raise ConfigError(f"cannot read coefficients: {exc}") from None
        if len(coeffs) != spec.size:
            raise ConfigError(f"{args.product_from} has {len(coeffs)} values, expected {spec.size}")
        mat, which = build_c_tilde(spec, coeffs), "product"
    else:
        which = args.which
        change = build_change_matrices(spec)
        ops = build_opmatrices(spec)
        mat = {
            "y": change.y_mat, "s": change.s_mat, "m": change.m_mat, "minv": change.m_inv,
            "p": ops.p_mat, "d": ops.d_mat, "l": ops.l_mat, "i": ops.i_mat, "k": ops.k_mat,
        }[which]
    rows = [[rational(v) for v in row] for row in mat]
    fmt = getattr(args, "format", "csv")
    out = Path(args.out) if getattr(args, "out", None) else None
    meta = {"which": which, "n": spec.order_n, "a": rational(spec.a), "b": rational(spec.b)}
    if fmt == "json":
        write_table(out, [str(j) for j in range(spec.size)], rows, fmt, meta)
    else:
        write_table(out, [f"c{j}" for j in range(spec.size)], rows, fmt)
    return 0


def cmd_approx(args) -> int:
    spec = _basis_from(args)
    fn = args.function
    if fn.startswith("polynomial:"):
        try:
            mono = [linalg.to_fraction(v.strip()) for v in fn.split(":", 1)[1].split(",")]
        except ValueError as exc:
            raise ConfigError(f"bad polynomial coefficients: {exc}") from None
        res = project_polynomial(spec, mono)
        values = [rational(c) for c in res.coeffs.coeffs]
    elif fn in FUNCTIONS:
        res = project_function(spec, FUNCTIONS[fn])
        values = [decimal(c, spec.precision_digits) for c in res.coeffs.coeffs]
    else:
        raise ConfigError(f"unknown function {fn!r}; use sin, exp_x2 or polynomial:<c0,c1,...>")
    fmt = getattr(args, "format", "csv")
    target = args.emit or getattr(args, "out", None)
    out = Path(target) if target else None
    norm = decimal(res.residual_norm, spec.precision_digits)
    write_table(out, ["k", "coefficient"], [[str(k), v] for k, v in enumerate(values)], fmt,
                {"function": fn, "n": spec.order_n, "residual_norm": norm})
    print(f"weighted L2 error {_short(norm)}", file=sys.stderr)
    return 0


def cmd_verify(args) -> int:
    from .verify import run_criteria, select

    if not select(args.filter):
        raise ConfigError(f"no criterion matches {args.filter!r}")
    results = run_criteria(args.filter, echo=lambda s: print(s, flush=True))
    failed = [r.key for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} criteria passed" + (f"; failed: {', '.join(failed)}" if failed else ""))
    return EXIT_FAIL if failed else 0


# ---------------------------------------------------------------------------


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    g = p.add_argument_group("global options")
    g.add_argument("--n", type=int, help="basis order N (problem default if omitted)")
    g.add_argument("--a", help="left end of the interval (matrices, approx)")
    g.add_argument("--b", help="right end of the interval (matrices, approx)")
    g.add_argument("--precision", type=int, help=f"decimal digits (default {DEFAULT_PRECISION})")
    g.add_argument("--tol", help="Newton tolerance on |R|_inf")
    g.add_argument("--max-iter", type=int, help="Newton iteration cap (default 50)")
    g.add_argument("--init", help="initial state: zero, bc or file:<path> (default bc)")
    g.add_argument("--format", choices=("csv", "json"), help="output format (default csv)")
    g.add_argument("--out", help="output file (directory for sweep)")
    g.add_argument("--jobs", type=int, help="parallel sweep workers (default 1)")
    g.add_argument("-v", "--verbose", action="store_true", help="log Newton iterations")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(
        prog="taubessel",
        description="Shifted Bessel Tau solver for nonlinear ODEs.",
        parents=[common],
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def problem_args(p):
        p.add_argument("--problem", required=True, choices=list(PROBLEMS))
        p.add_argument("--param", action="append", metavar="KEY=VALUE", help="override a problem parameter")
        p.add_argument("--points", help="comma-separated x values or a count for a uniform grid")

    p = sub.add_parser("solve", parents=[common], help="solve one problem and sample it")
    problem_args(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("sweep", parents=[common], help="solve over a range of one parameter")
    problem_args(p)
    p.add_argument("--sweep", required=True, metavar="NAME=START:STOP:COUNT")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("matrices", parents=[common], help="dump exact basis and operational matrices")
    p.add_argument("--which", choices=MATRICES, default="d")
    p.add_argument("--product-from", metavar="FILE", help="dump the product matrix of these coefficients")
    p.set_defaults(func=cmd_matrices)

    p = sub.add_parser("approx", parents=[common], help="project a function onto the basis")
    p.add_argument("--function", required=True, help="sin, exp_x2 or polynomial:<c0,c1,...>")
    p.add_argument("--emit", metavar="FILE", help="write coefficients here")
    p.set_defaults(func=cmd_approx)

    p = sub.add_parser("verify", parents=[common], help="run the golden-table and property checks")
    p.add_argument("--filter", help="only run criteria whose key contains this text")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if getattr(args, "verbose", False) else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except (ConfigError, KeyError, ValueError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
