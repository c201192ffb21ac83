"""Command line front end: ``dopalg <command> [input] [options]``.

Input is either a catalog entry (``--catalog killing --n 4``) or a .dop file
(``--file sys.dop [--system NAME]``).  ``--param name=value`` substitutes
parameters before anything else runs.  Exit status is 0 on success, 1 on
bad input (and on a failed acceptance criterion), 2 when a resource budget
is exhausted.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from functools import partial

from . import __version__, kernels
from .catalog import CATALOG, MetricSpec, SystemDef, UnsupportedDimension, build
from .groebner import Budget, ResourceBudgetExceeded
from .scalars import ScalarError
from .sysdsl import DslError, matrix_to_json, parse, parse_coeff, to_dsl, to_json, to_text

SCHEMA_VERSION = "1.0"
EXIT_OK, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2


class InputError(Exception):
    pass


# -- input ---------------------------------------------------------------------


def _signature(text: str | None, n: int | None):
    if text is None:
        return None
    t = text.strip().lower()
    if t in ("euclidean", "e"):
        return None
    if t in ("minkowski", "m"):
        if n is None:
            raise InputError("--signature minkowski needs --n")
        return MetricSpec.minkowski(n).signature
    try:
        sig = tuple(int(v) for v in text.split(","))
    except ValueError:
        raise InputError(f"bad --signature {text!r}; use euclidean, minkowski or a list like 1,1,-1") from None
    if any(v not in (1, -1) for v in sig):
        raise InputError("signature entries must be 1 or -1")
    if n is not None and len(sig) != n:
        raise InputError(f"signature has {len(sig)} entries but n = {n}")
    return sig


def _substitute(sd: SystemDef, params: list[str]) -> SystemDef:
    if not params:
        return sd
    values_text = {}
    for item in params:
        name, sep, value = item.partition("=")
        name = name.strip()
        if not sep or not name or not value.strip():
            raise InputError(f"--param expects name=value, got {item!r}")
        if name not in sd.context.params:
            known = ", ".join(sd.context.params) or "none"
            raise InputError(f"{name!r} is not a parameter of {sd.name} (parameters: {known})")
        values_text[name] = value
    ctx = sd.context.with_params([p for p in sd.context.params if p not in values_text])
    values = {}
    for name, text in values_text.items():
        try:
            values[name] = parse_coeff(text, ctx)
        except DslError as exc:
            raise InputError(f"--param {name}: {exc}") from None
    M = sd.matrix.substitute(ctx, values)
    suffix = ",".join(f"{k}={v.strip()}" for k, v in sorted(values_text.items()))
    return SystemDef(sd.name, ctx, sd.unknowns, M, f"{sd.provenance} [{suffix}]", sd.equations)


def load_system(args) -> SystemDef:
    if args.catalog and args.file:
        raise InputError("give either --catalog or --file, not both")
    if args.catalog:
        if args.catalog not in CATALOG:
            raise InputError(f"unknown catalog entry {args.catalog!r}; known: {', '.join(sorted(CATALOG))}")
        sig = _signature(args.signature, args.n)
        try:
            sd = build(args.catalog, n=args.n, signature=sig)
        except (UnsupportedDimension, ValueError) as exc:
            raise InputError(str(exc)) from None
    elif args.file:
        try:
            with open(args.file, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise InputError(f"cannot read {args.file}: {exc.strerror}") from None
        except UnicodeDecodeError:
            raise InputError(f"{args.file} is not UTF-8 text") from None
        try:
            systems = parse(text)
        except DslError as exc:
            raise InputError(f"{args.file}:{exc}") from None
        if args.system:
            match = [s for s in systems if s.name == args.system]
            if not match:
                raise InputError(f"no system {args.system!r} in {args.file}")
            sd = match[0]
        elif len(systems) > 1:
            raise InputError(f"{args.file} defines several systems; pick one with --system")
        else:
            sd = systems[0]
    else:
        raise InputError("no input: use --catalog NAME or --file F")
    return _substitute(sd, args.param or [])


def _digest(sd: SystemDef) -> str:
    return hashlib.sha256(to_dsl(sd).encode()).hexdigest()


def _budget_factory(args):
    kw = {}
    if getattr(args, "degree_cap", None) is not None:
        kw["degree_cap"] = args.degree_cap
    if getattr(args, "timeout", None) is not None:
        kw["timeout"] = args.timeout
    return partial(Budget, **kw)


# -- commands --------------------------------------------------------------------


def _row_strings(row) -> list[str]:
    return [str(e) for e in row]


def _fmt_row(row) -> str:
    return "(" + ", ".join(_row_strings(row)) + ")"


def cmd_adjoint(sd, args, budget):
    A = sd.matrix.adjoint()
    return {"matrix": matrix_to_json(A)}, f"adjoint ({A.nrows} x {A.ncols}):\n{A}"


def cmd_cc(sd, args, budget):
    from .homology import cc

    L = cc(sd.matrix, budget)
    order = L.order()
    res = {"rows": L.nrows, "order": None if L.nrows == 0 else int(order), "matrix": matrix_to_json(L)}
    if L.nrows == 0:
        return res, "no compatibility conditions"
    return res, f"{L.nrows} compatibility condition(s), order {int(order)}:\n{L}"


def _resolution(sd, args, budget):
    from .homology import resolve

    return resolve(sd.matrix, args.max_steps, budget)


def cmd_resolve(sd, args, budget):
    from .homology import euler_characteristic

    R = _resolution(sd, args, budget)
    chi = euler_characteristic(R) if R.terminated else None
    res = {
        "unknowns": R.unknowns,
        "ranks": R.ranks,
        "orders": [int(o) for o in R.orders],
        "terminated": R.terminated,
        "table": R.table(),
        "euler_characteristic": chi,
        "exact_composition": R.check_exact_composition(),
    }
    lines = [f"{'step':>4}  {'rank':>5}  {'order':>5}"]
    for k, t in enumerate(R.table()):
        lines.append(f"{k + 1:>4}  {t['rank']:>5}  {t['order'] if t['order'] is not None else '-':>5}")
    lines.append(f"ranks {R.ranks}" + ("" if R.terminated else " (truncated)"))
    lines.append(f"orders {[int(o) for o in R.orders]}")
    if chi is not None:
        lines.append(f"euler characteristic {chi}")
    return res, "\n".join(lines)


def cmd_euler(sd, args, budget):
    from .homology import euler_characteristic

    R = _resolution(sd, args, budget)
    if not R.terminated:
        raise InputError(f"resolution did not terminate within --max-steps {args.max_steps}")
    chi = euler_characteristic(R)
    terms = [str(R.unknowns)] + [str(r) for r in R.ranks[:-1]]
    expr = terms[0] + "".join((" - " if k % 2 == 0 else " + ") + t for k, t in enumerate(terms[1:]))
    return {"ranks": R.ranks, "unknowns": R.unknowns, "euler_characteristic": chi}, f"{expr} = {chi}"


def cmd_param_test(sd, args, budget):
    from .homology import duality_test

    rep = duality_test(sd.matrix, budget)
    res = {
        "verdict": rep.verdict,
        "d1prime_rows": rep.D1p.nrows,
        "parametrization": matrix_to_json(rep.D) if rep.parametrizable else None,
        "potentials": rep.D.ncols,
        "torsion": [
            {"row": _row_strings(t.row),
             "annihilator": None if t.annihilator is None else str(t.annihilator),
             "searched_to": t.searched_to}
            for t in rep.torsion
        ],
    }
    if rep.parametrizable:
        text = f"parametrizable; {rep.D.ncols} potential(s)\n{rep.D}"
    else:
        lines = [f"not parametrizable; D₁′ has {rep.D1p.nrows} generators"]
        for t in rep.torsion:
            lines.append(f"  torsion {_fmt_row(t.row)}  annihilator: {t.describe()}")
        text = "\n".join(lines)
    return res, text


def cmd_ext(sd, args, budget):
    from .homology import ext_zero, resolve

    if args.i < 1:
        raise InputError("--i must be at least 1")
    R = resolve(sd.matrix, max(args.max_steps, args.i + 1), budget)
    rep = ext_zero(sd.matrix, args.i, budget=budget, resolution=R)
    verified = rep.verify(budget)
    res = {"i": args.i, "is_zero": rep.is_zero,
           "witness": None if rep.witness is None else _row_strings(rep.witness),
           "witness_verified": verified}
    if rep.is_zero:
        text = f"ext^{args.i} = 0"
    else:
        text = f"ext^{args.i} ≠ 0, witness {_fmt_row(rep.witness)} (in kernel, not in image: {verified})"
    return res, text


def cmd_spencer(sd, args, budget):
    from .spencer import delta_complex, symbol_of

    if not sd.matrix.is_constant_coeff():
        raise InputError("spencer needs a constant-coefficient system")
    g = symbol_of(sd.matrix)
    rep = delta_complex(g, args.s_max)
    d = rep.as_dict()
    lines = [f"symbol g_{rep.q}: dim {g.dim} in {g.ambient_dim}; prolongations {rep.prolongation_dims}"]
    lines.append(f"{'s':>2}  {'dim':>5}  {'rk out':>6}  {'rk in':>5}  {'H^s':>4}")
    for s in sorted(rep.dims):
        lines.append(f"{s:>2}  {rep.dims[s]:>5}  {rep.ranks_out[s]:>6}  {rep.ranks_in[s]:>5}  {rep.cohomology[s]:>4}")
    lines.append(f"delta^2 = 0: {rep.delta_squared_zero}")
    return d, "\n".join(lines)


def cmd_catalog(args):
    if not args.catalog and not args.file:
        names = sorted(CATALOG)
        return {"entries": names}, "\n".join(names)
    sd = load_system(args)
    fmt = args.format
    if fmt == "json":
        return json.loads(to_json(sd)), to_json(sd)
    text = to_dsl(sd) if fmt == "dsl" else to_text(sd)
    return {"format": fmt, "text": text, "system": json.loads(to_json(sd))}, text.rstrip("\n")


def cmd_check_all(args):
    from .acceptance import CRITERIA, run_all, run_one

    factory = _budget_factory(args)
    only = args.only or None
    valid = {c[0] for c in CRITERIA}
    if only and not set(only) <= valid:
        raise InputError(f"--only takes criterion numbers {sorted(valid)}")
    if args.jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        idx = sorted(only) if only else [c[0] for c in CRITERIA]
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            futures = [pool.submit(run_one, i, factory, args.skip_long) for i in idx]
            results = [f.result() for f in futures]
    else:
        results = run_all(factory, args.skip_long, only)
    text = "\n".join(r.line() for r in results)
    res = {"criteria": [r.as_dict() for r in results],
           "passed": sum(r.passed for r in results), "total": len(results)}
    if any(r.status == "BUDGET" for r in results):
        code = EXIT_BUDGET
    elif all(r.passed for r in results):
        code = EXIT_OK
    else:
        code = EXIT_INPUT
    return res, text, code


COMMANDS = {
    "adjoint": cmd_adjoint,
    "cc": cmd_cc,
    "resolve": cmd_resolve,
    "param-test": cmd_param_test,
    "ext": cmd_ext,
    "spencer": cmd_spencer,
    "euler": cmd_euler,
}


# -- argument parsing -------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="dopalg", description="Exact analysis of linear PDE operators.")
    p.add_argument("--version", action="version", version=f"dopalg {__version__} ({kernels.KERNEL} kernel)")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, inputs=True):
        if inputs:
            sp.add_argument("--catalog", metavar="NAME", help="catalog entry (see `dopalg catalog`)")
            sp.add_argument("--n", type=int, help="dimension for geometric catalog entries")
            sp.add_argument("--signature", help="euclidean (default), minkowski or e.g. 1,1,1,-1")
            sp.add_argument("--file", metavar="F", help=".dop source file")
            sp.add_argument("--system", metavar="NAME", help="system to use when F defines several")
            sp.add_argument("--param", action="append", metavar="NAME=VALUE", help="substitute a parameter")
        sp.add_argument("--json", action="store_true", help="print the JSON report")
        sp.add_argument("--degree-cap", type=int, metavar="D", help="largest derivative degree allowed")
        sp.add_argument("--timeout", type=float, metavar="S", help="wall-clock limit in seconds")

    helps = {
        "adjoint": "formal adjoint of the operator",
        "cc": "compatibility conditions (generators of left syzygies)",
        "resolve": "iterate cc into a resolution",
        "param-test": "double-duality parametrizability test",
        "ext": "decide whether ext^i vanishes, with a witness",
        "spencer": "Spencer delta-cohomology of the symbol",
        "euler": "Euler characteristic of the resolution",
    }
    for name, h in helps.items():
        sp = sub.add_parser(name, help=h)
        common(sp)
        sp.add_argument("--max-steps", type=int, default=10, metavar="K", help="resolution length limit")
        if name == "ext":
            sp.add_argument("--i", type=int, required=True, help="which ext")
        if name == "spencer":
            sp.add_argument("--s-max", type=int, default=None, help="top form degree (default n)")

    sp = sub.add_parser("catalog", help="list catalog entries or print one")
    common(sp)
    sp.add_argument("--format", choices=("dsl", "json", "text"), default="dsl")

    sp = sub.add_parser("check-all", help="run the acceptance suite")
    common(sp, inputs=False)
    sp.add_argument("--skip-long", action="store_true", help="skip the long-running cases")
    sp.add_argument("--only", type=int, action="append", metavar="K", help="run only criterion K")
    sp.add_argument("--jobs", type=int, default=1, help="worker processes")
    return p


def _emit(args, report: dict, text: str, out) -> None:
    if getattr(args, "json", False):
        out.write(json.dumps(report, indent=2, sort_keys=True) + "\n")
    else:
        out.write(text + "\n")


def run(argv=None, out=None, err=None) -> int:
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except InputError as exc:
        err.write(f"dopalg: {exc}\n")
        return EXIT_INPUT
    except SystemExit as exc:  # --help and --version
        return int(exc.code or 0)
    base = {"schema_version": SCHEMA_VERSION, "engine_version": __version__, "kernel": kernels.KERNEL,
            "command": args.command}
    t0 = time.perf_counter()
    budget = None
    try:
        if args.command == "check-all":
            res, text, code = cmd_check_all(args)
            report = dict(base, input=None, status="ok" if code == EXIT_OK else "failed", results=res,
                          budget=None, timings={"seconds": round(time.perf_counter() - t0, 3)})
            _emit(args, report, text, out)
            return code
        if args.command == "catalog":
            res, text = cmd_catalog(args)
            report = dict(base, input=None, status="ok", results=res, budget=None,
                          timings={"seconds": round(time.perf_counter() - t0, 3)})
            _emit(args, report, text, out)
            return EXIT_OK
        sd = load_system(args)
        budget = _budget_factory(args)()
        res, text = COMMANDS[args.command](sd, args, budget)
    except InputError as exc:
        err.write(f"dopalg: {exc}\n")
        return EXIT_INPUT
    except (DslError, ScalarError) as exc:
        err.write(f"dopalg: {exc}\n")
        return EXIT_INPUT
    except ResourceBudgetExceeded as exc:
        err.write(f"dopalg: budget exceeded: {exc}\n")
        if getattr(args, "json", False):
            report = dict(base, input=None, status="budget_exceeded", results=None,
                          budget=budget.usage() if budget else None, error=str(exc),
                          timings={"seconds": round(time.perf_counter() - t0, 3)})
            out.write(json.dumps(report, indent=2, sort_keys=True) + "\n")
        return EXIT_BUDGET
    report = dict(
        base,
        input={"name": sd.name, "provenance": sd.provenance, "unknowns": list(sd.unknowns),
               "rows": sd.matrix.nrows, "digest": _digest(sd)},
        status="ok",
        results=res,
        budget=budget.usage(),
        timings={"seconds": round(time.perf_counter() - t0, 3)},
    )
    _emit(args, report, text, out)
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
