"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 invalid input,
3 I/O failure, 4 sweep grid larger than the cap.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import sys
from typing import Iterator, TextIO

from . import statmech
from .cycle import ROUTES, ConfigError, CycleConfig, run_cycle
from .records import csv_header, csv_row, dumps, fmt, report_record
from .spectrum import DomainError, check_nu, enumerate_levels, energy, levels_by_excitation
from .sweep import Objective, SweepCapError, SweepError, SweepSpec, iter_reports, refine_optimum, select_best

EXIT_OK, EXIT_VERIFY, EXIT_INPUT, EXIT_IO, EXIT_CAP = 0, 1, 2, 3, 4

CYCLE_FIELDS = ("t_h", "t_c", "nu_a", "nu_b", "nu_c", "nu_d", "hbar_omega", "k_b")
DEFAULT_NU_GRID = tuple(round(0.1 * i, 1) for i in range(11))
DEFAULT_X_GRID = (0.25, 0.5, 1.0, 2.0, 4.0, 8.0)
QUANTITIES = ("Z", "E", "E_cross", "S")
VERIFY_COLUMNS = ("quantity", "nu", "nu_prime", "x", "closed", "truncated", "rel_err", "tail_bound", "pass")


class InputError(Exception):
    pass


class IOFailure(Exception):
    pass


def _float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _add_output(p: argparse.ArgumentParser):
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--output", "-o", help="write here instead of stdout")


def _add_cycle_flags(p: argparse.ArgumentParser):
    for name in CYCLE_FIELDS:
        p.add_argument("--" + name.replace("_", "-"), dest=name, type=float, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="anyon-carnot", description="Two-anyon quantum Carnot engine.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cycle", help="run one cycle")
    p.add_argument("--config", help="flat JSON config file; flags override its values")
    _add_cycle_flags(p)
    p.add_argument("--route", choices=ROUTES, default="closed")
    _add_output(p)

    p = sub.add_parser("spectrum", help="list energy levels")
    p.add_argument("--nu", type=float, required=True)
    cut = p.add_mutually_exclusive_group(required=True)
    cut.add_argument("--e-max", type=float, help="energy cutoff in units of hbar*omega")
    cut.add_argument("--n-max", type=int, help="cutoff on total excitation j+k+2l+2m")
    p.add_argument("--hbar-omega", type=float, default=1.0)
    _add_output(p)

    p = sub.add_parser("verify", help="compare closed forms with truncated series")
    p.add_argument("--nu", type=_float_list, default=list(DEFAULT_NU_GRID))
    p.add_argument("--nu-prime", type=_float_list, default=None, help="defaults to the --nu grid")
    p.add_argument("--x", type=_float_list, default=list(DEFAULT_X_GRID), help="values of beta*hbar_omega")
    p.add_argument("--quantities", default=",".join(QUANTITIES))
    p.add_argument("--tolerance", type=float, default=1e-9)
    p.add_argument("--tail-tol", type=float, default=statmech.DEFAULT_TAIL_TOL)
    _add_output(p)

    p = sub.add_parser("sweep", help="scan a grid of cycle parameters")
    p.add_argument("--spec", help="JSON sweep spec file")
    p.add_argument("--vary", action="append", default=[], metavar="NAME=START:STOP:COUNT")
    _add_cycle_flags(p)
    p.add_argument("--objective", choices=[o.value for o in Objective], default=None)
    p.add_argument("--cap", type=int, default=None)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--refine", type=int, default=None, metavar="ITERATIONS", help="zoom onto the optimum of a 1-D scan")
    _add_output(p)
    return parser


# ---------------------------------------------------------------------------
# helpers


def _read_json(path: str):
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise IOFailure(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc.msg})") from None


@contextlib.contextmanager
def _sink(path: str | None) -> Iterator[TextIO]:
    if path is None:
        yield sys.stdout
        return
    try:
        fh = open(path, "w", newline="")
    except OSError as exc:
        raise IOFailure(f"cannot write {path}: {exc.strerror}") from None
    with fh:
        yield fh


def _cycle_config(args) -> CycleConfig:
    data = {}
    if args.config:
        data = _read_json(args.config)
        if not isinstance(data, dict):
            raise InputError("config file must hold a flat JSON object")
    for name in CYCLE_FIELDS:
        value = getattr(args, name)
        if value is not None:
            data[name] = value
    return CycleConfig.from_dict(data)


# ---------------------------------------------------------------------------
# subcommands


def cmd_cycle(args) -> int:
    report = run_cycle(_cycle_config(args), route=args.route)
    with _sink(args.output) as out:
        if args.format == "json":
            out.write(dumps(report_record(report)) + "\n")
        else:
            out.write(csv_header() + "\n" + csv_row(report) + "\n")
    return EXIT_OK


def cmd_spectrum(args) -> int:
    if args.hbar_omega <= 0:
        raise InputError("hbar_omega: must be > 0")
    if args.e_max is not None:
        levels = enumerate_levels(args.nu, args.e_max)
    else:
        if args.n_max < 0:
            raise InputError("n_max: must be >= 0")
        check_nu(args.nu)
        levels = levels_by_excitation(args.n_max)
    rows = [
        {"class": lv.cls.value, "j": lv.j, "k": lv.k, "l": lv.l, "m": lv.m, "energy": args.hbar_omega * energy(lv, args.nu)}
        for lv in levels
    ]
    with _sink(args.output) as out:
        if args.format == "json":
            out.write(dumps(rows, indent=1) + "\n")
        else:
            out.write("class,j,k,l,m,energy\n")
            for r in rows:
                out.write(f"{r['class']},{r['j']},{r['k']},{r['l']},{r['m']},{fmt(r['energy'])}\n")
    return EXIT_OK


def verify_rows(nus, nu_primes, xs, quantities, tolerance, tail_tol) -> list[dict]:
    rows = []

    def add(q, nu, nup, x, closed, est):
        rel = abs(closed - est.value) / abs(closed) if closed else abs(est.value)
        rows.append(
            {
                "quantity": q,
                "nu": nu,
                "nu_prime": nup,
                "x": x,
                "closed": closed,
                "truncated": est.value,
                "rel_err": rel,
                "tail_bound": est.rel_bound,
                "pass": rel <= tolerance,
            }
        )

    kw = {"tail_tol": tail_tol}
    for q in quantities:
        for x in xs:
            for nu in nus:
                if q == "Z":
                    add(q, nu, nu, x, statmech.partition_closed(nu, x), statmech.partition_truncated(nu, x, **kw))
                elif q == "E":
                    add(q, nu, nu, x, statmech.mean_energy_closed(nu, x), statmech.mean_energy_truncated(nu, x, **kw))
                elif q == "S":
                    add(q, nu, nu, x, statmech.entropy(nu, x), statmech.entropy_truncated(nu, x, **kw))
                else:
                    for nup in nu_primes:
                        add(
                            q,
                            nu,
                            nup,
                            x,
                            statmech.cross_mean_energy_closed(nu, nup, x),
                            statmech.cross_mean_energy_truncated(nu, nup, x, **kw),
                        )
    return rows


def cmd_verify(args) -> int:
    quantities = [q.strip() for q in args.quantities.split(",") if q.strip()]
    bad = [q for q in quantities if q not in QUANTITIES]
    if bad or not quantities:
        raise InputError(f"quantities: unknown {bad[0] if bad else '(none)'}; choose from {','.join(QUANTITIES)}")
    if not args.tolerance > 0 or not args.tail_tol > 0:
        raise InputError("tolerance: must be > 0")
    if any(not x > 0 for x in args.x):
        raise InputError("x: must be > 0")
    nu_primes = args.nu if args.nu_prime is None else args.nu_prime
    rows = verify_rows(args.nu, nu_primes, args.x, quantities, args.tolerance, args.tail_tol)
    ok = all(r["pass"] for r in rows)
    with _sink(args.output) as out:
        if args.format == "json":
            summary = {"tolerance": args.tolerance, "tail_tol": args.tail_tol, "count": len(rows), "all_pass": ok}
            out.write(dumps({"summary": summary, "rows": rows}, indent=1) + "\n")
        else:
            out.write(",".join(VERIFY_COLUMNS) + "\n")
            for r in rows:
                cells = [r["quantity"]] + [fmt(r[k]) for k in VERIFY_COLUMNS[1:-1]] + [str(r["pass"]).lower()]
                out.write(",".join(cells) + "\n")
    return EXIT_OK if ok else EXIT_VERIFY


def _sweep_spec(args) -> SweepSpec:
    data = {}
    if args.spec:
        data = _read_json(args.spec)
        if not isinstance(data, dict):
            raise InputError("sweep spec must be a JSON object")
    ranges = dict(data.get("ranges", {}))
    fixed = dict(data.get("fixed", {}))
    for item in args.vary:
        name, sep, rng = item.partition("=")
        if not sep:
            raise InputError(f"--vary expects NAME=START:STOP:COUNT, got {item!r}")
        ranges[name] = rng
        fixed.pop(name, None)
    for name in CYCLE_FIELDS:
        value = getattr(args, name)
        if value is None:
            continue
        if name in ("hbar_omega", "k_b"):
            data[name] = value
        else:
            fixed[name] = value
            ranges.pop(name, None)
    data["ranges"], data["fixed"] = ranges, fixed
    if args.objective is not None:
        data["objective"] = args.objective
    if args.cap is not None:
        data["cap"] = args.cap
    return SweepSpec.from_dict(data)


def cmd_sweep(args) -> int:
    spec = _sweep_spec(args)
    if args.refine is not None:
        return _emit_refinement(args, refine_optimum(spec, args.refine))
    if spec.grid_size > spec.cap:
        raise SweepCapError(f"grid has {spec.grid_size} points, cap is {spec.cap}")
    rows, skipped = [], 0
    with _sink(args.output) as out:
        if args.format == "csv":
            out.write(csv_header() + "\n")
        for report in iter_reports(spec, args.workers):
            if report is None:
                skipped += 1
                continue
            rows.append(report)
            if args.format == "csv":
                out.write(csv_row(report) + "\n")
        best = None if spec.objective is Objective.NONE else select_best(rows, spec.objective)
        if args.format == "csv":
            out.write(f"# grid_size={spec.grid_size} rows={len(rows)} skipped={skipped} objective={spec.objective.value}\n")
            if best is not None:
                out.write("# best=" + csv_row(best) + "\n")
        else:
            meta = {
                "grid_size": spec.grid_size,
                "rows": len(rows),
                "skipped": skipped,
                "objective": spec.objective.value,
                "spec": spec.to_dict(),
                "best": None if best is None else report_record(best),
            }
            out.write(dumps({"metadata": meta, "rows": [report_record(r) for r in rows]}, indent=1) + "\n")
    return EXIT_OK


def _emit_refinement(args, ref) -> int:
    with _sink(args.output) as out:
        if args.format == "json":
            obj = {"param": ref.param, "lo": ref.lo, "hi": ref.hi, "width": ref.width, "iterations": ref.iterations}
            obj["best"] = report_record(ref.report)
            out.write(dumps(obj, indent=1) + "\n")
        else:
            out.write(csv_header() + "\n" + csv_row(ref.report) + "\n")
            out.write(f"# param={ref.param} lo={fmt(ref.lo)} hi={fmt(ref.hi)} iterations={ref.iterations}\n")
    return EXIT_OK


COMMANDS = {"cycle": cmd_cycle, "spectrum": cmd_spectrum, "verify": cmd_verify, "sweep": cmd_sweep}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except SweepCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except IOFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (InputError, ConfigError, DomainError, SweepError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
