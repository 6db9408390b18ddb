"""``lambda-forge`` command line driver.

Exit codes: 0 all checks pass, 1 a check failed, 2 usage or input error,
3 table integrity error.
"""

from __future__ import annotations

import argparse
import os
import re
import sys
from importlib import resources
from pathlib import Path
from typing import Callable, Sequence

from . import __version__
from .correspondence import check_coalgebra, lambda_to_coalgebra, roundtrip_report
from .filtration import InstanceParseError, completed_tensor, truncated_polynomial_ring
from .lambda_ring import (
    DEFAULT_HORIZON,
    HorizonError,
    LambdaStructure,
    check_filtered_lambda,
    check_lambda_axioms,
    describe,
    from_instance_text,
    kbu_model,
    line_model,
    projective,
    sabotaged,
    trivial,
)
from .polycore import PolynomialParseError
from .report import Report
from .symmetric import (
    PTable,
    TableFormatError,
    TableIntegrityError,
    compute_comp_polynomial,
    compute_mult_polynomial,
    load_table,
    parse_table,
    save_table,
    verify_numeric,
)
from .ucomonad import UPointError, UPointSyntaxError, USpace, check_comonad_laws, parse_upoint, sample_upoints

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INTEGRITY = 0, 1, 2, 3
TABLE_ENV = "LAMBDA_FORGE_TABLE_DIR"
TABLE_FILE = "ptable.txt"


class UsageError(Exception):
    pass


# -- tables ---------------------------------------------------------------------


def table_dir() -> Path:
    env = os.environ.get(TABLE_ENV)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "lambda-forge"


def bundled_table_text() -> str:
    return resources.files("lambda_forge").joinpath("data", TABLE_FILE).read_text()


def active_table_text() -> tuple[str, str]:
    """(label, text) of the table in use: the cache directory's file if it
    exists, else the bundled one."""
    path = table_dir() / TABLE_FILE
    if path.is_file():
        return str(path), path.read_text()
    return "bundled", bundled_table_text()


def _ptable_indices(args) -> list[tuple[str, tuple[int, ...]]]:
    if args.kind == "mult":
        if args.max_k < 1:
            raise UsageError("--max-k must be >= 1")
        return [("mult", (k,)) for k in range(1, args.max_k + 1)]
    if args.max_i < 1 or args.max_j < 1:
        raise UsageError("--max-i and --max-j must be >= 1")
    return [("comp", (i, j)) for i in range(1, args.max_i + 1) for j in range(1, args.max_j + 1)]


def cmd_ptable(args, out) -> int:
    path = Path(args.output) if args.output else table_dir() / TABLE_FILE
    old = load_table(path) if path.exists() else None
    table = PTable(old.provenance if old else None)
    if old and not args.force:
        table.entries.update(old.entries)
    computed = hits = 0
    for kind, index in _ptable_indices(args):
        if table.get(kind, index) is not None:
            hits += 1
            continue
        if kind == "mult":
            poly = compute_mult_polynomial(index[0]).poly
        else:
            poly = compute_comp_polynomial(*index).poly
        if args.force:
            rep = verify_numeric((kind, index, poly), trials=args.trials, seed=args.seed)
            if not rep.passed:
                raise TableIntegrityError(f"recomputed P[{kind},{index}] fails numeric check: {rep.failures[0]}")
            if old and old.get(kind, index) is not None and old.get(kind, index) != poly:
                raise TableIntegrityError(f"stored P[{kind},{','.join(map(str, index))}] differs from recomputation")
        table.put(kind, index, poly)
        computed += 1
    if args.force and old:
        for key, poly in old.entries.items():
            table.entries.setdefault(key, poly)
    try:
        save_table(table, path)
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc}") from None
    biggest = max((p.max_abs_coefficient() for p in table.entries.values()), default=0)
    print(f"# lambda-forge ptable {args.kind} -> {path}", file=out)
    print(f"entries computed: {computed}", file=out)
    print(f"cache hits: {hits}", file=out)
    print(f"max coefficient: {biggest}", file=out)
    return EXIT_OK


# -- instances ------------------------------------------------------------------

BUILTINS: dict[str, Callable[..., LambdaStructure]] = {
    "projective": projective,
    "line_model": line_model,
    "kbu_model": kbu_model,
    "trivial": trivial,
}
_BUILTIN = re.compile(r"builtin:(\w+)\s*(?:\(([\d,\s]*)\))?")


def load_instance(spec: str, horizon: int) -> LambdaStructure:
    m = _BUILTIN.fullmatch(spec.strip())
    if m:
        make = BUILTINS.get(m.group(1))
        if make is None:
            raise UsageError(f"unknown builtin {m.group(1)!r}; known: {', '.join(sorted(BUILTINS))}")
        params = [int(p) for p in (m.group(2) or "").split(",") if p.strip()]
        try:
            return make(*params, horizon=horizon)
        except (TypeError, ValueError) as exc:
            raise UsageError(f"bad parameters for {m.group(1)}: {exc}") from None
    if spec.startswith("builtin:"):
        raise UsageError(f"malformed builtin instance {spec!r}")
    path = Path(spec)
    if not path.is_file():
        raise UsageError(f"instance file not found: {spec}")
    L = from_instance_text(path.read_text())
    if L.horizon < horizon:
        raise UsageError(f"instance gives lambda up to {L.horizon}, --horizon asks for {horizon}")
    return L.restrict(horizon)


# -- verify ----------------------------------------------------------------------

SUITES = ("axioms", "filtered", "comonad", "coalgebra", "roundtrip")


def run_suites(L: LambdaStructure, suites: Sequence[str], N: int, seed: int, trials: int, points: Sequence[str] = ()) -> list[Report]:
    reports = []
    if "axioms" in suites:
        reports.append(check_lambda_axioms(L))
    if "filtered" in suites:
        reports.append(check_filtered_lambda(L))
    if "comonad" in suites:
        space = USpace(L.ring, N)
        samples = sample_upoints(space, trials, seed)
        samples += [parse_upoint(p, L.ring, N, space.source_depth) for p in points]
        reports.append(check_comonad_laws(space, samples))
    if "coalgebra" in suites:
        if L.horizon < N:
            raise UsageError(f"coalgebra suite needs --horizon >= --trunc ({L.horizon} < {N})")
        reports.append(check_coalgebra(lambda_to_coalgebra(L, N, strict=False)))
    if "roundtrip" in suites:
        if L.horizon < N:
            raise UsageError(f"roundtrip suite needs --horizon >= --trunc ({L.horizon} < {N})")
        reports.append(roundtrip_report(L, N))
    return reports


def emit(reports: Sequence[Report], header: str, out) -> int:
    print(header, file=out)
    for r in reports:
        print(str(r), file=out)
    failed = sum(1 for r in reports for c in r.results if not c.passed)
    total = sum(len(r.results) for r in reports)
    print(f"# {total - failed}/{total} checks passed", file=out)
    return EXIT_OK if failed == 0 else EXIT_FAIL


def cmd_verify(args, out) -> int:
    if args.horizon < 1 or args.trunc < 1 or args.trials < 1:
        raise UsageError("--horizon, --trunc and --trials must be >= 1")
    L = load_instance(args.instance, args.horizon)
    suites = SUITES if args.suite == "all" else (args.suite,)
    reports = run_suites(L, suites, args.trunc, args.seed, args.trials, args.point or ())
    header = (
        f"# lambda-forge {__version__} verify {args.suite} instance={args.instance} "
        f"trunc={args.trunc} horizon={args.horizon} seed={args.seed} trials={args.trials}"
    )
    return emit(reports, header, out)


# -- show ------------------------------------------------------------------------


def cmd_show(args, out) -> int:
    shown = False
    if args.instance:
        print(describe(load_instance(args.instance, args.horizon)), end="", file=out)
        shown = True
    if args.mult:
        print(f"P[mult,{args.mult}] = {compute_mult_polynomial(args.mult).poly.to_text()}", file=out)
        shown = True
    if args.comp:
        i, j = args.comp
        print(f"P[comp,{i},{j}] = {compute_comp_polynomial(i, j).poly.to_text()}", file=out)
        shown = True
    if args.table:
        label, text = active_table_text()
        print(f"# table: {label}", file=out)
        print(text, end="", file=out)
        shown = True
    if not shown:
        raise UsageError("show needs --instance, --mult, --comp or --table")
    return EXIT_OK


# -- selfcheck --------------------------------------------------------------------


def table_report(text: str, trials: int, seed: int) -> Report:
    report = Report("P-table entries")
    try:
        table = parse_table(text, verify_trials=0)
    except (TableFormatError, TableIntegrityError) as exc:
        report.add("TABLE", "format", [str(exc)])
        return report
    for n, (kind, index) in enumerate(table.sorted_keys()):
        rep = verify_numeric((kind, index, table.get(kind, index)), trials=trials, seed=seed + n)
        label = ",".join(map(str, index))
        report.add("TABLE", f"P[{kind},{label}]", [] if rep.passed else [rep.failures[0]], rep.trials)
    return report


def tensor_report() -> Report:
    report = Report("completed tensor product")
    T, _, _ = completed_tensor(truncated_polynomial_ring(2, "x"), truncated_polynomial_ring(3, "y"))
    rank = T.additive_rank()
    report.add("TENSOR", "additive_rank", [] if rank == 6 else [f"rank {rank} != 6"], 1)
    return report


def mutation_report() -> Report:
    report = Report("negative controls")
    for kind in ("zero_lambda2", "unit_lambda"):
        L = sabotaged(projective(3, 4), kind)
        caught = not (check_lambda_axioms(L).passed and check_filtered_lambda(L).passed)
        report.add("MUTANT", kind, [] if caught else ["sabotage not detected"], 1)
    return report


def cmd_selfcheck(args, out) -> int:
    label, text = active_table_text()
    reports = [table_report(text, args.trials, args.seed), tensor_report()]
    for L, N in ((projective(3, 3), 3), (projective(4, 4), 4), (line_model(2, 3, 4), 3), (kbu_model(3, 4), 3)):
        reports += run_suites(L, SUITES, N, args.seed, args.trials)
    reports.append(mutation_report())
    header = f"# lambda-forge {__version__} selfcheck table={label} seed={args.seed} trials={args.trials}"
    return emit(reports, header, out)


# -- entry point ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lambda-forge", description="lambda-ring and U-coalgebra toolkit")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    pt = sub.add_parser("ptable", help="compute and store P-tables")
    pt.add_argument("kind", choices=("mult", "comp"))
    pt.add_argument("--max-k", type=int, default=4)
    pt.add_argument("--max-i", type=int, default=2)
    pt.add_argument("--max-j", type=int, default=2)
    pt.add_argument("-o", "--output", help=f"table file (default ${TABLE_ENV}/{TABLE_FILE})")
    pt.add_argument("--force", action="store_true", help="recompute and verify every entry")
    pt.add_argument("--trials", type=int, default=20)
    pt.add_argument("--seed", type=int, default=0)

    v = sub.add_parser("verify", help="run verification suites")
    v.add_argument("suite", choices=SUITES + ("all",))
    v.add_argument("--instance", required=True, help="builtin:<name>(<params>) or instance file")
    v.add_argument("--trunc", type=int, default=4)
    v.add_argument("--horizon", type=int, default=DEFAULT_HORIZON)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--trials", type=int, default=20)
    v.add_argument("--point", action="append", help="extra sample 'upoint(<ring>; r1, ..., rN)'")

    s = sub.add_parser("show", help="print an instance, a P polynomial or the table")
    s.add_argument("--instance")
    s.add_argument("--horizon", type=int, default=DEFAULT_HORIZON)
    s.add_argument("--mult", type=int, metavar="K")
    s.add_argument("--comp", type=int, nargs=2, metavar=("I", "J"))
    s.add_argument("--table", action="store_true")

    c = sub.add_parser("selfcheck", help="table entries and all suites at small parameters")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--trials", type=int, default=20)
    return p


COMMANDS = {"ptable": cmd_ptable, "verify": cmd_verify, "show": cmd_show, "selfcheck": cmd_selfcheck}


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return COMMANDS[args.command](args, out)
    except (TableIntegrityError, TableFormatError) as exc:
        print(f"integrity error: {exc}", file=sys.stderr)
        return EXIT_INTEGRITY
    except (UsageError, InstanceParseError, PolynomialParseError, UPointSyntaxError, UPointError, HorizonError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
