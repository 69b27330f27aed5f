"""``jsk`` command line: run named scenarios or check a user-supplied operator."""
from __future__ import annotations

import argparse
import json
import sys
import traceback
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Sequence

from .algebra import AlgebraError, ParseError
from .diffop import LinearDiffOp, adjoint, apply, compose
from .jets import polynomial_solutions
from .report import Report, UsageError, render_text, to_json
from .scenarios.registry import SCENARIOS, run_scenario
from .syzygy import check_parametrization, compatibility_conditions

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # route through the common exit-2 path
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _line_col(text: str, offset: int) -> tuple[int, int]:
    line = text.count("\n", 0, offset) + 1
    return line, offset - (text.rfind("\n", 0, offset) + 1) + 1


def load_operator(path: str | Path) -> LinearDiffOp:
    """Read a serialized operator record; errors carry file line/column."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"{path}: cannot read ({exc.strerror})") from exc
    try:
        rec = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    if not isinstance(rec, dict):
        raise UsageError(f"{path}: expected an operator record (a JSON object)")
    try:
        return LinearDiffOp.from_record(rec)
    except ParseError as exc:
        # locate the offending entry string in the file to report a file position
        anchor = text.find('"entries"')
        pos = text.find(json.dumps(exc.text, ensure_ascii=False)[:-1], max(anchor, 0))
        if pos < 0:
            raise UsageError(f"{path}: {exc}") from exc
        line, col = _line_col(text, pos + 1 + exc.column - 1)
        raise UsageError(f"{path}:{line}:{col}: {exc}") from exc
    except AlgebraError as exc:
        raise UsageError(f"{path}: {exc}") from exc


def check_user_operator(path: str, mode: str, with_path: str | None = None,
                        degree_bound: int | None = None) -> Report:
    op = load_operator(path)
    params: dict = {"path": str(path), "mode": mode}
    if mode == "cc":
        rep = Report("op", params)
        rep.operator("input", op)
        cc = compatibility_conditions(op)
        rep.operator("compatibility conditions", cc.cc_op)
        rep.value("generator count", cc.count)
        rep.check("CC ∘ input = 0", compose(cc.cc_op, op).is_zero() if cc.count else True)
        return rep
    if mode == "adjoint":
        rep = Report("op", params)
        rep.operator("input", op)
        ad = adjoint(op)
        rep.operator("adjoint", ad)
        rep.check("adjoint(adjoint(input)) = input", adjoint(ad) == op)
        return rep
    if mode == "solutions":
        bound = 2 if degree_bound is None else degree_bound
        if bound < 0:
            raise UsageError("degree bound must be non-negative")
        params["degreeBound"] = bound
        rep = Report("op", params)
        rep.operator("input", op)
        sols = polynomial_solutions(op, bound)
        rep.add("polynomial solutions", "basis", [[str(v) for v in s.values] for s in sols.basis])
        rep.check("every basis element is annihilated", all(apply(op, s).is_zero() for s in sols.basis))
        return rep
    if mode == "parametrize":
        if with_path is None:
            raise UsageError("--mode parametrize needs --with <operator file>")
        param = load_operator(with_path)
        params["with"] = str(with_path)
        rep = Report("op", params)
        rep.operator("D", op)
        rep.operator("P", param)
        try:
            pr = check_parametrization(op, param)
        except AlgebraError as exc:
            raise UsageError(str(exc)) from exc
        rep.operator("CC of P", pr.cc_of_param.cc_op)
        rep.check("D ∘ P = 0", pr.composes)
        rep.check("every CC of P is generated by the rows of D", pr.cc_of_param_generated_by_d)
        rep.check("every row of D is a CC of P", pr.d_rows_are_cc_of_param)
        return rep
    raise UsageError(f"unknown mode {mode!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="jsk", description="Exact Janet/Spencer computations on linear differential operators.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    run = sub.add_parser("run", help="run a named scenario")
    run.add_argument("scenario", nargs="?", help=", ".join(SCENARIOS))
    run.add_argument("--all", action="store_true", help="run every scenario with default parameters")
    run.add_argument("--n", type=int)
    run.add_argument("--degree-bound", type=int)
    run.add_argument("--signature", choices=["euclid", "minkowski"])
    run.add_argument("--json", action="store_true", help="structured output")
    run.add_argument("--verbose", action="store_true", help="also print operator matrices")

    op = sub.add_parser("op", help="check an operator stored as a JSON record")
    op.add_argument("path")
    op.add_argument("--mode", required=True, choices=["cc", "adjoint", "solutions", "parametrize"])
    op.add_argument("--with", dest="with_path")
    op.add_argument("--degree-bound", type=int)
    op.add_argument("--json", action="store_true")
    op.add_argument("--verbose", action="store_true")
    return parser


def _emit(reports: list[Report], as_json: bool, verbose: bool) -> int:
    if as_json:
        records = [r.to_record() for r in reports]
        sys.stdout.write(to_json(records[0] if len(records) == 1 else records))
    else:
        for r in reports:
            sys.stdout.write(render_text(r, verbose or r.scenario == "op"))
    failed = [r for r in reports if not r.verdict]
    if failed:
        r = failed[0]
        print(f"jsk: {r.scenario}: check failed: {r.first_failure}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.command == "run":
            if args.all:
                if args.scenario or args.n is not None or args.degree_bound is not None or args.signature:
                    raise UsageError("--all takes no scenario or parameters")
                # scenarios share no state; map() keeps the output order fixed
                with ProcessPoolExecutor() as pool:
                    reports = list(pool.map(run_scenario, SCENARIOS))
            else:
                if not args.scenario:
                    raise UsageError("name a scenario or pass --all")
                reports = [run_scenario(args.scenario, n=args.n, degreeBound=args.degree_bound,
                                        signature=args.signature)]
        else:
            reports = [check_user_operator(args.path, args.mode, args.with_path, args.degree_bound)]
        return _emit(reports, args.json, args.verbose)
    except UsageError as exc:
        print(f"jsk: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:  # e.g. a malformed JSK_SEED
        print(f"jsk: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception:  # a bug, not a failed check: keep it distinguishable from exit 1
        traceback.print_exc()
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
