"""
SMMS Verification CLI
가중 Einstein SMMS 패밀리 검증, 분기/전역 판정, Obata 재구성, 오라클 비교 명령행 도구

사용법:
    smms verify --family weighted-sphere --n 3 --m 2 --lambda 0.5 --A 2 --B 1
    smms classify --family example-1-2 --n 4 --A 1 --B 1
    smms obata --lambda 0.5 --kappa 2 --xi 3 --n 3 --emit-csv traj.csv
    smms oracle-compare --family thm-4-1-positive
    smms list

종료 코드: 0 검증 통과, 2 검증 실패, 1 사용법/생성 오류
"""

import argparse
import logging
import sys
from typing import Dict, List, Optional

from services.catalog.families import list_families
from services.classify.obata import ObataProblem, solve_obata_ivp
from services.config.catalog_config import INTEGER_FLAGS, PARAM_FLAGS
from services.config.runtime_config import LOG_LEVEL, ORACLE_REL_TOL
from services.helpers.errors import SMMSError
from services.verification.verification_service import get_verification_service
from services.views.report_view import (
    render_json,
    render_key_values,
    render_mapping,
    render_table,
    render_text,
    write_csv,
)

logger = logging.getLogger("smms")

EXIT_PASS = 0
EXIT_ERROR = 1
EXIT_FAIL = 2

# 선형 IVP 닫힌 형식 해와의 허용 차이
OBATA_MATCH_TOL = 1e-8

FAMILY_COMMANDS = ("verify", "classify", "oracle-compare")


# ==============================================================================
# Argument parsing
# ==============================================================================


class UsageError(Exception):
    """명령행 사용법 오류"""


class SMMSArgumentParser(argparse.ArgumentParser):
    """사용법 오류를 종료 코드 1로 보고하는 ArgumentParser (2는 검증 실패용)"""

    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _dest(flag: str) -> str:
    return "lam" if flag == "lambda" else flag


def _add_param_flags(parser: argparse.ArgumentParser, flags: List[str]) -> None:
    for flag in flags:
        kind = int if flag in INTEGER_FLAGS else float
        parser.add_argument(f"--{flag}", dest=_dest(flag), type=kind, default=None, metavar=flag.upper())


def _add_run_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--samples", type=int, default=None, help="number of interior samples (>= 3)")
    parser.add_argument("--tol", type=float, default=None, help="tolerance (default: SMMS_TOL or 1e-6)")
    parser.add_argument("--rel-step", type=float, default=None, help="finite-difference relative step")
    parser.add_argument("--output", choices=["json", "csv", "text"], default="json")
    parser.add_argument("--out", dest="out_path", default=None, help="write the report to a file")
    parser.add_argument("--emit-csv", dest="emit_csv", default=None, metavar="PATH")


def build_parser() -> SMMSArgumentParser:
    parser = SMMSArgumentParser(prog="smms", description="weighted Einstein SMMS verification engine")
    sub = parser.add_subparsers(dest="command", metavar="<verify|classify|obata|oracle-compare|list>")
    sub.required = True

    family_flags = [flag for flag in PARAM_FLAGS if flag != "kappa"]
    for command in FAMILY_COMMANDS:
        cmd = sub.add_parser(command)
        cmd.add_argument("--family", required=True, help="family slug (see `smms list`)")
        _add_param_flags(cmd, family_flags)
        cmd.add_argument("--incomplete-ok", action="store_true", help="allow incomplete weighted-sphere sub-cases")
        cmd.add_argument("--quasi-einstein-choice", action="store_true", help="scale-zero constants for thm-4-1 families")
        _add_run_flags(cmd)

    obata = sub.add_parser("obata")
    obata.add_argument("--lambda", dest="lam", type=float, required=True)
    obata.add_argument("--kappa", type=float, required=True)
    obata.add_argument("--xi", type=float, required=True)
    obata.add_argument("--n", type=int, default=3)
    obata.add_argument("--t-max", dest="t_max", type=float, default=None)
    obata.add_argument("--output", choices=["json", "csv", "text"], default="json")
    obata.add_argument("--out", dest="out_path", default=None)
    obata.add_argument("--emit-csv", dest="emit_csv", default=None, metavar="PATH")

    sub.add_parser("list")
    return parser


def _overrides(args: argparse.Namespace) -> Dict[str, object]:
    values: Dict[str, object] = {}
    for flag in PARAM_FLAGS:
        value = getattr(args, _dest(flag), None)
        if value is not None:
            values[flag] = value
    if args.incomplete_ok:
        values["incomplete_ok"] = True
    if args.quasi_einstein_choice:
        values["quasi_einstein_choice"] = True
    return values


# ==============================================================================
# Commands
# ==============================================================================


def _emit(text: str, out_path: Optional[str]) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _service(args: argparse.Namespace):
    return get_verification_service(
        args.family, _overrides(args), samples=args.samples, tol=args.tol, rel_step=args.rel_step
    )


def _report(result, args: argparse.Namespace) -> int:
    if args.emit_csv and result.table is not None:
        write_csv(result.table, args.emit_csv)
    if args.output == "csv":
        _emit(write_csv(result.table), args.out_path)
    elif args.output == "text":
        _emit(render_text(result), args.out_path)
    else:
        _emit(render_json(result), args.out_path)
    return EXIT_PASS if result.passed else EXIT_FAIL


def cmd_verify(args: argparse.Namespace) -> int:
    return _report(_service(args).verify(), args)


def cmd_classify(args: argparse.Namespace) -> int:
    return _report(_service(args).classify(), args)


def cmd_oracle_compare(args: argparse.Namespace) -> int:
    service = _service(args)
    table = service.oracle_table()
    max_error = float(table["rel_error"].max())
    passed = service.oracle_passed(table)
    if args.emit_csv:
        write_csv(table, args.emit_csv)
    if args.output == "csv":
        _emit(write_csv(table), args.out_path)
    elif args.output == "text":
        _emit(render_table(table) + render_key_values([("max_rel_error", format(max_error, ".17g"))]), args.out_path)
    else:
        _emit(render_mapping({
            "family": service.slug,
            "params": service.params.to_dict(),
            "max_rel_error": max_error,
            "tolerance": ORACLE_REL_TOL,
            "pass": passed,
            "rows": table.to_dict(orient="records"),
        }), args.out_path)
    return EXIT_PASS if passed else EXIT_FAIL


def cmd_obata(args: argparse.Namespace) -> int:
    solution = solve_obata_ivp(ObataProblem(args.lam, args.kappa, args.xi), args.n, t_max=args.t_max)
    passed = solution.closed_form_error <= OBATA_MATCH_TOL
    if args.emit_csv:
        write_csv(solution.table, args.emit_csv)
    summary = {
        "lambda": args.lam,
        "kappa": args.kappa,
        "xi": args.xi,
        "n": args.n,
        "T": solution.T,
        "t_max": solution.t_max,
        "closed_form_error": solution.closed_form_error,
        "pass": passed,
    }
    if args.output == "csv":
        _emit(write_csv(solution.table), args.out_path)
    elif args.output == "text":
        _emit(render_key_values([(key, str(value)) for key, value in summary.items()]), args.out_path)
    else:
        _emit(render_mapping(summary), args.out_path)
    return EXIT_PASS if passed else EXIT_FAIL


def cmd_list(args: argparse.Namespace) -> int:
    sys.stdout.write(render_key_values(list_families()))
    return EXIT_PASS


COMMANDS = {
    "verify": cmd_verify,
    "classify": cmd_classify,
    "oracle-compare": cmd_oracle_compare,
    "obata": cmd_obata,
    "list": cmd_list,
}


# ==============================================================================
# Entry point
# ==============================================================================


def main(argv: Optional[List[str]] = None) -> int:
    """
    smms 명령 실행

    Args:
        argv: 인자 목록 (None이면 sys.argv[1:])

    Returns:
        int: 종료 코드 (0 통과, 2 실패, 1 사용법/생성 오류)
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        sys.stderr.write(f"{exc}\n")
        return EXIT_ERROR
    except SystemExit as exc:
        return int(exc.code or 0)

    logging.basicConfig(
        level=getattr(logging, LOG_LEVEL, logging.WARNING),
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )

    try:
        return COMMANDS[args.command](args)
    except (SMMSError, ValueError) as exc:
        logger.error(f"{args.command} failed: {exc}")
        sys.stderr.write(f"smms {args.command}: {type(exc).__name__}: {exc}\n")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
