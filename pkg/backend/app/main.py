"""
Orthodual - Command-line entry point
Finite ortholattices, their filter spectra and the duality between them.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

from app.config import settings
from app.models.errors import (
    DocumentIOError,
    Improper,
    NotOrthomodular,
    OrthodualError,
    ParseError,
    SizeCapExceeded,
    UnknownName,
    ValidationError,
    VerificationFailed,
)
from app.models.schemas import CommandReport, ReportFormat
from app.routers import completions, lattices, spaces, verify
from app.routers.common import render
from app.services.document_service import document_service

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

MATH_ERRORS = (ValidationError, VerificationFailed, NotOrthomodular, Improper)
USAGE_ERRORS = (DocumentIOError, ParseError, UnknownName, SizeCapExceeded, argparse.ArgumentTypeError)


def add_common_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--format", choices=[f.value for f in ReportFormat], default=settings.report_format,
                        help="report format (default: %(default)s)")
    parser.add_argument("--max-size", type=int, default=None,
                        help="refuse inputs larger than N elements/points (enumerate: largest size)")
    parser.add_argument("--out", default=None, help="write the document or report to FILE")
    parser.add_argument("--log-level", default=settings.log_level,
                        choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="orthodual",
        description="Finite ortholattices and their UVO-space duals",
    )
    subparsers = parser.add_subparsers(dest="command", required=True, metavar="command")

    # Mount routers
    lattices.register(subparsers)
    spaces.register(subparsers)
    completions.register(subparsers)
    verify.register(subparsers)

    for command in subparsers.choices.values():
        add_common_arguments(command)
    return parser


def configure_logging(args: argparse.Namespace) -> None:
    level = getattr(logging, args.log_level)
    if args.verbose:
        level = min(level, logging.DEBUG if args.verbose > 1 else logging.INFO)
    logging.basicConfig(
        level=level,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
        force=True,
    )


def error_report(command: str, error: Exception, exit_code: int) -> CommandReport:
    report = CommandReport(command=command, ok=False, exit_code=exit_code)
    report.data["error"] = type(error).__name__
    if isinstance(error, ValidationError):
        witness = error.report.witness
        report.summary.append(f"{type(error).__name__}({','.join(witness)}): {error.report.message}")
        report.data["validation"] = error.report.model_dump()
    elif isinstance(error, VerificationFailed):
        report.summary.append(f"{error.what} failed: {error.witness}")
        report.data["witness"] = error.witness
    elif isinstance(error, NotOrthomodular):
        report.summary.append(f"NotOrthomodular({','.join(error.witness)})")
        report.data["witness"] = error.witness
    else:
        report.summary.append(f"{type(error).__name__}: {error}")
    return report


def run(args: argparse.Namespace) -> CommandReport:
    """Call the command handler and map errors to exit codes"""
    try:
        return args.handler(args)
    except MATH_ERRORS as e:
        logger.info(f"{args.command}: {e}")
        return error_report(args.command, e, EXIT_FAILED)
    except USAGE_ERRORS as e:
        return error_report(args.command, e, EXIT_USAGE)
    except OrthodualError as e:
        logger.error(f"{args.command}: unexpected {type(e).__name__}: {e}")
        return error_report(args.command, e, EXIT_USAGE)


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args)

    fmt = ReportFormat(args.format)
    report = CommandReport(command=args.command, ok=True, exit_code=EXIT_OK) if fmt == ReportFormat.SCHEMA else run(args)
    output = render(report, fmt)

    unwritable = report.data.get("error") == DocumentIOError.__name__
    if args.out and not report.data.get("written") and not unwritable:
        try:
            document_service.write(Path(args.out), output + "\n")
        except DocumentIOError as e:
            report = error_report(args.command, e, EXIT_USAGE)
            print(render(report, fmt))
    else:
        print(output)
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
