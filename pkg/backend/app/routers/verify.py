"""
Verify Router - the verify-all acceptance command
"""

import argparse

from app.models.schemas import CommandReport
from app.services.verification_service import verification_service


def verify_all(args: argparse.Namespace) -> CommandReport:
    results = verification_service.run_all(args.only, args.max_size)
    failed = [r for r in results if not r.passed]
    report = CommandReport(command="verify-all", ok=not failed, exit_code=1 if failed else 0, checks=results)
    report.summary.append(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return report


def register(subparsers) -> None:
    parser = subparsers.add_parser(
        "verify-all",
        help="run the property suite over the catalog and the ortholattices up to --max-size elements",
    )
    parser.add_argument("--only", action="append", choices=list(verification_service.checks()),
                        help="run only the named check (repeatable)")
    parser.set_defaults(handler=verify_all)
