"""
Shared helpers for the command routers: argument resolution and report output
"""

import argparse
import json
from pathlib import Path
from typing import Optional, Union

from app.models.errors import SizeCapExceeded
from app.models.lattice import BoundedLattice, Ortholattice
from app.models.schemas import CommandReport, ReportFormat
from app.models.space import UvoSpace
from app.services.document_service import document_service
from app.services.filter_service import filter_service

Value = Union[BoundedLattice, UvoSpace]


def _size(value: Value) -> int:
    return value.m if isinstance(value, UvoSpace) else value.n


def load(ref: str, args: argparse.Namespace) -> Value:
    value = document_service.resolve(ref)
    if args.max_size is not None and _size(value) > args.max_size:
        raise SizeCapExceeded(f"input '{ref}'", _size(value), args.max_size)
    return value


def load_lattice(ref: str, args: argparse.Namespace) -> BoundedLattice:
    value = load(ref, args)
    if isinstance(value, UvoSpace):
        raise argparse.ArgumentTypeError(f"'{ref}' is a space, a lattice is required")
    return value


def load_ortholattice(ref: str, args: argparse.Namespace) -> Ortholattice:
    L = load_lattice(ref, args)
    if not L.is_ortho:
        raise argparse.ArgumentTypeError(f"'{ref}' is a plain lattice, an ortholattice is required")
    return L


def load_space(ref: str, args: argparse.Namespace) -> UvoSpace:
    """A space document or name, or the filter spectrum of a lattice"""
    value = load(ref, args)
    if isinstance(value, UvoSpace):
        return value
    return filter_service.dual_space(value)


def write_document(text: str, args: argparse.Namespace, report: CommandReport) -> None:
    """Documents go to --out when given, otherwise into the report"""
    out: Optional[str] = getattr(args, "out", None)
    if out:
        document_service.write(Path(out), text)
        report.summary.append(f"wrote {out}")
        report.data["written"] = out
    else:
        report.data["document"] = text


def render(report: CommandReport, fmt: ReportFormat) -> str:
    if fmt == ReportFormat.SCHEMA:
        return json.dumps(CommandReport.model_json_schema(), indent=2, ensure_ascii=False)
    if fmt == ReportFormat.JSON:
        return report.model_dump_json(indent=2)
    lines = list(report.summary)
    for check in report.checks:
        mark = "ok  " if check.passed else "FAIL"
        line = f"{mark} {check.name:<20} {check.seconds:>8.3f}s  {check.detail}"
        if check.witness:
            line += f"  [{check.witness}]"
        lines.append(line)
    document = report.data.get("document")
    if document:
        lines.append(document.rstrip("\n"))
    return "\n".join(lines)
