"""
Spaces Router - dualize, cor, roundtrip, sum and export-dot commands
"""

import argparse

from app.models.errors import VerificationFailed
from app.models.schemas import CommandReport
from app.models.space import UvoSpace
from app.routers.common import load, load_lattice, load_space, write_document
from app.services.dictionary_service import dictionary_service
from app.services.document_service import document_service
from app.services.dot_service import dot_service
from app.services.duality_service import duality_service
from app.services.filter_service import filter_service
from app.services.uvo_service import uvo_service


def dualize(args: argparse.Namespace) -> CommandReport:
    """Filter spectrum of a lattice, written as a .uvo document"""
    L = load_lattice(args.ref, args)
    X = filter_service.dual_space(L)
    report = CommandReport(command="dualize", ok=True, exit_code=0)
    report.summary.append(f"X+L has {X.m} points, {len(X.covers)} covers, {len(X.perp_pairs)} orthogonal pairs")
    report.data.update(points=list(X.names), covers=len(X.covers), perp=len(X.perp_pairs))
    write_document(document_service.serialize_uvo(X), args, report)
    return report


def cor(args: argparse.Namespace) -> CommandReport:
    X = load_space(args.ref, args)
    family = uvo_service.cor(X)
    report = CommandReport(command="cor", ok=True, exit_code=0)
    report.summary.append(f"COR has {len(family)} members")
    report.summary += [X.format(u) for u in family.members]
    report.data["members"] = [X.format(u) for u in family.members]
    axioms = uvo_service.validate_uvo(X)
    if not axioms.passed:
        failure = axioms.failures()[0]
        report.summary.append(f"not a UVO-space: axiom {failure.axiom} fails ({failure.witness})")
        report.ok, report.exit_code = False, 1
    return report


def roundtrip(args: argparse.Namespace) -> CommandReport:
    """L ≅ COR(X+L) for lattices, X ≅ X+COR(X) for spaces"""
    value = load(args.ref, args)
    report = CommandReport(command="roundtrip", ok=True, exit_code=0)
    if isinstance(value, UvoSpace):
        axioms = uvo_service.validate_uvo(value)
        if not axioms.passed:
            failure = axioms.failures()[0]
            raise VerificationFailed(f"axiom {failure.axiom} {failure.name}", failure.witness or "")
        g = uvo_service.char_map(value)
        report.summary.append("X ≅ X+COR(X): homeomorphism found")
        report.data["map"] = g.describe()
        return report
    rep = duality_service.representation_map(value)
    report.summary.append("L ≅ COR(X+L): isomorphism found")
    X = filter_service.dual_space(value)
    uvo_service.char_map(X)
    report.summary.append("X+L ≅ X+COR(X+L): homeomorphism found")
    report.data["map"] = rep.describe()
    return report


def sum_spaces(args: argparse.Namespace) -> CommandReport:
    """
    X + Y of two spaces. The order and COR(X+Y) ≅ COR(X)×COR(Y) are verified
    when both summands are UVO-spaces; otherwise only the shape is reported.
    """
    X = load_space(args.left, args)
    Y = load_space(args.right, args)
    uvo = uvo_service.validate_uvo(X).passed and uvo_service.validate_uvo(Y).passed
    S = dictionary_service.uvo_sum(X, Y, verify=uvo)
    report = CommandReport(command="sum", ok=True, exit_code=0)
    report.summary.append(f"X + Y has {S.m} points and {len(S.covers)} specialization covers")
    if uvo:
        ok, witness = dictionary_service.sum_cor_product_check(X, Y)
        if not ok:
            raise VerificationFailed("COR(X+Y) ≅ COR(X)×COR(Y)", witness or "")
        report.summary.append("COR(X+Y) ≅ COR(X)×COR(Y)")
    else:
        report.summary.append("a summand is not a UVO-space: order and COR checks skipped")
    report.data.update(points=S.m, covers=len(S.covers), verified=uvo)
    write_document(document_service.serialize_uvo(S), args, report)
    return report


def export_dot(args: argparse.Namespace) -> CommandReport:
    value = load(args.ref, args)
    if args.dual and not isinstance(value, UvoSpace):
        value = filter_service.dual_space(value)
    graph = dot_service.graph(value, perp=not args.no_perp)
    report = CommandReport(command="export-dot", ok=True, exit_code=0)
    report.data.update(nodes=dot_service.node_count(graph), edges=len(graph.get_edges()))
    write_document(graph.to_string(), args, report)
    return report


def register(subparsers) -> None:
    parser = subparsers.add_parser("dualize", help="filter spectrum of a lattice as a .uvo document")
    parser.add_argument("ref")
    parser.set_defaults(handler=dualize)

    parser = subparsers.add_parser("cor", help="compact open orthoregular sets of a space")
    parser.add_argument("ref")
    parser.set_defaults(handler=cor)

    parser = subparsers.add_parser("roundtrip", help="representation and characterization round trips")
    parser.add_argument("ref")
    parser.set_defaults(handler=roundtrip)

    parser = subparsers.add_parser("sum", help="sum of two spaces (or of two spectra)")
    parser.add_argument("left")
    parser.add_argument("right")
    parser.set_defaults(handler=sum_spaces)

    parser = subparsers.add_parser("export-dot", help="Hasse or specialization diagram in DOT")
    parser.add_argument("ref")
    parser.add_argument("--dual", action="store_true", help="draw the filter spectrum of a lattice")
    parser.add_argument("--no-perp", action="store_true", help="omit the orthogonality overlay")
    parser.set_defaults(handler=export_dot)
