"""
Lattices Router - check, product, atoms, congruences and enumerate commands
"""

import argparse

from app.models.errors import VerificationFailed
from app.models.schemas import CommandReport
from app.models.space import UvoSpace
from app.routers.common import load, load_lattice, load_ortholattice, write_document
from app.services import bitsets
from app.services.catalog_service import catalog_service
from app.services.dictionary_service import dictionary_service
from app.services.document_service import document_service
from app.services.filter_service import filter_service
from app.services.lattice_service import lattice_service
from app.services.uvo_service import uvo_service


def check(args: argparse.Namespace) -> CommandReport:
    """
    Validate a document or catalog entry and report its structure

    Lattices are validated while loading; a law failure surfaces as a
    ValidationError with its witness. Spaces are checked axiom by axiom.
    """
    value = load(args.ref, args)
    report = CommandReport(command="check", ok=True, exit_code=0)

    if isinstance(value, UvoSpace):
        axioms = uvo_service.validate_uvo(value)
        report.data["axioms"] = axioms.model_dump()
        for result in axioms.axioms:
            status = "ok" if result.passed else f"fails ({result.witness})"
            report.summary.append(f"axiom {result.axiom} {result.name}: {status}")
        if not axioms.passed:
            report.ok, report.exit_code = False, 1
        else:
            report.summary.insert(0, f"UVO-space with {value.m} points, COR has {axioms.cor_size} members")
        return report

    L = value
    kind = "ortholattice" if L.is_ortho else "lattice (no orthocomplement)"
    report.summary.append(f"valid {kind} with {L.n} elements")
    distributive, sublattice = lattice_service.is_distributive(L)
    if distributive:
        report.summary.append("distributive")
    else:
        report.summary.append(f"non-distributive ({sublattice.kind} witness: {','.join(sublattice.names)})")
        report.data["distributive_witness"] = sublattice.model_dump()
    modular, witness = lattice_service.is_modular(L)
    report.summary.append("modular" if modular else f"non-modular (witness: {','.join(witness.names)})")
    if L.is_ortho:
        orthomodular, witness = lattice_service.is_orthomodular(L)
        report.summary.append(
            "orthomodular" if orthomodular else f"not orthomodular (witness: {','.join(witness.names)})"
        )
        report.data["orthomodular"] = orthomodular
    report.data.update(size=L.n, distributive=distributive, modular=modular)
    return report


def product(args: argparse.Namespace) -> CommandReport:
    L = load_lattice(args.left, args)
    M = load_lattice(args.right, args)
    P = lattice_service.product(L, M)
    report = CommandReport(command="product", ok=True, exit_code=0,
                           summary=[f"product with {P.n} elements"])
    if L.is_ortho and M.is_ortho:
        f = dictionary_service.product_sum_homeo(L, M)
        report.summary.append(f"X+(L×M) ≅ X+L + X+M: homeomorphism on {f.source.m} points")
    write_document(document_service.serialize_olat(P), args, report)
    return report


def atoms(args: argparse.Namespace) -> CommandReport:
    L = load_lattice(args.ref, args)
    mapping = dictionary_service.atoms_bijection(L)
    report = CommandReport(command="atoms", ok=True, exit_code=0)
    report.summary.append(f"{len(mapping)} atoms ↔ {len(mapping)} isolated points")
    report.summary += [f"{L.names[a]} ↦ ↑{L.names[a]}" for a in sorted(mapping)]
    report.summary.append("atomic" if dictionary_service.is_atomic(L) else "not atomic")
    report.data["atoms"] = [L.names[a] for a in sorted(mapping)]
    return report


def congruences(args: argparse.Namespace) -> CommandReport:
    L = load_ortholattice(args.ref, args)
    correspondence = dictionary_service.congruence_correspondence(L)
    brute = lattice_service.congruences_bruteforce(L)
    if len(brute) != len(correspondence.pugs):
        raise VerificationFailed("congruence count", f"{len(brute)} congruences, {len(correspondence.pugs)} sets")
    X = filter_service.dual_space(L)
    report = CommandReport(command="congruences", ok=True, exit_code=0,
                           summary=[f"{len(brute)} congruences = {len(correspondence.pugs)} principal generated subframes"])
    rows = []
    for theta, subset in correspondence.pairs:
        classes = [bitsets.format_set(block, L.names) for block in theta.blocks()]
        report.summary.append(f"{' '.join(classes)} ↦ {X.format(subset)}")
        rows.append({"classes": classes, "subframe": X.format(subset)})
    report.data["congruences"] = rows
    return report


def enumerate_lattices(args: argparse.Namespace) -> CommandReport:
    n_max = args.max_size if args.max_size is not None else catalog_service.enumerate_default
    counts = {}
    for L in catalog_service.enumerate_ortholattices(n_max):
        counts[L.n] = counts.get(L.n, 0) + 1
    report = CommandReport(command="enumerate", ok=True, exit_code=0)
    report.summary.append(f"ortholattices up to {n_max} elements, up to isomorphism")
    report.summary += [f"size {n}: {counts.get(n, 0)}" for n in range(1, n_max + 1)]
    report.data["counts"] = {str(n): counts.get(n, 0) for n in range(1, n_max + 1)}
    return report


def register(subparsers) -> None:
    parser = subparsers.add_parser("check", help="validate a lattice or space and report its structure")
    parser.add_argument("ref", help="document path or catalog name")
    parser.set_defaults(handler=check)

    parser = subparsers.add_parser("product", help="product of two lattices")
    parser.add_argument("left")
    parser.add_argument("right")
    parser.set_defaults(handler=product)

    parser = subparsers.add_parser("atoms", help="atoms and isolated points of the spectrum")
    parser.add_argument("ref")
    parser.set_defaults(handler=atoms)

    parser = subparsers.add_parser("congruences", help="congruences and principal generated subframes")
    parser.add_argument("ref")
    parser.set_defaults(handler=congruences)

    parser = subparsers.add_parser("enumerate", help="ortholattices up to --max-size elements")
    parser.set_defaults(handler=enumerate_lattices)
