"""
Completions Router - macneille and canonical commands
"""

import argparse

from app.models.schemas import CommandReport
from app.routers.common import load_ortholattice
from app.services.dictionary_service import dictionary_service


def macneille(args: argparse.Namespace) -> CommandReport:
    """Norm(L) against R(pframe(X+L)) and the two MacLaren frames"""
    L = load_ortholattice(args.ref, args)
    completion = dictionary_service.macneille(L)
    return CommandReport(
        command="macneille",
        ok=True,
        exit_code=0,
        summary=[
            f"Norm(L) has {completion.first.n} elements",
            "Norm(L) ≅ R(pframe(X+L)) ≅ R(L,⫠) ≅ R(L⁻,⫠) ≅ L",
        ],
        data={"size": completion.first.n, "iso": list(completion.iso)},
    )


def canonical(args: argparse.Namespace) -> CommandReport:
    L = load_ortholattice(args.ref, args)
    extension = dictionary_service.canonical_extension(L)
    return CommandReport(
        command="canonical",
        ok=True,
        exit_code=0,
        summary=[
            f"R(X+L) has {extension.extension.n} elements",
            "a ↦ â is dense and compact; R(X+L) ≅ L",
        ],
        data={"size": extension.extension.n, "embedding": list(extension.embedding.map)},
    )


def register(subparsers) -> None:
    parser = subparsers.add_parser("macneille", help="MacNeille completion computed three ways")
    parser.add_argument("ref")
    parser.set_defaults(handler=macneille)

    parser = subparsers.add_parser("canonical", help="canonical extension via regular open sets")
    parser.add_argument("ref")
    parser.set_defaults(handler=canonical)
