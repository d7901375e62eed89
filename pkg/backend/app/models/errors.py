"""
Error hierarchy.

Every error is a ValueError so callers that only know "bad input" can still
catch it; the CLI maps the concrete classes to exit codes.
"""

from typing import Optional, Sequence

from app.models.schemas import ValidationReport


class OrthodualError(ValueError):
    """Base class for all orthodual errors"""


class ValidationError(OrthodualError):
    """A candidate structure violates a law; carries the full report"""

    law = "invalid"

    def __init__(self, report: ValidationReport):
        self.report = report
        detail = f"{report.law}({', '.join(report.witness)})" if report.witness else str(report.law)
        super().__init__(f"{detail}: {report.message}" if report.message else detail)

    @classmethod
    def build(cls, witness: Sequence[str] = (), message: str = "", size: int = 0) -> "ValidationError":
        return cls(ValidationReport(valid=False, law=cls.law, witness=list(witness),
                                    message=message, size=size))


class NotAPoset(ValidationError):
    law = "NotAPoset"


class NotALattice(ValidationError):
    law = "NotALattice"


class NotBounded(ValidationError):
    law = "NotBounded"


class NotInvolutive(ValidationError):
    law = "NotInvolutive"


class ComplementLawFails(ValidationError):
    law = "ComplementLawFails"


class NotOrderReversing(ValidationError):
    law = "NotOrderReversing"


class DeMorganFails(ValidationError):
    law = "DeMorganFails"


class NotClosed(ValidationError):
    """A set family is not closed under the operations it must carry"""
    law = "NotClosed"


class NotAHomomorphism(ValidationError):
    law = "NotAHomomorphism"


class NotAnOrthospace(ValidationError):
    """Orthogonality is not irreflexive and symmetric"""
    law = "NotAnOrthospace"


LAWS = {cls.law: cls for cls in (
    NotAPoset, NotALattice, NotBounded, NotInvolutive, ComplementLawFails,
    NotOrderReversing, DeMorganFails, NotClosed, NotAHomomorphism, NotAnOrthospace,
)}


def raise_for(report: ValidationReport) -> None:
    """Raise the exception matching a failed report"""
    if report.valid:
        return
    raise LAWS.get(report.law, ValidationError)(report)


class SizeCapExceeded(OrthodualError):
    def __init__(self, what: str, size: int, cap: int):
        self.what = what
        self.size = size
        self.cap = cap
        super().__init__(f"{what}: size {size} exceeds cap {cap}")


class UnknownName(OrthodualError):
    def __init__(self, name: str, known: Optional[Sequence[str]] = None):
        self.name = name
        hint = f" (known: {', '.join(known)})" if known else ""
        super().__init__(f"unknown name '{name}'{hint}")


class ParseError(OrthodualError):
    def __init__(self, line: int, col: int, msg: str):
        self.line = line
        self.col = col
        self.msg = msg
        super().__init__(f"{line}:{col}: {msg}")


class IrreflexivityViolated(ParseError):
    pass


class DocumentIOError(OrthodualError):
    """A document could not be read, decoded or written"""

    def __init__(self, path: str, reason: str):
        self.path = path
        self.reason = reason
        super().__init__(f"{path}: {reason}")


class VerificationFailed(OrthodualError):
    """A construction failed its own correctness check"""

    def __init__(self, what: str, witness: str = ""):
        self.what = what
        self.witness = witness
        super().__init__(f"{what} failed" + (f": {witness}" if witness else ""))


class NotOrthomodular(OrthodualError):
    def __init__(self, witness: Sequence[str]):
        self.witness = list(witness)
        super().__init__(f"not orthomodular, witness ({', '.join(self.witness)})")


class Improper(OrthodualError):
    """Filter generation reached the bottom element"""

    def __init__(self, generators: Sequence[str] = ()):
        self.generators = list(generators)
        super().__init__(f"filter generated by {{{', '.join(self.generators)}}} is improper")
