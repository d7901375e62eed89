"""
Document Service - Parses and serializes .olat / .uvo documents, resolves document references
"""

import logging
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

import numpy as np

from app.config import settings
from app.models.errors import DocumentIOError, IrreflexivityViolated, ParseError, UnknownName
from app.models.lattice import BoundedLattice, LatticeCandidate
from app.models.space import UvoSpace
from app.services.catalog_service import catalog_service
from app.services.lattice_service import lattice_service, transitive_closure
from app.services.uvo_service import uvo_service

logger = logging.getLogger(__name__)

OLAT_HEADER = "olat v1"
UVO_HEADER = "uvo v1"
_RESERVED = {"<", "->", "~"}

Span = Tuple[int, int]
Value = Union[BoundedLattice, UvoSpace]


@dataclass
class Token:
    text: str
    line: int
    col: int


@dataclass
class OlatDocument:
    elements: List[str]
    covers: List[Tuple[str, str]] = field(default_factory=list)
    ocomp: List[Tuple[str, str]] = field(default_factory=list)
    lattice_only: bool = False
    spans: Dict[str, Span] = field(default_factory=dict)


@dataclass
class UvoDocument:
    points: List[str]
    covers: List[Tuple[str, str]] = field(default_factory=list)
    perp: List[Tuple[str, str]] = field(default_factory=list)
    spans: Dict[str, Span] = field(default_factory=dict)


def _tokens(line: str, number: int) -> List[Token]:
    body = line.split("#", 1)[0]
    return [Token(m.group(), number, m.start() + 1) for m in re.finditer(r"\S+", body)]


def _split_directive(tokens: List[Token]) -> Tuple[str, List[Token]]:
    """'covers: a < b' and 'covers:a < b' both give ('covers', [a, <, b])"""
    head = tokens[0]
    if ":" not in head.text:
        raise ParseError(head.line, head.col, f"expected a directive, got '{head.text}'")
    key, rest = head.text.split(":", 1)
    tail = tokens[1:]
    if rest:
        tail = [Token(rest, head.line, head.col + len(key) + 1)] + tail
    return key, tail


class DocumentService:
    """Service for the lattice and space document formats"""

    def __init__(self):
        self.documents_dir = Path(settings.documents_dir)

    # ------------------------------------------------------------------
    # Shared parsing
    # ------------------------------------------------------------------

    def _lines(self, text: str, header: str) -> List[List[Token]]:
        lines = [_tokens(line, i) for i, line in enumerate(text.splitlines(), start=1)]
        lines = [tokens for tokens in lines if tokens]
        if not lines:
            raise ParseError(1, 1, f"empty document, expected header '{header}'")
        first = lines[0]
        if " ".join(t.text for t in first) != header:
            raise ParseError(first[0].line, first[0].col, f"expected header '{header}'")
        return lines[1:]

    def _declare(self, tokens: List[Token], names: List[str], spans: Dict[str, Span]) -> None:
        for token in tokens:
            if token.text in _RESERVED or ":" in token.text:
                raise ParseError(token.line, token.col, f"invalid name '{token.text}'")
            if token.text in spans:
                raise ParseError(token.line, token.col, f"duplicate name '{token.text}'")
            spans[token.text] = (token.line, token.col)
            names.append(token.text)

    def _pair(self, tokens: List[Token], arrow: str, spans: Dict[str, Span], what: str) -> Tuple[Token, Token]:
        if len(tokens) != 3 or tokens[1].text != arrow:
            anchor = tokens[0] if tokens else None
            line, col = (anchor.line, anchor.col) if anchor else (0, 0)
            raise ParseError(line, col, f"expected '{what}: <name> {arrow} <name>'")
        left, right = tokens[0], tokens[2]
        for token in (left, right):
            if token.text not in spans:
                raise ParseError(token.line, token.col, f"unknown name '{token.text}'")
        return left, right

    def _closure(self, names: List[str], covers: List[Tuple[Token, Token]]) -> np.ndarray:
        index = {name: i for i, name in enumerate(names)}
        relation = np.zeros((len(names), len(names)), dtype=bool)
        for a, b in covers:
            relation[index[a.text], index[b.text]] = True
        return transitive_closure(relation)

    def _reject_non_covers(self, names: List[str], covers: List[Tuple[Token, Token]], leq: np.ndarray) -> None:
        """Every declared pair must be a cover of the closed order; cyclic input is left to validation"""
        n = len(names)
        if (leq & leq.T & ~np.eye(n, dtype=bool)).any():
            return
        index = {name: i for i, name in enumerate(names)}
        seen = set()
        for a, b in covers:
            i, j = index[a.text], index[b.text]
            if (i, j) in seen:
                raise ParseError(a.line, a.col, f"duplicate cover '{a.text} < {b.text}'")
            seen.add((i, j))
            if i == j:
                raise ParseError(a.line, a.col, f"'{a.text} < {a.text}' is not a cover")
            between = [c for c in range(n) if c not in (i, j) and leq[i, c] and leq[c, j]]
            if between:
                raise ParseError(
                    a.line, a.col,
                    f"'{a.text} < {b.text}' is not a cover (implied by {a.text} < {names[between[0]]} < {b.text}); "
                    f"list covering pairs only",
                )

    # ------------------------------------------------------------------
    # .olat
    # ------------------------------------------------------------------

    def parse_olat_document(self, text: str) -> OlatDocument:
        names: List[str] = []
        spans: Dict[str, Span] = {}
        covers: List[Tuple[Token, Token]] = []
        ocomp: Dict[str, Tuple[str, Token]] = {}
        ocomp_pairs: List[Tuple[str, str]] = []
        lattice_only = False
        elements_line: Optional[Token] = None

        for tokens in self._lines(text, OLAT_HEADER):
            key, rest = _split_directive(tokens)
            if key == "elements":
                if elements_line is not None:
                    raise ParseError(tokens[0].line, tokens[0].col, "elements declared twice")
                elements_line = tokens[0]
                self._declare(rest, names, spans)
            elif key == "kind":
                if [t.text for t in rest] not in (["lattice"], ["ortholattice"]):
                    raise ParseError(tokens[0].line, tokens[0].col, "expected 'kind: lattice' or 'kind: ortholattice'")
                lattice_only = rest[0].text == "lattice"
            elif key == "covers":
                covers.append(self._pair(rest, "<", spans, "covers"))
            elif key == "ocomp":
                a, b = self._pair(rest, "->", spans, "ocomp")
                for x, y in ((a.text, b.text), (b.text, a.text)):
                    if x in ocomp and ocomp[x][0] != y:
                        raise ParseError(a.line, a.col,
                                         f"conflicting orthocomplement for '{x}': '{ocomp[x][0]}' and '{y}'")
                    ocomp[x] = (y, a)
                ocomp_pairs.append((a.text, b.text))
            else:
                raise ParseError(tokens[0].line, tokens[0].col, f"unknown directive '{key}'")

        if elements_line is None:
            raise ParseError(1, 1, "missing 'elements:' line")
        leq = self._closure(names, covers)
        self._reject_non_covers(names, covers, leq)
        if lattice_only and ocomp_pairs:
            raise ParseError(elements_line.line, elements_line.col, "a lattice-only document has no ocomp lines")
        if not lattice_only and len(names) > 1:
            bounds = {i for i in range(len(names)) if leq[i, :].all() or leq[:, i].all()}
            missing = [name for i, name in enumerate(names) if i not in bounds and name not in ocomp]
            if missing:
                line, col = spans[missing[0]]
                raise ParseError(line, col, f"incomplete orthocomplement: no ocomp for '{missing[0]}'")
        return OlatDocument(
            elements=names,
            covers=[(a.text, b.text) for a, b in covers],
            ocomp=ocomp_pairs,
            lattice_only=lattice_only,
            spans=spans,
        )

    def olat_to_lattice(self, document: OlatDocument) -> BoundedLattice:
        names = document.elements
        index = {name: i for i, name in enumerate(names)}
        relation = np.zeros((len(names), len(names)), dtype=bool)
        for a, b in document.covers:
            relation[index[a], index[b]] = True
        leq = transitive_closure(relation)
        if document.lattice_only:
            return lattice_service.validate_lattice(LatticeCandidate(tuple(names), leq))
        involution = list(range(len(names)))
        for a, b in document.ocomp:
            involution[index[a]], involution[index[b]] = index[b], index[a]
        if len(names) > 1:
            bots = np.flatnonzero(leq.all(axis=1))
            tops = np.flatnonzero(leq.all(axis=0))
            if len(bots) and len(tops):
                involution[bots[0]], involution[tops[0]] = int(tops[0]), int(bots[0])
        return lattice_service.validate_ortholattice(LatticeCandidate(tuple(names), leq, tuple(involution)))

    def parse_olat(self, text: str) -> BoundedLattice:
        """Parse and validate; law failures raise the matching ValidationError"""
        return self.olat_to_lattice(self.parse_olat_document(text))

    def serialize_olat(self, L: BoundedLattice) -> str:
        lines = [OLAT_HEADER]
        if not L.is_ortho:
            lines.append("kind: lattice")
        lines.append("elements: " + " ".join(L.names))
        lines += [f"covers: {L.names[a]} < {L.names[b]}" for a, b in L.covers]
        if L.is_ortho:
            for a in range(L.n):
                b = L.ocomp[a]
                if a in (L.bot, L.top) or b < a:
                    continue
                lines.append(f"ocomp: {L.names[a]} -> {L.names[b]}")
        return "\n".join(lines) + "\n"

    # ------------------------------------------------------------------
    # .uvo
    # ------------------------------------------------------------------

    def parse_uvo_document(self, text: str) -> UvoDocument:
        names: List[str] = []
        spans: Dict[str, Span] = {}
        covers: List[Tuple[Token, Token]] = []
        perp: List[Tuple[str, str]] = []
        points_line: Optional[Token] = None

        for tokens in self._lines(text, UVO_HEADER):
            key, rest = _split_directive(tokens)
            if key == "points":
                if points_line is not None:
                    raise ParseError(tokens[0].line, tokens[0].col, "points declared twice")
                points_line = tokens[0]
                self._declare(rest, names, spans)
            elif key == "covers":
                covers.append(self._pair(rest, "<", spans, "covers"))
            elif key == "perp":
                p, q = self._pair(rest, "~", spans, "perp")
                if p.text == q.text:
                    raise IrreflexivityViolated(p.line, p.col, f"'{p.text} ~ {p.text}': orthogonality is irreflexive")
                perp.append((p.text, q.text))
            else:
                raise ParseError(tokens[0].line, tokens[0].col, f"unknown directive '{key}'")

        if points_line is None:
            raise ParseError(1, 1, "missing 'points:' line")
        self._reject_non_covers(names, covers, self._closure(names, covers))
        return UvoDocument(points=names, covers=[(a.text, b.text) for a, b in covers], perp=perp, spans=spans)

    def uvo_to_space(self, document: UvoDocument) -> UvoSpace:
        return uvo_service.from_covers(document.points, document.covers, document.perp)

    def parse_uvo(self, text: str) -> UvoSpace:
        return self.uvo_to_space(self.parse_uvo_document(text))

    def serialize_uvo(self, X: UvoSpace) -> str:
        lines = [UVO_HEADER, "points: " + " ".join(X.names)]
        lines += [f"covers: {X.names[x]} < {X.names[y]}" for x, y in X.covers]
        lines += [f"perp: {X.names[x]} ~ {X.names[y]}" for x, y in X.perp_pairs]
        return "\n".join(lines) + "\n"

    # ------------------------------------------------------------------
    # References
    # ------------------------------------------------------------------

    def parse(self, text: str) -> Value:
        """Dispatch on the header line"""
        for line in text.splitlines():
            stripped = line.split("#", 1)[0].strip()
            if not stripped:
                continue
            if stripped == UVO_HEADER:
                return self.parse_uvo(text)
            return self.parse_olat(text)
        raise ParseError(1, 1, "empty document")

    def resolve(self, ref: str) -> Value:
        """A document path, a catalog lattice or space name, or a file in the shipped corpus"""
        path = Path(ref)
        if path.is_file():
            logger.info(f"Loading document {path}")
            return self.parse(self.read(path))
        if ref in catalog_service.names():
            return catalog_service.builtin(ref)
        if ref in catalog_service.space_names():
            return catalog_service.space(ref)
        shipped = self.documents_dir / ref
        if shipped.is_file():
            logger.info(f"Loading shipped document {shipped}")
            return self.parse(self.read(shipped))
        raise UnknownName(ref, catalog_service.names() + catalog_service.space_names())

    def read(self, path: Path) -> str:
        try:
            return path.read_text(encoding="utf-8")
        except UnicodeDecodeError as e:
            raise DocumentIOError(str(path), f"not UTF-8 text (byte {e.start})") from e
        except OSError as e:
            raise DocumentIOError(str(path), e.strerror or type(e).__name__) from e

    def write(self, path: Path, text: str) -> None:
        try:
            path.write_text(text, encoding="utf-8")
        except OSError as e:
            raise DocumentIOError(str(path), e.strerror or type(e).__name__) from e
        logger.info(f"Wrote {path}")

    def serialize(self, value: Value) -> str:
        if isinstance(value, UvoSpace):
            return self.serialize_uvo(value)
        return self.serialize_olat(value)

    def corpus(self) -> List[Path]:
        """Shipped documents in name order"""
        if not self.documents_dir.exists():
            return []
        return sorted(p for p in self.documents_dir.iterdir() if p.suffix in (".olat", ".uvo"))


# Singleton instance
document_service = DocumentService()
