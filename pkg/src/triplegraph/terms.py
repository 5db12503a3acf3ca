"""Terms, triples and triple patterns.

A term is a URI, a blank node or a literal. A triple ``(s, p, o)`` admits a
URI or blank node as subject, a URI as predicate and any term as object.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import NamedTuple, Optional, Union


class TermKind(enum.Enum):
    URI = "uri"
    BLANK = "blank"
    LITERAL = "literal"


_ESCAPES = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\r": "\\r", "\t": "\\t"}


def escape_lexical(text: str) -> str:
    return "".join(_ESCAPES.get(ch, ch) for ch in text)


@dataclass(frozen=True, slots=True)
class Term:
    kind: TermKind
    value: str
    datatype: Optional[str] = None

    def __post_init__(self):
        if self.kind is TermKind.URI:
            if not self.value or ":" not in self.value:
                raise ValueError(f"URI must be absolute (scheme ':' ...): {self.value!r}")
            if any(ch in self.value for ch in '<> "\n'):
                raise ValueError(f"illegal character in URI: {self.value!r}")
        elif self.kind is TermKind.BLANK:
            if not self.value or any(ch.isspace() for ch in self.value):
                raise ValueError(f"invalid blank node label: {self.value!r}")
        if self.datatype is not None:
            if self.kind is not TermKind.LITERAL:
                raise ValueError("only literals carry a datatype")
            if ":" not in self.datatype:
                raise ValueError(f"datatype must be a URI: {self.datatype!r}")

    @property
    def is_uri(self) -> bool:
        return self.kind is TermKind.URI

    @property
    def is_blank(self) -> bool:
        return self.kind is TermKind.BLANK

    @property
    def is_literal(self) -> bool:
        return self.kind is TermKind.LITERAL

    def n3(self) -> str:
        """N-Triples rendering; also the canonical sort key of the term."""
        if self.kind is TermKind.URI:
            return f"<{self.value}>"
        if self.kind is TermKind.BLANK:
            return f"_:{self.value}"
        text = f'"{escape_lexical(self.value)}"'
        if self.datatype is not None:
            text += f"^^<{self.datatype}>"
        return text

    def __lt__(self, other):
        if not isinstance(other, Term):
            return NotImplemented
        return self.n3() < other.n3()

    def __str__(self):
        return self.n3()

    def __repr__(self):
        return f"Term({self.n3()})"


def URI(value: str) -> Term:
    return Term(TermKind.URI, value)


def Blank(label: str) -> Term:
    return Term(TermKind.BLANK, label)


def Literal(value, datatype: Optional[str] = None) -> Term:
    return Term(TermKind.LITERAL, str(value), datatype)


def sort_key(term: Term) -> str:
    return term.n3()


class Triple(NamedTuple):
    s: Term
    p: Term
    o: Term

    def n3(self) -> str:
        return f"{self.s.n3()} {self.p.n3()} {self.o.n3()} ."


def is_legal(s: Term, p: Term, o: Term) -> bool:
    return (
        isinstance(s, Term)
        and isinstance(p, Term)
        and isinstance(o, Term)
        and not s.is_literal
        and p.is_uri
    )


def make_triple(s: Term, p: Term, o: Term) -> Triple:
    """Build a triple, enforcing the subject/predicate/object constraints."""
    from .errors import TripleConstraintError

    for position, term in (("subject", s), ("predicate", p), ("object", o)):
        if not isinstance(term, Term):
            raise TripleConstraintError(f"{position} is not a term: {term!r}")
    if s.is_literal:
        raise TripleConstraintError(f"literal in subject position: {s.n3()}")
    if not p.is_uri:
        raise TripleConstraintError(f"predicate must be a URI: {p.n3()}")
    return Triple(s, p, o)


@dataclass(frozen=True, slots=True)
class Variable:
    name: str

    def __post_init__(self):
        if not self.name:
            raise ValueError("variable name must be non-empty")

    def __str__(self):
        return f"?{self.name}"


PatternTerm = Union[Term, Variable]


class TriplePattern(NamedTuple):
    s: PatternTerm
    p: PatternTerm
    o: PatternTerm

    @property
    def variables(self) -> list[str]:
        seen = []
        for t in self:
            if isinstance(t, Variable) and t.name not in seen:
                seen.append(t.name)
        return seen


def V(name: str) -> Variable:
    return Variable(name.lstrip("?"))


def pattern(s, p, o) -> TriplePattern:
    """Shorthand: strings starting with ``?`` become variables, other strings URIs."""

    def conv(x):
        if isinstance(x, (Term, Variable)):
            return x
        if isinstance(x, str):
            return V(x) if x.startswith("?") else URI(x)
        raise TypeError(f"cannot use {x!r} in a pattern")

    return TriplePattern(conv(s), conv(p), conv(o))


def substitute(pat: TriplePattern, binding: dict) -> TriplePattern:
    return TriplePattern(
        *(binding.get(t.name, t) if isinstance(t, Variable) else t for t in pat)
    )


def unify(pat: TriplePattern, triple, binding: Optional[dict] = None) -> Optional[dict]:
    """Extend ``binding`` so that ``pat`` matches ``triple``; None if impossible."""
    out = dict(binding) if binding else {}
    for pt, tt in zip(pat, triple):
        if isinstance(pt, Variable):
            bound = out.get(pt.name)
            if bound is None:
                out[pt.name] = tt
            elif bound != tt:
                return None
        elif pt != tt:
            return None
    return out
