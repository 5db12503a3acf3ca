"""Line-oriented N-Triples reading and canonical writing.

Supported subset: ``<iri>``, ``_:label``, ``"lexical"`` and
``"lexical"^^<datatype>`` tokens, one ``.``-terminated statement per line,
``#`` comments. Language tags are rejected.
"""
from __future__ import annotations

import re
from typing import Iterable, Optional

from .errors import NTriplesSyntaxError, TripleConstraintError
from .terms import Blank, Literal, Term, Triple, URI
from .vocab import contract

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<iri><(?P<iri_body>[^<>"\s]*)>)
  | (?P<blank>_:(?P<label>[A-Za-z0-9_](?:[A-Za-z0-9_\-.]*[A-Za-z0-9_\-])?))
  | (?P<literal>"(?P<lex>(?:[^"\\\n]|\\.)*)"(?:\^\^<(?P<dtype>[^<>"\s]*)>|(?P<lang>@[A-Za-z\-]+))?)
  | (?P<dot>\.)
  | (?P<comment>\#.*)
    """,
    re.VERBOSE,
)

_UNESCAPE = re.compile(r"\\(?:u([0-9A-Fa-f]{4})|U([0-9A-Fa-f]{8})|(.))")
_SIMPLE = {"t": "\t", "n": "\n", "r": "\r", '"': '"', "\\": "\\", "'": "'", "b": "\b", "f": "\f"}


def _unescape(text: str, lineno: int) -> str:
    def repl(m):
        if m.group(1) or m.group(2):
            return chr(int(m.group(1) or m.group(2), 16))
        ch = m.group(3)
        if ch not in _SIMPLE:
            raise NTriplesSyntaxError(f"unknown escape \\{ch}", lineno)
        return _SIMPLE[ch]

    return _UNESCAPE.sub(repl, text)


class BlankScope:
    """Maps document-local blank labels to store-unique ones.

    A label keeps its text unless it is already taken in the target store, in
    which case the first free ``label_k`` (k = 1, 2, ...) is used.
    """

    def __init__(self, taken: Optional[set] = None):
        self.taken = taken if taken is not None else set()
        self.mapping: dict[str, str] = {}

    def __call__(self, label: str) -> Term:
        fresh = self.mapping.get(label)
        if fresh is None:
            fresh, k = label, 0
            while fresh in self.taken:
                k += 1
                fresh = f"{label}_{k}"
            self.taken.add(fresh)
            self.mapping[label] = fresh
        return Blank(fresh)


def _tokens(line: str, lineno: int):
    pos = 0
    while pos < len(line):
        m = _TOKEN.match(line, pos)
        if m is None:
            raise NTriplesSyntaxError(f"unexpected input at column {pos + 1}: {line[pos:pos + 20]!r}", lineno)
        pos = m.end()
        if m.group("ws"):
            continue
        if m.group("comment"):
            break
        yield m


def parse_line(line: str, lineno: int, scope: BlankScope) -> Optional[Triple]:
    terms = []
    ended = False
    for m in _tokens(line, lineno):
        if ended:
            raise NTriplesSyntaxError("content after terminating '.'", lineno)
        if m.group("dot"):
            ended = True
            continue
        if len(terms) == 3:
            raise NTriplesSyntaxError("more than three terms in statement", lineno)
        if m.group("iri"):
            body = m.group("iri_body")
            try:
                terms.append(URI(contract(body)))
            except ValueError as exc:
                raise NTriplesSyntaxError(str(exc), lineno) from None
        elif m.group("blank"):
            terms.append(scope(m.group("label")))
        else:
            if m.group("lang"):
                raise NTriplesSyntaxError("language-tagged literals are not supported", lineno)
            dtype = m.group("dtype")
            terms.append(Literal(_unescape(m.group("lex"), lineno), contract(dtype) if dtype else None))
    if not terms and not ended:
        return None
    if not ended:
        raise NTriplesSyntaxError("statement not terminated by '.'", lineno)
    if len(terms) != 3:
        raise NTriplesSyntaxError(f"expected 3 terms, found {len(terms)}", lineno)
    s, p, o = terms
    if s.is_literal:
        raise TripleConstraintError(f"line {lineno}: literal in subject position")
    if p.is_literal:
        raise TripleConstraintError(f"line {lineno}: literal in predicate position")
    if p.is_blank:
        raise TripleConstraintError(f"line {lineno}: blank node in predicate position")
    return Triple(s, p, o)


def parse_ntriples(text: str, taken_labels: Optional[set] = None) -> list[Triple]:
    """Parse a document into triples, in document order.

    ``taken_labels`` lists blank labels already used by the destination; it is
    updated in place with the labels this document allocates.
    """
    scope = BlankScope(taken_labels)
    out = []
    # only LF (optionally CRLF) ends a statement; splitlines() would also
    # break on characters such as U+2028 that may sit inside a literal
    for lineno, line in enumerate(text.split("\n"), start=1):
        line = line[:-1] if line.endswith("\r") else line
        t = parse_line(line, lineno, scope)
        if t is not None:
            out.append(t)
    return out


def load_ntriples(store, text: str) -> int:
    """Parse ``text`` into ``store``; returns the number of new triples."""
    return store.update(parse_ntriples(text, store.blank_labels))


def serialize_ntriples(triples: Iterable[Triple]) -> str:
    """Canonical document: one statement per line, lines sorted."""
    lines = sorted({f"{s.n3()} {p.n3()} {o.n3()} ." for s, p, o in triples})
    return "".join(line + "\n" for line in lines)
