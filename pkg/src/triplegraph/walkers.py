"""Grammar-based random walkers and cloning geodesic walkers.

A walker query is a small SPARQL-like conjunctive query::

    SELECT ?dest WHERE { @ lanl:authored ?x . ?dest lanl:authored ?x . FILTER(@ != ?dest) }

``@`` stands for the walker's current vertex. A grammar is a graph of such
queries; the walker moves through the data graph and the grammar together.
"""
from __future__ import annotations

import csv
import io
import json
import re
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from .errors import ExpressionSyntaxError, GrammarError
from .ntriples import _unescape
from .store import TripleStore
from .terms import Literal, Term, TriplePattern, URI, Variable, sort_key, substitute
from .vocab import contract

AT = Variable("@")
DEST = Variable("dest")


@dataclass(frozen=True)
class WalkerQuery:
    patterns: tuple
    filters: tuple = ()  # pairs (a, b) meaning a != b
    text: str = field(default="", compare=False)

    def __post_init__(self):
        bound = {t for pat in self.patterns for t in pat if isinstance(t, Variable)}
        if DEST not in bound:
            raise ExpressionSyntaxError("?dest does not appear in any pattern", 0)
        for a, b in self.filters:
            for t in (a, b):
                if isinstance(t, Variable) and t != AT and t not in bound:
                    raise ExpressionSyntaxError(f"filter references unbound ?{t.name}", 0)

    def __str__(self):
        return self.text or repr(self)


_QTOKEN = re.compile(
    r"""\s*(?:
      (?P<iri><[^<>"\s]*>)
    | (?P<lit>"(?:[^"\\]|\\.)*"(?:\^\^(?:<[^<>"\s]*>|[A-Za-z][\w.-]*:[\w.-]*))?)
    | (?P<var>\?[A-Za-z_]\w*)
    | (?P<at>@)
    | (?P<neq>!=)
    | (?P<punct>[{}.()])
    | (?P<word>[A-Za-z][\w.-]*:[\w.\-/#]*|[A-Za-z_]\w*)
    )""",
    re.VERBOSE,
)


def _qtokens(text: str) -> list:
    out = []
    pos = 0
    while True:
        rest = text[pos:]
        if not rest.strip():
            break
        m = _QTOKEN.match(text, pos)
        if not m:
            at = pos + len(rest) - len(rest.lstrip())
            raise ExpressionSyntaxError(f"unexpected character {text[at]!r}", at)
        out.append((m.lastgroup, m.group(m.lastgroup), m.start(m.lastgroup)))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


def _term(tok) -> object:
    kind, value, pos = tok
    try:
        if kind == "iri":
            return URI(contract(value[1:-1]))
        if kind == "var":
            return Variable(value[1:])
        if kind == "at":
            return AT
        if kind == "lit":
            m = re.fullmatch(r'"((?:[^"\\]|\\.)*)"(?:\^\^(.*))?', value, re.S)
            dtype = m.group(2)
            if dtype and dtype.startswith("<"):
                dtype = contract(dtype[1:-1])
            return Literal(_unescape(m.group(1), 0), dtype)
        if kind == "word" and ":" in value:
            return URI(value)
    except ValueError as exc:
        raise ExpressionSyntaxError(str(exc), pos) from None
    raise ExpressionSyntaxError(f"expected a term, found {value or 'end of input'!r}", pos)


def parse_walker_query(text: str) -> WalkerQuery:
    toks = _qtokens(text)
    i = 0

    def expect(pred, what):
        nonlocal i
        tok = toks[i]
        if not pred(tok):
            raise ExpressionSyntaxError(f"expected {what}, found {tok[1] or 'end of input'!r}", tok[2])
        i += 1
        return tok

    def keyword(word):
        return lambda t: t[0] == "word" and t[1].upper() == word

    expect(keyword("SELECT"), "SELECT")
    proj = expect(lambda t: t[0] == "var", "a projection variable")
    if proj[1] != "?dest":
        raise ExpressionSyntaxError(f"only ?dest may be projected, got {proj[1]}", proj[2])
    expect(keyword("WHERE"), "WHERE")
    expect(lambda t: t[1] == "{", "'{'")
    patterns, filters = [], []
    while toks[i][1] != "}":
        if keyword("FILTER")(toks[i]):
            i += 1
            expect(lambda t: t[1] == "(", "'('")
            a = _term(toks[i]); i += 1
            expect(lambda t: t[0] == "neq", "'!='")
            b = _term(toks[i]); i += 1
            expect(lambda t: t[1] == ")", "')'")
            filters.append((a, b))
        else:
            s = _term(toks[i]); i += 1
            p = _term(toks[i])
            if isinstance(p, Term) and not p.is_uri:
                raise ExpressionSyntaxError("predicate must be a URI or variable", toks[i][2])
            i += 1
            o = _term(toks[i]); i += 1
            if isinstance(s, Term) and s.is_literal:
                raise ExpressionSyntaxError("literal in subject position", toks[i - 3][2])
            patterns.append(TriplePattern(s, p, o))
        if toks[i][1] == ".":
            i += 1
        elif toks[i][1] != "}" and not keyword("FILTER")(toks[i]):
            raise ExpressionSyntaxError(f"expected '.' or '}}', found {toks[i][1] or 'end of input'!r}", toks[i][2])
    i += 1
    if toks[i][0] != "end":
        raise ExpressionSyntaxError(f"unexpected {toks[i][1]!r} after '}}'", toks[i][2])
    if not patterns:
        raise ExpressionSyntaxError("query has no triple patterns", toks[i][2])
    return WalkerQuery(tuple(patterns), tuple(filters), text.strip())


def eval_walker_query(store: TripleStore, q: WalkerQuery, at: Term) -> list:
    """Distinct ?dest bindings with ``@`` bound to ``at``, sorted."""
    base = {AT.name: at}
    bindings = [base]
    for pat in q.patterns:
        nxt = []
        for b in bindings:
            for m in store.match(substitute(pat, b)):
                nxt.append({**b, **m})
        bindings = nxt
        if not bindings:
            return []
    out = set()
    for b in bindings:
        if all(_value(x, b) != _value(y, b) for x, y in q.filters):
            out.add(b[DEST.name])
    return sorted(out, key=sort_key)


def _value(t, binding):
    return binding[t.name] if isinstance(t, Variable) else t


# -- grammars -------------------------------------------------------------------------

@dataclass(frozen=True)
class GrammarNode:
    query: Optional[WalkerQuery]  # None marks a halt node
    transitions: tuple = ()  # (target id, probability)
    fallback: Optional[str] = None

    @property
    def halts(self) -> bool:
        return self.query is None


@dataclass
class Grammar:
    start: str
    nodes: dict

    def __post_init__(self):
        if self.start not in self.nodes:
            raise GrammarError(f"start node {self.start!r} is not defined")
        for nid, node in self.nodes.items():
            if node.halts:
                if node.transitions:
                    raise GrammarError(f"halt node {nid!r} cannot have transitions")
                continue
            if node.fallback is None:
                raise GrammarError(f"node {nid!r} needs a fallback")
            if node.fallback not in self.nodes:
                raise GrammarError(f"node {nid!r}: fallback {node.fallback!r} is not defined")
            if not node.transitions:
                raise GrammarError(f"node {nid!r} has no transitions")
            for target, p in node.transitions:
                if target not in self.nodes:
                    raise GrammarError(f"node {nid!r}: transition to undefined {target!r}")
                if not 0.0 <= p <= 1.0:
                    raise GrammarError(f"node {nid!r}: probability {p} outside [0, 1]")
            total = sum(p for _, p in node.transitions)
            if abs(total - 1.0) > 1e-9:
                raise GrammarError(f"node {nid!r}: transition probabilities sum to {total}")

    @classmethod
    def from_json(cls, data) -> "Grammar":
        if isinstance(data, str):
            try:
                data = json.loads(data)
            except json.JSONDecodeError as exc:
                raise GrammarError(f"grammar is not valid JSON: {exc}") from None
        try:
            nodes = {}
            for nid, spec in data["nodes"].items():
                text = spec.get("query")
                try:
                    query = parse_walker_query(text) if text is not None else None
                except ExpressionSyntaxError as exc:
                    raise GrammarError(f"node {nid!r}: {exc}") from None
                trans = tuple((str(t), float(p)) for t, p in spec.get("transitions", []))
                nodes[str(nid)] = GrammarNode(query, trans, spec.get("fallback"))
            return cls(str(data["start"]), nodes)
        except (KeyError, TypeError, AttributeError, ValueError) as exc:
            if isinstance(exc, GrammarError):
                raise
            raise GrammarError(f"malformed grammar: {exc!r}") from None

    def to_json(self) -> dict:
        return {
            "start": self.start,
            "nodes": {
                nid: {
                    "query": node.query.text if node.query is not None else None,
                    "transitions": [[t, p] for t, p in node.transitions],
                    "fallback": node.fallback,
                }
                for nid, node in sorted(self.nodes.items())
            },
        }


@dataclass
class WalkerState:
    vertex: Term
    grammar_node: str
    rng: np.random.Generator


class _QueryCache:
    def __init__(self, store, grammar):
        self.store = store
        self.grammar = grammar
        self.memo: dict = {}

    def __call__(self, nid, vertex):
        key = (nid, vertex)
        if key not in self.memo:
            self.memo[key] = eval_walker_query(self.store, self.grammar.nodes[nid].query, vertex)
        return self.memo[key]


def _walk(state: WalkerState, grammar: Grammar, steps: int, dests, counts: dict):
    cum = {nid: np.cumsum([p for _, p in node.transitions]) for nid, node in grammar.nodes.items()}
    for _ in range(steps):
        node = grammar.nodes[state.grammar_node]
        if node.halts:
            return
        found = dests(state.grammar_node, state.vertex)
        if not found:
            state.grammar_node = node.fallback  # no move, still a step
            continue
        state.vertex = found[int(state.rng.integers(len(found)))]
        counts[state.vertex] = counts.get(state.vertex, 0) + 1
        k = int(np.searchsorted(cum[state.grammar_node], state.rng.random() * cum[state.grammar_node][-1], "right"))
        state.grammar_node = node.transitions[min(k, len(node.transitions) - 1)][0]


def run_random_walkers(
    store: TripleStore,
    grammar: Grammar,
    walkers: int,
    steps: int,
    seed: int,
    starts: Optional[Sequence[Term]] = None,
) -> dict:
    """Visitation counts (term -> arrivals) of ``walkers`` independent walkers.

    Each walker draws from its own stream spawned from ``seed``. Without
    ``starts`` the start vertex is uniform over the store's URIs. A step whose
    query is empty moves the walker to the node's fallback without changing
    vertex; it consumes a step but counts no visit.
    """
    if walkers < 1:
        raise ValueError("walkers must be at least 1")
    if steps < 0:
        raise ValueError("steps must be non-negative")
    universe = store.uris()
    if starts is None and not universe:
        raise GrammarError("store has no URIs to start walkers from")
    if starts is not None and len(starts) != walkers:
        raise ValueError("one start vertex per walker is required")
    dests = _QueryCache(store, grammar)
    counts: dict = {}
    for w, child in enumerate(np.random.SeedSequence(seed).spawn(walkers)):
        rng = np.random.default_rng(child)
        start = starts[w] if starts is not None else universe[int(rng.integers(len(universe)))]
        _walk(WalkerState(start, grammar.start, rng), grammar, steps, dests, counts)
    return dict(sorted(counts.items(), key=lambda kv: sort_key(kv[0])))


def run_geodesic_walkers(store: TripleStore, query: WalkerQuery, source: Term, max_depth: int) -> dict:
    """First-visit depth of every term reachable from ``source`` within
    ``max_depth`` abstract hops; a clone is spawned for each destination."""
    if max_depth < 0:
        raise ValueError("max_depth must be non-negative")
    depth = {source: 0}
    frontier = deque([source])
    while frontier:
        v = frontier.popleft()
        if depth[v] == max_depth:
            continue
        for u in eval_walker_query(store, query, v):
            if u not in depth:
                depth[u] = depth[v] + 1
                frontier.append(u)
    return dict(sorted(depth.items(), key=lambda kv: (kv[1], sort_key(kv[0]))))


def normalize_counts(counts: Mapping) -> dict:
    total = sum(counts.values())
    return {t: (c / total if total else 0.0) for t, c in counts.items()}


def visitation_csv(counts: Mapping) -> str:
    """CSV of (term, count, frequency), most visited first."""
    freq = normalize_counts(counts)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["term", "count", "frequency"])
    for t, c in sorted(counts.items(), key=lambda kv: (-kv[1], sort_key(kv[0]))):
        w.writerow([t.n3(), c, repr(freq[t])])
    return buf.getvalue()


COAUTHOR_QUERY = "SELECT ?dest WHERE { @ lanl:authored ?x . ?dest lanl:authored ?x . FILTER(@ != ?dest) }"
TELEPORT_QUERY = "SELECT ?dest WHERE { ?dest rdf:type lanl:Person }"


def pagerank_grammar(alpha: float = 0.85) -> Grammar:
    """Coauthor step with probability alpha, teleport to any Person otherwise."""
    trans = [["coauthor", alpha], ["teleport", round(1.0 - alpha, 12)]]
    return Grammar.from_json(
        {
            "start": "teleport",
            "nodes": {
                "coauthor": {"query": COAUTHOR_QUERY, "transitions": trans, "fallback": "teleport"},
                "teleport": {"query": TELEPORT_QUERY, "transitions": trans, "fallback": "halt"},
                "halt": {"query": None},
            },
        }
    )
