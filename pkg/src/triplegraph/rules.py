"""Horn rules over triple patterns, with two evaluation strategies.

``forward_chain`` materializes consequences into the store (insert time) by
semi-naive iteration: each round only joins the previous round's new triples
against the store. ``tabled_query`` answers a single pattern without touching
the store (query time) by goal-directed evaluation with a memo table of
subgoals, iterated to a fixpoint.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .errors import ResourceLimitError
from .store import TripleStore, bindings_for, triple_key
from .terms import Triple, TriplePattern, Variable, is_legal, substitute, unify

DEFAULT_CAP = 1_000_000


@dataclass(frozen=True)
class Rule:
    name: str
    head: TriplePattern
    body: tuple
    distinct: tuple = ()  # pairs of variable names that must bind different terms

    def admits(self, binding: dict) -> bool:
        return all(binding[a] != binding[b] for a, b in self.distinct)

    def __post_init__(self):
        body_vars = {t.name for atom in self.body for t in atom if isinstance(t, Variable)}
        for t in self.head:
            if isinstance(t, Variable) and t.name not in body_vars:
                raise ValueError(f"rule {self.name}: head variable ?{t.name} unbound in body")


@dataclass(frozen=True)
class Entailment:
    triple: Triple
    rule: str
    premises: tuple = field(default_factory=tuple)

    def to_json(self) -> dict:
        return {
            "triple": [term.n3() for term in self.triple],
            "rule": self.rule,
            "premises": [[term.n3() for term in p] for p in self.premises],
        }


def entailments_to_jsonl(entailments: Iterable[Entailment]) -> str:
    return "".join(json.dumps(e.to_json(), ensure_ascii=False) + "\n" for e in entailments)


def _instantiate(pat: TriplePattern, binding: dict) -> Optional[Triple]:
    s, p, o = substitute(pat, binding)
    if isinstance(s, Variable) or isinstance(p, Variable) or isinstance(o, Variable):
        return None
    if not is_legal(s, p, o):
        return None
    return Triple(s, p, o)


def _join(store: TripleStore, atoms: Sequence[TriplePattern], binding: dict, premises: list):
    """Yield (binding, premises) for every way of matching ``atoms`` in order."""
    if not atoms:
        yield binding, premises
        return
    first, rest = atoms[0], atoms[1:]
    pat = substitute(first, binding)
    for b in store.match(pat):
        merged = {**binding, **b}
        yield from _join(store, rest, merged, premises + [_instantiate(first, merged)])


def apply_rule_to_delta(store: TripleStore, rule: Rule, delta: Sequence[Triple]):
    """Yield (head triple, premises) for derivations using a delta triple."""
    for i, atom in enumerate(rule.body):
        others = rule.body[:i] + rule.body[i + 1:]
        for t in delta:
            b = unify(atom, t)
            if b is None:
                continue
            for full, prem in _join(store, others, b, []):
                if not rule.admits(full):
                    continue
                head = _instantiate(rule.head, full)
                if head is None:
                    continue
                premises = prem[:i] + [t] + prem[i:]
                yield head, tuple(premises)


def forward_chain(
    store: TripleStore,
    rules: Sequence[Rule],
    cap: int = DEFAULT_CAP,
    delta: Optional[Iterable[Triple]] = None,
) -> list[Entailment]:
    """Materialize ``rules`` to fixpoint; returns the novel entailments in order.

    ``delta`` seeds the first round (defaults to the whole store). The store is
    only ever grown.
    """
    delta = sorted(store.as_set() if delta is None else set(delta), key=triple_key)
    out: list[Entailment] = []
    while delta:
        fresh: dict[Triple, Entailment] = {}
        for rule in rules:
            for head, premises in apply_rule_to_delta(store, rule, delta):
                if head in fresh or head in store:
                    continue
                fresh[head] = Entailment(head, rule.name, premises)
        if len(out) + len(fresh) > cap:
            raise ResourceLimitError(f"derivation exceeded cap of {cap} triples")
        delta = sorted(fresh, key=triple_key)
        for t in delta:
            store.add(t)
            out.append(fresh[t])
    return out


def _goal_key(pat: TriplePattern):
    """Variant key: variables renamed by first occurrence."""
    names: dict[str, int] = {}
    key = []
    for t in pat:
        if isinstance(t, Variable):
            key.append(names.setdefault(t.name, len(names)))
        else:
            key.append(t)
    return tuple(key)


def _unify_head(head: TriplePattern, goal: TriplePattern) -> Optional[dict]:
    """Bind rule variables so the head can produce answers to ``goal``."""
    binding: dict = {}
    for h, g in zip(head, goal):
        if isinstance(g, Variable):
            continue
        if isinstance(h, Variable):
            if binding.setdefault(h.name, g) != g:
                return None
        elif h != g:
            return None
    return binding


class _Table:
    def __init__(self, store, rules, cap):
        self.store = store
        self.rules = rules
        self.cap = cap
        self.goals: dict = {}
        self.answers: dict = {}
        self.size = 0

    def lookup(self, pat: TriplePattern) -> set:
        key = _goal_key(pat)
        if key not in self.answers:
            self.goals[key] = pat
            self.answers[key] = set(self.store.triples(pat))
            self.size += len(self.answers[key])
            self.changed = True
        return self.answers[key]

    def _solve_body(self, atoms, binding):
        if not atoms:
            yield binding
            return
        pat = substitute(atoms[0], binding)
        for t in list(self.lookup(pat)):
            b = unify(pat, t, binding)
            if b is not None:
                yield from self._solve_body(atoms[1:], b)

    def step(self):
        self.changed = False
        for key, goal in list(self.goals.items()):
            found = self.answers[key]
            for rule in self.rules:
                start = _unify_head(rule.head, goal)
                if start is None:
                    continue
                for b in self._solve_body(rule.body, start):
                    if not rule.admits(b):
                        continue
                    head = _instantiate(rule.head, b)
                    if head is None or head in found or unify(goal, head) is None:
                        continue
                    found.add(head)
                    self.size += 1
                    self.changed = True
            if self.size > self.cap:
                raise ResourceLimitError(f"query-time derivation exceeded cap of {self.cap} triples")


def tabled_query(
    store: TripleStore, rules: Sequence[Rule], goal: TriplePattern, cap: int = DEFAULT_CAP
) -> list[dict]:
    """Bindings of ``goal`` over the closure of ``store`` under ``rules``.

    Only subgoals reachable from ``goal`` are evaluated and nothing is written
    to the store.
    """
    table = _Table(store, rules, cap)
    table.lookup(goal)
    table.changed = True
    while table.changed:
        table.step()
    return bindings_for(goal, table.answers[_goal_key(goal)])
