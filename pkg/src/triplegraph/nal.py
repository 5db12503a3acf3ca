"""Non-Axiomatic Logic judgments and syllogistic inference.

A judgment ``x -> y <f, c>`` is stored as three triples around a statement
pointer::

    (x, ptr, y)
    (ptr, nal:frequency, "f"^^xsd:float)
    (ptr, nal:confidence, "c"^^xsd:float)

A product judgment ``(a1 x ... x an) -> y <f, c>`` adds a set node with
ordered ``nal:_1 ... nal:_n`` components, for n + 3 triples.
"""
from __future__ import annotations

import enum
import math
import uuid
from dataclasses import dataclass
from typing import Iterable, Optional, Union

from .errors import DegenerateError, ResourceLimitError, ShapeError
from .terms import Literal, Term, Triple, URI
from .vocab import NAL_CONFIDENCE, NAL_FREQUENCY, XSD_FLOAT, nal_component

DEFAULT_JUDGMENT_CAP = 100_000


@dataclass(frozen=True)
class TruthValue:
    f: float
    c: float

    def __post_init__(self):
        for name in ("f", "c"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v) and 0.0 <= v <= 1.0):
                raise ValueError(f"{name} must lie in [0, 1], got {v!r}")

    def __iter__(self):
        return iter((self.f, self.c))

    def __str__(self):
        return f"<{self.f:g}, {self.c:g}>"


@dataclass(frozen=True)
class Judgment:
    subject: Term
    predicate_term: Term
    tv: TruthValue
    pointer: Term

    def __post_init__(self):
        if self.subject == self.predicate_term:
            raise DegenerateError(f"self-inheritance {self.subject.n3()} -> itself")
        if not self.pointer.is_uri:
            raise ValueError("statement pointer must be a URI")
        if self.subject.is_literal or self.predicate_term.is_literal:
            raise ValueError("judgment terms must be URIs or blank nodes")

    @property
    def statement(self) -> tuple:
        return (self.subject, self.predicate_term)

    def __str__(self):
        return f"{self.subject.n3()} -> {self.predicate_term.n3()} {self.tv}"


@dataclass(frozen=True)
class ProductJudgment:
    components: tuple
    predicate_term: Term
    tv: TruthValue
    set_pointer: Term
    stmt_pointer: Term

    def __post_init__(self):
        if len(self.components) < 2:
            raise ValueError("a product needs at least two components")
        if not self.stmt_pointer.is_uri:
            raise ValueError("statement pointer must be a URI")


class SyllogismRule(enum.Enum):
    DEDUCTION = "deduction"
    INDUCTION = "induction"
    ABDUCTION = "abduction"
    EXEMPLIFICATION = "exemplification"


ALL_RULES = tuple(SyllogismRule)


def _float_literal(v: float) -> Term:
    return Literal(repr(float(v)), XSD_FLOAT)


def encode_judgment(j: Union[Judgment, ProductJudgment]) -> list[Triple]:
    if isinstance(j, ProductJudgment):
        triples = [Triple(j.set_pointer, nal_component(i), c) for i, c in enumerate(j.components, 1)]
        triples.append(Triple(j.set_pointer, j.stmt_pointer, j.predicate_term))
        ptr = j.stmt_pointer
    else:
        triples = [Triple(j.subject, j.pointer, j.predicate_term)]
        ptr = j.pointer
    triples.append(Triple(ptr, NAL_FREQUENCY, _float_literal(j.tv.f)))
    triples.append(Triple(ptr, NAL_CONFIDENCE, _float_literal(j.tv.c)))
    return triples


def decode_judgments(triples: Iterable[Triple]) -> list:
    """Recover every judgment encoded in ``triples``; other triples are ignored."""
    triples = list(triples)
    freq, conf = {}, {}
    for s, p, o in triples:
        if p == NAL_FREQUENCY:
            freq[s] = float(o.value)
        elif p == NAL_CONFIDENCE:
            conf[s] = float(o.value)
    components: dict[Term, dict[int, Term]] = {}
    for s, p, o in triples:
        if p.is_uri and p.value.startswith("nal:_") and p.value[5:].isdigit():
            components.setdefault(s, {})[int(p.value[5:])] = o
    out = []
    for s, p, o in triples:
        if p not in freq or p not in conf:
            continue
        tv = TruthValue(freq[p], conf[p])
        if s in components:
            slots = components[s]
            if sorted(slots) != list(range(1, len(slots) + 1)):
                raise ValueError(f"product {s.n3()} has non-contiguous components")
            comps = tuple(slots[i] for i in range(1, len(slots) + 1))
            out.append(ProductJudgment(comps, o, tv, s, p))
        else:
            out.append(Judgment(s, o, tv, p))
    return sorted(out, key=_decode_order)


def _decode_order(j):
    if isinstance(j, ProductJudgment):
        return (1, j.stmt_pointer.n3())
    return (0, j.subject.n3(), j.predicate_term.n3(), j.pointer.n3())


def truth_function(rule: SyllogismRule, tv1: TruthValue, tv2: TruthValue, k: int = 1) -> TruthValue:
    f1, c1 = tv1
    f2, c2 = tv2
    if rule is SyllogismRule.DEDUCTION:
        return TruthValue(f1 * f2, f1 * c1 * f2 * c2)
    if rule is SyllogismRule.INDUCTION:
        evidence = f1 * c1 * c2
        return TruthValue(f1, evidence / (evidence + k))
    if rule is SyllogismRule.ABDUCTION:
        evidence = f2 * c1 * c2
        return TruthValue(f2, evidence / (evidence + k))
    if rule is SyllogismRule.EXEMPLIFICATION:
        evidence = f1 * c1 * f2 * c2
        return TruthValue(1.0, evidence / (evidence + k))
    raise ValueError(f"unknown rule {rule!r}")


def conclusion_terms(rule: SyllogismRule, j1: Judgment, j2: Judgment) -> tuple:
    """Subject and predicate of the conclusion; ShapeError if the premises do
    not share the term the rule needs."""
    (x1, y1), (x2, y2) = j1.statement, j2.statement
    if rule in (SyllogismRule.DEDUCTION, SyllogismRule.EXEMPLIFICATION):
        if y1 != x2:
            raise ShapeError(f"{rule.value} needs x -> y and y -> z")
        return (x1, y2) if rule is SyllogismRule.DEDUCTION else (y2, x1)
    if rule is SyllogismRule.INDUCTION:
        if y1 != y2:
            raise ShapeError("induction needs x -> y and z -> y")
        return (x1, x2)
    if rule is SyllogismRule.ABDUCTION:
        if x1 != x2:
            raise ShapeError("abduction needs x -> y and x -> z")
        return (y1, y2)
    raise ValueError(f"unknown rule {rule!r}")


def mint_pointer(rule: SyllogismRule, j1: Judgment, j2: Judgment) -> Term:
    """Deterministic pointer for a derivation, unique per (rule, premises)."""
    name = f"{rule.value}|{j1.pointer.value}|{j2.pointer.value}"
    return URI(f"urn:uuid:{uuid.uuid5(uuid.NAMESPACE_URL, name)}")


def apply_syllogism(
    rule: SyllogismRule, j1: Judgment, j2: Judgment, k: int = 1, pointer: Optional[Term] = None
) -> Judgment:
    rule = SyllogismRule(rule)
    if not (isinstance(k, int) and k >= 1):
        raise ValueError("k must be a positive integer")
    subject, predicate = conclusion_terms(rule, j1, j2)
    if subject == predicate:
        raise DegenerateError(f"{rule.value} would conclude {subject.n3()} -> itself")
    tv = truth_function(rule, j1.tv, j2.tv, k)
    return Judgment(subject, predicate, tv, pointer or mint_pointer(rule, j1, j2))


def _premise_order(j: Judgment):
    return (j.subject.n3(), j.predicate_term.n3(), j.pointer.n3())


def saturate(
    kb: Iterable[Judgment],
    rules: Iterable = ALL_RULES,
    k: int = 1,
    max_rounds: int = 10,
    cap: int = DEFAULT_JUDGMENT_CAP,
) -> set[Judgment]:
    """Apply the enabled syllogisms round by round.

    Premise pairs are visited in sorted order and, within a pair, rules in
    their canonical order. A conclusion about a statement that already has a
    judgment (in the knowledge base or earlier in the round) is dropped, so
    the first derivation wins. Stops at quiescence or after ``max_rounds``.
    """
    chosen = {SyllogismRule(r) for r in rules}
    enabled = [r for r in ALL_RULES if r in chosen]
    known: dict[tuple, Judgment] = {}
    for j in sorted(kb, key=_premise_order):
        known.setdefault(j.statement, j)
    if len(known) > cap:
        raise ResourceLimitError(f"knowledge base exceeds cap of {cap} judgments")
    for _ in range(max_rounds):
        premises = sorted(known.values(), key=_premise_order)
        # index by shared term so each judgment only meets candidates it can pair with
        by_subject: dict[Term, list] = {}
        by_predicate: dict[Term, list] = {}
        for j in premises:
            by_subject.setdefault(j.subject, []).append(j)
            by_predicate.setdefault(j.predicate_term, []).append(j)
        derived: dict[tuple, Judgment] = {}
        for j1 in premises:
            partners = {id(j): j for j in by_subject.get(j1.predicate_term, [])}
            partners.update((id(j), j) for j in by_predicate.get(j1.predicate_term, []))
            partners.update((id(j), j) for j in by_subject.get(j1.subject, []))
            for j2 in sorted(partners.values(), key=_premise_order):
                if j2 is j1:
                    continue
                for rule in enabled:
                    try:
                        c = apply_syllogism(rule, j1, j2, k)
                    except (ShapeError, DegenerateError):
                        continue
                    if c.statement in known or c.statement in derived:
                        continue
                    derived[c.statement] = c
        if not derived:
            break
        if len(known) + len(derived) > cap:
            raise ResourceLimitError(f"saturation exceeded cap of {cap} judgments")
        known.update(derived)
    return set(known.values())
