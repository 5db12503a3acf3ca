"""scikit-learn style wrappers around the functional API.

Rankers take a Graph (or square adjacency matrix) in ``fit`` and expose the
result as ``scores_``; ``transform`` recomputes on new input. Reasoners take a
triple store (or N-Triples text, or triples) and return a materialized copy,
leaving the input untouched.
"""
from __future__ import annotations

from typing import Optional

from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from . import nal, netkit, owl, rdfs
from ._validation import check_count, check_fraction, check_graph, check_store, check_tol
from .path_algebra import eval_path_expr, parse_path_expr, slices_used, tensor_from_store
from .rules import DEFAULT_CAP
from .walkers import Grammar, normalize_counts, run_random_walkers


class _Ranker(TransformerMixin, BaseEstimator):
    def _score(self, g):  # pragma: no cover - abstract
        raise NotImplementedError

    def fit(self, X, y=None):
        self.graph_ = check_graph(X)
        self.scores_ = self._score(self.graph_)
        return self

    def transform(self, X):
        check_is_fitted(self, "scores_")
        return self._score(check_graph(X))


class PageRank(_Ranker):
    def __init__(self, alpha: float = 0.85, tol: float = 1e-10, max_iter: int = 100_000):
        self.alpha = alpha
        self.tol = tol
        self.max_iter = max_iter

    def _score(self, g):
        alpha = check_fraction("alpha", self.alpha, low_open=True)
        return netkit.pagerank(g, alpha, check_tol(self.tol), check_count("max_iter", self.max_iter, 1))


class StationaryDistribution(_Ranker):
    def __init__(self, tol: float = 1e-10, max_iter: int = 100_000):
        self.tol = tol
        self.max_iter = max_iter

    def _score(self, g):
        return netkit.stationary_distribution(g, check_tol(self.tol), check_count("max_iter", self.max_iter, 1))


class SpreadingActivation(_Ranker):
    def __init__(self, seeds=None, steps: int = 10, delta: float = 0.5):
        self.seeds = seeds
        self.steps = steps
        self.delta = delta

    def _score(self, g):
        if not self.seeds:
            raise ValueError("seeds must name at least one vertex")
        return netkit.spreading_activation(
            g, self.seeds, check_count("steps", self.steps), check_fraction("delta", self.delta)
        )


class Closeness(_Ranker):
    def _score(self, g):
        return netkit.closeness(g)


class Betweenness(_Ranker):
    def __init__(self, exact: bool = False):
        self.exact = exact

    def _score(self, g):
        return netkit.betweenness(g, exact=self.exact)


class RDFSMaterializer(TransformerMixin, BaseEstimator):
    def __init__(self, cap: int = DEFAULT_CAP):
        self.cap = cap

    def fit(self, X=None, y=None):
        check_count("cap", self.cap, 1)
        self.rule_ids_ = rdfs.RULE_IDS
        return self

    def transform(self, X):
        check_is_fitted(self, "rule_ids_")
        store = check_store(X).copy()
        self.entailments_ = rdfs.materialize_rdfs(store, cap=self.cap)
        return store


class OWLMaterializer(TransformerMixin, BaseEstimator):
    """RDFS then OWL rules, alternated until neither adds anything."""

    def __init__(self, cap: int = DEFAULT_CAP, with_rdfs: bool = True):
        self.cap = cap
        self.with_rdfs = with_rdfs

    def fit(self, X=None, y=None):
        check_count("cap", self.cap, 1)
        self.restrictions_ = owl.extract_restrictions(check_store(X)) if X is not None else []
        return self

    def transform(self, X):
        check_is_fitted(self, "restrictions_")
        store = check_store(X).copy()
        self.entailments_, self.inconsistencies_ = owl.reason_owl(store, self.cap, self.with_rdfs)
        return store


class NALSaturator(TransformerMixin, BaseEstimator):
    def __init__(self, rules=("deduction", "induction"), k: int = 1, max_rounds: int = 10):
        self.rules = rules
        self.k = k
        self.max_rounds = max_rounds

    def fit(self, X=None, y=None):
        self.rules_ = tuple(nal.SyllogismRule(r) for r in self.rules)
        check_count("k", self.k, 1)
        check_count("max_rounds", self.max_rounds)
        return self

    def transform(self, X):
        """Saturate judgments (or a store encoding them); returns a sorted list."""
        check_is_fitted(self, "rules_")
        kb = list(X)
        if kb and not isinstance(kb[0], (nal.Judgment, nal.ProductJudgment)):
            kb = nal.decode_judgments(check_store(X))
        kb = [j for j in kb if isinstance(j, nal.Judgment)]
        out = nal.saturate(kb, self.rules_, k=self.k, max_rounds=self.max_rounds)
        return sorted(out, key=lambda j: (j.subject.n3(), j.predicate_term.n3()))


class PathExpressionTransformer(TransformerMixin, BaseEstimator):
    def __init__(self, expr: str = "id", predicates=None, dense: Optional[bool] = None):
        self.expr = expr
        self.predicates = predicates
        self.dense = dense

    def fit(self, X=None, y=None):
        self.expr_ = parse_path_expr(self.expr) if isinstance(self.expr, str) else self.expr
        return self

    def transform(self, X):
        check_is_fitted(self, "expr_")
        preds = list(self.predicates or []) + sorted(slices_used(self.expr_) - set(self.predicates or []))
        if not preds:
            raise ValueError("expression references no slice; pass predicates to fix the vertex set")
        tensor = tensor_from_store(check_store(X), preds)
        return eval_path_expr(self.expr_, tensor, dense=self.dense)


class GrammarWalker(BaseEstimator):
    def __init__(self, grammar=None, walkers: int = 1, steps: int = 1000, seed: int = 0):
        self.grammar = grammar
        self.walkers = walkers
        self.steps = steps
        self.seed = seed

    def fit(self, X, y=None):
        grammar = self.grammar if isinstance(self.grammar, Grammar) else Grammar.from_json(self.grammar)
        self.counts_ = run_random_walkers(
            check_store(X),
            grammar,
            check_count("walkers", self.walkers, 1),
            check_count("steps", self.steps),
            self.seed,
        )
        self.frequencies_ = normalize_counts(self.counts_)
        return self

    def predict(self, terms):
        """Visitation frequency for each requested term (0 if never visited)."""
        check_is_fitted(self, "frequencies_")
        return [self.frequencies_.get(t, 0.0) for t in terms]
