"""Multi-relational path algebra over adjacency-matrix slices.

A RelationTensor holds one {0,1} matrix per predicate over a shared vertex
numbering. Path expressions combine slices with matrix product (traverse),
transpose and the Hadamard product (filter), plus the all-ones matrix, the
identity and the complement ``not(X) = ones - X`` of a boolean expression.

Concrete syntax::

    expr   := term ('&' term)*
    term   := factor ('*' factor)*
    factor := "slice('" uri "')" | "t(" expr ")" | "not(" expr ")"
            | "ones" | "id" | "(" expr ")"

``*`` binds tighter than ``&``. Results are path counts, never clipped.
"""
from __future__ import annotations

import csv
import io
import re
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np
import scipy.sparse as sp

from .errors import ExpressionSyntaxError, ExpressionTypeError, MissingSliceError, ShapeError
from .netkit import Graph
from .store import TripleStore
from .terms import Term, TriplePattern, URI, V, sort_key
from .vocab import contract

DENSE_BELOW = 64


@dataclass
class RelationTensor:
    vertex_ids: list
    slices: dict  # predicate Term -> csr_matrix

    @property
    def n(self) -> int:
        return len(self.vertex_ids)

    def slice(self, predicate: Term) -> sp.csr_matrix:
        try:
            return self.slices[predicate]
        except KeyError:
            raise MissingSliceError(f"no slice for predicate {predicate.n3()}") from None

    def index(self, term: Term) -> int:
        if not hasattr(self, "_index"):
            self._index = {v: i for i, v in enumerate(self.vertex_ids)}
        return self._index[term]


def tensor_from_store(
    store: TripleStore, predicates: Sequence[Term], include_literals: bool = False
) -> RelationTensor:
    """One {0,1} slice per predicate over the non-literal subjects and objects
    of the matching triples, numbered in sorted term order."""
    predicates = list(predicates)
    if not predicates:
        raise ValueError("at least one predicate is required")
    found = {}
    for p in predicates:
        found[p] = [
            t for t in store.triples(TriplePattern(V("s"), p, V("o"))) if include_literals or not t.o.is_literal
        ]
    labels = sorted({v for ts in found.values() for t in ts for v in (t.s, t.o)}, key=sort_key)
    index = {v: i for i, v in enumerate(labels)}
    n = len(labels)
    slices = {}
    for p, ts in found.items():
        rows = [index[t.s] for t in ts]
        cols = [index[t.o] for t in ts]
        slices[p] = sp.csr_matrix((np.ones(len(ts)), (rows, cols)), shape=(n, n))
    return RelationTensor(labels, slices)


# -- expression tree ------------------------------------------------------------

class PathExpr:
    boolean = False


@dataclass(frozen=True)
class Slice(PathExpr):
    predicate: Term
    boolean = True

    def __str__(self):
        return f"slice('{self.predicate.value}')"


@dataclass(frozen=True)
class Transpose(PathExpr):
    arg: PathExpr

    @property
    def boolean(self):
        return self.arg.boolean

    def __str__(self):
        return f"t({self.arg})"


@dataclass(frozen=True)
class Product(PathExpr):
    left: PathExpr
    right: PathExpr

    def __str__(self):
        return f"({self.left} * {self.right})"


@dataclass(frozen=True)
class Hadamard(PathExpr):
    left: PathExpr
    right: PathExpr

    @property
    def boolean(self):
        return self.left.boolean and self.right.boolean

    def __str__(self):
        return f"({self.left} & {self.right})"


@dataclass(frozen=True)
class Ones(PathExpr):
    boolean = True

    def __str__(self):
        return "ones"


@dataclass(frozen=True)
class Identity(PathExpr):
    boolean = True

    def __str__(self):
        return "id"


@dataclass(frozen=True)
class Not(PathExpr):
    arg: PathExpr
    boolean = True

    def __post_init__(self):
        if not self.arg.boolean:
            raise ExpressionTypeError(f"not() needs a {{0,1}}-valued argument, got {self.arg}")

    def __str__(self):
        return f"not({self.arg})"


# -- parser -----------------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<str>'[^']*'|\"[^\"]*\")|(?P<word>[A-Za-z_]+)|(?P<punct>[()*&]))"
)


def _tokenize(text: str) -> list:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            start = len(text) - len(text[pos:].lstrip())
            raise ExpressionSyntaxError(f"unexpected character {text[start]!r}", start)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self, value=None, kind=None):
        tok = self.tokens[self.i]
        if (value is not None and tok[1] != value) or (kind is not None and tok[0] != kind):
            want = repr(value) if value is not None else kind
            got = repr(tok[1]) if tok[0] != "end" else "end of input"
            raise ExpressionSyntaxError(f"expected {want}, found {got}", tok[2])
        self.i += 1
        return tok

    def expr(self):
        node = self.term()
        while self.peek()[1] == "&":
            self.take("&")
            node = Hadamard(node, self.term())
        return node

    def term(self):
        node = self.factor()
        while self.peek()[1] == "*":
            self.take("*")
            node = Product(node, self.factor())
        return node

    def factor(self):
        kind, value, pos = self.peek()
        if value == "(":
            self.take("(")
            node = self.expr()
            self.take(")")
            return node
        if kind != "word":
            got = repr(value) if kind != "end" else "end of input"
            raise ExpressionSyntaxError(f"expected an operand, found {got}", pos)
        self.take()
        if value == "ones":
            return Ones()
        if value == "id":
            return Identity()
        if value == "slice":
            self.take("(")
            _, text, at = self.take(kind="str")
            self.take(")")
            uri = text[1:-1].strip()
            if uri.startswith("<") and uri.endswith(">"):
                uri = uri[1:-1]
            try:
                return Slice(URI(contract(uri)))
            except ValueError as exc:
                raise ExpressionSyntaxError(str(exc), at) from None
        if value in ("t", "not"):
            self.take("(")
            arg = self.expr()
            self.take(")")
            return Transpose(arg) if value == "t" else Not(arg)
        raise ExpressionSyntaxError(f"unknown name {value!r}", pos)


def parse_path_expr(text: str) -> PathExpr:
    p = _Parser(text)
    node = p.expr()
    kind, value, pos = p.peek()
    if kind != "end":
        raise ExpressionSyntaxError(f"unexpected {value!r}", pos)
    return node


# -- evaluation ---------------------------------------------------------------------

@dataclass(frozen=True)
class _Complement:
    """Lazy ``ones - m``; keeps complements sparse until they must be built."""

    m: object


class _Ops:
    def __init__(self, n: int, dense: bool):
        self.n = n
        self.dense = dense

    def zeros(self):
        return np.zeros((self.n, self.n)) if self.dense else sp.csr_matrix((self.n, self.n))

    def eye(self):
        return np.eye(self.n) if self.dense else sp.identity(self.n, format="csr")

    def lift(self, m):
        return m.toarray() if self.dense else sp.csr_matrix(m)

    def had(self, a, b):
        return a * b if self.dense else a.multiply(b).tocsr()

    def build(self, v):
        if isinstance(v, _Complement):
            m = v.m if self.dense else v.m.toarray()
            out = np.ones((self.n, self.n)) - m
            return out if self.dense else sp.csr_matrix(out)
        return v


def _eval(e: PathExpr, tensor: RelationTensor, ops: _Ops):
    if isinstance(e, Slice):
        return ops.lift(tensor.slice(e.predicate))
    if isinstance(e, Ones):
        return _Complement(ops.zeros())
    if isinstance(e, Identity):
        return ops.eye()
    if isinstance(e, Not):
        v = _eval(e.arg, tensor, ops)
        return v.m if isinstance(v, _Complement) else _Complement(v)
    if isinstance(e, Transpose):
        v = _eval(e.arg, tensor, ops)
        if isinstance(v, _Complement):
            return _Complement(v.m.T if ops.dense else v.m.T.tocsr())
        return v.T if ops.dense else v.T.tocsr()
    if isinstance(e, Product):
        a = ops.build(_eval(e.left, tensor, ops))
        b = ops.build(_eval(e.right, tensor, ops))
        return a @ b if ops.dense else (a @ b).tocsr()
    if isinstance(e, Hadamard):
        a = _eval(e.left, tensor, ops)
        b = _eval(e.right, tensor, ops)
        ca, cb = isinstance(a, _Complement), isinstance(b, _Complement)
        if ca and cb:  # (1-x)(1-y) = 1 - (x + y - xy)
            return _Complement(a.m + b.m - ops.had(a.m, b.m))
        if ca:
            a, b = b, a
        if ca or cb:  # x(1-y) = x - xy
            return a - ops.had(a, b.m)
        return ops.had(a, b)
    raise TypeError(f"not a path expression: {e!r}")


@dataclass
class WeightedMatrix:
    matrix: sp.csr_matrix
    vertex_ids: list

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    def entry(self, i, j) -> float:
        return float(self.matrix[self._idx(i), self._idx(j)])

    def _idx(self, v) -> int:
        if isinstance(v, (int, np.integer)):
            return int(v)
        return self.vertex_ids.index(v)

    def toarray(self) -> np.ndarray:
        return self.matrix.toarray()

    def to_graph(self) -> Graph:
        """Single-relational graph of the nonzero entries."""
        return Graph.from_adjacency(self.matrix, self.vertex_ids)

    def row_support(self, v) -> list:
        i = self._idx(v)
        row = self.matrix.getrow(i)
        return sorted((self.vertex_ids[j] for j, x in zip(row.indices, row.data) if x != 0), key=sort_key)

    def to_csv(self) -> str:
        """Coordinate list (row term, col term, value), row-major order."""
        coo = self.matrix.tocoo()
        order = np.lexsort((coo.col, coo.row))
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["row", "col", "value"])
        for k in order:
            if coo.data[k] == 0:
                continue
            w.writerow([self.vertex_ids[coo.row[k]].n3(), self.vertex_ids[coo.col[k]].n3(), _fmt(coo.data[k])])
        return buf.getvalue()


def _fmt(x: float) -> str:
    return str(int(x)) if float(x).is_integer() else format(float(x), ".17g")


def eval_path_expr(expr, tensor: RelationTensor, dense: Optional[bool] = None) -> WeightedMatrix:
    """Evaluate ``expr`` (text or tree) against ``tensor``.

    Dense numpy arithmetic is used below DENSE_BELOW vertices, sparse CSR
    otherwise; ``dense`` forces either backend.
    """
    if isinstance(expr, str):
        expr = parse_path_expr(expr)
    n = tensor.n
    for m in tensor.slices.values():
        if m.shape != (n, n):
            raise ShapeError(f"slice shape {m.shape} does not match {n} vertices")
    ops = _Ops(n, n < DENSE_BELOW if dense is None else dense)
    out = ops.build(_eval(expr, tensor, ops))
    out = sp.csr_matrix(out, dtype=float)
    out.eliminate_zeros()
    if not np.isfinite(out.data).all():
        raise ValueError("path expression produced non-finite entries")
    return WeightedMatrix(out, list(tensor.vertex_ids))


def slices_used(expr: PathExpr) -> set:
    if isinstance(expr, Slice):
        return {expr.predicate}
    out: set = set()
    for name in ("arg", "left", "right"):
        child = getattr(expr, name, None)
        if child is not None:
            out |= slices_used(child)
    return out


COAUTHORSHIP = "(slice('lanl:authored') * t(slice('lanl:authored'))) & not(id)"
