"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 data or constraint error,
3 inconsistency found by ``reason --mode owl --fail-on-inconsistency``.
Every run that writes ``--out FILE`` also writes ``FILE.manifest.json`` with
the configuration and SHA-256 hashes of inputs and outputs.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import sys
import warnings
from typing import Optional, Sequence

from . import __version__, nal, netkit, owl, rdfs
from .errors import TripleGraphError
from .export import (
    atomic_write,
    dumps,
    geodesic_summary_csv,
    geodesic_summary_json,
    rank_vector_csv,
    rank_vector_json,
    scalar_csv,
)
from .ntriples import load_ntriples, serialize_ntriples
from .path_algebra import eval_path_expr, parse_path_expr, slices_used, tensor_from_store
from .rules import DEFAULT_CAP, entailments_to_jsonl
from .store import TripleStore
from .terms import URI, Term, TriplePattern, V
from .vocab import contract
from .walkers import (
    Grammar,
    normalize_counts,
    parse_walker_query,
    run_geodesic_walkers,
    run_random_walkers,
    visitation_csv,
)

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_INCONSISTENT = 0, 1, 2, 3

METRICS = (
    "sp", "geodesics", "closeness", "betweenness", "stationary",
    "pagerank", "spread", "assort-scalar", "assort-nominal",
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _term(text: str) -> Term:
    text = text.strip()
    if text.startswith("<") and text.endswith(">"):
        text = text[1:-1]
    return URI(contract(text))


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="triplegraph", description="Triple store reasoning and network analysis.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, formats=("csv", "json")):
        sp.add_argument("inputs", nargs="+", help="N-Triples input files")
        sp.add_argument("--out", required=True, help="output file")
        sp.add_argument("--format", choices=formats, default=formats[0])
        sp.add_argument("--cap", type=int, default=DEFAULT_CAP, help="derivation cap")

    s = sub.add_parser("load", help="parse, validate and canonicalize N-Triples")
    common(s, ("ntriples",))

    s = sub.add_parser("reason", help="RDFS, OWL or NAL inference")
    common(s, ("ntriples", "json"))
    s.add_argument("--mode", choices=("rdfs", "owl", "nal"), required=True)
    s.add_argument("--entailments", help="write entailment provenance as JSON lines")
    s.add_argument("--report", help="write the OWL inconsistency report (JSON)")
    s.add_argument("--fail-on-inconsistency", action="store_true")
    s.add_argument("--k", type=int, default=1, help="NAL evidential horizon (default 1)")
    s.add_argument("--rules", default="deduction,induction", help="comma-separated NAL syllogisms")
    s.add_argument("--rounds", type=int, default=10, help="maximum NAL inference rounds")

    s = sub.add_parser("analyze", help="single-relational network metrics")
    common(s)
    s.add_argument("--metric", choices=METRICS, required=True)
    s.add_argument("--predicate", action="append", default=[], help="edge predicate (repeatable)")
    s.add_argument("--expr", help="derive the graph from a path expression instead")
    s.add_argument("--alpha", type=float, default=0.85)
    s.add_argument("--tol", type=float, default=1e-10)
    s.add_argument("--max-iter", type=int, default=100_000)
    s.add_argument("--delta", type=float, help="spreading decay (required for spread)")
    s.add_argument("--steps", type=int, default=10, help="spreading iterations")
    s.add_argument("--activate", action="append", default=[], metavar="URI[=ENERGY]", help="spread seed vertex")
    s.add_argument("--source", help="source vertex for sp")
    s.add_argument("--target", help="target vertex for sp")
    s.add_argument("--attribute", help="predicate whose objects give the vertex values for assortativity")
    s.add_argument("--exact", action="store_true", help="exact rational betweenness")

    s = sub.add_parser("algebra", help="evaluate a path expression")
    common(s)
    s.add_argument("--expr", required=True)
    s.add_argument("--predicate", action="append", default=[], help="extra slice (fixes the vertex set)")
    s.add_argument("--include-literals", action="store_true")

    s = sub.add_parser("walk", help="grammar-based random or geodesic walkers")
    common(s)
    s.add_argument("--grammar", help="grammar JSON file")
    s.add_argument("--walkers", type=int, default=1)
    s.add_argument("--steps", type=int, default=1000, help="steps per walker")
    s.add_argument("--seed", type=int, help="RNG seed (required for random walkers)")
    s.add_argument("--geodesic", action="store_true", help="run cloning geodesic walkers")
    s.add_argument("--query", help="destination query for geodesic walkers")
    s.add_argument("--source", help="source vertex for geodesic walkers")
    s.add_argument("--max-depth", type=int, default=10)

    s = sub.add_parser("export", help="convert a store to another format")
    common(s, ("ntriples", "csv", "json"))
    return p


# -- helpers -----------------------------------------------------------------------

def _read(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _load(paths) -> TripleStore:
    store = TripleStore()
    for path in paths:
        try:
            load_ntriples(store, _read(path))
        except TripleGraphError as exc:
            raise type(exc)(f"{path}: {exc}") from None
    return store


def _sha256(path: str) -> str:
    with open(path, "rb") as fh:
        return hashlib.sha256(fh.read()).hexdigest()


def _manifest(args, inputs, outputs) -> str:
    config = {k: v for k, v in sorted(vars(args).items()) if k not in ("inputs", "out")}
    return dumps(
        {
            "tool": "triplegraph",
            "version": __version__,
            "command": args.command,
            "config": config,
            "inputs": [{"path": p, "sha256": _sha256(p)} for p in inputs],
            "outputs": [{"path": p, "sha256": _sha256(p)} for p in outputs],
        }
    )


def _graph(store: TripleStore, args) -> netkit.Graph:
    if args.expr:
        expr = parse_path_expr(args.expr)
        preds = args.predicate + sorted(slices_used(expr) - set(map(_term, args.predicate)))
        tensor = tensor_from_store(store, [_term(p) if isinstance(p, str) else p for p in preds])
        return eval_path_expr(expr, tensor).to_graph()
    if not args.predicate:
        raise UsageError("analyze needs --predicate or --expr")
    preds = [_term(p) for p in args.predicate]
    if len(preds) == 1:
        return netkit.graph_from_store(store, preds[0])
    tensor = tensor_from_store(store, preds)
    total = sum(tensor.slices.values())
    return netkit.Graph.from_adjacency(total, tensor.vertex_ids)


def _attribute(store, g, predicate, scalar: bool) -> dict:
    pred = _term(predicate)
    out = {}
    for v in g.vertex_ids:
        objs = [t.o for t in store.triples(TriplePattern(v, pred, V("o")))]
        if not objs:
            continue
        o = min(objs)
        if scalar:
            try:
                out[v] = float(o.value)
            except ValueError:
                raise ValueError(f"{o.n3()} (value of {v.n3()}) is not numeric") from None
        else:
            out[v] = o.value if o.is_literal else o.n3()
    return out


def _seeds(specs) -> dict:
    seeds = {}
    for spec in specs:
        uri, _, energy = spec.partition("=")
        seeds[_term(uri)] = float(energy) if energy else 1.0
    return seeds


# -- subcommands ---------------------------------------------------------------------

def cmd_load(args, store) -> tuple:
    return serialize_ntriples(store), EXIT_OK


def cmd_export(args, store) -> tuple:
    triples = store.sorted_triples()
    if args.format == "ntriples":
        return serialize_ntriples(triples), EXIT_OK
    if args.format == "json":
        return dumps([[t.n3() for t in tr] for tr in triples]), EXIT_OK
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["subject", "predicate", "object"])
    for tr in triples:
        w.writerow([t.n3() for t in tr])
    return buf.getvalue(), EXIT_OK


def cmd_reason(args, store) -> tuple:
    code = EXIT_OK
    if args.mode == "nal":
        return _reason_nal(args, store)
    if args.mode == "rdfs":
        entailments = rdfs.materialize_rdfs(store, cap=args.cap)
        clashes = []
    else:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", owl.MalformedRestrictionWarning)
            entailments, clashes = owl.reason_owl(store, cap=args.cap)
        for w in {str(w.message) for w in caught}:
            print(f"warning: {w}", file=sys.stderr)
        for c in clashes:
            print(f"inconsistency: {c.kind} on {c.instance.n3()} via {c.restriction.on_property.n3()}", file=sys.stderr)
        if args.report:
            atomic_write(args.report, owl.inconsistencies_to_json(clashes))
            args._extra_outputs.append(args.report)
        if clashes and args.fail_on_inconsistency:
            code = EXIT_INCONSISTENT
    if args.entailments:
        atomic_write(args.entailments, entailments_to_jsonl(entailments))
        args._extra_outputs.append(args.entailments)
    print(f"{len(entailments)} entailments, {len(clashes)} inconsistencies", file=sys.stderr)
    if args.format == "json":
        return dumps({
            "triples": [[t.n3() for t in tr] for tr in store.sorted_triples()],
            "inconsistencies": [c.to_json() for c in clashes],
        }), code
    return serialize_ntriples(store), code


def _reason_nal(args, store) -> tuple:
    if args.k < 1:
        raise UsageError("--k must be a positive integer")
    try:
        rules = [nal.SyllogismRule(r.strip()) for r in args.rules.split(",") if r.strip()]
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    kb = [j for j in nal.decode_judgments(store) if isinstance(j, nal.Judgment)]
    given = {j.statement for j in kb}
    result = sorted(
        nal.saturate(kb, rules, k=args.k, max_rounds=args.rounds, cap=args.cap),
        key=lambda j: (j.subject.n3(), j.predicate_term.n3()),
    )
    for j in result:
        tag = "" if j.statement in given else "  (derived)"
        print(f"{j.subject.n3()} -> {j.predicate_term.n3()} <{j.tv.f:.4g}, {j.tv.c:.4g}>{tag}")
    if args.format == "json":
        return dumps([
            {
                "subject": j.subject.n3(),
                "predicate": j.predicate_term.n3(),
                "pointer": j.pointer.n3(),
                "frequency": j.tv.f,
                "confidence": j.tv.c,
                "derived": j.statement not in given,
            }
            for j in result
        ]), EXIT_OK
    return serialize_ntriples(t for j in result for t in nal.encode_judgment(j)), EXIT_OK


def cmd_analyze(args, store) -> tuple:
    g = _graph(store, args)
    m = args.metric
    as_json = args.format == "json"
    if m == "sp":
        if not args.source:
            raise UsageError("--metric sp needs --source")
        src = g.vertex(_term(args.source))
        dist = netkit.bfs_distances(g, src)
        if args.target:
            d = dist[g.vertex(_term(args.target))]
            return (dumps({"metric": "sp", "source": args.source, "target": args.target, "value": d})
                    if as_json else scalar_csv("sp", d)), EXIT_OK
        return (rank_vector_json(g, dist, "sp") if as_json else rank_vector_csv(g, dist, "distance")), EXIT_OK
    if m == "geodesics":
        summary = netkit.geodesic_summary(g)
        return (geodesic_summary_json(g, summary) if as_json else geodesic_summary_csv(g, summary)), EXIT_OK
    if m in ("assort-scalar", "assort-nominal"):
        if not args.attribute:
            raise UsageError(f"--metric {m} needs --attribute")
        scalar = m == "assort-scalar"
        values = _attribute(store, g, args.attribute, scalar)
        r = netkit.assortativity_scalar(g, values) if scalar else netkit.assortativity_nominal(g, values)
        return (dumps({"metric": m, "value": r}) if as_json else scalar_csv(m, r)), EXIT_OK
    if m == "closeness":
        values = netkit.closeness(g)
    elif m == "betweenness":
        values = netkit.betweenness(g, exact=args.exact)
    elif m == "stationary":
        values = netkit.stationary_distribution(g, tol=args.tol, max_iter=args.max_iter)
    elif m == "pagerank":
        if not 0 < args.alpha <= 1:
            raise UsageError("--alpha must lie in (0, 1]")
        values = netkit.pagerank(g, alpha=args.alpha, tol=args.tol, max_iter=args.max_iter)
    else:
        if args.delta is None:
            raise UsageError("--metric spread needs --delta")
        if not args.activate:
            raise UsageError("--metric spread needs at least one --activate vertex")
        values = netkit.spreading_activation(g, _seeds(args.activate), args.steps, args.delta)
    return (rank_vector_json(g, values, m) if as_json else rank_vector_csv(g, values)), EXIT_OK


def cmd_algebra(args, store) -> tuple:
    expr = parse_path_expr(args.expr)
    extra = [_term(p) for p in args.predicate]
    preds = extra + sorted(slices_used(expr) - set(extra))
    if not preds:
        raise UsageError("expression references no slice; add --predicate")
    z = eval_path_expr(expr, tensor_from_store(store, preds, include_literals=args.include_literals))
    if args.format == "csv":
        return z.to_csv(), EXIT_OK
    coo = z.matrix.tocoo()
    entries = sorted((int(i), int(j), float(v)) for i, j, v in zip(coo.row, coo.col, coo.data) if v)
    return dumps({
        "expr": str(expr),
        "vertices": [v.n3() for v in z.vertex_ids],
        "entries": [[i, j, v] for i, j, v in entries],
    }), EXIT_OK


def cmd_walk(args, store) -> tuple:
    as_json = args.format == "json"
    if args.geodesic:
        if not (args.query and args.source):
            raise UsageError("--geodesic needs --query and --source")
        if args.max_depth < 0:
            raise UsageError("--max-depth must be non-negative")
        depth = run_geodesic_walkers(store, parse_walker_query(args.query), _term(args.source), args.max_depth)
        if as_json:
            return dumps({t.n3(): d for t, d in depth.items()}), EXIT_OK
        lines = ["term,depth"] + [f"{t.n3()},{d}" for t, d in depth.items()]
        return "\n".join(lines) + "\n", EXIT_OK
    if args.grammar is None:
        raise UsageError("walk needs --grammar (or --geodesic)")
    if args.seed is None:
        raise UsageError("random walkers need --seed")
    if args.walkers < 1 or args.steps < 0:
        raise UsageError("--walkers must be >= 1 and --steps >= 0")
    grammar = Grammar.from_json(_read(args.grammar))
    args._extra_inputs.append(args.grammar)
    counts = run_random_walkers(store, grammar, args.walkers, args.steps, args.seed)
    if as_json:
        freq = normalize_counts(counts)
        return dumps({t.n3(): {"count": c, "frequency": freq[t]} for t, c in counts.items()}), EXIT_OK
    return visitation_csv(counts), EXIT_OK


COMMANDS = {
    "load": cmd_load,
    "reason": cmd_reason,
    "analyze": cmd_analyze,
    "algebra": cmd_algebra,
    "walk": cmd_walk,
    "export": cmd_export,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    args._extra_inputs, args._extra_outputs = [], []
    try:
        store = _load(args.inputs)
        text, code = COMMANDS[args.command](args, store)
        atomic_write(args.out, text)
        outputs = [args.out] + args._extra_outputs
        manifest_args = argparse.Namespace(**{k: v for k, v in vars(args).items() if not k.startswith("_")})
        atomic_write(args.out + ".manifest.json", _manifest(manifest_args, args.inputs + args._extra_inputs, outputs))
        return code
    except UsageError as exc:
        print(f"triplegraph {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (TripleGraphError, ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"triplegraph {args.command}: {type(exc).__name__}: {msg}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
