"""Command-line interface.

Subcommands: ``treeify``, ``weigh``, ``sim``, ``matrix``, ``cohesion``,
``correlate``.  Outputs are written atomically (temp file + rename) and are
byte-identical for identical inputs and flags.

Exit codes: 0 ok, 2 parse, 3 structure, 4 unknown entity, 5 statistics.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import tempfile
from pathlib import Path

from . import __version__
from .cohesion import (
    DEFAULT_SAMPLES,
    histogram_csv,
    judged_pairs,
    load_benchmark_sets,
    load_judgements,
    pearson,
    run_experiment,
)
from .corpus import load_corpus
from .errors import MissingCorpus, ParseError, SemsimError
from .methods import all_methods, method_matrix, method_similarity, parse_method
from .taxonomy import load_dag, load_taxonomy, treeify_dag
from .weighting import WeightingMethod, weigh

log = logging.getLogger("semsimp")


def write_output(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    target = Path(out)
    fd, tmp = tempfile.mkstemp(dir=target.parent or ".", prefix=f".{target.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _fmt(x: float) -> str:
    return "inf" if x == float("inf") else repr(float(x))


# -- shared loading -------------------------------------------------------------

def _taxonomy(args):
    path = getattr(args, "taxonomy", None)
    if path is None:
        raise ParseError("--taxonomy is required for this command")
    return load_taxonomy(path)


def _corpora(args, required: bool = True):
    t = _taxonomy(args)
    path = getattr(args, "corpus", None)
    if path is None:
        if required:
            raise MissingCorpus("--corpus is required for this command")
        corpus = None
    else:
        corpus = load_corpus(path, t)
    wpath = getattr(args, "weight_corpus", None)
    weight_corpus = load_corpus(wpath, t) if wpath else None
    return t, corpus, weight_corpus


# -- commands ----------------------------------------------------------------------

def cmd_treeify(args) -> int:
    t = treeify_dag(load_dag(args.dag), separator=args.separator, root_label=args.root_label)
    write_output(t.dumps(), getattr(args, "out", None))
    counts = {"concepts": len(t), "isa_edges": len(t) - 1}
    print(json.dumps(counts), file=sys.stderr)
    return 0


def cmd_weigh(args) -> int:
    method = WeightingMethod.parse(args.method)
    t, corpus, weight_corpus = _corpora(args, required=False)
    stats = weight_corpus if weight_corpus is not None else corpus
    wt = weigh(t, method, stats if method.extensional else None)
    order = sorted(range(len(t)), key=lambda i: t.ids[i])
    if getattr(args, "format", "csv") == "json":
        payload = [{"concept_id": t.ids[i],
                    "weight": None if wt.weights is None else float(wt.weights[i]),
                    "ic": "inf" if wt.ics[i] == float("inf") else float(wt.ics[i])} for i in order]
        text = json.dumps({"method": method.value, "concepts": payload}, ensure_ascii=False) + "\n"
    else:
        lines = ["concept_id,weight,ic"]
        for i in order:
            w = "" if wt.weights is None else _fmt(wt.weights[i])
            cid = t.ids[i]
            if any(ch in cid for ch in ',"\n'):
                cid = '"' + cid.replace('"', '""') + '"'
            lines.append(f"{cid},{w},{_fmt(wt.ics[i])}")
        text = "\n".join(lines) + "\n"
    write_output(text, getattr(args, "out", None))
    return 0


def cmd_sim(args) -> int:
    spec = parse_method(args.method)
    _, corpus, weight_corpus = _corpora(args)
    value = method_similarity(spec, corpus, args.a, args.b, weight_corpus)
    if getattr(args, "format", "csv") == "json":
        text = json.dumps({"method": spec.label, "a": args.a, "b": args.b, "value": round(value, 6)}) + "\n"
    else:
        text = f"{value:.6f}\n"
    write_output(text, getattr(args, "out", None))
    return 0


def cmd_matrix(args) -> int:
    spec = parse_method(args.method)
    _, corpus, weight_corpus = _corpora(args)
    m = method_matrix(spec, corpus, weight_corpus, jobs=getattr(args, "jobs", 1))
    text = m.to_json() + "\n" if getattr(args, "format", "csv") == "json" else m.to_csv()
    write_output(text, getattr(args, "out", None))
    return 0


def _methods(args):
    return [parse_method(s) for s in args.method] if args.method else all_methods()


def cmd_cohesion(args) -> int:
    _, corpus, weight_corpus = _corpora(args)
    sets = load_benchmark_sets(args.sets)
    judgements = load_judgements(args.judgements) if args.judgements else None
    report = run_experiment(corpus, _methods(args), sets, judgements, samples=args.samples,
                            seed=getattr(args, "seed", 0), df=args.df, weight_corpus=weight_corpus,
                            jobs=getattr(args, "jobs", 1))
    for r in report.rows:
        if r.note:
            log.warning("%s / %s: pearson not computable (%s)", r.method, r.set_id, r.note)
    if args.hist_dir:
        hist_dir = Path(args.hist_dir)
        hist_dir.mkdir(parents=True, exist_ok=True)
        for (method, set_id), test in report.tests.items():
            name = f"{method}__{set_id}".replace(":", "_").replace("/", "_") + ".csv"
            write_output(histogram_csv(test, args.bins), str(hist_dir / name))
    text = report.to_json() if getattr(args, "format", "csv") == "json" else report.to_csv()
    write_output(text, getattr(args, "out", None))
    return 0


def cmd_correlate(args) -> int:
    _, corpus, weight_corpus = _corpora(args)
    judgements = load_judgements(args.judgements)
    groups = load_benchmark_sets(args.sets) if args.sets else [("all", None)]
    results = []
    for spec in _methods(args):
        m = method_matrix(spec, corpus, weight_corpus, jobs=getattr(args, "jobs", 1))
        for set_id, ids in groups:
            xs, ys = judged_pairs(m, judgements, ids)
            results.append({"method": spec.label, "set_id": set_id, "pearson": pearson(xs, ys),
                            "pairs": len(xs)})
    if getattr(args, "format", "csv") == "json":
        text = json.dumps([dict(r, pearson=round(r["pearson"], 6)) for r in results]) + "\n"
    else:
        text = "method,set_id,pearson,pairs\n" + "".join(
            f"{r['method']},{r['set_id']},{r['pearson']:.6f},{r['pairs']}\n" for r in results)
    write_output(text, getattr(args, "out", None))
    return 0


# -- parser ------------------------------------------------------------------------

def _global_options() -> argparse.ArgumentParser:
    # defaults are suppressed so flags given before or after the subcommand both stick
    p = argparse.ArgumentParser(add_help=False)
    S = argparse.SUPPRESS
    p.add_argument("--taxonomy", default=S, help="taxonomy edge-list file")
    p.add_argument("--corpus", default=S, help="corpus JSON Lines file")
    p.add_argument("--weight-corpus", default=S, help="corpus used for CF/AF weights and IDF (default: --corpus)")
    p.add_argument("--out", default=S, help="output file (default: stdout)")
    p.add_argument("--format", choices=["csv", "json"], default=S)
    p.add_argument("--jobs", type=int, default=S, help="worker threads for matrices and sampling")
    p.add_argument("--seed", type=int, default=S, help="random seed (default 0)")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _global_options()
    parser = argparse.ArgumentParser(prog="semsimp", parents=[common],
                                     description="Ontology-based semantic similarity and cohesion testing.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("treeify", parents=[common], help="expand a DAG scheme into a tree taxonomy")
    p.add_argument("--dag", required=True, help="DAG edge list (children may repeat)")
    p.add_argument("--separator", default="_")
    p.add_argument("--root-label", default="owl:Thing")
    p.set_defaults(func=cmd_treeify)

    p = sub.add_parser("weigh", parents=[common], help="weight and IC of every concept")
    p.add_argument("--method", required=True, help="CF, AF, TD or IIC")
    p.set_defaults(func=cmd_weigh)

    p = sub.add_parser("sim", parents=[common], help="similarity of two resources")
    p.add_argument("--method", required=True)
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.set_defaults(func=cmd_sim)

    p = sub.add_parser("matrix", parents=[common], help="pairwise similarity matrix of the corpus")
    p.add_argument("--method", required=True)
    p.set_defaults(func=cmd_matrix)

    p = sub.add_parser("cohesion", parents=[common], help="Monte-Carlo cohesion test of benchmark sets")
    p.add_argument("--method", action="append", help="repeatable; default: all 22 methods")
    p.add_argument("--sets", required=True, help="benchmark-set file")
    p.add_argument("--judgements", help="judgement CSV (adds the pearson column)")
    p.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    p.add_argument("--df", type=int, default=None, help="Student-t degrees of freedom (default: set size)")
    p.add_argument("--hist-dir", help="write null-distribution histogram CSVs here")
    p.add_argument("--bins", type=int, default=50)
    p.set_defaults(func=cmd_cohesion)

    p = sub.add_parser("correlate", parents=[common], help="Pearson correlation against judgement data")
    p.add_argument("--method", action="append", help="repeatable; default: all 22 methods")
    p.add_argument("--judgements", required=True)
    p.add_argument("--sets", help="restrict to pairs inside each benchmark set")
    p.set_defaults(func=cmd_correlate)
    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SemsimError as exc:
        print(json.dumps(exc.record(), ensure_ascii=False), file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        record = {"error": type(exc).__name__, "message": str(exc), "entity": exc.filename, "exit_code": 2}
        print(json.dumps(record, ensure_ascii=False), file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
