"""Command-line entry point: ``deptrans <subcommand> ...``.

Exit codes: 0 success, 1 usage error, 2 data error (or, for
``slog-compare``, at least one non-equivalent pair).
"""
from __future__ import annotations

import argparse
import contextlib
import json
import logging
import os
import sys
from typing import Optional, Sequence

from . import __version__
from .conllu import ConllUError, InvalidTreeError, is_projective, read_conllu, validate_tree
from .datagen import (ConfigError, GenConfig, GenerationReport, TokenCounter,
                      generate_dataset, generate_depparse, generate_simple,
                      linearize_dep_tree, relation_inventory, write_instances)
from .operations import (ALL_OPERATIONS, EdgewiseTransform, Operation, PrefixError,
                         apply_transformation, parse_prefix)
from .preprocess import (AlignmentError, LogicalFormError, atis_reorder,
                         slog_equivalent, strip_nmod)
from .stats import recursion_depth_histogram, write_histograms_csv, write_summary_json
from .unfold import to_sexpr, unfold

log = logging.getLogger("deptrans")

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2

DATA_ERRORS = (ConllUError, InvalidTreeError, LogicalFormError, AlignmentError,
               PrefixError, ConfigError, OSError, ValueError)


class Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _csv_list(text: str) -> list[str]:
    return [item.strip() for item in text.split(",") if item.strip()]


def _limit(value: Optional[int]) -> Optional[int]:
    return None if value is None or value <= 0 else value


@contextlib.contextmanager
def _output(path: Optional[str]):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            yield f


def _read_lines(path: str) -> list[str]:
    with open(path, encoding="utf-8") as f:
        return [line.rstrip("\r\n") for line in f]


def _load_corpus(args):
    return read_conllu(args.conllu, strip_subtypes=args.strip_subtypes)


def _load_transform(args) -> EdgewiseTransform:
    if args.edgewise_file:
        with open(args.edgewise_file, encoding="utf-8") as f:
            data = json.load(f)
        if isinstance(data, dict):
            return EdgewiseTransform.from_mapping(data)
        return EdgewiseTransform.from_pairs(tuple(p) for p in data)
    return parse_prefix(args.edgewise or "")


def _gen_config(args, max_out_default: Optional[int]) -> GenConfig:
    counter = TokenCounter.from_file(args.token_counts) if args.token_counts else TokenCounter()
    ops = tuple(Operation.parse(o) for o in _csv_list(args.ops)) if args.ops else ALL_OPERATIONS
    max_out = max_out_default if args.max_out is None else _limit(args.max_out)
    return GenConfig(max_relations=args.max_relations,
                     transforms_per_sentence=args.per_sentence,
                     max_input_tokens=_limit(args.max_in), max_output_tokens=max_out,
                     operation_inventory=ops, seed=args.seed, token_counter=counter)


def _log_report(report: GenerationReport, n: int) -> None:
    log.info("%d sentences, %d invalid, %d over the input limit, "
             "%d outputs dropped, %d instances written",
             report.sentences, report.invalid, report.too_long_input,
             report.dropped_output, n)


def cmd_transform(args) -> int:
    t = _load_transform(args)
    status = EXIT_OK
    for tree in _load_corpus(args):
        report = validate_tree(tree)
        if not report.ok:
            log.error("sentence %s: %s", tree.sentence_id, "; ".join(report.violations))
            print()
            status = EXIT_DATA
            continue
        if args.dump_tree:
            print(to_sexpr(unfold(tree)), file=sys.stderr)
        print(apply_transformation(tree, t))
    return status


def _run_generation(args, corpus, instances_fn, report) -> int:
    with _output(args.out) as out:
        n = write_instances(instances_fn(), out, args.format)
    _log_report(report, n)
    return EXIT_DATA if report.invalid else EXIT_OK


def cmd_generate(args) -> int:
    corpus = _load_corpus(args)
    cfg = _gen_config(args, 180)
    inventory = set(relation_inventory(corpus))
    if args.relations_file:
        inventory.update(r for r in _read_lines(args.relations_file) if r.strip())
    cfg.relation_inventory = frozenset(inventory)
    report = GenerationReport()
    return _run_generation(args, corpus,
                           lambda: generate_dataset(corpus, cfg, args.workers, report),
                           report)


def cmd_generate_simple(args) -> int:
    corpus = _load_corpus(args)
    cfg = _gen_config(args, None)
    op = Operation.parse(args.op) if args.op else None
    report = GenerationReport()
    return _run_generation(args, corpus,
                           lambda: generate_simple(corpus, cfg, op, args.workers, report),
                           report)


def cmd_linearize(args) -> int:
    corpus = _load_corpus(args)
    if args.out:
        cfg = GenConfig(max_input_tokens=None, max_output_tokens=None, seed=args.seed)
        report = GenerationReport()
        args.format = "jsonl"
        return _run_generation(args, corpus,
                               lambda: generate_depparse(corpus, cfg, args.workers, report),
                               report)
    status = EXIT_OK
    for tree in corpus:
        report = validate_tree(tree)
        if not report.ok:
            log.error("sentence %s: %s", tree.sentence_id, "; ".join(report.violations))
            print()
            status = EXIT_DATA
            continue
        print(linearize_dep_tree(tree))
    return status


def cmd_stats(args) -> int:
    corpus = _load_corpus(args)
    bad = [r for r in map(validate_tree, corpus) if not r.ok]
    for r in bad:
        log.error("sentence %s: %s", r.sentence_id, "; ".join(r.violations))
    valid = [t for t in corpus if validate_tree(t).ok]
    hists = [recursion_depth_histogram(valid, rel, per_edge=args.per_edge)
             for rel in _csv_list(args.relations)]
    os.makedirs(args.out_dir, exist_ok=True)
    with open(os.path.join(args.out_dir, "recursion_depths.csv"), "w",
              encoding="utf-8", newline="") as f:
        write_histograms_csv(hists, f)
    with open(os.path.join(args.out_dir, "summary.json"), "w", encoding="utf-8") as f:
        write_summary_json(valid, f)
    return EXIT_DATA if bad else EXIT_OK


def cmd_validate(args) -> int:
    status = EXIT_OK
    for tree in _load_corpus(args):
        report = validate_tree(tree)
        if report.ok:
            proj = "projective" if is_projective(tree) else "non-projective"
            print(f"{tree.sentence_id}\tok\t{proj}")
        else:
            print(f"{tree.sentence_id}\tinvalid\t" + "; ".join(report.violations))
            status = EXIT_DATA
    return status


def cmd_atis_reorder(args) -> int:
    sentences = _read_lines(args.src)
    forms = _read_lines(args.lf)
    result = atis_reorder(sentences, forms, iterations=args.iters,
                          conjunction_ops=_csv_list(args.conj_ops),
                          recursive=not args.top_level_only)
    with _output(args.out) as out:
        for line in result:
            out.write(line + "\n")
    return EXIT_OK


def cmd_slog_compare(args) -> int:
    first = _read_lines(args.a)
    second = _read_lines(args.b)
    if len(first) != len(second):
        raise ValueError(f"{args.a} has {len(first)} lines but {args.b} has {len(second)}")
    all_true = True
    for lineno, (x, y) in enumerate(zip(first, second), 1):
        try:
            same = slog_equivalent(x, y)
        except LogicalFormError as exc:
            raise LogicalFormError(f"line {lineno}: {exc}") from None
        all_true &= same
        print("true" if same else "false")
    return EXIT_OK if all_true else EXIT_DATA


def cmd_strip_nmod(args) -> int:
    with _output(args.out) as out:
        for line in _read_lines(args.lf):
            out.write(strip_nmod(line) + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = Parser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    common.add_argument("--workers", type=int, default=1,
                        help="worker processes for dataset generation (default 1)")
    common.add_argument("--quiet", action="store_true", help="only log errors")

    treebank = Parser(add_help=False)
    treebank.add_argument("--conllu", required=True, help="CoNLL-U input file")
    treebank.add_argument("--strip-subtypes", action="store_true",
                          help="map relation subtypes to their base (acl:relcl -> acl)")

    gen = Parser(add_help=False)
    gen.add_argument("--out", default="-", help="output file (default stdout)")
    gen.add_argument("--format", choices=("jsonl", "tsv"), default="jsonl")
    gen.add_argument("--max-relations", type=int, default=20,
                     help="maximum relations per prefix (default 20)")
    gen.add_argument("--per-sentence", type=int, default=2,
                     help="instances per sentence (default 2)")
    gen.add_argument("--max-in", type=int, default=90,
                     help="skip sentences with more input tokens (default 90; 0 = no limit)")
    gen.add_argument("--max-out", type=int, default=None,
                     help="drop outputs with at least this many tokens "
                          "(default 180 for generate, no limit for generate-simple; 0 = no limit)")
    gen.add_argument("--ops", help="comma-separated operation inventory (default: all 14)")
    gen.add_argument("--token-counts",
                     help="token<TAB>subword-count file used for the length limits")

    parser = Parser(prog="deptrans", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=Parser)

    p = sub.add_parser("transform", parents=[common, treebank],
                       help="apply one syntactic transformation to every sentence")
    p.add_argument("--edgewise", default="",
                   help='edgewise transformations, e.g. "obj=rev,nsubj=bracket"')
    p.add_argument("--edgewise-file", help="JSON object or list of [relation, operation] pairs")
    p.add_argument("--dump-tree", action="store_true",
                   help="print each unfolded tree as an s-expression to stderr")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("generate", parents=[common, treebank, gen],
                       help="write a pre-training dataset with random transformations")
    p.add_argument("--relations-file",
                   help="extra relation labels (one per line) for the relation inventory")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("generate-simple", parents=[common, treebank, gen],
                       help="write a dataset applying one operation to all relations")
    p.add_argument("--op", help="fix the operation (default: random per instance)")
    p.set_defaults(func=cmd_generate_simple)

    p = sub.add_parser("linearize", parents=[common, treebank],
                       help="print bracketed dependency linearizations")
    p.add_argument("--out", help="write a depparse-mode JSON Lines dataset instead")
    p.set_defaults(func=cmd_linearize)

    p = sub.add_parser("stats", parents=[common, treebank],
                       help="recursion-depth histograms and corpus summary")
    p.add_argument("--relations", default="nmod,xcomp",
                   help="comma-separated relations (default nmod,xcomp)")
    p.add_argument("--per-edge", action="store_true",
                   help="count every edge's depth instead of maximal chains")
    p.add_argument("--out-dir", default=".",
                   help="directory for recursion_depths.csv and summary.json (default .)")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("validate", parents=[common, treebank],
                       help="check tree well-formedness and projectivity")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("atis-reorder", parents=[common],
                       help="reorder logical-form conjuncts by IBM-1 alignment")
    p.add_argument("--src", required=True, help="tokenized sentences, one per line")
    p.add_argument("--lf", required=True, help="logical forms, one per line")
    p.add_argument("--iters", type=int, default=10, help="EM iterations (default 10)")
    p.add_argument("--conj-ops", default="and,or,intersection",
                   help="conjunction operators (default and,or,intersection)")
    p.add_argument("--top-level-only", action="store_true",
                   help="do not reorder conjunctions nested inside conjunctions")
    p.add_argument("--out", default="-", help="output file (default stdout)")
    p.set_defaults(func=cmd_atis_reorder)

    p = sub.add_parser("slog-compare", parents=[common],
                       help="order-insensitive comparison of SLOG logical forms")
    p.add_argument("--a", required=True, help="first file, one form per line")
    p.add_argument("--b", required=True, help="second file, one form per line")
    p.set_defaults(func=cmd_slog_compare)

    p = sub.add_parser("strip-nmod", parents=[common],
                       help="remove 'nmod .' from SLOG logical forms")
    p.add_argument("--lf", required=True, help="logical forms, one per line")
    p.add_argument("--out", default="-", help="output file (default stdout)")
    p.set_defaults(func=cmd_strip_nmod)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.ERROR if args.quiet else logging.INFO,
                        format="%(name)s: %(levelname)s: %(message)s", stream=sys.stderr)
    if getattr(args, "workers", 1) < 1:
        parser.error("--workers must be >= 1")
    try:
        return args.func(args)
    except DATA_ERRORS as exc:
        log.error("%s", exc)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
