"""Random transformations and pre-training datasets.

Three data modes are supported:

``step``
    sampled edgewise transforms (relations present in the sentence plus
    some absent ones), output computed by the transduction kernel;
``simple``
    one operation applied to every relation (``ignore-dep`` excluded);
``depparse``
    the bracketed dependency linearization, no prefix.

Every sentence gets its own random stream derived from ``(seed,
sentence ordinal)``, so the dataset does not depend on the number of
worker processes.

Sampling of a step-mode transform (``max_relations`` = M)::

    P   = relations in the sentence that are in the inventory
    k_p ~ U{1 .. min(|P|, M)}            (0 if P is empty)
    k_a ~ U{0 .. min(M - k_p, |absent|)}
    relations drawn without replacement, present ones first,
    operations drawn uniformly from the operation inventory.

The split into present/absent counts is a modelling choice; any other
distribution with the same support would be equally faithful.
"""
from __future__ import annotations

import json
import logging
import multiprocessing
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np

from .conllu import (DepTree, ROOT_RELATION, is_projective, require_valid,
                     validate_tree)
from .operations import (ALL_OPERATIONS, EdgewiseTransform, Operation,
                         serialize_prefix, transform_tokens)

log = logging.getLogger(__name__)

STEP, SIMPLE, DEPPARSE = "step", "simple", "depparse"


class ConfigError(ValueError):
    pass


class TokenCounter:
    """Counts whitespace tokens, optionally weighted by per-token subword counts.

    The sidecar file maps a surface token to its number of subword
    pieces, one ``token<TAB>count`` per line; unknown tokens count as 1.
    """

    def __init__(self, subword_counts: Optional[dict[str, int]] = None):
        self.subword_counts = subword_counts or {}

    @classmethod
    def from_file(cls, path) -> "TokenCounter":
        counts = {}
        with open(path, encoding="utf-8") as f:
            for lineno, line in enumerate(f, 1):
                line = line.rstrip("\n")
                if not line:
                    continue
                tok, sep, num = line.rpartition("\t")
                if not sep:
                    raise ConfigError(f"{path}:{lineno}: expected token<TAB>count")
                counts[tok] = int(num)
        return cls(counts)

    def count(self, tokens: Sequence[str]) -> int:
        if not self.subword_counts:
            return len(tokens)
        get = self.subword_counts.get
        return sum(get(tok, 1) for tok in tokens)


@dataclass
class GenConfig:
    max_relations: int = 20
    transforms_per_sentence: int = 2
    max_input_tokens: Optional[int] = 90
    # outputs with this many tokens or more are dropped; None disables
    max_output_tokens: Optional[int] = 180
    operation_inventory: tuple[Operation, ...] = ALL_OPERATIONS
    relation_inventory: Optional[frozenset[str]] = None
    seed: int = 0
    token_counter: TokenCounter = field(default_factory=TokenCounter)

    def __post_init__(self):
        if self.max_relations < 1:
            raise ConfigError("max_relations must be >= 1")
        if self.transforms_per_sentence < 1:
            raise ConfigError("transforms_per_sentence must be >= 1")
        for name in ("max_input_tokens", "max_output_tokens"):
            value = getattr(self, name)
            if value is not None and value < 1:
                raise ConfigError(f"{name} must be >= 1")
        if not self.operation_inventory:
            raise ConfigError("empty operation inventory")
        self.operation_inventory = tuple(sorted(set(self.operation_inventory),
                                                key=lambda op: op.code))


@dataclass
class DatasetInstance:
    prefix: EdgewiseTransform
    input: list[str]
    output: str
    sent_id: str
    mode: str
    projective: bool

    def prefix_pairs(self) -> list[list[str]]:
        pairs = [[rel, op.value] for rel, op in self.prefix.pairs]
        if self.prefix.default is not Operation.CONCAT:
            pairs.insert(0, ["*", self.prefix.default.value])
        return pairs

    def to_json(self) -> str:
        record = {
            "prefix": self.prefix_pairs(),
            "input": self.input,
            "output": self.output,
            "meta": {"sent_id": self.sent_id, "mode": self.mode,
                     "projective": self.projective},
        }
        return json.dumps(record, ensure_ascii=False)

    def to_tsv(self) -> str:
        return "\t".join([" ".join(serialize_prefix(self.prefix)),
                          " ".join(self.input), self.output])

    @classmethod
    def from_json(cls, line: str) -> "DatasetInstance":
        rec = json.loads(line)
        default = Operation.CONCAT
        pairs = []
        for rel, op in rec["prefix"]:
            if rel == "*":
                default = Operation.parse(op)
            else:
                pairs.append((rel, op))
        meta = rec["meta"]
        return cls(EdgewiseTransform.from_pairs(pairs, default), rec["input"],
                   rec["output"], meta["sent_id"], meta["mode"], meta["projective"])


@dataclass
class GenerationReport:
    sentences: int = 0
    invalid: int = 0
    too_long_input: int = 0
    dropped_output: int = 0
    instances: int = 0

    def merge(self, other: "GenerationReport") -> None:
        for name in ("sentences", "invalid", "too_long_input", "dropped_output",
                     "instances"):
            setattr(self, name, getattr(self, name) + getattr(other, name))


def sentence_rng(seed: int, ordinal: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(ordinal,)))


def relation_inventory(corpus: Iterable[DepTree]) -> frozenset[str]:
    rels = set()
    for tree in corpus:
        rels.update(tree.relations)
    rels.discard(ROOT_RELATION)
    return frozenset(rels)


def sample_transformation(tree: DepTree, rng: np.random.Generator, cfg: GenConfig,
                          inventory: Optional[Sequence[str]] = None) -> EdgewiseTransform:
    """Draw one random edgewise transform for ``tree``.

    ``inventory`` is the sorted relation inventory; it defaults to
    ``cfg.relation_inventory`` (or, lacking that, the tree's own relations).
    """
    if inventory is None:
        source = cfg.relation_inventory
        if source is None:
            source = relation_inventory([tree])
        inventory = sorted(source)
    if not inventory:
        raise ConfigError("empty relation inventory")
    present_set = tree.relations
    present = [rel for rel in inventory if rel in present_set]
    absent = [rel for rel in inventory if rel not in present_set]
    limit = cfg.max_relations

    chosen: list[str] = []
    if present:
        k_p = int(rng.integers(1, min(len(present), limit) + 1))
        chosen.extend(present[i] for i in rng.choice(len(present), k_p, replace=False))
    k_a = int(rng.integers(0, min(limit - len(chosen), len(absent)) + 1))
    if k_a:
        chosen.extend(absent[i] for i in rng.choice(len(absent), k_a, replace=False))
    ops = cfg.operation_inventory
    picks = rng.integers(0, len(ops), size=len(chosen))
    return EdgewiseTransform(tuple((rel, ops[i]) for rel, i in zip(chosen, picks)))


def linearize_dep_tree(tree: DepTree) -> str:
    """``( head rel1 child1 ... relm childm )`` with dependents in surface order."""
    require_valid(tree)
    children = tree.children
    out: list[str] = []

    def render(index: int) -> None:
        tok = tree.token(index)
        kids = children[index]
        if not kids:
            out.append(tok.form)
            return
        out.extend(["(", tok.form])
        for d in kids:
            out.append(tree.token(d).deprel)
            render(d)
        out.append(")")

    render(tree.root)
    return " ".join(out)


# --- per-sentence work units (top-level so worker processes can pickle them)

_STATE: dict = {}


def _init_worker(mode: str, cfg: GenConfig, inventory: tuple[str, ...],
                 fixed_op: Optional[Operation]) -> None:
    _STATE.update(mode=mode, cfg=cfg, inventory=inventory, fixed_op=fixed_op)


def _work(item: tuple[int, DepTree]) -> tuple[list[DatasetInstance], GenerationReport]:
    ordinal, tree = item
    return _instances_for(ordinal, tree, _STATE["mode"], _STATE["cfg"],
                          _STATE["inventory"], _STATE["fixed_op"])


def _instances_for(ordinal: int, tree: DepTree, mode: str, cfg: GenConfig,
                   inventory: Sequence[str], fixed_op: Optional[Operation]
                   ) -> tuple[list[DatasetInstance], GenerationReport]:
    report = GenerationReport(sentences=1)
    violations = validate_tree(tree).violations
    if violations:
        log.warning("skipping invalid sentence %s: %s", tree.sentence_id,
                    "; ".join(violations))
        report.invalid = 1
        return [], report
    counter = cfg.token_counter
    forms = tree.forms
    if cfg.max_input_tokens is not None and counter.count(forms) > cfg.max_input_tokens:
        report.too_long_input = 1
        return [], report
    projective = is_projective(tree)

    if mode == DEPPARSE:
        out = linearize_dep_tree(tree)
        report.instances = 1
        return [DatasetInstance(EdgewiseTransform(), forms, out, tree.sentence_id,
                                mode, projective)], report

    rng = sentence_rng(cfg.seed, ordinal)
    simple_ops = [op for op in cfg.operation_inventory if op is not Operation.IGNORE_DEP]
    if mode == SIMPLE and not simple_ops and fixed_op is None:
        raise ConfigError("simple mode needs an operation other than ignore-dep")
    instances = []
    for _ in range(cfg.transforms_per_sentence):
        if mode == STEP:
            prefix = sample_transformation(tree, rng, cfg, inventory)
        else:
            op = fixed_op if fixed_op is not None else \
                simple_ops[int(rng.integers(0, len(simple_ops)))]
            prefix = EdgewiseTransform.uniform(op)
        tokens = transform_tokens(tree, prefix, check=False)
        if cfg.max_output_tokens is not None and \
                counter.count(tokens) >= cfg.max_output_tokens:
            report.dropped_output += 1
            continue
        instances.append(DatasetInstance(prefix, forms, " ".join(tokens),
                                         tree.sentence_id, mode, projective))
    report.instances = len(instances)
    return instances, report


def _generate(corpus: Sequence[DepTree], cfg: GenConfig, mode: str,
              fixed_op: Optional[Operation] = None, workers: int = 1,
              report: Optional[GenerationReport] = None,
              chunksize: int = 64) -> Iterator[DatasetInstance]:
    corpus = list(corpus)
    if mode == STEP:
        source = cfg.relation_inventory
        if source is None:
            source = relation_inventory(corpus)
        inventory = tuple(sorted(source))
        if not inventory and corpus:
            raise ConfigError("empty relation inventory")
    else:
        inventory = ()
    report = report if report is not None else GenerationReport()
    items = enumerate(corpus)
    if workers <= 1 or len(corpus) < 2:
        for ordinal, tree in items:
            instances, rep = _instances_for(ordinal, tree, mode, cfg, inventory, fixed_op)
            report.merge(rep)
            yield from instances
        return
    ctx = multiprocessing.get_context("fork" if "fork" in multiprocessing.get_all_start_methods()
                                      else "spawn")
    with ctx.Pool(workers, initializer=_init_worker,
                  initargs=(mode, cfg, inventory, fixed_op)) as pool:
        # imap keeps sentence-ordinal order whatever the completion order
        for instances, rep in pool.imap(_work, items, chunksize=chunksize):
            report.merge(rep)
            yield from instances


def generate_dataset(corpus: Sequence[DepTree], cfg: GenConfig, workers: int = 1,
                     report: Optional[GenerationReport] = None) -> Iterator[DatasetInstance]:
    return _generate(corpus, cfg, STEP, workers=workers, report=report)


def generate_simple(corpus: Sequence[DepTree], cfg: GenConfig,
                    op: Optional[Operation] = None, workers: int = 1,
                    report: Optional[GenerationReport] = None) -> Iterator[DatasetInstance]:
    if op is Operation.IGNORE_DEP:
        raise ConfigError("ignore-dep is excluded from simple mode")
    return _generate(corpus, cfg, SIMPLE, fixed_op=op, workers=workers, report=report)


def generate_depparse(corpus: Sequence[DepTree], cfg: GenConfig, workers: int = 1,
                      report: Optional[GenerationReport] = None) -> Iterator[DatasetInstance]:
    return _generate(corpus, cfg, DEPPARSE, workers=workers, report=report)


def write_instances(instances: Iterable[DatasetInstance], stream, fmt: str = "jsonl") -> int:
    n = 0
    for inst in instances:
        stream.write(inst.to_json() if fmt == "jsonl" else inst.to_tsv())
        stream.write("\n")
        n += 1
    return n
