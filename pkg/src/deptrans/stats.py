"""Treebank statistics: recursion depths per relation, label counts, projectivity.

A *chain* for relation R is a path of R-edges where each edge's dependent
heads the next. By default the histogram counts maximal chains (paths that
cannot be extended at either end) by their number of edges. When
R-edges branch, every maximal path is counted, so edges shared by
several paths are counted more than once. ``per_edge=True`` instead
records, for every R-edge, its depth below the top of its chain.
"""
from __future__ import annotations

import csv
import json
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Optional, TextIO

from .conllu import DepTree, is_projective


@dataclass
class DepthHistogram:
    relation: str
    counts: dict[int, int] = field(default_factory=dict)

    def add(self, depth: int, n: int = 1) -> None:
        self.counts[depth] = self.counts.get(depth, 0) + n

    def merge(self, other: "DepthHistogram") -> "DepthHistogram":
        if other.relation != self.relation:
            raise ValueError("cannot merge histograms of different relations")
        for depth, n in other.counts.items():
            self.add(depth, n)
        return self

    def as_dict(self) -> dict[int, int]:
        return dict(sorted(self.counts.items()))


def _tree_depths(tree: DepTree, relation: str, per_edge: bool) -> list[int]:
    tokens = tree.tokens

    def incoming_is_r(index: int) -> bool:
        tok = tokens[index - 1]
        return tok.head != 0 and tok.deprel == relation

    depths = []
    if per_edge:
        for tok in tokens:
            if incoming_is_r(tok.index):
                depth = 1
                node = tok.head
                while incoming_is_r(node):
                    depth += 1
                    node = tokens[node - 1].head
                depths.append(depth)
        return depths

    has_r_child = set()
    for tok in tokens:
        if incoming_is_r(tok.index):
            has_r_child.add(tok.head)
    for tok in tokens:
        # every maximal chain ends in an R-dependent with no R-dependent of its own
        if incoming_is_r(tok.index) and tok.index not in has_r_child:
            depth = 1
            node = tok.head
            while incoming_is_r(node):
                depth += 1
                node = tokens[node - 1].head
            depths.append(depth)
    return depths


def recursion_depth_histogram(corpus: Iterable[DepTree], relation: str,
                              per_edge: bool = False) -> DepthHistogram:
    hist = DepthHistogram(relation)
    for tree in corpus:
        for depth in _tree_depths(tree, relation, per_edge):
            hist.add(depth)
    return hist


def relation_frequencies(corpus: Iterable[DepTree]) -> dict[str, int]:
    counts: Counter[str] = Counter()
    for tree in corpus:
        counts.update(tok.deprel for tok in tree.tokens)
    return dict(counts)


def projectivity_rate(corpus: Iterable[DepTree]) -> Optional[float]:
    """Share of projective trees, or None for an empty corpus."""
    total = projective = 0
    for tree in corpus:
        total += 1
        projective += is_projective(tree)
    if total == 0:
        return None
    return projective / total


def write_histograms_csv(hists: Iterable[DepthHistogram], stream: TextIO) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["relation", "depth", "count"])
    for hist in hists:
        for depth, n in hist.as_dict().items():
            writer.writerow([hist.relation, depth, n])


def summary(corpus: list[DepTree]) -> dict:
    rate = projectivity_rate(corpus)
    return {
        "sentences": len(corpus),
        "tokens": sum(len(t) for t in corpus),
        "projectivity_rate": rate if rate is not None else "no data",
        "relation_frequencies": dict(sorted(relation_frequencies(corpus).items())),
    }


def write_summary_json(corpus: list[DepTree], stream: TextIO) -> None:
    json.dump(summary(corpus), stream, indent=2, ensure_ascii=False)
    stream.write("\n")
