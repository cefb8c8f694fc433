"""Preprocessing for the downstream semantic-parsing data (ATIS, SLOG)."""
from __future__ import annotations

from typing import Iterable, Sequence

from .ibm1 import AlignmentError, AlignmentModel, posterior_alignments, train_ibm1
from .logical_form import (DEFAULT_CONJUNCTIONS, LFNode, LogicalFormError, parse,
                           render, render_tokens, reorder_conjuncts, slog_equivalent,
                           strip_nmod)


def atis_reorder(sentences: Sequence[str], logical_forms: Sequence[str],
                 iterations: int = 10,
                 conjunction_ops: Iterable[str] = DEFAULT_CONJUNCTIONS,
                 recursive: bool = True) -> list[str]:
    """Align sentences to logical forms with IBM-1 and reorder the conjuncts."""
    if len(sentences) != len(logical_forms):
        raise AlignmentError(f"{len(sentences)} sentences but "
                             f"{len(logical_forms)} logical forms")
    trees = [parse(text, side=f"logical form {k}")
             for k, text in enumerate(logical_forms, 1)]
    pairs = [(s.split(), render_tokens(t)) for s, t in zip(sentences, trees)]
    model = train_ibm1(pairs, iterations)
    ops = frozenset(conjunction_ops)
    out = []
    for (src, tgt), tree in zip(pairs, trees):
        a = posterior_alignments(model, src, tgt)
        out.append(render(reorder_conjuncts(tree, a, ops, recursive=recursive)))
    return out


__all__ = [
    "AlignmentError", "AlignmentModel", "DEFAULT_CONJUNCTIONS", "LFNode",
    "LogicalFormError", "atis_reorder", "parse", "posterior_alignments", "render",
    "reorder_conjuncts", "slog_equivalent", "strip_nmod", "train_ibm1",
]
