"""IBM Model 1 word alignment (no NULL source word) trained with EM."""
from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

Pair = tuple[Sequence[str], Sequence[str]]


class AlignmentError(ValueError):
    pass


@dataclass
class AlignmentModel:
    # t[e][f] = p(f | e); e is a source (sentence) word, f a target (logical form) token
    t: dict[str, dict[str, float]]
    log_likelihoods: list[float] = field(default_factory=list)

    def prob(self, f: str, e: str) -> float:
        return self.t.get(e, {}).get(f, 0.0)


def _check(pairs: Sequence[Pair]) -> None:
    if not pairs:
        raise AlignmentError("empty corpus")
    for k, (src, tgt) in enumerate(pairs):
        if not src or not tgt:
            side = "source" if not src else "target"
            raise AlignmentError(f"pair {k}: empty {side} side")


def log_likelihood(t: dict[str, dict[str, float]], pairs: Sequence[Pair]) -> float:
    """sum_pairs sum_j log( (1/l) sum_i t(f_j | e_i) ), constant terms dropped."""
    total = 0.0
    for src, tgt in pairs:
        rows = [t[e] for e in src]
        l = len(src)
        for f in tgt:
            s = sum(row.get(f, 0.0) for row in rows)
            total += math.log(s / l) if s > 0 else -math.inf
    return total


def train_ibm1(pairs: Sequence[Pair], iterations: int = 10) -> AlignmentModel:
    _check(pairs)
    if iterations < 1:
        raise AlignmentError("iterations must be >= 1")
    cooc: dict[str, set[str]] = defaultdict(set)
    for src, tgt in pairs:
        for e in src:
            cooc[e].update(tgt)
    t = {e: dict.fromkeys(fs, 1.0 / len(fs)) for e, fs in cooc.items()}
    history = [log_likelihood(t, pairs)]

    for _ in range(iterations):
        counts: dict[str, dict[str, float]] = {e: dict.fromkeys(fs, 0.0) for e, fs in t.items()}
        for src, tgt in pairs:
            rows = [t[e] for e in src]
            for f in tgt:
                probs = [row[f] for row in rows]
                z = sum(probs)
                if z == 0.0:
                    continue
                for e, p in zip(src, probs):
                    counts[e][f] += p / z
        for e, row in counts.items():
            norm = sum(row.values())
            if norm > 0:
                t[e] = {f: c / norm for f, c in row.items()}
        history.append(log_likelihood(t, pairs))
    return AlignmentModel(t, history)


def posterior_alignments(model: AlignmentModel, src: Sequence[str],
                         tgt: Sequence[str]) -> np.ndarray:
    """Matrix A (len(src) x len(tgt)); A[i, j] = p(target j aligned to source i)."""
    a = np.array([[model.prob(f, e) for f in tgt] for e in src], dtype=float)
    a = a.reshape(len(src), len(tgt))
    col = a.sum(axis=0)
    unknown = col == 0
    a[:, unknown] = 1.0 / len(src) if len(src) else 0.0
    col[unknown] = 1.0
    return a / col
