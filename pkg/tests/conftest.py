import os
import random

import pytest

from deptrans.conllu import DepTree, Token, parse_conllu

DATA = os.path.join(os.path.dirname(__file__), "data")

T_CAT_CONLLU = (
    "# sent_id = cat\n"
    "1\tMary\tMary\tPROPN\t_\t_\t2\tnsubj\t_\t_\n"
    "2\tsaw\tsee\tVERB\t_\t_\t0\troot\t_\t_\n"
    "3\ta\ta\tDET\t_\t_\t4\tdet\t_\t_\n"
    "4\tcat\tcat\tNOUN\t_\t_\t2\tobj\t_\t_\n"
    "\n"
)

# arcs 1<-3 and 2<-4 cross
NONPROJ_CONLLU = (
    "# sent_id = crossing\n"
    "1\tw1\tw1\tX\t_\t_\t3\tobj\t_\t_\n"
    "2\tw2\tw2\tX\t_\t_\t4\tnmod\t_\t_\n"
    "3\tw3\tw3\tX\t_\t_\t0\troot\t_\t_\n"
    "4\tw4\tw4\tX\t_\t_\t3\tobl\t_\t_\n"
    "\n"
)

UD_RELATIONS = [
    "acl", "acl:relcl", "advcl", "advmod", "amod", "appos", "aux", "aux:pass",
    "case", "cc", "ccomp", "compound", "conj", "cop", "csubj", "dep", "det",
    "discourse", "expl", "fixed", "flat", "iobj", "mark", "nmod", "nmod:poss",
    "nsubj", "nsubj:pass", "nummod", "obj", "obl", "obl:tmod", "parataxis",
    "punct", "xcomp",
]


def make_tree(heads, rels=None, sent_id="t", forms=None):
    """Build a DepTree from 1-based heads (0 = root)."""
    n = len(heads)
    forms = forms or [f"w{i}" for i in range(1, n + 1)]
    rels = rels or ["dep" if h else "root" for h in heads]
    return DepTree(sent_id, tuple(
        Token(i, forms[i - 1], forms[i - 1].upper(), h, r)
        for i, (h, r) in enumerate(zip(heads, rels), 1)))


def random_heads(n, rng, projective):
    if projective:
        heads = [0] * n

        def build(lo, hi, parent):
            # tokens lo..hi (1-based, inclusive) form one subtree under parent
            if lo > hi:
                return
            r = rng.randint(lo, hi)
            heads[r - 1] = parent
            for a, b in _random_split(lo, r - 1, rng) + _random_split(r + 1, hi, rng):
                build(a, b, r)

        build(1, n, 0)
        return heads
    order = list(range(1, n + 1))
    rng.shuffle(order)
    heads = [0] * n
    for k, tok in enumerate(order[1:], 1):
        heads[tok - 1] = order[rng.randrange(k)]
    return heads


def _random_split(lo, hi, rng):
    spans = []
    start = lo
    while start <= hi:
        end = rng.randint(start, hi)
        spans.append((start, end))
        start = end + 1
    return spans


def random_tree(n, rng, projective=True, relations=UD_RELATIONS, sent_id="r"):
    heads = random_heads(n, rng, projective)
    rels = [rng.choice(relations) if h else "root" for h in heads]
    forms = [rng.choice(["the", "a", "cat", "saw", "of", "and", "big", ",", "ran"]) + str(i)
             for i in range(1, n + 1)]
    return make_tree(heads, rels, sent_id, forms)


def synthetic_corpus(size, seed, mean_len=20, nonprojective_share=0.1):
    rng = random.Random(seed)
    corpus = []
    for k in range(size):
        n = max(1, min(60, int(rng.gauss(mean_len, 8))))
        proj = rng.random() >= nonprojective_share
        corpus.append(random_tree(n, rng, projective=proj, sent_id=f"s{k}"))
    return corpus


@pytest.fixture
def t_cat():
    return next(parse_conllu(T_CAT_CONLLU))


@pytest.fixture
def t_nonproj():
    return next(parse_conllu(NONPROJ_CONLLU))


@pytest.fixture
def rng():
    return random.Random(1234)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(RESULTS):
        status, detail = RESULTS[n]
        terminalreporter.write_line(f"criterion {n:>2}: {status}  {detail}")
