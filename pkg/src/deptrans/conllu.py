"""Reading, writing and checking CoNLL-U dependency trees.

Only the syntactic words of a sentence are kept: multiword-token range
lines (``3-4``) and empty nodes (``3.1``) are skipped.
"""
from __future__ import annotations

import io
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Optional, Union

ROOT_RELATION = "root"


class ConllUError(ValueError):
    """Malformed CoNLL-U input; carries the offending line number."""

    def __init__(self, message: str, lineno: Optional[int] = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class InvalidTreeError(ValueError):
    """Raised when an operation requires a valid tree and gets another."""


@dataclass(frozen=True)
class Token:
    index: int
    form: str
    lemma: str
    head: int
    deprel: str
    upos: Optional[str] = None


@dataclass(frozen=True)
class DepTree:
    sentence_id: str
    tokens: tuple[Token, ...]

    def __len__(self) -> int:
        return len(self.tokens)

    @property
    def forms(self) -> list[str]:
        return [tok.form for tok in self.tokens]

    @cached_property
    def root(self) -> int:
        """1-based index of the (first) root token, 0 if none."""
        for tok in self.tokens:
            if tok.head == 0:
                return tok.index
        return 0

    @cached_property
    def children(self) -> dict[int, list[int]]:
        kids: dict[int, list[int]] = {tok.index: [] for tok in self.tokens}
        for tok in self.tokens:
            if tok.head in kids:
                kids[tok.head].append(tok.index)
        return kids

    @cached_property
    def relations(self) -> frozenset[str]:
        """Labels of the token-to-token edges (the root attachment excluded)."""
        return frozenset(tok.deprel for tok in self.tokens if tok.head != 0)

    def token(self, index: int) -> Token:
        return self.tokens[index - 1]


def strip_subtype(deprel: str) -> str:
    return deprel.split(":", 1)[0]


def _lines(source: Union[str, Iterable[str]]) -> Iterable[str]:
    if isinstance(source, str):
        return io.StringIO(source)
    return source


def parse_conllu(source: Union[str, Iterable[str]],
                 strip_subtypes: bool = False) -> Iterator[DepTree]:
    """Parse CoNLL-U text (a string or an iterable of lines) lazily.

    Structural problems (cycles, several roots, ...) are not checked here;
    use :func:`validate_tree` for that.
    """
    tokens: list[Token] = []
    sent_id: Optional[str] = None
    counter = 0

    def finish() -> DepTree:
        nonlocal counter
        counter += 1
        return DepTree(sent_id if sent_id is not None else str(counter),
                       tuple(tokens))

    for lineno, line in enumerate(_lines(source), 1):
        line = line.rstrip("\r\n")
        if not line.strip():
            if tokens:
                yield finish()
            tokens, sent_id = [], None
            continue
        if line.startswith("#"):
            key, sep, value = line[1:].partition("=")
            if sep and key.strip() == "sent_id":
                sent_id = value.strip()
            continue
        cols = line.split("\t")
        if len(cols) != 10:
            raise ConllUError(f"expected 10 tab-separated columns, got {len(cols)}",
                              lineno)
        ident = cols[0]
        if "-" in ident or "." in ident:
            continue
        try:
            index = int(ident)
        except ValueError:
            raise ConllUError(f"non-integer ID {ident!r}", lineno) from None
        try:
            head = int(cols[6])
        except ValueError:
            raise ConllUError(f"non-integer HEAD {cols[6]!r}", lineno) from None
        form = cols[1]
        lemma = cols[2] if cols[2] != "_" else form
        deprel = strip_subtype(cols[7]) if strip_subtypes else cols[7]
        upos = cols[3] if cols[3] != "_" else None
        tokens.append(Token(index, form, lemma, head, deprel, upos))
    if tokens:
        yield finish()


def read_conllu(path, strip_subtypes: bool = False) -> list[DepTree]:
    with open(path, encoding="utf-8") as f:
        try:
            return list(parse_conllu(f, strip_subtypes=strip_subtypes))
        except ConllUError as exc:
            located = ConllUError(f"{path}: {exc}")
            located.lineno = exc.lineno
            raise located from None


def serialize_conllu(trees: Iterable[DepTree]) -> str:
    """Render trees back to CoNLL-U; columns not modelled by :class:`Token` are ``_``."""
    out = []
    for tree in trees:
        out.append(f"# sent_id = {tree.sentence_id}\n")
        for tok in tree.tokens:
            cols = [str(tok.index), tok.form, tok.lemma, tok.upos or "_", "_", "_",
                    str(tok.head), tok.deprel, "_", "_"]
            out.append("\t".join(cols) + "\n")
        out.append("\n")
    return "".join(out)


@dataclass
class ValidationReport:
    sentence_id: str
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok


def validate_tree(tree: DepTree) -> ValidationReport:
    report = ValidationReport(tree.sentence_id)
    problems = report.violations
    n = len(tree.tokens)
    if n == 0:
        problems.append("empty sentence")
        return report
    for pos, tok in enumerate(tree.tokens, 1):
        if tok.index != pos:
            problems.append(f"token {pos}: non-contiguous index {tok.index}")
        if not tok.form:
            problems.append(f"token {tok.index}: empty form")
        if not tok.deprel or tok.deprel == "_":
            problems.append(f"token {tok.index}: missing deprel")
        if tok.head == tok.index:
            problems.append(f"token {tok.index}: self-loop")
        elif not 0 <= tok.head <= n:
            problems.append(f"token {tok.index}: head {tok.head} out of range")
    if problems:
        # the checks below assume a well-indexed token list
        return report

    roots = [tok.index for tok in tree.tokens if tok.head == 0]
    if not roots:
        problems.append("no root")
    elif len(roots) > 1:
        problems.append("multiple roots")

    # every token must reach head 0 without revisiting a token
    heads = [0] + [tok.head for tok in tree.tokens]
    state = [0] * (n + 1)  # 0 unseen, 1 on current path, 2 reaches root
    has_cycle = False
    for start in range(1, n + 1):
        path = []
        node = start
        while node != 0 and state[node] == 0:
            state[node] = 1
            path.append(node)
            node = heads[node]
        if node != 0 and state[node] == 1:
            has_cycle = True
        for p in path:
            state[p] = 2
    if has_cycle:
        problems.append("cycle")
    return report


def require_valid(tree: DepTree) -> None:
    report = validate_tree(tree)
    if not report.ok:
        raise InvalidTreeError(
            f"sentence {tree.sentence_id}: " + "; ".join(report.violations))


def is_projective(tree: DepTree) -> bool:
    """True iff every subtree covers a contiguous stretch of the sentence.

    Equivalently: for each edge, every token strictly between head and
    dependent descends from the head.
    """
    require_valid(tree)
    n = len(tree.tokens)
    lo = list(range(n + 1))
    hi = list(range(n + 1))
    size = [1] * (n + 1)
    for node in reversed(preorder(tree)):
        head = tree.tokens[node - 1].head
        if hi[node] - lo[node] + 1 != size[node]:
            return False
        if head:
            lo[head] = min(lo[head], lo[node])
            hi[head] = max(hi[head], hi[node])
            size[head] += size[node]
    return True


def preorder(tree: DepTree) -> list[int]:
    order = []
    stack = [tree.root]
    children = tree.children
    while stack:
        node = stack.pop()
        order.append(node)
        stack.extend(children[node])
    return order
