"""Edgewise string operations and their evaluation over unfolded trees.

Every internal node of an unfolded tree combines two token sequences: the
*head* side (the running phrase around the head word) and the *dep* side
(the dependent's phrase). An :class:`EdgewiseTransform` picks the
operation per relation label; labels it does not mention fall back to
its default, ``concat`` unless stated otherwise.

Two evaluators produce identical strings:

* :func:`evaluate` walks an :class:`AnnotatedNode` tree and is the
  readable reference;
* :func:`apply_transformation` calls the flat kernel in
  :mod:`deptrans.kernel` (compiled when available).
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Union

from .conllu import DepTree, require_valid
from .unfold import LEFT, Leaf, Node, UnfoldedTree, unfold


class Operation(enum.Enum):
    CONCAT = "concat"
    REV = "rev"
    CONCAT_REL = "concat-rel"
    REVL_REL = "revl-rel"
    BRACKET = "bracket"
    BR_INVERT = "br-invert"
    BRACKET_2 = "bracket-2"
    BRACKET_2_INV = "bracket-2-inv"
    BRACKET_3 = "bracket-3"
    BRACKET_4 = "bracket-4"
    BRACKET_5 = "bracket-5"
    TRIPLE = "triple"
    TRIPLE_INV = "triple-inv"
    IGNORE_DEP = "ignore-dep"

    @property
    def code(self) -> int:
        return _CODES[self]

    @classmethod
    def parse(cls, name: str) -> "Operation":
        try:
            return cls(name.strip().lower())
        except ValueError:
            known = ", ".join(op.value for op in cls)
            raise ValueError(f"unknown operation {name!r} (known: {known})") from None

    def __str__(self) -> str:
        return self.value


ALL_OPERATIONS: tuple[Operation, ...] = tuple(Operation)
# kernel opcodes follow declaration order
_CODES = {op: i for i, op in enumerate(ALL_OPERATIONS)}


class Position(enum.Enum):
    """Where a bracket-5 argument sits among its head's bracket-5 arguments."""

    ONLY = "only"
    FIRST = "first"
    MIDDLE = "middle"
    LAST = "last"


def bracket5_position(rank: int, total: int) -> Position:
    if total == 1:
        return Position.ONLY
    if rank == 0:
        return Position.FIRST
    if rank == total - 1:
        return Position.LAST
    return Position.MIDDLE


class PrefixError(ValueError):
    pass


def _check_symbol(s: str, what: str) -> None:
    if not s or "=" in s or any(ch.isspace() for ch in s):
        raise PrefixError(f"{what} {s!r} cannot be serialized (empty, '=' or whitespace)")


@dataclass(frozen=True)
class EdgewiseTransform:
    """Ordered (relation, operation) pairs plus the operation for unlisted relations.

    A non-``concat`` default is how uniform ("simple mode") transforms are
    expressed; the data-generation prefixes always use the ``concat``
    default.
    """

    pairs: tuple[tuple[str, Operation], ...] = ()
    default: Operation = Operation.CONCAT

    def __post_init__(self):
        seen = set()
        for rel, op in self.pairs:
            if rel in seen:
                raise ValueError(f"relation {rel!r} listed twice")
            if not isinstance(op, Operation):
                raise TypeError(f"operation for {rel!r} must be an Operation, got {op!r}")
            seen.add(rel)
        object.__setattr__(self, "_table", dict(self.pairs))

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[str, Union[str, Operation]]],
                   default: Union[str, Operation] = Operation.CONCAT) -> "EdgewiseTransform":
        def as_op(op):
            return op if isinstance(op, Operation) else Operation.parse(op)
        return cls(tuple((rel, as_op(op)) for rel, op in pairs), as_op(default))

    @classmethod
    def from_mapping(cls, mapping: Mapping[str, Union[str, Operation]]) -> "EdgewiseTransform":
        return cls.from_pairs(mapping.items())

    @classmethod
    def uniform(cls, op: Union[str, Operation]) -> "EdgewiseTransform":
        return cls.from_pairs((), default=op)

    def lookup(self, relation: str) -> Operation:
        return self._table.get(relation, self.default)

    @property
    def relations(self) -> tuple[str, ...]:
        return tuple(rel for rel, _ in self.pairs)

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    def without(self, relation: str) -> "EdgewiseTransform":
        return EdgewiseTransform(tuple(p for p in self.pairs if p[0] != relation),
                                 self.default)

    def with_pair(self, relation: str, op: Operation) -> "EdgewiseTransform":
        return EdgewiseTransform(self.without(relation).pairs + ((relation, op),),
                                 self.default)


def serialize_prefix(t: EdgewiseTransform) -> list[str]:
    """``[(obj, rev), (nsubj, bracket)]`` -> ``["obj=rev", "nsubj=bracket"]``.

    A uniform transform serializes to its bare operation name.
    """
    tokens = []
    if t.default is not Operation.CONCAT:
        tokens.append(t.default.value)
    for rel, op in t.pairs:
        _check_symbol(rel, "relation")
        tokens.append(f"{rel}={op.value}")
    return tokens


def parse_prefix(text: Union[str, Iterable[str]]) -> EdgewiseTransform:
    """Inverse of :func:`serialize_prefix`; commas and whitespace both separate pairs."""
    if isinstance(text, str):
        items = text.replace(",", " ").split()
    else:
        items = [tok for tok in text if tok]
    pairs = []
    default = Operation.CONCAT
    for item in items:
        rel, sep, op = item.partition("=")
        if not sep:
            try:
                default = Operation.parse(item)
            except ValueError:
                raise PrefixError(f"malformed edgewise pair {item!r}") from None
            continue
        if not rel or not op:
            raise PrefixError(f"malformed edgewise pair {item!r}")
        try:
            pairs.append((rel, Operation.parse(op)))
        except ValueError as exc:
            raise PrefixError(str(exc)) from None
    try:
        return EdgewiseTransform(tuple(pairs), default)
    except ValueError as exc:
        raise PrefixError(str(exc)) from None


@dataclass(frozen=True)
class AnnotatedNode:
    node: Node
    operation: Operation
    left: "AnnotatedTree"
    right: "AnnotatedTree"
    position: Optional[Position] = None  # set for bracket-5 nodes only

    @property
    def relation(self) -> str:
        return self.node.relation

    @property
    def head_side(self) -> str:
        return self.node.head_side


AnnotatedTree = Union[Leaf, AnnotatedNode]


def annotate(u: UnfoldedTree, t: EdgewiseTransform) -> AnnotatedTree:
    if isinstance(u, Leaf):
        return u
    # walk down the head spine: all nodes unfolded from the same head word
    spine = []
    x: UnfoldedTree = u
    while isinstance(x, Node):
        spine.append(x)
        x = x.head_child
    spine.reverse()  # inner to outer
    ops = [t.lookup(node.relation) for node in spine]
    total = ops.count(Operation.BRACKET_5)
    rank = 0
    current: AnnotatedTree = x
    for node, op in zip(spine, ops):
        position = None
        if op is Operation.BRACKET_5:
            position = bracket5_position(rank, total)
            rank += 1
        dep = annotate(node.dep_child, t)
        if node.head_side == LEFT:
            current = AnnotatedNode(node, op, current, dep, position)
        else:
            current = AnnotatedNode(node, op, dep, current, position)
    return current


def combine(op: Operation, position: Optional[Position], head: list[str],
            dep: list[str], dep_is_left: bool, label: str, head_lemma: str,
            dep_lemma: str) -> list[str]:
    """Instantiate one operation's template on already evaluated children."""
    if dep_is_left:
        left, right = dep, head
    else:
        left, right = head, dep
    if op is Operation.CONCAT:
        return left + right
    if op is Operation.REV:
        return right + left
    if op is Operation.CONCAT_REL:
        return left + [label] + right
    if op is Operation.REVL_REL:
        return right + [label] + left
    if op is Operation.BRACKET:
        return head + ["(", label] + dep + [")"]
    if op is Operation.BR_INVERT:
        return dep + ["(", label, "by"] + head + [")"]
    if op is Operation.BRACKET_2:
        return ["("] + head + [label] + dep + [")"]
    if op is Operation.BRACKET_2_INV:
        return ["("] + dep + [label] + head + [")"]
    if op is Operation.BRACKET_3:
        return head + ["("] + dep + [")"]
    if op is Operation.BRACKET_4:
        return head + [label, "("] + dep + [")"]
    if op is Operation.BRACKET_5:
        opener = "(" if position in (Position.ONLY, Position.FIRST) else ","
        closer = [")"] if position in (Position.ONLY, Position.LAST) else []
        return head + [opener, label] + dep + closer
    if op is Operation.TRIPLE:
        return head + ["(", head_lemma, label, dep_lemma, ")"] + dep
    if op is Operation.TRIPLE_INV:
        return head + ["(", dep_lemma, label, "by", head_lemma, ")"] + dep
    if op is Operation.IGNORE_DEP:
        return head
    raise ValueError(f"unhandled operation {op}")


def evaluate_tokens(a: AnnotatedTree) -> list[str]:
    if isinstance(a, Leaf):
        return [a.token.form]
    left = evaluate_tokens(a.left)
    right = evaluate_tokens(a.right)
    node = a.node
    if node.head_side == LEFT:
        head, dep, dep_is_left = left, right, False
    else:
        head, dep, dep_is_left = right, left, True
    return combine(a.operation, a.position, head, dep, dep_is_left,
                   node.relation, node.head_lemma, node.dep_lemma)


def evaluate(a: AnnotatedTree) -> str:
    return " ".join(evaluate_tokens(a))


def apply_transformation_reference(tree: DepTree, t: EdgewiseTransform) -> str:
    return evaluate(annotate(unfold(tree), t))


def tree_arrays(tree: DepTree) -> tuple[list[int], list[str], list[str], list[str]]:
    """0-based head array (root -1) plus forms, lemmas and labels, as the kernel wants them."""
    toks = tree.tokens
    return ([t.head - 1 for t in toks], [t.form for t in toks],
            [t.lemma for t in toks], [t.deprel for t in toks])


def transform_tokens(tree: DepTree, t: EdgewiseTransform, check: bool = True) -> list[str]:
    from . import kernel
    if check:
        require_valid(tree)
    heads, forms, lemmas, labels = tree_arrays(tree)
    codes = [t.lookup(label).code for label in labels]
    return kernel.transduce(heads, codes, forms, lemmas, labels)


def apply_transformation(tree: DepTree, t: EdgewiseTransform) -> str:
    return " ".join(transform_tokens(tree, t))
