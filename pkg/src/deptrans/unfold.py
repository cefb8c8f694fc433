"""Binarization of dependency trees ("unfolding").

Each head absorbs its dependents one at a time, nearest first, so the
result is a binary tree whose internal nodes are labelled with
dependency relations::

    >>> print(to_sexpr(unfold(tree)))        # doctest: +SKIP
    (obj (nsubj Mary saw) (det a cat))
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .conllu import DepTree, Token, require_valid, preorder

LEFT = "left"
RIGHT = "right"


@dataclass(frozen=True)
class Leaf:
    token: Token


@dataclass(frozen=True)
class Node:
    relation: str
    head_side: str  # LEFT or RIGHT: the child that contains the head word
    left: "UnfoldedTree"
    right: "UnfoldedTree"
    head: Token
    dep: Token

    @property
    def head_lemma(self) -> str:
        return self.head.lemma

    @property
    def dep_lemma(self) -> str:
        return self.dep.lemma

    @property
    def head_child(self) -> "UnfoldedTree":
        return self.left if self.head_side == LEFT else self.right

    @property
    def dep_child(self) -> "UnfoldedTree":
        return self.right if self.head_side == LEFT else self.left


UnfoldedTree = Union[Leaf, Node]


def attachment_order(head: int, dependents: list[int]) -> list[int]:
    """Dependents sorted inner-to-outer; equidistant left before right."""
    return sorted(dependents, key=lambda d: (abs(d - head), d > head))


def unfold(tree: DepTree) -> UnfoldedTree:
    require_valid(tree)
    built: dict[int, UnfoldedTree] = {}
    children = tree.children
    for index in reversed(preorder(tree)):
        head_tok = tree.token(index)
        current: UnfoldedTree = Leaf(head_tok)
        for dep in attachment_order(index, children[index]):
            dep_tok = tree.token(dep)
            sub = built.pop(dep)
            if dep < index:
                current = Node(dep_tok.deprel, RIGHT, sub, current, head_tok, dep_tok)
            else:
                current = Node(dep_tok.deprel, LEFT, current, sub, head_tok, dep_tok)
        built[index] = current
    return built[tree.root]


def leaf_sequence(u: UnfoldedTree) -> list[Token]:
    out = []
    stack = [u]
    while stack:
        x = stack.pop()
        if isinstance(x, Leaf):
            out.append(x.token)
        else:
            stack.append(x.right)
            stack.append(x.left)
    return out


def count_nodes(u: UnfoldedTree) -> int:
    n = 0
    stack = [u]
    while stack:
        x = stack.pop()
        if isinstance(x, Node):
            n += 1
            stack.append(x.left)
            stack.append(x.right)
    return n


def to_sexpr(u: UnfoldedTree) -> str:
    if isinstance(u, Leaf):
        return u.token.form
    return f"({u.relation} {to_sexpr(u.left)} {to_sexpr(u.right)})"
