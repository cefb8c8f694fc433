"""Parenthesized logical forms (FunQL and variable-free SLOG).

Grammar, over whitespace-separated tokens::

    node := ["*"] name ["(" [arg ("," arg)*] ")"]
    arg  := [role "="] node

``name`` and ``role`` are runs of tokens other than ``( ) , =``, so the
SLOG role ``nmod . on`` is a three-token role. Every parsed node
remembers the 1-based positions of the tokens it was read from, which is
what conjunct reordering needs to look up alignment columns.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable, Optional

import numpy as np

SPECIAL = frozenset({"(", ")", ",", "="})
DEFAULT_CONJUNCTIONS = frozenset({"and", "or", "intersection"})


class LogicalFormError(ValueError):
    def __init__(self, message: str, position: Optional[int] = None,
                 side: Optional[str] = None):
        self.position = position
        self.side = side
        where = []
        if side:
            where.append(side)
        if position is not None:
            where.append(f"token {position}")
        super().__init__((", ".join(where) + ": " if where else "") + message)


@dataclass(frozen=True)
class Arg:
    node: "LFNode"
    role: tuple[str, ...] = ()
    role_positions: tuple[int, ...] = field(default=(), compare=False)  # role tokens and "="


@dataclass(frozen=True)
class LFNode:
    name: tuple[str, ...]
    args: tuple[Arg, ...] = ()
    definite: bool = False
    has_parens: bool = False
    # positions of the tokens this node emits itself: "*", name, parens, commas
    positions: tuple[int, ...] = field(default=(), compare=False)

    @property
    def label(self) -> str:
        return " ".join(self.name)


def tokenize(text: str) -> list[str]:
    # tolerate "f(a,b)" style spacing
    for ch in "(),":
        text = text.replace(ch, f" {ch} ")
    return text.split()


def parse(text: str, side: Optional[str] = None) -> LFNode:
    tokens = tokenize(text)
    if not tokens:
        raise LogicalFormError("empty logical form", side=side)
    pos = 0

    def err(msg: str, at: int) -> LogicalFormError:
        return LogicalFormError(msg, at + 1, side)

    def run(start: int) -> int:
        end = start
        while end < len(tokens) and tokens[end] not in SPECIAL:
            end += 1
        return end

    def parse_node() -> LFNode:
        nonlocal pos
        own = []
        definite = False
        if pos < len(tokens) and tokens[pos] == "*":
            definite = True
            own.append(pos + 1)
            pos += 1
        end = run(pos)
        if end == pos:
            raise err(f"expected a name, found {tokens[pos]!r}" if pos < len(tokens)
                      else "unexpected end of input", pos)
        name = tuple(tokens[pos:end])
        own.extend(range(pos + 1, end + 1))
        pos = end
        args: list[Arg] = []
        has_parens = False
        if pos < len(tokens) and tokens[pos] == "(":
            has_parens = True
            own.append(pos + 1)
            pos += 1
            if pos < len(tokens) and tokens[pos] == ")":
                own.append(pos + 1)
                pos += 1
            else:
                while True:
                    args.append(parse_arg())
                    if pos >= len(tokens):
                        raise err("missing ')'", pos)
                    if tokens[pos] == ",":
                        own.append(pos + 1)
                        pos += 1
                        continue
                    if tokens[pos] == ")":
                        own.append(pos + 1)
                        pos += 1
                        break
                    raise err(f"expected ',' or ')', found {tokens[pos]!r}", pos)
        return LFNode(name, tuple(args), definite, has_parens, tuple(own))

    def parse_arg() -> Arg:
        nonlocal pos
        start = pos
        if start < len(tokens) and tokens[start] == "*":
            start += 1
        end = run(start)
        if end < len(tokens) and tokens[end] == "=" and tokens[pos] != "*":
            if end == pos:
                raise err("empty role before '='", pos)
            role = tuple(tokens[pos:end])
            role_pos = tuple(range(pos + 1, end + 2))
            pos = end + 1
            return Arg(parse_node(), role, role_pos)
        return Arg(parse_node())

    root = parse_node()
    if pos != len(tokens):
        raise err(f"trailing input {tokens[pos]!r}", pos)
    return root


def render_tokens(node: LFNode) -> list[str]:
    out = []
    if node.definite:
        out.append("*")
    out.extend(node.name)
    if node.has_parens:
        out.append("(")
        for k, arg in enumerate(node.args):
            if k:
                out.append(",")
            if arg.role:
                out.extend(arg.role)
                out.append("=")
            out.extend(render_tokens(arg.node))
        out.append(")")
    return out


def render(node: LFNode) -> str:
    return " ".join(render_tokens(node))


def subtree_positions(arg_or_node) -> list[int]:
    """All token positions covered by an argument (role included) or node."""
    if isinstance(arg_or_node, Arg):
        return list(arg_or_node.role_positions) + subtree_positions(arg_or_node.node)
    out = list(arg_or_node.positions)
    for arg in arg_or_node.args:
        out.extend(subtree_positions(arg))
    return out


def number(node: LFNode) -> LFNode:
    """Re-parse the rendering so every token position reflects the current order."""
    return parse(render(node))


def expected_position(alignment: np.ndarray, positions: Iterable[int]) -> float:
    """Sum over the given target columns j of sum_i A[i, j] * i (1-based i and j)."""
    rows = np.arange(1, alignment.shape[0] + 1, dtype=float)
    cols = [j - 1 for j in positions]
    if not cols:
        return 0.0
    return float(rows @ alignment[:, cols].sum(axis=1))


def reorder_conjuncts(lf: LFNode, alignment: np.ndarray,
                      conjunction_ops: Iterable[str] = DEFAULT_CONJUNCTIONS,
                      recursive: bool = True) -> LFNode:
    """Sort the arguments of conjunction nodes by expected source position.

    ``alignment`` has one column per token of the logical form as rendered
    when it was parsed. Positions travel with the tokens, so running this
    twice with the same matrix gives the same result as running it once.
    With ``recursive=False`` only conjunctions without a conjunction
    ancestor are reordered.
    """
    ops = frozenset(conjunction_ops)
    positions = subtree_positions(lf)
    if not positions:
        lf = number(lf)
        positions = subtree_positions(lf)
    n_cols = alignment.shape[1]
    if len(positions) != n_cols or max(positions) > n_cols:
        raise LogicalFormError(
            f"logical form has {len(positions)} tokens but the alignment "
            f"matrix has {n_cols} columns")

    def sort_args(args: tuple[Arg, ...]) -> tuple[Arg, ...]:
        keys = [expected_position(alignment, subtree_positions(a)) for a in args]
        order = sorted(range(len(args)), key=keys.__getitem__)  # stable
        return tuple(args[k] for k in order)

    def visit(node: LFNode) -> LFNode:
        is_conj = node.label in ops
        if is_conj and not recursive:
            return replace(node, args=sort_args(node.args))
        args = tuple(replace(a, node=visit(a.node)) for a in node.args)
        return replace(node, args=sort_args(args) if is_conj else args)

    return visit(lf)


def strip_nmod(text: str) -> str:
    """Drop ``nmod .`` in front of role labels (``nmod . on = x`` -> ``on = x``)."""
    tokens = text.split()
    out = []
    i = 0
    while i < len(tokens):
        if (tokens[i] == "nmod" and i + 3 < len(tokens) and tokens[i + 1] == "."
                and tokens[i + 2] not in SPECIAL and tokens[i + 3] == "="):
            i += 2
            continue
        out.append(tokens[i])
        i += 1
    return " ".join(out)


def canonical(node: LFNode):
    """Order-insensitive key: children compared as a multiset of (role, subtree)."""
    kids = sorted((arg.role, canonical(arg.node)) for arg in node.args)
    return (node.definite, node.name, node.has_parens, tuple(kids))


def slog_equivalent(a: str, b: str) -> bool:
    return canonical(parse(a, side="first")) == canonical(parse(b, side="second"))
