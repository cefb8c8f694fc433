"""Pure-Python transduction kernel (fallback for ``_kernel.pyx``).

Both versions share one signature::

    transduce(heads, codes, forms, lemmas, labels) -> list[str]

``heads`` is 0-based with -1 for the root and ``codes[d]`` is the opcode
of the edge entering token ``d``. The tree is assumed valid. Opcodes
follow the declaration order of :class:`deptrans.operations.Operation`.
"""

CONCAT, REV, CONCAT_REL, REVL_REL, BRACKET, BR_INVERT, BRACKET_2, \
    BRACKET_2_INV, BRACKET_3, BRACKET_4, BRACKET_5, TRIPLE, TRIPLE_INV, \
    IGNORE_DEP = range(14)


def transduce(heads, codes, forms, lemmas, labels):
    n = len(heads)
    children = [[] for _ in range(n)]
    root = -1
    for d in range(n):
        h = heads[d]
        if h < 0:
            root = d
        else:
            children[h].append(d)
    if root < 0:
        raise ValueError("tree has no root")

    order = []
    stack = [root]
    while stack:
        x = stack.pop()
        order.append(x)
        stack.extend(children[x])

    out = [None] * n
    for h in reversed(order):
        kids = children[h]
        running = [forms[h]]
        if kids:
            if len(kids) > 1:
                kids.sort(key=lambda d: (abs(d - h), d > h))
            total5 = 0
            for d in kids:
                if codes[d] == BRACKET_5:
                    total5 += 1
            rank5 = 0
            for d in kids:
                dep = out[d]
                out[d] = None
                op = codes[d]
                label = labels[d]
                if op == CONCAT:
                    running = dep + running if d < h else running + dep
                elif op == REV:
                    running = running + dep if d < h else dep + running
                elif op == CONCAT_REL:
                    running = dep + [label] + running if d < h else running + [label] + dep
                elif op == REVL_REL:
                    running = running + [label] + dep if d < h else dep + [label] + running
                elif op == BRACKET:
                    running = running + ["(", label] + dep + [")"]
                elif op == BR_INVERT:
                    running = dep + ["(", label, "by"] + running + [")"]
                elif op == BRACKET_2:
                    running = ["("] + running + [label] + dep + [")"]
                elif op == BRACKET_2_INV:
                    running = ["("] + dep + [label] + running + [")"]
                elif op == BRACKET_3:
                    running = running + ["("] + dep + [")"]
                elif op == BRACKET_4:
                    running = running + [label, "("] + dep + [")"]
                elif op == BRACKET_5:
                    running = running + ["(" if rank5 == 0 else ",", label] + dep
                    if rank5 == total5 - 1:
                        running.append(")")
                    rank5 += 1
                elif op == TRIPLE:
                    running = running + ["(", lemmas[h], label, lemmas[d], ")"] + dep
                elif op == TRIPLE_INV:
                    running = running + ["(", lemmas[d], label, "by", lemmas[h], ")"] + dep
                elif op == IGNORE_DEP:
                    pass
                else:
                    raise ValueError(f"unknown opcode {op}")
        out[h] = running
    return out[root]
