# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled transduction kernel; see ``_kernel_py.py`` for the contract."""

from libc.stdlib cimport malloc, free

cdef enum:
    CONCAT = 0
    REV = 1
    CONCAT_REL = 2
    REVL_REL = 3
    BRACKET = 4
    BR_INVERT = 5
    BRACKET_2 = 6
    BRACKET_2_INV = 7
    BRACKET_3 = 8
    BRACKET_4 = 9
    BRACKET_5 = 10
    TRIPLE = 11
    TRIPLE_INV = 12
    IGNORE_DEP = 13


cdef inline bint _before(int a, int b, int h):
    # attachment order: nearer first, equidistant left first
    cdef int da = a - h if a > h else h - a
    cdef int db = b - h if b > h else h - b
    if da != db:
        return da < db
    return a < b


def transduce(heads, codes, forms, lemmas, labels):
    cdef int n = len(heads)
    if n == 0:
        return []
    cdef int *hd = <int *> malloc(n * sizeof(int))
    cdef int *op = <int *> malloc(n * sizeof(int))
    cdef int *start = <int *> malloc((n + 1) * sizeof(int))
    cdef int *kids = <int *> malloc(n * sizeof(int))
    cdef int *fill = <int *> malloc(n * sizeof(int))
    cdef int *order = <int *> malloc(n * sizeof(int))
    cdef int i, j, k, d, h, root = -1, top, cnt, total5, rank5, code
    cdef list out, running, dep
    if not (hd and op and start and kids and fill and order):
        free(hd); free(op); free(start); free(kids); free(fill); free(order)
        raise MemoryError()
    try:
        for i in range(n):
            hd[i] = heads[i]
            op[i] = codes[i]
            start[i] = 0
            fill[i] = 0
        start[n] = 0
        # CSR child lists
        for i in range(n):
            if hd[i] < 0:
                root = i
            else:
                start[hd[i] + 1] += 1
        for i in range(n):
            start[i + 1] += start[i]
        for i in range(n):
            h = hd[i]
            if h >= 0:
                kids[start[h] + fill[h]] = i
                fill[h] += 1
        if root < 0:
            raise ValueError("tree has no root")
        # insertion sort each child list into attachment order
        for h in range(n):
            for i in range(start[h] + 1, start[h + 1]):
                d = kids[i]
                j = i - 1
                while j >= start[h] and _before(d, kids[j], h):
                    kids[j + 1] = kids[j]
                    j -= 1
                kids[j + 1] = d
        # preorder via explicit stack (reuse fill as the stack)
        top = 0
        cnt = 0
        fill[top] = root
        top = 1
        while top > 0:
            top -= 1
            h = fill[top]
            order[cnt] = h
            cnt += 1
            for i in range(start[h], start[h + 1]):
                fill[top] = kids[i]
                top += 1

        out = [None] * n
        for k in range(cnt - 1, -1, -1):
            h = order[k]
            running = [forms[h]]
            total5 = 0
            for i in range(start[h], start[h + 1]):
                if op[kids[i]] == BRACKET_5:
                    total5 += 1
            rank5 = 0
            for i in range(start[h], start[h + 1]):
                d = kids[i]
                dep = <list> out[d]
                out[d] = None
                code = op[d]
                if code == CONCAT:
                    if d < h:
                        dep.extend(running)
                        running = dep
                    else:
                        running.extend(dep)
                elif code == REV:
                    if d < h:
                        running.extend(dep)
                    else:
                        dep.extend(running)
                        running = dep
                elif code == CONCAT_REL:
                    if d < h:
                        dep.append(labels[d])
                        dep.extend(running)
                        running = dep
                    else:
                        running.append(labels[d])
                        running.extend(dep)
                elif code == REVL_REL:
                    if d < h:
                        running.append(labels[d])
                        running.extend(dep)
                    else:
                        dep.append(labels[d])
                        dep.extend(running)
                        running = dep
                elif code == BRACKET:
                    running.append("(")
                    running.append(labels[d])
                    running.extend(dep)
                    running.append(")")
                elif code == BR_INVERT:
                    dep.append("(")
                    dep.append(labels[d])
                    dep.append("by")
                    dep.extend(running)
                    dep.append(")")
                    running = dep
                elif code == BRACKET_2:
                    running.insert(0, "(")
                    running.append(labels[d])
                    running.extend(dep)
                    running.append(")")
                elif code == BRACKET_2_INV:
                    dep.insert(0, "(")
                    dep.append(labels[d])
                    dep.extend(running)
                    dep.append(")")
                    running = dep
                elif code == BRACKET_3:
                    running.append("(")
                    running.extend(dep)
                    running.append(")")
                elif code == BRACKET_4:
                    running.append(labels[d])
                    running.append("(")
                    running.extend(dep)
                    running.append(")")
                elif code == BRACKET_5:
                    running.append("(" if rank5 == 0 else ",")
                    running.append(labels[d])
                    running.extend(dep)
                    if rank5 == total5 - 1:
                        running.append(")")
                    rank5 += 1
                elif code == TRIPLE:
                    running.append("(")
                    running.append(lemmas[h])
                    running.append(labels[d])
                    running.append(lemmas[d])
                    running.append(")")
                    running.extend(dep)
                elif code == TRIPLE_INV:
                    running.append("(")
                    running.append(lemmas[d])
                    running.append(labels[d])
                    running.append("by")
                    running.append(lemmas[h])
                    running.append(")")
                    running.extend(dep)
                elif code == IGNORE_DEP:
                    pass
                else:
                    raise ValueError(f"unknown opcode {code}")
            out[h] = running
        return out[root]
    finally:
        free(hd); free(op); free(start); free(kids); free(fill); free(order)
