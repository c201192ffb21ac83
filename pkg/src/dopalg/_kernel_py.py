"""Reduction kernels on packed-monomial rows (pure Python fallback).

A row is a dict mapping a packed module monomial (an int, larger means
bigger in the term order) to a nonzero coefficient.  Basis rows are monic.
Constant-coefficient basis rows are multiplied by d^nu by adding a fixed
integer offset to every key; variable-coefficient rows go through the
``mulvar`` callback, which returns d^nu * g as a fresh dict.
"""

from heapq import heappop, heappush

KERNEL = "python"


def shift(row, off):
    return {k + off: c for k, c in row.items()}


def axpy(row, c, g, off):
    """row -= c * (g shifted by off), in place."""
    for k, v in g.items():
        k += off
        old = row.get(k)
        if old is None:
            row[k] = -(c * v)
        else:
            new = old - c * v
            if new:
                row[k] = new
            else:
                del row[k]


def find_divisor(k, lms, poss, pmask, emask, gmask):
    """Index of the first basis monomial dividing k, or -1."""
    kp = k & pmask
    ke = k & emask
    for i in range(len(lms)):
        if poss[i] == kp:
            a = lms[i]
            if (((a & emask) | gmask) - ke) & gmask == gmask:
                return i
    return -1


def nf(row, lms, rows, consts, poss, pmask, emask, gmask, mulvar, record, full):
    """Normal form of ``row`` (consumed) modulo the basis.

    With ``full`` false only the leading term is reduced repeatedly (top
    reduction).  When ``record`` is a list, each step appends
    ``(index, offset, coeff)`` meaning coeff * d^nu * basis[index] was
    subtracted, where ``offset = key - lms[index]``.
    """
    out = {}
    heap = [-k for k in row]
    heap.sort()
    while heap:
        k = -heappop(heap)
        c = row.get(k)
        if c is None:
            continue
        i = find_divisor(k, lms, poss, pmask, emask, gmask)
        if i < 0:
            if not full:
                out.update(row)
                return out
            out[k] = c
            del row[k]
            continue
        off = k - lms[i]
        if consts[i]:
            g = rows[i]
            for kk, v in g.items():
                kk += off
                old = row.get(kk)
                if old is None:
                    row[kk] = -(c * v)
                    heappush(heap, -kk)
                else:
                    new = old - c * v
                    if new:
                        row[kk] = new
                    else:
                        del row[kk]
        else:
            g = mulvar(i, off)
            for kk, v in g.items():
                old = row.get(kk)
                if old is None:
                    row[kk] = -(c * v)
                    heappush(heap, -kk)
                else:
                    new = old - c * v
                    if new:
                        row[kk] = new
                    else:
                        del row[kk]
        if record is not None:
            record.append((i, off, c))
    return out
