# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled twin of _kernel_py; same semantics, typed loops."""

from heapq import heappop, heappush

KERNEL = "cython"


def shift(dict row, off):
    return {k + off: c for k, c in row.items()}


def axpy(dict row, c, dict g, off):
    cdef object k, v, old, new
    for k, v in g.items():
        k = k + off
        old = row.get(k)
        if old is None:
            row[k] = -(c * v)
        else:
            new = old - c * v
            if new:
                row[k] = new
            else:
                del row[k]


cpdef Py_ssize_t find_divisor(object k, list lms, list poss, object pmask, object emask, object gmask):
    cdef Py_ssize_t i, n = len(lms)
    cdef object kp = k & pmask
    cdef object ke = k & emask
    cdef object a
    for i in range(n):
        if poss[i] == kp:
            a = lms[i]
            if (((a & emask) | gmask) - ke) & gmask == gmask:
                return i
    return -1


def nf(dict row, list lms, list rows, list consts, list poss, pmask, emask, gmask, mulvar, record, bint full):
    cdef dict out = {}
    cdef list heap = [-k for k in row]
    cdef Py_ssize_t i
    cdef object k, c, off, kk, v, old, new
    cdef dict g
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
                kk = kk + off
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
