# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twin of `_purekernels`: the symmetric-candidate scan kernel.

Rows are uint64 bitmasks, so this path is limited to m <= 10 (upper-triangle
index must fit 64 bits); the dispatcher falls back to the pure kernel beyond
that.  The scan itself runs without the GIL so searches can fan out across
threads.
"""

from libc.stdint cimport uint64_t
from libc.stdlib cimport free, malloc

NAME = "compiled"

DEF MAX_M = 16
DEF MAX_POLY = 16
DEF CHUNK = 65536


cdef inline bint _annihilates(uint64_t *rows, uint64_t poly, int deg, int m) nogil:
    cdef uint64_t acc[MAX_M]
    cdef uint64_t nxt[MAX_M]
    cdef uint64_t r
    cdef int i, bit, j
    for i in range(m):
        acc[i] = (<uint64_t>1) << i  # leading coefficient is always 1
    for bit in range(deg - 1, -1, -1):
        for i in range(m):
            r = acc[i]
            nxt[i] = 0
            j = 0
            while r:
                if r & 1:
                    nxt[i] ^= rows[j]
                r >>= 1
                j += 1
        if (poly >> bit) & 1:
            for i in range(m):
                nxt[i] ^= (<uint64_t>1) << i
        for i in range(m):
            acc[i] = nxt[i]
    for i in range(m):
        if acc[i]:
            return False
    return True


cdef inline void _decode(uint64_t k, int m, int npairs, uint64_t *rows) nogil:
    cdef int i, j, b
    for i in range(m):
        rows[i] = 0
    b = 0
    for i in range(m):
        for j in range(i, m):
            if (k >> (npairs - 1 - b)) & 1:
                rows[i] |= (<uint64_t>1) << j
                rows[j] |= (<uint64_t>1) << i
            b += 1


def decode_symmetric(int m, k):
    """Row bitmasks of the k-th symmetric matrix (same encoding as the pure kernel)."""
    cdef uint64_t rows[MAX_M]
    cdef int npairs = m * (m + 1) // 2
    _decode(<uint64_t>k, m, npairs, rows)
    return tuple(rows[i] for i in range(m))


def scan_symmetric(int m, tuple good_polys, start, stop):
    """Candidate indices in [start, stop) whose matrix is annihilated by a good poly."""
    if m < 1 or m > 10:
        raise ValueError("compiled kernel handles 1 <= m <= 10")
    cdef int npoly = len(good_polys)
    if npoly > MAX_POLY:
        raise ValueError("too many candidate polynomials")
    cdef uint64_t polys[MAX_POLY]
    cdef int degs[MAX_POLY]
    cdef int t
    for t in range(npoly):
        polys[t] = <uint64_t>good_polys[t]
        degs[t] = int(good_polys[t]).bit_length() - 1
    cdef int npairs = m * (m + 1) // 2
    cdef uint64_t lo = <uint64_t>start
    cdef uint64_t hi = <uint64_t>stop
    cdef uint64_t rows[MAX_M]
    cdef uint64_t k, chunk_end
    cdef uint64_t *buf = <uint64_t *>malloc(CHUNK * sizeof(uint64_t))
    if buf == NULL:
        raise MemoryError()
    cdef Py_ssize_t nhits, idx
    hits = []
    try:
        while lo < hi:
            chunk_end = lo + CHUNK if hi - lo > CHUNK else hi
            nhits = 0
            with nogil:
                k = lo
                while k < chunk_end:
                    _decode(k, m, npairs, rows)
                    for t in range(npoly):
                        if _annihilates(rows, polys[t], degs[t], m):
                            buf[nhits] = k
                            nhits += 1
                            break
                    k += 1
            for idx in range(nhits):
                hits.append(buf[idx])
            lo = chunk_end
    finally:
        free(buf)
    return hits
