"""Pure-Python fallback for the hot search kernel.

Mirrors the API of the compiled `_kernels` extension.  Candidate index k
encodes a symmetric m x m matrix through its upper triangle (diagonal
included) read row-major, most significant bit first, so ascending k is
lexicographic order on the matrix entries.
"""

from __future__ import annotations

NAME = "pure"


def _pair_positions(m: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(m) for j in range(i, m)]


def decode_symmetric(m: int, k: int) -> tuple[int, ...]:
    """Row bitmasks of the k-th symmetric matrix."""
    pairs = _pair_positions(m)
    n = len(pairs)
    rows = [0] * m
    for b, (i, j) in enumerate(pairs):
        if (k >> (n - 1 - b)) & 1:
            rows[i] |= 1 << j
            rows[j] |= 1 << i
    return tuple(rows)


def encode_symmetric(m: int, rows) -> int:
    pairs = _pair_positions(m)
    n = len(pairs)
    k = 0
    for b, (i, j) in enumerate(pairs):
        if (rows[i] >> j) & 1:
            k |= 1 << (n - 1 - b)
    return k


def _annihilates(rows: tuple[int, ...], poly: int, m: int) -> bool:
    """True iff p(B) = 0 for the matrix with the given row masks."""
    deg = poly.bit_length() - 1
    acc = [1 << i for i in range(m)] if (poly >> deg) & 1 else [0] * m
    for bit in range(deg - 1, -1, -1):
        nxt = []
        for i in range(m):
            r = acc[i]
            v = 0
            while r:
                low = r & -r
                v ^= rows[low.bit_length() - 1]
                r ^= low
            nxt.append(v)
        if (poly >> bit) & 1:
            for i in range(m):
                nxt[i] ^= 1 << i
        acc = nxt
    return all(v == 0 for v in acc)


def scan_symmetric(m: int, good_polys: tuple[int, ...], start: int, stop: int) -> list[int]:
    """Candidate indices in [start, stop) whose matrix is annihilated by a good poly."""
    hits = []
    for k in range(start, stop):
        rows = decode_symmetric(m, k)
        for p in good_polys:
            if _annihilates(rows, p, m):
                hits.append(k)
                break
    return hits
