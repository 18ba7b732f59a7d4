"""Stabilizer specifications and search for complete cyclic MUB sets.

A spec is (kind, m, B, R, A): `field` uses a symmetric B with the identity
symmetrizer, `group` adds a symmetric invertible R with BR symmetric, and
`semigroup` further adds a symmetric A.  In every case the characteristic
polynomial of B must be irreducible with Fibonacci index d + 1 = 2^m + 1;
that single condition makes the stabilizer matrix C cyclic of order d + 1.

The three kinds produce sets with three, two and one completely factorizable
bases once R is not a polynomial in B (group) and A additionally avoids every
matrix of the form p(B) R + diagonal (semigroup).
"""

from __future__ import annotations

import json
import os
import random
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

from . import backend, poly2
from .gf2 import (
    BitMatrix,
    BitVec,
    NotInvertibleError,
    block2x2,
    char_poly,
    is_invertible,
    lower_block,
    mat_inverse,
    mat_mul,
    poly_of_matrix,
    solve_affine,
    upper_block,
    vstack,
)

KINDS = ("field", "group", "semigroup")

MAX_M = 16
EXHAUSTIVE_CAP = 6        # symmetric-candidate space, <= 2^21 candidates
EXHAUSTIVE_CONJ_CAP = 4   # conjugator space for group/semigroup, <= 2^16
DEFAULT_MAX_ATTEMPTS = 1 << 18


class SpecValidationError(ValueError):
    """A spec invariant failed; `condition` names the violated requirement."""

    def __init__(self, condition: str, message: str):
        super().__init__(f"{condition}: {message}")
        self.condition = condition


class StandardFormError(ValueError):
    """A class generator could not be brought to standard form."""


class _ZBasis:
    """Sentinel standard form of the computational-basis class (I; 0)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "ZBasis"


Z_BASIS = _ZBasis()


@dataclass(frozen=True)
class StabilizerSpec:
    """Recipe for one complete cyclic set: kind plus the matrices B, R, A."""

    kind: str
    m: int
    B: BitMatrix
    R: BitMatrix
    A: BitMatrix

    @classmethod
    def field(cls, B: BitMatrix) -> "StabilizerSpec":
        m = B.rows
        return cls("field", m, B, BitMatrix.identity(m), BitMatrix.zero(m))

    @classmethod
    def group(cls, B: BitMatrix, R: BitMatrix) -> "StabilizerSpec":
        return cls("group", B.rows, B, R, BitMatrix.zero(B.rows))

    @classmethod
    def semigroup(cls, B: BitMatrix, R: BitMatrix, A: BitMatrix) -> "StabilizerSpec":
        return cls("semigroup", B.rows, B, R, A)

    @property
    def d(self) -> int:
        return 1 << self.m

    def validate(self) -> None:
        """Raise SpecValidationError naming the first violated condition."""
        if self.kind not in KINDS:
            raise SpecValidationError("kind", f"unknown kind {self.kind!r}")
        if not 1 <= self.m <= MAX_M:
            raise SpecValidationError("m-range", f"m = {self.m} outside 1..{MAX_M}")
        for name, mat in (("B", self.B), ("R", self.R), ("A", self.A)):
            if mat.rows != self.m or mat.cols != self.m:
                raise SpecValidationError(
                    "shape", f"{name} is {mat.rows}x{mat.cols}, expected {self.m}x{self.m}"
                )
        if self.kind == "field":
            if self.R != BitMatrix.identity(self.m):
                raise SpecValidationError("R-forced", "field kind requires R = identity")
            if not self.B.is_symmetric():
                raise SpecValidationError("B-symmetric", "field kind requires symmetric B")
        if self.kind in ("field", "group") and not self.A.is_zero():
            raise SpecValidationError("A-forced", f"{self.kind} kind requires A = 0")

        p = char_poly(self.B)
        if not p.mask & 1:
            raise SpecValidationError("B-invertible", "B is singular")
        if not poly2.is_irreducible(p):
            raise SpecValidationError(
                "char-poly-irreducible", f"characteristic polynomial {p} is reducible"
            )
        idx = poly2.fibonacci_index(p)
        if idx != self.d + 1:
            raise SpecValidationError(
                "fibonacci-index",
                f"characteristic polynomial {p} has Fibonacci index {idx}, "
                f"need d + 1 = {self.d + 1}",
            )
        if self.kind in ("group", "semigroup"):
            if not self.R.is_symmetric():
                raise SpecValidationError("R-symmetric", "R must be symmetric")
            if not is_invertible(self.R):
                raise SpecValidationError("R-invertible", "R is singular")
            if not mat_mul(self.B, self.R).is_symmetric():
                raise SpecValidationError("BR-symmetric", "B R must be symmetric")
        if self.kind == "semigroup" and not self.A.is_symmetric():
            raise SpecValidationError("A-symmetric", "A must be symmetric")

    # -- JSON wire format --------------------------------------------------

    def to_json_dict(self) -> dict:
        out = {"m": self.m, "kind": self.kind, "B": self.B.to_lists()}
        if self.kind in ("group", "semigroup"):
            out["R"] = self.R.to_lists()
        if self.kind == "semigroup":
            out["A"] = self.A.to_lists()
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), separators=(",", ":"))

    @classmethod
    def from_json_dict(cls, obj: dict) -> "StabilizerSpec":
        kind = obj["kind"]
        m = obj["m"]
        B = BitMatrix.from_rows(obj["B"])
        R = BitMatrix.from_rows(obj["R"]) if "R" in obj else BitMatrix.identity(m)
        A = BitMatrix.from_rows(obj["A"]) if "A" in obj else BitMatrix.zero(m)
        return cls(kind, m, B, R, A)

    @classmethod
    def from_json(cls, text: str) -> "StabilizerSpec":
        return cls.from_json_dict(json.loads(text))


@dataclass(frozen=True)
class GeneratorSet:
    """The d + 1 class generators of one set, with their standard forms."""

    m: int
    generators: tuple[BitMatrix, ...]
    standard_forms: tuple


def build_stabilizer(spec: StabilizerSpec) -> BitMatrix:
    """Assemble the 2m x 2m stabilizer matrix C for a validated spec."""
    spec.validate()
    m = spec.m
    eye = BitMatrix.identity(m)
    zero = BitMatrix.zero(m)
    if spec.kind == "field":
        return block2x2(spec.B, eye, eye, zero)
    rinv = mat_inverse(spec.R)
    if spec.kind == "group":
        return block2x2(spec.B, spec.R, rinv, zero)
    arinv = mat_mul(spec.A, rinv)
    ul = spec.B + arinv
    ur = spec.R + mat_mul(spec.B, spec.A) + mat_mul(arinv, spec.A)
    return block2x2(ul, ur, rinv, mat_mul(rinv, spec.A))


def stabilizer_power(C: BitMatrix, j: int) -> BitMatrix:
    """C^j for j >= 0."""
    if j < 0:
        raise ValueError("negative power")
    return C**j


def cyclicity_check(C: BitMatrix, d: int) -> bool:
    """True iff C has order exactly d + 1."""
    eye = BitMatrix.identity(C.rows)
    acc = C
    for _ in range(d):
        if acc == eye:
            return False
        acc = acc * C
    return acc == eye


def standard_form(gen: BitMatrix):
    """Normalize a 2m x m class generator to (M; I), or Z_BASIS for (I; 0).

    Raises StandardFormError when the lower block is singular but nonzero,
    which cannot happen for generators of a valid spec.
    """
    lo = lower_block(gen)
    up = upper_block(gen)
    if lo.is_zero():
        if not is_invertible(up):
            raise StandardFormError("zero lower block with singular upper block")
        return Z_BASIS
    try:
        lo_inv = mat_inverse(lo)
    except NotInvertibleError as exc:
        raise StandardFormError("lower block of a class generator is singular") from exc
    return mat_mul(up, lo_inv)


def generators(spec: StabilizerSpec) -> GeneratorSet:
    """G_j = C^j G_0 for j = 0..d, plus their standard forms."""
    C = build_stabilizer(spec)
    m = spec.m
    g0 = vstack(BitMatrix.identity(m), BitMatrix.zero(m))
    gens = [g0]
    for _ in range(spec.d):
        gens.append(mat_mul(C, gens[-1]))
    forms = [Z_BASIS] + [standard_form(g) for g in gens[1:]]
    return GeneratorSet(m, tuple(gens), tuple(forms))


# -- class-level checks ------------------------------------------------------


def class_labels(gen: BitMatrix) -> list[int]:
    """All nonzero Pauli labels G c (c != 0) as packed 2m-bit integers."""
    m = gen.cols
    cols = [gen.column(j).bits for j in range(m)]
    out = []
    for c in range(1, 1 << m):
        v = 0
        cc = c
        while cc:
            low = cc & -cc
            v ^= cols[low.bit_length() - 1]
            cc ^= low
        out.append(v)
    return out


def _symplectic_bits(a: int, b: int, m: int) -> int:
    lo = (1 << m) - 1
    az, ax = a & lo, a >> m
    bz, bx = b & lo, b >> m
    return bin((az & bx) ^ (ax & bz)).count("1") & 1


def class_partition_check(gens: GeneratorSet) -> bool:
    """Classes are pairwise disjoint, cover all 4^m - 1 labels, and commute within."""
    m = gens.m
    d = 1 << m
    seen: set[int] = set()
    for gen in gens.generators:
        labels = class_labels(gen)
        if len(set(labels)) != d - 1 or 0 in labels:
            return False
        if seen.intersection(labels):
            return False
        seen.update(labels)
        cols = [gen.column(j).bits for j in range(m)]
        for i in range(m):
            for j in range(i + 1, m):
                if _symplectic_bits(cols[i], cols[j], m):
                    return False
    return len(seen) == (d + 1) * (d - 1)


def bandyopadhyay_check(gens: GeneratorSet) -> bool:
    """Symmetric, pairwise-distinct standard forms plus the partition property."""
    forms = gens.standard_forms
    mats = [f for f in forms if f is not Z_BASIS]
    if any(not f.is_symmetric() for f in mats):
        return False
    if len({f.data for f in mats}) != len(mats) or sum(1 for f in forms if f is Z_BASIS) != 1:
        return False
    return class_partition_check(gens)


def field_closure_check(gens: GeneratorSet) -> bool:
    """Standard forms of a field-kind set represent the finite field F_{2^m}.

    The d matrices {M_j} must be closed under addition and matrix product,
    contain 0 (additive neutral) and I (multiplicative neutral), and be
    pairwise distinct.
    """
    mats = [f for f in gens.standard_forms if f is not Z_BASIS]
    m = gens.m
    table = {f.data for f in mats}
    if len(table) != 1 << m:
        return False
    if BitMatrix.zero(m).data not in table or BitMatrix.identity(m).data not in table:
        return False
    for a in mats:
        for b in mats:
            if (a + b).data not in table or mat_mul(a, b).data not in table:
                return False
    return True


# -- symmetrizers and the semigroup addend ----------------------------------


def _sym_positions(m: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(m) for j in range(i, m)]


def _sym_from_packed(m: int, bits: int) -> BitMatrix:
    rows = [0] * m
    for b, (i, j) in enumerate(_sym_positions(m)):
        if (bits >> b) & 1:
            rows[i] |= 1 << j
            rows[j] |= 1 << i
    return BitMatrix(m, m, rows)


def symmetrizer_space(B: BitMatrix) -> list[BitMatrix]:
    """Basis of {R : R symmetric and B R symmetric}, via one affine solve.

    For a symmetric B with irreducible characteristic polynomial this space
    is exactly span{I, B, ..., B^(m-1)}: B R symmetric forces R B = B R, and
    the centralizer of a matrix whose characteristic polynomial equals its
    minimal polynomial is its polynomial algebra.  Non-polynomial
    symmetrizers therefore only occur for non-symmetric B.
    """
    m = B.rows
    positions = _sym_positions(B.rows)
    if m == 1:
        return [BitMatrix.identity(1)]
    n_unknowns = len(positions)
    pos_index = {pos: k for k, pos in enumerate(positions)}
    rows = []
    for i in range(m):
        for k in range(i + 1, m):
            # (BR)_{ik} + (BR)_{ki} = 0, linear in the packed entries of R
            mask = 0
            for j in range(m):
                if B[i, j]:
                    mask ^= 1 << pos_index[(min(j, k), max(j, k))]
                if B[k, j]:
                    mask ^= 1 << pos_index[(min(j, i), max(j, i))]
            rows.append(mask)
    coeff = BitMatrix(len(rows), n_unknowns, rows)
    solution = solve_affine(coeff, BitVec(len(rows), 0))
    assert solution is not None  # homogeneous system
    return [_sym_from_packed(m, v.bits) for v in solution.nullspace_basis]


def _vec(mat: BitMatrix) -> int:
    v = 0
    for i, r in enumerate(mat.data):
        v |= r << (i * mat.cols)
    return v


class _SpanReducer:
    """Incremental membership for a span of packed F2 vectors."""

    def __init__(self, vectors: list[int]):
        self.basis: list[int] = []
        for v in vectors:
            self.add(v)

    def reduce(self, v: int) -> int:
        for b in self.basis:
            if v.bit_length() == b.bit_length():
                v ^= b
        return v

    def add(self, v: int) -> bool:
        v = self.reduce(v)
        if v == 0:
            return False
        self.basis.append(v)
        self.basis.sort(key=int.bit_length, reverse=True)
        return True

    def contains(self, v: int) -> bool:
        return self.reduce(v) == 0


def is_polynomial_in(B: BitMatrix, X: BitMatrix) -> bool:
    """Membership of X in span{I, B, ..., B^(m-1)}."""
    m = B.rows
    if X.rows != m or X.cols != m:
        raise ValueError("shape mismatch")
    power = BitMatrix.identity(m)
    vecs = []
    for _ in range(m):
        vecs.append(_vec(power))
        power = mat_mul(power, B)
    return _SpanReducer(vecs).contains(_vec(X))


def find_symmetrizer(B: BitMatrix, require_nonpoly: bool = False) -> BitMatrix | None:
    """Invertible symmetrizer for B, preferring square roots of identity.

    With require_nonpoly, only R outside the polynomial algebra of B qualify
    (such R exist only for non-symmetric B).  Candidates are ranked with
    R^2 = I first, then lexicographically by the packed upper triangle;
    None when the filtered space has no invertible element.
    """
    basis = symmetrizer_space(B)
    if len(basis) > 20:
        raise ValueError("symmetrizer space too large to enumerate")
    m = B.rows
    eye = BitMatrix.identity(m)
    best: tuple[int, int] | None = None
    best_mat = None
    for mask in range(1, 1 << len(basis)):
        cand = BitMatrix.zero(m)
        mm = mask
        while mm:
            low = mm & -mm
            cand = cand + basis[low.bit_length() - 1]
            mm ^= low
        if not is_invertible(cand):
            continue
        if require_nonpoly and is_polynomial_in(B, cand):
            continue
        key = (0 if mat_mul(cand, cand) == eye else 1, backend.encode_symmetric(m, cand.data))
        if best is None or key < best:
            best = key
            best_mat = cand
    return best_mat


def addend_excluded_span(B: BitMatrix, R: BitMatrix) -> _SpanReducer:
    """Span of {p(B) R} + {diagonal matrices}, as packed vectors."""
    m = B.rows
    vecs = []
    power = BitMatrix.identity(m)
    for _ in range(m):
        vecs.append(_vec(mat_mul(power, R)))
        power = mat_mul(power, B)
    for i in range(m):
        vecs.append(1 << (i * m + i))
    return _SpanReducer(vecs)


def find_addend(B: BitMatrix, R: BitMatrix) -> BitMatrix | None:
    """First symmetric A (lexicographic) with A != p(B) R + D for all p, D.

    The excluded matrices form the subspace spanned by {B^k R} and the
    diagonals, so exclusion is one span-membership test; the scan needs at
    most 4^m + 1 candidates before a non-member must appear.
    """
    m = B.rows
    span = addend_excluded_span(B, R)
    npairs = m * (m + 1) // 2
    limit = min(1 << npairs, (1 << (2 * m)) + 1)
    for k in range(limit):
        rows = backend.decode_symmetric(m, k)
        v = 0
        for i, r in enumerate(rows):
            v |= r << (i * m)
        if not span.contains(v):
            return BitMatrix(m, m, rows)
    return None


# -- search ------------------------------------------------------------------


def _thread_count() -> int:
    raw = os.environ.get("MUBFORGE_THREADS", "").strip()
    if not raw:
        return 1
    n = int(raw)
    if n < 1:
        raise ValueError("MUBFORGE_THREADS must be >= 1")
    return n


def _good_poly_masks(m: int) -> tuple[int, ...]:
    return tuple(p.mask for p in poly2.stabilizer_char_polys(m))


def _scan_exhaustive(m: int, count: int | None) -> Iterator[int]:
    """Ascending candidate indices of valid symmetric matrices."""
    polys = _good_poly_masks(m)
    if not polys:
        return
    total = 1 << (m * (m + 1) // 2)
    chunk = 1 << 14
    threads = _thread_count()
    starts = range(0, total, chunk)
    emitted = 0
    if threads == 1:
        for s in starts:
            for k in backend.scan_symmetric(m, polys, s, min(s + chunk, total)):
                yield k
                emitted += 1
                if count is not None and emitted >= count:
                    return
        return
    with ThreadPoolExecutor(max_workers=threads) as pool:
        pending: deque = deque()
        it = iter(starts)
        exhausted = False
        while True:
            while not exhausted and len(pending) < threads:
                s = next(it, None)
                if s is None:
                    exhausted = True
                    break
                pending.append(
                    pool.submit(backend.scan_symmetric, m, polys, s, min(s + chunk, total))
                )
            if not pending:
                return
            for k in pending.popleft().result():
                yield k
                emitted += 1
                if count is not None and emitted >= count:
                    return


def _scan_random(m: int, seed: int, max_attempts: int) -> Iterator[int]:
    """Seeded uniform sampling of symmetric candidates; yields distinct hits."""
    polys = _good_poly_masks(m)
    if not polys:
        return
    # With few admissible polynomials, testing p(B) = 0 per candidate is
    # cheapest; once their number outgrows the cost of one characteristic
    # polynomial (large m), membership of char_poly(B) wins by a wide margin.
    poly_set = set(polys) if len(polys) > 16 else None
    npairs = m * (m + 1) // 2
    rng = random.Random(seed)
    seen: set[int] = set()
    for _ in range(max_attempts):
        k = rng.getrandbits(npairs)
        if k in seen:
            continue
        if poly_set is not None:
            mat = BitMatrix(m, m, backend.decode_symmetric(m, k))
            hit = char_poly(mat).mask in poly_set
        else:
            hit = bool(backend.scan_symmetric(m, polys, k, k + 1))
        if hit:
            seen.add(k)
            yield k


def search_B(
    m: int,
    count: int | None = 1,
    mode: str = "exhaustive",
    seed: int | None = None,
    max_attempts: int = DEFAULT_MAX_ATTEMPTS,
) -> list[BitMatrix]:
    """Symmetric invertible matrices whose characteristic polynomial has index d + 1.

    Exhaustive mode scans all 2^(m(m+1)/2) symmetric matrices in lexicographic
    order (capped at m = 6); random mode samples uniformly from the given seed.
    """
    if not 1 <= m <= MAX_M:
        raise ValueError(f"m = {m} outside 1..{MAX_M}")
    if mode == "exhaustive":
        if m > EXHAUSTIVE_CAP:
            raise ValueError(f"exhaustive search is capped at m = {EXHAUSTIVE_CAP}; use random mode")
        ks = _scan_exhaustive(m, count)
    elif mode == "random":
        if seed is None:
            raise ValueError("random mode requires a seed")
        ks = _scan_random(m, seed, max_attempts)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    out = []
    for k in ks:
        out.append(BitMatrix(m, m, backend.decode_symmetric(m, k)))
        if count is not None and len(out) >= count:
            break
    return out


def _derived_seed(seed: int, salt: int) -> int:
    return (seed * 2654435761 + salt) % (1 << 32)


def _iter_conjugators(m: int, mode: str, seed: int | None, max_attempts: int) -> Iterator[BitMatrix]:
    """Invertible matrices u, exhaustively (row-major lexicographic) or sampled."""
    nbits = m * m
    if mode == "exhaustive":
        if m > EXHAUSTIVE_CONJ_CAP:
            raise ValueError(
                f"exhaustive group/semigroup search is capped at m = {EXHAUSTIVE_CONJ_CAP}; "
                "use random mode"
            )
        candidates: Iterator[int] = iter(range(1 << nbits))
    else:
        rng = random.Random(_derived_seed(seed, 0xC0))
        candidates = (rng.getrandbits(nbits) for _ in range(max_attempts))
    for k in candidates:
        rows = []
        for i in range(m):
            mask = 0
            for j in range(m):
                if (k >> (nbits - 1 - (i * m + j))) & 1:
                    mask |= 1 << j
            rows.append(mask)
        u = BitMatrix(m, m, rows)
        if is_invertible(u):
            yield u


def search_specs(
    m: int,
    kind: str,
    count: int | None = 1,
    mode: str = "exhaustive",
    seed: int | None = None,
    max_attempts: int = DEFAULT_MAX_ATTEMPTS,
) -> Iterator[StabilizerSpec]:
    """Stream specs of the requested kind, deterministically for fixed inputs.

    Group and semigroup specs are parametrized as B = u B0 u^-1, R = u u^t
    over invertible u, with B0 the first field-kind hit: every symmetrizer
    expressible as a Gram product arises this way, and the non-polynomial
    filter (two factorizable bases) plus the addend filter (one factorizable
    basis) are applied before anything is emitted.
    """
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}")
    if mode == "random" and seed is None:
        raise ValueError("random mode requires a seed")
    if kind == "field":
        for B in search_B(m, count, mode, seed, max_attempts):
            yield StabilizerSpec.field(B)
        return

    anchor_seed = None if seed is None else _derived_seed(seed, 0xA5)
    anchors = search_B(m, 1, mode, anchor_seed, max_attempts)
    if not anchors:
        return
    b0 = anchors[0]
    emitted = 0
    seen: set[str] = set()
    for u in _iter_conjugators(m, mode, seed, max_attempts):
        if count is not None and emitted >= count:
            return
        R = mat_mul(u, u.transpose())
        B = mat_mul(mat_mul(u, b0), mat_inverse(u))
        if is_polynomial_in(B, R):
            continue
        if kind == "group":
            spec = StabilizerSpec.group(B, R)
        else:
            A = find_addend(B, R)
            if A is None:
                return  # no admissible addend exists at this m
            spec = StabilizerSpec.semigroup(B, R, A)
        key = spec.to_json()
        if key in seen:
            continue
        seen.add(key)
        emitted += 1
        yield spec
