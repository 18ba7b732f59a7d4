"""Symplectic maps, Gram factorization, transport, and class equality."""

import random

import pytest

from mubforge.construct import (
    StabilizerSpec,
    StandardFormError,
    bandyopadhyay_check,
    generators,
    search_B,
    search_specs,
)
from mubforge.equiv import (
    SymplecticMap,
    class_canonical,
    classes_equal,
    equivalence_map,
    field_anchor,
    gram_factor,
    is_symplectic,
    symplectic_form,
    transport,
)
from mubforge.gf2 import (
    BitMatrix,
    is_invertible,
    mat_inverse,
    mat_mul,
    rank,
    vstack,
)


def random_invertible(rng, m):
    while True:
        mat = BitMatrix(m, m, (rng.getrandbits(m) for _ in range(m)))
        if is_invertible(mat):
            return mat


def random_symmetric(rng, m):
    rows = [0] * m
    for i in range(m):
        for j in range(i, m):
            if rng.getrandbits(1):
                rows[i] |= 1 << j
                rows[j] |= 1 << i
    return BitMatrix(m, m, rows)


def sym_invertible_matrices(m):
    from mubforge.backend import decode_symmetric

    for k in range(1 << (m * (m + 1) // 2)):
        mat = BitMatrix(m, m, decode_symmetric(m, k))
        if is_invertible(mat):
            yield mat


class TestIsSymplectic:
    def test_identity(self):
        assert is_symplectic(SymplecticMap.identity(3))

    def test_block_diagonal_family(self):
        rng = random.Random(2)
        for m in (1, 2, 3, 4):
            s = random_invertible(rng, m)
            f = SymplecticMap(
                s, BitMatrix.zero(m), BitMatrix.zero(m), mat_inverse(s.transpose())
            )
            assert is_symplectic(f)

    def test_swap_form(self):
        J = symplectic_form(2)
        assert is_symplectic(SymplecticMap.from_matrix(J))

    def test_singular_blocks_rejected(self):
        eye = BitMatrix.identity(2)
        assert not is_symplectic(SymplecticMap(eye, eye, eye, eye))


class TestGramFactor:
    def test_identity(self):
        assert gram_factor(BitMatrix.identity(3)) == BitMatrix.identity(3)

    def test_alternating_two_by_two(self):
        assert gram_factor(BitMatrix.from_rows([[0, 1], [1, 0]])) is None

    def test_patch_case(self):
        # Naive diagonalization strands an alternating residue here, yet the
        # factorization exists; the hyperbolic patch must recover it.
        R = BitMatrix.from_rows([[1, 0, 0], [0, 0, 1], [0, 1, 0]])
        s = gram_factor(R)
        assert s is not None and is_invertible(s)
        assert mat_mul(s.transpose(), s) == R

    @pytest.mark.parametrize("m", [1, 2, 3, 4])
    def test_exhaustive_sweep(self, m):
        for R in sym_invertible_matrices(m):
            alternating = all(R[i, i] == 0 for i in range(m))
            s = gram_factor(R)
            if alternating:
                assert s is None
            else:
                assert s is not None
                assert is_invertible(s)
                assert mat_mul(s.transpose(), s) == R

    def test_rejects_nonsymmetric(self):
        with pytest.raises(ValueError):
            gram_factor(BitMatrix.from_rows([[1, 1], [0, 1]]))


class TestTransport:
    def test_identity_map_is_noop(self):
        gens = generators(next(iter(search_specs(2, "field", 1, "exhaustive"))))
        moved = transport(SymplecticMap.identity(2), gens)
        assert classes_equal(moved, gens)
        assert moved.standard_forms == gens.standard_forms

    def test_triangular_transport_makes_semigroup_classes(self):
        # f = [[u, t], [0, (u^t)^-1]] carries the field set of u^-1 B u onto
        # the semigroup set of (B, u u^t, t u^t).
        rng = random.Random(5)
        B0 = search_B(3, 1, "exhaustive")[0]
        for _ in range(5):
            u = random_invertible(rng, 3)
            S = random_symmetric(rng, 3)
            t = mat_mul(u, S)  # u^-1 t = S keeps f symplectic
            f = SymplecticMap.triangular(u, t)
            assert is_symplectic(f)
            field_gens = generators(StabilizerSpec.field(B0))
            moved = transport(f, field_gens)
            assert bandyopadhyay_check(moved)
            B = mat_mul(mat_mul(u, B0), mat_inverse(u))
            R = mat_mul(u, u.transpose())
            A = mat_mul(t, u.transpose())
            target = StabilizerSpec.semigroup(B, R, A)
            target.validate()
            assert classes_equal(moved, generators(target))

    def test_zero_t_gives_group_classes(self):
        rng = random.Random(8)
        B0 = search_B(3, 1, "exhaustive")[0]
        u = random_invertible(rng, 3)
        f = SymplecticMap.triangular(u, BitMatrix.zero(3))
        moved = transport(f, generators(StabilizerSpec.field(B0)))
        B = mat_mul(mat_mul(u, B0), mat_inverse(u))
        target = StabilizerSpec.group(B, mat_mul(u, u.transpose()))
        target.validate()
        assert classes_equal(moved, generators(target))

    def test_requires_symplectic(self):
        gens = generators(StabilizerSpec.field(search_B(2, 1, "exhaustive")[0]))
        eye = BitMatrix.identity(2)
        with pytest.raises(ValueError, match="symplectic"):
            transport(SymplecticMap(eye, eye, eye, eye), gens)

    def test_singular_lower_block_reported(self):
        # A class (M; I) with singular nonzero M lands outside standard form
        # under the swap map; that failure must surface, not be patched.
        from mubforge.construct import GeneratorSet, Z_BASIS

        m = 2
        M = BitMatrix.from_rows([[1, 0], [0, 0]])
        gen = vstack(M, BitMatrix.identity(m))
        gens = GeneratorSet(m, (gen,), (M,))
        J = SymplecticMap.from_matrix(symplectic_form(m))
        with pytest.raises(StandardFormError):
            transport(J, gens)


class TestClassesEqual:
    def test_reflexive(self):
        gens = generators(next(iter(search_specs(3, "field", 1, "exhaustive"))))
        assert classes_equal(gens, gens)

    def test_field_vs_group_differ(self):
        f = generators(StabilizerSpec.field(search_B(3, 1, "exhaustive")[0]))
        g = generators(next(iter(search_specs(3, "group", 1, "exhaustive"))))
        assert not classes_equal(f, g)

    def test_same_polynomial_algebra_same_classes(self):
        # B and B^2 generate the same matrix field, hence the same classes.
        B = search_B(3, 1, "exhaustive")[0]
        B_sq = mat_mul(B, B)
        spec_sq = StabilizerSpec.field(B_sq)
        spec_sq.validate()
        assert classes_equal(
            generators(StabilizerSpec.field(B)), generators(spec_sq)
        )

    def test_outside_polynomial_algebra_differs(self):
        from mubforge.construct import is_polynomial_in

        hits = search_B(3, None, "exhaustive")
        base = hits[0]
        other = next((b for b in hits if not is_polynomial_in(base, b)), None)
        assert other is not None
        assert not classes_equal(
            generators(StabilizerSpec.field(base)),
            generators(StabilizerSpec.field(other)),
        )

    def test_mismatched_m_raises(self):
        a = generators(StabilizerSpec.field(search_B(1, 1, "exhaustive")[0]))
        b = generators(StabilizerSpec.field(search_B(2, 1, "exhaustive")[0]))
        with pytest.raises(ValueError):
            classes_equal(a, b)

    def test_canonical_form_ignores_column_operations(self):
        rng = random.Random(13)
        gens = generators(next(iter(search_specs(2, "field", 1, "exhaustive"))))
        for gen in gens.generators:
            w = random_invertible(rng, 2)
            assert class_canonical(gen) == class_canonical(mat_mul(gen, w))


class TestFieldAnchor:
    @pytest.mark.parametrize(
        "kind,m", [("group", 3), ("group", 4), ("semigroup", 4)]
    )
    def test_anchor_reproduces_classes(self, kind, m):
        spec = next(iter(search_specs(m, kind, 1, "exhaustive")))
        f, anchor = field_anchor(spec)
        anchor.validate()
        assert anchor.kind == "field"
        assert is_symplectic(f)
        assert classes_equal(transport(f, generators(anchor)), generators(spec))

    def test_field_spec_is_its_own_anchor(self):
        spec = StabilizerSpec.field(search_B(2, 1, "exhaustive")[0])
        f, anchor = field_anchor(spec)
        assert anchor == spec
        assert f.matrix == BitMatrix.identity(4)

    def test_alternating_symmetrizer_flagged(self):
        # Well-formed but inadmissible spec: the alternating R cannot be a
        # Gram product, and the anchor construction must say so.
        bogus = StabilizerSpec.group(
            BitMatrix.from_rows([[1, 1], [1, 0]]),
            BitMatrix.from_rows([[0, 1], [1, 0]]),
        )
        with pytest.raises(ValueError, match="alternating"):
            field_anchor(bogus)


class TestEquivalenceMap:
    def test_identical_specs(self):
        spec = next(iter(search_specs(3, "group", 1, "exhaustive")))
        f, reason = equivalence_map(spec, spec)
        assert f is not None
        assert f.matrix == BitMatrix.identity(6)
        assert reason == "identical specs"

    def test_field_vs_its_group_variant(self):
        field = StabilizerSpec.field(search_B(3, 1, "exhaustive")[0])
        group = next(iter(search_specs(3, "group", 1, "exhaustive")))
        f, _ = equivalence_map(field, group)
        assert f is not None
        assert is_symplectic(f)
        assert classes_equal(transport(f, generators(field)), generators(group))

    def test_group_vs_semigroup_same_pair(self):
        sg = next(iter(search_specs(4, "semigroup", 1, "exhaustive")))
        g = StabilizerSpec.group(sg.B, sg.R)
        f, _ = equivalence_map(g, sg)
        assert f is not None
        assert classes_equal(transport(f, generators(g)), generators(sg))

    def test_conjugate_class_families_are_linked(self):
        # Distinct polynomial algebras, same characteristic polynomial: the
        # classes differ but an orthogonal change of anchor still links them.
        from mubforge.construct import is_polynomial_in

        hits = search_B(3, None, "exhaustive")
        base = hits[0]
        other = next(b for b in hits if not is_polynomial_in(base, b))
        spec_a, spec_b = StabilizerSpec.field(base), StabilizerSpec.field(other)
        assert not classes_equal(generators(spec_a), generators(spec_b))
        f, _ = equivalence_map(spec_a, spec_b)
        assert f is not None
        assert classes_equal(transport(f, generators(spec_a)), generators(spec_b))

    def test_distinct_char_polys_rejected(self):
        from mubforge.gf2 import char_poly

        hits = search_B(4, None, "exhaustive")
        base = hits[0]
        other = next(b for b in hits if char_poly(b) != char_poly(base))
        f, reason = equivalence_map(
            StabilizerSpec.field(base), StabilizerSpec.field(other)
        )
        assert f is None
        assert "not orthogonally conjugate" in reason
