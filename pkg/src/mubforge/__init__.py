"""Complete sets of cyclic mutually unbiased bases for m-qubit systems.

The construction works at the level of 2m x 2m symplectic stabilizer
matrices over F2 built from a matrix B whose characteristic polynomial is
irreducible with Fibonacci index 2^m + 1, optionally dressed with a
symmetrizer R and an additive matrix A that control how many bases of the
resulting set are completely factorizable (three, two, or one).  A dense
complex oracle independently verifies unbiasedness and the entanglement
classification of everything the symbolic layer produces.
"""

from .backend import available_backends, backend_name
from .construct import (
    GeneratorSet,
    SpecValidationError,
    StabilizerSpec,
    StandardFormError,
    Z_BASIS,
    bandyopadhyay_check,
    build_stabilizer,
    cyclicity_check,
    field_closure_check,
    find_addend,
    find_symmetrizer,
    generators,
    is_polynomial_in,
    search_B,
    search_specs,
    stabilizer_power,
    symmetrizer_space,
)
from .entangle import EntanglementVector, count_factorizable, entanglement_vector, partition_of
from .equiv import (
    SymplecticMap,
    classes_equal,
    equivalence_map,
    field_anchor,
    gram_factor,
    is_symplectic,
    symplectic_form,
    transport,
)
from .gf2 import (
    AffineSolution,
    BitMatrix,
    BitVec,
    NotInvertibleError,
    char_poly,
    mat_inverse,
    mat_mul,
    offdiag_components,
    rank,
    solve_affine,
)
from .pauli import (
    PauliLabel,
    class_eigenbasis,
    mub_from_generators,
    pauli_matrix,
    schmidt_rank,
    symplectic_product,
    verify_mub,
)
from .poly2 import (
    Poly2,
    fibonacci_index,
    fibonacci_poly,
    fibonacci_poly_mod,
    is_irreducible,
    stabilizer_char_polys,
)

__version__ = "0.1.0"
