"""Exact point counts, cohomology tables and graded-ring formulas for Hom
stacks of P^1 into weighted projective stacks."""

__version__ = "0.1.0"

from .binary_forms import (
    BinaryForm,
    FormTuple,
    WeightVector,
    is_basepoint_free,
    tuple_gcd_degree,
    tuple_space_iter,
)
from .errors import StackyError
from .finite_field import FieldElement, FieldSpec, element_order, field_arith, field_create
from .graded_algebra import (
    BaseRing,
    ChernData,
    PoincarePolynomial,
    RelationPresentation,
    jacobian_chern_data,
    phi_cover_degree,
    pushforward_powers,
    twisted_chern_polynomial,
    wpb_poincare,
    wpb_relation,
)
from .spectral_sequence import (
    CohomologyTable,
    PageTable,
    WeightClass,
    genus0_pages,
    stable_cohomology_table,
    stable_e2_table,
)
from .stack_count import (
    CountResult,
    HomStackParams,
    brute_iso_count,
    brute_weighted_count,
    closed_iso_count,
    closed_weighted_count,
    discriminant_weighted_count,
)
from .zeta_trace import (
    GroupDescriptor,
    LPolynomial,
    ModuliSpec,
    batyrev_manin_sum,
    moduli_lookup,
    picard_group,
    shafarevich_leading,
    trace_count,
)
