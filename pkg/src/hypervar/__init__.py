"""Hypersubstitutions, derived algebras and derived varieties over finite
types, with decision procedures for band and lattice identities and the
dimension of a variety (number of proper derived varieties it contains)."""

from .algebra import (
    FiniteAlgebra,
    Partition,
    Verdict,
    congruence_generated,
    derived_algebra,
    evaluate,
    isomorphic,
    quotient,
    satisfies,
)
from .bands import band_canonical, band_equal, fast_normalize, free_algebra, free_band, holds
from .hypersub import (
    Hypersubstitution,
    apply,
    band_sigma,
    derive_identity,
    enumerate_hypersubstitutions,
    equivalent,
    parse_hypersubstitution,
)
from .registry import (
    REGISTRY,
    VarietySpec,
    classify,
    contains,
    derived_set,
    derived_variety,
    dimension,
    hyperassociativity_check,
    variety,
    variety_lattice,
)
from .terms import (
    BANDS,
    LATTICES,
    App,
    Identity,
    OperationSymbol,
    Signature,
    Var,
    classify_identity,
    parse_identity,
    parse_term,
    print_term,
    substitute,
    variable_analysis,
)

__version__ = "0.1.0"
