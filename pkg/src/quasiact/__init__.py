"""Quasi-actions of groups on finite sets: construction and verification."""

from .finmap import (
    Defect,
    FiniteMap,
    compose,
    compose_chain,
    double,
    fixpoint_count,
    fixpoint_set,
    identity_map,
    inverse_map,
    shift_map,
    similarity_defect,
    swap_map,
)
from .groups import (
    FiniteSubset,
    FreeProductGroup,
    FreeProductWord,
    GroupHandle,
    IntegerFinitaryGroup,
    IntegerGroup,
    ProductGroup,
    SubgroupHandle,
    TableGroup,
    cyclic_group,
    group_from_json,
    pair_products,
    reduce_word,
    symmetrize,
    symmetrized_square,
)
from .quasiaction import (
    QuasiAction,
    VerificationReport,
    emit_certificate,
    extend_assignment,
    load_certificate,
    verify,
)

__all__ = [name for name in dir() if not name.startswith("_")]
