"""Spanning and independence numbers in finite abelian groups, and the spherical designs they produce."""

__version__ = "0.1.0"

from .combinatorics import a_closed, a_recursive, enum_coeff_vectors, enum_odd_layer, q_bound
from .constructions import family_indep, family_span, p_formula_s1, q3_exact, q_formula_t1, q_formula_t2
from .groups import AbelianGroup, GroupElement, add, element_order, elements, order2_count, scalar_mul
from .search import SearchResult, SearchTask, p_min, q_max
from .spanind import (
    Infinite,
    NotSpanning,
    SubsetCertificate,
    certify,
    duality_check,
    independence_number,
    is_perfect_spanning,
    is_s_spanning,
    is_t_independent,
    is_tight_independent,
    signed_sum_table,
    spanning_number,
)
from .spherical import (
    corollary_construct,
    dgs_bound,
    independent_implies_design,
    lift,
    polygon,
    power_sum_check,
    sphere_moment,
    verify_design,
)

__all__ = [name for name in dir() if not name.startswith("_")]
