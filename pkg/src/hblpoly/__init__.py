"""Exact admissible-exponent polytopes for lattice HBL data.

Given integer matrices phi_1..phi_m on a rank-d lattice, this package
computes the polytope of exponent tuples s in [0,1]^m satisfying
dim W <= sum_j s_j dim phi_j(W) for every subspace W, verifies the
associated constant-1 inequality empirically, and implements the
constructive reduction between rank-tuple realizability and rational
polynomial solvability.
"""

__version__ = "0.1.0"

from .linalg import (
    AmbientMismatchError,
    RationalMatrix,
    Subspace,
    extend_to_full_basis,
    format_rational,
    image_subspace,
    kernel_subspace,
    parse_rational,
    rref,
    solve_square,
    sum_and_intersection,
)
from .datum import (
    Criticality,
    HblDatum,
    RankTuple,
    clamp_exponents,
    classify,
    delete_index,
    enumerate_subspaces,
    exponents,
    quotient_datum,
    rank_tuple,
    restrict_datum,
    restrict_to_kernel_datum,
)
from .polytope import (
    Inequality,
    Polytope,
    Vertex,
    contains,
    extreme_points,
    from_rank_constraints,
    minimize_linear,
    polytopes_equal,
)
from .decision import (
    BudgetExhaustedError,
    MembershipTrace,
    PolytopeResult,
    base_case_rank_one,
    compute_polytope,
    is_member,
    member_with_critical,
)
from .oracle import (
    FunctionTable,
    PointSet,
    UnsupportedInstanceError,
    brute_force_constraints,
    counterexample_family,
    find_supercritical_witness,
    verify_function_inequality,
    verify_set_inequality,
)
from .diophantine import (
    BasicSystem,
    DiophEncoding,
    PolySystem,
    bounded_witness_search,
    encode,
    extract_solution,
    to_basic_set,
    verify_witness,
    witness_from_solution,
)
