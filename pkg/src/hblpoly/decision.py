"""The decision algorithm: compute the admissible polytope exactly.

The loop feeds the canonical subspace enumeration into the rank-constraint
polytope one subspace at a time.  Whenever the inequality set grows, the
extreme points of the current outer approximation are tested for actual
membership; once every extreme point belongs, the approximation is the
convex hull of member points and therefore equals the true polytope.

Membership of a single exponent tuple is decided recursively: components
equal to 1 or 0 strip a map off the datum, and interior tuples factor the
datum through a critical subspace into a restriction and a quotient of
strictly smaller ambient dimension.
"""

from __future__ import annotations

import contextlib
from dataclasses import dataclass, field
from fractions import Fraction

from .linalg import Subspace, kernel_subspace
from .datum import (
    ExponentTuple,
    HblDatum,
    Criticality,
    classify,
    delete_index,
    quotient_datum,
    restrict_datum,
    restrict_to_kernel_datum,
    subspace_stream,
)
from .polytope import (
    Inequality,
    Polytope,
    Vertex,
    contains,
    extreme_points,
)
from .datum import rank_tuple


class BudgetExhaustedError(RuntimeError):
    """The subspace budget ran out before the loop halted.

    The partial result is a valid OUTER approximation of the true
    polytope (it may be strictly larger, never smaller).
    """

    def __init__(self, message: str, partial: PolytopeResult | None = None):
        super().__init__(message)
        self.partial = partial


@dataclass(frozen=True)
class MembershipTrace:
    """Tree of reduction steps justifying a membership verdict.

    Kinds: "ambient_zero" and "base_m1" are leaves; "one" / "zero" carry
    the reduced index and one child; "split" carries the critical witness
    and the two factor traces.  "supercritical" (a refuting witness) and
    "in_polytope" (containment in the computed polytope, no proper
    critical witness applicable) terminate the public membership path.
    """

    kind: str
    index: int | None = None
    witness: Subspace | None = None
    children: tuple[MembershipTrace, ...] = ()

    def to_json(self):
        obj: dict = {"kind": self.kind}
        if self.index is not None:
            obj["index"] = self.index
        if self.witness is not None:
            obj["witness"] = self.witness.to_json()
        if self.children:
            obj["children"] = [c.to_json() for c in self.children]
        return obj

    def walk(self):
        yield self
        for child in self.children:
            yield from child.walk()


@dataclass(frozen=True)
class SplitEvent:
    """One critical-split step, recorded for independent re-verification."""

    datum: HblDatum
    s: ExponentTuple
    witness: Subspace
    restricted: HblDatum
    quotient: HblDatum
    verdict_restricted: bool
    verdict_quotient: bool


@dataclass(frozen=True)
class PolytopeResult:
    polytope: Polytope
    vertices: tuple[Vertex, ...]
    steps_used: int
    certificate: tuple[MembershipTrace, ...]
    history: tuple[tuple[int, Polytope], ...] = ()

    def vertex_points(self) -> list[ExponentTuple]:
        return [v.point for v in self.vertices]

    def to_json(self):
        from .linalg import format_rational

        return {
            "m": self.polytope.m,
            "inequalities": [q.to_json() for q in self.polytope.inequalities],
            "vertices": [[format_rational(x) for x in v.point] for v in self.vertices],
            "steps_used": self.steps_used,
            "traces": [t.to_json() for t in self.certificate],
        }


_memo: dict[str, PolytopeResult] = {}
_split_sink: list | None = None


def clear_cache() -> None:
    _memo.clear()


@contextlib.contextmanager
def record_split_events(sink: list):
    """Collect every SplitEvent executed inside the block into sink."""
    global _split_sink
    previous = _split_sink
    _split_sink = sink
    try:
        yield sink
    finally:
        _split_sink = previous


def base_case_rank_one(datum: HblDatum) -> Polytope:
    """The polytope of a single-map datum, computed directly.

    Zero ambient dimension gives the whole interval; an injective map
    pins s = 1; a nonzero kernel makes the polytope empty (witnessed by
    a kernel line, whose constraint 0*s >= 1 is infeasible).
    """
    if datum.num_maps != 1:
        raise ValueError("base case applies to single-map data only")
    d = datum.ambient_dim
    if d == 0:
        return Polytope(1, ())
    kernel = kernel_subspace(datum.maps[0])
    if kernel.dim == 0:
        return Polytope(1, (Inequality((d,), d, Subspace.full(d)),))
    line = Subspace.from_spanning_rows(d, [kernel.basis.entries[0]])
    return Polytope(1, (Inequality((0,), 1, line),))


def compute_polytope(datum: HblDatum, budget: int | None = None) -> PolytopeResult:
    """Exact polytope of a datum: inequalities with witnesses and vertices.

    budget, when given, bounds the number of enumerated subspaces; running
    out raises BudgetExhaustedError carrying the current outer
    approximation.  Results are memoized on the datum serialization.
    """
    key = datum.cache_key()
    cached = _memo.get(key)
    if cached is not None:
        return cached

    if datum.num_maps == 1:
        poly = base_case_rank_one(datum)
        vertices = tuple(extreme_points(poly))
        certificate = tuple(MembershipTrace("base_m1") for _ in vertices)
        result = PolytopeResult(poly, vertices, 0, certificate, ((0, poly),))
        _memo[key] = result
        return result

    m = datum.num_maps
    inequalities: list[Inequality] = []
    seen: set[tuple[tuple[int, ...], int]] = set()
    history: list[tuple[int, Polytope]] = []
    checked_at = -1
    n = 0
    for w in subspace_stream(datum.ambient_dim):
        if budget is not None and n + 1 > budget:
            poly = Polytope(m, tuple(inequalities))
            partial = PolytopeResult(poly, tuple(extreme_points(poly)), n, (), tuple(history))
            raise BudgetExhaustedError(
                f"subspace budget {budget} exhausted before halting", partial
            )
        n += 1
        rt = rank_tuple(datum, w)
        if rt.r != 0:
            ineq_key = (rt.r_sub, rt.r)
            if ineq_key not in seen:
                seen.add(ineq_key)
                inequalities.append(Inequality(rt.r_sub, rt.r, w))
        if len(inequalities) == checked_at:
            continue  # the polytope did not change; the last verdict stands
        checked_at = len(inequalities)
        poly = Polytope(m, tuple(inequalities))
        history.append((n, poly))
        vertices = extreme_points(poly)
        outcomes = [_vertex_member(datum, v, poly, budget) for v in vertices]
        if all(ok for ok, _ in outcomes):
            result = PolytopeResult(
                poly,
                tuple(vertices),
                n,
                tuple(trace for _, trace in outcomes),
                tuple(history),
            )
            _memo[key] = result
            return result
    raise AssertionError("subspace enumeration exhausted without halting")


def is_member(
    datum: HblDatum, s: ExponentTuple, budget: int | None = None
) -> tuple[bool, MembershipTrace]:
    """Decide s in P(datum), with a trace of the reductions used."""
    if len(s) != datum.num_maps:
        raise ValueError("exponent tuple length disagrees with the number of maps")
    for j, x in enumerate(s):
        if not 0 <= x <= 1:
            raise ValueError(f"component {j} outside [0,1]: {x}")
    return _member_dispatch(datum, tuple(Fraction(x) for x in s), budget, None)


def _member_dispatch(
    datum: HblDatum,
    s: ExponentTuple,
    budget: int | None,
    vertex_context: tuple[Polytope, Vertex] | None,
) -> tuple[bool, MembershipTrace]:
    d = datum.ambient_dim
    if d == 0:
        return True, MembershipTrace("ambient_zero")
    if datum.num_maps == 1:
        poly = base_case_rank_one(datum)
        return contains(poly, s), MembershipTrace("base_m1")
    for i, x in enumerate(s):
        if x == 1:
            reduced = restrict_to_kernel_datum(datum, i)
            ok, child = _member_dispatch(reduced, s[:i] + s[i + 1 :], budget, None)
            return ok, MembershipTrace("one", index=i, children=(child,))
    for i, x in enumerate(s):
        if x == 0:
            reduced = delete_index(datum, i)
            ok, child = _member_dispatch(reduced, s[:i] + s[i + 1 :], budget, None)
            return ok, MembershipTrace("zero", index=i, children=(child,))

    # all components strictly inside (0,1)
    if vertex_context is not None:
        poly, vertex = vertex_context
        for idx in vertex.tight_inequality_indices():
            witness = poly.inequalities[idx].witness
            if witness is not None and 0 < witness.dim < d:
                return _split_traced(datum, s, witness, budget)
        raise AssertionError(
            "interior extreme point without a proper critical witness"
        )

    result = compute_polytope(datum, budget)
    for ineq in result.polytope.inequalities:
        if not ineq.holds_at(s):
            return False, MembershipTrace("supercritical", witness=ineq.witness)
    for ineq in result.polytope.inequalities:
        if (
            ineq.witness is not None
            and 0 < ineq.witness.dim < d
            and ineq.is_tight_at(s)
        ):
            return _split_traced(datum, s, ineq.witness, budget)
    return True, MembershipTrace("in_polytope")


def _vertex_member(
    datum: HblDatum, vertex: Vertex, poly: Polytope, budget: int | None
) -> tuple[bool, MembershipTrace]:
    return _member_dispatch(datum, vertex.point, budget, (poly, vertex))


def _split_traced(
    datum: HblDatum, s: ExponentTuple, witness: Subspace, budget: int | None
) -> tuple[bool, MembershipTrace]:
    restricted = restrict_datum(datum, witness)
    quotient = quotient_datum(datum, witness)
    ok_r, trace_r = _member_dispatch(restricted, s, budget, None)
    ok_q, trace_q = _member_dispatch(quotient, s, budget, None)
    if _split_sink is not None:
        _split_sink.append(
            SplitEvent(datum, s, witness, restricted, quotient, ok_r, ok_q)
        )
    return ok_r and ok_q, MembershipTrace(
        "split", witness=witness, children=(trace_r, trace_q)
    )


def member_with_critical(
    datum: HblDatum, s: ExponentTuple, witness: Subspace, budget: int | None = None
) -> bool:
    """Membership via a given critical subspace: factor and test both parts.

    Requires 0 < dim W < ambient_dim and W critical with respect to s;
    returns the conjunction of containment in the two factor polytopes.
    """
    if not 0 < witness.dim < datum.ambient_dim:
        raise ValueError("critical subspace must be proper and nonzero")
    if classify(datum, witness, s) is not Criticality.CRITICAL:
        raise ValueError("subspace is not critical for the given exponents")
    restricted = compute_polytope(restrict_datum(datum, witness), budget)
    quotient = compute_polytope(quotient_datum(datum, witness), budget)
    return contains(restricted.polytope, s) and contains(quotient.polytope, s)
