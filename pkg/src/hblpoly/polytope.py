"""Exact H-representation polytopes inside the unit box [0,1]^m.

A Polytope stores integer-coefficient inequalities sum_j coeffs[j]*s_j >= rhs
(the box constraints 0 <= s_j <= 1 are implicit).  Extreme points are found
by brute force over m-subsets of constraints, which is exact and entirely
adequate at the scale where these polytopes arise (m <= 6 or so).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .linalg import RationalMatrix, Subspace, format_rational, solve_square
from .datum import ExponentTuple, HblDatum, rank_tuple


@dataclass(frozen=True)
class Inequality:
    """sum_j coeffs[j] * s_j >= rhs, with an optional witness subspace.

    When present, the witness W satisfies rank_tuple(D, W) = (rhs; coeffs)
    for the datum the inequality came from.
    """

    coeffs: tuple[int, ...]
    rhs: int
    witness: Subspace | None = None

    def evaluate(self, s: ExponentTuple) -> Fraction:
        return sum((Fraction(c) * x for c, x in zip(self.coeffs, s)), Fraction(0))

    def holds_at(self, s: ExponentTuple) -> bool:
        return self.evaluate(s) >= self.rhs

    def is_tight_at(self, s: ExponentTuple) -> bool:
        return self.evaluate(s) == self.rhs

    def to_json(self):
        return {
            "coeffs": list(self.coeffs),
            "rhs": self.rhs,
            "witness": self.witness.to_json() if self.witness is not None else None,
        }

    @staticmethod
    def from_json(obj) -> Inequality:
        witness = obj.get("witness")
        return Inequality(
            tuple(int(c) for c in obj["coeffs"]),
            int(obj["rhs"]),
            Subspace.from_json(witness) if witness is not None else None,
        )


@dataclass(frozen=True)
class Vertex:
    """An extreme point together with the indices of its tight constraints.

    Active entries are ("ineq", i) for stored inequalities and
    ("lo", j) / ("hi", j) for the box constraints s_j >= 0 / s_j <= 1.
    """

    point: ExponentTuple
    active: tuple[tuple[str, int], ...]

    def tight_inequality_indices(self) -> tuple[int, ...]:
        return tuple(i for kind, i in self.active if kind == "ineq")


@dataclass(frozen=True)
class Polytope:
    m: int
    inequalities: tuple[Inequality, ...]

    def __post_init__(self):
        for ineq in self.inequalities:
            if len(ineq.coeffs) != self.m:
                raise ValueError("inequality arity disagrees with m")
            if not any(ineq.coeffs) and ineq.rhs <= 0:
                raise ValueError("tautologous inequality must not be stored")

    def satisfies_inequalities(self, s: ExponentTuple) -> bool:
        """Check only the stored inequalities, ignoring the box bounds."""
        if len(s) != self.m:
            raise ValueError("exponent tuple length disagrees with m")
        return all(ineq.holds_at(s) for ineq in self.inequalities)

    def to_json(self, vertices: list[Vertex] | None = None):
        if vertices is None:
            vertices = extreme_points(self)
        points = sorted(v.point for v in vertices)
        return {
            "m": self.m,
            "inequalities": [ineq.to_json() for ineq in self.inequalities],
            "vertices": [[format_rational(x) for x in p] for p in points],
        }

    @staticmethod
    def from_json(obj) -> Polytope:
        return Polytope(int(obj["m"]), tuple(Inequality.from_json(q) for q in obj["inequalities"]))


def from_rank_constraints(datum: HblDatum, subspaces) -> Polytope:
    """One inequality per subspace: sum_j rank_j(W) s_j >= dim W.

    The zero subspace yields a tautology and is skipped; duplicate
    (coeffs, rhs) pairs are kept once, retaining the first witness.
    """
    seen: dict[tuple[tuple[int, ...], int], None] = {}
    out: list[Inequality] = []
    for w in subspaces:
        rt = rank_tuple(datum, w)
        if rt.r == 0:
            continue
        key = (rt.r_sub, rt.r)
        if key in seen:
            continue
        seen[key] = None
        out.append(Inequality(rt.r_sub, rt.r, w))
    return Polytope(datum.num_maps, tuple(out))


def contains(polytope: Polytope, s: ExponentTuple) -> bool:
    """True iff s lies in the polytope; s must lie in [0,1]^m exactly."""
    if len(s) != polytope.m:
        raise ValueError("exponent tuple length disagrees with m")
    for j, x in enumerate(s):
        if not 0 <= x <= 1:
            raise ValueError(f"component {j} outside [0,1]: {x}")
    return polytope.satisfies_inequalities(s)


def _all_constraints(polytope: Polytope):
    """Stored inequalities plus the 2m box inequalities, as (normal, rhs, tag)."""
    m = polytope.m
    rows = []
    for i, ineq in enumerate(polytope.inequalities):
        rows.append((tuple(Fraction(c) for c in ineq.coeffs), Fraction(ineq.rhs), ("ineq", i)))
    for j in range(m):
        lo = tuple(Fraction(1) if k == j else Fraction(0) for k in range(m))
        rows.append((lo, Fraction(0), ("lo", j)))
    for j in range(m):
        hi = tuple(Fraction(-1) if k == j else Fraction(0) for k in range(m))
        rows.append((hi, Fraction(-1), ("hi", j)))
    return rows


def extreme_points(polytope: Polytope) -> list[Vertex]:
    """All extreme points, each reported once with its full active set.

    Every m-subset of constraints with linearly independent normals is
    solved; the solution is kept iff it satisfies all remaining
    constraints.  Points are returned in lexicographic order.
    """
    m = polytope.m
    constraints = _all_constraints(polytope)
    found: dict[ExponentTuple, None] = {}
    for subset in itertools.combinations(range(len(constraints)), m):
        mat = RationalMatrix.from_rows([constraints[i][0] for i in subset], cols=m)
        rhs = [constraints[i][1] for i in subset]
        point = solve_square(mat, rhs)
        if point is None:
            continue
        if all(_dot(normal, point) >= c for normal, c, _ in constraints):
            found.setdefault(tuple(point), None)
    vertices = []
    for point in sorted(found):
        active = tuple(
            tag for normal, c, tag in constraints if _dot(normal, point) == c
        )
        vertices.append(Vertex(point, active))
    return vertices


def _dot(a, b) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def minimize_linear(polytope: Polytope, weights) -> tuple[Fraction, Vertex]:
    """Exact minimum of <w, s> over the polytope, attained at a vertex.

    Ties are broken toward the lexicographically smallest point.  Raises
    on an empty polytope.
    """
    w = tuple(Fraction(x) for x in weights)
    if len(w) != polytope.m:
        raise ValueError("weight vector length disagrees with m")
    vertices = extreme_points(polytope)
    if not vertices:
        raise ValueError("polytope is empty")
    best = min(vertices, key=lambda v: (_dot(w, v.point), v.point))
    return _dot(w, best.point), best


def polytopes_equal(p: Polytope, q: Polytope) -> bool:
    """Do the two H-representations describe the same set?

    Decided by mutual containment of extreme points, which suffices for
    compact convex sets inside the box.
    """
    if p.m != q.m:
        raise ValueError("polytopes have different arity")
    p_vertices = extreme_points(p)
    q_vertices = extreme_points(q)
    return all(contains(q, v.point) for v in p_vertices) and all(
        contains(p, v.point) for v in q_vertices
    )
