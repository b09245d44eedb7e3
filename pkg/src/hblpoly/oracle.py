"""Independent brute-force verifiers for the inequality and the polytope.

These are deliberately dumb: they verify the set-form inequality by exact
big-integer comparison, the function-form inequality numerically, build
the classical counterexample families for infeasible exponents, and
produce outer approximations of the polytope from bounded-height
subspaces.  They share no code path with the decision algorithm, which is
what makes them useful as oracles.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction

from .linalg import RationalMatrix, Subspace, invert, rank, as_fraction
from .datum import (
    Criticality,
    ExponentTuple,
    HblDatum,
    classify,
    subspace_stream,
    subspaces_up_to_height,
)
from .polytope import Polytope, from_rank_constraints


class UnsupportedInstanceError(ValueError):
    """The function-form verifier cannot reduce the sum to a finite scan."""


@dataclass(frozen=True)
class PointSet:
    """A finite, duplicate-free set of integer points in Z^d."""

    dim: int
    points: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(set(self.points)) != len(self.points):
            raise ValueError("points must be duplicate-free")
        for p in self.points:
            if len(p) != self.dim:
                raise ValueError("point length disagrees with dim")

    @staticmethod
    def from_points(dim: int, pts) -> PointSet:
        dedup: dict[tuple[int, ...], None] = {}
        for p in pts:
            dedup[tuple(int(x) for x in p)] = None
        return PointSet(dim, tuple(dedup))

    def to_json(self):
        return {"dim": self.dim, "points": [list(p) for p in self.points]}

    @staticmethod
    def from_json(obj) -> PointSet:
        return PointSet.from_points(int(obj["dim"]), obj["points"])


@dataclass(frozen=True)
class FunctionTable:
    """A finitely supported nonnegative function on Z^{d_j}.

    Zero values are dropped at construction.
    """

    dim: int
    support: tuple[tuple[tuple[int, ...], Fraction], ...]

    @staticmethod
    def from_mapping(dim: int, mapping) -> FunctionTable:
        items = []
        for point, value in mapping.items() if hasattr(mapping, "items") else mapping:
            v = as_fraction(value)
            if v < 0:
                raise ValueError("function values must be nonnegative")
            if v > 0:
                items.append((tuple(int(x) for x in point), v))
        items.sort()
        return FunctionTable(dim, tuple(items))

    def value_at(self, point) -> Fraction:
        key = tuple(point)
        for p, v in self.support:
            if p == key:
                return v
        return Fraction(0)

    def as_dict(self):
        return dict(self.support)


def _image_points(m: RationalMatrix, points) -> set:
    return {m.apply(p) for p in points}


def verify_set_inequality(
    datum: HblDatum, s: ExponentTuple, e: PointSet
) -> tuple[bool, int, int]:
    """Exact check of |E| <= prod |phi_j(E)|^{s_j}, at constant 1.

    Both sides are raised to the lcm L of the exponent denominators and
    compared as exact integers; the two compared integers are returned.
    """
    if not e.points:
        raise ValueError("the point set must be nonempty")
    if len(s) != datum.num_maps:
        raise ValueError("exponent tuple length disagrees with the number of maps")
    L = 1
    for x in s:
        L = L * x.denominator // math.gcd(L, x.denominator)
    lhs = len(e.points) ** L
    rhs = 1
    for m, sj in zip(datum.maps, s):
        count = len(_image_points(m, e.points))
        rhs *= count ** int(sj * L)
    return lhs <= rhs, lhs, rhs


def verify_function_inequality(
    datum: HblDatum,
    s: ExponentTuple,
    tables: list[FunctionTable],
    tol: float = 1e-9,
) -> bool:
    """Numeric check of sum_x prod f_j(phi_j(x)) <= prod ||f_j||_{1/s_j}.

    The sum runs over the finitely many lattice points whose every image
    lies in the corresponding support; the comparison is floating point
    with relative tolerance tol because 1/s_j-th roots are irrational.
    Exponents equal to zero use the sup norm.
    """
    m = datum.num_maps
    if len(s) != m or len(tables) != m:
        raise ValueError("need one exponent and one table per map")
    for j, x in enumerate(s):
        if not 0 <= x <= 1:
            raise ValueError(f"component {j} outside [0,1]: {x}")
    rhs = 1.0
    for sj, table in zip(s, tables):
        values = [v for _, v in table.support]
        if sj == 0:
            norm = float(max(values)) if values else 0.0
        elif values:
            p = 1 / float(sj)
            norm = sum(float(v) ** p for v in values) ** (1 / p)
        else:
            norm = 0.0
        rhs *= norm
    if any(not table.support for table in tables):
        return True  # empty support forces a zero left-hand side
    lhs = _function_lhs(datum, tables)
    return float(lhs) <= rhs * (1 + tol)


def _function_lhs(datum: HblDatum, tables: list[FunctionTable]) -> Fraction:
    d = datum.ambient_dim
    if d == 0:
        total = Fraction(1)
        for table in tables:
            total *= table.value_at((0,) * table.dim)
        return total
    # rows of all maps, annotated with the value interval of a matching support
    rows = []
    for m, table in zip(datum.maps, tables):
        for i in range(m.rows):
            coords = [p[i] for p, _ in table.support]
            rows.append((m.entries[i], min(coords), max(coords)))
    selected = []
    seen = RationalMatrix.from_rows([], cols=d)
    for row, lo, hi in rows:
        candidate = seen.vstack(RationalMatrix.from_rows([row], cols=d))
        if rank(candidate) > seen.rows:
            seen = candidate
            selected.append((row, lo, hi))
        if len(selected) == d:
            break
    if len(selected) < d:
        raise UnsupportedInstanceError(
            "the maps have a nontrivial common kernel; the candidate set is infinite"
        )
    square = RationalMatrix.from_rows([r for r, _, _ in selected], cols=d)
    inv = invert(square)
    assert inv is not None
    bounds = []
    for i in range(d):
        lo = hi = Fraction(0)
        for k, (_, blo, bhi) in enumerate(selected):
            c = inv.entries[i][k]
            lo += min(c * blo, c * bhi)
            hi += max(c * blo, c * bhi)
        bounds.append((math.ceil(lo), math.floor(hi)))
    volume = 1
    for lo, hi in bounds:
        volume *= max(0, hi - lo + 1)
    if volume > 5_000_000:
        raise UnsupportedInstanceError(f"candidate box too large ({volume} points)")
    lookups = [table.as_dict() for table in tables]
    total = Fraction(0)
    ranges = [range(lo, hi + 1) for lo, hi in bounds]
    for x in _product(ranges):
        term = Fraction(1)
        for m, table in zip(datum.maps, lookups):
            y = m.apply(x)
            v = table.get(y)
            if not v:
                term = Fraction(0)
                break
            term *= v
        total += term
    return total


def _product(ranges):
    return itertools.product(*ranges)


def counterexample_family(
    datum: HblDatum, s: ExponentTuple, h: Subspace, n: int
) -> PointSet:
    """The grid E_N = {sum n_i e_i : n_i in 1..N} inside a supercritical H.

    The e_i are the integer-scaled basis rows of H; |E_N| = N^dim(H), and
    for N large enough the set-form check fails on E_N because the images
    grow like N to the weighted rank sum, which is smaller.
    """
    if n < 1:
        raise ValueError("N must be at least 1")
    if classify(datum, h, s) is not Criticality.SUPERCRITICAL:
        raise ValueError("witness subspace is not supercritical for these exponents")
    generators = h.integer_basis_rows()
    points = []
    for combo in _product([range(1, n + 1)] * len(generators)):
        vec = [0] * datum.ambient_dim
        for c, g in zip(combo, generators):
            for i, gi in enumerate(g):
                vec[i] += c * gi
        points.append(tuple(vec))
    return PointSet.from_points(datum.ambient_dim, points)


def brute_force_constraints(datum: HblDatum, height: int) -> Polytope:
    """Outer approximation from every subspace of height at most h.

    Equals the true polytope whenever every binding constraint has a
    witness of that height.
    """
    if height < 1:
        raise ValueError("height must be at least 1")
    spaces = subspaces_up_to_height(datum.ambient_dim, height)
    return from_rank_constraints(datum, spaces)


def find_supercritical_witness(
    datum: HblDatum, s: ExponentTuple, max_subspaces: int = 10_000
) -> Subspace | None:
    """First enumerated subspace that is supercritical for s, if any."""
    count = 0
    for w in subspace_stream(datum.ambient_dim):
        count += 1
        if count > max_subspaces:
            return None
        if classify(datum, w, s) is Criticality.SUPERCRITICAL:
            return w
    return None


# --- deterministic samplers -------------------------------------------------

def _clip(value: int, box: int) -> int:
    return max(-box, min(box, value))


def sample_point_set(rng: random.Random, dim: int, box: int = 10, max_size: int = 100) -> PointSet:
    """One random point set: uniform box samples or a structured family.

    Structured families (grids, lines, unions of cosets) sit near equality
    in the set-form inequality and stress its sharpness.
    """
    kind = rng.randrange(4)
    pts: list[tuple[int, ...]] = []
    if kind == 0:
        size = rng.randint(1, max_size)
        for _ in range(size):
            pts.append(tuple(rng.randint(-box, box) for _ in range(dim)))
    elif kind == 1:
        extents = [rng.randint(1, 4) for _ in range(dim)]
        while _volume(extents) > max_size:
            extents[rng.randrange(dim)] = 1
        base = [rng.randint(-box, box) for _ in range(dim)]
        strides = [rng.randint(1, 3) for _ in range(dim)]
        for combo in _product([range(e) for e in extents]):
            pts.append(
                tuple(_clip(b + c * st, box) for b, c, st in zip(base, combo, strides))
            )
    elif kind == 2:
        length = rng.randint(1, min(max_size, 2 * box + 1))
        base = [rng.randint(-box, box) for _ in range(dim)]
        direction = [rng.randint(-2, 2) for _ in range(dim)]
        if not any(direction):
            direction[rng.randrange(dim)] = 1
        for t in range(length):
            pts.append(tuple(_clip(b + t * g, box) for b, g in zip(base, direction)))
    else:
        shifts = [
            tuple(rng.randint(-box, box) for _ in range(dim))
            for _ in range(rng.randint(1, 3))
        ]
        extents = [rng.randint(1, 3) for _ in range(dim)]
        for shift in shifts:
            for combo in _product([range(e) for e in extents]):
                pts.append(tuple(_clip(b + c, box) for b, c in zip(shift, combo)))
    return PointSet.from_points(dim, pts[:max_size])


def _volume(extents) -> int:
    v = 1
    for e in extents:
        v *= e
    return v


def sample_function_table(rng: random.Random, dim: int, box: int = 3, max_size: int = 6) -> FunctionTable:
    size = rng.randint(1, max_size)
    mapping = {}
    for _ in range(size):
        point = tuple(rng.randint(-box, box) for _ in range(dim))
        mapping[point] = Fraction(rng.randint(1, 9), rng.randint(1, 9))
    return FunctionTable.from_mapping(dim, mapping)


def _sample_rng(seed: int, index: int) -> random.Random:
    # per-sample stream so batches could be verified in parallel
    return random.Random(seed * 1_000_003 + index)


def run_set_verification(
    datum: HblDatum,
    s: ExponentTuple,
    samples: int,
    seed: int = 0,
    box: int = 10,
    max_size: int = 100,
) -> dict:
    """Batch set-form verification; returns the report dictionary."""
    L = 1
    for x in s:
        L = L * x.denominator // math.gcd(L, x.denominator)
    violations = []
    worst = -math.inf
    for i in range(samples):
        rng = _sample_rng(seed, i)
        e = sample_point_set(rng, datum.ambient_dim, box, max_size)
        holds, lhs, rhs = verify_set_inequality(datum, s, e)
        ratio_log = (math.log(lhs) - math.log(rhs)) / L
        worst = max(worst, ratio_log)
        if not holds:
            violations.append({"sample": i, "lhs_pow": str(lhs), "rhs_pow": str(rhs)})
    return {"trials": samples, "violations": violations, "worst_ratio_log": worst}


def run_function_verification(
    datum: HblDatum,
    s: ExponentTuple,
    samples: int,
    seed: int = 0,
    tol: float = 1e-9,
) -> dict:
    violations = []
    for i in range(samples):
        rng = _sample_rng(seed, i)
        tables = [sample_function_table(rng, m.rows) for m in datum.maps]
        if not verify_function_inequality(datum, s, tables, tol):
            violations.append({"sample": i})
    return {"trials": samples, "violations": violations}
