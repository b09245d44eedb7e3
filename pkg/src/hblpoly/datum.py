"""HBL datum model: rank tuples, criticality, datum surgery, enumeration.

An HBL datum is an ambient rank d together with m linear maps; everything
is computed over Q, which by restriction of scalars gives exactly the
subgroup-rank conditions on Z^d.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .linalg import (
    AmbientMismatchError,
    RationalMatrix,
    Subspace,
    as_fraction,
    extend_to_full_basis,
    format_rational,
    image_subspace,
    invert,
    kernel_subspace,
    rank_of_int_rows,
)

ExponentTuple = tuple[Fraction, ...]


def exponents(values) -> ExponentTuple:
    """Normalize a sequence of rationals into an exponent tuple (all >= 0)."""
    s = tuple(as_fraction(x) for x in values)
    for j, x in enumerate(s):
        if x < 0:
            raise ValueError(f"exponent {j} is negative: {x}")
    return s


@dataclass(frozen=True)
class HblDatum:
    """Ambient dimension d plus m linear maps with d columns each."""

    ambient_dim: int
    maps: tuple[RationalMatrix, ...]

    def __post_init__(self):
        if self.ambient_dim < 0:
            raise ValueError("ambient dimension must be nonnegative")
        if len(self.maps) < 1:
            raise ValueError("a datum needs at least one map")
        for m in self.maps:
            if m.cols != self.ambient_dim:
                raise ValueError("every map must have ambient_dim columns")

    @property
    def num_maps(self) -> int:
        return len(self.maps)

    def cache_key(self) -> str:
        parts = [str(self.ambient_dim)]
        for m in self.maps:
            parts.append(
                f"{m.rows}x{m.cols}:" + ",".join(format_rational(x) for row in m.entries for x in row)
            )
        return ";".join(parts)

    def to_json(self):
        return {"ambient_dim": self.ambient_dim, "maps": [m.to_json() for m in self.maps]}

    @staticmethod
    def from_json(obj) -> HblDatum:
        ambient = int(obj["ambient_dim"])
        maps = []
        for entry in obj["maps"]:
            m = RationalMatrix.from_json(entry)
            if m.cols != ambient:
                raise ValueError("map width disagrees with ambient_dim")
            if not m.is_integral():
                raise ValueError("datum maps must have integer entries")
            maps.append(m)
        return HblDatum(ambient, tuple(maps))


@dataclass(frozen=True)
class RankTuple:
    """dim W together with the ranks of each map restricted to W."""

    r: int
    r_sub: tuple[int, ...]


class Criticality(enum.Enum):
    STRICTLY_SUBCRITICAL = "strictly_subcritical"
    CRITICAL = "critical"
    SUPERCRITICAL = "supercritical"


def rank_tuple(datum: HblDatum, w: Subspace) -> RankTuple:
    """(dim W; rank of map_j on W for each j)."""
    if w.ambient_dim != datum.ambient_dim:
        raise AmbientMismatchError("subspace and datum ambient dimensions differ")
    int_rows = w.integer_basis_rows()
    subranks = []
    for m in datum.maps:
        if m.rows == 0 or w.dim == 0:
            subranks.append(0)
            continue
        m_int = m.int_entries()
        if m_int is not None:
            # image vectors of the integer basis, one row per basis vector
            rows = [[sum(mi[k] * v[k] for k in range(len(v))) for mi in m_int] for v in int_rows]
            subranks.append(rank_of_int_rows(rows, m.rows))
        else:
            prod = m @ w.basis.transpose()
            rows = []
            for row in prod.entries:
                den = 1
                for x in row:
                    den = den * x.denominator // gcd(den, x.denominator)
                rows.append([int(x * den) for x in row])
            subranks.append(rank_of_int_rows(rows, prod.cols))
    return RankTuple(w.dim, tuple(subranks))


def classify(datum: HblDatum, w: Subspace, s: ExponentTuple) -> Criticality:
    """Compare dim W against sum s_j * rank_j(W), exactly."""
    if len(s) != datum.num_maps:
        raise ValueError("exponent tuple length disagrees with the number of maps")
    rt = rank_tuple(datum, w)
    weighted = sum((sj * rj for sj, rj in zip(s, rt.r_sub)), Fraction(0))
    if rt.r < weighted:
        return Criticality.STRICTLY_SUBCRITICAL
    if rt.r == weighted:
        return Criticality.CRITICAL
    return Criticality.SUPERCRITICAL


def restrict_datum(datum: HblDatum, w: Subspace) -> HblDatum:
    """Datum restricted to W: ambient dim(W), maps composed with W's basis.

    Codomains are kept as the original spaces; image ranks are unchanged
    by that choice.
    """
    if w.ambient_dim != datum.ambient_dim:
        raise AmbientMismatchError("subspace and datum ambient dimensions differ")
    basis_t = w.basis.transpose()
    return HblDatum(w.dim, tuple(m @ basis_t for m in datum.maps))


def quotient_datum(datum: HblDatum, w: Subspace) -> HblDatum:
    """Datum induced on V/W, with codomains V_j / image_j(W).

    Coordinates on V/W are the coefficients of the deterministic basis
    extension of W; each quotient map drops the image-of-W coordinates
    of the codomain, so dim([map_j](U/W)) = dim(map_j(U)) - dim(map_j(W))
    for every W <= U <= V.
    """
    if w.ambient_dim != datum.ambient_dim:
        raise AmbientMismatchError("subspace and datum ambient dimensions differ")
    d = datum.ambient_dim
    full = extend_to_full_basis(w)
    compl = RationalMatrix.from_rows(full.entries[w.dim :], cols=d)
    compl_t = compl.transpose()
    new_maps = []
    for m in datum.maps:
        image = image_subspace(m @ w.basis.transpose()) if w.dim > 0 else Subspace.zero(m.rows)
        cod_full = extend_to_full_basis(image)
        cod_inv = invert(cod_full.transpose())
        assert cod_inv is not None
        mapped = cod_inv @ m @ compl_t
        kept = mapped.entries[image.dim :]
        new_maps.append(RationalMatrix(m.rows - image.dim, d - w.dim, kept))
    return HblDatum(d - w.dim, tuple(new_maps))


def delete_index(datum: HblDatum, i: int) -> HblDatum:
    """Drop map i (0-based); the ambient space is unchanged."""
    if datum.num_maps < 2:
        raise ValueError("cannot delete the only map of a datum")
    if not 0 <= i < datum.num_maps:
        raise IndexError(f"map index {i} out of range")
    return HblDatum(datum.ambient_dim, datum.maps[:i] + datum.maps[i + 1 :])


def restrict_to_kernel_datum(datum: HblDatum, i: int) -> HblDatum:
    """Restrict to ker(map_i) and drop map i.

    Membership of s with s_i = 1 in the original polytope equals
    membership of s-without-i in the result's polytope.
    """
    if datum.num_maps < 2:
        raise ValueError("cannot delete the only map of a datum")
    if not 0 <= i < datum.num_maps:
        raise IndexError(f"map index {i} out of range")
    restricted = restrict_datum(datum, kernel_subspace(datum.maps[i]))
    return delete_index(restricted, i)


def clamp_exponents(s: ExponentTuple) -> ExponentTuple:
    """Componentwise min(s_j, 1); requires all components nonnegative."""
    one = Fraction(1)
    for j, x in enumerate(s):
        if x < 0:
            raise ValueError(f"exponent {j} is negative: {x}")
    return tuple(min(x, one) for x in s)


# --- countable enumeration of all subspaces of Q^d ---
#
# Height h block: every subspace spanned by integer vectors with entries in
# [-h, h] that did not already appear at a smaller height.  Within a block,
# subspaces are ordered by (dimension, flattened canonical basis).  Every
# subspace of Q^d has an integer spanning set, so it shows up at some
# finite height; blocks are cached per dimension and shared by all callers.

_enum_cache: dict[int, dict] = {}


def _box_vectors(d: int, h: int):
    if d == 0:
        return []
    vals = range(-h, h + 1)
    out = []

    def rec(prefix):
        if len(prefix) == d:
            if any(prefix):
                out.append(tuple(prefix))
            return
        for v in vals:
            rec(prefix + [v])

    rec([])
    return out


def _reduce_against(v: tuple[int, ...], int_rows, pivots) -> tuple[int, ...]:
    """Zero out the pivot coordinates of v against scaled RREF rows.

    Pure integer cross-multiplication; the result spans the same coset of
    the row space as v does.
    """
    r = list(v)
    for row, p in zip(int_rows, pivots):
        if r[p] != 0:
            lead = row[p]
            rp = r[p]
            r = [lead * a - rp * b for a, b in zip(r, row)]
            g = 0
            for x in r:
                g = gcd(g, x)
            if g > 1:
                r = [x // g for x in r]
    return tuple(r)


def _primitive_signed(r: tuple[int, ...]) -> tuple[int, ...] | None:
    g = 0
    for x in r:
        g = gcd(g, x)
    if g == 0:
        return None
    out = [x // g for x in r]
    lead = next(x for x in out if x != 0)
    if lead < 0:
        out = [-x for x in out]
    return tuple(out)


def _insert_reduced_row(space: Subspace, r_int: tuple[int, ...]) -> Subspace:
    """Canonical span of (space + one reduced row), without a full rref.

    r_int must be zero at all pivot columns of the space, which makes the
    insertion a single elimination pass.
    """
    d = space.ambient_dim
    lead = next(i for i, x in enumerate(r_int) if x != 0)
    pivot_val = Fraction(r_int[lead])
    new_row = tuple(Fraction(x) / pivot_val for x in r_int)
    rows = []
    for row in space.basis.entries:
        if row[lead] != 0:
            f = row[lead]
            rows.append(tuple(a - f * b for a, b in zip(row, new_row)))
        else:
            rows.append(row)
    position = 0
    for row in rows:
        if next(i for i, x in enumerate(row) if x != 0) < lead:
            position += 1
    rows.insert(position, new_row)
    return Subspace(d, RationalMatrix(len(rows), d, tuple(rows)))


def _grow_level(d: int, level, vectors) -> dict:
    """All spans of (space in level) + (one box vector), deduplicated.

    Growing by v and v' gives the same span exactly when their reductions
    against the space are parallel, so reduced primitive representatives
    dedup the work before any canonical basis is built.
    """
    grown: dict[Subspace, None] = {}
    for space in level:
        int_rows = space.integer_basis_rows()
        pivots = tuple(next(i for i, x in enumerate(row) if x != 0) for row in int_rows)
        reps: set[tuple[int, ...]] = set()
        for v in vectors:
            r = _primitive_signed(_reduce_against(v, int_rows, pivots))
            if r is None or r in reps:
                continue
            reps.add(r)
            bigger = _insert_reduced_row(space, r)
            if bigger not in grown:
                grown[bigger] = None
    return grown


def _block_at_height(d: int, h: int, seen: dict) -> list[Subspace]:
    fresh: dict[Subspace, None] = {}

    def record(space: Subspace) -> None:
        if space not in seen and space not in fresh:
            fresh[space] = None

    record(Subspace.zero(d))
    if h >= 1 and d >= 1:
        vectors = _box_vectors(d, h)
        level: dict[Subspace, None] = {Subspace.zero(d): None}
        for dim in range(d):
            if dim == d - 1:
                # growing a hyperplane by any outside vector gives Q^d
                record(Subspace.full(d))
                break
            level = _grow_level(d, level, vectors)
            for space in level:
                record(space)
    block = sorted(fresh, key=Subspace.sort_key)
    for space in block:
        seen[space] = None
    return block


def _state_for(d: int) -> dict:
    state = _enum_cache.get(d)
    if state is None:
        state = {"seen": {}, "ordered": [], "next_h": 0, "block_bounds": []}
        _enum_cache[d] = state
    return state


def _extend_to(d: int, n: int) -> None:
    state = _state_for(d)
    # dimensions 0 and 1 have finitely many subspaces; stop once exhausted
    limit = {0: 1, 1: 2}.get(d)
    while len(state["ordered"]) < n:
        if limit is not None and len(state["ordered"]) >= limit:
            break
        block = _block_at_height(d, state["next_h"], state["seen"])
        state["ordered"].extend(block)
        state["block_bounds"].append(len(state["ordered"]))
        state["next_h"] += 1


def enumerate_subspaces(d: int, n: int) -> list[Subspace]:
    """First n entries of the fixed enumeration of all subspaces of Q^d.

    Prefix-stable and duplicate-free.  For d <= 1 the enumeration is
    finite and the full (shorter) list is returned once exhausted.
    """
    if d < 0:
        raise ValueError("dimension must be nonnegative")
    if n < 1:
        raise ValueError("n must be at least 1")
    _extend_to(d, n)
    return _state_for(d)["ordered"][:n]


def subspace_stream(d: int):
    """Yield the enumeration lazily; terminates only for d <= 1."""
    i = 0
    while True:
        _extend_to(d, i + 1)
        ordered = _state_for(d)["ordered"]
        if i >= len(ordered):
            return
        yield ordered[i]
        i += 1


def subspaces_up_to_height(d: int, height: int) -> list[Subspace]:
    """The full height-<= h block of the enumeration, in enumeration order."""
    if height < 0:
        raise ValueError("height must be nonnegative")
    state = _state_for(d)
    while state["next_h"] <= height and (d > 1 or state["next_h"] <= 1):
        block = _block_at_height(d, state["next_h"], state["seen"])
        state["ordered"].extend(block)
        state["block_bounds"].append(len(state["ordered"]))
        state["next_h"] += 1
    bounds = state["block_bounds"]
    cut = bounds[min(height, len(bounds) - 1)]
    return state["ordered"][:cut]
