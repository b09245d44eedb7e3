"""Reduction between rational polynomial solvability and rank realizability.

A polynomial system is first normalized to a *basic system*: one variable
per bounded monomial, the pin u_0 = 1, multiplicative relations
u_a * u_b = u_{a+b}, and one affine polynomial per input equation.  A
queried rational prefix is then encoded as a tuple of integer matrices
whose rank-realizability (existence of a 2-dimensional subspace hitting
prescribed image dimensions) is equivalent to solvability of the system
with that prefix.  Witness subspaces can be built from known solutions,
verified, searched for at bounded height, and decoded back into solutions.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .linalg import (
    AmbientMismatchError,
    RationalMatrix,
    Subspace,
    as_fraction,
    format_rational,
    kernel_subspace,
    parse_rational,
)
from .datum import HblDatum, rank_tuple


class InvalidSolutionError(ValueError):
    """A claimed solution does not satisfy the basic system."""


class InvalidWitnessError(ValueError):
    """A claimed witness subspace fails the rank conditions."""


Monomial = tuple[int, ...]


@dataclass(frozen=True)
class PolySystem:
    """Polynomials with rational coefficients, as sparse term lists."""

    q: int
    polys: tuple[tuple[tuple[Monomial, Fraction], ...], ...]

    @staticmethod
    def from_term_lists(q: int, polys) -> PolySystem:
        if q < 1:
            raise ValueError("the system needs at least one variable")
        normalized = []
        for terms in polys:
            collected: dict[Monomial, Fraction] = {}
            for exps, coeff in terms:
                mono = tuple(int(e) for e in exps)
                if len(mono) != q or any(e < 0 for e in mono):
                    raise ValueError(f"bad exponent vector {mono}")
                c = collected.get(mono, Fraction(0)) + as_fraction(coeff)
                collected[mono] = c
            cleaned = tuple(sorted((m, c) for m, c in collected.items() if c != 0))
            if not cleaned:
                raise ValueError("zero polynomials are not allowed")
            normalized.append(cleaned)
        return PolySystem(q, tuple(normalized))

    def evaluate(self, poly_index: int, point) -> Fraction:
        x = [as_fraction(v) for v in point]
        total = Fraction(0)
        for mono, coeff in self.polys[poly_index]:
            term = coeff
            for xi, e in zip(x, mono):
                term *= xi**e
            total += term
        return total

    def is_solution(self, point) -> bool:
        return all(self.evaluate(i, point) == 0 for i in range(len(self.polys)))

    def to_json(self):
        return {
            "q": self.q,
            "polys": [
                {
                    "terms": [
                        {"exps": list(m), "coeff": format_rational(c)} for m, c in terms
                    ]
                }
                for terms in self.polys
            ],
        }

    @staticmethod
    def from_json(obj) -> PolySystem:
        return PolySystem.from_term_lists(
            int(obj["q"]),
            [
                [(t["exps"], parse_rational(str(t["coeff"]))) for t in poly["terms"]]
                for poly in obj["polys"]
            ],
        )


@dataclass(frozen=True)
class BasicSystem:
    """Affine polynomials plus multiplicative triples over monomial variables.

    num_vars is |D| where D = {0..d}^q indexes one variable per monomial;
    affine entries are (constant, ((var, coeff), ...)) with integer
    coefficients, and each triple (a, b, g) means u_a * u_b = u_g.
    projection lists the variables carrying the original x_1..x_q.
    """

    num_vars: int
    monomials: tuple[Monomial, ...]
    affine: tuple[tuple[int, tuple[tuple[int, int], ...]], ...]
    mults: tuple[tuple[int, int, int], ...]
    projection: tuple[int, ...]

    def check_solution(self, c) -> bool:
        vals = [as_fraction(x) for x in c]
        if len(vals) != self.num_vars:
            return False
        for const, coeffs in self.affine:
            if const + sum(vals[i] * k for i, k in coeffs) != 0:
                return False
        for a, b, g in self.mults:
            if vals[a] * vals[b] != vals[g]:
                return False
        return True

    def lift_point(self, x) -> tuple[Fraction, ...]:
        """Monomial lift: the value of every u_alpha at the point x."""
        vals = [as_fraction(v) for v in x]
        out = []
        for mono in self.monomials:
            term = Fraction(1)
            for xi, e in zip(vals, mono):
                term *= xi**e
            out.append(term)
        return tuple(out)


def to_basic_set(system: PolySystem) -> BasicSystem:
    """Normalize a polynomial system into a basic system.

    The monomial set is {0..d}^q for d the largest per-variable degree.
    Rational solutions of the input are exactly the projections of the
    rational solutions of the output.
    """
    if not system.polys:
        raise ValueError("the system must contain at least one polynomial")
    q = system.q
    d = 0
    for terms in system.polys:
        for mono, _ in terms:
            d = max(d, max(mono))
    monomials = tuple(itertools.product(range(d + 1), repeat=q))
    index = {mono: i for i, mono in enumerate(monomials)}
    zero_mono = (0,) * q

    affine: list[tuple[int, tuple[tuple[int, int], ...]]] = []
    affine.append((-1, ((index[zero_mono], 1),)))  # the pin u_0 = 1
    mults: list[tuple[int, int, int]] = []
    for a_pos, alpha in enumerate(monomials):
        if alpha == zero_mono:
            continue
        for b_pos in range(a_pos, len(monomials)):
            beta = monomials[b_pos]
            if beta == zero_mono:
                continue
            gamma = tuple(x + y for x, y in zip(alpha, beta))
            g_pos = index.get(gamma)
            if g_pos is not None:
                mults.append((a_pos, b_pos, g_pos))

    for terms in system.polys:
        denominators = 1
        for _, coeff in terms:
            denominators = denominators * coeff.denominator // gcd(denominators, coeff.denominator)
        coeffs = tuple(
            (index[mono], int(coeff * denominators)) for mono, coeff in terms
        )
        affine.append((0, coeffs))

    projection = []
    for i in range(q):
        unit = tuple(1 if j == i else 0 for j in range(q))
        if unit in index:
            projection.append(index[unit])
    return BasicSystem(
        len(monomials), monomials, tuple(affine), tuple(mults), tuple(projection)
    )


@dataclass(frozen=True)
class DiophEncoding:
    """The matrix tuple encoding a rank-realizability query.

    mu matrices of size nu x nu; a subspace V <= Q^nu with dim V = rho and
    dim(maps[i] V) = rho_list[i] for every i exists exactly when the
    underlying basic system has a rational solution extending the queried
    prefix a.
    """

    mu: int
    nu: int
    rho: int
    rho_list: tuple[int, ...]
    maps: tuple[RationalMatrix, ...]
    a: tuple[Fraction, ...]
    query_indices: tuple[int, ...]

    def to_json(self):
        return {
            "mu": self.mu,
            "nu": self.nu,
            "rho": self.rho,
            "rho_list": list(self.rho_list),
            "maps": [m.to_json() for m in self.maps],
            "a": [format_rational(x) for x in self.a],
            "query_indices": list(self.query_indices),
        }

    @staticmethod
    def from_json(obj) -> DiophEncoding:
        return DiophEncoding(
            int(obj["mu"]),
            int(obj["nu"]),
            int(obj["rho"]),
            tuple(int(r) for r in obj["rho_list"]),
            tuple(RationalMatrix.from_json(m) for m in obj["maps"]),
            tuple(parse_rational(str(x)) for x in obj["a"]),
            tuple(int(i) for i in obj["query_indices"]),
        )


def _matrix_from_rows(nu: int, rows: list[list[int]]) -> RationalMatrix:
    data = [list(r) for r in rows]
    while len(data) < nu:
        data.append([0] * nu)
    return RationalMatrix.from_rows(data, cols=nu)


def encode(basic: BasicSystem, t: int, a) -> DiophEncoding:
    """Build the matrix tuple for querying prefix a of the basic system.

    Coordinates on Q^nu are (u_0..u_q; v_0..v_q) with q = num_vars; u_0
    is the homogenizing coordinate.  Only the query maps depend on a.
    """
    q = basic.num_vars
    if t > len(basic.projection):
        raise ValueError("query length exceeds the number of projected variables")
    values = tuple(as_fraction(x) for x in a)
    if len(values) != t:
        raise ValueError("query tuple length disagrees with t")
    k = len(basic.mults)
    ell = len(basic.affine)
    mu = 4 + q + t + k + ell
    nu = 2 * q + 2
    rho_list = (1,) * (4 + q + k) + (0,) * (t + ell)

    def unit(i: int) -> list[int]:
        row = [0] * nu
        row[i] = 1
        return row

    def u(i: int) -> int:
        return i  # u_i lives at coordinate i, 0 <= i <= q

    def v(i: int) -> int:
        return q + 1 + i

    maps: list[RationalMatrix] = []
    maps.append(_matrix_from_rows(nu, [unit(u(0))]))
    maps.append(_matrix_from_rows(nu, [unit(v(0))]))
    maps.append(_matrix_from_rows(nu, [unit(u(i)) for i in range(q + 1)]))
    maps.append(_matrix_from_rows(nu, [unit(v(i)) for i in range(q + 1)]))
    for j in range(1, q + 1):
        row0 = unit(u(0))
        row0[v(0)] -= 1
        row1 = unit(u(j))
        row1[v(j)] -= 1
        maps.append(_matrix_from_rows(nu, [row0, row1]))
    for a_var, b_var, g_var in basic.mults:
        row0 = unit(u(1 + a_var))
        row0[v(0)] += 1
        row1 = unit(u(1 + g_var))
        row1[v(1 + b_var)] += 1
        maps.append(_matrix_from_rows(nu, [row0, row1]))
    for j in range(t):
        value = values[j]
        var = basic.projection[j]
        row0 = [0] * nu
        row0[u(0)] = value.numerator
        row0[u(1 + var)] = -value.denominator
        maps.append(_matrix_from_rows(nu, [row0]))
    for const, coeffs in basic.affine:
        row0 = [0] * nu
        row0[u(0)] = const
        for var, coeff in coeffs:
            row0[u(1 + var)] += coeff
        maps.append(_matrix_from_rows(nu, [row0]))
    assert len(maps) == mu
    return DiophEncoding(mu, nu, 2, rho_list, tuple(maps), values, basic.projection[:t])


def witness_from_solution(basic: BasicSystem, c) -> Subspace:
    """The canonical 2-dimensional witness of a full solution c.

    Spanned by (1, c, 0...0) and (0...0, 1, c) in Q^{2q+2}.
    """
    vals = tuple(as_fraction(x) for x in c)
    if not basic.check_solution(vals):
        raise InvalidSolutionError("the point does not satisfy the basic system")
    q = basic.num_vars
    first = (Fraction(1),) + vals + (Fraction(0),) * (q + 1)
    second = (Fraction(0),) * (q + 1) + (Fraction(1),) + vals
    return Subspace.from_spanning_rows(2 * q + 2, [first, second])


def verify_witness(encoding: DiophEncoding, witness: Subspace) -> bool:
    """Do the exact rank conditions hold for this subspace?"""
    if witness.ambient_dim != encoding.nu:
        raise AmbientMismatchError("witness dimension disagrees with nu")
    if witness.dim != encoding.rho:
        return False
    datum = HblDatum(encoding.nu, encoding.maps)
    return rank_tuple(datum, witness).r_sub == encoding.rho_list


def extract_solution(
    encoding: DiophEncoding, witness: Subspace
) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...]]:
    """Decode a verified witness into (queried prefix, full solution).

    Row reduction brings the basis to the pair h = (1, h_1..h_q; 0) and
    g = (0; 1, h_1..h_q); the h_j satisfy every relation of the basic
    system and the projected prefix equals the encoded query.
    """
    if not verify_witness(encoding, witness):
        raise InvalidWitnessError("witness fails the rank conditions")
    q = (encoding.nu - 2) // 2
    rows = [list(r) for r in witness.basis.entries]
    d_vec, e_vec = rows
    if d_vec[0] == 0:
        d_vec, e_vec = e_vec, d_vec
    if d_vec[0] == 0:
        raise InvalidWitnessError("no basis vector has a nonzero leading coordinate")
    d_vec = [x / d_vec[0] for x in d_vec]
    gamma = e_vec[0]
    g_tilde = [x - gamma * y for x, y in zip(e_vec, d_vec)]
    if any(g_tilde[: q + 1]):
        raise InvalidWitnessError("u-blocks of the basis are not parallel")
    g0 = g_tilde[q + 1]
    if g0 == 0:
        raise InvalidWitnessError("the reduced vector misses the v_0 coordinate")
    delta = d_vec[q + 1] / g0
    h = [x - delta * y for x, y in zip(d_vec, g_tilde)]
    if any(h[q + 1 :]):
        raise InvalidWitnessError("v-blocks of the basis are not parallel")
    g = [x / g0 for x in g_tilde]
    h_coords = h[: q + 1]
    g_coords = g[q + 1 :]
    if h_coords != g_coords:
        raise InvalidWitnessError("the two blocks disagree after reduction")
    full = tuple(h_coords[1:])
    prefix = tuple(full[i] for i in encoding.query_indices)
    return prefix, full


def bounded_witness_search(encoding: DiophEncoding, height: int) -> Subspace | None:
    """Search all 2-dim subspaces spanned by height-bounded integer pairs.

    Absence is NOT a proof of non-membership: a witness may exist at a
    larger height.  Every verifying subspace is annihilated by the maps
    with required rank zero, so the scan is restricted -- without loss --
    to pairs inside their common kernel; candidate pairs are
    canonicalized and deduplicated before the rank checks.
    """
    if height < 1:
        raise ValueError("height must be at least 1")
    nu = encoding.nu
    zero_rows: list = []
    for m, r in zip(encoding.maps, encoding.rho_list):
        if r == 0:
            zero_rows.extend(m.entries)
    if zero_rows:
        stacked = RationalMatrix.from_rows(zero_rows, cols=nu)
        pool = kernel_subspace(stacked)
    else:
        pool = Subspace.full(nu)
    if pool.dim < encoding.rho:
        return None
    datum = HblDatum(nu, encoding.maps)
    pool_ranks = rank_tuple(datum, pool).r_sub
    for needed, got in zip(encoding.rho_list, pool_ranks):
        if needed > got:
            return None  # the kernel pool cannot reach this rank

    candidates = _integer_points_of(pool, height)
    candidates.sort(key=lambda vec: (max(abs(x) for x in vec), vec))
    tested: set[Subspace] = set()
    for j in range(1, len(candidates)):
        for i in range(j):
            span = Subspace.from_spanning_rows(nu, [candidates[i], candidates[j]])
            if span.dim != 2 or span in tested:
                continue
            tested.add(span)
            if verify_witness(encoding, span):
                return span
    return None


def _integer_points_of(space: Subspace, height: int) -> list[tuple[int, ...]]:
    """Nonzero integer vectors of the subspace with all entries in [-h, h].

    RREF pivot coordinates parameterize the subspace, so scanning integer
    pivot values over the box and keeping integral bounded vectors is
    exhaustive.
    """
    if space.dim == 0:
        return []
    count = (2 * height + 1) ** space.dim
    if count > 20_000_000:
        raise ValueError(f"search space too large ({count} pivot combinations)")
    basis = space.basis.entries
    out = []
    for combo in itertools.product(range(-height, height + 1), repeat=space.dim):
        if not any(combo):
            continue
        vec = [Fraction(0)] * space.ambient_dim
        for lam, row in zip(combo, basis):
            if lam:
                vec = [x + lam * y for x, y in zip(vec, row)]
        if all(x.denominator == 1 and -height <= x <= height for x in vec):
            out.append(tuple(int(x) for x in vec))
    return out
