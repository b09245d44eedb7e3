"""Exact rational linear algebra: matrices, echelon forms, and subspaces.

Everything here works over Fraction (arbitrary-precision rationals); no
floating point is used anywhere.  Subspaces of Q^d are represented by
their reduced row echelon basis, which makes equality of subspaces a
plain tuple comparison and deduplication a dict lookup.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm


class AmbientMismatchError(ValueError):
    """Operands live in different ambient spaces."""


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rational(x)
    raise TypeError(f"cannot interpret {x!r} as a rational")


def parse_rational(text: str) -> Fraction:
    """Parse "p/q" (or plain "p"); the sign lives on the numerator."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"malformed rational {text!r}") from exc


def format_rational(x: Fraction) -> str:
    """Render as "p/q", or "p" when the denominator is 1."""
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class RationalMatrix:
    """Dense matrix of Fractions, stored row-major and immutable.

    Zero-row and zero-column matrices are legal; they arise as quotient
    maps onto zero-dimensional spaces.
    """

    rows: int
    cols: int
    entries: tuple[tuple[Fraction, ...], ...]
    _int_cache: tuple | None = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        if len(self.entries) != self.rows:
            raise ValueError("row count mismatch")
        for row in self.entries:
            if len(row) != self.cols:
                raise ValueError("column count mismatch")

    @staticmethod
    def from_rows(rows, cols: int | None = None) -> RationalMatrix:
        data = tuple(tuple(as_fraction(x) for x in row) for row in rows)
        if cols is None:
            if not data:
                raise ValueError("cols must be given for a 0-row matrix")
            cols = len(data[0])
        return RationalMatrix(len(data), cols, data)

    @staticmethod
    def identity(n: int) -> RationalMatrix:
        one, zero = Fraction(1), Fraction(0)
        return RationalMatrix(
            n, n, tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n))
        )

    @staticmethod
    def zero(rows: int, cols: int) -> RationalMatrix:
        z = Fraction(0)
        return RationalMatrix(rows, cols, tuple(tuple(z for _ in range(cols)) for _ in range(rows)))

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self.entries[i]

    def transpose(self) -> RationalMatrix:
        return RationalMatrix(
            self.cols,
            self.rows,
            tuple(tuple(self.entries[i][j] for i in range(self.rows)) for j in range(self.cols)),
        )

    def matmul(self, other: RationalMatrix) -> RationalMatrix:
        if self.cols != other.rows:
            raise ValueError("inner dimensions disagree")
        ot = other.transpose().entries
        data = tuple(
            tuple(sum(a * b for a, b in zip(row, col)) for col in ot) for row in self.entries
        )
        return RationalMatrix(self.rows, other.cols, data)

    def __matmul__(self, other: RationalMatrix) -> RationalMatrix:
        return self.matmul(other)

    def apply(self, vec) -> tuple[Fraction, ...]:
        """Matrix-vector product; vec has length self.cols."""
        v = tuple(as_fraction(x) for x in vec)
        if len(v) != self.cols:
            raise ValueError("vector length disagrees with column count")
        return tuple(sum(a * b for a, b in zip(row, v)) for row in self.entries)

    def vstack(self, other: RationalMatrix) -> RationalMatrix:
        if self.cols != other.cols:
            raise ValueError("column counts disagree")
        return RationalMatrix(self.rows + other.rows, self.cols, self.entries + other.entries)

    def is_integral(self) -> bool:
        return self.int_entries() is not None

    def int_entries(self) -> tuple[tuple[int, ...], ...] | None:
        """Entries as plain ints when the matrix is integral, else None."""
        if self._int_cache is None:
            if all(x.denominator == 1 for row in self.entries for x in row):
                value = tuple(tuple(x.numerator for x in row) for row in self.entries)
            else:
                value = None
            object.__setattr__(self, "_int_cache", (value,))
        return self._int_cache[0]

    def to_json(self):
        if self.rows == 0:
            return {"rows": [], "cols": self.cols}
        if self.is_integral():
            return {"rows": [[x.numerator for x in row] for row in self.entries]}
        return {"rows": [[format_rational(x) for x in row] for row in self.entries]}

    @staticmethod
    def from_json(obj) -> RationalMatrix:
        rows = obj["rows"]
        if not rows:
            return RationalMatrix.from_rows([], cols=int(obj["cols"]))
        return RationalMatrix.from_rows(rows)


def rref(matrix: RationalMatrix) -> tuple[RationalMatrix, int, tuple[int, ...]]:
    """Reduced row echelon form, with rank and pivot columns.

    The result is the unique RREF of the input; pivot columns are returned
    in strictly increasing order.
    """
    m = [list(row) for row in matrix.entries]
    nrows, ncols = matrix.rows, matrix.cols
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot_row = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if pivot_row is None:
            continue
        m[r], m[pivot_row] = m[pivot_row], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(nrows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    reduced = RationalMatrix(nrows, ncols, tuple(tuple(row) for row in m))
    return reduced, r, tuple(pivots)


def rank_of_int_rows(rows: list[list[int]], ncols: int) -> int:
    """Rank of an integer matrix by fraction-free elimination.

    Hot path for rank-tuple computation; avoids Fraction overhead.
    """
    m = [row[:] for row in rows if any(row)]
    rank = 0
    for c in range(ncols):
        pivot_row = next((i for i in range(rank, len(m)) if m[i][c] != 0), None)
        if pivot_row is None:
            continue
        m[rank], m[pivot_row] = m[pivot_row], m[rank]
        p = m[rank][c]
        for i in range(rank + 1, len(m)):
            if m[i][c] != 0:
                q = m[i][c]
                row = [p * a - q * b for a, b in zip(m[i], m[rank])]
                g = 0
                for x in row:
                    g = gcd(g, x)
                m[i] = [x // g for x in row] if g > 1 else row
        rank += 1
        if rank == len(m):
            break
    return rank


def rank(matrix: RationalMatrix) -> int:
    return rref(matrix)[1]


@dataclass(frozen=True)
class Subspace:
    """A subspace of Q^d, canonically represented.

    The basis matrix is in reduced row echelon form with no zero rows, so
    two Subspace values are equal exactly when they are the same subspace.
    """

    ambient_dim: int
    basis: RationalMatrix
    _int_rows: tuple | None = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.basis.cols != self.ambient_dim:
            raise ValueError("basis width disagrees with ambient dimension")

    @property
    def dim(self) -> int:
        return self.basis.rows

    @staticmethod
    def from_spanning_rows(ambient_dim: int, rows) -> Subspace:
        mat = RationalMatrix.from_rows(rows, cols=ambient_dim)
        reduced, rk, _ = rref(mat)
        return Subspace(ambient_dim, RationalMatrix(rk, ambient_dim, reduced.entries[:rk]))

    @staticmethod
    def zero(ambient_dim: int) -> Subspace:
        return Subspace(ambient_dim, RationalMatrix.from_rows([], cols=ambient_dim))

    @staticmethod
    def full(ambient_dim: int) -> Subspace:
        return Subspace(ambient_dim, RationalMatrix.identity(ambient_dim))

    def integer_basis_rows(self) -> tuple[tuple[int, ...], ...]:
        """Basis rows scaled to integers (per-row lcm of denominators)."""
        if self._int_rows is None:
            scaled = []
            for row in self.basis.entries:
                denom = lcm(*(x.denominator for x in row)) if row else 1
                scaled.append(tuple(int(x * denom) for x in row))
            object.__setattr__(self, "_int_rows", tuple(scaled))
        return self._int_rows

    def contains_vector(self, vec) -> bool:
        v = [as_fraction(x) for x in vec]
        return self._reduce_vector(v)

    def _reduce_vector(self, v: list[Fraction]) -> bool:
        pivots = [next(j for j, x in enumerate(row) if x != 0) for row in self.basis.entries]
        for row, p in zip(self.basis.entries, pivots):
            if v[p] != 0:
                f = v[p]
                v = [a - f * b for a, b in zip(v, row)]
        return all(x == 0 for x in v)

    def sort_key(self):
        """(dimension, flattened basis) -- the enumeration order key."""
        return (self.dim, tuple(x for row in self.basis.entries for x in row))

    def to_json(self):
        return {
            "ambient_dim": self.ambient_dim,
            "basis": [[format_rational(x) for x in row] for row in self.basis.entries],
        }

    @staticmethod
    def from_json(obj) -> Subspace:
        ambient = int(obj["ambient_dim"])
        return Subspace.from_spanning_rows(ambient, obj["basis"])


def image_subspace(matrix: RationalMatrix) -> Subspace:
    """Column space of a matrix, as a canonical subspace of Q^rows."""
    return Subspace.from_spanning_rows(matrix.rows, matrix.transpose().entries)


def kernel_subspace(matrix: RationalMatrix) -> Subspace:
    """{x : Mx = 0} as a canonical subspace of Q^cols."""
    reduced, rk, pivots = rref(matrix)
    free_cols = [c for c in range(matrix.cols) if c not in pivots]
    basis_rows = []
    for f in free_cols:
        v = [Fraction(0)] * matrix.cols
        v[f] = Fraction(1)
        for i, p in enumerate(pivots):
            v[p] = -reduced.entries[i][f]
        basis_rows.append(v)
    return Subspace.from_spanning_rows(matrix.cols, basis_rows)


def sum_and_intersection(a: Subspace, b: Subspace) -> tuple[Subspace, Subspace]:
    """Canonical A+B and A∩B; satisfies the modular law of dimensions.

    The intersection comes from the kernel of the stacked system
    [A^T | -B^T]: a kernel vector (lam, mu) means lam*A = mu*B, a common
    element.
    """
    if a.ambient_dim != b.ambient_dim:
        raise AmbientMismatchError("subspaces live in different ambient spaces")
    total = a.basis.vstack(b.basis)
    sum_space = Subspace.from_spanning_rows(a.ambient_dim, total.entries)
    # columns: dim(a) lambda-coords then dim(b) mu-coords, with mu negated
    coeff = RationalMatrix(
        a.ambient_dim,
        a.dim + b.dim,
        tuple(
            tuple(row[: a.dim]) + tuple(-x for x in row[a.dim :])
            for row in _stack_columns(a, b)
        ),
    )
    kern = kernel_subspace(coeff)
    inter_rows = []
    for krow in kern.basis.entries:
        lam = krow[: a.dim]
        vec = [Fraction(0)] * a.ambient_dim
        for coef, brow in zip(lam, a.basis.entries):
            if coef != 0:
                vec = [x + coef * y for x, y in zip(vec, brow)]
        inter_rows.append(vec)
    intersection = Subspace.from_spanning_rows(a.ambient_dim, inter_rows)
    return sum_space, intersection


def _stack_columns(a: Subspace, b: Subspace):
    # rows indexed by ambient coordinate, duplicated -- see sum_and_intersection
    rows = []
    for i in range(a.ambient_dim):
        rows.append(
            tuple(a.basis.entries[r][i] for r in range(a.dim))
            + tuple(b.basis.entries[r][i] for r in range(b.dim))
        )
    return rows


def extend_to_full_basis(w: Subspace) -> RationalMatrix:
    """Invertible matrix whose first dim(w) rows are w's basis.

    The remaining rows are standard basis vectors at the non-pivot
    columns, taken in increasing index order, which keeps quotient
    coordinates deterministic.
    """
    pivots = set()
    for row in w.basis.entries:
        pivots.add(next(j for j, x in enumerate(row) if x != 0))
    rows = [list(r) for r in w.basis.entries]
    for c in range(w.ambient_dim):
        if c not in pivots:
            e = [Fraction(0)] * w.ambient_dim
            e[c] = Fraction(1)
            rows.append(e)
    return RationalMatrix.from_rows(rows, cols=w.ambient_dim)


def solve_square(a: RationalMatrix, b) -> tuple[Fraction, ...] | None:
    """Unique solution of Ax = b for square A, or None when singular."""
    if a.rows != a.cols:
        raise ValueError("matrix is not square")
    n = a.rows
    vec = [as_fraction(x) for x in b]
    if len(vec) != n:
        raise ValueError("right-hand side has wrong length")
    aug = [list(row) + [vec[i]] for i, row in enumerate(a.entries)]
    for c in range(n):
        pivot_row = next((i for i in range(c, n) if aug[i][c] != 0), None)
        if pivot_row is None:
            return None
        aug[c], aug[pivot_row] = aug[pivot_row], aug[c]
        inv = 1 / aug[c][c]
        aug[c] = [x * inv for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[c])]
    return tuple(aug[i][n] for i in range(n))


def invert(a: RationalMatrix) -> RationalMatrix | None:
    """Inverse of a square matrix, or None when singular."""
    if a.rows != a.cols:
        raise ValueError("matrix is not square")
    n = a.rows
    cols = []
    for j in range(n):
        e = [Fraction(1) if i == j else Fraction(0) for i in range(n)]
        x = solve_square(a, e)
        if x is None:
            return None
        cols.append(x)
    return RationalMatrix(n, n, tuple(tuple(cols[j][i] for j in range(n)) for i in range(n)))
