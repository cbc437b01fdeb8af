"""Exact linear algebra over the rationals.

Vectors are tuples of ``Fraction``; a matrix acts on column vectors by left
multiplication.  A subspace of Q^n is stored as the reduced row echelon
basis of its row space, with no zero rows.  RREF is the canonical form:
two subspaces are equal exactly when their fields compare equal, so no
epsilon appears anywhere in the package.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

F0 = Fraction(0)
F1 = Fraction(1)

Vector = tuple[Fraction, ...]


def vec(values: Iterable) -> Vector:
    """Coerce an iterable of ints / 'p/q' strings / Fractions into a vector."""
    return tuple(v if type(v) is Fraction else Fraction(v) for v in values)


def vec_add(x: Sequence[Fraction], y: Sequence[Fraction]) -> Vector:
    return tuple(a + b for a, b in zip(x, y))


def vec_sub(x: Sequence[Fraction], y: Sequence[Fraction]) -> Vector:
    return tuple(a - b for a, b in zip(x, y))


def vec_scale(c: Fraction, x: Sequence[Fraction]) -> Vector:
    return tuple(c * a for a in x)


def is_zero_vec(x: Sequence[Fraction]) -> bool:
    return not any(x)


@dataclass(frozen=True)
class Matrix:
    """Dense rational matrix; ``entries[i][j]`` is row i, column j."""

    rows: int
    cols: int
    entries: tuple[Vector, ...]

    def __post_init__(self) -> None:
        if len(self.entries) != self.rows:
            raise ValueError(f"expected {self.rows} rows, got {len(self.entries)}")
        for r in self.entries:
            if len(r) != self.cols:
                raise ValueError(f"expected {self.cols} columns, got {len(r)}")

    @staticmethod
    def from_rows(rows: Sequence[Sequence], cols: int | None = None) -> "Matrix":
        entries = tuple(vec(r) for r in rows)
        if cols is None:
            if not entries:
                raise ValueError("cols is required for a matrix with no rows")
            cols = len(entries[0])
        return Matrix(len(entries), cols, entries)

    @staticmethod
    def identity(n: int) -> "Matrix":
        return Matrix(n, n, tuple(tuple(F1 if i == j else F0 for j in range(n)) for i in range(n)))

    @staticmethod
    def zeros(rows: int, cols: int) -> "Matrix":
        return Matrix(rows, cols, tuple(tuple(F0 for _ in range(cols)) for _ in range(rows)))

    @staticmethod
    def vstack(parts: Sequence["Matrix"], cols: int | None = None) -> "Matrix":
        if cols is None:
            if not parts:
                raise ValueError("cols is required when stacking nothing")
            cols = parts[0].cols
        rows: list[Vector] = []
        for p in parts:
            if p.cols != cols:
                raise ValueError("column counts differ in vstack")
            rows.extend(p.entries)
        return Matrix(len(rows), cols, tuple(rows))

    def row(self, i: int) -> Vector:
        return self.entries[i]

    def column(self, j: int) -> Vector:
        return tuple(r[j] for r in self.entries)

    def apply(self, v: Sequence[Fraction]) -> Vector:
        """Matrix-vector product (v as a column vector)."""
        if len(v) != self.cols:
            raise ValueError(f"vector of length {len(v)} does not match {self.cols} columns")
        out = []
        for r in self.entries:
            acc = F0
            for c, x in zip(r, v):
                if c and x:
                    acc += c * x
            out.append(acc)
        return tuple(out)

    def compose(self, other: "Matrix") -> "Matrix":
        """self @ other, as composition of linear maps."""
        if self.cols != other.rows:
            raise ValueError(f"cannot compose {self.rows}x{self.cols} with {other.rows}x{other.cols}")
        out = []
        for r in self.entries:
            acc = [F0] * other.cols
            for k, c in enumerate(r):
                if c:
                    for j, x in enumerate(other.entries[k]):
                        if x:
                            acc[j] += c * x
            out.append(tuple(acc))
        return Matrix(self.rows, other.cols, tuple(out))

    def __matmul__(self, other: "Matrix") -> "Matrix":
        return self.compose(other)

    def transpose(self) -> "Matrix":
        return Matrix(self.cols, self.rows, tuple(tuple(r[i] for r in self.entries) for i in range(self.cols)))

    def __str__(self) -> str:
        body = "; ".join(" ".join(str(x) for x in r) for r in self.entries)
        return f"Matrix({self.rows}x{self.cols}: {body})"


def _reduce(rows: Iterable[Sequence[Fraction]], cols: int) -> tuple[list[Vector], list[int]]:
    """Gauss-Jordan elimination; returns (nonzero RREF rows, pivot columns)."""
    m = [list(r) for r in rows]
    nrows = len(m)
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        pr = None
        for i in range(r, nrows):
            if m[i][c]:
                pr = i
                break
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        head = m[r][c]
        if head != 1:
            m[r] = [x / head if x else x for x in m[r]]
        lead = m[r]
        lead_nz = [(j, lead[j]) for j in range(c, cols) if lead[j]]
        for i in range(nrows):
            if i != r and m[i][c]:
                f = m[i][c]
                mi = m[i]
                for j, lv in lead_nz:
                    mi[j] -= f * lv
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return [tuple(row) for row in m[:r]], pivots


@dataclass(frozen=True)
class Subspace:
    """A subspace of Q^ambient_dim in canonical (RREF) form.

    Equality of the dataclass fields is equality of subspaces, and the
    tuples are hashable, so subspaces can live in sets and dict keys.
    """

    ambient_dim: int
    basis_rows: tuple[Vector, ...]

    def __post_init__(self) -> None:
        pivots = []
        prev = -1
        for i, row in enumerate(self.basis_rows):
            if len(row) != self.ambient_dim:
                raise ValueError("basis row length does not match the ambient dimension")
            p = next((j for j, x in enumerate(row) if x), None)
            if p is None:
                raise ValueError("zero row in a subspace basis")
            if p <= prev or row[p] != 1:
                raise ValueError("basis rows are not in reduced row echelon form")
            for other in self.basis_rows[:i]:
                if other[p]:
                    raise ValueError("pivot column is not cleared above")
            pivots.append(p)
            prev = p
        object.__setattr__(self, "_pivots", tuple(pivots))

    def __hash__(self) -> int:
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash((self.ambient_dim, self.basis_rows))
            object.__setattr__(self, "_hash", h)
        return h

    @property
    def dim(self) -> int:
        return len(self.basis_rows)

    @property
    def pivots(self) -> tuple[int, ...]:
        return self._pivots

    @staticmethod
    def zero(ambient_dim: int) -> "Subspace":
        return Subspace(ambient_dim, ())

    @staticmethod
    def full(ambient_dim: int) -> "Subspace":
        return Subspace(ambient_dim, Matrix.identity(ambient_dim).entries)

    def is_full(self) -> bool:
        return self.dim == self.ambient_dim

    def _residual(self, v: Sequence[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
        """Reduce v against the basis; returns (coefficients, remainder)."""
        rem = list(v)
        coeffs = []
        for row, p in zip(self.basis_rows, self._pivots):
            c = rem[p]
            coeffs.append(c)
            if c:
                for j, x in enumerate(row):
                    if x:
                        rem[j] -= c * x
        return coeffs, rem

    def contains(self, v: Sequence[Fraction]) -> bool:
        if len(v) != self.ambient_dim:
            raise ValueError("vector length does not match the ambient dimension")
        _, rem = self._residual(v)
        return not any(rem)

    def coordinates_of(self, v: Sequence[Fraction]) -> Vector | None:
        """Coefficients of v in the canonical basis, or None if v lies outside."""
        if len(v) != self.ambient_dim:
            raise ValueError("vector length does not match the ambient dimension")
        coeffs, rem = self._residual(v)
        if any(rem):
            return None
        return vec(coeffs)

    def contains_subspace(self, other: "Subspace") -> bool:
        if other.ambient_dim != self.ambient_dim:
            raise ValueError("ambient dimensions differ")
        return all(self.contains(r) for r in other.basis_rows)

    def __add__(self, other: "Subspace") -> "Subspace":
        return subspace_sum(self, other)

    def __and__(self, other: "Subspace") -> "Subspace":
        return intersect(self, other)

    def __str__(self) -> str:
        return f"Subspace(dim {self.dim} of Q^{self.ambient_dim})"


def span(vectors: Iterable[Sequence[Fraction]], ambient_dim: int) -> Subspace:
    """Canonical basis of the span of the given vectors."""
    rows = [vec(v) for v in vectors]
    for r in rows:
        if len(r) != ambient_dim:
            raise ValueError("generator length does not match the ambient dimension")
    reduced, _ = _reduce(rows, ambient_dim)
    return Subspace(ambient_dim, tuple(reduced))


def rref(m: Matrix) -> Subspace:
    """Canonical basis of the row space of m."""
    reduced, _ = _reduce(m.entries, m.cols)
    return Subspace(m.cols, tuple(reduced))


def subspace_sum(u: Subspace, v: Subspace) -> Subspace:
    """Smallest subspace containing both u and v."""
    if u.ambient_dim != v.ambient_dim:
        raise ValueError("ambient dimensions differ")
    return span(list(u.basis_rows) + list(v.basis_rows), u.ambient_dim)


def intersect(u: Subspace, v: Subspace) -> Subspace:
    """Largest subspace contained in both u and v (Zassenhaus block trick).

    Row-reduce the block matrix [[U U], [V 0]]: the right halves of the rows
    whose left half vanished span the intersection.
    """
    if u.ambient_dim != v.ambient_dim:
        raise ValueError("ambient dimensions differ")
    n = u.ambient_dim
    block: list[list[Fraction]] = []
    for row in u.basis_rows:
        block.append(list(row) + list(row))
    for row in v.basis_rows:
        block.append(list(row) + [F0] * n)
    reduced, pivots = _reduce(block, 2 * n)
    inter = [row[n:] for i, row in enumerate(reduced) if pivots[i] >= n]
    return span(inter, n)


def image(f: Matrix, u: Subspace) -> Subspace:
    """Image of the subspace u under the map f."""
    if f.cols != u.ambient_dim:
        raise ValueError("map domain does not match the subspace ambient dimension")
    return span([f.apply(row) for row in u.basis_rows], f.rows)


def kernel(f: Matrix) -> Subspace:
    """Null space of f."""
    reduced, pivots = _reduce(f.entries, f.cols)
    pivot_set = set(pivots)
    rows = []
    for c in range(f.cols):
        if c in pivot_set:
            continue
        v = [F0] * f.cols
        v[c] = F1
        for i, p in enumerate(pivots):
            if reduced[i][c]:
                v[p] = -reduced[i][c]
        rows.append(v)
    return span(rows, f.cols)


def preimage(f: Matrix, v: Subspace) -> Subspace:
    """Solution space of f(x) in v, computed as ker(project-past-v of f)."""
    if f.rows != v.ambient_dim:
        raise ValueError("map codomain does not match the subspace ambient dimension")
    chart = quotient(v.ambient_dim, v)
    return kernel(chart.projection @ f)


def rank(f: Matrix) -> int:
    _, pivots = _reduce(f.entries, f.cols)
    return len(pivots)


@dataclass(frozen=True)
class QuotientChart:
    """Coordinates for Q^n modulo a subspace.

    ``projection`` maps Q^n onto Q^(n-k) with kernel exactly the subspace;
    ``section`` is a right inverse picking the non-pivot coordinates of the
    subspace's RREF as the chart, so the chart is deterministic.
    """

    ambient_dim: int
    subspace: Subspace
    projection: Matrix
    section: Matrix

    @property
    def dim(self) -> int:
        return self.projection.rows


def quotient(ambient_dim: int, v: Subspace) -> QuotientChart:
    if v.ambient_dim != ambient_dim:
        raise ValueError("subspace ambient dimension does not match")
    pivots = v.pivots
    chart_cols = [c for c in range(ambient_dim) if c not in set(pivots)]
    k = len(chart_cols)
    proj_rows = []
    for q in chart_cols:
        row = [F0] * ambient_dim
        row[q] = F1
        for i, p in enumerate(pivots):
            if v.basis_rows[i][q]:
                row[p] = -v.basis_rows[i][q]
        proj_rows.append(tuple(row))
    section_rows = []
    for r in range(ambient_dim):
        row = [F0] * k
        if r in chart_cols:
            row[chart_cols.index(r)] = F1
        section_rows.append(tuple(row))
    return QuotientChart(
        ambient_dim,
        v,
        Matrix(k, ambient_dim, tuple(proj_rows)),
        Matrix(ambient_dim, k, tuple(section_rows)),
    )


def invert(m: Matrix) -> Matrix:
    """Exact inverse of a square matrix; raises ValueError when singular."""
    if m.rows != m.cols:
        raise ValueError("only square matrices can be inverted")
    n = m.rows
    aug = [list(row) + [F1 if i == j else F0 for j in range(n)] for i, row in enumerate(m.entries)]
    reduced, pivots = _reduce(aug, 2 * n)
    if pivots[:n] != list(range(n)) or len(pivots) != n:
        raise ValueError("matrix is singular")
    return Matrix(n, n, tuple(tuple(row[n:]) for row in reduced))
