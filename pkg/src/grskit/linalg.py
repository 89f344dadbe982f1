"""Exact rational linear algebra.

Everything here works over :class:`fractions.Fraction` (aliased ``Rat``) and
plain Python integers, so no value is ever rounded.  Vectors are tuples,
matrices are tuples of row tuples.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

Rat = Fraction
Vec = tuple
Matrix = tuple


def rat(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot convert {x!r} to an exact rational")


def norm_scalar(x):
    """Return ``x`` as an int when integral, else as a reduced Fraction."""
    x = rat(x)
    return x.numerator if x.denominator == 1 else x


def vec(values: Iterable) -> Vec:
    return tuple(norm_scalar(v) for v in values)


def matrix(rows: Iterable[Iterable]) -> Matrix:
    rows = tuple(vec(r) for r in rows)
    if rows and len({len(r) for r in rows}) != 1:
        raise ValueError("ragged matrix")
    return rows


def zero_vec(r: int) -> Vec:
    return (0,) * r


def identity(r: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(r)) for i in range(r))


def add(u: Vec, v: Vec) -> Vec:
    return tuple(a + b for a, b in zip(u, v))


def sub(u: Vec, v: Vec) -> Vec:
    return tuple(a - b for a, b in zip(u, v))


def neg(u: Vec) -> Vec:
    return tuple(-a for a in u)


def scale(c, u: Vec) -> Vec:
    return vec(c * a for a in u)


def dot(u: Vec, v: Vec):
    return sum(a * b for a, b in zip(u, v))


def transpose(m: Matrix) -> Matrix:
    return tuple(zip(*m)) if m else ()


def mat_vec(m: Matrix, v: Vec) -> Vec:
    return vec(dot(row, v) for row in m)


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    bt = transpose(b)
    return tuple(vec(dot(row, col) for col in bt) for row in a)


def bilinear(g: Matrix, u: Vec, v: Vec):
    return norm_scalar(sum(u[i] * g[i][j] * v[j]
                           for i in range(len(u)) if u[i]
                           for j in range(len(v)) if v[j]))


def is_integral(v: Vec) -> bool:
    return all(Fraction(x).denominator == 1 for x in v)


def integerize(vectors: Sequence[Vec]) -> tuple[list[tuple[int, ...]], int]:
    """Scale ``vectors`` by the LCM ``d`` of all denominators.

    Returns the integer vectors and ``d``.
    """
    d = 1
    for v in vectors:
        for x in v:
            if isinstance(x, Fraction):
                d = lcm(d, x.denominator)
    if d == 1:
        return [tuple(int(x) for x in v) for v in vectors], 1
    return [tuple(int(x * d) for x in v) for v in vectors], d


def primitive_int(v: Sequence[int]) -> tuple[int, ...]:
    """Divide an integer vector by the gcd of its entries."""
    g = 0
    for x in v:
        g = gcd(g, x)
    if g in (0, 1):
        return tuple(v)
    return tuple(x // g for x in v)


# -- row reduction -----------------------------------------------------------

def rref(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and pivot columns.

    Pivoting takes the leftmost column with a nonzero entry and the first
    row (from the current position) holding one.  Zero rows are dropped.
    """
    m = [[rat(x) for x in row] for row in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == len(m):
            break
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        piv = m[r][c]
        if piv != 1:
            m[r] = [x / piv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m[:r], pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[1]) if rows else 0


def nullspace(rows: Sequence[Sequence], ncols: int | None = None) -> list[Vec]:
    """Canonical kernel basis: one vector per free column, read off the RREF."""
    if ncols is None:
        if not rows:
            raise ValueError("ncols required for an empty system")
        ncols = len(rows[0])
    red, pivots = rref(rows) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(red, pivots):
            v[p] = -row[f]
        basis.append(vec(v))
    return basis


@dataclass(frozen=True)
class LinSpace:
    """Affine solution set ``particular + span(basis)``.

    ``particular`` is ``None`` for homogeneous systems (the zero vector is a
    solution).
    """

    particular: Vec | None
    basis: tuple[Vec, ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def point(self, coeffs: Sequence) -> Vec:
        if len(coeffs) != len(self.basis):
            raise ValueError("wrong number of coefficients")
        n = len(self.basis[0]) if self.basis else len(self.particular or ())
        out = list(self.particular) if self.particular is not None else [0] * n
        for c, b in zip(coeffs, self.basis):
            if c:
                for i, x in enumerate(b):
                    out[i] += c * x
        return vec(out)


def solve_linear(coefficients: Sequence[Sequence], rhs: Sequence) -> LinSpace | None:
    """Solve ``A x = b`` exactly; ``None`` when the system is inconsistent."""
    if len(coefficients) != len(rhs):
        raise ValueError(f"{len(coefficients)} rows but {len(rhs)} right-hand sides")
    if not coefficients:
        raise ValueError("empty system")
    ncols = len(coefficients[0])
    if any(len(row) != ncols for row in coefficients):
        raise ValueError("ragged coefficient matrix")
    aug = [list(row) + [b] for row, b in zip(coefficients, rhs)]
    red, pivots = rref(aug)
    if ncols in pivots:
        return None
    homogeneous = all(rat(b) == 0 for b in rhs)
    part = [Fraction(0)] * ncols
    for row, p in zip(red, pivots):
        part[p] = row[ncols]
    basis = tuple(nullspace([row[:ncols] for row in red], ncols)) if red else tuple(
        vec(1 if i == j else 0 for i in range(ncols)) for j in range(ncols))
    return LinSpace(None if homogeneous else vec(part), basis)


def solve_square(m: Sequence[Sequence], b: Sequence) -> Vec:
    """Unique solution of a nonsingular square system."""
    sol = solve_linear(m, b)
    if sol is None or sol.dim:
        raise ValueError("singular system")
    return sol.particular if sol.particular is not None else zero_vec(len(m))


def inverse(m: Sequence[Sequence]) -> Matrix:
    n = len(m)
    aug = [list(row) + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(m)]
    red, pivots = rref(aug)
    if pivots[:n] != list(range(n)) or len(red) < n:
        raise ValueError("matrix is singular")
    return tuple(vec(row[n:]) for row in red)


def det(m: Sequence[Sequence]):
    """Determinant by fraction-exact elimination."""
    a = [[rat(x) for x in row] for row in m]
    n = len(a)
    d = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c] != 0), None)
        if p is None:
            return 0
        if p != c:
            a[c], a[p] = a[p], a[c]
            d = -d
        d *= a[c][c]
        for i in range(c + 1, n):
            if a[i][c]:
                f = a[i][c] / a[c][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return norm_scalar(d)


def annihilator(rows: Sequence[Sequence], ncols: int) -> list[tuple[int, ...]]:
    """Integer basis of the linear functionals vanishing on ``span(rows)``."""
    if not rows:
        return [tuple(1 if i == j else 0 for i in range(ncols)) for j in range(ncols)]
    out = []
    for v in nullspace(rows, ncols):
        iv, _ = integerize([v])
        out.append(primitive_int(iv[0]))
    return out


def in_span(basis: Sequence[Vec], v: Vec) -> bool:
    return rank(list(basis) + [v]) == rank(basis)


# -- symmetric forms ---------------------------------------------------------

@dataclass(frozen=True)
class SymForm:
    """A symmetric bilinear form given by its Gram matrix."""

    entries: Matrix

    def __post_init__(self):
        m = matrix(self.entries)
        object.__setattr__(self, "entries", m)
        n = len(m)
        if any(len(row) != n for row in m):
            raise ValueError("Gram matrix must be square")
        for i in range(n):
            for j in range(i + 1, n):
                if m[i][j] != m[j][i]:
                    raise ValueError(f"form is not symmetric at ({i}, {j})")

    @classmethod
    def standard(cls, r: int) -> "SymForm":
        return cls(identity(r))

    @property
    def rank(self) -> int:
        return len(self.entries)

    def __call__(self, u: Vec, v: Vec):
        return bilinear(self.entries, u, v)

    def restricted(self, basis: Sequence[Vec]) -> "SymForm":
        """Gram matrix of the form on the given basis vectors."""
        return SymForm(tuple(tuple(self(a, b) for b in basis) for a in basis))

    def covector(self, v: Vec) -> Vec:
        return mat_vec(self.entries, v)

    def integer_entries(self) -> tuple[list[tuple[int, ...]], int]:
        return integerize(self.entries)

    def __str__(self) -> str:
        return "\n".join(" ".join(str(x) for x in row) for row in self.entries)


def leading_minors(m: Sequence[Sequence]) -> list:
    return [det([row[:k] for row in m[:k]]) for k in range(1, len(m) + 1)]


def is_positive_definite(form: SymForm | Sequence[Sequence]) -> bool:
    """Sylvester's criterion, evaluated exactly."""
    if not isinstance(form, SymForm):
        form = SymForm(form)  # raises on asymmetric input
    return all(x > 0 for x in leading_minors(form.entries))


def orthogonal_projection(form: SymForm, subspace_basis: Sequence[Vec]) -> Matrix:
    """Matrix of the form-orthogonal projection onto ``span(basis)^perp``.

    ``P = I - B (B^T G B)^{-1} B^T G`` acting on column vectors; ``P`` kills
    the subspace and fixes its orthogonal complement.
    """
    r = form.rank
    if not is_positive_definite(form):
        raise ValueError("projection needs a positive definite form")
    basis = [vec(b) for b in subspace_basis]
    if not basis:
        return identity(r)
    if rank(basis) != len(basis):
        raise ValueError("subspace basis vectors are linearly dependent")
    g = form.entries
    gram_inv = inverse(form.restricted(basis).entries)
    bt_g = [mat_vec(transpose(g), b) for b in basis]  # rows of B^T G
    k = len(basis)
    out = []
    for i in range(r):
        row = []
        for j in range(r):
            s = Fraction(1 if i == j else 0)
            for a in range(k):
                if basis[a][i] == 0:
                    continue
                t = sum(gram_inv[a][c] * bt_g[c][j] for c in range(k))
                s -= basis[a][i] * t
            row.append(s)
        out.append(vec(row))
    return tuple(out)
