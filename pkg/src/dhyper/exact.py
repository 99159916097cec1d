"""Exact integer and rational linear algebra.

Everything here is computed over Z or Q with no floating point anywhere:
matrices over Z, vectors over Q, Smith normal form with recorded unimodular
transforms, integer kernel and complement bases, mixedness certificates for
column spans, and facets of the cone spanned by a matrix's columns together
with their primitive support functions.

Smith normal form is the one workhorse; kernels, complements, lattice
indices and column-lattice bases are all derived from it.  Pivoting is
deterministic (smallest nonzero absolute value, then lowest index) so the
recorded transforms are reproducible run to run.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd, lcm

from .errors import (
    DimensionMismatchError,
    InputFormatError,
    NotFullRankError,
    ZeroColumnError,
)


def _parse_int(s) -> int:
    if isinstance(s, int):
        return s
    try:
        return int(str(s), 10)
    except ValueError as e:
        raise InputFormatError(f"not an integer literal: {s!r}") from e


def parse_fraction(s) -> Fraction:
    """Parse 'p/q' or 'p' (decimal strings) into an exact rational."""
    if isinstance(s, Fraction):
        return s
    if isinstance(s, int):
        return Fraction(s)
    try:
        return Fraction(str(s))
    except (ValueError, ZeroDivisionError) as e:
        raise InputFormatError(f"not a rational literal: {s!r}") from e


def format_fraction(q: Fraction) -> str:
    return str(q)


@dataclass(frozen=True)
class IntMatrix:
    """Immutable integer matrix, row-major tuples."""

    entries: tuple[tuple[int, ...], ...]

    @classmethod
    def from_rows(cls, rows) -> "IntMatrix":
        ent = tuple(tuple(int(x) for x in r) for r in rows)
        if ent and any(len(r) != len(ent[0]) for r in ent):
            raise DimensionMismatchError("ragged rows")
        return cls(ent)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)))

    @classmethod
    def zeros(cls, r: int, c: int) -> "IntMatrix":
        return cls(tuple((0,) * c for _ in range(r)))

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i]

    def col(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self.entries)

    def columns(self) -> list[tuple[int, ...]]:
        return [self.col(j) for j in range(self.cols)]

    def transpose(self) -> "IntMatrix":
        return IntMatrix(tuple(zip(*self.entries)) if self.entries else ())

    def mul(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise DimensionMismatchError(
                f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}"
            )
        ot = other.transpose().entries
        return IntMatrix(
            tuple(
                tuple(sum(a * b for a, b in zip(row, col)) for col in ot)
                for row in self.entries
            )
        )

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        return self.mul(other)

    def mul_vector(self, v: "RatVector") -> "RatVector":
        if self.cols != len(v.entries):
            raise DimensionMismatchError("matrix/vector size mismatch")
        return RatVector(
            tuple(sum((Fraction(a) * x for a, x in zip(row, v.entries)), Fraction(0)) for row in self.entries)
        )

    def mul_int_vector(self, v) -> tuple[int, ...]:
        if self.cols != len(v):
            raise DimensionMismatchError("matrix/vector size mismatch")
        return tuple(sum(a * x for a, x in zip(row, v)) for row in self.entries)

    def rank(self) -> int:
        return _rational_rank([[Fraction(x) for x in r] for r in self.entries])

    def det(self) -> Fraction:
        if self.rows != self.cols:
            raise DimensionMismatchError("determinant of a non-square matrix")
        m = [[Fraction(x) for x in r] for r in self.entries]
        n = self.rows
        det = Fraction(1)
        for k in range(n):
            piv = None
            for i in range(k, n):
                if m[i][k] != 0:
                    piv = i
                    break
            if piv is None:
                return Fraction(0)
            if piv != k:
                m[k], m[piv] = m[piv], m[k]
                det = -det
            det *= m[k][k]
            inv = 1 / m[k][k]
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    f = m[i][k] * inv
                    m[i] = [a - f * b for a, b in zip(m[i], m[k])]
        return det

    def to_json(self) -> dict:
        return {
            "rows": self.rows,
            "cols": self.cols,
            "entries": [[str(x) for x in r] for r in self.entries],
        }

    @classmethod
    def from_json(cls, obj) -> "IntMatrix":
        try:
            ent = obj["entries"]
            m = cls.from_rows([[_parse_int(x) for x in r] for r in ent])
        except (KeyError, TypeError) as e:
            raise InputFormatError(f"bad matrix object: {e}") from e
        if m.rows != obj.get("rows", m.rows) or m.cols != obj.get("cols", m.cols):
            raise DimensionMismatchError("matrix shape disagrees with declared rows/cols")
        return m

    def __str__(self) -> str:
        return "[" + "; ".join(" ".join(str(x) for x in r) for r in self.entries) + "]"


@dataclass(frozen=True)
class RatVector:
    """Immutable vector of exact rationals."""

    entries: tuple[Fraction, ...]

    @classmethod
    def make(cls, xs) -> "RatVector":
        return cls(tuple(Fraction(x) for x in xs))

    @classmethod
    def from_strings(cls, xs) -> "RatVector":
        return cls(tuple(parse_fraction(x) for x in xs))

    @classmethod
    def zeros(cls, n: int) -> "RatVector":
        return cls((Fraction(0),) * n)

    def __len__(self) -> int:
        return len(self.entries)

    def dot(self, other) -> Fraction:
        oe = other.entries if isinstance(other, RatVector) else tuple(other)
        if len(self.entries) != len(oe):
            raise DimensionMismatchError("dot product size mismatch")
        return sum((a * Fraction(b) for a, b in zip(self.entries, oe)), Fraction(0))

    def add(self, other: "RatVector") -> "RatVector":
        return RatVector(tuple(a + b for a, b in zip(self.entries, other.entries)))

    def sub(self, other: "RatVector") -> "RatVector":
        return RatVector(tuple(a - b for a, b in zip(self.entries, other.entries)))

    def scale(self, c) -> "RatVector":
        c = Fraction(c)
        return RatVector(tuple(c * a for a in self.entries))

    def is_integral(self) -> bool:
        return all(a.denominator == 1 for a in self.entries)

    def to_json(self) -> list[str]:
        return [str(a) for a in self.entries]

    @classmethod
    def from_json(cls, obj) -> "RatVector":
        return cls.from_strings(obj)

    def __str__(self) -> str:
        return "(" + ", ".join(str(a) for a in self.entries) + ")"


def _rational_rank(m: list[list[Fraction]]) -> int:
    rows = [r[:] for r in m]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    col = 0
    while rank < len(rows) and col < ncols:
        piv = None
        for i in range(rank, len(rows)):
            if rows[i][col] != 0:
                piv = i
                break
        if piv is None:
            col += 1
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = 1 / rows[rank][col]
        for i in range(rank + 1, len(rows)):
            if rows[i][col] != 0:
                f = rows[i][col] * inv
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[rank])]
        rank += 1
        col += 1
    return rank


def rational_kernel(m: list[list[Fraction]], ncols: int) -> list[list[Fraction]]:
    """Basis of the right kernel of a rational matrix, via Gauss elimination."""
    rows = [r[:] for r in m]
    pivots: list[int] = []
    rank = 0
    col = 0
    while rank < len(rows) and col < ncols:
        piv = None
        for i in range(rank, len(rows)):
            if rows[i][col] != 0:
                piv = i
                break
        if piv is None:
            col += 1
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = 1 / rows[rank][col]
        rows[rank] = [a * inv for a in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[rank])]
        pivots.append(col)
        rank += 1
        col += 1
    free = [j for j in range(ncols) if j not in pivots]
    basis = []
    for j in free:
        vec = [Fraction(0)] * ncols
        vec[j] = Fraction(1)
        for i, pc in enumerate(pivots):
            vec[pc] = -rows[i][j]
        basis.append(vec)
    return basis


def primitive_integer_vector(v: list[Fraction]) -> tuple[int, ...]:
    """Scale a nonzero rational vector to a primitive integer vector.

    The sign is chosen so the first nonzero entry is positive.
    """
    den = lcm(*[x.denominator for x in v]) if v else 1
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    if g == 0:
        raise ValueError("zero vector has no primitive form")
    ints = [x // g for x in ints]
    for x in ints:
        if x != 0:
            if x < 0:
                ints = [-y for y in ints]
            break
    return tuple(ints)


# ---------------------------------------------------------------------------
# Smith normal form with transforms


@dataclass(frozen=True)
class SmithForm:
    """s == u @ a @ v with u, v unimodular; uinv, vinv are exact inverses."""

    s: IntMatrix
    u: IntMatrix
    v: IntMatrix
    uinv: IntMatrix
    vinv: IntMatrix

    @property
    def diagonal(self) -> tuple[int, ...]:
        n = min(self.s.rows, self.s.cols)
        return tuple(self.s.entries[i][i] for i in range(n))

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)


class _Workspace:
    """Mutable elimination state tracking all four transform matrices."""

    def __init__(self, a: IntMatrix):
        self.m = [list(r) for r in a.entries]
        self.r = a.rows
        self.c = a.cols
        self.u = [[1 if i == j else 0 for j in range(self.r)] for i in range(self.r)]
        self.uinv = [[1 if i == j else 0 for j in range(self.r)] for i in range(self.r)]
        self.v = [[1 if i == j else 0 for j in range(self.c)] for i in range(self.c)]
        self.vinv = [[1 if i == j else 0 for j in range(self.c)] for i in range(self.c)]

    # row ops act on the left: m <- E m, u <- E u, uinv <- uinv E^{-1}
    def swap_rows(self, i, j):
        if i == j:
            return
        self.m[i], self.m[j] = self.m[j], self.m[i]
        self.u[i], self.u[j] = self.u[j], self.u[i]
        for row in self.uinv:
            row[i], row[j] = row[j], row[i]

    def add_row(self, i, j, k):
        """row i += k * row j"""
        if k == 0:
            return
        self.m[i] = [a + k * b for a, b in zip(self.m[i], self.m[j])]
        self.u[i] = [a + k * b for a, b in zip(self.u[i], self.u[j])]
        for row in self.uinv:
            row[j] -= k * row[i]

    def negate_row(self, i):
        self.m[i] = [-a for a in self.m[i]]
        self.u[i] = [-a for a in self.u[i]]
        for row in self.uinv:
            row[i] = -row[i]

    # column ops act on the right: m <- m E, v <- v E, vinv <- E^{-1} vinv
    def swap_cols(self, i, j):
        if i == j:
            return
        for row in self.m:
            row[i], row[j] = row[j], row[i]
        for row in self.v:
            row[i], row[j] = row[j], row[i]
        self.vinv[i], self.vinv[j] = self.vinv[j], self.vinv[i]

    def add_col(self, i, j, k):
        """col i += k * col j"""
        if k == 0:
            return
        for row in self.m:
            row[i] += k * row[j]
        for row in self.v:
            row[i] += k * row[j]
        self.vinv[j] = [a - k * b for a, b in zip(self.vinv[j], self.vinv[i])]

    def negate_col(self, i):
        for row in self.m:
            row[i] = -row[i]
        for row in self.v:
            row[i] = -row[i]
        self.vinv[i] = [-a for a in self.vinv[i]]


def _find_pivot(w: _Workspace, k: int):
    """Smallest nonzero absolute value in the trailing block, then lowest
    (row, col) index."""
    best = None
    for i in range(k, w.r):
        for j in range(k, w.c):
            x = abs(w.m[i][j])
            if x != 0 and (best is None or x < best[0]):
                best = (x, i, j)
    return best


def _diagonalize(w: _Workspace):
    k = 0
    while k < min(w.r, w.c):
        found = _find_pivot(w, k)
        if found is None:
            break
        _, pi, pj = found
        w.swap_rows(k, pi)
        w.swap_cols(k, pj)
        while True:
            for i in range(k + 1, w.r):
                if w.m[i][k]:
                    w.add_row(i, k, -(w.m[i][k] // w.m[k][k]))
            for j in range(k + 1, w.c):
                if w.m[k][j]:
                    w.add_col(j, k, -(w.m[k][j] // w.m[k][k]))
            if all(w.m[i][k] == 0 for i in range(k + 1, w.r)) and all(
                w.m[k][j] == 0 for j in range(k + 1, w.c)
            ):
                break
            found = _find_pivot(w, k)
            w.swap_rows(k, found[1])
            w.swap_cols(k, found[2])
        if w.m[k][k] < 0:
            w.negate_row(k)
        k += 1


def smith_form(a: IntMatrix) -> SmithForm:
    """Smith normal form with all four transforms recorded."""
    w = _Workspace(a)
    while True:
        _diagonalize(w)
        n = min(w.r, w.c)
        diag = [w.m[i][i] for i in range(n)]
        bad = None
        for i in range(n - 1):
            if diag[i] != 0 and diag[i + 1] % diag[i] != 0:
                bad = i
                break
        if bad is None:
            break
        # fold the offending entry back into the block and re-eliminate
        w.add_row(bad, bad + 1, 1)
    sf = SmithForm(
        s=IntMatrix.from_rows(w.m),
        u=IntMatrix.from_rows(w.u),
        v=IntMatrix.from_rows(w.v),
        uinv=IntMatrix.from_rows(w.uinv),
        vinv=IntMatrix.from_rows(w.vinv),
    )
    return sf


# ---------------------------------------------------------------------------
# Hermite form (canonical lattice bases) and derived lattice utilities


def hermite_row_basis(m: IntMatrix) -> IntMatrix:
    """Canonical basis of the row lattice: row-style Hermite normal form with
    positive pivots, entries above each pivot reduced into [0, pivot), zero
    rows dropped."""
    work = [list(r) for r in m.entries if any(r)]
    nc = m.cols
    out: list[list[int]] = []
    for col in range(nc):
        while True:
            cand = [i for i, r in enumerate(work) if r[col] != 0]
            if len(cand) <= 1:
                break
            p = min(cand, key=lambda i: abs(work[i][col]))
            for i in cand:
                if i == p:
                    continue
                q = work[i][col] // work[p][col]
                work[i] = [a - q * b for a, b in zip(work[i], work[p])]
        cand = [i for i, r in enumerate(work) if r[col] != 0]
        if cand:
            row = work.pop(cand[0])
            if row[col] < 0:
                row = [-a for a in row]
            out.append(row)
            work = [r for r in work if any(r)]
    # reduce entries above each pivot into [0, pivot)
    for i in reversed(range(len(out))):
        pcol = next(j for j in range(nc) if out[i][j] != 0)
        for k in range(i):
            q = out[k][pcol] // out[i][pcol]
            if q:
                out[k] = [a - q * b for a, b in zip(out[k], out[i])]
    return IntMatrix.from_rows(out)


def hermite_column_basis(m: IntMatrix) -> IntMatrix:
    """Canonical basis of the column lattice (columns of the result)."""
    return hermite_row_basis(m.transpose()).transpose()


def lattices_equal(m1: IntMatrix, m2: IntMatrix) -> bool:
    """Do the columns of m1 and m2 generate the same sublattice of Z^n?"""
    if m1.rows != m2.rows:
        raise DimensionMismatchError("lattices live in different ambient spaces")
    return hermite_column_basis(m1) == hermite_column_basis(m2)


def kernel_basis(a: IntMatrix) -> IntMatrix:
    """Z-basis of ker_Z(a) as columns of an n x (n-d) matrix.

    Requires full row rank; the basis columns are the kernel-indexed columns
    of the Smith v transform, hence a genuine lattice basis (saturated
    automatically since the kernel of an integer matrix is saturated).
    """
    sf = smith_form(a)
    if sf.rank != a.rows:
        raise NotFullRankError("matrix is not of full row rank")
    n = a.cols
    r = sf.rank
    cols = [sf.v.col(j) for j in range(r, n)]
    if not cols:
        return IntMatrix.from_rows([[] for _ in range(n)])
    return IntMatrix.from_rows(list(zip(*cols)))


def integer_kernel(a: IntMatrix) -> IntMatrix:
    """Like kernel_basis but with no rank precondition."""
    sf = smith_form(a)
    n = a.cols
    r = sf.rank
    cols = [sf.v.col(j) for j in range(r, n)]
    if not cols:
        return IntMatrix.from_rows([[] for _ in range(n)])
    return IntMatrix.from_rows(list(zip(*cols)))


def column_lattice_basis(a: IntMatrix) -> IntMatrix:
    """Basis (as columns) of the lattice generated by the columns of a."""
    sf = smith_form(a)
    cols = []
    for i in range(sf.rank):
        d = sf.s.entries[i][i]
        cols.append(tuple(d * x for x in sf.uinv.col(i)))
    if not cols:
        return IntMatrix.from_rows([[] for _ in range(a.rows)])
    return IntMatrix.from_rows(list(zip(*cols)))


def lattice_index(a: IntMatrix) -> int:
    """Index of the column lattice of a inside its saturation.

    Equals the product of the nonzero invariant factors.
    """
    sf = smith_form(a)
    idx = 1
    for d in sf.diagonal:
        if d != 0:
            idx *= d
    return idx


def solve_rational(a: IntMatrix, beta: RatVector) -> RatVector:
    """One exact rational solution v of a v = beta.

    Requires a of full row rank, so the system is always consistent; the
    solution picked is the Smith-form particular solution and is
    deterministic for a given input.
    """
    if len(beta) != a.rows:
        raise DimensionMismatchError("right-hand side length != row count")
    sf = smith_form(a)
    if sf.rank != a.rows:
        raise NotFullRankError("matrix is not of full row rank")
    ub = sf.u.mul_vector(beta)
    y = [Fraction(0)] * a.cols
    for i in range(sf.rank):
        y[i] = ub.entries[i] / sf.s.entries[i][i]
    return sf.v.mul_vector(RatVector(tuple(y)))


def complement_matrix(b: IntMatrix) -> IntMatrix:
    """A (n-m) x n integer matrix a with a b = 0 whose rows are a Z-basis of
    the saturated lattice {y : y^T b = 0}.

    Requires b of full column rank with a nontrivial complement; the row
    lattice is automatically saturated.
    """
    n, m = b.rows, b.cols
    if b.rank() != m:
        raise NotFullRankError("matrix is not of full column rank")
    if n == m:
        raise NotFullRankError("kernel complement is trivial")
    return kernel_basis(b.transpose()).transpose()


# ---------------------------------------------------------------------------
# Linear inequality feasibility (exact Fourier-Motzkin with witness)


def fourier_motzkin(ineqs: list[tuple[tuple[Fraction, ...], Fraction]], nvars: int):
    """Find x in Q^nvars with coeffs . x >= rhs for every inequality, or None.

    Classic elimination with exact back-substitution; fine at the problem
    sizes this package deals with.
    """
    if nvars == 0:
        return () if all(rhs <= 0 for _, rhs in ineqs) else None
    pos, neg, zero = [], [], []
    k = nvars - 1
    for coeffs, rhs in ineqs:
        c = coeffs[k]
        if c > 0:
            pos.append((coeffs, rhs))
        elif c < 0:
            neg.append((coeffs, rhs))
        else:
            zero.append((coeffs[:k], rhs))
    reduced = list(zero)
    for pc, pr in pos:
        for nc, nr in neg:
            a, b = pc[k], -nc[k]
            coeffs = tuple(b * p + a * nn for p, nn in zip(pc[:k], nc[:k]))
            reduced.append((coeffs, b * pr + a * nr))
    inner = fourier_motzkin(reduced, k)
    if inner is None:
        return None
    lo = None
    hi = None
    for coeffs, rhs in pos:
        # x_k >= (rhs - sum coeffs_i x_i) / coeffs_k
        bound = (rhs - sum((c * x for c, x in zip(coeffs[:k], inner)), Fraction(0))) / coeffs[k]
        lo = bound if lo is None or bound > lo else lo
    for coeffs, rhs in neg:
        bound = (rhs - sum((c * x for c, x in zip(coeffs[:k], inner)), Fraction(0))) / coeffs[k]
        hi = bound if hi is None or bound < hi else hi
    if lo is None and hi is None:
        val = Fraction(0)
    elif lo is None:
        val = hi
    elif hi is None:
        val = lo
    else:
        val = (lo + hi) / 2
    return inner + (val,)


def positive_functional(columns: list[tuple[int, ...]], dim: int):
    """w in Q^dim with w . c >= 1 for every column c, or None."""
    ineqs = [(tuple(Fraction(x) for x in c), Fraction(1)) for c in columns]
    return fourier_motzkin(ineqs, dim)


# ---------------------------------------------------------------------------
# Mixedness of a column span


@dataclass(frozen=True)
class MixednessCertificate:
    """Constructive verdict on whether every nonzero vector in the column
    span of b has entries of both signs.

    mixed=True carries a functional witness c with c . a > 0 componentwise
    for the complement a of b; mixed=False carries a nonzero nonnegative
    lattice vector in the column span.
    """

    mixed: bool
    functional: RatVector | None
    lattice_witness: tuple[int, ...] | None

    def to_json(self) -> dict:
        return {
            "mixed": self.mixed,
            "functional": self.functional.to_json() if self.functional else None,
            "lattice_witness": list(self.lattice_witness) if self.lattice_witness else None,
        }


def span_mixedness(b: IntMatrix) -> MixednessCertificate:
    """Decide mixedness of the column span of b, with a witness either way.

    The cone {x : b x >= 0} is pointed when b has full column rank, so it is
    nonzero exactly when it has an extreme ray, and every extreme ray is cut
    out by m-1 linearly independent rows.  Enumerating those gives the
    non-mixed witness; otherwise Fourier-Motzkin finds a strictly positive
    functional on the complement's row span.
    """
    n, m = b.rows, b.cols
    if b.rank() != m:
        raise NotFullRankError("matrix is not of full column rank")
    rows = [tuple(Fraction(x) for x in r) for r in b.entries]
    seen = set()
    for subset in combinations(range(n), m - 1):
        sub = [list(rows[i]) for i in subset]
        ker = rational_kernel(sub, m)
        if len(ker) != 1:
            continue
        x = primitive_integer_vector(ker[0])
        if x in seen:
            continue
        seen.add(x)
        t = b.mul_int_vector(x)
        for cand in (t, tuple(-a for a in t)):
            if all(a >= 0 for a in cand) and any(a > 0 for a in cand):
                return MixednessCertificate(False, None, cand)
    # no nonzero nonnegative vector in the span: find the dual witness
    if n == m:
        raise NotFullRankError("kernel complement is trivial")
    a = kernel_basis(b.transpose()).transpose()
    w = positive_functional(a.columns(), a.rows)
    if w is None:
        raise AssertionError("mixedness duality violated; this is a bug")
    c = RatVector(tuple(w))
    assert all(c.dot(col) > 0 for col in a.columns())
    return MixednessCertificate(True, c, None)


# ---------------------------------------------------------------------------
# Facets of the cone spanned by the columns of A


@dataclass(frozen=True)
class ConeFacet:
    """A facet of the cone R>=0 . columns(a).

    sigma: 0-based indices of the columns lying on the facet.
    nu: the support function, normalized so nu takes the value set Z exactly
        on the lattice generated by the columns and is >= 0 on all of them.
    """

    sigma: tuple[int, ...]
    nu: RatVector

    def value(self, point) -> Fraction:
        return self.nu.dot(point)

    def to_json(self) -> dict:
        return {
            "sigma": [i + 1 for i in self.sigma],
            "nu": self.nu.to_json(),
        }


def _fraction_gcd(values: list[Fraction]) -> Fraction:
    nz = [v for v in values if v != 0]
    if not nz:
        raise ValueError("all values zero")
    den = lcm(*[v.denominator for v in nz])
    g = 0
    for v in nz:
        g = gcd(g, abs(int(v * den)))
    return Fraction(g, den)


def facets(a: IntMatrix) -> list[ConeFacet]:
    """All facets of the cone spanned by the columns of a.

    Preconditions: a has full row rank d, no zero column, and all columns lie
    in an open half-space (the cone is pointed).  Candidate facet normals are
    enumerated from (d-1)-subsets of columns; each surviving normal is
    normalized to take value lattice exactly Z on the column lattice.
    """
    d, n = a.rows, a.cols
    cols = a.columns()
    for j, col in enumerate(cols):
        if all(x == 0 for x in col):
            raise ZeroColumnError(f"column {j + 1} is zero")
    if a.rank() != d:
        raise NotFullRankError("matrix is not of full row rank")
    if positive_functional(cols, d) is None:
        raise NotFullRankError("columns do not lie in an open half-space")
    lat = column_lattice_basis(a)
    lat_cols = lat.columns()
    found: dict[tuple[Fraction, ...], tuple[int, ...]] = {}
    for subset in combinations(range(n), d - 1):
        sub = [[Fraction(x) for x in cols[j]] for j in subset]
        ker = rational_kernel(sub, d)
        if len(ker) != 1:
            continue
        nu = list(ker[0])
        vals = [sum((q * x for q, x in zip(nu, col)), Fraction(0)) for col in cols]
        if any(v > 0 for v in vals) and any(v < 0 for v in vals):
            continue
        if all(v <= 0 for v in vals):
            nu = [-q for q in nu]
            vals = [-v for v in vals]
        sigma = tuple(j for j, v in enumerate(vals) if v == 0)
        # normalize on the column lattice
        lat_vals = [sum((q * x for q, x in zip(nu, col)), Fraction(0)) for col in lat_cols]
        g = _fraction_gcd(lat_vals)
        nu = [q / g for q in nu]
        key = tuple(nu)
        if key not in found:
            found[key] = sigma
    out = [ConeFacet(sigma, RatVector(tuple(key))) for key, sigma in found.items()]
    out.sort(key=lambda f: (f.sigma, f.nu.entries))
    return out


# ---------------------------------------------------------------------------
# Nonresonance


@dataclass(frozen=True)
class NonresonanceVerdict:
    """Whether beta avoids integral values of every facet support function."""

    nonresonant: bool
    facet_values: tuple[tuple[ConeFacet, Fraction], ...]
    violating: ConeFacet | None

    def to_json(self) -> dict:
        return {
            "nonresonant": self.nonresonant,
            "facets": [
                {"sigma": [i + 1 for i in f.sigma], "nu": f.nu.to_json(), "value": str(v)}
                for f, v in self.facet_values
            ],
            "violating": self.violating.to_json() if self.violating else None,
        }


def is_nonresonant(a: IntMatrix, beta: RatVector) -> NonresonanceVerdict:
    """beta is nonresonant when no facet support function takes an integer
    value on it."""
    if len(beta) != a.rows:
        raise DimensionMismatchError("beta length != row count")
    fs = facets(a)
    vals = tuple((f, f.value(beta)) for f in fs)
    violating = None
    for f, v in vals:
        if v.denominator == 1:
            violating = f
            break
    return NonresonanceVerdict(violating is None, vals, violating)


def nonresonant_shift_closure(a: IntMatrix, beta: RatVector, gammas) -> bool:
    """Check that beta + a*gamma stays nonresonant for each integer gamma.

    Nonresonance is invariant under shifts by the column lattice, since the
    support functions are integral on it; this is the sampled form of that
    closure property.
    """
    for gamma in gammas:
        shifted = beta.add(RatVector.make(a.mul_int_vector(tuple(gamma))))
        if not is_nonresonant(a, shifted).nonresonant:
            return False
    return True
