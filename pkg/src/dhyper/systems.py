"""Builders for the hypergeometric ideals and their block decompositions.

The two differential systems share a frame: a binomial ideal in the d
variables (the full toric ideal, or the lattice ideal of a kernel basis)
plus Euler operators E - beta.  Block decompositions split the rows of a
kernel matrix B into a mixed part M and a remainder, classifying each
split as toral or Andean; toral splits produce component ideals whose
solutions the series layer assembles.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .errors import (
    DhyperError,
    DimensionMismatchError,
    InputFormatError,
    NotMixedError,
    UnsupportedCharacterError,
    ZeroColumnError,
)
from .exact import (
    IntMatrix,
    RatVector,
    complement_matrix,
    integer_kernel,
    smith_form,
    span_mixedness,
)
from .groebner import CommIdeal, CommPoly, saturate
from .mgraph import BOUNDED, UNBOUNDED_CERTIFIED, component
from .weyl import WeylOperator, euler_generators

A_HYPERGEOMETRIC = "A_HYPERGEOMETRIC"
HORN = "HORN"
TORAL_COMPONENT = "TORAL_COMPONENT"

TORAL = "TORAL"
ANDEAN = "ANDEAN"


@dataclass(frozen=True)
class SystemSpec:
    """A named differential system with its assembled generators."""

    kind: str
    a: IntMatrix
    beta: tuple[Fraction, ...]
    generators: tuple[WeylOperator, ...]
    b: IntMatrix | None = None
    notes: tuple[str, ...] = ()

    def to_json(self) -> dict:
        data = {
            "kind": self.kind,
            "a": self.a.to_json(),
            "beta": [str(x) for x in self.beta],
            "generators": [g.to_json() for g in self.generators],
            "notes": list(self.notes),
        }
        if self.b is not None:
            data["b"] = self.b.to_json()
        return data


def _check_no_zero_column(a: IntMatrix) -> None:
    for j in range(a.cols):
        if all(a.entries[i][j] == 0 for i in range(a.rows)):
            raise ZeroColumnError(f"column {j + 1} is zero")


def lattice_basis_ideal(b: IntMatrix) -> CommIdeal:
    """One binomial d^{u+} - d^{u-} per column u of b."""
    _check_no_zero_column(b)
    n = b.rows
    gens = []
    for j in range(b.cols):
        col = [b.entries[i][j] for i in range(n)]
        pos = tuple(max(x, 0) for x in col)
        neg = tuple(max(-x, 0) for x in col)
        gens.append(CommPoly.make(n, {pos: 1, neg: -1}))
    return CommIdeal.make(n, gens)


def toric_ideal(a: IntMatrix) -> CommIdeal:
    """Prime binomial ideal of all d^u - d^v with Au = Av.

    Computed as the saturation of the lattice ideal of an integer kernel
    basis by the product of all variables.
    """
    _check_no_zero_column(a)
    n = a.cols
    kernel = integer_kernel(a)
    if kernel.cols == 0:
        return CommIdeal.make(n, [])
    ideal = lattice_basis_ideal(kernel)
    return saturate(ideal, CommPoly.make(n, {(1,) * n: 1}))


def _binomials_to_weyl(ideal: CommIdeal) -> list[WeylOperator]:
    n = ideal.nvars
    out = []
    for g in ideal.groebner():
        out.append(WeylOperator.make(n, {((0,) * n, e): c for e, c in g.terms}))
    return out


def _gens_to_weyl(ideal: CommIdeal) -> list[WeylOperator]:
    n = ideal.nvars
    return [
        WeylOperator.make(n, {((0,) * n, e): c for e, c in g.terms})
        for g in ideal.gens
    ]


def hypergeometric_system(a: IntMatrix, beta) -> SystemSpec:
    beta = _as_beta(beta, a.rows)
    gens = _binomials_to_weyl(toric_ideal(a)) + euler_generators(
        a, RatVector.make(beta)
    )
    return SystemSpec(
        kind=A_HYPERGEOMETRIC,
        a=a,
        beta=beta,
        generators=tuple(gens),
        notes=("toric generators are a reduced degrevlex basis",),
    )


def _as_beta(beta, expected: int) -> tuple[Fraction, ...]:
    if isinstance(beta, RatVector):
        beta = beta.entries
    beta = tuple(Fraction(x) for x in beta)
    if len(beta) != expected:
        raise DimensionMismatchError(
            f"beta has {len(beta)} entries, expected {expected}"
        )
    return beta


def _dual_matrix(b: IntMatrix, a: IntMatrix | None) -> IntMatrix:
    if a is None:
        return complement_matrix(b)
    if a.cols != b.rows:
        raise DimensionMismatchError("matrix column count does not match")
    prod = a @ b
    if any(any(row) for row in prod.entries):
        raise InputFormatError("row space is not orthogonal to the kernel matrix")
    if a.rank() != a.rows:
        raise InputFormatError("degree matrix must have full row rank")
    return a


def horn_system(b: IntMatrix, beta, a: IntMatrix | None = None) -> SystemSpec:
    if not span_mixedness(b).mixed:
        raise NotMixedError("kernel matrix is not mixed")
    a = _dual_matrix(b, a)
    beta = _as_beta(beta, a.rows)
    gens = _gens_to_weyl(lattice_basis_ideal(b)) + euler_generators(
        a, RatVector.make(beta)
    )
    return SystemSpec(
        kind=HORN,
        a=a,
        beta=beta,
        generators=tuple(gens),
        b=b,
        notes=("one binomial per kernel column",),
    )


@dataclass(frozen=True)
class BlockDecomposition:
    """Row split of a kernel matrix against the zero pattern of its columns.

    Rows jbar (q of them) meet only the columns listed in m_columns; those
    entries form the block m.  The complementary rows and columns give the
    blocks n_block and b_j, so permuting rows to (j, jbar) and columns to
    (m_columns, z_columns) exhibits [[N, B_J], [M, 0]].
    """

    b: IntMatrix
    jbar: tuple[int, ...]
    j: tuple[int, ...]
    m: IntMatrix
    n_block: IntMatrix
    b_j: IntMatrix
    m_columns: tuple[int, ...]
    z_columns: tuple[int, ...]
    irreducibility: str = "unverified"

    @property
    def q(self) -> int:
        return len(self.jbar)

    @property
    def p(self) -> int:
        return len(self.m_columns)

    def to_json(self) -> dict:
        return {
            "jbar": [i + 1 for i in self.jbar],
            "j": [i + 1 for i in self.j],
            "q": self.q,
            "p": self.p,
            "m": self.m.to_json(),
            "n": self.n_block.to_json(),
            "b_j": self.b_j.to_json(),
            "m_columns": [i + 1 for i in self.m_columns],
            "z_columns": [i + 1 for i in self.z_columns],
            "irreducibility": self.irreducibility,
        }


@dataclass(frozen=True)
class ComponentClass:
    verdict: str
    justification: str

    def to_json(self) -> dict:
        return {"verdict": self.verdict, "justification": self.justification}


def _submatrix(b: IntMatrix, rows, cols) -> IntMatrix:
    if not rows:
        return IntMatrix.from_rows([])
    return IntMatrix.from_rows(
        [[b.entries[i][j] for j in cols] for i in rows]
    )


def _is_mixed_block(m: IntMatrix) -> bool:
    # columnwise sense: each column needs entries of both strict signs,
    # so zero rows qualify vacuously and a single row never does
    if m.rows == 0:
        return True
    for j in range(m.cols):
        col = [m.entries[i][j] for i in range(m.rows)]
        if not (any(x > 0 for x in col) and any(x < 0 for x in col)):
            return False
    return True


def block_decompositions(b: IntMatrix) -> list[tuple[BlockDecomposition, ComponentClass]]:
    """All row subsets jbar whose rows vanish outside a mixed block.

    For each subset, the columns meeting jbar nontrivially must form a
    mixed q x p block with q <= p; the trivial subset always qualifies.
    Results are sorted by (q, jbar).
    """
    if not span_mixedness(b).mixed:
        raise NotMixedError("kernel matrix is not mixed")
    n, mcols = b.rows, b.cols
    out = []
    for q in range(0, min(n, mcols) + 1):
        for jbar in combinations(range(n), q):
            zcols = [
                jcol
                for jcol in range(mcols)
                if all(b.entries[i][jcol] == 0 for i in jbar)
            ]
            ccols = [jcol for jcol in range(mcols) if jcol not in zcols]
            p = len(ccols)
            if q > p:
                continue
            jrows = tuple(i for i in range(n) if i not in jbar)
            block = _submatrix(b, jbar, ccols)
            if not _is_mixed_block(block):
                continue
            dec = BlockDecomposition(
                b=b,
                jbar=jbar,
                j=jrows,
                m=block,
                n_block=_submatrix(b, jrows, ccols),
                b_j=_submatrix(b, jrows, zcols),
                m_columns=tuple(ccols),
                z_columns=tuple(zcols),
            )
            if q == p and (q == 0 or block.det() != 0):
                det = 1 if q == 0 else block.det()
                cls = ComponentClass(
                    TORAL, f"block is square of size {q} with determinant {det}"
                )
            elif q == p:
                cls = ComponentClass(ANDEAN, "square block has determinant 0")
            else:
                cls = ComponentClass(ANDEAN, f"block is {q} x {p} with q < p")
            out.append((dec, cls))
    out.sort(key=lambda t: (t[0].q, t[0].jbar))
    return out


def _character_is_trivial(b_j: IntMatrix) -> bool:
    if b_j.cols == 0:
        return True
    sf = smith_form(b_j)
    return all(d == 1 for d in sf.diagonal[: sf.rank])


def unbounded_monomial_exponents(m: IntMatrix, cap: int) -> list[tuple[int, ...]]:
    """Box points whose move-graph component is certified unbounded."""
    from itertools import product as iproduct

    q = m.rows
    if q == 0:
        return []
    out = []
    verdicts: dict[tuple[int, ...], str] = {}
    for u in iproduct(range(cap + 1), repeat=q):
        if u not in verdicts:
            comp = component(m, u, 2 * cap + 2)
            for v in comp.vertices:
                if all(x <= cap for x in v):
                    verdicts[v] = comp.verdict
        if verdicts.get(u) == UNBOUNDED_CERTIFIED:
            out.append(u)
    return out


def toral_component_ideal(
    b: IntMatrix,
    dec: BlockDecomposition,
    beta,
    monomial_cap: int = 6,
    a: IntMatrix | None = None,
) -> SystemSpec:
    q, p = dec.q, dec.p
    if q != p or (q > 0 and dec.m.det() == 0):
        raise DhyperError("decomposition is not toral")
    if not _character_is_trivial(dec.b_j):
        raise UnsupportedCharacterError(
            "saturation of the column lattice is strictly larger; "
            "only the trivial character is supported"
        )
    a = _dual_matrix(b, a)
    beta = _as_beta(beta, a.rows)
    n = b.rows
    gens = _gens_to_weyl(lattice_basis_ideal(b))

    if dec.j:
        a_j = IntMatrix.from_rows(
            [[a.entries[i][jcol] for jcol in dec.j] for i in range(a.rows)]
        )
        for g in toric_ideal(a_j).groebner():
            lifted = {}
            for e, c in g.terms:
                full = [0] * n
                for local, jcol in enumerate(dec.j):
                    full[jcol] = e[local]
                lifted[((0,) * n, tuple(full))] = c
            gens.append(WeylOperator.make(n, lifted))

    for jcol in dec.jbar:
        gens.append(
            WeylOperator.monomial(
                n, (0,) * n, tuple(1 if t == jcol else 0 for t in range(n))
            )
        )

    unbounded = unbounded_monomial_exponents(dec.m, monomial_cap)
    if q > 0 and not unbounded:
        warnings.warn(
            "no unbounded component certified within the monomial cap",
            RuntimeWarning,
        )
    minimal = [
        u
        for u in unbounded
        if not any(
            v != u and all(x <= y for x, y in zip(v, u)) for v in unbounded
        )
    ]
    for u in minimal:
        full = [0] * n
        for local, jcol in enumerate(dec.jbar):
            full[jcol] = u[local]
        op = WeylOperator.monomial(n, (0,) * n, tuple(full))
        if op not in gens:
            gens.append(op)

    gens.extend(euler_generators(a, RatVector.make(beta)))
    jbar_note = ",".join(str(i + 1) for i in dec.jbar) or "empty"
    unbounded_note = (
        "unbounded exponents (minimal, cap {}): {}".format(
            monomial_cap, "; ".join(str(u) for u in minimal) or "none"
        )
    )
    return SystemSpec(
        kind=TORAL_COMPONENT,
        a=a,
        beta=beta,
        generators=tuple(gens),
        b=b,
        notes=(
            f"rows {jbar_note} carry the mixed block",
            unbounded_note,
            "irreducibility unverified",
        ),
    )
