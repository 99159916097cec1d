"""Integer/rational linear algebra layer: normal forms, kernels, mixedness,
facets, nonresonance."""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations

import pytest

from dhyper.errors import NotFullRankError, ZeroColumnError
from dhyper.exact import (
    ConeFacet,
    IntMatrix,
    RatVector,
    column_lattice_basis,
    complement_matrix,
    facets,
    hermite_column_basis,
    is_nonresonant,
    kernel_basis,
    lattice_index,
    lattices_equal,
    nonresonant_shift_closure,
    positive_functional,
    smith_form,
    solve_rational,
    span_mixedness,
    _fraction_gcd,
)

A_DEMO = IntMatrix.from_rows([[3, 2, 1, 0], [0, 1, 2, 3]])
B_DEMO = IntMatrix.from_rows([[1, 0], [-2, 1], [1, -2], [0, 1]])
BETA_DEMO = RatVector.from_strings(["-11/6", "-5/3"])


def frac(s):
    return Fraction(s)


# ---------------------------------------------------------------------------
# Smith normal form


def _random_matrix(rng, r, c, lo=-5, hi=5):
    return IntMatrix.from_rows([[rng.randint(lo, hi) for _ in range(c)] for _ in range(r)])


def test_smith_form_identities_random():
    rng = random.Random(7)
    for _ in range(40):
        r = rng.randint(1, 4)
        c = rng.randint(1, 5)
        a = _random_matrix(rng, r, c)
        sf = smith_form(a)
        assert sf.u @ a @ sf.v == sf.s
        assert sf.u @ sf.uinv == IntMatrix.identity(r)
        assert sf.uinv @ sf.u == IntMatrix.identity(r)
        assert sf.v @ sf.vinv == IntMatrix.identity(c)
        assert sf.vinv @ sf.v == IntMatrix.identity(c)
        diag = [d for d in sf.diagonal if d != 0]
        assert all(d > 0 for d in diag)
        for x, y in zip(diag, diag[1:]):
            assert y % x == 0
        # off-diagonal entries are zero
        for i in range(r):
            for j in range(c):
                if i != j:
                    assert sf.s.entries[i][j] == 0


def test_smith_form_deterministic():
    a = IntMatrix.from_rows([[6, 4, 2], [2, 8, 4]])
    assert smith_form(a) == smith_form(a)


def test_smith_form_known_invariants():
    # gcds of k x k minors are 2, 12, 144, so the invariant factors are 2, 6, 12
    a = IntMatrix.from_rows([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
    sf = smith_form(a)
    assert [d for d in sf.diagonal if d] == [2, 6, 12]


# ---------------------------------------------------------------------------
# Kernels, complements, solving


def test_kernel_basis_demo_lattice():
    k = kernel_basis(A_DEMO)
    assert k.rows == 4 and k.cols == 2
    # each basis column is killed by the matrix
    for j in range(k.cols):
        assert all(x == 0 for x in A_DEMO.mul_int_vector(k.col(j)))
    # generates the same lattice as the reference basis
    assert lattices_equal(k, B_DEMO)


def test_kernel_basis_is_saturated():
    rng = random.Random(11)
    for _ in range(25):
        d = rng.randint(1, 3)
        n = rng.randint(d + 1, d + 3)
        a = _random_matrix(rng, d, n)
        if a.rank() != d:
            continue
        k = kernel_basis(a)
        assert k.cols == n - d
        for j in range(k.cols):
            assert all(x == 0 for x in a.mul_int_vector(k.col(j)))
        # a Z-basis of a kernel lattice is primitive: all invariant factors 1
        if k.cols:
            assert all(d_ == 1 for d_ in smith_form(k).diagonal[: k.cols])


def test_kernel_basis_rank_check():
    with pytest.raises(NotFullRankError):
        kernel_basis(IntMatrix.from_rows([[1, 2], [2, 4]]))


def test_complement_matrix_demo():
    a = complement_matrix(B_DEMO)
    assert a.rows == 2 and a.cols == 4
    assert all(x == 0 for r in (a @ B_DEMO).entries for x in r)
    # rows span the full saturation {w : w.B = 0}: invariant factors all 1
    assert list(smith_form(a).diagonal) == [1, 1]
    # the reference matrix spans an index-3 sublattice of that saturation:
    # containment holds but equality does not
    stacked = IntMatrix.from_rows(list(a.entries) + list(A_DEMO.entries))
    assert lattices_equal(stacked.transpose(), a.transpose())
    assert not lattices_equal(a.transpose(), A_DEMO.transpose())
    assert lattice_index(A_DEMO) == 3


def test_complement_matrix_trivial_kernel():
    with pytest.raises(NotFullRankError):
        complement_matrix(IntMatrix.from_rows([[1, 0], [0, 1]]))


def test_solve_rational_demo():
    v = solve_rational(A_DEMO, BETA_DEMO)
    assert A_DEMO.mul_vector(v).entries == BETA_DEMO.entries
    # the displayed particular solution also checks out by substitution
    v_ref = RatVector.from_strings(["-11/18", "0", "0", "-5/9"])
    assert A_DEMO.mul_vector(v_ref).entries == BETA_DEMO.entries


def test_solve_rational_random():
    rng = random.Random(3)
    for _ in range(20):
        d = rng.randint(1, 3)
        n = rng.randint(d, d + 3)
        a = _random_matrix(rng, d, n)
        if a.rank() != d:
            continue
        beta = RatVector.make([Fraction(rng.randint(-9, 9), rng.randint(1, 7)) for _ in range(d)])
        v = solve_rational(a, beta)
        assert a.mul_vector(v).entries == beta.entries


def test_lattice_index_demo():
    # the column lattice of the demo matrix has index 3 in Z^2
    assert lattice_index(A_DEMO) == 3
    assert lattice_index(B_DEMO) == 1


def test_column_lattice_membership_demo():
    # ZA = {(p, q) : p + q = 0 mod 3}
    lat = column_lattice_basis(A_DEMO)
    for p in range(-4, 5):
        for q in range(-4, 5):
            member = lattices_equal(
                hermite_column_basis(lat),
                hermite_column_basis(
                    IntMatrix.from_rows(
                        [list(r) + [x] for r, x in zip(lat.entries, (p, q))]
                    )
                ),
            )
            assert member == ((p + q) % 3 == 0)


# ---------------------------------------------------------------------------
# Mixedness


def test_span_mixedness_demo_mixed():
    cert = span_mixedness(B_DEMO)
    assert cert.mixed
    a = complement_matrix(B_DEMO)
    for col in a.columns():
        assert cert.functional.dot(col) > 0
    # the classic functional against the reference complement
    assert [RatVector.make((1, 1)).dot(col) for col in A_DEMO.columns()] == [3, 3, 3, 3]


def test_span_mixedness_not_mixed_witness():
    cert = span_mixedness(IntMatrix.from_rows([[1], [1]]))
    assert not cert.mixed
    assert cert.lattice_witness == (1, 1)


def test_span_mixedness_random_consistency():
    rng = random.Random(19)
    for _ in range(40):
        n = rng.randint(2, 5)
        m = rng.randint(1, n - 1)
        b = _random_matrix(rng, n, m, -3, 3)
        if b.rank() != m:
            continue
        cert = span_mixedness(b)
        if cert.mixed:
            a = complement_matrix(b)
            assert all(cert.functional.dot(col) > 0 for col in a.columns())
        else:
            u = cert.lattice_witness
            assert any(x > 0 for x in u) and all(x >= 0 for x in u)
            # u really lies in the column span
            aug = IntMatrix.from_rows([list(r) + [x] for r, x in zip(b.entries, u)])
            assert aug.rank() == m


# ---------------------------------------------------------------------------
# Facets: brute-force oracle over a grid of integer normals


def _facet_oracle(a: IntMatrix, box=7):
    """Independent facet enumeration: scan primitive integer normals in a
    box, keep those nonnegative on all columns whose zero set spans a
    hyperplane, then renormalize on the column lattice."""
    d = a.rows
    cols = a.columns()
    lat_cols = column_lattice_basis(a).columns()
    out = {}
    for nu_int in _grid_directions(d, box):
        vals = [sum(q * x for q, x in zip(nu_int, col)) for col in cols]
        if any(v < 0 for v in vals):
            continue
        sigma = tuple(j for j, v in enumerate(vals) if v == 0)
        zero_cols = [cols[j] for j in sigma]
        if _int_rank(zero_cols, d) != d - 1:
            continue
        nu = [Fraction(q) for q in nu_int]
        g = _fraction_gcd([sum((q * x for q, x in zip(nu, col)), Fraction(0)) for col in lat_cols])
        nu = tuple(q / g for q in nu)
        out[nu] = sigma
    return sorted((sig, nu) for nu, sig in out.items())


def _grid_directions(d, box):
    from math import gcd

    seen = set()
    def rec(prefix):
        if len(prefix) == d:
            g = 0
            for x in prefix:
                g = gcd(g, abs(x))
            if g == 0:
                return
            t = tuple(x // g for x in prefix)
            if t not in seen:
                seen.add(t)
                yield t
            return
        for x in range(-box, box + 1):
            yield from rec(prefix + [x])
    yield from rec([])


def _int_rank(vectors, d):
    if not vectors:
        return 0
    return IntMatrix.from_rows(vectors).rank()


def test_facets_demo():
    fs = facets(A_DEMO)
    got = sorted((f.sigma, f.nu.entries) for f in fs)
    assert got == [((0,), (frac(0), frac(1))), ((3,), (frac(1), frac(0)))]
    assert got == _facet_oracle(A_DEMO)


def test_facets_unimodular_2d():
    a = IntMatrix.from_rows([[1, 1], [0, 1]])
    fs = facets(a)
    got = sorted((f.sigma, f.nu.entries) for f in fs)
    assert got == [((0,), (frac(0), frac(1))), ((1,), (frac(1), frac(-1)))]
    assert got == _facet_oracle(a)


def test_facets_single_row():
    fs = facets(IntMatrix.from_rows([[1]]))
    assert len(fs) == 1
    assert fs[0].sigma == ()
    assert fs[0].nu.entries == (frac(1),)


def test_facets_normalization_respects_column_lattice():
    # both support functions of the demo cone hit 1 on lattice points
    fs = facets(A_DEMO)
    for f in fs:
        vals = [f.value(col) for col in column_lattice_basis(A_DEMO).columns()]
        assert _fraction_gcd(vals) == 1


def test_facets_random_against_oracle():
    rng = random.Random(23)
    done = 0
    while done < 8:
        a = _random_matrix(rng, 2, rng.randint(2, 4), 0, 4)
        cols = a.columns()
        if any(all(x == 0 for x in c) for c in cols):
            continue
        if a.rank() != 2 or positive_functional(cols, 2) is None:
            continue
        got = sorted((f.sigma, f.nu.entries) for f in facets(a))
        assert got == _facet_oracle(a)
        done += 1


def test_facets_zero_column_rejected():
    with pytest.raises(ZeroColumnError):
        facets(IntMatrix.from_rows([[1, 0], [1, 0]]))


def test_facets_non_pointed_rejected():
    with pytest.raises(NotFullRankError):
        facets(IntMatrix.from_rows([[1, -1], [0, 0]]))


# ---------------------------------------------------------------------------
# Nonresonance


def test_nonresonant_demo_beta():
    verdict = is_nonresonant(A_DEMO, BETA_DEMO)
    assert verdict.nonresonant
    assert verdict.violating is None
    vals = {f.sigma: v for f, v in verdict.facet_values}
    assert vals[(0,)] == frac("-5/3")
    assert vals[(3,)] == frac("-11/6")


def test_resonant_integer_beta():
    verdict = is_nonresonant(A_DEMO, RatVector.from_strings(["1", "3"]))
    assert not verdict.nonresonant
    assert verdict.violating is not None


def test_resonance_only_needs_one_integral_value():
    # second coordinate integral, first not
    verdict = is_nonresonant(A_DEMO, RatVector.from_strings(["1/2", "2"]))
    assert not verdict.nonresonant
    assert verdict.violating.sigma == (0,)


def test_nonresonance_closed_under_lattice_shifts():
    rng = random.Random(31)
    gammas = [[rng.randint(-3, 3) for _ in range(4)] for _ in range(12)]
    assert nonresonant_shift_closure(A_DEMO, BETA_DEMO, gammas)


def test_degenerate_beta_detected_after_shift():
    # a resonant beta stays resonant after column shifts as well
    beta = RatVector.from_strings(["0", "0"])
    assert not is_nonresonant(A_DEMO, beta).nonresonant
    assert not nonresonant_shift_closure(A_DEMO, beta, [[0, 0, 0, 0]])
