import random
from fractions import Fraction
from math import factorial

import pytest

from dhyper.errors import DhyperError, DimensionMismatchError, InputFormatError
from dhyper.exact import IntMatrix
from dhyper.mgraph import (
    BOUNDED,
    CAP_EXCEEDED,
    UNBOUNDED_CERTIFIED,
    bounded_representatives,
    component,
    lattice_polynomial_solutions,
)
from dhyper.series import PuiseuxSeries, annihilation_check
from dhyper.systems import lattice_basis_ideal
from dhyper.weyl import WeylOperator

M_DEMO = IntMatrix.from_rows([[-2, 1], [1, -2]])


def test_demo_origin_is_isolated():
    comp = component(M_DEMO, (0, 0), cap=12)
    assert comp.verdict == BOUNDED
    assert comp.vertices == ((0, 0),)
    assert comp.certificate is None


def test_translation_certificate():
    m = IntMatrix.from_rows([[1], [1]])
    comp = component(m, (0, 0), cap=6)
    assert comp.verdict == UNBOUNDED_CERTIFIED
    v, s = comp.certificate
    assert all(x >= 0 for x in s) and any(s)
    assert v in comp.vertices
    assert tuple(a + b for a, b in zip(v, s)) in comp.vertices


def test_demo_off_origin_is_certified():
    comp = component(M_DEMO, (3, 0), cap=12)
    assert comp.verdict == UNBOUNDED_CERTIFIED


def test_antidiagonal_component_closes():
    m = IntMatrix.from_rows([[1], [-1]])
    comp = component(m, (3, 0), cap=3)
    assert comp.verdict == BOUNDED
    assert comp.vertices == ((0, 3), (1, 2), (2, 1), (3, 0))
    assert comp.representative == (0, 3)


def test_cap_exceeded_resolves_at_larger_cap():
    m = IntMatrix.from_rows([[2], [-1]])
    small = component(m, (0, 2), cap=3)
    assert small.verdict == CAP_EXCEEDED
    assert small.certificate is None
    large = component(m, (0, 2), cap=4)
    assert large.verdict == BOUNDED
    assert large.vertices == ((0, 2), (2, 1), (4, 0))


def test_component_input_validation():
    with pytest.raises(DimensionMismatchError):
        component(M_DEMO, (0, 0, 0), cap=4)
    with pytest.raises(InputFormatError):
        component(M_DEMO, (-1, 0), cap=4)
    with pytest.raises(InputFormatError):
        component(M_DEMO, (9, 0), cap=4)


def test_survey_demo_has_one_bounded_class():
    for cap in (12, 24):
        survey = bounded_representatives(M_DEMO, cap)
        assert len(survey.bounded) == 1
        assert survey.bounded[0].representative == (0, 0)
        assert survey.bounded[0].vertices == ((0, 0),)


def test_survey_partitions_the_box():
    cap = 6
    survey = bounded_representatives(M_DEMO, cap)
    cells = [set(c.vertices) for c in survey.explored]
    union = set()
    for cell in cells:
        assert not (union & cell)
        union |= cell
    box = {(i, j) for i in range(cap + 1) for j in range(cap + 1)}
    assert box <= union


def test_solutions_singleton():
    comp = component(M_DEMO, (0, 0), cap=12)
    assert lattice_polynomial_solutions(M_DEMO, comp) == {(0, 0): Fraction(1)}


def test_solutions_two_vertex_component():
    m = IntMatrix.from_rows([[2], [-1]])
    comp = component(m, (1, 1), cap=5)
    assert comp.vertices == ((1, 1), (3, 0))
    sols = lattice_polynomial_solutions(m, comp)
    assert sols == {(1, 1): Fraction(1), (3, 0): Fraction(1, 6)}


def test_solutions_match_reciprocal_factorials():
    # c_w proportional to 1 / prod(w_i!) satisfies every edge relation,
    # and tree propagation from the representative pins the scale
    rng = random.Random(7)
    for _ in range(12):
        q = rng.choice([2, 3])
        cols = rng.choice([1, 2])
        rows = [[rng.randint(-2, 2) for _ in range(cols)] for _ in range(q)]
        m = IntMatrix.from_rows(rows)
        survey = bounded_representatives(m, cap=5)
        for comp in survey.bounded:
            sols = lattice_polynomial_solutions(m, comp)
            rep = comp.representative
            scale = 1
            for x in rep:
                scale *= factorial(x)
            for w, c in sols.items():
                denom = 1
                for x in w:
                    denom *= factorial(x)
                assert c == Fraction(scale, denom)


def test_solution_polynomial_is_annihilated():
    m = IntMatrix.from_rows([[2, -1], [-1, 2], [-1, -1]])
    survey = bounded_representatives(m, cap=4)
    gens = lattice_basis_ideal(m).gens
    ops = []
    for g in gens:
        ops.append(
            WeylOperator.make(3, {((0, 0, 0), nu): c for nu, c in g.as_dict().items()})
        )
    checked = 0
    for comp in survey.bounded:
        sols = lattice_polynomial_solutions(m, comp)
        window = max(max(w) for w in sols)
        poly = PuiseuxSeries.make(
            nvars=3,
            base=(Fraction(0),) * 3,
            lattice=IntMatrix.identity(3),
            coeffs=sols,
            window=window + 3,
        )
        report = annihilation_check(ops, poly)
        assert report.all_zero
        checked += 1
    assert checked >= 2


def test_solutions_require_bounded_verdict():
    comp = component(M_DEMO, (3, 0), cap=12)
    with pytest.raises(DhyperError):
        lattice_polynomial_solutions(M_DEMO, comp)


def test_component_json_round_shapes():
    comp = component(M_DEMO, (0, 0), cap=12)
    data = comp.to_json()
    assert data["vertex_count"] == 1
    assert "certificate" not in data
    cert = component(IntMatrix.from_rows([[1], [1]]), (0, 0), cap=4).to_json()
    assert cert["certificate"]["base"] == [0, 0]
    assert cert["certificate"]["step"] == [1, 1]
