"""Connected components of the move graph on nonnegative lattice points.

Vertices are points of N^q; two points are adjacent when their difference
is plus or minus a column of an integer matrix M.  Searches run inside a
box with per-coordinate bound cap, so verdicts are three-valued: a
component fully closed inside the box is BOUNDED, one that escapes is
CAP_EXCEEDED unless a translation certificate is found.  Reaching both v
and v+s with s nonnegative and nonzero certifies unboundedness: the path
between them can be translated upward forever without leaving N^q.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .errors import (
    DhyperError,
    DimensionMismatchError,
    InconsistentCoefficientsError,
    InputFormatError,
)
from .exact import IntMatrix
from .weyl import term_action_factor

Point = tuple[int, ...]

BOUNDED = "BOUNDED"
UNBOUNDED_CERTIFIED = "UNBOUNDED_CERTIFIED"
CAP_EXCEEDED = "CAP_EXCEEDED"


@dataclass(frozen=True)
class MGraphComponent:
    """One explored component: exact when BOUNDED, else the in-box portion."""

    m: IntMatrix
    representative: Point
    vertices: tuple[Point, ...]
    verdict: str
    cap: int
    certificate: tuple[Point, Point] | None = None

    def to_json(self) -> dict:
        data = {
            "representative": list(self.representative),
            "verdict": self.verdict,
            "cap": self.cap,
            "vertex_count": len(self.vertices),
            "vertices": [list(v) for v in self.vertices],
        }
        if self.certificate is not None:
            v, s = self.certificate
            data["certificate"] = {"base": list(v), "step": list(s)}
        return data


@dataclass(frozen=True)
class ComponentSurvey:
    """Scan of a whole cap box: bounded representatives plus completeness."""

    bounded: tuple[MGraphComponent, ...]
    explored: tuple[MGraphComponent, ...]
    complete: bool
    cap: int


def _moves(m: IntMatrix) -> list[Point]:
    out = []
    for j in range(m.cols):
        col = tuple(m.entries[i][j] for i in range(m.rows))
        if any(col):
            if col not in out:
                out.append(col)
            neg = tuple(-x for x in col)
            if neg not in out:
                out.append(neg)
    return out


def component(m: IntMatrix, u, cap: int) -> MGraphComponent:
    q = m.rows
    u = tuple(int(x) for x in u)
    if len(u) != q:
        raise DimensionMismatchError(f"point has {len(u)} coordinates, expected {q}")
    if any(x < 0 for x in u):
        raise InputFormatError("start point has a negative coordinate")
    if any(x > cap for x in u):
        raise InputFormatError("start point lies outside the cap box")
    moves = _moves(m)
    seen = {u}
    frontier = [u]
    escaped = False
    while frontier:
        frontier.sort()
        v = frontier.pop(0)
        for mv in moves:
            w = tuple(a + b for a, b in zip(v, mv))
            if any(x < 0 for x in w):
                continue
            if any(x > cap for x in w):
                escaped = True
                continue
            if w not in seen:
                seen.add(w)
                frontier.append(w)
    vertices = tuple(sorted(seen))
    certificate = None
    for i, v1 in enumerate(vertices):
        for v2 in vertices[i + 1 :]:
            if v1 != v2 and all(a <= b for a, b in zip(v1, v2)):
                certificate = (v1, tuple(b - a for a, b in zip(v1, v2)))
                break
        if certificate:
            break
    if not escaped:
        # a finite closed component cannot contain a comparable pair
        assert certificate is None
        verdict = BOUNDED
    elif certificate is not None:
        verdict = UNBOUNDED_CERTIFIED
    else:
        verdict = CAP_EXCEEDED
    return MGraphComponent(
        m=m,
        representative=vertices[0],
        vertices=vertices,
        verdict=verdict,
        cap=cap,
        certificate=certificate,
    )


def bounded_representatives(m: IntMatrix, cap: int) -> ComponentSurvey:
    q = m.rows
    visited: set[Point] = set()
    explored = []
    complete = True
    for u in product(range(cap + 1), repeat=q):
        if u in visited:
            continue
        comp = component(m, u, cap)
        visited.update(comp.vertices)
        explored.append(comp)
        if comp.verdict == CAP_EXCEEDED:
            complete = False
    bounded = tuple(c for c in explored if c.verdict == BOUNDED)
    return ComponentSurvey(
        bounded=bounded, explored=tuple(explored), complete=complete, cap=cap
    )


def lattice_polynomial_solutions(m: IntMatrix, comp: MGraphComponent) -> dict[Point, Fraction]:
    """Coefficients of the polynomial solution supported on a bounded component.

    Each column b of m, read as the binomial operator d^{b+} - d^{b-},
    forces c_w [w]_{b+} = c_{w-b} [w-b]_{b-} along edges.  Coefficients are
    propagated from the representative (normalized to 1) along a spanning
    tree, then every in-component edge is rechecked exactly.
    """
    if comp.verdict != BOUNDED:
        raise DhyperError("component is not certified bounded")
    vertices = set(comp.vertices)
    cols = []
    for j in range(m.cols):
        col = tuple(m.entries[i][j] for i in range(m.rows))
        if any(col):
            cols.append(col)
    coeffs: dict[Point, Fraction] = {comp.representative: Fraction(1)}
    frontier = [comp.representative]
    while frontier:
        frontier.sort()
        v = frontier.pop(0)
        for b in cols:
            pos = tuple(max(x, 0) for x in b)
            neg = tuple(max(-x, 0) for x in b)
            w = tuple(a + x for a, x in zip(v, b))
            if w in vertices and w not in coeffs:
                num = term_action_factor(neg, tuple(Fraction(x) for x in v))
                den = term_action_factor(pos, tuple(Fraction(x) for x in w))
                assert den != 0
                coeffs[w] = coeffs[v] * num / den
                frontier.append(w)
            w = tuple(a - x for a, x in zip(v, b))
            if w in vertices and w not in coeffs:
                num = term_action_factor(pos, tuple(Fraction(x) for x in v))
                den = term_action_factor(neg, tuple(Fraction(x) for x in w))
                assert den != 0
                coeffs[w] = coeffs[v] * num / den
                frontier.append(w)
    assert set(coeffs) == vertices
    for v in comp.vertices:
        for b in cols:
            pos = tuple(max(x, 0) for x in b)
            neg = tuple(max(-x, 0) for x in b)
            w = tuple(a + x for a, x in zip(v, b))
            if w not in vertices:
                continue
            lhs = coeffs[w] * term_action_factor(pos, tuple(Fraction(x) for x in w))
            rhs = coeffs[v] * term_action_factor(neg, tuple(Fraction(x) for x in v))
            if lhs != rhs:
                raise InconsistentCoefficientsError(
                    f"edge {v} -> {w} fails the binomial relation"
                )
    return coeffs
