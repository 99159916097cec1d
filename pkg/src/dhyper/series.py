"""Truncated Puiseux series supported on a translate of a lattice.

A series is x^v times a finite rational combination of x^u for u in a
lattice L of Z^n.  Coefficients are trusted on a sup-norm window in
lattice-basis coordinates; operations that consume coefficients near the
window edge shrink the reliable radius instead of inventing zeros.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping

from .errors import (
    CycleInconsistentError,
    DenominatorVanishedError,
    DimensionMismatchError,
    IncompatibleRecurrencesError,
    InputFormatError,
    LatticeCollisionError,
    ZeroFactorialError,
)
from .exact import IntMatrix, RatVector, format_fraction, parse_fraction, smith_form

_smith = lru_cache(maxsize=None)(smith_form)

DERIVE = "DERIVE"
ANTIDERIVE = "ANTIDERIVE"


def _sup(t: Iterable[int]) -> int:
    return max((abs(x) for x in t), default=0)


def lattice_coordinates(lat: IntMatrix, vec: tuple[int, ...]) -> tuple[int, ...] | None:
    """Coordinates of vec in the column lattice of lat, or None if outside."""
    if len(vec) != lat.rows:
        raise DimensionMismatchError("vector length does not match lattice ambient dimension")
    if lat.cols == 0:
        return () if all(x == 0 for x in vec) else None
    sf = _smith(lat)
    y = sf.u.mul_int_vector(vec)
    t = [0] * lat.cols
    r = len(sf.diagonal)
    for i in range(lat.rows):
        if i < r and sf.diagonal[i]:
            if y[i] % sf.diagonal[i]:
                return None
            t[i] = y[i] // sf.diagonal[i]
        elif y[i]:
            return None
    return sf.v.mul_int_vector(tuple(t))


@dataclass(frozen=True)
class PuiseuxSeries:
    """Window-truncated series supported on base + (column lattice)."""

    nvars: int
    base: tuple[Fraction, ...]
    lattice: IntMatrix
    coeffs: dict[tuple[int, ...], Fraction] = field(compare=True)
    window: int = 0
    reliable: int = 0
    window_exhausted: bool = False

    @staticmethod
    def make(
        nvars: int,
        base: Iterable[Fraction],
        lattice: IntMatrix,
        coeffs: Mapping[tuple[int, ...], Fraction],
        window: int,
        reliable: int | None = None,
        window_exhausted: bool = False,
    ) -> "PuiseuxSeries":
        base_t = tuple(Fraction(q) for q in base)
        if len(base_t) != nvars or lattice.rows != nvars:
            raise DimensionMismatchError("base exponent or lattice does not match nvars")
        if reliable is None:
            reliable = window
        if window < 0 or reliable > window or reliable < -1:
            raise InputFormatError("bad window bounds")
        clean: dict[tuple[int, ...], Fraction] = {}
        for u, c in coeffs.items():
            q = Fraction(c)
            if not q:
                continue
            u = tuple(int(x) for x in u)
            co = lattice_coordinates(lattice, u)
            if co is None:
                raise InputFormatError("support point outside the series lattice")
            if _sup(co) > window:
                raise InputFormatError("support point outside the window")
            clean[u] = q
        return PuiseuxSeries(nvars, base_t, lattice, clean, window, reliable, window_exhausted)

    @staticmethod
    def monomial(exponent: Iterable[Fraction], coeff=1) -> "PuiseuxSeries":
        expo = tuple(Fraction(q) for q in exponent)
        n = len(expo)
        lat = IntMatrix.from_rows([[] for _ in range(n)]) if n else IntMatrix.from_rows([])
        c = Fraction(coeff)
        coeffs = {(0,) * n: c} if c else {}
        return PuiseuxSeries.make(n, expo, lat, coeffs, window=0)

    def coord(self, u: tuple[int, ...]) -> tuple[int, ...]:
        co = lattice_coordinates(self.lattice, u)
        if co is None:
            raise InputFormatError("point not in the series lattice")
        return co

    def exponent(self, u: tuple[int, ...]) -> tuple[Fraction, ...]:
        return tuple(b + x for b, x in zip(self.base, u))

    def support(self) -> list[tuple[int, ...]]:
        return sorted(self.coeffs)

    def is_zero_on_window(self) -> bool:
        return not self.coeffs and not self.window_exhausted

    def to_json(self) -> dict:
        return {
            "v": [format_fraction(q) for q in self.base],
            "lattice": [list(r) for r in self.lattice.entries],
            "terms": [
                {"u": list(u), "coeff": format_fraction(self.coeffs[u])}
                for u in sorted(self.coeffs)
            ],
            "window": self.window,
            "reliable": self.reliable,
            "window_exhausted": self.window_exhausted,
        }

    @staticmethod
    def from_json(obj: dict) -> "PuiseuxSeries":
        try:
            base = [parse_fraction(s) for s in obj["v"]]
            lattice = IntMatrix.from_rows([[int(x) for x in r] for r in obj["lattice"]])
            coeffs = {
                tuple(int(x) for x in t["u"]): parse_fraction(t["coeff"])
                for t in obj["terms"]
            }
            window = int(obj["window"])
            reliable = int(obj["reliable"])
            exhausted = bool(obj.get("window_exhausted", False))
        except (KeyError, TypeError, ValueError) as exc:
            raise InputFormatError(f"bad series json: {exc}") from exc
        return PuiseuxSeries.make(
            len(base), base, lattice, coeffs, window=window, reliable=reliable,
            window_exhausted=exhausted,
        )

    def __str__(self) -> str:
        terms = len(self.coeffs)
        return (
            f"PuiseuxSeries(base={[str(q) for q in self.base]}, rank={self.lattice.cols}, "
            f"terms={terms}, window={self.window}, reliable={self.reliable})"
        )


def density(f: PuiseuxSeries) -> Fraction:
    """Fraction of window lattice points with nonzero coefficient.

    A proxy for full support: 1 means every point in the window carries a
    coefficient.
    """
    m = f.lattice.cols
    total = (2 * f.window + 1) ** m
    return Fraction(len(f.coeffs), total)


# ---------------------------------------------------------------------------
# Shift isomorphisms


def shift(f: PuiseuxSeries, alpha: tuple[int, ...], direction: str) -> PuiseuxSeries:
    """Termwise d^alpha (DERIVE) or its right inverse (ANTIDERIVE).

    ANTIDERIVE produces g with d^alpha g = f; it requires the falling
    factorial [v+u+alpha]_alpha to be nonzero at every window point so the
    division is defined throughout.
    """
    from .weyl import falling_factorial, term_action_factor

    alpha = tuple(int(a) for a in alpha)
    if len(alpha) != f.nvars:
        raise DimensionMismatchError("shift exponent length mismatch")
    if any(a < 0 for a in alpha):
        raise InputFormatError("shift exponent must be nonnegative")
    if direction == DERIVE:
        base_out = tuple(b - a for b, a in zip(f.base, alpha))
        coeffs = {}
        for u, c in f.coeffs.items():
            factor = term_action_factor(alpha, f.exponent(u))
            if factor:
                coeffs[u] = c * factor
        return PuiseuxSeries.make(
            f.nvars, base_out, f.lattice, coeffs,
            window=f.window, reliable=f.reliable,
            window_exhausted=f.window_exhausted,
        )
    if direction != ANTIDERIVE:
        raise InputFormatError(f"unknown shift direction: {direction!r}")
    base_out = tuple(b + a for b, a in zip(f.base, alpha))
    divisors: dict[tuple[int, ...], Fraction] = {}
    m = f.lattice.cols
    for w in _ball_points(m, f.window):
        u = _ambient(f.lattice, w)
        expo = tuple(b + x for b, x in zip(base_out, u))
        factor = term_action_factor(alpha, expo)
        if not factor:
            raise ZeroFactorialError(
                f"falling factorial vanishes at window point {u}"
            )
        divisors[u] = factor
    coeffs = {u: c / divisors[u] for u, c in f.coeffs.items()}
    return PuiseuxSeries.make(
        f.nvars, base_out, f.lattice, coeffs,
        window=f.window, reliable=f.reliable,
        window_exhausted=f.window_exhausted,
    )


def _ball_points(m: int, r: int):
    if m == 0:
        yield ()
        return
    for head in range(-r, r + 1):
        for tail in _ball_points(m - 1, r):
            yield (head,) + tail


def _ambient(lat: IntMatrix, w: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(
        sum(lat.entries[i][j] * w[j] for j in range(lat.cols)) for i in range(lat.rows)
    )


# ---------------------------------------------------------------------------
# Annihilation checking


ZERO_ON_WINDOW = "ZERO_ON_WINDOW"
NONZERO = "NONZERO"
INCONCLUSIVE = "INCONCLUSIVE"


@dataclass(frozen=True)
class AnnihilationVerdict:
    index: int
    status: str
    window: int
    witness_point: tuple[int, ...] | None = None
    witness_coeff: Fraction | None = None
    witness_exponent: tuple[Fraction, ...] | None = None

    def to_json(self) -> dict:
        out = {"generator": self.index, "status": self.status, "window": self.window}
        if self.witness_point is not None:
            out["witness"] = {
                "u": list(self.witness_point),
                "coeff": format_fraction(self.witness_coeff),
                "exponent": [format_fraction(q) for q in self.witness_exponent],
            }
        return out


@dataclass(frozen=True)
class AnnihilationReport:
    verdicts: tuple[AnnihilationVerdict, ...]

    @property
    def all_zero(self) -> bool:
        return all(v.status == ZERO_ON_WINDOW for v in self.verdicts)

    @property
    def any_inconclusive(self) -> bool:
        return any(v.status == INCONCLUSIVE for v in self.verdicts)

    def to_json(self) -> dict:
        return {
            "all_zero": self.all_zero,
            "verdicts": [v.to_json() for v in self.verdicts],
        }


def annihilation_check(gens, f: PuiseuxSeries) -> AnnihilationReport:
    """Apply each operator to f and report whether the image vanishes on its
    reliable window."""
    from .weyl import apply_to_series

    verdicts = []
    for i, g in enumerate(gens):
        image = apply_to_series(g, f)
        if image.window_exhausted or image.reliable < 0:
            verdicts.append(AnnihilationVerdict(i, INCONCLUSIVE, -1))
        elif not image.coeffs:
            verdicts.append(AnnihilationVerdict(i, ZERO_ON_WINDOW, image.reliable))
        else:
            u = min(image.coeffs)
            verdicts.append(
                AnnihilationVerdict(
                    i, NONZERO, image.reliable,
                    witness_point=u,
                    witness_coeff=image.coeffs[u],
                    witness_exponent=image.exponent(u),
                )
            )
    return AnnihilationReport(tuple(verdicts))


# ---------------------------------------------------------------------------
# Recurrence-built power series


def recurrence_series(ratios, window: int) -> PuiseuxSeries:
    """Power series on the nonnegative grid from unit-step coefficient ratios.

    ratios[i] maps a grid point k to c_{k+e_i}/c_k.  Coefficients start at
    c_0 = 1 and propagate along the first-coordinate-then-rest path; every
    unit square is then checked for path independence, so incompatible
    ratio systems are rejected rather than silently linearized.
    """
    m = len(ratios)
    if m == 0:
        raise InputFormatError("need at least one ratio")

    def step(i, k):
        try:
            r = ratios[i](k)
        except ZeroDivisionError as exc:
            raise DenominatorVanishedError(
                f"ratio {i} undefined at grid point {k}"
            ) from exc
        return Fraction(r)

    coeffs: dict[tuple[int, ...], Fraction] = {(0,) * m: Fraction(1)}
    grid = sorted(_grid_points(m, window), key=lambda k: (sum(k), k))
    for k in grid:
        if k in coeffs:
            continue
        i = next(j for j in range(m) if k[j] > 0)
        prev = tuple(x - 1 if j == i else x for j, x in enumerate(k))
        coeffs[k] = coeffs[prev] * step(i, prev)
    for k in grid:
        for i in range(m):
            for j in range(i + 1, m):
                ki = tuple(x + 1 if t == i else x for t, x in enumerate(k))
                kj = tuple(x + 1 if t == j else x for t, x in enumerate(k))
                kij = tuple(x + 1 if t == j else x for t, x in enumerate(ki))
                if max(kij) > window:
                    continue
                one = step(i, k) * step(j, ki)
                two = step(j, k) * step(i, kj)
                if one != two:
                    raise IncompatibleRecurrencesError(
                        f"unit square at {k} closes differently along the two paths"
                    )
    lat = IntMatrix.identity(m)
    kept = {k: c for k, c in coeffs.items() if c}
    return PuiseuxSeries.make(
        m, (Fraction(0),) * m, lat, kept, window=window, reliable=window
    )


def _grid_points(m: int, r: int):
    if m == 0:
        yield ()
        return
    for head in range(r + 1):
        for tail in _grid_points(m - 1, r):
            yield (head,) + tail


# ---------------------------------------------------------------------------
# Torus change of variables


def monomial_substitution(g: PuiseuxSeries, b: IntMatrix, vprime: RatVector) -> PuiseuxSeries:
    """Substitute s_j = x^(column j of b) and multiply by x^vprime.

    A term c s^w becomes c x^(vprime + B w); the image lattice is B times
    the source lattice, which must stay injective.
    """
    if b.cols != g.nvars:
        raise DimensionMismatchError("substitution matrix width must match series variables")
    if len(vprime) != b.rows:
        raise DimensionMismatchError("vprime length must match substitution matrix height")
    if any(q.denominator != 1 for q in g.base):
        raise InputFormatError("monomial substitution needs an integer base exponent")
    lat_out = b @ g.lattice if g.lattice.cols else IntMatrix.from_rows(
        [[] for _ in range(b.rows)]
    )
    if lat_out.cols and lat_out.rank() != lat_out.cols:
        raise LatticeCollisionError("substitution matrix is not injective on the lattice")
    shift_base = b.mul_int_vector(tuple(int(q) for q in g.base))
    base_out = tuple(q + s for q, s in zip(vprime.entries, shift_base))
    coeffs = {b.mul_int_vector(u): c for u, c in g.coeffs.items()}
    if len(coeffs) != len(g.coeffs):
        raise LatticeCollisionError("substitution collapses distinct support points")
    return PuiseuxSeries.make(
        b.rows, base_out, lat_out, coeffs,
        window=g.window, reliable=g.reliable,
        window_exhausted=g.window_exhausted,
    )


# ---------------------------------------------------------------------------
# Gamma series


def gamma_series(
    a: IntMatrix,
    beta: RatVector,
    v: RatVector | None = None,
    window: int = 6,
) -> PuiseuxSeries:
    """Series solution on a translate of the integer kernel of a.

    The base exponent solves a.v = beta; coefficients obey the binomial
    recurrence lam_{u+b} [v+u+b]_{b+} = lam_u [v+u]_{b-} for kernel moves b
    and are produced outward from the origin, then every window edge is
    re-verified so path independence is a checked fact, not an assumption.

    With v omitted, candidates are tried in a deterministic order (the
    direct solution, then integer lattice shifts, then small non-integer
    kernel perturbations) until one supports the whole window.  The
    DHYPER_SEED environment variable rotates the candidate order.
    """
    import os

    from .exact import is_nonresonant, kernel_basis, solve_rational

    if len(beta) != a.rows:
        raise DimensionMismatchError("beta length does not match matrix height")
    if not is_nonresonant(a, beta).nonresonant:
        import warnings

        warnings.warn("resonant parameter: series construction may fail", RuntimeWarning)
    lat = kernel_basis(a) if a.rows < a.cols else IntMatrix.from_rows(
        [[] for _ in range(a.cols)]
    )
    if v is not None:
        got = a.mul_vector(v)
        if got.entries != beta.entries:
            raise InputFormatError("supplied base exponent does not solve a.v = beta")
        return _gamma_fill(a, lat, tuple(v.entries), window)

    v0 = solve_rational(a, beta)
    candidates = [tuple(v0.entries)]
    m = lat.cols
    for z in sorted(_ball_points(m, 2), key=lambda t: (_sup(t), t))[:16]:
        if any(z):
            u = _ambient(lat, z)
            candidates.append(tuple(q + x for q, x in zip(v0.entries, u)))
    fracs = [
        Fraction(1, 3), Fraction(2, 3), Fraction(1, 5), Fraction(2, 5),
        Fraction(1, 7), Fraction(3, 7), Fraction(1, 11), Fraction(5, 11),
    ]
    perturbations = []
    for q in fracs:
        perturbations.append((q,) * m)
    for q1 in fracs[:4]:
        for q2 in fracs[:4]:
            if m == 2 and q1 != q2:
                perturbations.append((q1, q2))
    seed = os.environ.get("DHYPER_SEED")
    if seed is not None and perturbations:
        k = abs(int(seed)) % len(perturbations)
        perturbations = perturbations[k:] + perturbations[:k]
    for q in perturbations:
        offset = tuple(
            sum(Fraction(lat.entries[i][j]) * q[j] for j in range(m))
            for i in range(a.cols)
        )
        candidates.append(tuple(x + o for x, o in zip(v0.entries, offset)))

    # a candidate is fully generic when every coordinate touched by some
    # kernel move is non-integral: then no falling factorial can vanish and
    # the window fills completely.  Try those first.
    touched = [i for i in range(a.cols) if any(lat.entries[i])]

    def generic(cand):
        return all(cand[i].denominator != 1 for i in touched)

    ordered = [c for c in candidates if generic(c)] + [
        c for c in candidates if not generic(c)
    ]
    last_error = None
    for cand in ordered:
        try:
            return _gamma_fill(a, lat, cand, window)
        except DenominatorVanishedError as exc:
            last_error = exc
    raise DenominatorVanishedError(
        f"no usable base exponent within the retry budget: {last_error}"
    )


def _gamma_fill(
    a: IntMatrix, lat: IntMatrix, v: tuple[Fraction, ...], window: int
) -> PuiseuxSeries:
    """Propagate coefficients outward from the origin and verify every edge."""
    from .weyl import term_action_factor

    m = lat.cols
    moves = [lat.col(j) for j in range(m)]
    pos = [tuple(max(x, 0) for x in b) for b in moves]
    neg = [tuple(max(-x, 0) for x in b) for b in moves]

    def expo(z):
        u = _ambient(lat, z)
        return tuple(q + x for q, x in zip(v, u))

    lam: dict[tuple[int, ...], Fraction] = {(0,) * m: Fraction(1)}
    order = sorted(_ball_points(m, window), key=lambda t: (_sup(t), t))
    pending = [z for z in order if z not in lam]
    # repeated sweeps: a point is filled once any already-known neighbor
    # reaches it through a nonvanishing multiplier
    progress = True
    while pending and progress:
        progress = False
        still = []
        for z in pending:
            got = None
            for i in range(m):
                for sgn in (1, -1):
                    src = tuple(x - sgn if j == i else x for j, x in enumerate(z))
                    if _sup(src) > window or src not in lam:
                        continue
                    if sgn == 1:
                        mult = term_action_factor(pos[i], expo(z))
                        if not mult:
                            continue
                        got = lam[src] * term_action_factor(neg[i], expo(src)) / mult
                    else:
                        mult = term_action_factor(neg[i], expo(z))
                        if not mult:
                            continue
                        got = lam[src] * term_action_factor(pos[i], expo(src)) / mult
                    break
                if got is not None:
                    break
            if got is None:
                still.append(z)
            else:
                lam[z] = got
                progress = True
        pending = still
    if pending:
        raise DenominatorVanishedError(
            f"window point {pending[0]} unreachable through nonvanishing factorials"
        )

    # every unit edge inside the window must satisfy the two-sided relation
    for z in order:
        for i in range(m):
            znext = tuple(x + 1 if j == i else x for j, x in enumerate(z))
            if _sup(znext) > window:
                continue
            lhs = lam[znext] * term_action_factor(pos[i], expo(znext))
            rhs = lam[z] * term_action_factor(neg[i], expo(z))
            if lhs != rhs:
                raise CycleInconsistentError(
                    f"edge {z} -> {znext} violates the recurrence"
                )

    coeffs = {_ambient(lat, z): c for z, c in lam.items() if c}
    return PuiseuxSeries.make(
        a.cols, v, lat, coeffs, window=window, reliable=window
    )


# ---------------------------------------------------------------------------
# Solution bases attached to a toral block decomposition


def _embed_rows(mat: IntMatrix, rows: tuple[int, ...], nvars: int) -> IntMatrix:
    out = [[0] * mat.cols for _ in range(nvars)]
    for i, r in enumerate(rows):
        for j in range(mat.cols):
            out[r][j] = mat.entries[i][j]
    return IntMatrix.from_rows(out)


def _column_submatrix(a: IntMatrix, cols: tuple[int, ...]) -> IntMatrix:
    return IntMatrix.from_rows(
        [[a.entries[i][j] for j in cols] for i in range(a.rows)]
    )


def toral_solution_basis(b, dec, beta, window: int = 8, a=None, graph_cap=None):
    """Series solutions attached to one toral block of the kernel matrix.

    For the empty block the answer is a plain lattice series.  Otherwise
    each bounded move-graph class with representative u contributes

        sum over class vertices w = u + Mv of
            c_w * x_{zrows}^w * (antiderivative of f along Nv)

    where f solves the column-restricted system with parameter shifted by
    the zrow columns at u and the c_w come from the class polynomial.  Term
    supports land in pairwise disjoint lattice cosets, so the sum is a
    single series on the joint lattice.
    """
    from .errors import DhyperError, UnsupportedCharacterError
    from .exact import solve_rational
    from .mgraph import bounded_representatives, lattice_polynomial_solutions
    from .systems import _character_is_trivial, _dual_matrix

    if dec.q != dec.p or (dec.q > 0 and dec.m.det() == 0):
        raise DhyperError("decomposition is not toral")
    if not _character_is_trivial(dec.b_j):
        raise UnsupportedCharacterError(
            "saturation of the column lattice is strictly larger; "
            "only the trivial character is supported"
        )
    a = _dual_matrix(b, a)
    if not isinstance(beta, RatVector):
        beta = RatVector.make(beta)
    if len(beta) != a.rows:
        raise DimensionMismatchError("beta length does not match the degree matrix")
    if dec.q == 0:
        return [gamma_series(a, beta, window=window)]

    n = b.rows
    jrows = dec.j
    zrows = dec.jbar
    a_j = _column_submatrix(a, jrows)
    a_zbar = _column_submatrix(a, zrows)
    bc = _column_submatrix(b, dec.m_columns)
    if graph_cap is None:
        graph_cap = max(window, 6)
    survey = bounded_representatives(dec.m, graph_cap)
    basis = []
    for comp in survey.bounded:
        u = comp.representative
        shifted = RatVector.make(
            [
                q - sum(Fraction(a_zbar.entries[i][k]) * u[k] for k in range(dec.q))
                for i, q in enumerate(beta.entries)
            ]
        )
        f = gamma_series(a_j, shifted, window=window)
        graph_coeffs = lattice_polynomial_solutions(dec.m, comp)
        lat_f = _embed_rows(f.lattice, jrows, n)
        if len(comp.vertices) == 1:
            lattice = lat_f
        else:
            joint = [
                [lat_f.entries[i][j] for j in range(lat_f.cols)]
                + [bc.entries[i][j] for j in range(bc.cols)]
                for i in range(n)
            ]
            from .exact import hermite_column_basis

            lattice = hermite_column_basis(IntMatrix.from_rows(joint))
        base = [Fraction(0)] * n
        for i, r in enumerate(jrows):
            base[r] = f.base[i]
        for k, r in enumerate(zrows):
            base[r] = Fraction(u[k])
        coeffs: dict[tuple[int, ...], Fraction] = {}
        exact = f.lattice.cols == 0 and not f.window_exhausted
        for w in comp.vertices:
            rhs = RatVector.make([Fraction(x - y) for x, y in zip(w, u)])
            v = solve_rational(dec.m, rhs)
            assert all(q.denominator == 1 for q in v.entries)
            v_int = tuple(int(q) for q in v.entries)
            nv = dec.n_block.mul_int_vector(v_int)
            g = f
            down = tuple(max(-x, 0) for x in nv)
            up = tuple(max(x, 0) for x in nv)
            if any(down):
                g = shift(g, down, DERIVE)
            if any(up):
                g = shift(g, up, ANTIDERIVE)
            offset = bc.mul_int_vector(v_int)
            cw = graph_coeffs[w]
            for key, c in g.coeffs.items():
                amb = [0] * n
                for i, r in enumerate(jrows):
                    amb[r] = key[i]
                point = tuple(x + o for x, o in zip(amb, offset))
                coeffs[point] = cw * c
        sups = [
            _sup(lattice_coordinates(lattice, point)) for point in coeffs
        ]
        window_out = max([window] + sups)
        if exact:
            reliable = window_out
            exhausted = False
        elif len(comp.vertices) == 1:
            window_out = f.window
            reliable = f.reliable
            exhausted = f.window_exhausted
        else:
            # mixed multi-coset sum: coefficients are individually exact on
            # each coset window but no joint radius is certified
            reliable = -1
            exhausted = True
        basis.append(
            PuiseuxSeries.make(
                n, base, lattice, coeffs,
                window=window_out, reliable=reliable,
                window_exhausted=exhausted,
            )
        )
    return basis
