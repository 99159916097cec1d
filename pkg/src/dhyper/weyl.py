"""Normal-ordered arithmetic in the Weyl algebra.

Operators are finite rational combinations of x^mu d^nu with all x factors
written to the left of all d factors.  The module also provides the
A-grading, Euler operators, the theta-polynomial rewriting used for
operators built from x_i d_i, and the action of an operator on a
lattice-supported Puiseux series.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Iterable, Mapping

from .errors import DhyperError, DimensionMismatchError, InputFormatError
from .exact import IntMatrix, RatVector, format_fraction, parse_fraction

Expo = tuple[int, ...]


def _add(u: Expo, v: Expo) -> Expo:
    return tuple(a + b for a, b in zip(u, v))


def _sub(u: Expo, v: Expo) -> Expo:
    return tuple(a - b for a, b in zip(u, v))


@dataclass(frozen=True)
class WeylOperator:
    """Element of the Weyl algebra in normal order.

    terms maps (mu, nu) to a nonzero rational coefficient; the pair
    represents x^mu d^nu.  Stored as a sorted tuple so equality and
    hashing are structural.
    """

    nvars: int
    terms: tuple[tuple[Expo, Expo, Fraction], ...]

    @staticmethod
    def make(nvars: int, mapping: Mapping[tuple[Expo, Expo], Fraction | int]) -> "WeylOperator":
        clean = {}
        for (mu, nu), c in mapping.items():
            if len(mu) != nvars or len(nu) != nvars:
                raise DimensionMismatchError("exponent length does not match nvars")
            if any(e < 0 for e in mu) or any(e < 0 for e in nu):
                raise InputFormatError("negative operator exponent")
            q = Fraction(c)
            if q:
                clean[(tuple(mu), tuple(nu))] = q
        items = tuple((mu, nu, clean[(mu, nu)]) for mu, nu in sorted(clean))
        return WeylOperator(nvars, items)

    @staticmethod
    def zero(nvars: int) -> "WeylOperator":
        return WeylOperator(nvars, ())

    @staticmethod
    def one(nvars: int) -> "WeylOperator":
        z = (0,) * nvars
        return WeylOperator(nvars, ((z, z, Fraction(1)),))

    @staticmethod
    def monomial(nvars: int, mu: Iterable[int], nu: Iterable[int], coeff=1) -> "WeylOperator":
        return WeylOperator.make(nvars, {(tuple(mu), tuple(nu)): Fraction(coeff)})

    @staticmethod
    def x(i: int, nvars: int) -> "WeylOperator":
        mu = tuple(1 if j == i else 0 for j in range(nvars))
        return WeylOperator.monomial(nvars, mu, (0,) * nvars)

    @staticmethod
    def d(i: int, nvars: int) -> "WeylOperator":
        nu = tuple(1 if j == i else 0 for j in range(nvars))
        return WeylOperator.monomial(nvars, (0,) * nvars, nu)

    def is_zero(self) -> bool:
        return not self.terms

    def coeff(self, mu: Expo, nu: Expo) -> Fraction:
        for m, n, c in self.terms:
            if m == mu and n == nu:
                return c
        return Fraction(0)

    def _check(self, other: "WeylOperator") -> None:
        if self.nvars != other.nvars:
            raise DimensionMismatchError("operator variable counts differ")

    def __add__(self, other: "WeylOperator") -> "WeylOperator":
        self._check(other)
        acc: dict[tuple[Expo, Expo], Fraction] = {}
        for mu, nu, c in self.terms + other.terms:
            acc[(mu, nu)] = acc.get((mu, nu), Fraction(0)) + c
        return WeylOperator.make(self.nvars, acc)

    def __neg__(self) -> "WeylOperator":
        return WeylOperator(self.nvars, tuple((mu, nu, -c) for mu, nu, c in self.terms))

    def __sub__(self, other: "WeylOperator") -> "WeylOperator":
        return self + (-other)

    def scale(self, q) -> "WeylOperator":
        q = Fraction(q)
        if not q:
            return WeylOperator.zero(self.nvars)
        return WeylOperator(self.nvars, tuple((mu, nu, c * q) for mu, nu, c in self.terms))

    def __mul__(self, other: "WeylOperator") -> "WeylOperator":
        return normal_product(self, other)

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(mu) + sum(nu) for mu, nu, _ in self.terms)

    def shifts(self) -> list[Expo]:
        """Exponent shifts mu - nu contributed by each term, deduplicated."""
        return sorted({_sub(mu, nu) for mu, nu, _ in self.terms})

    def to_json(self) -> dict:
        return {
            "nvars": self.nvars,
            "terms": [
                {"coeff": format_fraction(c), "x": list(mu), "dx": list(nu)}
                for mu, nu, c in self.terms
            ],
        }

    @staticmethod
    def from_json(obj: dict) -> "WeylOperator":
        try:
            nvars = int(obj["nvars"])
            mapping = {}
            for t in obj["terms"]:
                key = (tuple(int(e) for e in t["x"]), tuple(int(e) for e in t["dx"]))
                mapping[key] = mapping.get(key, Fraction(0)) + parse_fraction(t["coeff"])
        except (KeyError, TypeError, ValueError) as exc:
            raise InputFormatError(f"bad operator json: {exc}") from exc
        return WeylOperator.make(nvars, mapping)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for mu, nu, c in self.terms:
            syms = []
            for j, e in enumerate(mu):
                if e:
                    syms.append(f"x{j + 1}" + (f"^{e}" if e > 1 else ""))
            for j, e in enumerate(nu):
                if e:
                    syms.append(f"d{j + 1}" + (f"^{e}" if e > 1 else ""))
            body = " ".join(syms)
            if not body:
                parts.append(format_fraction(c))
            elif c == 1:
                parts.append(body)
            elif c == -1:
                parts.append(f"-{body}")
            else:
                parts.append(f"{format_fraction(c)} {body}")
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out


def normal_product(p: WeylOperator, q: WeylOperator) -> WeylOperator:
    """Product in the Weyl algebra, renormal-ordered.

    d^nu x^mu = sum_k (nu choose k)(mu choose k) k! x^(mu-k) d^(nu-k),
    componentwise over 0 <= k <= min(nu, mu).
    """
    p._check(q)
    n = p.nvars
    acc: dict[tuple[Expo, Expo], Fraction] = {}
    for mu1, nu1, c1 in p.terms:
        for mu2, nu2, c2 in q.terms:
            bound = tuple(min(a, b) for a, b in zip(nu1, mu2))
            for k in _boxed(bound):
                w = c1 * c2
                for a, b, kk in zip(nu1, mu2, k):
                    if kk:
                        w *= comb(a, kk) * comb(b, kk) * factorial(kk)
                key = (_add(mu1, _sub(mu2, k)), _add(nu2, _sub(nu1, k)))
                acc[key] = acc.get(key, Fraction(0)) + w
    return WeylOperator.make(n, acc)


def _boxed(bound: Expo):
    """All integer tuples 0 <= k <= bound componentwise."""
    if not bound:
        yield ()
        return
    for head in range(bound[0] + 1):
        for tail in _boxed(bound[1:]):
            yield (head,) + tail


def a_degree_components(a: IntMatrix, p: WeylOperator) -> list[tuple[Expo, WeylOperator]]:
    """Split p into homogeneous pieces for the grading deg(x^mu d^nu) = A(nu - mu)."""
    if a.cols != p.nvars:
        raise DimensionMismatchError("matrix width does not match operator variables")
    buckets: dict[Expo, dict[tuple[Expo, Expo], Fraction]] = {}
    for mu, nu, c in p.terms:
        deg = a.mul_int_vector(_sub(nu, mu))
        buckets.setdefault(deg, {})[(mu, nu)] = c
    return [(deg, WeylOperator.make(p.nvars, buckets[deg])) for deg in sorted(buckets)]


@dataclass(frozen=True)
class ThetaPoly:
    """Polynomial in the commuting symbols theta_i = x_i d_i."""

    nvars: int
    terms: tuple[tuple[Expo, Fraction], ...]

    @staticmethod
    def make(nvars: int, mapping: Mapping[Expo, Fraction | int]) -> "ThetaPoly":
        clean = {tuple(e): Fraction(c) for e, c in mapping.items() if Fraction(c)}
        for e in clean:
            if len(e) != nvars:
                raise DimensionMismatchError("exponent length does not match nvars")
        return ThetaPoly(nvars, tuple((e, clean[e]) for e in sorted(clean)))

    def evaluate(self, point: Iterable[Fraction]) -> Fraction:
        pt = [Fraction(v) for v in point]
        if len(pt) != self.nvars:
            raise DimensionMismatchError("evaluation point has wrong length")
        total = Fraction(0)
        for e, c in self.terms:
            v = c
            for base, exp in zip(pt, e):
                v *= base**exp
            total += v
        return total

    def __add__(self, other: "ThetaPoly") -> "ThetaPoly":
        if self.nvars != other.nvars:
            raise DimensionMismatchError("theta variable counts differ")
        acc: dict[Expo, Fraction] = {}
        for e, c in self.terms + other.terms:
            acc[e] = acc.get(e, Fraction(0)) + c
        return ThetaPoly.make(self.nvars, acc)

    def __mul__(self, other: "ThetaPoly") -> "ThetaPoly":
        if self.nvars != other.nvars:
            raise DimensionMismatchError("theta variable counts differ")
        acc: dict[Expo, Fraction] = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                e = _add(e1, e2)
                acc[e] = acc.get(e, Fraction(0)) + c1 * c2
        return ThetaPoly.make(self.nvars, acc)

    def to_weyl(self) -> WeylOperator:
        """Expand back into normal order via theta_i = x_i d_i."""
        out = WeylOperator.zero(self.nvars)
        for e, c in self.terms:
            piece = WeylOperator.one(self.nvars)
            for j, exp in enumerate(e):
                tj = WeylOperator.make(
                    self.nvars,
                    {
                        (
                            tuple(1 if i == j else 0 for i in range(self.nvars)),
                            tuple(1 if i == j else 0 for i in range(self.nvars)),
                        ): Fraction(1)
                    },
                )
                for _ in range(exp):
                    piece = normal_product(piece, tj)
            out = out + piece.scale(c)
        return out


def theta_form(p: WeylOperator) -> ThetaPoly:
    """Rewrite an operator whose terms all have mu = nu as a polynomial in theta.

    Uses x^mu d^mu = prod_j prod_{k < mu_j} (theta_j - k).
    """
    acc: dict[Expo, Fraction] = {}
    for mu, nu, c in p.terms:
        if mu != nu:
            raise DhyperError("not a theta operator")
        poly = ThetaPoly.make(p.nvars, {(0,) * p.nvars: Fraction(1)})
        for j, e in enumerate(mu):
            unit = tuple(1 if i == j else 0 for i in range(p.nvars))
            for k in range(e):
                factor = ThetaPoly.make(
                    p.nvars, {unit: Fraction(1), (0,) * p.nvars: Fraction(-k)}
                )
                poly = poly * factor
        for ee, cc in poly.terms:
            acc[ee] = acc.get(ee, Fraction(0)) + c * cc
    return ThetaPoly.make(p.nvars, acc)


def euler_generators(a: IntMatrix, beta: RatVector) -> list[WeylOperator]:
    """The operators E_i - beta_i with E_i = sum_j a_ij x_j d_j."""
    if len(beta) != a.rows:
        raise DimensionMismatchError("beta length does not match row count")
    n = a.cols
    zero = (0,) * n
    out = []
    for i in range(a.rows):
        mapping: dict[tuple[Expo, Expo], Fraction] = {}
        for j in range(n):
            if a.entries[i][j]:
                unit = tuple(1 if t == j else 0 for t in range(n))
                mapping[(unit, unit)] = Fraction(a.entries[i][j])
        mapping[(zero, zero)] = mapping.get((zero, zero), Fraction(0)) - beta.entries[i]
        out.append(WeylOperator.make(n, mapping))
    return out


def falling_factorial(w: Fraction, k: int) -> Fraction:
    v = Fraction(1)
    for t in range(k):
        v *= w - t
    return v


def term_action_factor(nu: Expo, exponent: Iterable[Fraction]) -> Fraction:
    """Scalar produced when d^nu hits the monomial with the given exponent."""
    v = Fraction(1)
    for w, k in zip(exponent, nu):
        if k:
            v *= falling_factorial(Fraction(w), k)
            if not v:
                return Fraction(0)
    return v


def apply_to_series(p: WeylOperator, f):
    """Apply an operator to a lattice-supported Puiseux series.

    The result is exact on a shrunk window: each term x^mu d^nu moves
    support by mu - nu, so output coefficients near the input window edge
    would need unknown input coefficients and are dropped from the
    reliable region rather than reported as spurious zeros.  When term
    shifts leave the series lattice the support lattice is refined first.
    """
    from .series import PuiseuxSeries, lattice_coordinates

    if p.nvars != f.nvars:
        raise DimensionMismatchError("operator and series variable counts differ")
    if p.is_zero():
        return PuiseuxSeries.make(
            f.nvars, f.base, f.lattice, {}, window=f.window, reliable=f.reliable,
        )

    shifts = p.shifts()
    delta0 = shifts[0]
    if all(lattice_coordinates(f.lattice, _sub(s, delta0)) is not None for s in shifts):
        return _apply_single_class(p, f, delta0)
    return _apply_refined(p, f, delta0)


def _apply_single_class(p: WeylOperator, f, delta0: Expo):
    """All term shifts agree modulo the series lattice: the output lives on
    a translate of the same lattice and convolution is direct."""
    from .series import PuiseuxSeries, lattice_coordinates

    offsets: dict[tuple[Expo, Expo], Expo] = {}
    max_shift = 0
    for mu, nu, _ in p.terms:
        o = _sub(_sub(mu, nu), delta0)
        offsets[(mu, nu)] = o
        co = lattice_coordinates(f.lattice, o)
        max_shift = max(max_shift, max((abs(z) for z in co), default=0))

    base_out = tuple(b + d for b, d in zip(f.base, delta0))
    reliable = f.reliable - max_shift
    if reliable < 0:
        return PuiseuxSeries.make(
            f.nvars, base_out, f.lattice, {}, window=0, reliable=-1,
            window_exhausted=True,
        )

    candidates = set()
    for u in f.coeffs:
        for o in offsets.values():
            candidates.add(_add(u, o))
    coeffs: dict[Expo, Fraction] = {}
    for w in candidates:
        co = lattice_coordinates(f.lattice, w)
        if max((abs(z) for z in co), default=0) > reliable:
            continue
        total = Fraction(0)
        for mu, nu, c in p.terms:
            src = _sub(w, offsets[(mu, nu)])
            lam = f.coeffs.get(src)
            if lam is None:
                continue
            total += c * lam * term_action_factor(nu, f.exponent(src))
        if total:
            coeffs[w] = total
    return PuiseuxSeries.make(
        f.nvars, base_out, f.lattice, coeffs, window=reliable, reliable=reliable,
    )


def _apply_refined(p: WeylOperator, f, delta0: Expo):
    """Term shifts fall into several classes modulo the series lattice:
    refine to the lattice generated by the old one plus all shift
    differences, then certify exactness point by point outward."""
    from .exact import hermite_column_basis
    from .series import PuiseuxSeries, lattice_coordinates

    n = f.nvars
    gens = [f.lattice.col(j) for j in range(f.lattice.cols)]
    gens += [_sub(s, delta0) for s in p.shifts()]
    lat = hermite_column_basis(
        IntMatrix.from_rows([[g[i] for g in gens] for i in range(n)])
    )
    mm = lat.cols

    offsets: dict[tuple[Expo, Expo], Expo] = {
        (mu, nu): _sub(_sub(mu, nu), delta0) for mu, nu, _ in p.terms
    }
    base_out = tuple(b + d for b, d in zip(f.base, delta0))

    def point_value(u: Expo):
        # exact output coefficient at ambient point u, or None when an
        # input coefficient beyond the known window would be needed
        total = Fraction(0)
        for mu, nu, c in p.terms:
            src = _sub(u, offsets[(mu, nu)])
            co = lattice_coordinates(f.lattice, src)
            if co is None:
                continue
            factor = term_action_factor(nu, f.exponent(src))
            if not factor:
                continue
            lam = f.coeffs.get(src)
            if lam is None:
                if max((abs(z) for z in co), default=0) > f.window:
                    return None
                continue
            total += c * lam * factor
        return total

    stencil = max(
        (
            max((abs(z) for z in lattice_coordinates(lat, o)), default=0)
            for o in offsets.values()
        ),
        default=0,
    )
    cap = f.window + stencil
    coeffs: dict[Expo, Fraction] = {}
    reliable = -1
    for r in range(cap + 1):
        ring = [w for w in _sup_ball(mm, r) if _sup_norm(w) == r]
        vals = []
        for w in ring:
            u = tuple(
                sum(lat.entries[i][j] * w[j] for j in range(mm)) for i in range(n)
            )
            vals.append((u, point_value(u)))
        if any(v is None for _, v in vals):
            break
        for u, v in vals:
            if v:
                coeffs[u] = v
        reliable = r
    exhausted = reliable < 0
    return PuiseuxSeries.make(
        n, base_out, lat, {} if exhausted else coeffs,
        window=max(reliable, 0), reliable=max(reliable, -1),
        window_exhausted=exhausted,
    )


def _sup_norm(t) -> int:
    return max((abs(x) for x in t), default=0)


def _sup_ball(m: int, r: int):
    if m == 0:
        yield ()
        return
    for head in range(-r, r + 1):
        for tail in _sup_ball(m - 1, r):
            yield (head,) + tail
