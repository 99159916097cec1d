"""Exact Groebner engines.

Two Buchberger implementations share the monomial-order machinery: a
commutative one for ideals in the d-variables (toric ideals, saturation by
elimination) and a left-ideal one for the Weyl algebra.  The Weyl engine
runs without S-pair skip criteria: the product criterion is unsound there
(d1 and x1 have disjoint leading monomials yet their S-pair reduces to a
unit), so every pair is processed.  Membership answers always carry
cofactors that re-multiply to the queried operator.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial, gcd, lcm
from typing import Iterable, Mapping

from .errors import DimensionMismatchError, InputFormatError
from .weyl import WeylOperator, normal_product

Expo = tuple[int, ...]


# ---------------------------------------------------------------------------
# Term orders


@dataclass(frozen=True)
class DegRevLex:
    """Degree-reverse-lexicographic order on exponent tuples."""

    nvars: int
    tag = "degrevlex"
    degree_compatible = True

    def key(self, e: Expo):
        return (sum(e), tuple(-x for x in reversed(e)))


@dataclass(frozen=True)
class BlockElim:
    """Eliminate the first nfirst variables: compare that block first."""

    nfirst: int
    nvars: int
    tag = "elim"
    degree_compatible = False

    def key(self, e: Expo):
        head, tail = e[: self.nfirst], e[self.nfirst :]
        return (
            sum(head),
            tuple(-x for x in reversed(head)),
            sum(tail),
            tuple(-x for x in reversed(tail)),
        )


def _divides(a: Expo, b: Expo) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _expo_lcm(a: Expo, b: Expo) -> Expo:
    return tuple(max(x, y) for x, y in zip(a, b))


# ---------------------------------------------------------------------------
# Commutative polynomials


@dataclass(frozen=True)
class CommPoly:
    """Sparse commutative polynomial over Q, exponents in N^nvars."""

    nvars: int
    terms: tuple[tuple[Expo, Fraction], ...]

    @staticmethod
    def make(nvars: int, mapping: Mapping[Expo, Fraction | int]) -> "CommPoly":
        clean = {}
        for e, c in mapping.items():
            q = Fraction(c)
            if not q:
                continue
            e = tuple(int(x) for x in e)
            if len(e) != nvars or any(x < 0 for x in e):
                raise InputFormatError("bad exponent")
            clean[e] = q
        return CommPoly(nvars, tuple((e, clean[e]) for e in sorted(clean)))

    @staticmethod
    def zero(nvars: int) -> "CommPoly":
        return CommPoly(nvars, ())

    @staticmethod
    def variable(i: int, nvars: int) -> "CommPoly":
        return CommPoly.make(nvars, {tuple(1 if j == i else 0 for j in range(nvars)): 1})

    def is_zero(self) -> bool:
        return not self.terms

    def as_dict(self) -> dict[Expo, Fraction]:
        return dict(self.terms)

    def __add__(self, other: "CommPoly") -> "CommPoly":
        acc = self.as_dict()
        for e, c in other.terms:
            acc[e] = acc.get(e, Fraction(0)) + c
        return CommPoly.make(self.nvars, acc)

    def __neg__(self) -> "CommPoly":
        return CommPoly(self.nvars, tuple((e, -c) for e, c in self.terms))

    def __sub__(self, other: "CommPoly") -> "CommPoly":
        return self + (-other)

    def __mul__(self, other: "CommPoly") -> "CommPoly":
        acc: dict[Expo, Fraction] = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                e = tuple(a + b for a, b in zip(e1, e2))
                acc[e] = acc.get(e, Fraction(0)) + c1 * c2
        return CommPoly.make(self.nvars, acc)

    def scale(self, q) -> "CommPoly":
        q = Fraction(q)
        return CommPoly.make(self.nvars, {e: c * q for e, c in self.terms})

    def lead(self, order) -> tuple[Expo, Fraction]:
        return max(self.terms, key=lambda t: order.key(t[0]))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        drl = DegRevLex(self.nvars)
        for e, c in sorted(self.terms, key=lambda t: drl.key(t[0]), reverse=True):
            body = " ".join(
                f"d{j + 1}" + (f"^{x}" if x > 1 else "") for j, x in enumerate(e) if x
            )
            if not body:
                parts.append(str(c))
            elif c == 1:
                parts.append(body)
            elif c == -1:
                parts.append(f"-{body}")
            else:
                parts.append(f"{c} {body}")
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out


def _comm_divide(f: dict, divisors, order):
    """Multivariate division: returns (quotients, remainder) over dicts."""
    quots = [dict() for _ in divisors]
    rem: dict[Expo, Fraction] = {}
    work = dict(f)
    while work:
        le = max(work, key=order.key)
        lc = work[le]
        hit = None
        for i, (ge, gc, gd) in enumerate(divisors):
            if _divides(ge, le):
                hit = (i, ge, gc, gd)
                break
        if hit is None:
            rem[le] = lc
            del work[le]
            continue
        i, ge, gc, gd = hit
        shift = tuple(a - b for a, b in zip(le, ge))
        factor = lc / gc
        quots[i][shift] = quots[i].get(shift, Fraction(0)) + factor
        for e, c in gd.items():
            te = tuple(a + b for a, b in zip(e, shift))
            v = work.get(te, Fraction(0)) - factor * c
            if v:
                work[te] = v
            else:
                work.pop(te, None)
    return quots, rem


def _prep(g: dict, order):
    le = max(g, key=order.key)
    return (le, g[le], g)


def _comm_buchberger(gens: list[dict], order) -> list[dict]:
    basis = [dict(g) for g in gens if g]
    pairs = [(i, j) for i in range(len(basis)) for j in range(i + 1, len(basis))]
    while pairs:
        def pair_key(p):
            i, j = p
            li = max(basis[i], key=order.key)
            lj = max(basis[j], key=order.key)
            return (order.key(_expo_lcm(li, lj)), i, j)

        pairs.sort(key=pair_key)
        i, j = pairs.pop(0)
        li = max(basis[i], key=order.key)
        lj = max(basis[j], key=order.key)
        if all(a == 0 or b == 0 for a, b in zip(li, lj)):
            continue  # coprime leads: S-pair reduces to zero commutatively
        l = _expo_lcm(li, lj)
        si = tuple(a - b for a, b in zip(l, li))
        sj = tuple(a - b for a, b in zip(l, lj))
        s: dict[Expo, Fraction] = {}
        for e, c in basis[i].items():
            te = tuple(a + b for a, b in zip(e, si))
            s[te] = s.get(te, Fraction(0)) + c / basis[i][li]
        for e, c in basis[j].items():
            te = tuple(a + b for a, b in zip(e, sj))
            v = s.get(te, Fraction(0)) - c / basis[j][lj]
            if v:
                s[te] = v
            else:
                s.pop(te, None)
        _, rem = _comm_divide(s, [_prep(g, order) for g in basis], order)
        if rem:
            basis.append(rem)
            pairs.extend((k, len(basis) - 1) for k in range(len(basis) - 1))
    return basis


def _comm_reduce_basis(basis: list[dict], order) -> list[dict]:
    # minimal: drop any element whose lead is divisible by another lead
    keep: list[dict] = []
    leads = [max(g, key=order.key) for g in basis]
    for i, g in enumerate(basis):
        if any(
            j != i and _divides(leads[j], leads[i])
            and (order.key(leads[j]) < order.key(leads[i]) or j < i)
            for j in range(len(basis))
        ):
            continue
        keep.append(dict(g))
    # fully reduce tails against the rest, until stable
    changed = True
    while changed:
        changed = False
        for i in range(len(keep)):
            others = [_prep(g, order) for j, g in enumerate(keep) if j != i and g]
            _, rem = _comm_divide(keep[i], others, order)
            if rem != keep[i]:
                keep[i] = rem
                changed = True
    keep = [g for g in keep if g]
    # monic, sorted by lead
    out = []
    for g in keep:
        le = max(g, key=order.key)
        lc = g[le]
        out.append({e: c / lc for e, c in g.items()})
    out.sort(key=lambda g: order.key(max(g, key=order.key)))
    return out


@dataclass(frozen=True)
class CommIdeal:
    """Ideal in the commutative polynomial ring, given by generators."""

    nvars: int
    gens: tuple[CommPoly, ...]

    @staticmethod
    def make(nvars: int, gens: Iterable[CommPoly]) -> "CommIdeal":
        gens = tuple(gens)
        for g in gens:
            if g.nvars != nvars:
                raise DimensionMismatchError("generator variable count mismatch")
        return CommIdeal(nvars, gens)

    def groebner(self, order=None) -> tuple[CommPoly, ...]:
        order = order or DegRevLex(self.nvars)
        return _groebner_cached(self, order)

    def normal_form(self, p: CommPoly, order=None) -> CommPoly:
        order = order or DegRevLex(self.nvars)
        if p.nvars != self.nvars:
            raise DimensionMismatchError("polynomial variable count mismatch")
        gb = self.groebner(order)
        _, rem = _comm_divide(
            p.as_dict(), [_prep(g.as_dict(), order) for g in gb if not g.is_zero()], order
        )
        return CommPoly.make(self.nvars, rem)

    def contains(self, p: CommPoly, order=None) -> bool:
        return self.normal_form(p, order).is_zero()


@lru_cache(maxsize=None)
def _groebner_cached(ideal: CommIdeal, order) -> tuple[CommPoly, ...]:
    gens = [g.as_dict() for g in ideal.gens if not g.is_zero()]
    if not gens:
        return ()
    gb = _comm_buchberger(gens, order)
    gb = _comm_reduce_basis(gb, order)
    return tuple(CommPoly.make(ideal.nvars, g) for g in gb)


def groebner_comm(ideal: CommIdeal, order=None) -> tuple[CommPoly, ...]:
    return ideal.groebner(order)


def saturate(ideal: CommIdeal, f: CommPoly) -> CommIdeal:
    """(ideal : f^infinity) via the auxiliary-variable trick.

    Adjoin t as a new first variable, add 1 - t*f, compute a Groebner basis
    for an order eliminating t, and keep the t-free elements.
    """
    if f.is_zero():
        raise InputFormatError("cannot saturate by zero")
    if f.nvars != ideal.nvars:
        raise DimensionMismatchError("saturation element variable count mismatch")
    n = ideal.nvars
    lifted = []
    for g in ideal.gens:
        lifted.append(CommPoly.make(n + 1, {(0,) + e: c for e, c in g.terms}))
    tf = {(1,) + e: -c for e, c in f.terms}
    tf[(0,) * (n + 1)] = tf.get((0,) * (n + 1), Fraction(0)) + 1
    lifted.append(CommPoly.make(n + 1, tf))
    big = CommIdeal.make(n + 1, lifted)
    gb = big.groebner(BlockElim(1, n + 1))
    kept = []
    for g in gb:
        if all(e[0] == 0 for e, _ in g.terms):
            kept.append(CommPoly.make(n, {e[1:]: c for e, c in g.terms}))
    return CommIdeal.make(n, kept)


# ---------------------------------------------------------------------------
# Weyl engine


def _wlead(g: dict, order):
    return max(g, key=lambda k: order.key(k[0] + k[1]))


def _lmul(coeff: Fraction, a: Expo, b: Expo, g: dict) -> dict:
    """Left-multiply the operator dict g by coeff * x^a d^b."""
    out: dict[tuple[Expo, Expo], Fraction] = {}
    for (mu, nu), c in g.items():
        bound = tuple(min(p, q) for p, q in zip(b, mu))
        for k in _kbox(bound):
            w = coeff * c
            for p, q, kk in zip(b, mu, k):
                if kk:
                    w *= comb(p, kk) * comb(q, kk) * factorial(kk)
            key = (
                tuple(x + y - z for x, y, z in zip(a, mu, k)),
                tuple(x + y - z for x, y, z in zip(b, nu, k)),
            )
            v = out.get(key, Fraction(0)) + w
            if v:
                out[key] = v
            else:
                out.pop(key, None)
    return out


def _kbox(bound: Expo):
    if not bound:
        yield ()
        return
    for head in range(bound[0] + 1):
        for tail in _kbox(bound[1:]):
            yield (head,) + tail


def _wadd_into(acc: dict, g: dict, scale: Fraction = Fraction(1)) -> None:
    for k, c in g.items():
        v = acc.get(k, Fraction(0)) + scale * c
        if v:
            acc[k] = v
        else:
            acc.pop(k, None)


def _wstrip(g: dict, order) -> tuple[dict, Fraction]:
    """Scale to primitive integer coefficients with positive lead; returns
    (stripped, factor) with stripped = factor * g."""
    if not g:
        return g, Fraction(1)
    num = 0
    den = 1
    for c in g.values():
        num = gcd(num, abs(c.numerator))
        den = lcm(den, c.denominator)
    factor = Fraction(den, num)
    le = _wlead(g, order)
    if g[le] < 0:
        factor = -factor
    return {k: c * factor for k, c in g.items()}, factor


def _wdivide(f: dict, basis, order):
    """Left division: f = sum quotients[i] . basis[i] + remainder, with no
    remainder monomial divisible by a basis lead."""
    quots = [dict() for _ in basis]
    rem: dict[tuple[Expo, Expo], Fraction] = {}
    work = dict(f)
    while work:
        le = _wlead(work, order)
        lc = work[le]
        hit = None
        for i, (ge, gc, gd) in enumerate(basis):
            if _divides(ge[0], le[0]) and _divides(ge[1], le[1]):
                hit = (i, ge, gc, gd)
                break
        if hit is None:
            rem[le] = lc
            del work[le]
            continue
        i, ge, gc, gd = hit
        a = tuple(x - y for x, y in zip(le[0], ge[0]))
        b = tuple(x - y for x, y in zip(le[1], ge[1]))
        factor = lc / gc
        k = (a, b)
        quots[i][k] = quots[i].get(k, Fraction(0)) + factor
        _wadd_into(work, _lmul(factor, a, b, gd), Fraction(-1))
    return quots, rem


@dataclass(frozen=True)
class MembershipCertificate:
    """Replayable left-ideal membership answer."""

    member: bool | str
    query: WeylOperator
    normal_form: WeylOperator
    cofactors: tuple[WeylOperator, ...]
    basis_status: str

    def verify(self, gens: Iterable[WeylOperator]) -> bool:
        total = WeylOperator.zero(self.query.nvars)
        for q, g in zip(self.cofactors, gens):
            total = total + normal_product(q, g)
        return total + self.normal_form == self.query

    def to_json(self) -> dict:
        member = self.member if isinstance(self.member, str) else bool(self.member)
        return {
            "member": member,
            "normal_form": self.normal_form.to_json(),
            "cofactors": [q.to_json() for q in self.cofactors],
            "basis_status": self.basis_status,
        }


class WeylGroebner:
    """Left Groebner basis of a Weyl-algebra ideal with cofactor tracking.

    Every S-pair is processed, but a nonzero remainder whose total degree
    exceeds the cap is discarded and flags the basis CAPPED.  Zero normal
    forms prove membership either way; a nonzero normal form denies
    membership only against a COMPLETE basis.
    """

    def __init__(self, gens: Iterable[WeylOperator], cap: int = 10, order=None):
        gens = list(gens)
        if not gens:
            raise InputFormatError("need at least one generator")
        n = gens[0].nvars
        for g in gens:
            if g.nvars != n:
                raise DimensionMismatchError("generator variable counts differ")
        order = order or DegRevLex(2 * n)
        if not getattr(order, "degree_compatible", False):
            raise InputFormatError("order is not admissible for the Weyl engine")
        self.nvars = n
        self.gens = tuple(gens)
        self.order = order
        self.cap = cap
        self._complete(cap)

    def _complete(self, cap: int) -> None:
        order = self.order
        ngens = len(self.gens)

        def unit_rep(i):
            rep = [dict() for _ in range(ngens)]
            rep[i] = {((0,) * self.nvars, (0,) * self.nvars): Fraction(1)}
            return rep

        basis: list[tuple[dict, list[dict]]] = []
        for i, g in enumerate(self.gens):
            d = {(mu, nu): c for mu, nu, c in g.terms}
            if d:
                stripped, factor = _wstrip(d, order)
                rep = unit_rep(i)
                rep[i] = {k: c * factor for k, c in rep[i].items()}
                basis.append((stripped, rep))

        pairs = [(i, j) for i in range(len(basis)) for j in range(i + 1, len(basis))]
        truncated = False

        def lcm_of(i, j):
            li = _wlead(basis[i][0], order)
            lj = _wlead(basis[j][0], order)
            return (
                _expo_lcm(li[0], lj[0]),
                _expo_lcm(li[1], lj[1]),
            )

        while pairs:
            pairs.sort(
                key=lambda p: (order.key(lcm_of(*p)[0] + lcm_of(*p)[1]), p[0], p[1])
            )
            i, j = pairs.pop(0)
            l = lcm_of(i, j)
            gi, repi = basis[i]
            gj, repj = basis[j]
            li, lj = _wlead(gi, order), _wlead(gj, order)
            ai = (
                tuple(x - y for x, y in zip(l[0], li[0])),
                tuple(x - y for x, y in zip(l[1], li[1])),
            )
            aj = (
                tuple(x - y for x, y in zip(l[0], lj[0])),
                tuple(x - y for x, y in zip(l[1], lj[1])),
            )
            ci, cj = gi[li], gj[lj]
            s: dict = {}
            _wadd_into(s, _lmul(Fraction(1, 1) / ci, ai[0], ai[1], gi))
            _wadd_into(s, _lmul(Fraction(-1, 1) / cj, aj[0], aj[1], gj))
            srep = [dict() for _ in range(ngens)]
            for t in range(ngens):
                _wadd_into(srep[t], _lmul(Fraction(1, 1) / ci, ai[0], ai[1], repi[t]))
                _wadd_into(srep[t], _lmul(Fraction(-1, 1) / cj, aj[0], aj[1], repj[t]))
            prepped = [
                (_wlead(g, order), g[_wlead(g, order)], g) for g, _ in basis
            ]
            quots, rem = _wdivide(s, prepped, order)
            for k, q in enumerate(quots):
                if not q:
                    continue
                for (a, b), c in q.items():
                    for t in range(ngens):
                        _wadd_into(srep[t], _lmul(-c, a, b, basis[k][1][t]))
            if rem:
                deg = max(sum(mu) + sum(nu) for mu, nu in rem)
                if deg > cap:
                    truncated = True
                    continue
                stripped, factor = _wstrip(rem, order)
                rep = [
                    {k: c * factor for k, c in srep[t].items()} for t in range(ngens)
                ]
                basis.append((stripped, rep))
                pairs.extend((k, len(basis) - 1) for k in range(len(basis) - 1))

        basis = self._interreduce(basis)
        self._basis = basis
        self.status = "capped" if truncated else "complete"

    def _interreduce(self, basis):
        order = self.order
        leads = [_wlead(g, order) for g, _ in basis]
        kept = []
        for i, (g, rep) in enumerate(basis):
            li = leads[i]
            covered = False
            for j in range(len(basis)):
                if j == i:
                    continue
                lj = leads[j]
                if _divides(lj[0], li[0]) and _divides(lj[1], li[1]):
                    if lj != li or j < i:
                        covered = True
                        break
            if not covered:
                kept.append((dict(g), [dict(r) for r in rep]))
        changed = True
        while changed:
            changed = False
            for i in range(len(kept)):
                g, rep = kept[i]
                others = []
                omap = []
                for j, (h, _) in enumerate(kept):
                    if j != i and h:
                        others.append((_wlead(h, order), h[_wlead(h, order)], h))
                        omap.append(j)
                quots, rem = _wdivide(g, others, order)
                if rem == g:
                    continue
                changed = True
                for qi, q in enumerate(quots):
                    if not q:
                        continue
                    j = omap[qi]
                    for (a, b), c in q.items():
                        for t in range(len(rep)):
                            _wadd_into(rep[t], _lmul(-c, a, b, kept[j][1][t]))
                kept[i] = (rem, rep)
        out = []
        for g, rep in kept:
            if not g:
                continue
            stripped, factor = _wstrip(g, order)
            out.append(
                (stripped, [{k: c * factor for k, c in r.items()} for r in rep])
            )
        out.sort(key=lambda t: self.order.key(_wlead(t[0], self.order)[0] + _wlead(t[0], self.order)[1]))
        return out

    @property
    def basis(self) -> tuple[WeylOperator, ...]:
        return tuple(
            WeylOperator.make(self.nvars, g) for g, _ in self._basis
        )

    def basis_representation(self, idx: int) -> tuple[WeylOperator, ...]:
        """Cofactors writing basis element idx over the original generators."""
        _, rep = self._basis[idx]
        return tuple(WeylOperator.make(self.nvars, r) for r in rep)

    def normal_form(self, p: WeylOperator):
        if p.nvars != self.nvars:
            raise DimensionMismatchError("query variable count mismatch")
        work = {(mu, nu): c for mu, nu, c in p.terms}
        prepped = [
            (_wlead(g, self.order), g[_wlead(g, self.order)], g) for g, _ in self._basis
        ]
        quots, rem = _wdivide(work, prepped, self.order)
        cof = [dict() for _ in self.gens]
        for k, q in enumerate(quots):
            if not q:
                continue
            for (a, b), c in q.items():
                for t in range(len(self.gens)):
                    _wadd_into(cof[t], _lmul(c, a, b, self._basis[k][1][t]))
        return (
            WeylOperator.make(self.nvars, rem),
            tuple(WeylOperator.make(self.nvars, c) for c in cof),
        )

    def membership(self, p: WeylOperator) -> MembershipCertificate:
        rem, cof = self.normal_form(p)
        if rem.is_zero():
            member: bool | str = True
        elif self.status == "complete":
            member = False
        else:
            member = "inconclusive"
        cert = MembershipCertificate(
            member=member,
            query=p,
            normal_form=rem,
            cofactors=cof,
            basis_status=self.status,
        )
        if not cert.verify(self.gens):
            raise InputFormatError("internal cofactor replay failed")
        return cert

    def spair_remainders_vanish(self) -> bool:
        """Recheck the Buchberger criterion on the finished basis."""
        order = self.order
        items = [g for g, _ in self._basis]
        prepped = [(_wlead(g, order), g[_wlead(g, order)], g) for g in items]
        for i in range(len(items)):
            for j in range(i + 1, len(items)):
                li, lj = prepped[i][0], prepped[j][0]
                l = (_expo_lcm(li[0], lj[0]), _expo_lcm(li[1], lj[1]))
                ai = (
                    tuple(x - y for x, y in zip(l[0], li[0])),
                    tuple(x - y for x, y in zip(l[1], li[1])),
                )
                aj = (
                    tuple(x - y for x, y in zip(l[0], lj[0])),
                    tuple(x - y for x, y in zip(l[1], lj[1])),
                )
                s: dict = {}
                _wadd_into(s, _lmul(Fraction(1) / prepped[i][1], ai[0], ai[1], items[i]))
                _wadd_into(s, _lmul(Fraction(-1) / prepped[j][1], aj[0], aj[1], items[j]))
                _, rem = _wdivide(s, prepped, order)
                if rem:
                    return False
        return True


def groebner_weyl(gens: Iterable[WeylOperator], cap: int = 10, order=None) -> WeylGroebner:
    return WeylGroebner(gens, cap=cap, order=order)
