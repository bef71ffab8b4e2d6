"""Mirror maps, open Gromov-Witten corrections and potentials.

Everything here lives over a validated :class:`~toricmirror.fans.ToricContext`
and is graded by its ample weight, so a truncation order ``N`` always means
"keep weighted degree <= N".

The central objects:

``g_function``
    The hypergeometric series attached to a ray, summed over curve classes
    with zero anticanonical degree that pair negatively with that ray's
    divisor and non-negatively with all others.

``mirror_map`` / ``inverse_mirror_map``
    The coordinate change ``q_k = qc_k * exp(-g^{Psi_k}(qc))`` and its
    compositional inverse.  The inverse is *not* found by naive reversion of
    the unit factors: in logarithmic coordinates the defining equations say
    that the functions ``W_l = g_l(qc(q))`` satisfy the sparse fixed point

        W_l = sum over classes d of  gamma_{l,d} * q^d * prod_j exp(W_j)^{D_j.d}

    which we solve by iteration, gaining one weighted degree per pass and
    finishing with a verification pass that the result reproduces itself at
    full order.  The exponentials ``1 + delta_l = exp(W_l)`` then give the
    open Gromov-Witten generating functions directly.

``disc_potential`` / ``hori_vafa``
    The Laurent potentials; the "tilde" Hori-Vafa form is assembled through
    the coordinate-change route (inverse-map units times exponential factors)
    precisely so that comparing it against the disc potential exercises a
    genuinely different code path.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from . import lp
from .fans import CurveClass, DiscClass, ToricContext
from .series import QSeries, SeriesError, SubstitutionMap


@dataclass(frozen=True)
class GSeries:
    """The series ``g_l`` for one ray, in the complex (checked) variables."""

    ray: int
    series: QSeries


@dataclass(frozen=True)
class DivisorSeries:
    """An H^2-valued series: one QSeries coefficient per ray divisor."""

    coeffs: tuple

    def component(self, ray: int) -> QSeries:
        return self.coeffs[ray]

    def __add__(self, other):
        return DivisorSeries(tuple(a.add(b) for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        return DivisorSeries(tuple(a.sub(b) for a, b in zip(self.coeffs, other.coeffs)))


class Potential:
    """A Laurent polynomial in the fiber coordinates z with series coefficients.

    ``terms`` maps a z-exponent vector (length = fan dimension) to the
    QSeries coefficient multiplying ``z^exponent``.
    """

    def __init__(self, terms):
        self.terms = {tuple(e): s for e, s in terms.items() if not s.is_zero()}

    def coefficient(self, z_exponent) -> QSeries:
        return self.terms[tuple(z_exponent)]

    def items(self):
        return sorted(self.terms.items())

    def __eq__(self, other):
        if not isinstance(other, Potential):
            return NotImplemented
        return self.terms == other.terms

    def __repr__(self):
        return f"Potential({len(self.terms)} terms)"

    def to_records(self):
        return [{"z_exponent": list(e), "coefficient": s.to_records()}
                for e, s in self.items()]


def _shape(ctx: ToricContext, order) -> tuple:
    return ctx.rank, ctx.ample_weight, Fraction(order)


def _zero(ctx, order) -> QSeries:
    return QSeries.zero(*_shape(ctx, order))


def _one(ctx, order) -> QSeries:
    return QSeries.one(*_shape(ctx, order))


def enumerate_classes(ctx: ToricContext, ray: int, order):
    """Curve classes of the g-series index set for one ray, up to order.

    These are the integer classes with zero anticanonical degree that pair
    <= -1 with the divisor at ``ray`` and >= 0 with every other divisor,
    enumerated exhaustively (and deterministically) by exact integer-point
    scanning of the constraint polytope.
    """
    order = Fraction(order)
    key = ("classes", ray, order)
    cached = ctx._cache.get(key)
    if cached is not None:
        return cached
    rank = ctx.rank
    target = ctx.inv_perm[ray]
    cons = []
    c1 = tuple(Fraction(c) for c in ctx.c1)
    cons.append((c1, Fraction(0)))
    cons.append((tuple(-c for c in c1), Fraction(0)))
    for i in range(ctx.m):
        row = tuple(Fraction(p) for p in ctx.P[i])
        if i == target:
            cons.append((tuple(-p for p in row), Fraction(1)))
        else:
            cons.append((row, Fraction(0)))
    cons.append((tuple(-w for w in ctx.ample_weight), -order))
    points = lp.integer_points(cons, rank)
    classes = [CurveClass(p) for p in points]
    classes.sort(key=lambda c: (ctx.weight(c.comps), c.comps))
    ctx._cache[key] = classes
    return classes


def _g_coefficient(ctx: ToricContext, internal: int, comps) -> Fraction:
    """The hypergeometric coefficient of one class in g at internal ray index.

    With ``a = -(D_l . d) >= 1`` the coefficient is
    ``(-1)^a (a-1)! / prod_{p != l} (D_p . d)!``.
    """
    a = -sum(p * c for p, c in zip(ctx.P[internal], comps))
    coeff = Fraction(factorial(a - 1) if a % 2 == 0 else -factorial(a - 1))
    for i in range(ctx.m):
        if i == internal:
            continue
        k = sum(p * c for p, c in zip(ctx.P[i], comps))
        if k > 1:
            coeff /= factorial(k)
    return coeff


def g_function(ctx: ToricContext, ray: int, order) -> GSeries:
    """The hypergeometric correction series attached to one ray divisor."""
    order = Fraction(order)
    key = ("g", ray, order)
    cached = ctx._cache.get(key)
    if cached is not None:
        return cached
    internal = ctx.inv_perm[ray]
    terms = {}
    for cls in enumerate_classes(ctx, ray, order):
        terms[cls.comps] = _g_coefficient(ctx, internal, cls.comps)
    result = GSeries(ray=ray, series=QSeries(*_shape(ctx, order), terms=terms))
    ctx._cache[key] = result
    return result


def g_psi(ctx: ToricContext, k: int, order) -> QSeries:
    """The curve-basis combination ``sum_l (D_l . Psi_k) g_l``."""
    if not 0 <= k < ctx.rank:
        raise ValueError(f"curve-basis index {k} out of range")
    total = _zero(ctx, order)
    for internal in range(ctx.m):
        factor = ctx.P[internal][k]
        if not factor:
            continue
        g = g_function(ctx, ctx.basis_perm[internal], order)
        if not g.series.is_zero():
            total = total.add(g.series.scalar_mul(factor))
    return total


def g_ij(ctx: ToricContext, i: int, j: int, order) -> QSeries:
    """The double-index series: g_i weighted per class by ``D_j . d``."""
    order = Fraction(order)
    internal_i = ctx.inv_perm[i]
    internal_j = ctx.inv_perm[j]
    terms = {}
    for cls in enumerate_classes(ctx, i, order):
        dj = sum(p * c for p, c in zip(ctx.P[internal_j], cls.comps))
        if dj:
            terms[cls.comps] = dj * _g_coefficient(ctx, internal_i, cls.comps)
    return QSeries(*_shape(ctx, order), terms=terms)


def mirror_map(ctx: ToricContext, order) -> SubstitutionMap:
    """The map ``q_k = qc_k * exp(-g^{Psi_k}(qc))`` as a substitution."""
    order = Fraction(order)
    key = ("mirror", order)
    cached = ctx._cache.get(key)
    if cached is not None:
        return cached
    logs = tuple(g_psi(ctx, k, order).neg() for k in range(ctx.rank))
    result = SubstitutionMap(units=tuple(s.exp() for s in logs), log_units=logs)
    ctx._cache[key] = result
    return result


class _Inverse:
    """Shared fixed-point data for everything downstream of the inverse map.

    ``W[l]`` is ``log(1 + delta_l)`` for each internal ray with a nonempty
    class set, ``E[l] = exp(W[l])``, and :meth:`image` sends a formal checked
    monomial ``qc^d`` to its expression in the Kaehler variables,
    ``q^d * prod_j E_j^{D_j . d}``.
    """

    def __init__(self, ctx: ToricContext, order: Fraction):
        self.ctx = ctx
        self.order = order
        sources = {}
        for internal in range(ctx.m):
            classes = enumerate_classes(ctx, ctx.basis_perm[internal], order)
            if not classes:
                continue
            rows = []
            for cls in classes:
                gamma = _g_coefficient(ctx, internal, cls.comps)
                pair = tuple(sum(p * c for p, c in zip(ctx.P[j], cls.comps))
                             for j in range(ctx.m))
                rows.append((cls.comps, ctx.weight(cls.comps), gamma, pair))
            sources[internal] = rows
        self.sources = sources
        self.active = sorted(sources)
        self._images = {}
        self._powers = {}
        self._solve()

    # -- fixed point ------------------------------------------------------

    def _pass(self, E, order):
        """One Picard pass: rebuild every W_l from the current exponentials."""
        powers = {l: {0: _one(self.ctx, order), 1: E[l].truncate(order)}
                  for l in self.active}

        def epow(l, k):
            cache = powers[l]
            val = cache.get(k)
            if val is not None:
                return val
            if k > 0:
                val = epow(l, k - 1).mul(cache[1])
            else:
                rec = cache.get(-1)
                if rec is None:
                    rec = cache[1].recip()
                    cache[-1] = rec
                val = epow(l, k + 1).mul(rec) if k < -1 else rec
            cache[k] = val
            return val

        out = {}
        for l, rows in self.sources.items():
            acc = {}
            for comps, wt, gamma, pair in rows:
                if wt > order:
                    continue
                term = None
                for j in self.active:
                    if pair[j]:
                        p = epow(j, pair[j])
                        term = p if term is None else term.mul(p)
                term = (QSeries.monomial(comps, gamma, *_shape(self.ctx, order))
                        if term is None else term.shift(comps, gamma))
                for e, c in term.terms.items():
                    s = acc.get(e)
                    if s is None:
                        acc[e] = c
                    elif s == -c:
                        del acc[e]
                    else:
                        acc[e] = s + c
            out[l] = QSeries(*_shape(self.ctx, order), terms=acc)
        return out

    def _solve(self):
        ctx, order = self.ctx, self.order
        if not self.sources:
            self.W, self.E = {}, {}
            return
        step = min(wt for rows in self.sources.values() for _, wt, _, _ in rows)
        if step <= 0:
            raise ArithmeticError("class of non-positive degree in g index set")
        W = {l: _zero(ctx, order) for l in self.active}
        E = {l: _one(ctx, order) for l in self.active}
        trusted = Fraction(0)
        stable = False
        limit = int(order / step) + 4
        for _ in range(limit):
            rung = min(order, trusted + step)
            new = self._pass(E, rung)
            if rung == order and all(new[l] == W[l] for l in self.active):
                stable = True
                break
            # E kept exact: multiply by exp of the (high-degree) increment
            # instead of re-exponentiating from scratch each pass.
            for l in self.active:
                delta_w = new[l].truncate(order).sub(W[l])
                if not delta_w.is_zero():
                    E[l] = E[l].mul(delta_w.exp())
                W[l] = new[l].truncate(order)
            trusted = rung
        if not stable:
            raise ArithmeticError("inverse mirror map fixed point did not "
                                  f"stabilize within {limit} passes")
        self.W = W
        self.E = E

    # -- consumers --------------------------------------------------------

    def power(self, internal: int, k: int) -> QSeries:
        """Cached powers (including negative) of ``1 + delta`` factors."""
        if internal not in self.sources:
            return _one(self.ctx, self.order)
        cache = self._powers.setdefault(internal, {0: _one(self.ctx, self.order),
                                                   1: self.E[internal]})
        val = cache.get(k)
        if val is not None:
            return val
        if k > 0:
            val = self.power(internal, k - 1).mul(cache[1])
        elif k == -1:
            val = cache[1].recip()
        else:
            val = self.power(internal, k + 1).mul(self.power(internal, -1))
        cache[k] = val
        return val

    def image(self, exponent) -> QSeries:
        """The checked monomial ``qc^exponent`` written in Kaehler variables."""
        exponent = tuple(exponent)
        val = self._images.get(exponent)
        if val is not None:
            return val
        term = None
        for j in self.active:
            pj = sum(p * c for p, c in zip(self.ctx.P[j], exponent))
            if pj:
                p = self.power(j, pj)
                term = p if term is None else term.mul(p)
        if term is None:
            term = QSeries.monomial(exponent, 1, *_shape(self.ctx, self.order))
        else:
            term = term.shift(exponent)
        self._images[exponent] = term
        return term

    def log_units(self):
        return tuple(
            _zero(self.ctx, self.order) if not self.active else
            _sum_series([self.W[l].scalar_mul(self.ctx.P[l][k]) for l in self.active],
                        _zero(self.ctx, self.order))
            for k in range(self.ctx.rank))


def _sum_series(parts, zero):
    total = zero
    for part in parts:
        total = total.add(part)
    return total


def _inverse(ctx: ToricContext, order) -> _Inverse:
    order = Fraction(order)
    key = ("inverse", order)
    cached = ctx._cache.get(key)
    if cached is None:
        cached = _Inverse(ctx, order)
        ctx._cache[key] = cached
    return cached


def inverse_mirror_map(ctx: ToricContext, order) -> SubstitutionMap:
    """The compositional inverse ``qc_k = q_k * exp(g^{Psi_k}(qc(q)))``."""
    inv = _inverse(ctx, order)
    logs = inv.log_units()
    return SubstitutionMap(units=tuple(s.exp() for s in logs), log_units=logs)


def compose_with_inverse(ctx: ToricContext, f: QSeries, order=None) -> QSeries:
    """Substitute the inverse mirror map into a series in checked variables.

    Much faster than a generic substitution: each monomial's image under the
    inverse map is a cached product of ``(1+delta)`` powers.
    """
    if order is None:
        order = f.order
    out_order = min(Fraction(order), f.order)
    # monomials of negative degree need the inverse map at deeper relative
    # order to stay exact at the requested absolute order
    drop = min((f.degree(e) for e in f.terms), default=0)
    inv = _inverse(ctx, Fraction(order) - min(0, drop))
    total = _zero(ctx, out_order)
    for e, c in sorted(f.terms.items()):
        total = total.add(inv.image(e).scalar_mul(c).truncate(out_order))
    return total.truncate(out_order)


def delta(ctx: ToricContext, ray: int, order) -> QSeries:
    """The open Gromov-Witten generating series ``exp(g_l(qc(q))) - 1``."""
    inv = _inverse(ctx, order)
    internal = ctx.inv_perm[ray]
    if internal not in inv.sources:
        return _zero(ctx, order)
    return inv.E[internal].sub(_one(ctx, order))


def open_gw(ctx: ToricContext, beta: DiscClass, order=None) -> Fraction:
    """The one-pointed open invariant of a Maslov-index-2 disc class."""
    alpha = beta.curve
    maslov = 2 + 2 * ctx.degree(alpha)
    if maslov != 2:
        raise ValueError(f"disc class has Maslov index {maslov}, need 2 "
                         "(sphere part must have zero Chern number)")
    if alpha.is_zero():
        return Fraction(1)
    wt = ctx.weight(alpha.comps)
    if order is not None and wt > Fraction(order):
        raise ValueError("sphere class lies beyond the computed order")
    if wt <= 0:
        return Fraction(0)
    return delta(ctx, beta.ray, wt if order is None else order).coefficient(alpha.comps)


def open_gw_divisor(ctx: ToricContext, beta: DiscClass, ray: int, order=None) -> Fraction:
    """Divisor-insertion open invariant: the plain one times ``D_i . beta``."""
    base = open_gw(ctx, beta, order)
    incidence = (1 if ray == beta.ray else 0) + ctx.pairing(ray, beta.curve)
    return base * incidence


def _z_exponent(ctx: ToricContext, internal: int) -> tuple:
    ray = ctx.rays[internal]
    return tuple(sum(nu_j * x for nu_j, x in zip(ctx.nu[p], ray))
                 for p in range(ctx.n))


def disc_potential(ctx: ToricContext, order) -> Potential:
    """The open-GW-corrected Laurent potential ``sum_l (1+delta_l) Z_l``."""
    inv = _inverse(ctx, order)
    one = _one(ctx, order)
    terms = {}
    for internal in range(ctx.m):
        coeff = inv.E[internal] if internal in inv.sources else one
        if internal >= ctx.n:
            exponent = tuple(1 if k == internal - ctx.n else 0 for k in range(ctx.rank))
            coeff = coeff.shift(exponent)
        terms[_z_exponent(ctx, internal)] = coeff
    return Potential(terms)


def hori_vafa(ctx: ToricContext, order, form: str = "plain") -> Potential:
    """The Hori-Vafa potential, with Kaehler variables substituted.

    ``plain`` writes the superpotential with coefficients ``qc_k(q)``; the
    ``tilde`` form additionally applies the fiberwise coordinate change
    ``z_p -> exp(g_p) z_p``, which is what matches the disc potential.
    """
    if form not in ("plain", "tilde"):
        raise ValueError(f"form must be 'plain' or 'tilde', got {form!r}")
    inv = _inverse(ctx, order)
    units = inverse_mirror_map(ctx, order).units
    one = _one(ctx, order)
    terms = {}
    for internal in range(ctx.m):
        if internal < ctx.n:
            if form == "plain":
                coeff = one
            else:
                g = g_function(ctx, ctx.basis_perm[internal], order)
                coeff = compose_with_inverse(ctx, g.series, order).exp()
        else:
            k = internal - ctx.n
            exponent = tuple(1 if t == k else 0 for t in range(ctx.rank))
            coeff = units[k].shift(exponent)
            if form == "tilde":
                for p in range(ctx.n):
                    e = sum(nu_j * x for nu_j, x in zip(ctx.nu[p], ctx.rays[internal]))
                    if e:
                        coeff = coeff.mul(inv.power(p, e))
        terms[_z_exponent(ctx, internal)] = coeff
    return Potential(terms)


def batyrev_element(ctx: ToricContext, ray: int, order) -> DivisorSeries:
    """The Batyrev-style divisor element ``D_j - sum_i g_{i,j}(qc(q)) D_i``."""
    order = Fraction(order)
    inv = _inverse(ctx, order)
    internal_j = ctx.inv_perm[ray]
    coeffs = []
    for i in range(ctx.m):
        internal_i = ctx.inv_perm[i]
        base = _one(ctx, order) if i == ray else _zero(ctx, order)
        rows = inv.sources.get(internal_i)
        if rows:
            total = _zero(ctx, order)
            for comps, _, gamma, pair in rows:
                dj = pair[internal_j]
                if dj:
                    total = total.add(inv.image(comps).scalar_mul(dj * gamma))
            base = base.sub(total)
        coeffs.append(base)
    return DivisorSeries(tuple(coeffs))


def seidel_element(ctx: ToricContext, ray: int, order) -> DivisorSeries:
    """The normalized Seidel element ``exp(-g_j(qc(q))) B_j``."""
    inv = _inverse(ctx, order)
    scale = inv.power(ctx.inv_perm[ray], -1)
    b = batyrev_element(ctx, ray, order)
    return DivisorSeries(tuple(scale.mul(c) if not c.is_zero() else c
                               for c in b.coeffs))


def divisor_derivative(ctx: ToricContext, ray: int, f: QSeries) -> QSeries:
    """The weighted logarithmic derivative ``sum_k (D_i . Psi_k) q_k d/dq_k``."""
    row = ctx.P[ctx.inv_perm[ray]]
    terms = {}
    for e, c in f.terms.items():
        lam = sum(p * x for p, x in zip(row, e))
        if lam:
            terms[e] = lam * c
    return f.like(terms)


def extended_mirror_factors(ctx: ToricContext, order):
    """The per-ray unit factors ``exp(-g_l(qc))`` of the extended mirror map."""
    out = []
    for ray in range(ctx.m):
        g = g_function(ctx, ray, order)
        out.append(g.series.neg().exp())
    return out
