"""The series q, tau, r and the factors A^w, A^r, A of the star-product symbol.

Conventions:

* ``q(X) = det(sinh(ad X/2)/(ad X/2))^(1/2)``;
* ``tau(X) = exp(sum_n w_n/2^n tr((ad X)^n))`` (``tau = 1`` in the trivial mode);
* ``r = q / tau``;
* ``A^w(X, Y) = r(X) r(Y) / r(Z(X, Y))`` and ``A^r = exp(xi . (Z - X - Y))``.

The parameter ``t`` enters through the rescaled algebra: ``A^w_t(X, Y) =
A^w(tX, tY)`` and ``Z_t(X, Y) = Z(tX, tY)/t``.  A monomial
``X^a Y^b xi^c t^k`` of ``A`` always has ``k = |a| + |b| - |c|``.

Symbols live on the ring ``X_*, Y_*, <basis>, t``.  Because the full symbol
grows quickly, the builders accept a *window*: bounds on the X- and
Y-degrees.  A window is a down-set of monomials, so products can be truncated
to it on the fly.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import factorial

from .cbh import bch, bernoulli
from .exactalg.duality import block_names
from .exactalg.poly import ONE, ZERO, MultiPoly, rational
from .exactalg.series import TruncSeries, matrix_series_det_sqrt, matmul_trunc, series_exp, series_inverse
from .lie import ad_matrix, symbolic_point

TRIVIAL = "trivial"


def normalize_tau(mode):
    """``"trivial"`` or a tuple of rational wheel weights (w_1, w_2, ...)."""
    if mode is None or mode == TRIVIAL:
        return TRIVIAL
    weights = tuple(rational(w) for w in mode)
    if not any(weights):
        return TRIVIAL
    return weights


def x_ring(g, prefix="X"):
    return block_names(g.basis, prefix)


def symbol_ring(g):
    return x_ring(g, "X") + x_ring(g, "Y") + tuple(g.basis) + ("t",)


def ad_power_traces(g, order, x=None, ring=None, graded=None):
    """[tr((ad X)^n) for n = 0..order], each truncated to weighted degree ``order``."""
    if x is None:
        ring = x_ring(g)
        x = symbolic_point(g, "X", ring)
    m = ad_matrix(g, x)
    size = g.dim
    ring = ring or m[0][0].variables
    traces = [MultiPoly.constant(size, ring)]
    power = m
    for n in range(1, order + 1):
        tr = MultiPoly.zero(ring)
        for i in range(size):
            tr = tr + power[i][i]
        traces.append(tr.truncate(order, graded))
        if n < order:
            power = matmul_trunc(power, m, order, graded)
    return traces


# -- q, tau, r ---------------------------------------------------------

@lru_cache(maxsize=128)
def q_series(g, order):
    """det(sinh(ad X/2)/(ad X/2))^(1/2) through degree ``order``."""
    ring = x_ring(g)
    x = symbolic_point(g, "X", ring)
    a = ad_matrix(g, x)
    size = g.dim
    ident = [[MultiPoly.constant(1 if i == j else 0, ring) for j in range(size)] for i in range(size)]
    m = [row[:] for row in ident]
    a2 = matmul_trunc(a, a, order)
    power = ident
    for k in range(1, order // 2 + 1):
        power = matmul_trunc(power, a2, order)
        c = ONE / (4 ** k * factorial(2 * k + 1))
        m = [[m[i][j] + power[i][j] * c for j in range(size)] for i in range(size)]
    return matrix_series_det_sqrt(m, order)


def log_q_coefficients(order):
    """rho_n with log q = sum rho_n tr((ad X)^n)."""
    rho = {}
    for n in range(1, order + 1):
        rho[n] = bernoulli(n) / (2 * n * factorial(n)) if n % 2 == 0 else ZERO
    return rho


@lru_cache(maxsize=128)
def tau_series(g, order, mode=TRIVIAL):
    mode = normalize_tau(mode)
    ring = x_ring(g)
    if mode == TRIVIAL:
        return TruncSeries.one(ring, order)
    traces = ad_power_traces(g, order)
    s = MultiPoly.zero(ring)
    for n, w in enumerate(mode, start=1):
        if n > order:
            break
        if w:
            s = s + traces[n] * (w / 2 ** n)
    return series_exp(TruncSeries(s, order))


@dataclass(frozen=True)
class DufloSeries:
    q: TruncSeries
    tau: TruncSeries
    r: TruncSeries
    order: int
    tau_mode: object


@lru_cache(maxsize=128)
def duflo_series(g, order, mode=TRIVIAL):
    mode = normalize_tau(mode)
    q = q_series(g, order)
    tau = tau_series(g, order, mode)
    r = q if mode == TRIVIAL else q * tau.inverse()
    return DufloSeries(q, tau, r, order, mode)


def log_r_coefficients(order, mode=TRIVIAL):
    mode = normalize_tau(mode)
    rho = log_q_coefficients(order)
    if mode != TRIVIAL:
        for n, w in enumerate(mode, start=1):
            if n <= order:
                rho[n] = rho[n] - w / 2 ** n
    return rho


def scale_in_t(poly, graded, t="t"):
    """f(tX): each monomial picks up t^(degree in ``graded``)."""
    graded = set(graded)
    w = [1 if v in graded else 0 for v in poly.variables]
    if t in poly.variables:
        ti = poly.variables.index(t)
        terms = {}
        for e, c in poly.terms.items():
            e2 = list(e)
            e2[ti] += sum(a * b for a, b in zip(e, w))
            terms[tuple(e2)] = c
        return MultiPoly(poly.variables, terms)
    ring = poly.variables + (t,)
    terms = {e + (sum(a * b for a, b in zip(e, w)),): c for e, c in poly.terms.items()}
    return MultiPoly(ring, terms, clean=True)


def scaled_series(s, t="t"):
    """The jet s(tX) with ``t`` passive; the order is unchanged."""
    graded = s.graded if s.graded is not None else s.variables
    return TruncSeries(scale_in_t(s.poly, graded, t), s.order, graded)


def taylor_component(s, p):
    """tau_(p): the order-p differential at 0 evaluated on (X, ..., X), i.e. p! times the degree-p part."""
    return s.homogeneous(p) * factorial(p)


# -- windows -----------------------------------------------------------

@dataclass(frozen=True)
class Window:
    """Bounds on the X-degree, Y-degree and t-degree of symbol monomials."""

    d: int
    xdeg: int
    ydeg: int
    tdeg: int

    def keep(self):
        d, xdeg, ydeg, tdeg = self.d, self.xdeg, self.ydeg, self.tdeg
        tpos = 3 * d

        def keep(e):
            return sum(e[:d]) <= xdeg and sum(e[d:2 * d]) <= ydeg and e[tpos] <= tdeg

        return keep

    def clip(self, poly):
        return poly.filter(self.keep())


def _window(g, order, xdeg, ydeg):
    xdeg = order if xdeg is None else xdeg
    ydeg = order if ydeg is None else ydeg
    return Window(g.dim, xdeg, ydeg, order)


def _exp_windowed(w, window, order):
    """exp(w) truncated to the window; w must have no t-free constant."""
    keep = window.keep()
    ring = w.variables
    result = MultiPoly.constant(1, ring)
    term = result
    for k in range(1, order + 1):
        term = term.mul(w, keep) / k
        if not term:
            break
        result = result + term
    return result


# -- A^w ---------------------------------------------------------------

def _embed(poly, ring):
    return poly.embed(ring)


def symbol_Aw_unscaled(g, order, mode=TRIVIAL):
    """A^w(X, Y) = r(X) r(Y)/r(Z(X, Y)) through total degree ``order`` in (X, Y)."""
    ds = duflo_series(g, order, mode)
    ring = x_ring(g, "X") + x_ring(g, "Y")
    rx = ds.r.poly.embed(ring)
    ry = ds.r.poly.rename(dict(zip(x_ring(g, "X"), x_ring(g, "Y")))).embed(ring)
    if order == 0:
        return TruncSeries(MultiPoly.constant(1, ring), 0)
    z = bch(g, order).components
    rz = ds.r.poly.subs(dict(zip(x_ring(g, "X"), z)), order=order).embed(ring)
    num = TruncSeries(rx, order) * TruncSeries(ry, order)
    return num * series_inverse(TruncSeries(rz, order))


def symbol_Aw_wheels(g, order, mode=TRIVIAL):
    """A^w through the single-wheel exponential.

    log A^w = sum_n rho_n (tr(ad X)^n + tr(ad Y)^n - tr(ad Z)^n), where
    log r = sum_n rho_n tr((ad X)^n).
    """
    ring = x_ring(g, "X") + x_ring(g, "Y")
    if order == 0:
        return TruncSeries(MultiPoly.constant(1, ring), 0)
    rho = log_r_coefficients(order, mode)
    x = symbolic_point(g, "X", ring)
    y = symbolic_point(g, "Y", ring)
    z = [c.embed(ring) for c in bch(g, order).components]
    tx = ad_power_traces(g, order, x, ring)
    ty = ad_power_traces(g, order, y, ring)
    tz = ad_power_traces(g, order, z, ring)
    s = MultiPoly.zero(ring)
    for n in range(1, order + 1):
        if rho[n]:
            s = s + (tx[n] + ty[n] - tz[n]) * rho[n]
    return series_exp(TruncSeries(s, order))


def symbol_Aw(g, order, mode=TRIVIAL, xdeg=None, ydeg=None):
    """A^w_t(X, Y) = A^w(tX, tY) on the symbol ring, t-degree <= ``order``."""
    window = _window(g, order, xdeg, ydeg)
    aw = symbol_Aw_unscaled(g, min(order, window.xdeg + window.ydeg), mode)
    poly = scale_in_t(aw.poly, aw.variables).embed(symbol_ring(g))
    return window.clip(poly)


# -- A^r and A ---------------------------------------------------------

def _xi_dot_defect(g, order, window):
    """xi . (Z_t - X - Y) on the symbol ring, clipped to the window."""
    ring = symbol_ring(g)
    zdeg = min(order + 1, window.xdeg + window.ydeg)
    if zdeg < 2:
        return MultiPoly.zero(ring)
    jet = bch(g, zdeg)
    xy = jet.xy_names
    out = MultiPoly.zero(ring)
    for k, comp in enumerate(jet.components):
        defect = comp.filter(lambda e: sum(e) >= 2)
        scaled = scale_in_t(defect, xy)
        # degree-k part carries t^(k-1): divide out one t
        ti = scaled.variables.index("t")
        terms = {}
        for e, c in scaled.terms.items():
            e2 = list(e)
            e2[ti] -= 1
            terms[tuple(e2)] = c
        part = MultiPoly(scaled.variables, terms, clean=True).embed(ring)
        out = out + part * MultiPoly.var(g.basis[k], ring)
    return window.clip(out)


def symbol_Ar(g, order, xdeg=None, ydeg=None):
    """A^r_t = exp(xi . (Z_t(X, Y) - X - Y)), t-degree <= ``order``."""
    window = _window(g, order, xdeg, ydeg)
    w = _xi_dot_defect(g, order, window)
    return _exp_windowed(w, window, order)


def symbol_A_assembled(g, order, mode=TRIVIAL, xdeg=None, ydeg=None):
    """A assembled as a single exponential exp(log A^w_t + xi . (Z_t - X - Y))."""
    window = _window(g, order, xdeg, ydeg)
    ring = symbol_ring(g)
    aw = symbol_Aw_wheels(g, min(order, window.xdeg + window.ydeg), mode)
    log_aw = scale_in_t(aw.log().poly, aw.variables).embed(ring)
    w = window.clip(log_aw) + _xi_dot_defect(g, order, window)
    return _exp_windowed(w, window, order)


@dataclass(frozen=True)
class StarSymbol:
    Aw: MultiPoly
    Ar: MultiPoly
    A: MultiPoly
    order: int
    window: Window

    def sigma(self, n):
        return sigma_from_symbol(self.A, n)


def star_symbol(g, order, mode=TRIVIAL, xdeg=None, ydeg=None):
    window = _window(g, order, xdeg, ydeg)
    aw = symbol_Aw(g, order, mode, window.xdeg, window.ydeg)
    ar = symbol_Ar(g, order, window.xdeg, window.ydeg)
    a = aw.mul(ar, window.keep())
    return StarSymbol(aw, ar, a, order, window)


def sigma_from_symbol(a, n):
    """n! times the t^n coefficient of a symbol (t is dropped from the ring)."""
    ti = a.variables.index("t")
    ring = a.variables[:ti] + a.variables[ti + 1:]
    terms = {}
    for e, c in a.terms.items():
        if e[ti] == n:
            terms[e[:ti] + e[ti + 1:]] = c * factorial(n)
    return MultiPoly(ring, terms, clean=True)


def sigma_n(g, order, n, mode=TRIVIAL, xdeg=None, ydeg=None):
    """sigma_n = n! [t^n] A, on the ring X_*, Y_*, <basis>.

    Every monomial of sigma_n has X-degree + Y-degree = n + xi-degree <= 2n,
    so the default window (both degrees <= 2n) is exact.
    """
    if n > order:
        raise ValueError("n must not exceed the truncation order")
    xdeg = 2 * n if xdeg is None else xdeg
    ydeg = 2 * n if ydeg is None else ydeg
    st = star_symbol(g, n, mode, xdeg, ydeg)
    return sigma_from_symbol(st.A, n)


def is_scalar_valued(poly, g):
    """True when no S(g) variable occurs (the A^w property)."""
    return not any(v in poly.used_variables() for v in g.basis)
