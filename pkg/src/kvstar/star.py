"""The star-product on point-supported distributions and its checkable identities.

``u *_t v`` is computed from the integral formula

    <u *_t v, phi> = <u (x) v, A^w_t(X, Y) phi(Z_t(X, Y))>

by pairing against the monomials ``phi = X^c``: the coefficient of ``x^c`` in
the product is ``(1/c!) sum_{a,b} u_a v_b a! b! [X^a Y^b](A^w_t Z_t^c)``.
Only coefficients ``X^a Y^b`` with ``a`` in the support box of ``u`` and ``b``
in that of ``v`` are ever needed, so every product is truncated to that box.

A second pipeline applies the full symbol ``A = A^w A^r`` as a
bidifferential operator; the two must agree.
"""
from __future__ import annotations

import shlex
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from itertools import combinations_with_replacement
from math import factorial

from .cbh import bch_scaled
from .duflo import (
    TRIVIAL,
    duflo_series,
    normalize_tau,
    scale_in_t,
    scaled_series,
    sigma_n,
    star_symbol,
    symbol_Aw_unscaled,
    taylor_component,
)
from .envelope import eta, eta_inverse
from .errors import InconsistentSystem, InsufficientTruncationOrder, NotInvariant
from .exactalg.duality import apply_symbol, block_names, distribution_times_function, poisson_bracket
from .exactalg.linalg import nullspace, solve_affine
from .exactalg.poly import ZERO, MultiPoly, multi_factorial, rational
from .exactalg.series import series_inverse
from .graphs import enumerate_graphs, symbol

DEFAULT_ORDER = 6


@dataclass(frozen=True)
class StarContext:
    algebra: object
    order: int = DEFAULT_ORDER
    tau: object = TRIVIAL

    def __post_init__(self):
        if self.order < 1:
            raise ValueError("order must be at least 1")
        object.__setattr__(self, "tau", normalize_tau(self.tau))

    @property
    def basis(self):
        return tuple(self.algebra.basis)

    @cached_property
    def duflo(self):
        return duflo_series(self.algebra, self.order, self.tau)

    @cached_property
    def tau_t(self):
        return scaled_series(self.duflo.tau)

    @cached_property
    def tau_t_inverse(self):
        return series_inverse(self.tau_t)

    def poly(self, text_or_poly):
        """Coerce to a polynomial on the basis names (text uses the canonical grammar)."""
        from .exactalg.poly import parse_poly

        if isinstance(text_or_poly, MultiPoly):
            p = text_or_poly
        elif isinstance(text_or_poly, str):
            names = self.basis + ("t",)
            p = parse_poly(text_or_poly, names)
        else:
            p = MultiPoly.constant(text_or_poly, self.basis)
        extra = tuple(v for v in p.variables if v not in self.basis)
        return p.embed(self.basis + extra)


# -- helpers -----------------------------------------------------------

def _split(p, basis):
    """{exponent over basis: coefficient polynomial in the remaining variables}."""
    return p.collect(basis)


def _deg(p, basis):
    return p.degree(basis) if p else 0


def t_coefficient(p, k, basis):
    """Coefficient of t^k, as a polynomial on ``basis``."""
    if "t" not in p.variables:
        return p.embed(tuple(dict.fromkeys(basis + p.variables))) if k == 0 else MultiPoly.zero(basis)
    ti = p.variables.index("t")
    ring = p.variables[:ti] + p.variables[ti + 1:]
    terms = {e[:ti] + e[ti + 1:]: c for e, c in p.terms.items() if e[ti] == k}
    return MultiPoly(ring, terms, clean=True).embed(tuple(dict.fromkeys(basis + ring)))


def t_degree(p):
    return p.degree_in("t")


def _finish(p, basis, t):
    if not isinstance(t, str):
        p = p.subs({"t": rational(t)})
    elif t != "t":
        p = p.rename({"t": t})
    ring = tuple(dict.fromkeys(basis + p.variables))
    return p.embed(ring)


@lru_cache(maxsize=256)
def _aw_scaled(g, degree, tau):
    aw = symbol_Aw_unscaled(g, degree, tau)
    return scale_in_t(aw.poly, aw.variables)


@lru_cache(maxsize=256)
def _z_scaled(g, degree):
    return bch_scaled(g, degree).components


def star(ctx, u, v, t="t"):
    """u *_t v through the integral formula.

    ``t`` is the name of the formal parameter or a rational value.  ``u`` and
    ``v`` may themselves carry polynomial dependence on ``t``.
    """
    g = ctx.algebra
    basis = ctx.basis
    u, v = ctx.poly(u), ctx.poly(v)
    du, dv = _deg(u, basis), _deg(v, basis)
    total = du + dv
    if total > ctx.order:
        raise InsufficientTruncationOrder(
            f"deg u + deg v = {total} exceeds the truncation order {ctx.order}"
        )
    uu, vv = _split(u, basis), _split(v, basis)
    if not uu or not vv:
        return MultiPoly.zero(basis)
    d = g.dim
    ring = block_names(basis, "X") + block_names(basis, "Y") + ("t",)
    bx = [max(a[i] for a in uu) for i in range(d)]
    by = [max(b[i] for b in vv) for i in range(d)]

    def keep(e):
        for i in range(d):
            if e[i] > bx[i] or e[d + i] > by[i]:
                return False
        return sum(e[:d]) <= du and sum(e[d:2 * d]) <= dv

    if total == 0:
        z = [MultiPoly.zero(ring)] * d
        aw = MultiPoly.constant(1, ring)
    else:
        z = [c.embed(ring).filter(keep) for c in _z_scaled(g, total)]
        aw = _aw_scaled(g, total, ctx.tau).embed(ring).filter(keep)
    xy = ring[:2 * d]

    def pairing(F):
        coll = F.collect(xy)
        acc = None
        for a, ca in uu.items():
            for b, cb in vv.items():
                f = coll.get(a + b)
                if f is None:
                    continue
                term = f * (multi_factorial(a) * multi_factorial(b)) * ca * cb
                acc = term if acc is None else acc + term
        return acc

    out = None
    powers = {(0,) * d: MultiPoly.constant(1, ring)}
    for deg in range(total + 1):
        for combo in combinations_with_replacement(range(d), deg):
            c = [0] * d
            for i in combo:
                c[i] += 1
            c = tuple(c)
            if deg:
                k = combo[0]
                prev = list(c)
                prev[k] -= 1
                base = powers.get(tuple(prev))
                if base is None:
                    continue
                pc = base.mul(z[k], keep)
                if not pc:
                    continue
                powers[c] = pc
            coef = pairing(aw.mul(powers[c], keep))
            if coef is None or not coef:
                continue
            mono = MultiPoly(basis, {c: 1}, clean=True)
            term = coef * mono / multi_factorial(c)
            out = term if out is None else out + term
    if out is None:
        return MultiPoly.zero(basis)
    return _finish(out, basis, t)


@lru_cache(maxsize=256)
def _symbol_for(g, order, tau, xdeg, ydeg):
    return star_symbol(g, order, tau, xdeg, ydeg).A


def star_via_symbol(ctx, u, v, t="t"):
    """u *_t v by applying the symbol A = A^w A^r as a bidifferential operator."""
    basis = ctx.basis
    u, v = ctx.poly(u), ctx.poly(v)
    du, dv = _deg(u, basis), _deg(v, basis)
    if du + dv > ctx.order:
        raise InsufficientTruncationOrder(
            f"deg u + deg v = {du + dv} exceeds the truncation order {ctx.order}"
        )
    a = _symbol_for(ctx.algebra, max(du + dv, 1), ctx.tau, du, dv)
    out = apply_symbol(a, [u, v], basis)
    return _finish(out, basis, t)


# -- identities --------------------------------------------------------

def check_unit(ctx, v):
    one = MultiPoly.constant(1, ctx.basis)
    v = ctx.poly(v)
    return star(ctx, one, v) - v, star(ctx, v, one) - v


def check_bilinearity(ctx, u1, u2, v, a, b):
    """Residuals of linearity in the left and in the right argument."""
    u1, u2, v = ctx.poly(u1), ctx.poly(u2), ctx.poly(v)
    a, b = rational(a), rational(b)
    left = star(ctx, u1 * a + u2 * b, v) - star(ctx, u1, v) * a - star(ctx, u2, v) * b
    right = star(ctx, v, u1 * a + u2 * b) - star(ctx, v, u1) * a - star(ctx, v, u2) * b
    return left, right


def check_commutator(ctx, u, v):
    """(u * v - v * u) through t-degree 1, minus 2 t {u, v}; zero expected."""
    basis = ctx.basis
    u, v = ctx.poly(u), ctx.poly(v)
    comm = star(ctx, u, v) - star(ctx, v, u)
    gamma = poisson_bracket(ctx.algebra, u, v)
    c0 = t_coefficient(comm, 0, basis)
    c1 = t_coefficient(comm, 1, basis)
    tvar = MultiPoly.var("t", basis + ("t",))
    return c0 + (c1 - gamma * 2) * tvar


def check_associativity(ctx, u, v, w):
    """(u * v) * w - u * (v * w) as a polynomial in the basis and t.

    Needs deg u + deg v + deg w <= order.
    """
    u, v, w = ctx.poly(u), ctx.poly(v), ctx.poly(w)
    return star(ctx, star(ctx, u, v), w) - star(ctx, u, star(ctx, v, w))


def times_tau(ctx, u):
    return distribution_times_function(ctx.poly(u), ctx.tau_t)


def check_psiconnection(ctx, u, v):
    """eta_t^-1(eta_t(u) eta_t(v)) - (u tau_t * v tau_t) tau_t^-1."""
    g = ctx.algebra
    u, v = ctx.poly(u), ctx.poly(v)
    lhs = eta_inverse(eta(g, u) * eta(g, v), g)
    rhs = distribution_times_function(star(ctx, times_tau(ctx, u), times_tau(ctx, v)), ctx.tau_t_inverse)
    return lhs - rhs


def invariant_check(g, u):
    """True iff {x_i, u} = 0 for every coordinate x_i."""
    ring = tuple(dict.fromkeys(tuple(g.basis) + u.variables))
    u = u.embed(ring)
    for b in g.basis:
        if poisson_bracket(g, MultiPoly.var(b, ring), u):
            return False
    return True


def invariants(g, deg):
    """A basis of the homogeneous invariants of degree ``deg``."""
    basis = tuple(g.basis)
    monos = []
    for combo in combinations_with_replacement(range(g.dim), deg):
        e = [0] * g.dim
        for i in combo:
            e[i] += 1
        monos.append(tuple(e))
    images = []
    for e in monos:
        p = MultiPoly(basis, {e: 1}, clean=True)
        images.append([poisson_bracket(g, MultiPoly.var(b, basis), p) for b in basis])
    keys = sorted({(i, k) for img in images for i, poly in enumerate(img) for k in poly.terms})
    rows = [[img[i].coefficient(k) for img in images] for i, k in keys]
    out = []
    for vec in nullspace(rows, len(monos)):
        out.append(MultiPoly(basis, dict(zip(monos, vec))))
    return out


def kv_check(ctx, u, v):
    """eta_t(u v) - eta_t(u) eta_t(v) in U(g_t); only defined on invariants."""
    g = ctx.algebra
    u, v = ctx.poly(u), ctx.poly(v)
    for name, p in (("u", u), ("v", v)):
        if not invariant_check(g, p):
            raise NotInvariant(f"{name} = {p} is not invariant")
    return eta(g, u * v) - eta(g, u) * eta(g, v)


def star_invariance_closure(ctx, u, v):
    """True iff every t-coefficient of u * v is invariant."""
    p = star(ctx, u, v)
    basis = ctx.basis
    return all(invariant_check(ctx.algebra, t_coefficient(p, k, basis)) for k in range(t_degree(p) + 1))


def derivative_coefficient(ctx, n, u, v):
    """C_n(u, v) = n! [t^n] (u *_t v)."""
    if n > ctx.order:
        raise ValueError("n must not exceed the truncation order")
    return t_coefficient(star(ctx, u, v), n, ctx.basis) * factorial(n)


def derivative_via_sigma(ctx, n, u, v):
    """(u, v) acted on by sigma_n, the n-th symbol coefficient."""
    u, v = ctx.poly(u), ctx.poly(v)
    sig = sigma_n(ctx.algebra, max(n, 1), n, ctx.tau)
    return apply_symbol(sig, [u, v], ctx.basis)


def mn_operator(ctx, n, u, v):
    """n! [t^n] (u tau_t * v tau_t - (u v) tau_t)."""
    u, v = ctx.poly(u), ctx.poly(v)
    basis = ctx.basis
    lhs = star(ctx, times_tau(ctx, u), times_tau(ctx, v))
    rhs = distribution_times_function(u * v, ctx.tau_t)
    return t_coefficient(lhs - rhs, n, basis) * factorial(n)


def mn_operator_connection(ctx, n, u, v):
    """The same quantity through sum n!/(p! q! r!) C_r(u tau_(p), v tau_(q)) - (u v) tau_(n)."""
    u, v = ctx.poly(u), ctx.poly(v)
    tau = ctx.duflo.tau
    out = MultiPoly.zero(ctx.basis)
    for p in range(n + 1):
        up = distribution_times_function(u, taylor_component(tau, p))
        if not up:
            continue
        for q in range(n - p + 1):
            vq = distribution_times_function(v, taylor_component(tau, q))
            if not vq:
                continue
            r = n - p - q
            coef = factorial(n) // (factorial(p) * factorial(q) * factorial(r))
            out = out + derivative_coefficient(ctx, r, up, vq) * coef
    return out - distribution_times_function(u * v, taylor_component(tau, n))


# -- graph weights -----------------------------------------------------

@dataclass(frozen=True)
class WeightFit:
    n: int
    graphs: tuple
    particular: tuple
    kernel: tuple
    algebras: tuple = field(default=())

    @property
    def unique(self):
        return not self.kernel

    def weighted_symbol(self, g, weights=None):
        weights = self.particular if weights is None else weights
        ring = block_names(g.basis, "X") + block_names(g.basis, "Y") + tuple(g.basis)
        out = MultiPoly.zero(ring)
        for w, gr in zip(weights, self.graphs):
            if w:
                out = out + symbol(gr, g) * w
        return out


def fit_graph_weights(n, algebras, max_n=2):
    """Solve sum_Gamma w_Gamma sigma_Gamma = sigma_n over all sample algebras.

    Returns the affine solution set (a particular solution and a kernel basis).
    """
    if n > max_n:
        raise ValueError(f"weight fitting is capped at n <= {max_n}")
    graphs = enumerate_graphs(n, 2)
    rows, rhs = [], []
    for g in algebras:
        target = sigma_n(g, max(n, 1), n) if n else _sigma_zero(g)
        syms = [symbol(gr, g) for gr in graphs]
        ring = target.variables
        syms = [s.embed(ring) for s in syms]
        keys = set(target.terms)
        for s in syms:
            keys.update(s.terms)
        for k in sorted(keys):
            rows.append([s.coefficient(k) for s in syms])
            rhs.append(target.coefficient(k))
    if not rows:
        rows = [[ZERO] * len(graphs)]
        rhs = [ZERO]
    sol = solve_affine(rows, rhs)
    if sol is None:
        raise InconsistentSystem(f"no graph weights reproduce sigma_{n}")
    particular, kernel = sol
    return WeightFit(n, tuple(graphs), tuple(particular), tuple(tuple(k) for k in kernel), tuple(algebras))


def _sigma_zero(g):
    ring = block_names(g.basis, "X") + block_names(g.basis, "Y") + tuple(g.basis)
    return MultiPoly.constant(1, ring)


# -- reports -----------------------------------------------------------

@dataclass(frozen=True)
class Report:
    check: str
    algebra: str
    inputs: tuple
    residual: str

    @property
    def passed(self):
        return self.residual in ("", "0")

    def to_record(self):
        fields = [("check", self.check), ("algebra", self.algebra)]
        fields += [(f"input{i}", s) for i, s in enumerate(self.inputs, 1)]
        fields += [("residual", "" if self.passed else self.residual), ("status", "pass" if self.passed else "fail")]
        return format_record(fields)

    def to_text(self):
        args = ", ".join(self.inputs)
        state = "ok" if self.passed else f"residual {self.residual}"
        return f"{self.check} [{self.algebra}] ({args}): {state}"


def format_record(fields):
    return " ".join(f"{k}={shlex.quote(str(v))}" for k, v in fields)


def parse_record(line):
    out = {}
    for tok in shlex.split(line):
        k, _, v = tok.partition("=")
        out[k] = v
    return out
