"""Pairing between point-supported distributions and polynomial test functions.

A polynomial ``p`` in S(g) stands for the distribution ``d_p`` at 0 with
``<d_p, phi> = p(d/dX) phi (0)``.  In coordinates this is
``sum_a p_a * a! * phi_a``.

Polynomials in S(g) use the basis names as variables.  Test functions and
symbols on g use block coordinates ``X_<name>``, ``Y_<name>``.  Symbols may
also contain basis-name variables (the S(g) part) and the parameter ``t``.
"""
from __future__ import annotations

from ..errors import InsufficientTruncationOrder
from .poly import ZERO, MultiPoly, multi_factorial
from .series import TruncSeries


def block_names(basis, prefix):
    return tuple(f"{prefix}_{b}" for b in basis)


def block_prefixes(m):
    """Coordinate block prefixes for m arguments: X (m=1), X, Y (m=2), X1.. (m>=3)."""
    if m == 1:
        return ("X",)
    if m == 2:
        return ("X", "Y")
    return tuple(f"X{i}" for i in range(1, m + 1))


def pair(p, phi, mapping=None):
    """<d_p, phi>; ``mapping`` sends p's variables to phi's variables.

    The default mapping is the identity on names.  Variables of ``phi`` not
    in the image (a passive ``t``, say) survive in the result, which is then
    a polynomial; otherwise it is a rational.
    """
    mapping = mapping or {v: v for v in p.variables}
    targets = tuple(mapping[v] for v in p.variables)
    coll = phi.collect(targets)
    total = None
    for exps, c in p.terms.items():
        coef = coll.get(exps)
        if coef is None:
            continue
        term = coef * (c * multi_factorial(exps))
        total = term if total is None else total + term
    if total is None:
        return ZERO
    if total.variables == () or total.is_constant():
        return total.constant_term()
    return total


def pair_multi(dists, F, mappings):
    """<d_{u_1} (x) ... (x) d_{u_m}, F> for F a function of m blocks."""
    targets = ()
    for p, mp in zip(dists, mappings):
        targets += tuple(mp[v] for v in p.variables)
    coll = F.collect(targets)
    total = None
    items = [list(p.terms.items()) for p in dists]

    def rec(i, exps, c):
        nonlocal total
        if i == len(items):
            coef = coll.get(exps)
            if coef is not None:
                term = coef * c
                total = term if total is None else total + term
            return
        for e, a in items[i]:
            rec(i + 1, exps + e, c * a * multi_factorial(e))

    rec(0, (), 1)
    if total is None:
        return ZERO
    if total.is_constant():
        return total.constant_term()
    return total


def distribution_times_function(p, f, mapping=None):
    """The distribution ``d_p * f``, returned as a polynomial in S(g).

    ``<d_q, phi> = <d_p, f phi>`` for all test polynomials phi; by the Leibniz
    rule at 0 this is ``q = f(d/dx) p``.  ``mapping`` sends f's coordinate
    names to p's variable names (default: ``X_b -> b``).  Variables of f
    outside the mapping (``t``) become coefficients of the result.
    """
    poly = f.poly if isinstance(f, TruncSeries) else f
    if mapping is None:
        mapping = {v: v.split("_", 1)[1] for v in poly.variables if "_" in v}
    missing = tuple(v for v in mapping.values() if v not in p.variables)
    if missing:
        p = p.embed(p.variables + missing)
    if isinstance(f, TruncSeries):
        deg = p.degree(list(mapping.values())) if p else 0
        if f.order < deg:
            raise InsufficientTruncationOrder(
                f"function known to order {f.order}, distribution has degree {deg}"
            )
    fvars = tuple(mapping)
    pvars = tuple(mapping[v] for v in fvars)
    out = MultiPoly.zero(p.variables)
    for exps, coef in poly.collect(fvars).items():
        d = p.diff_multi(exps, pvars)
        if not d:
            continue
        if coef.is_constant():
            out = out + d * coef.constant_term()
        else:
            out = out + d * coef
    return out


def poisson_bracket(g, f, h):
    """{f, h} = 1/2 sum c_ij^k x_k d_i f d_j h on g*; variables are basis names."""
    ring = tuple(g.basis)
    f = f.embed(tuple(dict.fromkeys(ring + f.variables)))
    h = h.embed(tuple(dict.fromkeys(ring + h.variables)))
    df = {i: f.diff(b) for i, b in enumerate(g.basis)}
    dh = {j: h.diff(b) for j, b in enumerate(g.basis)}
    out = MultiPoly.zero(f.variables)
    for (i, j), lst in g.by_pair.items():
        if not df[i] or not dh[j]:
            continue
        prod = df[i] * dh[j]
        lin = MultiPoly.zero(f.variables)
        for k, c in lst:
            lin = lin + MultiPoly.var(g.basis[k], f.variables) * c
        out = out + prod * lin
    return out / 2


def apply_symbol(symbol, args, basis, prefixes=None):
    """Apply a multidifferential operator given by its symbol.

    ``symbol`` is a polynomial in block coordinates (``X_b``, ``Y_b``, ...),
    the S(g) variables ``basis`` and possibly ``t``.  A term
    ``c X^a Y^b xi^g`` acts as ``(u, v) -> c xi^g (d^a u)(d^b v)``.
    """
    m = len(args)
    prefixes = prefixes or block_prefixes(m)
    blocks = [block_names(basis, pre) for pre in prefixes]
    allnames = tuple(n for blk in blocks for n in blk)
    d = len(basis)
    out = MultiPoly.zero(tuple(basis))
    cache = [{} for _ in range(m)]
    for exps, coef in symbol.collect(allnames).items():
        prod = coef
        for s in range(m):
            e = exps[s * d:(s + 1) * d]
            if e not in cache[s]:
                cache[s][e] = args[s].diff_multi(e, basis)
            part = cache[s][e]
            if not part:
                prod = None
                break
            prod = prod * part
        if prod is not None:
            out = out + prod
    return out
