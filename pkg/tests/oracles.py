"""Slow, independent reference computations used as test oracles.

Nothing here calls into the algorithms under test; polynomials are plain
dicts {exponent tuple: Fraction} and algebras are read only through their
structure constants.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from math import comb, factorial


def frac(x):
    return Fraction(int(x.numerator), int(x.denominator))


def to_dict(poly, names=None):
    """A package polynomial as {exps: Fraction} over ``names`` (default: its own variables)."""
    names = tuple(poly.variables if names is None else names)
    pos = [poly.variables.index(n) for n in names]
    out = {}
    for e, c in poly.terms.items():
        if any(e[i] for i in range(len(e)) if i not in pos):
            raise ValueError("polynomial uses variables outside the requested names")
        key = tuple(e[i] for i in pos)
        out[key] = out.get(key, 0) + frac(c)
    return {k: v for k, v in out.items() if v}


# -- dict polynomials --------------------------------------------------

def p_add(a, b, s=1):
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, 0) + s * v
        if not out[k]:
            del out[k]
    return out


def p_mul(a, b, order=None):
    out = {}
    for ka, va in a.items():
        for kb, vb in b.items():
            k = tuple(x + y for x, y in zip(ka, kb))
            if order is not None and sum(k) > order:
                continue
            out[k] = out.get(k, 0) + va * vb
    return {k: v for k, v in out.items() if v}


def p_scale(a, c):
    return {k: v * c for k, v in a.items() if v * c}


def p_var(i, n):
    e = [0] * n
    e[i] = 1
    return {tuple(e): Fraction(1)}


def p_const(c, n):
    return {(0,) * n: Fraction(c)} if c else {}


# -- Lie algebra via structure constants -------------------------------

def structure(g):
    """Dense c[i][j][k] as Fractions."""
    d = g.dim
    c = [[[Fraction(0)] * d for _ in range(d)] for _ in range(d)]
    for (i, j, k), v in g.table:
        c[i][j][k] = frac(v)
        c[j][i][k] = -frac(v)
    return c


def jacobi_violations(g):
    """All (i, j, l) with [[e_i,e_j],e_l] + cyclic != 0, by brute force."""
    c = structure(g)
    d = g.dim

    def br(x, y):
        return [sum(x[i] * y[j] * c[i][j][k] for i in range(d) for j in range(d)) for k in range(d)]

    e = [[Fraction(int(i == j)) for j in range(d)] for i in range(d)]
    bad = []
    for i, j, l in itertools.product(range(d), repeat=3):
        s = [a + b + cc for a, b, cc in zip(br(br(e[i], e[j]), e[l]), br(br(e[j], e[l]), e[i]), br(br(e[l], e[i]), e[j]))]
        if any(s):
            bad.append((i, j, l))
    return bad


def vec_bracket(c, x, y, n):
    """Bracket of g-valued vectors of dict polynomials in n variables."""
    d = len(c)
    out = [{} for _ in range(d)]
    for i in range(d):
        if not x[i]:
            continue
        for j in range(d):
            if not y[j]:
                continue
            prod = p_mul(x[i], y[j])
            for k in range(d):
                if c[i][j][k]:
                    out[k] = p_add(out[k], p_scale(prod, c[i][j][k]))
    return out


# -- Campbell-Hausdorff via the free algebra ---------------------------

def _word_mul(a, b, order):
    out = {}
    for wa, ca in a.items():
        for wb, cb in b.items():
            w = wa + wb
            if len(w) > order:
                continue
            out[w] = out.get(w, 0) + ca * cb
    return {k: v for k, v in out.items() if v}


def free_bch(order):
    """log(exp X exp Y) in the free associative algebra on letters 'X', 'Y'."""
    def exp_letter(ch):
        return {ch * k: Fraction(1, factorial(k)) for k in range(order + 1)}

    prod = _word_mul(exp_letter("X"), exp_letter("Y"), order)
    u = {w: c for w, c in prod.items() if w}
    out = {}
    power = {"": Fraction(1)}
    for n in range(1, order + 1):
        power = _word_mul(power, u, order)
        coef = Fraction((-1) ** (n + 1), n)
        for w, c in power.items():
            out[w] = out.get(w, 0) + coef * c
    return {k: v for k, v in out.items() if v}


def dynkin_bch(g, order):
    """Coordinates of Z(X, Y) through ``order`` via the Dynkin-Specht-Wever projection.

    A homogeneous Lie element P of degree n equals (1/n) sum_w P_w [w] with
    [w] the right-normed bracket of the letters of w.  Returned as dict
    polynomials in the 2*dim variables X_b, Y_b.
    """
    c = structure(g)
    d = g.dim
    n = 2 * d
    X = [p_var(i, n) for i in range(d)]
    Y = [p_var(d + i, n) for i in range(d)]
    letters = {"X": X, "Y": Y}
    Z = [{} for _ in range(d)]
    for w, coef in free_bch(order).items():
        vec = letters[w[-1]]
        for ch in reversed(w[:-1]):
            vec = vec_bracket(c, letters[ch], vec, n)
        k = Fraction(1, len(w))
        for b in range(d):
            Z[b] = p_add(Z[b], p_scale(vec[b], coef * k))
    return Z


# -- q by the matrix series and a cofactor determinant ------------------

def _mat_mul(a, b, n, order):
    d = len(a)
    return [[_sum_poly((p_mul(a[i][k], b[k][j], order) for k in range(d)), n) for j in range(d)] for i in range(d)]


def _sum_poly(polys, n):
    out = {}
    for p in polys:
        out = p_add(out, p)
    return out


def det_cofactor(m, n, order):
    """Laplace expansion along the first row, truncated at total degree ``order``."""
    d = len(m)
    if d == 1:
        return m[0][0]
    out = {}
    for j in range(d):
        if not m[0][j]:
            continue
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        term = p_mul(m[0][j], det_cofactor(minor, n, order), order)
        out = p_add(out, term, 1 if j % 2 == 0 else -1)
    return out


def q_matrix_oracle(g, order):
    """det(sinh(ad X/2)/(ad X/2))^(1/2) through total degree ``order``."""
    c = structure(g)
    d = g.dim
    # (ad X)[k][j] = sum_i X_i c_ij^k
    ad = [[_sum_poly((p_scale(p_var(i, d), c[i][j][k]) for i in range(d) if c[i][j][k]), d) for j in range(d)] for k in range(d)]
    ident = [[p_const(int(i == j), d) for j in range(d)] for i in range(d)]
    M = [row[:] for row in ident]
    power = ident
    for k in range(1, order // 2 + 1):
        power = _mat_mul(_mat_mul(power, ad, d, order), ad, d, order)
        coef = Fraction(1, 4 ** k * factorial(2 * k + 1))
        M = [[p_add(M[i][j], p_scale(power[i][j], coef)) for j in range(d)] for i in range(d)]
    det = det_cofactor(M, d, order)
    u = p_add(det, p_const(1, d), -1)
    out = p_const(1, d)
    upow = p_const(1, d)
    for k in range(1, order + 1):
        upow = p_mul(upow, u, order)
        if not upow:
            break
        binom = Fraction(1)
        for r in range(k):
            binom *= Fraction(1, 2) - r
        binom /= factorial(k)
        out = p_add(out, p_scale(upow, binom))
    return out


# -- Heisenberg star-product in closed form ----------------------------

def heisenberg_star(u, v):
    """u * v on the Heisenberg algebra [x, y] = z with formal t.

    Z(X, Y) = X + Y + [X, Y]/2 and q = 1, so the symbol is
    exp(t z (X_x Y_y - X_y Y_x)/2).  Inputs are dicts over (x, y, z); the
    result is a dict over (x, y, z, t).
    """
    def d(p, i):
        out = {}
        for e, c in p.items():
            if e[i]:
                k = list(e)
                k[i] -= 1
                out[tuple(k)] = out.get(tuple(k), 0) + c * e[i]
        return out

    def dmulti(p, ex, ey):
        for _ in range(ex):
            p = d(p, 0)
        for _ in range(ey):
            p = d(p, 1)
        return p

    out = {}
    total = max((sum(e) for e in u), default=0) + max((sum(e) for e in v), default=0)
    for k in range(total + 1):
        pref = Fraction(1, 2 ** k * factorial(k))
        for j in range(k + 1):
            # (X_x Y_y)^(k-j) (-X_y Y_x)^j
            sign = (-1) ** j * comb(k, j)
            du = dmulti(u, k - j, j)
            dv = dmulti(v, j, k - j)
            prod = p_mul(du, dv)
            for e, c in prod.items():
                key = (e[0], e[1], e[2] + k, k)
                out[key] = out.get(key, 0) + c * sign * pref
    return {k: v for k, v in out.items() if v}


# -- graphs --------------------------------------------------------------

def naive_graphs(n, m, relevant_only=True):
    """Every choice of an ordered pair of distinct targets per first-kind vertex."""
    top = n + m
    choices = [[(a, b) for a in range(top) for b in range(top) if a != b and k not in (a, b)] for k in range(n)]
    out = []
    for edges in itertools.product(*choices):
        indeg = [0] * top
        for a, b in edges:
            indeg[a] += 1
            indeg[b] += 1
        if relevant_only and any(indeg[k] > 1 for k in range(n)):
            continue
        out.append(tuple(edges))
    return sorted(out)


# -- cones via extreme rays ------------------------------------------------

def _kernel(cols, d):
    """Kernel of the d x len(cols) matrix with the given columns (Fractions)."""
    k = len(cols)
    rows = [[Fraction(cols[j][i]) for j in range(k)] for i in range(d)]
    pivots = []
    r = 0
    for col in range(k):
        p = next((i for i in range(r, d) if rows[i][col]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        piv = rows[r][col]
        rows[r] = [x / piv for x in rows[r]]
        for i in range(d):
            if i != r and rows[i][col]:
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
    free = [j for j in range(k) if j not in pivots]
    basis = []
    for f in free:
        vec = [Fraction(0)] * k
        vec[f] = Fraction(1)
        for i, p in enumerate(pivots):
            vec[p] = -rows[i][f]
        basis.append(vec)
    return basis


def cones_compatible_oracle(G, H, d):
    """C1 ∩ -C2 = {0}?  Brute force over minimal supports of G lam + H mu = 0.

    The solution set {(lam, mu) >= 0} is pointed, so it is spanned by its
    extreme rays, which are the sign-definite kernel vectors of minimal
    support.  The cones meet nontrivially iff some such ray has G lam != 0.
    """
    cols = [tuple(v) for v in G] + [tuple(v) for v in H]
    k = len(cols)
    ng = len(G)
    for size in range(1, k + 1):
        for support in itertools.combinations(range(k), size):
            ker = _kernel([cols[j] for j in support], d)
            if len(ker) != 1:
                continue
            vec = ker[0]
            if any(x == 0 for x in vec):
                continue
            if all(x < 0 for x in vec):
                vec = [-x for x in vec]
            if not all(x > 0 for x in vec):
                continue
            point = [sum(vec[s] * cols[j][i] for s, j in enumerate(support) if j < ng) for i in range(d)]
            if any(point):
                return False
    return True
