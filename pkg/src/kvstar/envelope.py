"""U(g) in PBW normal form, symmetrization beta and the map eta.

A PBW monomial is a weakly increasing tuple of basis indices.  Coefficients
are rationals, or polynomials in ``t`` when the algebra is a rescaled g_t.
Words are straightened by rewriting the first descent with
``e_a e_b = e_b e_a + sum_k c_ab^k e_k``; normal forms of words are memoized
per algebra.
"""
from __future__ import annotations

from collections import Counter

from .errors import DimensionMismatch, SingularTriangularSystem
from .exactalg.duality import distribution_times_function
from .exactalg.poly import ZERO, MultiPoly, is_scalar, rational
from .exactalg.series import TruncSeries, series_inverse
from .lie import scale_bracket

_NF_CACHE = {}


def _is_zero(c):
    return not c


def _add_into(acc, key, c):
    s = acc.get(key)
    s = c if s is None else s + c
    if _is_zero(s):
        acc.pop(key, None)
    else:
        acc[key] = s


def _simplify(c):
    if isinstance(c, MultiPoly) and c.is_constant():
        return c.constant_term()
    return c


def normal_form(g, word):
    """PBW normal form of the product e_{w1} ... e_{wk} as {monomial: coefficient}."""
    cache = _NF_CACHE.setdefault(g, {})
    word = tuple(word)
    hit = cache.get(word)
    if hit is not None:
        return hit
    for i in range(len(word) - 1):
        if word[i] > word[i + 1]:
            break
    else:
        out = {word: rational(1)}
        cache[word] = out
        return out
    a, b = word[i], word[i + 1]
    out = dict(normal_form(g, word[:i] + (b, a) + word[i + 2:]))
    for k, c in g.by_pair.get((a, b), ()):
        for mono, coef in normal_form(g, word[:i] + (k,) + word[i + 2:]).items():
            _add_into(out, mono, coef * c)
    cache[word] = out
    return out


def clear_cache():
    _NF_CACHE.clear()


class EnvelopingElement:
    __slots__ = ("algebra", "terms")

    def __init__(self, algebra, terms=None):
        self.algebra = algebra
        self.terms = {}
        for mono, c in (terms or {}).items():
            mono = tuple(mono)
            if list(mono) != sorted(mono):
                raise ValueError(f"{mono} is not a PBW monomial")
            c = _simplify(c if isinstance(c, MultiPoly) else rational(c))
            if not _is_zero(c):
                _add_into(self.terms, mono, c)

    @classmethod
    def _raw(cls, algebra, terms):
        obj = cls.__new__(cls)
        obj.algebra = algebra
        obj.terms = {m: _simplify(c) for m, c in terms.items() if not _is_zero(c)}
        return obj

    @classmethod
    def one(cls, algebra, c=1):
        return cls(algebra, {(): c})

    @classmethod
    def generator(cls, algebra, i):
        return cls(algebra, {(i,): 1})

    def _check(self, other):
        if other.algebra != self.algebra:
            raise DimensionMismatch("elements of different enveloping algebras")

    def __add__(self, other):
        if not isinstance(other, EnvelopingElement):
            other = EnvelopingElement.one(self.algebra, other)
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            _add_into(out, m, c)
        return EnvelopingElement._raw(self.algebra, out)

    __radd__ = __add__

    def __neg__(self):
        return EnvelopingElement._raw(self.algebra, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        return EnvelopingElement._raw(self.algebra, {m: v * c for m, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, EnvelopingElement):
            return ug_multiply(self, other)
        if is_scalar(other) or isinstance(other, MultiPoly):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if is_scalar(other) or isinstance(other, MultiPoly):
            return self.scale(other)
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, EnvelopingElement):
            return self.algebra == other.algebra and (self - other).is_zero()
        if is_scalar(other):
            return (self - other).is_zero()
        return NotImplemented

    def __hash__(self):
        return hash(tuple(sorted(self.terms)))

    def is_zero(self):
        return not self.terms

    def degree(self):
        return max((len(m) for m in self.terms), default=-1)

    def commutator(self, other):
        return self * other - other * self

    def to_poly(self, extra=("t",)):
        """The PBW coordinates as a commutative polynomial (monomial -> x^mono)."""
        basis = tuple(self.algebra.basis)
        ring = basis + tuple(extra)
        out = MultiPoly.zero(ring)
        for mono, c in self.terms.items():
            cnt = Counter(mono)
            exps = tuple(cnt.get(i, 0) for i in range(len(basis))) + (0,) * len(extra)
            m = MultiPoly(ring, {exps: 1}, clean=True)
            out = out + (m * c)
        return out

    def to_text(self):
        if not self.terms:
            return "0"
        basis = self.algebra.basis
        pieces = []
        dim = self.algebra.dim

        def key(m):
            cnt = Counter(m)
            return (len(m), tuple(cnt.get(i, 0) for i in range(dim)))

        for mono in sorted(self.terms, key=key, reverse=True):
            c = self.terms[mono]
            cnt = Counter(mono)
            word = " ".join(
                basis[i] if cnt[i] == 1 else f"{basis[i]}^{cnt[i]}" for i in sorted(cnt)
            )
            if isinstance(c, MultiPoly):
                cs = f"({c.to_text()})"
            else:
                cs = str(c)
            if not word:
                pieces.append(cs)
            elif cs == "1":
                pieces.append(word)
            elif cs == "-1":
                pieces.append("-" + word)
            else:
                pieces.append(f"{cs} * {word}")
        out = pieces[0]
        for piece in pieces[1:]:
            out += " - " + piece[1:] if piece.startswith("-") else " + " + piece
        return out

    __str__ = to_text

    def __repr__(self):
        return f"EnvelopingElement({self.to_text()!r})"


def ug_multiply(a, b):
    """Product in U(g), straightened to PBW normal form."""
    a._check(b)
    g = a.algebra
    out = {}
    for m1, c1 in a.terms.items():
        for m2, c2 in b.terms.items():
            c = c1 * c2
            for mono, coef in normal_form(g, m1 + m2).items():
                _add_into(out, mono, coef * c)
    return EnvelopingElement._raw(g, out)


def _distinct_permutations(items):
    cnt = Counter(items)
    keys = sorted(cnt)
    n = len(items)
    out = []

    def rec(prefix):
        if len(prefix) == n:
            out.append(tuple(prefix))
            return
        for k in keys:
            if cnt[k]:
                cnt[k] -= 1
                prefix.append(k)
                rec(prefix)
                prefix.pop()
                cnt[k] += 1

    rec([])
    return out


_BETA_CACHE = {}


def _beta_monomial(g, mono):
    key = (g, mono)
    hit = _BETA_CACHE.get(key)
    if hit is not None:
        return hit
    perms = _distinct_permutations(mono)
    out = {}
    for w in perms:
        for m, c in normal_form(g, w).items():
            _add_into(out, m, c)
    n = len(perms)
    out = {m: c / n for m, c in out.items()}
    _BETA_CACHE[key] = out
    return out


def beta_symmetrize(g, p):
    """beta(p): monomials are averaged over all orderings of their factors.

    ``p`` is a polynomial in the basis names; other variables (``t``) are
    carried along as coefficients.
    """
    basis = tuple(g.basis)
    out = {}
    for exps, coef in p.collect(basis).items():
        mono = tuple(i for i, e in enumerate(exps) for _ in range(e))
        c = _simplify(coef)
        for m, v in _beta_monomial(g, mono).items():
            _add_into(out, m, v * c)
    return EnvelopingElement._raw(g, out)


def pbw_top_part(a, deg):
    """The degree-``deg`` part of ``a`` read as a commutative polynomial."""
    basis = tuple(a.algebra.basis)
    ring = basis + ("t",)
    out = MultiPoly.zero(ring)
    for mono, c in a.terms.items():
        if len(mono) != deg:
            continue
        cnt = Counter(mono)
        exps = tuple(cnt.get(i, 0) for i in range(len(basis))) + (0,)
        out = out + MultiPoly(ring, {exps: 1}, clean=True) * c
    return out


def beta_inverse(a):
    """The polynomial p with beta(p) = a (triangular in the PBW filtration)."""
    g = a.algebra
    ring = tuple(g.basis) + ("t",)
    p = MultiPoly.zero(ring)
    rem = a
    while not rem.is_zero():
        deg = rem.degree()
        top = pbw_top_part(rem, deg)
        p = p + top
        rem = rem - beta_symmetrize(g, top)
        if not rem.is_zero() and rem.degree() >= deg:
            raise SingularTriangularSystem(f"no progress at filtration degree {deg}")
    return p


# -- eta ---------------------------------------------------------------

def _scaled_algebra(g, t):
    if isinstance(t, str):
        return scale_bracket(g, t)
    return scale_bracket(g, rational(t))


def _q_t(g, order, t):
    from .duflo import q_series, scaled_series

    q = q_series(g, order)
    if isinstance(t, str):
        return scaled_series(q, t)
    tv = rational(t)
    poly = q.poly
    terms = {e: c * tv ** sum(e) for e, c in poly.terms.items()}
    return TruncSeries(MultiPoly(poly.variables, terms), order)


def _degree(u, g):
    return u.degree(g.basis) if u else 0


def eta(g, u, t="t"):
    """eta_t(u) = beta_{g_t}(u . q_t), an element of U(g_t)."""
    order = max(_degree(u, g), 0)
    qt = _q_t(g, order, t)
    p = distribution_times_function(u, qt)
    return beta_symmetrize(_scaled_algebra(g, t), p)


def eta_inverse(a, g, t="t"):
    """Inverse of :func:`eta`: undo beta, then multiply by 1/q_t."""
    p = beta_inverse(a)
    order = max(_degree(p, g), 0)
    inv = series_inverse(_q_t(g, order, t))
    out = distribution_times_function(p, inv)
    return _drop_unused_t(out, g)


def _drop_unused_t(p, g):
    if "t" in p.variables and "t" not in p.used_variables():
        return p.embed(tuple(v for v in p.variables if v != "t"))
    return p


def filtration_rank(g, deg):
    """Rank of beta restricted to polynomials of degree <= deg (PBW check)."""
    from itertools import combinations_with_replacement

    from .exactalg.linalg import rank

    monos = []
    for k in range(deg + 1):
        monos.extend(combinations_with_replacement(range(g.dim), k))
    index = {m: i for i, m in enumerate(monos)}
    rows = []
    for m in monos:
        exps = [0] * g.dim
        for i in m:
            exps[i] += 1
        p = MultiPoly(tuple(g.basis), {tuple(exps): 1}, clean=True)
        b = beta_symmetrize(g, p)
        row = [ZERO] * len(monos)
        for mono, c in b.terms.items():
            row[index[mono]] = rational(c)
        rows.append(row)
    return rank(rows), len(monos)
