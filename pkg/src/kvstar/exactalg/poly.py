"""Sparse multivariate polynomials with exact rational coefficients.

A :class:`MultiPoly` is a map from exponent tuples to rationals, attached to an
ordered tuple of variable names.  Polynomials over different variable tuples can
be combined; the result lives on the union of the variables (left operand's
order first).

Coefficients are ``gmpy2.mpq`` values.  ``int``, ``fractions.Fraction`` and
``"p/q"`` strings are accepted wherever a scalar is expected.
"""
from __future__ import annotations

import re
from math import factorial
from operator import add

from gmpy2 import mpq

from ..errors import ParseError

Q = mpq
_MPQ = type(mpq(0))
ZERO = mpq(0)
ONE = mpq(1)


def rational(value):
    """Coerce ``value`` to an exact rational."""
    if isinstance(value, _MPQ):
        return value
    if isinstance(value, float):
        raise TypeError("floating point coefficients are not allowed")
    if isinstance(value, str):
        try:
            return mpq(value.strip())
        except ValueError as exc:
            raise ParseError(f"not a rational literal: {value!r}") from exc
    return mpq(value)


def is_scalar(value):
    return isinstance(value, (_MPQ, int)) or type(value).__name__ in ("Fraction", "mpz")


def multi_factorial(exps):
    out = 1
    for e in exps:
        if e > 1:
            out *= factorial(e)
    return out


def _natural_key(name):
    return [int(tok) if tok.isdigit() else tok for tok in re.split(r"(\d+)", name)]


class MultiPoly:
    __slots__ = ("variables", "terms")

    def __init__(self, variables=(), terms=None, *, clean=False):
        self.variables = tuple(variables)
        if terms is None:
            self.terms = {}
        elif clean:
            self.terms = terms
        else:
            n = len(self.variables)
            out = {}
            for exps, c in terms.items():
                exps = tuple(exps)
                if len(exps) != n:
                    raise ValueError(f"exponent {exps} does not match variables {self.variables}")
                c = rational(c)
                if c:
                    out[exps] = out.get(exps, ZERO) + c
            self.terms = {e: c for e, c in out.items() if c}

    # -- constructors -----------------------------------------------------
    @classmethod
    def zero(cls, variables=()):
        return cls(variables, {}, clean=True)

    @classmethod
    def constant(cls, c, variables=()):
        c = rational(c)
        variables = tuple(variables)
        if not c:
            return cls(variables, {}, clean=True)
        return cls(variables, {(0,) * len(variables): c}, clean=True)

    @classmethod
    def var(cls, name, variables=None):
        variables = (name,) if variables is None else tuple(variables)
        i = variables.index(name)
        exps = tuple(1 if j == i else 0 for j in range(len(variables)))
        return cls(variables, {exps: ONE}, clean=True)

    @classmethod
    def gens(cls, variables):
        return tuple(cls.var(v, variables) for v in variables)

    @classmethod
    def monomial(cls, variables, exps, c=1):
        return cls(variables, {tuple(exps): c})

    # -- ring bookkeeping -------------------------------------------------
    def embed(self, variables):
        """Re-express on ``variables``; every variable actually used must be present."""
        variables = tuple(variables)
        if variables == self.variables:
            return self
        pos = {v: i for i, v in enumerate(variables)}
        used = self.used_variables()
        missing = [v for v in used if v not in pos]
        if missing:
            raise ValueError(f"cannot embed: variables {missing} not in target ring")
        idx = [(pos[v], i) for i, v in enumerate(self.variables) if v in pos]
        n = len(variables)
        terms = {}
        for exps, c in self.terms.items():
            new = [0] * n
            for j, i in idx:
                new[j] = exps[i]
            terms[tuple(new)] = c
        return MultiPoly(variables, terms, clean=True)

    def used_variables(self):
        used = set()
        for exps in self.terms:
            for v, e in zip(self.variables, exps):
                if e:
                    used.add(v)
        return tuple(v for v in self.variables if v in used)

    def _align(self, other):
        if isinstance(other, MultiPoly):
            if other.variables == self.variables:
                return self, other
            extra = tuple(v for v in other.variables if v not in self.variables)
            variables = self.variables + extra
            return self.embed(variables), other.embed(variables)
        return self, MultiPoly.constant(other, self.variables)

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, MultiPoly) and not is_scalar(other):
            return NotImplemented
        a, b = self._align(other)
        terms = dict(a.terms)
        for e, c in b.terms.items():
            s = terms.get(e, ZERO) + c
            if s:
                terms[e] = s
            else:
                terms.pop(e, None)
        return MultiPoly(a.variables, terms, clean=True)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.variables, {e: -c for e, c in self.terms.items()}, clean=True)

    def __sub__(self, other):
        if not isinstance(other, MultiPoly) and not is_scalar(other):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        c = rational(c)
        if not c:
            return MultiPoly.zero(self.variables)
        return MultiPoly(self.variables, {e: v * c for e, v in self.terms.items()}, clean=True)

    def __mul__(self, other):
        if isinstance(other, MultiPoly):
            return self.mul(other)
        if is_scalar(other):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if is_scalar(other):
            return self.scale(other)
        return NotImplemented

    def __truediv__(self, other):
        if is_scalar(other):
            return self.scale(ONE / rational(other))
        if isinstance(other, MultiPoly) and other.is_constant():
            return self.scale(ONE / other.constant_term())
        return NotImplemented

    def mul(self, other, keep=None):
        """Product; ``keep(exps) -> bool`` optionally discards monomials on the fly."""
        a, b = self._align(other)
        terms = {}
        get = terms.get
        if len(a.terms) > len(b.terms):
            a, b = b, a
        bt = list(b.terms.items())
        for e1, c1 in a.terms.items():
            for e2, c2 in bt:
                e = tuple(map(add, e1, e2))
                if keep is not None and not keep(e):
                    continue
                terms[e] = get(e, ZERO) + c1 * c2
        return MultiPoly(a.variables, {e: c for e, c in terms.items() if c}, clean=True)

    def mul_trunc(self, other, order, graded=None):
        """Product keeping only monomials of (weighted) degree <= ``order``."""
        a, b = self._align(other)
        w = a.weights(graded)
        ga = a._graded_parts(w)
        gb = b._graded_parts(w)
        terms = {}
        get = terms.get
        for d1, l1 in ga.items():
            for d2, l2 in gb.items():
                if d1 + d2 > order:
                    continue
                for e1, c1 in l1:
                    for e2, c2 in l2:
                        e = tuple(map(add, e1, e2))
                        terms[e] = get(e, ZERO) + c1 * c2
        return MultiPoly(a.variables, {e: c for e, c in terms.items() if c}, clean=True)

    def _graded_parts(self, w):
        parts = {}
        for e, c in self.terms.items():
            parts.setdefault(sum(map(_mul, e, w)), []).append((e, c))
        return parts

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only non-negative integer powers")
        result = MultiPoly.constant(1, self.variables)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # -- comparison -------------------------------------------------------
    def _named_terms(self):
        out = {}
        for e, c in self.terms.items():
            out[tuple((v, x) for v, x in zip(self.variables, e) if x)] = c
        return out

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            if other.variables == self.variables:
                return self.terms == other.terms
            return self._named_terms() == other._named_terms()
        if is_scalar(other):
            c = rational(other)
            if not c:
                return not self.terms
            return self.is_constant() and self.constant_term() == c
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._named_terms().items()))

    def __bool__(self):
        return bool(self.terms)

    # -- inspection -------------------------------------------------------
    def weights(self, graded=None):
        if graded is None:
            return (1,) * len(self.variables)
        graded = set(graded)
        return tuple(1 if v in graded else 0 for v in self.variables)

    def degree(self, graded=None):
        """Maximum weighted total degree (``-1`` for the zero polynomial)."""
        if not self.terms:
            return -1
        w = self.weights(graded)
        return max(sum(map(_mul, e, w)) for e in self.terms)

    def min_degree(self, graded=None):
        if not self.terms:
            return -1
        w = self.weights(graded)
        return min(sum(map(_mul, e, w)) for e in self.terms)

    def degree_in(self, name):
        if name not in self.variables or not self.terms:
            return 0
        i = self.variables.index(name)
        return max(e[i] for e in self.terms)

    def is_constant(self):
        return all(not any(e) for e in self.terms)

    def constant_term(self):
        return self.terms.get((0,) * len(self.variables), ZERO)

    def coefficient(self, exps):
        if isinstance(exps, dict):
            exps = tuple(exps.get(v, 0) for v in self.variables)
        return self.terms.get(tuple(exps), ZERO)

    def filter(self, pred):
        return MultiPoly(self.variables, {e: c for e, c in self.terms.items() if pred(e)}, clean=True)

    def homogeneous(self, k, graded=None):
        w = self.weights(graded)
        return self.filter(lambda e: sum(map(_mul, e, w)) == k)

    def truncate(self, order, graded=None):
        w = self.weights(graded)
        return self.filter(lambda e: sum(map(_mul, e, w)) <= order)

    def collect(self, names):
        """Split into ``{exps over names: coefficient polynomial in the other variables}``."""
        names = tuple(names)
        idx = [self.variables.index(v) if v in self.variables else None for v in names]
        rest = tuple(v for v in self.variables if v not in names)
        ridx = [self.variables.index(v) for v in rest]
        out = {}
        for e, c in self.terms.items():
            key = tuple(e[i] if i is not None else 0 for i in idx)
            sub = tuple(e[i] for i in ridx)
            out.setdefault(key, {})[sub] = c
        return {k: MultiPoly(rest, v, clean=True) for k, v in out.items()}

    def items(self):
        """Terms in descending graded-lex order."""
        return sorted(self.terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True)

    # -- calculus and substitution ----------------------------------------
    def diff(self, name, times=1):
        if name not in self.variables:
            return MultiPoly.zero(self.variables)
        i = self.variables.index(name)
        terms = {}
        for e, c in self.terms.items():
            if e[i] < times:
                continue
            f = 1
            for s in range(times):
                f *= e[i] - s
            new = list(e)
            new[i] -= times
            terms[tuple(new)] = c * f
        return MultiPoly(self.variables, terms, clean=True)

    def diff_multi(self, exps, names=None):
        """Apply the constant-coefficient operator d^exps (exponents over ``names``)."""
        names = self.variables if names is None else tuple(names)
        out = self
        for v, k in zip(names, exps):
            if k:
                out = out.diff(v, k)
                if not out:
                    break
        return out

    def subs(self, mapping, order=None, graded=None):
        """Substitute polynomials (or scalars) for variables.

        With ``order`` set, every intermediate product is truncated to that
        weighted degree (``graded`` selects the weighted variables of the
        result ring).
        """
        targets = {}
        for v, val in mapping.items():
            if v in self.variables:
                targets[v] = val
        keep = tuple(v for v in self.variables if v not in targets)
        ring = keep
        for val in targets.values():
            if isinstance(val, MultiPoly):
                ring = ring + tuple(v for v in val.variables if v not in ring)
        kidx = [(self.variables.index(v), ring.index(v)) for v in keep]
        sidx = [(self.variables.index(v), v) for v in targets]
        vals = {}
        for v, val in targets.items():
            vals[v] = val.embed(ring) if isinstance(val, MultiPoly) else MultiPoly.constant(val, ring)
        cache = {}

        def power(v, k):
            key = (v, k)
            if key not in cache:
                if k == 1:
                    cache[key] = vals[v]
                else:
                    prev = power(v, k - 1)
                    cache[key] = prev.mul_trunc(vals[v], order, graded) if order is not None else prev * vals[v]
            return cache[key]

        n = len(ring)
        result = MultiPoly.zero(ring)
        acc = {}
        for e, c in self.terms.items():
            base = [0] * n
            for i, j in kidx:
                base[j] = e[i]
            term = MultiPoly(ring, {tuple(base): c}, clean=True)
            for i, v in sidx:
                if e[i]:
                    p = power(v, e[i])
                    term = term.mul_trunc(p, order, graded) if order is not None else term * p
                    if not term:
                        break
            for te, tc in term.terms.items():
                acc[te] = acc.get(te, ZERO) + tc
        result = MultiPoly(ring, {e: c for e, c in acc.items() if c}, clean=True)
        if order is not None:
            result = result.truncate(order, graded)
        return result

    def rename(self, mapping):
        return MultiPoly(tuple(mapping.get(v, v) for v in self.variables), self.terms, clean=True)

    # -- text -------------------------------------------------------------
    def to_text(self):
        if not self.terms:
            return "0"
        pieces = []
        for e, c in self.items():
            mono = " ".join(
                v if x == 1 else f"{v}^{x}" for v, x in zip(self.variables, e) if x
            )
            if not mono:
                body = str(c)
            elif c == 1:
                body = mono
            elif c == -1:
                body = "-" + mono
            else:
                body = f"{c} * {mono}"
            pieces.append(body)
        out = pieces[0]
        for p in pieces[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out

    __str__ = to_text

    def __repr__(self):
        return f"MultiPoly({self.variables!r}, {self.to_text()!r})"


def _mul(a, b):
    return a * b


def natural_sort(names):
    return sorted(names, key=_natural_key)


_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([A-Za-z][A-Za-z0-9_]*)|(\*\*|[-+*^()]))")


def _tokenize(text):
    pos, out = 0, []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character at {pos} in {text!r}")
        num, name, op = m.groups()
        if num is not None:
            out.append(("num", num))
        elif name is not None:
            out.append(("name", name))
        else:
            out.append(("op", "^" if op == "**" else op))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    return out


class _Parser:
    def __init__(self, tokens, variables):
        self.toks = tokens
        self.i = 0
        self.variables = variables

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expr(self):
        sign = 1
        kind, val = self.peek()
        if kind == "op" and val in "+-":
            self.take()
            sign = -1 if val == "-" else 1
        out = self.term() * sign
        while True:
            kind, val = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                t = self.term()
                out = out + t if val == "+" else out - t
            else:
                return out

    def term(self):
        out = self.power()
        while True:
            kind, val = self.peek()
            if kind == "op" and val == "*":
                self.take()
                out = out * self.power()
            elif kind in ("num", "name") or (kind == "op" and val == "("):
                out = out * self.power()
            else:
                return out

    def power(self):
        base = self.atom()
        kind, val = self.peek()
        if kind == "op" and val == "^":
            self.take()
            k, v = self.take()
            if k != "num" or "/" in v:
                raise ParseError("exponent must be a non-negative integer")
            base = base ** int(v)
        return base

    def atom(self):
        kind, val = self.take()
        if kind == "num":
            return MultiPoly.constant(rational(val), self.variables)
        if kind == "name":
            if val not in self.variables:
                raise ParseError(f"unknown variable {val!r}; expected one of {self.variables}")
            return MultiPoly.var(val, self.variables)
        if kind == "op" and val == "(":
            inner = self.expr()
            k, v = self.take()
            if v != ")":
                raise ParseError("unbalanced parenthesis")
            return inner
        if kind == "op" and val == "-":
            return -self.atom()
        raise ParseError(f"unexpected token {val!r}")


def parse_poly(text, variables=None):
    """Parse the canonical text form (and ordinary arithmetic notation)."""
    tokens = _tokenize(text)
    if variables is None:
        names = []
        for kind, val in tokens:
            if kind == "name" and val not in names:
                names.append(val)
        variables = tuple(natural_sort(names))
    variables = tuple(variables)
    if not tokens:
        raise ParseError("empty polynomial")
    parser = _Parser(tokens, variables)
    out = parser.expr()
    if parser.i != len(tokens):
        raise ParseError(f"trailing input in {text!r}")
    return out.embed(variables)
