"""Campbell-Hausdorff series Z(X, Y) = log(e^X e^Y) as exact jets in g.

Homogeneous parts are generated by the recursion

    Z_1 = X + Y
    (n + 1) Z_{n+1} = 1/2 [X - Y, Z_n]
                      + sum_{p >= 1} B_2p/(2p)! sum_{k_1 + .. + k_2p = n}
                            [Z_k1, [ ... [Z_k2p, X + Y] ... ]]

evaluated directly through the structure constants.  Nested brackets are
memoized by their index sequence.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache
from math import comb, factorial
from pathlib import Path

from .exactalg.duality import block_names
from .exactalg.poly import ONE, ZERO, MultiPoly, Q, parse_poly
from .lie import LieAlgebra, symbolic_point

log = logging.getLogger(__name__)


@lru_cache(maxsize=None)
def bernoulli(n):
    """Bernoulli number B_n with B_1 = -1/2."""
    if n == 0:
        return ONE
    total = ZERO
    for k in range(n):
        total += comb(n + 1, k) * bernoulli(k)
    return -total / (n + 1)


def _compositions(n, parts):
    if parts == 1:
        if n >= 1:
            yield (n,)
        return
    for first in range(1, n - parts + 2):
        for rest in _compositions(n - first, parts - 1):
            yield (first,) + rest


@dataclass(frozen=True)
class CbhJet:
    """Coordinates of Z(X, Y) through total degree ``order`` in X and Y."""

    algebra: LieAlgebra
    order: int
    components: tuple

    @property
    def xy_names(self):
        return block_names(self.algebra.basis, "X") + block_names(self.algebra.basis, "Y")

    def homogeneous(self, k):
        return tuple(c.homogeneous(k, self.xy_names) for c in self.components)

    def substitute(self, x, y, order=None, graded=None):
        """Z(x, y) for g-valued vectors x, y of polynomials, truncated if asked."""
        mapping = dict(zip(self.xy_names, list(x) + list(y)))
        return tuple(c.subs(mapping, order, graded) for c in self.components)

    def to_text(self):
        lines = [f"order {self.order}"]
        for b, c in zip(self.algebra.basis, self.components):
            lines.append(f"{b}: {c.to_text()}")
        return "\n".join(lines) + "\n"

    def __eq__(self, other):
        if not isinstance(other, CbhJet):
            return NotImplemented
        return (
            self.algebra == other.algebra
            and self.order == other.order
            and all(a == b for a, b in zip(self.components, other.components))
        )

    def __hash__(self):
        return hash((self.algebra, self.order))


def _homogeneous_parts(g, order):
    ring = block_names(g.basis, "X") + block_names(g.basis, "Y")
    x = symbolic_point(g, "X", ring)
    y = symbolic_point(g, "Y", ring)
    zero = MultiPoly.zero(ring)
    parts = {1: [a + b for a, b in zip(x, y)]}
    x_minus_y = [a - b for a, b in zip(x, y)]
    x_plus_y = parts[1]
    nested = {}

    def nest(seq):
        if not seq:
            return x_plus_y
        if seq not in nested:
            nested[seq] = g.bracket(parts[seq[0]], nest(seq[1:]))
        return nested[seq]

    for n in range(1, order):
        acc = [c / 2 for c in g.bracket(x_minus_y, parts[n])]
        for p in range(1, n // 2 + 1):
            k = bernoulli(2 * p) / factorial(2 * p)
            for seq in _compositions(n, 2 * p):
                term = nest(seq)
                acc = [a + b * k for a, b in zip(acc, term)]
        parts[n + 1] = [c / (n + 1) for c in acc]
    return parts, zero


def _cache_path(cache_dir, g, order):
    return Path(cache_dir) / f"cbh-{g.fingerprint[:16]}-N{order}.txt"


def _read_cache(path, g, order):
    ring = block_names(g.basis, "X") + block_names(g.basis, "Y")
    comps = []
    lines = path.read_text().splitlines()
    if not lines or lines[0] != f"order {order}":
        return None
    for b, line in zip(g.basis, lines[1:]):
        name, _, body = line.partition(": ")
        if name != b:
            return None
        comps.append(parse_poly(body, ring))
    if len(comps) != g.dim:
        return None
    return CbhJet(g, order, tuple(comps))


@lru_cache(maxsize=64)
def _bch_memo(g, order):
    parts, zero = _homogeneous_parts(g, order)
    comps = []
    for k in range(g.dim):
        total = zero
        for n in range(1, order + 1):
            total = total + parts[n][k]
        comps.append(total)
    return CbhJet(g, order, tuple(comps))


def bch(g, order, cache_dir=None):
    """The Campbell-Hausdorff jet of ``g`` through total degree ``order``.

    With ``cache_dir`` set, jets are read from and written to plain-text files
    keyed by the algebra's fingerprint and the order.
    """
    if order < 1:
        raise ValueError("order must be at least 1")
    if cache_dir is not None:
        path = _cache_path(cache_dir, g, order)
        if path.exists():
            jet = _read_cache(path, g, order)
            if jet is not None:
                log.debug("cbh cache hit %s", path)
                return jet
        jet = _bch_memo(g, order)
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(".tmp")
        tmp.write_text(jet.to_text())
        tmp.replace(path)
        return jet
    return _bch_memo(g, order)


def bch_scaled(g, order, t="t"):
    """Z_t(X, Y) = Z(tX, tY)/t: the degree-k part picks up t^(k-1).

    ``t`` is a variable name (formal parameter) or a rational.
    """
    jet = bch(g, order)
    comps = []
    for c in jet.components:
        if isinstance(t, str):
            ring = c.variables + (t,)
            terms = {}
            for e, v in c.terms.items():
                terms[e + (sum(e) - 1,)] = v
            comps.append(MultiPoly(ring, terms, clean=True))
        else:
            tv = Q(t)
            terms = {}
            for e, v in c.terms.items():
                val = v * tv ** (sum(e) - 1)
                if val:
                    terms[e] = val
            comps.append(MultiPoly(c.variables, terms, clean=True))
    return CbhJet(g, order, tuple(comps))
