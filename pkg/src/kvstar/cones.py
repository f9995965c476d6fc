"""Finitely generated cones and the compatibility test C1 ∩ -C2 = {0}.

Compatibility is decided exactly.  A nonzero point of C1 ∩ -C2 exists iff
for some coordinate i and sign s the system

    G lam + H mu = 0,   lam, mu >= 0,   (G lam)_i = s

is feasible (G, H are the generator matrices).  Each system is solved by
Gaussian elimination of the equalities followed by Fourier-Motzkin
elimination of the remaining variables.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

from .errors import DimensionMismatch, ParseError
from .exactalg.linalg import rref
from .exactalg.poly import ZERO, rational


def _primitive(vec):
    fr = [Fraction(int(rational(x).numerator), int(rational(x).denominator)) for x in vec]
    den = 1
    for x in fr:
        den = lcm(den, x.denominator)
    ints = [int(x * den) for x in fr]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    if g == 0:
        return None
    return tuple(x // g for x in ints)


@dataclass(frozen=True)
class PolyhedralCone:
    """Nonnegative span of integer generators, kept primitive, deduplicated and sorted."""

    dim: int
    generators: tuple

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dimension must be positive")
        seen = set()
        for vec in self.generators:
            if len(vec) != self.dim:
                raise DimensionMismatch(f"generator {tuple(vec)} is not in dimension {self.dim}")
            p = _primitive(vec)
            if p is not None:
                seen.add(p)
        object.__setattr__(self, "generators", tuple(sorted(seen)))

    @classmethod
    def zero(cls, dim):
        return cls(dim, ())

    def is_zero(self):
        return not self.generators

    def to_text(self):
        gens = ",".join("(" + ",".join(str(x) for x in v) + ")" for v in self.generators)
        return f"cone d={self.dim} gens={gens}"

    __str__ = to_text

    def contains(self, x):
        """Membership of a rational vector (exact)."""
        if len(x) != self.dim:
            raise DimensionMismatch("point has the wrong dimension")
        k = len(self.generators)
        eqs = [[rational(self.generators[j][i]) for j in range(k)] for i in range(self.dim)]
        return _feasible(eqs, [rational(v) for v in x], k)


def minus(c):
    return PolyhedralCone(c.dim, tuple(tuple(-x for x in v) for v in c.generators))


def parse_cone(text):
    """Parse ``cone d=2 gens=(1,0),(0,1)`` (an empty list is the zero cone)."""
    m = re.fullmatch(r"\s*cone\s+d\s*=\s*(\d+)\s+gens\s*=\s*(.*?)\s*", text)
    if not m:
        raise ParseError(f"malformed cone literal {text!r}")
    d = int(m.group(1))
    body = m.group(2)
    vecs = re.findall(r"\(([^()]*)\)", body)
    if re.sub(r"\([^()]*\)", "", body).replace(",", "").strip():
        raise ParseError(f"malformed generator list {body!r}")
    gens = []
    for v in vecs:
        try:
            gens.append(tuple(rational(x) for x in v.split(",")))
        except (ValueError, TypeError) as exc:
            raise ParseError(f"bad generator ({v})") from exc
    try:
        return PolyhedralCone(d, tuple(gens))
    except DimensionMismatch as exc:
        raise ParseError(str(exc)) from exc


# -- exact feasibility -------------------------------------------------

def _fm_feasible(rows, nvars):
    """Feasibility of {z : a . z <= b for (a, b) in rows}, by Fourier-Motzkin."""
    cur = {}
    for a, b in rows:
        _add_row(cur, a, b)
    for j in range(nvars):
        pos, neg, rest = [], [], []
        for a, b in cur.values():
            if a[j] > 0:
                pos.append((a, b))
            elif a[j] < 0:
                neg.append((a, b))
            else:
                rest.append((a, b))
        nxt = {}
        for a, b in rest:
            _add_row(nxt, a, b)
        for ap, bp in pos:
            for an, bn in neg:
                cp, cn = -an[j], ap[j]
                a = tuple(cp * x + cn * y for x, y in zip(ap, an))
                _add_row(nxt, a, cp * bp + cn * bn)
        cur = nxt
    return all(b >= 0 for _, b in cur.values())


def _add_row(table, a, b):
    """Insert a . z <= b, normalized and keeping only the tightest bound per direction."""
    scale = max((abs(x) for x in a), default=ZERO)
    if scale:
        a = tuple(x / scale for x in a)
        b = b / scale
    prev = table.get(a)
    if prev is None or b < prev[1]:
        table[a] = (a, b)


def _feasible(eqs, rhs, nvars):
    """Is there z >= 0 with eqs z = rhs?"""
    if not eqs:
        return True
    red, pivots = rref([row + [b] for row, b in zip(eqs, rhs)], nvars + 1)
    if nvars in pivots:
        return False
    free = [j for j in range(nvars) if j not in pivots]
    idx = {j: i for i, j in enumerate(free)}
    rows = []
    # pivot variables: z_p = b - sum a_f z_f >= 0  <=>  sum a_f z_f <= b
    for r, p in enumerate(pivots):
        a = [ZERO] * len(free)
        for j in free:
            a[idx[j]] = red[r][j]
        rows.append((tuple(a), red[r][nvars]))
    for j in free:
        a = [ZERO] * len(free)
        a[idx[j]] = rational(-1)
        rows.append((tuple(a), ZERO))
    if not free:
        return all(b >= 0 for _, b in rows)
    return _fm_feasible(rows, len(free))


def intersection_witness(c1, c2):
    """A pair (i, s) such that c1 ∩ -c2 has a point with s * x_i > 0, or None."""
    if c1.dim != c2.dim:
        raise DimensionMismatch("cones live in different dimensions")
    d = c1.dim
    G, H = c1.generators, c2.generators
    if not G or not H:
        return None
    k = len(G) + len(H)
    base = [[rational(v[i]) for v in G] + [rational(v[i]) for v in H] for i in range(d)]
    for i in range(d):
        for s in (1, -1):
            row = [rational(v[i]) for v in G] + [ZERO] * len(H)
            if _feasible(base + [row], [ZERO] * d + [rational(s)], k):
                return (i, s)
    return None


def compatible(c1, c2):
    """True iff c1 ∩ -c2 = {0}."""
    return intersection_witness(c1, c2) is None


def is_salient(c):
    return compatible(c, c)
