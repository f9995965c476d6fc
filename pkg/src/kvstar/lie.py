"""Finite-dimensional Lie algebras given by exact structure constants.

Structure constants follow ``[e_i, e_j] = sum_k c_ij^k e_k``.  They are stored
sparsely under canonical keys ``i < j`` (0-based internally, 1-based in the
text format and in error reports); the antisymmetric completion is derived.
Coefficients are rationals, or polynomials in a formal parameter for the
rescaled algebras produced by :func:`scale_bracket`.
"""
from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass, field
from functools import cached_property

from .errors import AntisymmetryViolation, DimensionMismatch, JacobiViolation, ParseError
from .exactalg.poly import ZERO, MultiPoly, rational

_NAME = re.compile(r"^[A-Za-z][A-Za-z0-9]*$")
RESERVED = {"t"}


def _coeff(value):
    if isinstance(value, MultiPoly):
        if value.is_constant():
            return value.constant_term()
        return value
    return rational(value)


@dataclass(frozen=True)
class LieAlgebra:
    basis: tuple
    table: tuple  # sorted (((i, j, k), c), ...) with i < j, c != 0
    name: str = field(default="", compare=False)

    @property
    def dim(self):
        return len(self.basis)

    @cached_property
    def _full(self):
        full = {}
        for (i, j, k), c in self.table:
            full[(i, j, k)] = c
            full[(j, i, k)] = -c
        return full

    def c(self, i, j, k):
        """Structure constant c_ij^k (0-based indices)."""
        return self._full.get((i, j, k), ZERO)

    @cached_property
    def nonzero(self):
        """All nonzero (i, j, k, c) including both orders of (i, j)."""
        return tuple((i, j, k, c) for (i, j, k), c in sorted(self._full.items()))

    @cached_property
    def by_pair(self):
        out = {}
        for i, j, k, c in self.nonzero:
            out.setdefault((i, j), []).append((k, c))
        return out

    def is_abelian(self):
        return not self.table

    def is_formal(self):
        return any(isinstance(c, MultiPoly) for _, c in self.table)

    @cached_property
    def fingerprint(self):
        return hashlib.sha256(format_algebra(self).encode()).hexdigest()

    def coords(self, prefix):
        """Coordinate names of a point of g in block ``prefix`` (``X_h``, ...)."""
        return tuple(f"{prefix}_{b}" for b in self.basis)

    def bracket(self, p, q):
        """Bracket of two g-valued vectors whose entries are ring elements."""
        out = [None] * self.dim
        for (i, j), lst in self.by_pair.items():
            a, b = p[i], q[j]
            if _is_zero(a) or _is_zero(b):
                continue
            prod = a * b
            for k, c in lst:
                term = prod * c
                out[k] = term if out[k] is None else out[k] + term
        zero = _zero_like(p, q)
        return [zero if x is None else x for x in out]

    def __repr__(self):
        label = self.name or "LieAlgebra"
        return f"<{label} dim={self.dim} basis={' '.join(self.basis)}>"


def _is_zero(x):
    return not x


def _zero_like(*vectors):
    for vec in vectors:
        for x in vec:
            if isinstance(x, MultiPoly):
                return MultiPoly.zero(x.variables)
    return ZERO


def validate(raw, dim, name=""):
    """Build a :class:`LieAlgebra` from a raw table of structure constants.

    ``raw`` maps 1-based ``(i, j, k)`` to a coefficient (or is an iterable of
    ``(i, j, k, c)``); ``dim`` is an integer or a sequence of basis names.
    Missing entries are zero; the antisymmetric partner of each entry is
    filled in.  Raises :class:`AntisymmetryViolation` or
    :class:`JacobiViolation` on bad input.
    """
    if isinstance(dim, int):
        basis = tuple(f"e{i}" for i in range(1, dim + 1))
    else:
        basis = tuple(dim)
    d = len(basis)
    if d < 1:
        raise ValueError("dimension must be positive")
    for b in basis:
        if not _NAME.match(b) or b in RESERVED:
            raise ParseError(f"invalid basis name {b!r}")
    if len(set(basis)) != d:
        raise ParseError("duplicate basis names")
    items = raw.items() if hasattr(raw, "items") else ((k[:3], k[3]) for k in raw)
    table = {}
    for (i, j, k), value in items:
        for idx in (i, j, k):
            if not (1 <= idx <= d):
                raise DimensionMismatch(f"index {idx} outside 1..{d}")
        c = _coeff(value)
        if not c:
            continue
        if i == j:
            raise AntisymmetryViolation(i, j, k, f"c_{i}{i}^{k} = {c} must vanish")
        key = (min(i, j) - 1, max(i, j) - 1, k - 1)
        val = c if i < j else -c
        if key in table and table[key] != val:
            raise AntisymmetryViolation(i, j, k, f"entries for c_{i}{j}^{k} and c_{j}{i}^{k} are not opposite")
        table[key] = val
    g = LieAlgebra(basis, tuple(sorted(table.items())), name)
    check_jacobi(g)
    return g


def jacobi_residual(g, i, j, l, m):
    total = ZERO
    for k in range(g.dim):
        total = total + g.c(i, j, k) * g.c(k, l, m) + g.c(j, l, k) * g.c(k, i, m) + g.c(l, i, k) * g.c(k, j, m)
    return total


def check_jacobi(g):
    d = g.dim
    for i in range(d):
        for j in range(i + 1, d):
            for l in range(j + 1, d):
                for m in range(d):
                    r = jacobi_residual(g, i, j, l, m)
                    if r:
                        raise JacobiViolation(i + 1, j + 1, l + 1, m + 1, r)
    return True


# -- adjoint primitives --------------------------------------------------

def symbolic_point(g, prefix="X", variables=None):
    names = g.coords(prefix)
    variables = names if variables is None else tuple(variables)
    return [MultiPoly.var(v, variables) for v in names]


def ad_matrix(g, x=None):
    """Matrix of ad X: ``(ad X)[k][j] = sum_i x_i c_ij^k``.

    ``x`` is a coordinate vector of scalars or polynomials; ``None`` uses the
    symbolic point with coordinates ``X_<name>``.
    """
    if x is None:
        x = symbolic_point(g)
    if len(x) != g.dim:
        raise DimensionMismatch(f"expected {g.dim} coordinates, got {len(x)}")
    zero = _zero_like(x)
    m = [[zero for _ in range(g.dim)] for _ in range(g.dim)]
    for i, j, k, c in g.nonzero:
        if _is_zero(x[i]):
            continue
        m[k][j] = m[k][j] + x[i] * c
    return m


def matmul(a, b):
    n = len(a)
    zero = _zero_like(*a, *b)
    out = [[zero] * n for _ in range(n)]
    for i in range(n):
        for k in range(n):
            if _is_zero(a[i][k]):
                continue
            for j in range(n):
                if _is_zero(b[k][j]):
                    continue
                out[i][j] = out[i][j] + a[i][k] * b[k][j]
    return out


def trace_ad_product(g, xs):
    """tr(ad X_1 ... ad X_k).

    ``xs`` is a list of coordinate vectors, or an integer k meaning symbolic
    points in blocks ``X1 .. Xk``.
    """
    if isinstance(xs, int):
        k = xs
        if k < 1:
            raise ValueError("need at least one argument")
        ring = ()
        for s in range(1, k + 1):
            ring += g.coords(f"X{s}")
        xs = [symbolic_point(g, f"X{s}", ring) for s in range(1, k + 1)]
    if not xs:
        raise ValueError("need at least one argument")
    prod = ad_matrix(g, xs[0])
    for x in xs[1:]:
        prod = matmul(prod, ad_matrix(g, x))
    total = _zero_like(*prod)
    for i in range(g.dim):
        total = total + prod[i][i]
    return total


def scale_bracket(g, t):
    """The algebra g_t with bracket t[X, Y].

    ``t`` is a rational, or a string naming a formal parameter (the
    structure constants then become polynomials in that variable).
    """
    if isinstance(t, str):
        t = MultiPoly.var(t)
    elif not isinstance(t, MultiPoly):
        t = rational(t)
    table = []
    for key, c in g.table:
        v = _coeff(t * c if isinstance(t, MultiPoly) else c * t)
        if v:
            table.append((key, v))
    label = f"{g.name}_t" if g.name else ""
    return LieAlgebra(g.basis, tuple(sorted(table)), label)


# -- bundled algebras ----------------------------------------------------

def abelian(d):
    return validate({}, tuple(f"a{i}" for i in range(1, d + 1)), name=f"abelian{d}")


def heisenberg():
    return validate({(1, 2, 3): 1}, ("x", "y", "z"), name="heisenberg")


def sl2():
    return validate({(1, 2, 2): 2, (1, 3, 3): -2, (2, 3, 1): 1}, ("h", "e", "f"), name="sl2")


def solvable2():
    """The 2-dimensional non-abelian algebra [x, y] = y."""
    return validate({(1, 2, 2): 1}, ("x", "y"), name="solvable2")


def direct_sum(g1, g2):
    names2 = list(g2.basis)
    taken = set(g1.basis)
    for idx, b in enumerate(names2):
        while b in taken:
            b = b + "2"
        names2[idx] = b
        taken.add(b)
    off = g1.dim
    raw = {(i + 1, j + 1, k + 1): c for (i, j, k), c in g1.table}
    raw.update({(i + off + 1, j + off + 1, k + off + 1): c for (i, j, k), c in g2.table})
    label = f"{g1.name}+{g2.name}" if g1.name and g2.name else ""
    return validate(raw, tuple(g1.basis) + tuple(names2), name=label)


BUNDLED = {
    "sl2": sl2,
    "heisenberg": heisenberg,
    "h3": heisenberg,
    "solvable2": solvable2,
}


def bundled(name):
    """Look up a bundled algebra by name (``abelianN`` for any N)."""
    m = re.fullmatch(r"abelian(\d+)", name)
    if m:
        return abelian(int(m.group(1)))
    if name in BUNDLED:
        return BUNDLED[name]()
    raise KeyError(f"unknown bundled algebra {name!r}")


def bundled_algebras():
    """The test corpus: abelian, nilpotent, solvable and semisimple examples."""
    return [abelian(2), heisenberg(), solvable2(), sl2(), direct_sum(sl2(), abelian(1))]


# -- text format ---------------------------------------------------------

def format_algebra(g):
    lines = [f"dim {g.dim}", "basis " + " ".join(g.basis)]
    for (i, j, k), c in g.table:
        lines.append(f"{i + 1} {j + 1} {k + 1} {c}")
    return "\n".join(lines) + "\n"


def parse_algebra(text, name=""):
    """Parse the algebra spec format.

    ::

        # comment
        dim 3
        basis h e f
        1 2 2 2
        1 3 3 -2
        2 3 1 1

    Each data line ``i j k p/q`` sets c_ij^k.
    """
    dim = None
    basis = None
    raw = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "dim":
            if len(parts) != 2 or not parts[1].isdigit():
                raise ParseError(f"line {lineno}: malformed dim line")
            dim = int(parts[1])
        elif parts[0] == "basis":
            basis = tuple(parts[1:])
        else:
            if len(parts) != 4:
                raise ParseError(f"line {lineno}: expected 'i j k p/q'")
            try:
                i, j, k = (int(p) for p in parts[:3])
            except ValueError as exc:
                raise ParseError(f"line {lineno}: indices must be integers") from exc
            if "." in parts[3] or "e" in parts[3].lower():
                raise ParseError(f"line {lineno}: coefficients must be fractions p/q")
            key = (i, j, k)
            if key in raw:
                raise ParseError(f"line {lineno}: duplicate entry {key}")
            raw[key] = rational(parts[3])
    if dim is None:
        if basis is None:
            raise ParseError("missing 'dim' line")
        dim = len(basis)
    if basis is None:
        basis = tuple(f"e{i}" for i in range(1, dim + 1))
    if len(basis) != dim:
        raise ParseError(f"basis has {len(basis)} names but dim is {dim}")
    return validate(raw, basis, name=name)


def load_algebra(spec):
    """A bundled algebra name or a path to a spec file."""
    from pathlib import Path

    try:
        return bundled(spec)
    except KeyError:
        pass
    path = Path(spec)
    if not path.exists():
        raise ParseError(f"no bundled algebra or file named {spec!r}")
    return parse_algebra(path.read_text(), name=path.stem)
