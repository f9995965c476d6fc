"""Truncated formal power series on top of :class:`MultiPoly`."""
from __future__ import annotations

from dataclasses import dataclass

from ..errors import NonUnipotentConstantTerm, NonzeroConstantTerm, SeriesInversionFailure
from .poly import ONE, MultiPoly, rational


@dataclass(frozen=True)
class TruncSeries:
    """A jet: ``poly`` modulo monomials of weighted degree > ``order``.

    ``graded`` names the variables that carry degree; any other variable (the
    formal parameter ``t``, say) is a passive coefficient.  ``None`` grades all.
    """

    poly: MultiPoly
    order: int
    graded: tuple | None = None

    def __post_init__(self):
        if self.order < 0:
            raise ValueError("truncation order must be non-negative")
        if self.graded is not None:
            object.__setattr__(self, "graded", tuple(self.graded))
        object.__setattr__(self, "poly", self.poly.truncate(self.order, self.graded))

    @classmethod
    def one(cls, variables, order, graded=None):
        return cls(MultiPoly.constant(1, variables), order, graded)

    def _wrap(self, poly):
        return TruncSeries(poly, self.order, self.graded)

    def _coerce(self, other):
        if isinstance(other, TruncSeries):
            return other.poly, min(self.order, other.order)
        return other, self.order

    def __add__(self, other):
        p, n = self._coerce(other)
        return TruncSeries(self.poly + p, n, self.graded)

    __radd__ = __add__

    def __sub__(self, other):
        p, n = self._coerce(other)
        return TruncSeries(self.poly - p, n, self.graded)

    def __rsub__(self, other):
        return TruncSeries(other - self.poly, self.order, self.graded)

    def __neg__(self):
        return self._wrap(-self.poly)

    def __mul__(self, other):
        p, n = self._coerce(other)
        if isinstance(p, MultiPoly):
            return TruncSeries(self.poly.mul_trunc(p, n, self.graded), n, self.graded)
        return TruncSeries(self.poly * p, n, self.graded)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, TruncSeries):
            return self * other.inverse()
        return self._wrap(self.poly * (ONE / rational(other)))

    def __eq__(self, other):
        if isinstance(other, TruncSeries):
            n = min(self.order, other.order)
            return self.poly.truncate(n, self.graded) == other.poly.truncate(n, self.graded)
        return self.poly == other

    def __hash__(self):
        return hash((self.poly, self.order))

    @property
    def variables(self):
        return self.poly.variables

    def constant_part(self):
        """The weighted-degree-zero part (may still involve passive variables)."""
        return self.poly.homogeneous(0, self.graded)

    def homogeneous(self, k):
        return self.poly.homogeneous(k, self.graded)

    def with_order(self, order):
        return TruncSeries(self.poly, min(order, self.order), self.graded)

    def power(self, k):
        out = TruncSeries(MultiPoly.constant(1, self.variables), self.order, self.graded)
        for _ in range(k):
            out = out * self
        return out

    def exp(self):
        return series_exp(self)

    def log(self):
        return series_log(self)

    def inverse(self):
        return series_inverse(self)

    def __str__(self):
        return f"{self.poly} + O({self.order + 1})"


def series_exp(s):
    """Sum of s^k/k! for k <= order; the constant part must vanish."""
    if s.constant_part():
        raise NonzeroConstantTerm("series_exp needs a series without constant term")
    result = TruncSeries.one(s.variables, s.order, s.graded)
    term = result
    for k in range(1, s.order + 1):
        term = (term * s) / k
        if not term.poly:
            break
        result = result + term
    return result


def series_log(s):
    c = s.constant_part()
    if c != 1:
        raise NonzeroConstantTerm("series_log needs constant term 1")
    u = s - 1
    result = TruncSeries(MultiPoly.zero(s.variables), s.order, s.graded)
    term = TruncSeries.one(s.variables, s.order, s.graded)
    for k in range(1, s.order + 1):
        term = term * u
        if not term.poly:
            break
        result = result + term / k if k % 2 else result - term / k
    return result


def series_inverse(s):
    c = s.constant_part()
    if not c or not c.is_constant():
        raise SeriesInversionFailure("only series with a nonzero scalar constant term are units")
    c0 = c.constant_term()
    u = (s / c0) - 1
    result = TruncSeries.one(s.variables, s.order, s.graded)
    term = result
    for _ in range(s.order):
        term = -(term * u)
        if not term.poly:
            break
        result = result + term
    return result / c0


def series_sqrt(s):
    """Principal square root of a series with constant term 1."""
    return series_exp(series_log(s) / 2)


def matmul_trunc(a, b, order, graded=None):
    n, m, p = len(a), len(b), len(b[0])
    out = []
    for i in range(n):
        row = []
        for j in range(p):
            acc = None
            for k in range(m):
                x, y = a[i][k], b[k][j]
                if not x or not y:
                    continue
                prod = x.mul_trunc(y, order, graded)
                acc = prod if acc is None else acc + prod
            row.append(acc if acc is not None else MultiPoly.zero(a[0][0].variables))
        out.append(row)
    return out


def matrix_series_det_sqrt(m, order=None, graded=None):
    """det(M)^{1/2} = exp(tr(log M)/2) for a square matrix of jets with M(0) = I.

    ``m`` holds :class:`TruncSeries` or :class:`MultiPoly` entries; with
    polynomial entries ``order`` is required.
    """
    size = len(m)
    entries = [[x for x in row] for row in m]
    if any(len(row) != size for row in entries):
        raise ValueError("matrix must be square")
    first = entries[0][0]
    if isinstance(first, TruncSeries):
        order = first.order if order is None else order
        graded = first.graded
        entries = [[x.poly for x in row] for row in entries]
    if order is None:
        raise ValueError("truncation order required for polynomial entries")
    ring = ()
    for row in entries:
        for x in row:
            ring = ring + tuple(v for v in x.variables if v not in ring)
    entries = [[x.embed(ring).truncate(order, graded) for x in row] for row in entries]
    for i in range(size):
        for j in range(size):
            c = entries[i][j].homogeneous(0, graded)
            if c != (1 if i == j else 0):
                raise NonUnipotentConstantTerm(f"M(0)[{i}][{j}] = {c}")
    e = [[entries[i][j] - (1 if i == j else 0) for j in range(size)] for i in range(size)]
    trace_log = MultiPoly.zero(ring)
    power = e
    for k in range(1, order + 1):
        tr = MultiPoly.zero(ring)
        for i in range(size):
            tr = tr + power[i][i]
        if not tr and all(not x for row in power for x in row):
            break
        trace_log = trace_log + tr / k if k % 2 else trace_log - tr / k
        power = matmul_trunc(power, e, order, graded)
    return series_exp(TruncSeries(trace_log / 2, order, graded))
