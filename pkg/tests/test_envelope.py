from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from kvstar import envelope, lie
from kvstar.envelope import EnvelopingElement
from kvstar.exactalg.poly import MultiPoly
from kvstar.star import invariant_check
from strategies import lie_polys

SL2 = lie.sl2()
H, E, F = (EnvelopingElement.generator(SL2, i) for i in range(3))

# defining representation of sl2, used as an independent check on straightening
REP = (
    ((1, 0), (0, -1)),
    ((0, 1), (0, 0)),
    ((0, 0), (1, 0)),
)


def mat_mul(a, b):
    return tuple(tuple(sum(Fraction(a[i][k]) * b[k][j] for k in range(2)) for j in range(2)) for i in range(2))


def represent(a):
    out = [[Fraction(0)] * 2 for _ in range(2)]
    for mono, c in a.terms.items():
        m = ((1, 0), (0, 1))
        for i in mono:
            m = mat_mul(m, REP[i])
        for i in range(2):
            for j in range(2):
                out[i][j] += Fraction(int(c.numerator), int(c.denominator)) * m[i][j]
    return tuple(tuple(r) for r in out)


words = st.lists(st.integers(0, 2), max_size=5)


def word_element(w):
    out = EnvelopingElement.one(SL2)
    for i in w:
        out = out * EnvelopingElement.generator(SL2, i)
    return out


class TestPBW:
    def test_relations(self):
        assert E * F - F * E == H
        assert H * E - E * H == E * 2
        assert (F * E).terms == {(0,): -1, (1, 2): 1}

    @given(words, words)
    def test_representation_is_multiplicative(self, a, b):
        x, y = word_element(a), word_element(b)
        assert represent(x * y) == mat_mul(represent(x), represent(y))

    @given(words, words, words)
    def test_associative(self, a, b, c):
        x, y, z = word_element(a), word_element(b), word_element(c)
        assert (x * y) * z == x * (y * z)

    @pytest.mark.parametrize("g", lie.bundled_algebras(), ids=lambda g: g.name)
    def test_pbw_rank(self, g):
        rank, count = envelope.filtration_rank(g, 3)
        assert rank == count

    def test_text(self):
        assert (H * H + E * F * 4).to_text() == "h^2 + 4 * e f"
        assert (H - E).to_text() == "h - e"


class TestBeta:
    def test_symmetrization(self):
        h, e, f = MultiPoly.gens(SL2.basis)
        b = envelope.beta_symmetrize(SL2, e * f)
        assert b == (E * F + F * E) * Fraction(1, 2)

    @given(lie_polys(SL2, 3, 4))
    def test_inverse(self, p):
        assert envelope.beta_inverse(envelope.beta_symmetrize(SL2, p)) == p

    def test_powers_of_generators(self):
        h, e, f = MultiPoly.gens(SL2.basis)
        assert envelope.beta_symmetrize(SL2, e ** 3) == E * E * E


class TestEta:
    def test_casimir_is_central(self):
        h, e, f = MultiPoly.gens(SL2.basis)
        omega = h * h + e * f * 4
        assert invariant_check(SL2, omega)
        img = envelope.eta(SL2, omega, t=1)
        for x in (H, E, F):
            assert x * img == img * x

    def test_casimir_formal(self):
        h, e, f = MultiPoly.gens(SL2.basis)
        img = envelope.eta(SL2, h * h + e * f * 4)
        assert img.to_text() == "h^2 + 4 * e f + (-2 * t) * h + (t^2)"

    @given(lie_polys(SL2, 3, 3))
    def test_inverse(self, p):
        assert envelope.eta_inverse(envelope.eta(SL2, p), SL2) == p

    @given(lie_polys(lie.solvable2(), 3, 3))
    def test_inverse_solvable(self, p):
        g = lie.solvable2()
        assert envelope.eta_inverse(envelope.eta(g, p, t=2), g, t=2) == p
