from fractions import Fraction

import pytest

from kvstar import duflo, graphs, lie
from kvstar.exactalg.poly import MultiPoly
from oracles import q_matrix_oracle, to_dict

ALGEBRAS = lie.bundled_algebras()


def killing_xy(g):
    ring = duflo.x_ring(g) + duflo.x_ring(g, "Y")
    return lie.trace_ad_product(g, [lie.symbolic_point(g, "X", ring), lie.symbolic_point(g, "Y", ring)])


class TestQ:
    @pytest.mark.parametrize("g", ALGEBRAS, ids=lambda g: g.name)
    def test_matches_matrix_oracle(self, g):
        q = duflo.q_series(g, 4)
        assert to_dict(q.poly, duflo.x_ring(g)) == q_matrix_oracle(g, 4)

    def test_sl2_low_order(self):
        g = lie.sl2()
        X_h, X_e, X_f = MultiPoly.gens(duflo.x_ring(g))
        assert duflo.q_series(g, 2).poly == 1 + (X_h * X_h + X_e * X_f) / 6

    def test_nilpotent_is_one(self):
        assert duflo.q_series(lie.heisenberg(), 6).poly == 1

    @pytest.mark.parametrize("g", ALGEBRAS, ids=lambda g: g.name)
    def test_even(self, g):
        q = duflo.q_series(g, 6).poly
        assert all(sum(e) % 2 == 0 for e in q.terms)

    def test_log_q_coefficients(self):
        rho = duflo.log_q_coefficients(4)
        assert rho[2] == Fraction(1, 48) and rho[4] == Fraction(-1, 5760)
        assert rho[1] == 0 and rho[3] == 0


class TestTau:
    def test_trivial(self):
        ds = duflo.duflo_series(lie.sl2(), 4)
        assert ds.tau.poly == 1
        assert ds.r == ds.q

    def test_weights(self):
        g = lie.solvable2()
        ds = duflo.duflo_series(g, 3, (1,))
        X_x, X_y = MultiPoly.gens(duflo.x_ring(g))
        # tr ad X = X_x on solvable2; tau = exp(X_x / 2)
        assert ds.tau.poly == 1 + X_x / 2 + X_x * X_x / 8 + X_x ** 3 / 48
        assert (ds.r * ds.tau) == ds.q

    def test_normalize(self):
        assert duflo.normalize_tau([0, 0]) == duflo.TRIVIAL
        assert duflo.normalize_tau(["1/2"]) == (Fraction(1, 2),)


class TestSymbols:
    @pytest.mark.parametrize("g", ALGEBRAS, ids=lambda g: g.name)
    @pytest.mark.parametrize("mode", [duflo.TRIVIAL, (1, 2)], ids=["trivial", "weights"])
    def test_wheel_route_matches_composition(self, g, mode):
        assert duflo.symbol_Aw_unscaled(g, 4, mode) == duflo.symbol_Aw_wheels(g, 4, mode)

    @pytest.mark.parametrize("g", ALGEBRAS, ids=lambda g: g.name)
    def test_aw_quadratic_part(self, g):
        aw = duflo.symbol_Aw_unscaled(g, 2)
        assert aw.poly.homogeneous(2) == killing_xy(g) * Fraction(-1, 24)

    @pytest.mark.parametrize("g", ALGEBRAS, ids=lambda g: g.name)
    def test_aw_scalar_valued(self, g):
        st = duflo.star_symbol(g, 3)
        assert duflo.is_scalar_valued(st.Aw, g)
        assert not duflo.is_scalar_valued(st.Ar, g) or g.is_abelian

    def test_factorization(self):
        g = lie.sl2()
        st = duflo.star_symbol(g, 3)
        assert duflo.symbol_A_assembled(g, 3) == st.A

    def test_heisenberg_has_no_wheels(self):
        st = duflo.star_symbol(lie.heisenberg(), 4)
        assert st.Aw == 1
        assert st.A == st.Ar

    def test_sigma_low_orders(self):
        g = lie.sl2()
        assert duflo.sigma_n(g, 1, 0) == 1
        sigma1 = duflo.sigma_n(g, 1, 1)
        bracket = graphs.symbol(graphs.bracket_graph(), g)
        assert sigma1 == bracket

    def test_t_degree_law(self):
        # in A, t-degree = (X,Y)-degree - xi-degree
        g = lie.solvable2()
        a = duflo.star_symbol(g, 3).A
        d = g.dim
        for e in a.terms:
            assert e[-1] == sum(e[: 2 * d]) - sum(e[2 * d: 3 * d])
