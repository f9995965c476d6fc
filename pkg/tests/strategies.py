"""Hypothesis strategies shared by the test modules."""
from __future__ import annotations

from fractions import Fraction

from hypothesis import strategies as st

from kvstar.exactalg.poly import MultiPoly

small_rationals = st.builds(
    Fraction,
    st.integers(min_value=-6, max_value=6),
    st.integers(min_value=1, max_value=4),
)


def polys(variables, max_degree=3, max_terms=4):
    """Random polynomials over ``variables`` with small rational coefficients."""
    n = len(variables)
    exps = st.lists(st.integers(min_value=0, max_value=max_degree), min_size=n, max_size=n).filter(
        lambda e: sum(e) <= max_degree
    )
    terms = st.dictionaries(exps.map(tuple), small_rationals, max_size=max_terms)
    return terms.map(lambda t: MultiPoly(tuple(variables), t))


def lie_polys(g, max_degree=2, max_terms=3):
    return polys(tuple(g.basis), max_degree, max_terms)
