"""Acceptance suite: one check per criterion, exact equality throughout.

Run under pytest (the summary lines appear at the end of the session) or
directly with ``python3 tests/test_acceptance.py``.
"""
from __future__ import annotations

import itertools
import random
import sys
import tempfile
import time
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from kvstar import cbh, cones, duflo, graphs, lie, star  # noqa: E402
from kvstar.cli import _monomials, run  # noqa: E402
from kvstar.errors import JacobiViolation  # noqa: E402
from kvstar.exactalg.poly import MultiPoly  # noqa: E402
from oracles import (  # noqa: E402
    cones_compatible_oracle,
    dynkin_bch,
    naive_graphs,
    q_matrix_oracle,
    to_dict,
)

DATA = Path(__file__).parent / "data"
SL2, HEIS, SOLV = lie.sl2(), lie.heisenberg(), lie.solvable2()
RESULTS = []


def _ctx(g, order=6):
    return star.StarContext(g, order)


def criterion(number, title, budget):
    def wrap(fn):
        def runner():
            t0 = time.perf_counter()
            try:
                detail = fn()
            except BaseException as exc:
                elapsed = time.perf_counter() - t0
                RESULTS.append(f"[FAIL] {number:2d}. {title} ({elapsed:.2f}s / {budget}s): {type(exc).__name__}: {exc}")
                raise
            elapsed = time.perf_counter() - t0
            over = elapsed > budget
            mark = "FAIL" if over else "PASS"
            note = " exceeded time budget" if over else ""
            RESULTS.append(f"[{mark}] {number:2d}. {title} ({elapsed:.2f}s / {budget}s){': ' + detail if detail else ''}{note}")
            assert not over, f"criterion {number} took {elapsed:.2f}s, budget {budget}s"

        runner.number = number
        return runner

    return wrap


# --------------------------------------------------------------------------

@criterion(1, "axioms: bundled algebras validate, perturbed sl2 rejected", 1)
def c01():
    with tempfile.TemporaryDirectory() as tmp:
        for g in lie.bundled_algebras():
            path = Path(tmp) / f"{g.name}.txt"
            path.write_text(lie.format_algebra(g))
            assert run(["validate", "--algebra", str(path)], stdout=_Null(), stderr=_Null()) == 0
        broken = str(DATA / "sl2_jacobi_broken.txt")
        assert run(["validate", "--algebra", broken], stdout=_Null(), stderr=_Null()) == 1
    try:
        lie.parse_algebra((DATA / "sl2_jacobi_broken.txt").read_text())
    except JacobiViolation as exc:
        assert (exc.i, exc.j, exc.l) == (1, 2, 3) and exc.residual
        return f"rejected at (i,j,l,m)=({exc.i},{exc.j},{exc.l},{exc.m}), residual {exc.residual}"
    raise AssertionError("perturbed sl2 was accepted")


@criterion(2, "CBH jet equals the Dynkin oracle through degree 4", 10)
def c02():
    for g in (SL2, HEIS):
        jet = cbh.bch(g, 4)
        for comp, want in zip(jet.components, dynkin_bch(g, 4)):
            assert to_dict(comp, jet.xy_names) == want
    jet = cbh.bch(HEIS, 6)
    assert all(not any(jet.homogeneous(k)) for k in range(3, 7))
    X_x, X_y, X_z, Y_x, Y_y, Y_z = MultiPoly.gens(jet.xy_names)
    assert jet.components[2] == X_z + Y_z + (X_x * Y_y - X_y * Y_x) / 2
    return "Heisenberg jet is X + Y + 1/2 [X,Y] through degree 6"


@criterion(3, "Duflo series q: matrix oracle, nilpotent and parity checks", 10)
def c03():
    q = duflo.q_series(SL2, 4)
    assert to_dict(q.poly, duflo.x_ring(SL2)) == q_matrix_oracle(SL2, 4)
    assert duflo.q_series(HEIS, 6).poly == 1
    for g in lie.bundled_algebras():
        assert all(sum(e) % 2 == 0 for e in duflo.q_series(g, 6).poly.terms)
    return ""


@criterion(4, "factorization: assembled A equals Aw * Ar through t-degree 4, Aw scalar", 30)
def c04():
    sizes = []
    for g in lie.bundled_algebras():
        st = duflo.star_symbol(g, 4)
        assert duflo.symbol_A_assembled(g, 4) == st.A
        assert duflo.is_scalar_valued(st.Aw, g)
        sizes.append(f"{g.name}:{len(st.A.terms)}")
    return "terms " + " ".join(sizes)


@criterion(5, "star axioms on monomials of degree <= 2 (sl2, Heisenberg, solvable2)", 120)
def c05():
    checked = 0
    for g in (SL2, HEIS, SOLV):
        ctx = _ctx(g)
        monos = _monomials(g, 2, 0)
        memo = {}

        def s(u, v):
            key = (u, v)
            if key not in memo:
                memo[key] = star.star(ctx, u, v)
            return memo[key]

        one = MultiPoly.constant(1, ctx.basis)
        a, b = Fraction(2, 3), Fraction(-5, 7)
        for u in monos:
            assert s(one, u) == u and s(u, one) == u
        for u, v in itertools.product(monos, repeat=2):
            assert not star.check_commutator(ctx, u, v)
        for u1, u2, v in itertools.product(monos, repeat=3):
            left, right = star.check_bilinearity(ctx, u1, u2, v, a, b)
            assert not left and not right
            assert s(s(u1, u2), v) == s(u1, s(u2, v))
            checked += 1
    return f"{checked} associativity triples"


@criterion(6, "integral formula equals direct symbol application, degrees <= 3", 60)
def c06():
    pairs = 0
    for g in lie.bundled_algebras():
        ctx = _ctx(g)
        monos = _monomials(g, 3, 0)
        for u, v in itertools.product(monos, repeat=2):
            assert star.star(ctx, u, v) == star.star_via_symbol(ctx, u, v)
            pairs += 1
    return f"{pairs} pairs"


def _random_poly(rng, g, deg):
    monos = _monomials(g, deg, 0)
    out = MultiPoly.zero(tuple(g.basis))
    for m in rng.sample(monos, 3):
        out = out + m * Fraction(rng.randint(-5, 5), rng.randint(1, 4))
    return out


@criterion(7, "Psi-connection residual vanishes on 20 random pairs (sl2, Heisenberg)", 120)
def c07():
    rng = random.Random(20240607)
    for g in (SL2, HEIS):
        ctx = _ctx(g)
        for _ in range(20):
            u, v = _random_poly(rng, g, 2), _random_poly(rng, g, 2)
            assert not star.check_psiconnection(ctx, u, v)
    return "40 pairs"


@criterion(8, "KV identity and invariance closure on invariants", 120)
def c08():
    ctx = _ctx(SL2)
    cas = ctx.poly("h^2 + 4 * e f")
    one = ctx.poly("1")
    for u, v in [(one, cas), (cas, one), (cas, cas)]:
        assert star.kv_check(ctx, u, v).is_zero()
        assert star.star_invariance_closure(ctx, u, v)
    hctx = _ctx(HEIS)
    z = hctx.poly("z")
    for u, v in [(z, z), (z, z * z), (z * z, z * z)]:
        assert star.kv_check(hctx, u, v).is_zero()
        assert star.star_invariance_closure(hctx, u, v)
    return ""


@criterion(9, "derivative operators: C_n via sigma_n, M_n vanishes on invariants", 120)
def c09():
    ctx = _ctx(SL2)
    monos = _monomials(SL2, 2, 0)
    for n in range(4):
        for u, v in itertools.product(monos, repeat=2):
            assert star.derivative_coefficient(ctx, n, u, v) == star.derivative_via_sigma(ctx, n, u, v)
    cas = ctx.poly("h^2 + 4 * e f")
    invs = [ctx.poly("1"), cas]
    for n in range(4):
        for u, v in itertools.product(invs, repeat=2):
            assert not star.mn_operator(ctx, n, u, v)
    return ""


@criterion(10, "graph layer: counts, degree law, wheel constants, weight fit", 120)
def c10():
    for n in range(3):
        assert [gr.edges for gr in graphs.enumerate_graphs(n, 2)] == naive_graphs(n, 2)
    for n in range(4):
        for gr in graphs.enumerate_graphs(n, 2):
            sym = graphs.symbol(gr, SL2)
            if sym:
                assert graphs.symbol_degrees(sym, SL2, 2) == ({len(gr.roots)}, {n + len(gr.roots)})
    constants = []
    for p in (2, 3, 4):
        ratios = set()
        for g in (SL2, SOLV):
            ring = graphs.symbol_ring(g, p)
            pts = [lie.symbolic_point(g, pre, ring) for pre in graphs.block_prefixes(p)]
            trace = lie.trace_ad_product(g, pts)
            sym = graphs.symbol(graphs.wheel_graph(p), g)
            (e, c), *_ = trace.terms.items()
            ratio = sym.coefficient(e) / c
            assert sym == trace * ratio
            ratios.add(ratio)
        assert len(ratios) == 1
        constants.append(f"p={p}: {ratios.pop()}")
    algebras = [SL2, HEIS, SOLV]
    for n in range(3):
        fit = star.fit_graph_weights(n, algebras)
        for g in algebras:
            target = duflo.sigma_n(g, max(n, 1), n) if n else 1
            assert fit.weighted_symbol(g) == target
    return "wheel constants " + ", ".join(constants)


@criterion(11, "cone compatibility agrees with the extreme-ray oracle on 100 pairs", 30)
def c11():
    rng = random.Random(11)
    incompatible = 0
    for _ in range(100):
        d = rng.randint(1, 3)
        G = [tuple(rng.randint(-2, 2) for _ in range(d)) for _ in range(rng.randint(0, 3))]
        H = [tuple(rng.randint(-2, 2) for _ in range(d)) for _ in range(rng.randint(0, 3))]
        got = cones.compatible(cones.PolyhedralCone(d, tuple(G)), cones.PolyhedralCone(d, tuple(H)))
        assert got == cones_compatible_oracle(G, H, d)
        incompatible += not got
    return f"{100 - incompatible} compatible, {incompatible} incompatible"


class _Null:
    def write(self, _):
        return 0

    def flush(self):
        pass


CRITERIA = [c01, c02, c03, c04, c05, c06, c07, c08, c09, c10, c11]


@pytest.mark.parametrize("check", CRITERIA, ids=lambda c: f"criterion_{c.number:02d}")
def test_criterion(check):
    check()


def main():
    failed = 0
    for check in CRITERIA:
        try:
            check()
        except BaseException:  # noqa: BLE001 - the line is already recorded
            failed += 1
        print(RESULTS[-1])
    print(f"{len(CRITERIA) - failed}/{len(CRITERIA)} criteria passed")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
