"""Command-line front end.

Exit status: 0 when every residual vanishes (or the predicate holds), 1 when a
residual is nonzero, an invariant is violated or cones are incompatible,
2 on malformed input.
"""
from __future__ import annotations

import argparse
import itertools
import sys
from pathlib import Path

from . import cbh, cones, duflo, graphs, lie, star
from .errors import KvStarError, LieAlgebraError, ParseError
from .exactalg.poly import MultiPoly, rational

EXIT_OK, EXIT_FAIL, EXIT_PARSE = 0, 1, 2


class Output:
    """Collects text lines or key=value records in a fixed order."""

    def __init__(self, fmt):
        self.fmt = fmt
        self.lines = []

    def emit(self, text, **fields):
        if self.fmt == "records":
            self.lines.append(star.format_record(list(fields.items())))
        else:
            self.lines.append(text)

    def report(self, rep):
        if self.fmt == "records":
            self.lines.append(rep.to_record())
        else:
            self.lines.append(rep.to_text())

    def flush(self, stream):
        for line in self.lines:
            print(line, file=stream)


def parse_records(text):
    """Inverse of the ``records`` output format."""
    return [star.parse_record(line) for line in text.splitlines() if line.strip()]


def load_tau(spec):
    if spec in (None, "trivial"):
        return duflo.TRIVIAL
    path = Path(spec)
    if not path.exists():
        raise ParseError(f"tau weights file {spec!r} not found")
    weights = []
    for line in path.read_text().splitlines():
        line = line.split("#", 1)[0]
        weights.extend(rational(tok) for tok in line.split())
    return duflo.normalize_tau(weights)


def _poly(ctx, text):
    try:
        return ctx.poly(text)
    except (ValueError, TypeError) as exc:
        raise ParseError(str(exc)) from exc


def _monomials(g, max_deg, min_deg=1):
    basis = tuple(g.basis)
    out = []
    for deg in range(min_deg, max_deg + 1):
        for combo in itertools.combinations_with_replacement(range(g.dim), deg):
            e = [0] * g.dim
            for i in combo:
                e[i] += 1
            out.append(MultiPoly(basis, {tuple(e): 1}, clean=True))
    return out


# -- subcommands -------------------------------------------------------

def cmd_validate(args, out):
    g = args.g
    out.emit(
        f"valid: {g.name or 'algebra'} dim={g.dim} basis={' '.join(g.basis)} fingerprint={g.fingerprint[:16]}",
        status="valid", algebra=g.name, dim=g.dim, basis=" ".join(g.basis), fingerprint=g.fingerprint[:16],
    )
    return EXIT_OK


def _lie_word(k):
    return {1: "X + Y", 2: "1/2 [X,Y]"}.get(k)


def cmd_bch(args, out):
    g = args.g
    jet = cbh.bch(g, args.order, cache_dir=args.cache_dir)
    top = max((k for k in range(1, args.order + 1) if any(jet.homogeneous(k))), default=1)
    if top <= 2:
        summary = " + ".join(_lie_word(k) for k in range(1, top + 1))
    else:
        summary = f"X + Y + 1/2 [X,Y] + (terms through degree {top})"
    out.emit(f"Z = {summary}", key="summary", value=summary, order=args.order)
    for b, comp in zip(g.basis, jet.components):
        out.emit(f"Z_{b} = {comp.to_text()}", key=f"Z_{b}", value=comp.to_text())
    return EXIT_OK


def cmd_q(args, out):
    ds = duflo.duflo_series(args.g, args.order, args.tau)
    for name in ("q", "tau", "r"):
        s = getattr(ds, name)
        out.emit(f"{name} = {s.poly.to_text()} + O({args.order + 1})", key=name, value=s.poly.to_text(), order=args.order)
    return EXIT_OK


def cmd_symbols(args, out):
    st = duflo.star_symbol(args.g, args.order, args.tau)
    for name in ("Aw", "Ar", "A"):
        p = getattr(st, name)
        out.emit(f"{name} = {p.to_text()}", key=name, value=p.to_text(), order=args.order)
    return EXIT_OK


def cmd_graphs(args, out):
    g = args.g
    n = args.n
    if n > args.max_n:
        raise KvStarError(f"n = {n} exceeds --max-n {args.max_n}")
    found = graphs.enumerate_graphs(n, args.m, relevant_only=not args.all, max_n=args.max_n)
    out.emit(f"# {len(found)} graphs in G_{{{n},{args.m}}}", key="count", value=len(found), n=n, m=args.m)
    for gr in found:
        fields = {"graph": gr.to_text()}
        text = gr.to_text()
        if args.classify:
            cl = graphs.classify(gr)
            fields["roots"] = " ".join(str(v + 1) for v in sorted(cl.roots))
            fields["wheels"] = " ".join("-".join(str(v + 1) for v in w) for w in cl.wheels)
            text += f"   roots=[{fields['roots']}] wheels=[{fields['wheels']}]"
        if args.symbol:
            if args.m > 2:
                raise KvStarError("symbols are implemented for m <= 2 only")
            s = graphs.symbol(gr, g).to_text()
            fields["symbol"] = s
            text += f"   sigma = {s}"
        out.emit(text, **fields)
    return EXIT_OK


def cmd_star(args, out):
    ctx = star.StarContext(args.g, args.order, args.tau)
    u, v = _poly(ctx, args.u), _poly(ctx, args.v)
    t = "t" if args.t is None else rational(args.t)
    fn = star.star_via_symbol if args.via == "symbol" else star.star
    w = fn(ctx, u, v, t)
    out.emit(f"{u.to_text()} * {v.to_text()} = {w.to_text()}", u=u.to_text(), v=v.to_text(), product=w.to_text())
    return EXIT_OK


def _residual_text(r):
    return r.to_text()


def _check_associativity(ctx, args, out):
    monos = _monomials(ctx.algebra, args.max_degree)
    budget = ctx.order
    for a, b, c in itertools.product(monos, repeat=3):
        if sum(p.degree() for p in (a, b, c)) > budget:
            continue
        r = star.check_associativity(ctx, a, b, c)
        yield star.Report("associativity", ctx.algebra.name, (a.to_text(), b.to_text(), c.to_text()), _residual_text(r))


def _check_commutator(ctx, args, out):
    monos = _monomials(ctx.algebra, args.max_degree)
    for a, b in itertools.product(monos, repeat=2):
        r = star.check_commutator(ctx, a, b)
        yield star.Report("commutator", ctx.algebra.name, (a.to_text(), b.to_text()), _residual_text(r))


def _check_psiconnection(ctx, args, out):
    monos = _monomials(ctx.algebra, args.max_degree, 0)
    for a, b in itertools.product(monos, repeat=2):
        if a.degree() + b.degree() > ctx.order:
            continue
        r = star.check_psiconnection(ctx, a, b)
        yield star.Report("psiconnection", ctx.algebra.name, (a.to_text(), b.to_text()), _residual_text(r))


def _invariant_pairs(ctx, args):
    g = ctx.algebra
    if args.u is not None and args.v is not None:
        return [(_poly(ctx, args.u), _poly(ctx, args.v))]
    invs = [MultiPoly.constant(1, tuple(g.basis))]
    for deg in range(1, args.max_degree + 1):
        invs.extend(star.invariants(g, deg))
    return [(a, b) for a, b in itertools.product(invs, repeat=2) if a.degree() + b.degree() <= ctx.order]


def _check_kv(ctx, args, out):
    for a, b in _invariant_pairs(ctx, args):
        r = star.kv_check(ctx, a, b)
        yield star.Report("kv", ctx.algebra.name, (a.to_text(), b.to_text()), r.to_text())


def _check_mn(ctx, args, out):
    for a, b in _invariant_pairs(ctx, args):
        for n in range(args.n + 1):
            r = star.mn_operator(ctx, n, a, b)
            yield star.Report(f"mn{n}", ctx.algebra.name, (a.to_text(), b.to_text()), _residual_text(r))


def _check_weights(ctx, args, out):
    g = ctx.algebra
    for n in range(min(args.n, 2) + 1):
        fit = star.fit_graph_weights(n, [g])
        target = duflo.sigma_n(g, max(n, 1), n) if n else star._sigma_zero(g)
        r = fit.weighted_symbol(g) - target
        weights = " ".join(f"{w}" for w in fit.particular)
        out.emit(
            f"# n={n}: {len(fit.graphs)} graphs, kernel dimension {len(fit.kernel)}, particular weights [{weights}]",
            key="weights", n=n, graphs=len(fit.graphs), kernel=len(fit.kernel), particular=weights,
        )
        yield star.Report(f"weights{n}", g.name, (f"n={n}",), _residual_text(r))


CHECKS = {
    "associativity": _check_associativity,
    "commutator": _check_commutator,
    "psiconnection": _check_psiconnection,
    "kv": _check_kv,
    "mn": _check_mn,
    "weights": _check_weights,
}


def cmd_check(args, out):
    ctx = star.StarContext(args.g, args.order, args.tau)
    failed = 0
    total = 0
    for rep in CHECKS[args.suite](ctx, args, out):
        total += 1
        if not rep.passed:
            failed += 1
        if not rep.passed or args.verbose:
            out.report(rep)
    summary = f"{args.suite}: {total - failed}/{total} passed"
    out.emit(summary, suite=args.suite, passed=total - failed, total=total, status="pass" if not failed else "fail")
    return EXIT_OK if not failed else EXIT_FAIL


def cmd_cone(args, out):
    c1 = cones.parse_cone(args.first)
    c2 = cones.parse_cone(args.second)
    ok = cones.compatible(c1, c2)
    word = "compatible" if ok else "incompatible"
    out.emit(f"{word}: {c1} vs {c2}", status=word, first=c1.to_text(), second=c2.to_text())
    return EXIT_OK if ok else EXIT_FAIL


# -- parser ------------------------------------------------------------

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--algebra", default="sl2", help="bundled name (sl2, heisenberg, solvable2, abelianN) or spec file")
    common.add_argument("--order", type=int, default=star.DEFAULT_ORDER, help="truncation order N")
    common.add_argument("--tau", default="trivial", help="'trivial' or a file of wheel weights w_1 w_2 ...")
    common.add_argument("--max-n", type=int, default=graphs.MAX_N, help="largest graph size allowed")
    common.add_argument("--format", choices=("text", "records"), default="text")
    common.add_argument("--cache-dir", default=None, help="directory for cached Campbell-Hausdorff jets")

    p = argparse.ArgumentParser(prog="kvstar", description="Exact star-products, graphs and Duflo identities.")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("validate", parents=[common], help="validate an algebra")
    sub.add_parser("bch", parents=[common], help="Campbell-Hausdorff jet")
    sub.add_parser("q", parents=[common], help="the series q, tau and r")
    sub.add_parser("symbols", parents=[common], help="the symbols A^w, A^r and A")
    sg = sub.add_parser("graphs", parents=[common], help="enumerate admissible graphs")
    sg.add_argument("--n", type=int, default=1)
    sg.add_argument("--m", type=int, default=2)
    sg.add_argument("--all", action="store_true", help="include graphs that are not relevant")
    sg.add_argument("--classify", action="store_true")
    sg.add_argument("--symbol", action="store_true")
    ss = sub.add_parser("star", parents=[common], help="star-product of two polynomials")
    ss.add_argument("u")
    ss.add_argument("v")
    ss.add_argument("--t", default=None, help="rational value of t (default: formal)")
    ss.add_argument("--via", choices=("integral", "symbol"), default="integral")
    sc = sub.add_parser("check", parents=[common], help="run an identity suite")
    sc.add_argument("suite", choices=sorted(CHECKS))
    sc.add_argument("--max-degree", type=int, default=1)
    sc.add_argument("--n", type=int, default=2, help="derivative order (mn) or graph size (weights)")
    sc.add_argument("--u", default=None)
    sc.add_argument("--v", default=None)
    sc.add_argument("--verbose", action="store_true", help="list passing cases too")
    sk = sub.add_parser("cone", parents=[common], help="compatibility of two cones")
    sk.add_argument("first")
    sk.add_argument("second")
    return p


COMMANDS = {
    "validate": cmd_validate,
    "bch": cmd_bch,
    "q": cmd_q,
    "symbols": cmd_symbols,
    "graphs": cmd_graphs,
    "star": cmd_star,
    "check": cmd_check,
    "cone": cmd_cone,
}


def run(argv=None, stdout=None, stderr=None):
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    out = Output(args.format)
    try:
        if args.order < 1:
            raise ParseError("--order must be at least 1")
        if args.max_n > graphs.MAX_N:
            raise ParseError(f"--max-n must not exceed {graphs.MAX_N}")
        args.tau = load_tau(args.tau)
        if args.command != "cone":
            args.g = lie.load_algebra(args.algebra)
        code = COMMANDS[args.command](args, out)
    except ParseError as exc:
        out.flush(stdout)
        _diagnose(stderr, args.format, "parse-error", exc)
        return EXIT_PARSE
    except (LieAlgebraError, KvStarError) as exc:
        out.flush(stdout)
        _diagnose(stderr, args.format, type(exc).__name__, exc)
        return EXIT_FAIL
    out.flush(stdout)
    return code


def _diagnose(stream, fmt, kind, exc):
    if fmt == "records":
        fields = [("error", kind)]
        fields += [(k, getattr(exc, k)) for k in ("i", "j", "k", "l", "m", "residual") if hasattr(exc, k)]
        fields.append(("message", str(exc)))
        print(star.format_record(fields), file=stream)
    else:
        print(f"error ({kind}): {exc}", file=stream)


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
