"""Admissible graphs, their symbols and the multidifferential operators they define.

A graph in G_{n,m} has first-kind vertices ``0 .. n-1`` and ground vertices
``n .. n+m-1``.  First-kind vertex k emits the ordered pair of edges
``edges[k] = (a, b)``.  In text the first-kind vertices are written 1..n and
the ground vertices L, R (m = 2), M (m = 1) or b1, b2, ... (m >= 3).

Every first-kind vertex carries the Poisson tensor
``gamma^{ij} = 1/2 c_ij^k x_k``; edge tags select the indices i, j and the
partial derivatives.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import cached_property

import networkx as nx

from .errors import ParseError, SizeLimitExceeded
from .exactalg.duality import apply_symbol, block_names, block_prefixes
from .exactalg.poly import ZERO, MultiPoly, Q

MAX_N = 4
MAX_DIM = 4
HALF = Q(1, 2)


def ground_names(m):
    if m == 1:
        return ("M",)
    if m == 2:
        return ("L", "R")
    return tuple(f"b{i}" for i in range(1, m + 1))


@dataclass(frozen=True)
class AdmissibleGraph:
    n: int
    m: int
    edges: tuple

    def __post_init__(self):
        edges = tuple(tuple(e) for e in self.edges)
        object.__setattr__(self, "edges", edges)
        if len(edges) != self.n:
            raise ValueError(f"expected {self.n} edge pairs, got {len(edges)}")
        top = self.n + self.m
        for k, (a, b) in enumerate(edges):
            for v in (a, b):
                if not (0 <= v < top):
                    raise ValueError(f"edge target {v} out of range")
            if a == k or b == k:
                raise ValueError(f"self-loop at vertex {k + 1}")
            if a == b:
                raise ValueError(f"double edge at vertex {k + 1}")

    # -- structure ---------------------------------------------------------
    @cached_property
    def in_degree(self):
        deg = [0] * (self.n + self.m)
        for a, b in self.edges:
            deg[a] += 1
            deg[b] += 1
        return tuple(deg)

    @property
    def is_relevant(self):
        return all(self.in_degree[k] <= 1 for k in range(self.n))

    @property
    def roots(self):
        return tuple(k for k in range(self.n) if self.in_degree[k] == 0)

    def is_ground(self, v):
        return v >= self.n

    def incoming(self):
        """Map first-kind vertex -> list of (source vertex, slot) edges ending there."""
        out = {k: [] for k in range(self.n)}
        for k, pair in enumerate(self.edges):
            for s, v in enumerate(pair):
                if v < self.n:
                    out[v].append((k, s))
        return out

    def name(self, v):
        if v < self.n:
            return str(v + 1)
        return ground_names(self.m)[v - self.n]

    def to_text(self):
        body = "".join(f"({self.name(a)},{self.name(b)})" for a, b in self.edges)
        return f"{self.n} {self.m} : {body}".rstrip()

    __str__ = to_text

    def sort_key(self):
        return (self.n, self.m, self.edges)

    def subgraph(self, vertices):
        """The graph on the given first-kind vertices (renumbered in order) and all ground vertices.

        Edges into first-kind vertices outside ``vertices`` are not allowed.
        """
        vs = sorted(vertices)
        relabel = {v: i for i, v in enumerate(vs)}
        k = len(vs)
        for g in range(self.m):
            relabel[self.n + g] = k + g
        edges = []
        for v in vs:
            a, b = self.edges[v]
            if a not in relabel or b not in relabel:
                raise ValueError("subgraph is not closed under outgoing edges")
            edges.append((relabel[a], relabel[b]))
        return AdmissibleGraph(k, self.m, tuple(edges))


def parse_graph(text):
    """Inverse of :meth:`AdmissibleGraph.to_text`."""
    m = re.fullmatch(r"\s*(\d+)\s+(\d+)\s*:\s*(.*?)\s*", text)
    if not m:
        raise ParseError(f"malformed graph line {text!r}")
    n, mm, body = int(m.group(1)), int(m.group(2)), m.group(3)
    if mm < 1:
        raise ParseError("a graph needs at least one ground vertex")
    names = {str(i + 1): i for i in range(n)}
    for i, g in enumerate(ground_names(mm)):
        names[g] = n + i
    pairs = re.findall(r"\(\s*(\w+)\s*,\s*(\w+)\s*\)", body)
    if re.sub(r"\(\s*\w+\s*,\s*\w+\s*\)", "", body).strip():
        raise ParseError(f"malformed edge list {body!r}")
    try:
        edges = tuple((names[a], names[b]) for a, b in pairs)
        return AdmissibleGraph(n, mm, edges)
    except KeyError as exc:
        raise ParseError(f"unknown vertex {exc.args[0]!r}") from exc
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def dump_graphs(graphs):
    return "".join(g.to_text() + "\n" for g in graphs)


def load_graphs(text):
    return [parse_graph(line) for line in text.splitlines() if line.strip() and not line.startswith("#")]


# -- enumeration -------------------------------------------------------

def enumerate_graphs(n, m, relevant_only=True, max_n=MAX_N):
    """All labeled graphs of G_{n,m}, ordered by their edge lists."""
    if n < 0 or m < 1:
        raise ValueError("need n >= 0 and m >= 1")
    if n > max_n:
        raise SizeLimitExceeded(f"n = {n} exceeds the configured bound {max_n}")
    top = n + m
    indeg = [0] * top
    chosen = []
    out = []

    def rec(k):
        if k == n:
            out.append(AdmissibleGraph(n, m, tuple(chosen)))
            return
        for a in range(top):
            if a == k:
                continue
            if relevant_only and a < n and indeg[a]:
                continue
            indeg[a] += 1
            for b in range(top):
                if b == k or b == a:
                    continue
                if relevant_only and b < n and indeg[b]:
                    continue
                indeg[b] += 1
                chosen.append((a, b))
                rec(k + 1)
                chosen.pop()
                indeg[b] -= 1
            indeg[a] -= 1

    rec(0)
    out.sort(key=AdmissibleGraph.sort_key)
    return out


# -- classification ----------------------------------------------------

@dataclass(frozen=True)
class GraphClassification:
    roots: frozenset
    leaves: frozenset
    wheels: tuple
    simple_components: tuple
    wheel_part: frozenset
    root_part: frozenset

    def reassemble(self, graph):
        """Edge set recovered from the two parts (checked against ``graph``)."""
        edges = {}
        for part in (self.wheel_part, self.root_part):
            for v in part:
                edges[v] = graph.edges[v]
        return tuple(edges[k] for k in sorted(edges))


def first_kind_digraph(graph):
    dg = nx.DiGraph()
    dg.add_nodes_from(range(graph.n))
    for k, (a, b) in enumerate(graph.edges):
        for v in (a, b):
            if v < graph.n:
                dg.add_edge(k, v)
    return dg


def classify(graph):
    dg = first_kind_digraph(graph)
    cycles = []
    for cyc in nx.simple_cycles(dg):
        # rotate so the smallest vertex comes first
        i = cyc.index(min(cyc))
        cycles.append(tuple(cyc[i:] + cyc[:i]))
    cycles.sort()
    wheels = []
    for cyc in cycles:
        members = set(cyc)
        internal = sum(1 for u in cyc for v in dg.successors(u) if v in members)
        if internal == len(cyc):
            wheels.append(cyc)
    comps = sorted((frozenset(c) for c in nx.weakly_connected_components(dg)), key=min)
    cyclic = {v for cyc in cycles for v in cyc}
    wheel_part = frozenset(v for c in comps if c & cyclic for v in c)
    root_part = frozenset(range(graph.n)) - wheel_part
    return GraphClassification(
        roots=frozenset(graph.roots),
        leaves=frozenset(range(graph.n, graph.n + graph.m)),
        wheels=tuple(wheels),
        simple_components=tuple(comps),
        wheel_part=wheel_part,
        root_part=root_part,
    )


def has_wheel(graph):
    return bool(classify(graph).wheels)


# -- symbols -----------------------------------------------------------

def _check_size(graph, g):
    if graph.n > MAX_N:
        raise SizeLimitExceeded(f"n = {graph.n} exceeds {MAX_N}")
    if g.dim > MAX_DIM:
        raise SizeLimitExceeded(f"dim = {g.dim} exceeds {MAX_DIM}")


def symbol_ring(g, m, prefixes=None):
    prefixes = prefixes or block_prefixes(m)
    ring = ()
    for p in prefixes:
        ring += block_names(g.basis, p)
    return ring + tuple(g.basis)


def symbol(graph, g, prefixes=None):
    """sigma_Gamma as a polynomial in the ground blocks and the S(g) variables.

    An edge into ground vertex s with tag a contributes the coordinate
    ``<prefix_s>_<a>``; a root with tensor index k contributes the S(g)
    variable ``x_k``.  Graphs that are not relevant have symbol 0.
    """
    _check_size(graph, g)
    ring = symbol_ring(g, graph.m, prefixes)
    d = g.dim
    n = graph.n
    if g.is_formal():
        return _symbol_formal(graph, g, ring)
    if not graph.is_relevant:
        return MultiPoly.zero(ring)
    nonzero = g.nonzero
    incoming = graph.incoming()
    # out_index[k] must equal the tag on the (unique) edge into k, if any
    feeder = {}
    for v, lst in incoming.items():
        if lst:
            feeder[v] = lst[0]
    terms = {}
    choice = [None] * n

    def rec(k, coef):
        if k == n:
            exps = [0] * len(ring)
            for v in range(n):
                i, j, l, _ = choice[v]
                for slot, target in enumerate(graph.edges[v]):
                    tag = (i, j)[slot]
                    if target >= n:
                        exps[(target - n) * d + tag] += 1
                if v not in feeder:
                    exps[graph.m * d + l] += 1
            key = tuple(exps)
            terms[key] = terms.get(key, ZERO) + coef
            return
        for entry in nonzero:
            i, j, l, c = entry
            ok = True
            # edges from k into already-chosen vertices
            for slot, target in enumerate(graph.edges[k]):
                if target < k and choice[target][2] != (i, j)[slot]:
                    ok = False
                    break
            if ok and k in feeder:
                src, slot = feeder[k]
                if src < k and choice[src][slot] != l:
                    ok = False
            if not ok:
                continue
            choice[k] = entry
            rec(k + 1, coef * c * HALF)
        choice[k] = None

    rec(0, Q(1))
    return MultiPoly(ring, {e: c for e, c in terms.items() if c}, clean=True)


def _symbol_formal(graph, g, ring):
    """Symbol over an algebra whose constants are polynomials (slow path)."""
    if not graph.is_relevant:
        return MultiPoly.zero(ring)
    n, d = graph.n, g.dim
    incoming = graph.incoming()
    total = MultiPoly.zero(ring)
    edge_list = [(k, s) for k in range(n) for s in range(2)]
    for tags in itertools.product(range(d), repeat=len(edge_list)):
        tag = dict(zip(edge_list, tags))
        term = MultiPoly.constant(1, ring)
        for k in range(n):
            i, j = tag[(k, 0)], tag[(k, 1)]
            if incoming[k]:
                l = tag[incoming[k][0]]
                c = g.c(i, j, l)
                if not c:
                    term = None
                    break
                term = term * c * HALF
            else:
                lin = MultiPoly.zero(ring)
                for l in range(d):
                    c = g.c(i, j, l)
                    if c:
                        lin = lin + MultiPoly.var(g.basis[l], ring) * c
                if not lin:
                    term = None
                    break
                term = term * lin * HALF
        if term is None:
            continue
        exps = [0] * len(ring)
        for (k, s), a in tag.items():
            target = graph.edges[k][s]
            if target >= n:
                exps[(target - n) * d + a] += 1
        total = total + term * MultiPoly(ring, {tuple(exps): 1}, clean=True)
    return total


def symbol_degrees(sym, g, m, prefixes=None):
    """(polynomial degree, differential degree) ranges of a symbol: sets of observed values."""
    ring_blocks = symbol_ring(g, m, prefixes)[: m * g.dim]
    poly_deg = set()
    diff_deg = set()
    nb = len(ring_blocks)
    for e in sym.terms:
        diff_deg.add(sum(e[:nb]))
        poly_deg.add(sum(e[nb:nb + g.dim]))
    return poly_deg, diff_deg


# -- operators ---------------------------------------------------------

def multidiff_apply(graph, g, args):
    """B_Gamma(args) by the defining sum over edge taggings.

    Each first-kind vertex k contributes the derivative of gamma^{I(e_k1) I(e_k2)}
    along the tags of its incoming edges; the ground vertex s receives the
    derivatives along the tags of the edges ending there.
    """
    _check_size(graph, g)
    if len(args) != graph.m:
        raise ValueError(f"graph has {graph.m} ground vertices, got {len(args)} arguments")
    basis = tuple(g.basis)
    n, d = graph.n, g.dim
    ring = tuple(dict.fromkeys(basis + tuple(v for a in args for v in a.variables)))
    args = [a.embed(ring) for a in args]
    xs = [MultiPoly.var(b, ring) for b in basis]
    gamma = {}
    for i in range(d):
        for j in range(d):
            val = MultiPoly.zero(ring)
            for k in range(d):
                c = g.c(i, j, k)
                if c:
                    val = val + xs[k] * c
            gamma[(i, j)] = val * HALF
    into = {v: [] for v in range(n + graph.m)}
    for k, pair in enumerate(graph.edges):
        for s, v in enumerate(pair):
            into[v].append((k, s))
    edge_list = [(k, s) for k in range(n) for s in range(2)]
    total = MultiPoly.zero(ring)
    for tags in itertools.product(range(d), repeat=len(edge_list)):
        tag = dict(zip(edge_list, tags))
        prod = MultiPoly.constant(1, ring)
        for k in range(n):
            f = gamma[(tag[(k, 0)], tag[(k, 1)])]
            for e in into[k]:
                if not f:
                    break
                f = f.diff(basis[tag[e]])
            if not f:
                prod = None
                break
            prod = prod * f
        if prod is None:
            continue
        for s in range(graph.m):
            f = args[s]
            for e in into[n + s]:
                if not f:
                    break
                f = f.diff(basis[tag[e]])
            if not f:
                prod = None
                break
            prod = prod * f
        if prod is not None:
            total = total + prod
    return total


def bidiff_apply(graph, g, u, v):
    return multidiff_apply(graph, g, [u, v])


def symbol_apply(graph, g, args):
    """Same operator as :func:`multidiff_apply`, through the symbol."""
    return apply_symbol(symbol(graph, g), list(args), g.basis)


# -- special graphs ----------------------------------------------------

def wheel_graph(p, leg_first=True):
    """The pure wheel of length p in G_{p,p}: vertex k -> (ground k, vertex k+1)."""
    if p < 2:
        raise ValueError("a wheel has length at least 2")
    edges = []
    for k in range(p):
        pair = (p + k, (k + 1) % p)
        edges.append(pair if leg_first else pair[::-1])
    return AdmissibleGraph(p, p, tuple(edges))


def bracket_graph():
    """The graph of G_{1,2} with edges (1, L), (1, R)."""
    return AdmissibleGraph(1, 2, ((1, 2),))


def disjoint_union(g1, g2):
    """Union over shared ground vertices; g2's first-kind vertices come after g1's."""
    if g1.m != g2.m:
        raise ValueError("graphs must share the ground vertices")
    n1, n2, m = g1.n, g2.n, g1.m

    def shift1(v):
        return v if v < n1 else v + n2

    def shift2(v):
        return v + n1

    edges = [tuple(shift1(v) for v in e) for e in g1.edges]
    edges += [tuple(shift2(v) for v in e) for e in g2.edges]
    return AdmissibleGraph(n1 + n2, m, tuple(edges))


def graft(outer, inners):
    """Plug single-rooted graphs into the ground vertices of ``outer``.

    ``inners[j]`` is a graph over the final ground vertices whose root (vertex 0
    after renumbering) replaces ground vertex j of ``outer``.  All inners share
    the same number of ground vertices.
    """
    if len(inners) != outer.m:
        raise ValueError("need one inner graph per ground vertex of the outer graph")
    m = inners[0].m
    offsets = []
    pos = outer.n
    for h in inners:
        if h.m != m:
            raise ValueError("inner graphs must share the ground vertices")
        if h.roots != (0,):
            raise ValueError("each inner graph needs the single root 0")
        offsets.append(pos)
        pos += h.n
    total_n = pos

    def out_map(v):
        return v if v < outer.n else offsets[v - outer.n]

    edges = [tuple(out_map(v) for v in e) for e in outer.edges]
    for h, off in zip(inners, offsets):
        for e in h.edges:
            edges.append(tuple(v + off if v < h.n else total_n + (v - h.n) for v in e))
    return AdmissibleGraph(total_n, m, tuple(edges))


def compose_symbols(outer, inners, g, outer_prefixes=None):
    """sigma_outer(sigma_1, ..., sigma_p) for g-valued (single-root) inner symbols."""
    p = len(inners)
    outer_prefixes = outer_prefixes or block_prefixes(p)
    mapping = {}
    for pre, inner in zip(outer_prefixes, inners):
        for a, b in enumerate(g.basis):
            mapping[f"{pre}_{b}"] = inner.diff(b).subs({x: 0 for x in g.basis})
    return outer.subs(mapping)
