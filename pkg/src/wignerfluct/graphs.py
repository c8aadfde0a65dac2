"""Directed labeled graphs for the moment expansion of products of traces.

Each monomial trace Tr(x_{w1} a_1 ... x_{wp} a_p) is a directed 2p-cycle
alternating X-edges and A-edges.  Summing the expectation of the entry
product over all identification patterns (set partitions of the vertices)
gives the exact finite-N moment; the partition weight factorizes into a
Wigner part (mixed entry moments, grouped by identified vertex pairs) and
a deterministic part (injective graph trace).  The topological helpers
(bridges, two-edge-connected forests, graphs of deterministic components)
classify which partitions survive as N grows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .ensembles import diagonal_moment, entry_moment
from .words import IDENTITY_LETTER


@dataclass(frozen=True)
class Edge:
    src: object
    trg: object
    kind: str  # "x" or "a"
    label: object  # Wigner id for X-edges, DetLetter for A-edges
    cycle: int  # index of the originating trace cycle

    def __post_init__(self):
        if self.kind not in ("x", "a"):
            raise ValueError("edge kind must be 'x' or 'a'")


@dataclass(frozen=True)
class LabeledGraph:
    vertices: tuple
    edges: tuple
    n_cycles: int


def build_cycle_graph(monomials):
    """Disjoint union of one directed 2p_j-cycle per degree-p_j monomial.

    Vertices are (j, k, 0) and the primed (j, k, 1) for k = 1..p_j.  The
    X-edge of letter k runs from (j,k,1) to (j,k,0); the A-edge runs from
    (j,k+1,0) (cyclically) to (j,k,1).
    """
    vertices = []
    edges = []
    for j, mono in enumerate(monomials):
        p = mono.degree
        if p == 0:
            raise ValueError("cycle graphs need monomials of degree >= 1")
        for k in range(1, p + 1):
            vertices.append((j, k, 0))
            vertices.append((j, k, 1))
        for k in range(1, p + 1):
            wid = mono.wigner_labels[k - 1]
            letter = mono.det_letters[k - 1]
            edges.append(Edge((j, k, 1), (j, k, 0), "x", wid, j))
            nxt = k + 1 if k < p else 1
            edges.append(Edge((j, nxt, 0), (j, k, 1), "a", letter, j))
    return LabeledGraph(tuple(vertices), tuple(edges), len(monomials))


def set_partitions(items):
    """All set partitions of a sequence, blocks in first-occurrence order."""
    items = list(items)
    if not items:
        yield ()
        return

    def rec(i, blocks):
        if i == len(items):
            yield tuple(tuple(b) for b in blocks)
            return
        for b in blocks:
            b.append(items[i])
            yield from rec(i + 1, blocks)
            b.pop()
        blocks.append([items[i]])
        yield from rec(i + 1, blocks)
        blocks.pop()

    yield from rec(1, [[items[0]]])


def quotient(graph, partition):
    """Identify vertices within each block; block index becomes the vertex."""
    vmap = {}
    for b, block in enumerate(partition):
        for v in block:
            if v in vmap:
                raise ValueError("partition blocks overlap")
            vmap[v] = b
    if set(vmap) != set(graph.vertices):
        raise ValueError("partition does not cover the vertex set")
    edges = tuple(
        Edge(vmap[e.src], vmap[e.trg], e.kind, e.label, e.cycle) for e in graph.edges
    )
    return LabeledGraph(tuple(range(len(partition))), edges, graph.n_cycles)


# ---------------------------------------------------------------------------
# undirected multigraph helpers


def _components(vertices, pairs):
    """Connected components (list of frozensets) of an undirected edge list."""
    parent = {v: v for v in vertices}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for u, v in pairs:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
    comps = {}
    for v in vertices:
        comps.setdefault(find(v), set()).add(v)
    return [frozenset(c) for c in comps.values()]


def bridges(vertices, pairs):
    """Indices of cutting edges of the undirected multigraph (loops never cut)."""
    adj = {v: [] for v in vertices}
    for eid, (u, v) in enumerate(pairs):
        if u == v:
            continue
        adj[u].append((v, eid))
        adj[v].append((u, eid))
    disc, low = {}, {}
    out = []
    counter = [0]
    for root in vertices:
        if root in disc:
            continue
        stack = [(root, None, iter(adj[root]))]
        disc[root] = low[root] = counter[0]
        counter[0] += 1
        while stack:
            v, in_eid, it = stack[-1]
            advanced = False
            for w, eid in it:
                if eid == in_eid:
                    # skip only the tree edge itself; a parallel twin has a
                    # different id and correctly prevents bridge status
                    continue
                if w in disc:
                    low[v] = min(low[v], disc[w])
                else:
                    disc[w] = low[w] = counter[0]
                    counter[0] += 1
                    stack.append((w, eid, iter(adj[w])))
                    advanced = True
                    break
            if not advanced:
                stack.pop()
                if stack:
                    parent = stack[-1][0]
                    low[parent] = min(low[parent], low[v])
                    if low[v] > disc[parent]:
                        out.append(in_eid)
    return out


def tecc_forest(vertices, pairs):
    """Forest of two-edge-connected components.

    Returns (components, forest_edges) where components is a list of
    frozensets of original vertices and forest_edges joins component indices
    (one per cutting edge).
    """
    cut = set(bridges(vertices, pairs))
    kept = [p for i, p in enumerate(pairs) if i not in cut]
    comps = _components(vertices, kept)
    where = {v: i for i, c in enumerate(comps) for v in c}
    forest_edges = [
        (where[pairs[i][0]], where[pairs[i][1]]) for i in sorted(cut)
    ]
    return comps, forest_edges


def leaf_count(vertices, pairs):
    """Leaves of the forest of two-edge-connected components.

    A tree reduced to a single component counts two leaves.
    """
    comps, forest_edges = tecc_forest(vertices, pairs)
    deg = {i: 0 for i in range(len(comps))}
    for u, v in forest_edges:
        deg[u] += 1
        deg[v] += 1
    total = 0
    for tree in _components(range(len(comps)), forest_edges):
        if len(tree) == 1:
            total += 2
        else:
            total += sum(1 for i in tree if deg[i] == 1)
    return total


def _a_pairs(graph):
    return [(e.src, e.trg) for e in graph.edges if e.kind == "a"]


def leaves_count(graph):
    """The leaf statistic of the A-edge subgraph on the full vertex set."""
    return leaf_count(graph.vertices, _a_pairs(graph))


# ---------------------------------------------------------------------------
# graph of deterministic components and classification


def a_components(graph):
    """Connected components of the A-edge subgraph (isolated vertices included)."""
    return _components(graph.vertices, _a_pairs(graph))


def gdc(graph):
    """Graph of deterministic components of a quotient graph.

    Vertices: the quotient vertices plus one node ("C", i) per A-component.
    Edges (undirected multiset): the X-edges plus one linking edge from each
    quotient vertex to its A-component.
    """
    comps = a_components(graph)
    where = {v: i for i, c in enumerate(comps) for v in c}
    vertices = list(graph.vertices) + [("C", i) for i in range(len(comps))]
    pairs = [(e.src, e.trg) for e in graph.edges if e.kind == "x"]
    pairs += [(v, ("C", where[v])) for v in graph.vertices]
    return vertices, pairs, comps


def bar(pairs):
    """Forget multiplicity: the set of unordered vertex pairs."""
    return {frozenset((u, v)) for u, v in pairs}


def prune(vertices, simple_edges):
    """Iteratively delete degree-one vertices of a simple undirected graph."""
    verts = set(vertices)
    edges = set(simple_edges)
    while True:
        deg = {v: 0 for v in verts}
        for e in edges:
            if len(e) == 1:
                (v,) = e
                deg[v] += 2
            else:
                for v in e:
                    deg[v] += 1
        drop = {v for v in verts if deg[v] == 1}
        if not drop:
            return verts, edges
        verts -= drop
        edges = {e for e in edges if not (e & drop)}


@dataclass(frozen=True)
class ComponentReport:
    vertices: frozenset  # quotient vertices of the component
    q1: Fraction
    q2: int
    q2p: Fraction
    x_multiplicities: tuple
    kind: str  # double_tree | double_unicyclic | two_four_tree | other
    has_multiplicity_one: bool

    @property
    def q(self):
        return self.q1 + self.q2 + self.q2p


@dataclass(frozen=True)
class TopoReport:
    components: tuple
    m_x: int  # total number of X-edges
    f_leaves: int  # leaf statistic of the A-subgraph

    @property
    def q(self):
        return -Fraction(self.m_x, 2) + Fraction(self.f_leaves, 2)

    @property
    def valid(self):
        return all(
            c.kind in ("double_unicyclic", "two_four_tree") for c in self.components
        )


def _component_leaf_stat(comp_vertices, a_pairs):
    sub = [p for p in a_pairs if p[0] in comp_vertices]
    return leaf_count(comp_vertices, sub)


def classify(graph):
    """Per-component topology report of a quotient graph."""
    verts, pairs, comps = gdc(graph)
    where = {v: i for i, c in enumerate(comps) for v in c}
    gdc_comps = _components(verts, pairs)
    apairs = _a_pairs(graph)

    x_groups = {}
    for e in graph.edges:
        if e.kind == "x":
            x_groups.setdefault(frozenset((e.src, e.trg)), []).append(e)

    reports = []
    for gcomp in gdc_comps:
        qverts = frozenset(v for v in gcomp if not (isinstance(v, tuple) and v and v[0] == "C"))
        acomp_ids = [i for i in range(len(comps)) if ("C", i) in gcomp]
        groups = [es for pair, es in x_groups.items() if pair <= gcomp]
        mults = tuple(sorted(len(es) for es in groups))
        nx = sum(mults)
        q1 = len(groups) - Fraction(nx, 2)
        q2 = len(acomp_ids) - len(groups)
        f_comp = 0
        for i in acomp_ids:
            f_comp += _component_leaf_stat(comps[i], apairs)
        q2p = Fraction(f_comp, 2) - len(acomp_ids)
        nbar = len(groups) + len(qverts)
        is_tree = len(gcomp) - nbar == 1
        is_unicyclic = len(gcomp) == nbar
        has_one = any(m == 1 for m in mults)
        if has_one:
            kind = "other"
        elif all(m == 2 for m in mults) and is_tree:
            kind = "double_tree"
        elif all(m == 2 for m in mults) and is_unicyclic:
            kind = "double_unicyclic"
        elif mults and mults[:-1] == (2,) * (len(mults) - 1) and mults[-1] == 4 and is_tree:
            kind = "two_four_tree"
        else:
            kind = "other"
        reports.append(
            ComponentReport(qverts, q1, q2, q2p, mults, kind, has_one)
        )
    m_x = sum(1 for e in graph.edges if e.kind == "x")
    return TopoReport(tuple(reports), m_x, leaves_count(graph))


# ---------------------------------------------------------------------------
# Wigner weights


def _x_group_moment(edges, laws):
    """Exact expectation of the product of the group's unnormalized entries."""
    e0 = edges[0]
    try:
        law = laws[e0.label]
    except KeyError:
        raise KeyError("no entry law supplied for Wigner id %r" % (e0.label,))
    if e0.src == e0.trg:
        return diagonal_moment(law, len(edges))
    lo, hi = sorted((e0.src, e0.trg))
    p = sum(1 for e in edges if e.src == hi)
    q = len(edges) - p
    return entry_moment(law, p, q)


def _r_expect(x_edges, laws):
    """E of the product of unnormalized entries over independent groups."""
    groups = {}
    for e in x_edges:
        groups.setdefault((frozenset((e.src, e.trg)), e.label), []).append(e)
    val = Fraction(1)
    for es in groups.values():
        m = _x_group_moment(es, laws)
        if m == 0:
            return Fraction(0)
        val *= m
    return val


def omega_X(graph, laws, order=1):
    """Wigner weight of a quotient graph, exact.

    Order 1 is the plain expectation of the entry product.  Order 2 is the
    alternating sum over subsets J of the trace cycles that implements the
    centering of each trace.
    """
    x_edges = [e for e in graph.edges if e.kind == "x"]
    if order == 1:
        return _r_expect(x_edges, laws)
    if order != 2:
        raise ValueError("order must be 1 or 2")
    n = graph.n_cycles
    by_cycle = {j: [e for e in x_edges if e.cycle == j] for j in range(n)}
    singles = {j: _r_expect(by_cycle[j], laws) for j in range(n)}
    total = Fraction(0)
    for mask in range(1 << n):
        inside = [j for j in range(n) if mask >> j & 1]
        outside = [j for j in range(n) if not mask >> j & 1]
        term = _r_expect([e for j in inside for e in by_cycle[j]], laws)
        if term == 0:
            continue
        for j in outside:
            term *= singles[j]
            if term == 0:
                break
        if term:
            total += (-1) ** len(outside) * term
    return total


# ---------------------------------------------------------------------------
# traces of A-graphs


def _einsum_component_trace(comp, a_edges, family):
    idx = {v: i for i, v in enumerate(sorted(comp, key=repr))}
    operands = []
    for e in a_edges:
        operands.append(family.letter_matrix(e.label))
        operands.append([idx[e.trg], idx[e.src]])
    operands.append([])
    return complex(np.einsum(*operands))


def graph_trace(graph, family):
    """Unrestricted trace: sum over all vertex labelings of the A-entry product."""
    a_edges = [e for e in graph.edges if e.kind == "a"]
    total = 1.0 + 0.0j
    for comp in _components(graph.vertices, [(e.src, e.trg) for e in a_edges]):
        es = [e for e in a_edges if e.src in comp]
        if not es:
            total *= family.N
        else:
            total *= _einsum_component_trace(comp, es, family)
    return total


def _mobius(part):
    out = 1
    for b in part:
        out *= (-1) ** (len(b) - 1) * math.factorial(len(b) - 1)
    return out


def _support_injective_trace(support, a_edges, family):
    total = []
    for part in set_partitions(sorted(support, key=repr)):
        vmap = {v: i for i, b in enumerate(part) for v in b}
        qedges = [Edge(vmap[e.src], vmap[e.trg], "a", e.label, e.cycle) for e in a_edges]
        g = LabeledGraph(tuple(range(len(part))), tuple(qedges), 0)
        total.append(_mobius(part) * graph_trace(g, family))
    return complex(
        math.fsum(t.real for t in total), math.fsum(t.imag for t in total)
    )


def _direct_injective_trace(support, a_edges, family):
    import itertools

    order = sorted(support, key=repr)
    idx = {v: i for i, v in enumerate(order)}
    mats = [(family.letter_matrix(e.label), idx[e.trg], idx[e.src]) for e in a_edges]
    total = 0.0 + 0.0j
    for psi in itertools.permutations(range(family.N), len(order)):
        term = 1.0 + 0.0j
        for m, t, s in mats:
            term *= m[psi[t], psi[s]]
            if term == 0:
                break
        total += term
    return total


def injective_trace(graph, family, method="mobius"):
    """Sum over injective vertex labelings of the A-edge entry product.

    Vertices untouched by A-edges contribute a falling-factorial count of
    the remaining distinct labels.  Both evaluation paths (partition Moebius
    inversion, direct enumeration) compute the same value.
    """
    n = family.N
    a_edges = [e for e in graph.edges if e.kind == "a"]
    support = {e.src for e in a_edges} | {e.trg for e in a_edges}
    isolated = len(set(graph.vertices)) - len(support)
    if len(set(graph.vertices)) > n:
        return 0.0 + 0.0j
    if method == "mobius":
        base = _support_injective_trace(support, a_edges, family) if support else 1.0
    elif method == "direct":
        base = _direct_injective_trace(support, a_edges, family) if support else 1.0
    else:
        raise ValueError("unknown method %r" % (method,))
    return base * math.perm(n - len(support), isolated)


# ---------------------------------------------------------------------------
# exact finite-N moments

PARTITION_VERTEX_CAP = 10
EXACT_N_CAP = 16


def exact_moment(graph, family, laws, vertex_cap=PARTITION_VERTEX_CAP):
    """Exact E[prod_j Tr M_j] by summing over all vertex partitions.

    The family's dimension N is the matrix size; the Wigner entry laws are
    given per Wigner id.  Cost grows like Bell(|V|), capped by vertex_cap.
    """
    nverts = len(graph.vertices)
    if nverts > vertex_cap:
        raise ValueError(
            "graph has %d vertices, above the partition cap %d" % (nverts, vertex_cap)
        )
    if family.N > EXACT_N_CAP:
        raise ValueError("exact oracle capped at N = %d" % EXACT_N_CAP)
    m_x = sum(1 for e in graph.edges if e.kind == "x")
    vals = []
    for part in set_partitions(graph.vertices):
        q = quotient(graph, part)
        r = _r_expect([e for e in q.edges if e.kind == "x"], laws)
        if r == 0:
            continue
        # a nonzero entry-moment product forces every group size even
        tr0 = injective_trace(q, family)
        if tr0 == 0:
            continue
        vals.append(float(r) * tr0 / family.N ** (m_x // 2))
    return complex(
        math.fsum(v.real for v in vals), math.fsum(v.imag for v in vals)
    )


def exact_tau2(p, q, family, laws, vertex_cap=PARTITION_VERTEX_CAP):
    """Exact covariance E[Tr P Tr Q] - E[Tr P] E[Tr Q] at finite N."""
    joint = build_cycle_graph([p, q])
    single_p = build_cycle_graph([p])
    single_q = build_cycle_graph([q])
    return (
        exact_moment(joint, family, laws, vertex_cap)
        - exact_moment(single_p, family, laws, vertex_cap)
        * exact_moment(single_q, family, laws, vertex_cap)
    )
