"""The 334-triangle graph: vertices are order-dividing-3 group elements,
with an edge between a and b exactly when (ab)^4 = e.

Also here: Kronecker (tensor) products, graph morphisms induced by mod-p
reduction, and a small-graph isomorphism search.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .elements import (
    DirectSumElement,
    GroupElement,
    IntMatrix3,
    ModMatrix,
    element_key,
    has_order_dividing_3,
    identity_like,
    mat3_mul,
    reduce_mod,
)
from .groups import ElementSet

BITSET_LIMIT = 4096  # dense bitmask adjacency only below this vertex count


class TriangleGraph:
    """An undirected graph with optional loops and per-vertex labels.

    Adjacency is frozen at construction: sorted neighbor tuples always, plus
    dense bitmask rows (one int per vertex) for graphs small enough that the
    exact solvers want them.
    """

    __slots__ = ("labels", "loops", "meta", "_neighbors", "_edges", "_masks", "_key_index")

    def __init__(self, labels: Sequence, edges: Iterable[tuple[int, int]],
                 loops: Iterable[int] = (), meta: dict | None = None):
        self.labels = tuple(labels)
        n = len(self.labels)
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for i, j in edges:
            if i == j:
                raise ValueError(f"self-edge ({i},{i}) must be passed via loops")
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"edge ({i},{j}) out of range for {n} vertices")
            nbrs[i].add(j)
            nbrs[j].add(i)
        self._neighbors = tuple(tuple(sorted(s)) for s in nbrs)
        self._edges = tuple((i, j) for i in range(n) for j in self._neighbors[i] if i < j)
        self.loops = frozenset(loops)
        for v in self.loops:
            if not 0 <= v < n:
                raise ValueError(f"loop vertex {v} out of range")
        self.meta = dict(meta or {})
        self._masks = None
        self._key_index = None

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def edge_count(self) -> int:
        return len(self._edges)

    def edges(self) -> tuple[tuple[int, int], ...]:
        """All edges (i, j) with i < j, lexicographically sorted."""
        return self._edges

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self._neighbors[v]

    def degree(self, v: int) -> int:
        """Neighbor count; loops do not contribute."""
        return len(self._neighbors[v])

    def has_edge(self, i: int, j: int) -> bool:
        if i == j:
            return i in self.loops
        row = self._neighbors[i]
        k = bisect_left(row, j)
        return k < len(row) and row[k] == j

    def adjacency_masks(self) -> list[int]:
        """Bitmask adjacency rows; only for graphs with <= 4096 vertices."""
        if self.n > BITSET_LIMIT:
            raise ValueError(f"bitmask adjacency limited to {BITSET_LIMIT} vertices")
        if self._masks is None:
            masks = [0] * self.n
            for i, row in enumerate(self._neighbors):
                m = 0
                for j in row:
                    m |= 1 << j
                masks[i] = m
            self._masks = masks
        return self._masks

    def vertex_of(self, element: GroupElement) -> int:
        """Index of the vertex labeled by this element (labels must be elements)."""
        if self._key_index is None:
            self._key_index = {element_key(lab): i for i, lab in enumerate(self.labels)}
        return self._key_index[element_key(element)]

    def degree_histogram(self) -> dict[int, int]:
        hist: dict[int, int] = {}
        for v in range(self.n):
            d = self.degree(v)
            hist[d] = hist.get(d, 0) + 1
        return hist

    def __repr__(self) -> str:
        return (f"TriangleGraph({self.n} vertices, {self.edge_count} edges, "
                f"{len(self.loops)} loops)")


def edge_predicate(x: GroupElement, y: GroupElement) -> bool:
    """True exactly when (xy)^4 = e.  Both arguments must satisfy a^3 = e.

    Matrix powers are computed exactly (no entry bound applies to the
    intermediate values of a predicate).
    """
    for name, v in (("x", x), ("y", y)):
        if not has_order_dividing_3(v):
            raise ValueError(f"edge predicate requires {name}^3 = e")
    return _product_order_divides_4(x, y)


def _product_order_divides_4(x: GroupElement, y: GroupElement) -> bool:
    if isinstance(x, IntMatrix3):
        z = mat3_mul(x.entries, y.entries)
        z2 = mat3_mul(z, z)
        return mat3_mul(z2, z2) == (1, 0, 0, 0, 1, 0, 0, 0, 1)
    if isinstance(x, ModMatrix) and x.dim == 3:
        p = x.p
        z = tuple(e % p for e in mat3_mul(x.entries, y.entries))
        z2 = tuple(e % p for e in mat3_mul(z, z))
        z4 = tuple(e % p for e in mat3_mul(z2, z2))
        return z4 == (1, 0, 0, 0, 1, 0, 0, 0, 1)
    from .elements import compose
    z = compose(x, y)
    z2 = compose(z, z)
    return compose(z2, z2).is_identity()


def build_delta334(elements: ElementSet, meta: dict | None = None) -> TriangleGraph:
    """Construct the 334-triangle graph over the given vertex elements.

    Every element must have order dividing 3.  Loops are recorded where a
    vertex is adjacent to itself (only the identity ever is).
    """
    verts = list(elements)
    for v in verts:
        if not has_order_dividing_3(v):
            raise ValueError(f"vertex {v!r} does not satisfy v^3 = e")
    n = len(verts)
    meta = dict(meta or {})
    meta.setdefault("vertex_count", n)

    if n > 200 and all(isinstance(v, ModMatrix) and v.dim == 3 for v in verts):
        edges, loops = _mod3_pairwise_edges(verts)
    else:
        edges = []
        loops = []
        for i in range(n):
            if _product_order_divides_4(verts[i], verts[i]):
                loops.append(i)
            for j in range(i + 1, n):
                if _product_order_divides_4(verts[i], verts[j]):
                    edges.append((i, j))
    return TriangleGraph(verts, edges, loops, meta)


def _mod3_pairwise_edges(verts: list[ModMatrix]) -> tuple[list, list]:
    """Vectorized all-pairs (AB)^4 = I test for uniform dim-3 mod-p vertices."""
    import numpy as np

    p = verts[0].p
    if any(v.p != p for v in verts):
        raise ValueError("mixed moduli in one vertex set")
    n = len(verts)
    arr = np.array([v.entries for v in verts], dtype=np.int64).reshape(n, 3, 3)
    ident = np.eye(3, dtype=np.int64)
    edges = []
    loops = []
    block = max(1, 4_000_000 // (n * 9))
    for start in range(0, n, block):
        stop = min(n, start + block)
        prod = np.matmul(arr[start:stop, None, :, :], arr[None, :, :, :]) % p
        prod = np.matmul(prod, prod) % p
        prod = np.matmul(prod, prod) % p
        hit = (prod == ident).all(axis=(2, 3))
        for bi, j in np.argwhere(hit):
            i = start + int(bi)
            j = int(j)
            if i < j:
                edges.append((i, j))
            elif i == j:
                loops.append(i)
    return edges, loops


def kronecker_product(g1: TriangleGraph, g2: TriangleGraph) -> TriangleGraph:
    """Tensor product: (a, b) ~ (a', b') iff a ~ a' and b ~ b'.

    Loops participate: a looped vertex is adjacent to itself, so G (x) on a
    single looped vertex is a copy of G.  Vertex (i, j) gets index i * n2 + j
    and label (label1[i], label2[j]).
    """
    n1, n2 = g1.n, g2.n
    adj1 = [set(g1.neighbors(i)) | ({i} if i in g1.loops else set()) for i in range(n1)]
    adj2 = [set(g2.neighbors(j)) | ({j} if j in g2.loops else set()) for j in range(n2)]
    labels = [(g1.labels[i], g2.labels[j]) for i in range(n1) for j in range(n2)]
    edges = []
    loops = []
    for i in range(n1):
        for j in range(n2):
            u = i * n2 + j
            for i2 in adj1[i]:
                for j2 in adj2[j]:
                    v = i2 * n2 + j2
                    if v > u:
                        edges.append((u, v))
                    elif v == u:
                        loops.append(u)
    meta = {"product_of": [g1.meta.get("source"), g2.meta.get("source")]}
    return TriangleGraph(labels, edges, loops, meta)


def kronecker_matches_direct_sum(product: TriangleGraph,
                                 direct: TriangleGraph) -> tuple[bool, str | None]:
    """Check the product lemma instance: the tensor product of the factor
    graphs must equal the direct-sum group's graph under the canonical
    vertex identification (a, b) <-> pair element.  Returns (ok, reason).

    Both graphs must include identity vertices or the identification is not
    even a bijection.
    """
    if product.n != direct.n:
        return False, f"vertex counts differ: {product.n} != {direct.n}"
    pi = []
    for lab in product.labels:
        pair = DirectSumElement(lab[0], lab[1])
        try:
            pi.append(direct.vertex_of(pair))
        except KeyError:
            return False, f"product vertex {lab!r} missing from direct-sum graph"
    if len(set(pi)) != len(pi):
        return False, "vertex identification is not injective"
    mapped_edges = {(min(pi[i], pi[j]), max(pi[i], pi[j])) for i, j in product.edges()}
    direct_edges = set(direct.edges())
    if mapped_edges != direct_edges:
        extra = sorted(mapped_edges - direct_edges)[:3]
        missing = sorted(direct_edges - mapped_edges)[:3]
        return False, f"edge sets differ (extra {extra}, missing {missing})"
    if {pi[v] for v in product.loops} != set(direct.loops):
        return False, "loop sets differ"
    return True, None


@dataclass(frozen=True)
class GraphMorphism:
    """A vertex map between two graphs; every domain edge maps to an edge."""

    domain: TriangleGraph
    codomain: TriangleGraph
    vertex_map: tuple[int, ...]


@dataclass
class MorphismReport:
    """Outcome of building a reduction-induced morphism.

    Failures are recorded, never silently dropped: an unpreserved edge or a
    merged adjacent pair would falsify the reduction lemma.
    """

    ok: bool
    morphism: GraphMorphism | None
    missing_vertices: list[int] = field(default_factory=list)
    unpreserved_edges: list[tuple[int, int]] = field(default_factory=list)
    merged_adjacent_pairs: list[tuple[int, int]] = field(default_factory=list)
    prime: int = 0


def induced_morphism(domain: TriangleGraph, p: int, codomain: TriangleGraph) -> MorphismReport:
    """The graph morphism induced by entrywise mod-p reduction.

    Domain vertices must be integer matrices; the codomain is the mod-p
    triangle graph.  Each domain vertex maps to its reduction's vertex; the
    report lists any vertex whose reduction is absent, any edge that fails to
    map to an edge, and any adjacent pair collapsed to one vertex.
    """
    report = MorphismReport(ok=True, morphism=None, prime=p)
    vmap: list[int] = []
    for i, lab in enumerate(domain.labels):
        if not isinstance(lab, IntMatrix3):
            raise ValueError("induced_morphism domain must have IntMatrix3 labels")
        reduced = reduce_mod(lab, p)
        try:
            vmap.append(codomain.vertex_of(reduced))
        except KeyError:
            report.missing_vertices.append(i)
            vmap.append(-1)
    for i, j in domain.edges():
        mi, mj = vmap[i], vmap[j]
        if mi < 0 or mj < 0:
            continue
        if mi == mj:
            report.merged_adjacent_pairs.append((i, j))
        elif not codomain.has_edge(mi, mj):
            report.unpreserved_edges.append((i, j))
    report.ok = not (report.missing_vertices or report.unpreserved_edges
                     or report.merged_adjacent_pairs)
    if report.ok:
        report.morphism = GraphMorphism(domain, codomain, tuple(vmap))
    return report


ISO_VERTEX_LIMIT = 100


def graph_isomorphic(g1: TriangleGraph, g2: TriangleGraph) -> list[int] | None:
    """An explicit edge-preserving bijection g1 -> g2, or None.

    Backtracking over degree classes with iterated neighborhood-label
    refinement; deterministic, and limited to 100 vertices per side.
    """
    if g1.n > ISO_VERTEX_LIMIT or g2.n > ISO_VERTEX_LIMIT:
        raise ValueError(f"isomorphism search limited to {ISO_VERTEX_LIMIT} vertices")
    if g1.n != g2.n or g1.edge_count != g2.edge_count or len(g1.loops) != len(g2.loops):
        return None
    n = g1.n
    lab1 = _refined_labels(g1)
    lab2 = _refined_labels(g2)
    if sorted(lab1) != sorted(lab2):
        return None

    candidates = [[v for v in range(n) if lab2[v] == lab1[u]] for u in range(n)]
    # most-constrained vertices first, preferring those adjacent to earlier picks
    order: list[int] = []
    placed = set()
    remaining = set(range(n))
    while remaining:
        touching = [u for u in remaining if any(w in placed for w in g1.neighbors(u))]
        pool = touching or list(remaining)
        u = min(pool, key=lambda u: (len(candidates[u]), u))
        order.append(u)
        placed.add(u)
        remaining.remove(u)

    mapping = [-1] * n
    used = [False] * n

    def backtrack(pos: int) -> bool:
        if pos == n:
            return True
        u = order[pos]
        for v in candidates[u]:
            if used[v]:
                continue
            if (u in g1.loops) != (v in g2.loops):
                continue
            ok = True
            for w in g1.neighbors(u):
                mw = mapping[w]
                if mw >= 0 and not g2.has_edge(v, mw):
                    ok = False
                    break
            if ok:
                # non-edges must also map to non-edges (counts match, but check
                # directly so partial maps stay consistent)
                deg_needed = g1.degree(u)
                if g2.degree(v) != deg_needed:
                    continue
                mapped_nbrs = sum(1 for w in g1.neighbors(u) if mapping[w] >= 0)
                v_mapped_nbrs = sum(1 for w in g2.neighbors(v) if used[w])
                if mapped_nbrs != v_mapped_nbrs:
                    continue
                mapping[u] = v
                used[v] = True
                if backtrack(pos + 1):
                    return True
                mapping[u] = -1
                used[v] = False
        return False

    if backtrack(0):
        return mapping
    return None


def _refined_labels(g: TriangleGraph, rounds: int = 3) -> list[int]:
    labels = [(g.degree(v), v in g.loops) for v in range(g.n)]
    for _ in range(rounds):
        table: dict = {}
        nxt = []
        for v in range(g.n):
            sig = (labels[v], tuple(sorted(labels[w] for w in g.neighbors(v))))
            nxt.append(table.setdefault(sig, len(table)))
        if len(set(nxt)) == len(set(labels)):
            labels = nxt
            break
        labels = nxt
    canon: dict = {}
    return [canon.setdefault(l, len(canon)) for l in labels]


def identity_element_of(elements: ElementSet) -> GroupElement:
    return identity_like(elements[0])
