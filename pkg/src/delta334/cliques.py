"""Maximum clique via Bron-Kerbosch with pivoting.

Bitmask sets below the dense-graph size limit, Python sets with a degeneracy
outer loop above it.  The search is exact unless the node budget runs out,
in which case the best clique found so far is returned flagged as a lower
bound only.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graph import BITSET_LIMIT, TriangleGraph

DEFAULT_CLIQUE_BUDGET = 20_000_000


@dataclass
class CliqueResult:
    size: int
    witness: tuple[int, ...]
    exact: bool          # False when the node budget was exhausted
    nodes: int


class _Budget:
    __slots__ = ("left",)

    def __init__(self, limit: int):
        self.left = limit


def clique_number(graph: TriangleGraph,
                  node_budget: int = DEFAULT_CLIQUE_BUDGET) -> CliqueResult:
    """Exact maximum clique (loops ignored); budget exhaustion degrades the
    result to a certified lower bound."""
    n = graph.n
    if n == 0:
        return CliqueResult(0, (), True, 0)
    budget = _Budget(node_budget)
    if n <= BITSET_LIMIT:
        best = _bk_bitmask(graph, budget)
    else:
        best = _bk_sets(graph, budget)
    return CliqueResult(len(best), tuple(sorted(best)), budget.left > 0,
                        node_budget - max(budget.left, 0))


def _bk_bitmask(graph: TriangleGraph, budget: _Budget) -> list[int]:
    masks = graph.adjacency_masks()
    n = graph.n
    best: list[int] = []

    def expand(r: list[int], p: int, x: int):
        nonlocal best
        budget.left -= 1
        if budget.left <= 0:
            return
        if p == 0 and x == 0:
            if len(r) > len(best):
                best = r[:]
            return
        if len(r) + bin(p).count("1") <= len(best):
            return
        both = p | x
        pivot = -1
        pivot_hits = -1
        m = both
        while m:
            u = (m & -m).bit_length() - 1
            m &= m - 1
            hits = bin(p & masks[u]).count("1")
            if hits > pivot_hits:
                pivot_hits = hits
                pivot = u
        cand = p & ~masks[pivot]
        while cand:
            vbit = cand & -cand
            v = vbit.bit_length() - 1
            cand &= cand - 1
            r.append(v)
            expand(r, p & masks[v], x & masks[v])
            r.pop()
            p &= ~vbit
            x |= vbit
            if budget.left <= 0:
                return

    expand([], (1 << n) - 1, 0)
    return best


def _bk_sets(graph: TriangleGraph, budget: _Budget) -> list[int]:
    n = graph.n
    nbrs = [frozenset(graph.neighbors(v)) for v in range(n)]
    order = _degeneracy_order(graph)
    pos = {v: i for i, v in enumerate(order)}
    best: list[int] = []

    def expand(r: list[int], p: set[int], x: set[int]):
        nonlocal best
        budget.left -= 1
        if budget.left <= 0:
            return
        if not p and not x:
            if len(r) > len(best):
                best = r[:]
            return
        if len(r) + len(p) <= len(best):
            return
        pivot = max(p | x, key=lambda u: len(p & nbrs[u]))
        for v in sorted(p - nbrs[pivot]):
            r.append(v)
            expand(r, p & nbrs[v], x & nbrs[v])
            r.pop()
            p.discard(v)
            x.add(v)
            if budget.left <= 0:
                return

    for v in order:
        later = {w for w in nbrs[v] if pos[w] > pos[v]}
        earlier = {w for w in nbrs[v] if pos[w] < pos[v]}
        expand([v], later, earlier)
        if budget.left <= 0:
            break
    return best


def _degeneracy_order(graph: TriangleGraph) -> list[int]:
    n = graph.n
    deg = [graph.degree(v) for v in range(n)]
    removed = [False] * n
    buckets: list[set[int]] = [set() for _ in range(max(deg, default=0) + 1)]
    for v in range(n):
        buckets[deg[v]].add(v)
    order = []
    cursor = 0
    for _ in range(n):
        while cursor < len(buckets) and not buckets[cursor]:
            cursor += 1
        if cursor >= len(buckets):
            break
        v = min(buckets[cursor])
        buckets[cursor].remove(v)
        removed[v] = True
        order.append(v)
        for w in graph.neighbors(v):
            if not removed[w]:
                buckets[deg[w]].discard(w)
                deg[w] -= 1
                buckets[deg[w]].add(w)
                if deg[w] < cursor:
                    cursor = deg[w]
    return order


def verify_clique(graph: TriangleGraph, vertices: tuple[int, ...]) -> bool:
    """Every pair in the witness must be an edge."""
    vs = list(vertices)
    for i in range(len(vs)):
        for j in range(i + 1, len(vs)):
            if not graph.has_edge(vs[i], vs[j]):
                return False
    return True
