"""Small ad hoc graphs for exercising the solvers.

TriangleGraph does not care what the labels are, so plain integers do."""

from delta334.graph import TriangleGraph


def cycle_graph(n):
    if n < 3:
        raise ValueError("need n >= 3")
    return TriangleGraph(range(n),
                         [(i, i + 1) for i in range(n - 1)] + [(0, n - 1)])


def complete_graph(n):
    return TriangleGraph(range(n),
                         [(i, j) for i in range(n) for j in range(i + 1, n)])


def complete_bipartite(a, b):
    return TriangleGraph(range(a + b),
                         [(i, a + j) for i in range(a) for j in range(b)])


def path_graph(n):
    return TriangleGraph(range(n), [(i, i + 1) for i in range(n - 1)])


def star_graph(n):
    """One hub, n leaves."""
    return TriangleGraph(range(n + 1), [(0, i) for i in range(1, n + 1)])


def petersen_graph():
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return TriangleGraph(range(10), outer + spokes + inner)


def disjoint_union(g1, g2):
    off = g1.n
    edges = list(g1.edges()) + [(i + off, j + off) for i, j in g2.edges()]
    loops = list(g1.loops) + [v + off for v in g2.loops]
    return TriangleGraph(list(g1.labels) + list(g2.labels), edges, loops)
