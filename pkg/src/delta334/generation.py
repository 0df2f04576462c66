"""Finite portions of the SL3(Z) triangle graph.

Vertices come from a conjugation-closure BFS: starting from seed matrices of
order three (the classic generator pairs' order-3 members plus a parametric
family), repeatedly conjugate by the elementary matrices E_ij(+-1) and close
under inverses, discarding anything whose entries leave the configured bound.
Conjugation preserves order exactly, so every vertex has order three; the
identity never appears.

Edges are built with a trace prefilter: if (AB)^4 = I then AB has order
dividing 4, its eigenvalues are a subset of {1, -1, i, -i} closed under
conjugation with product 1, so trace(AB) is 3, -1, or 1.  The same holds
for s = trace(adj(AB)), the second characteristic coefficient, and s must
equal t = trace(AB).  Conversely det(AB) = 1 with (t, s) = (1, 1) forces
the characteristic polynomial (x-1)(x^2+1), squarefree, so (AB)^4 = I
outright; (t, s) = (-1, -1) needs (AB)^2 = I and (t, s) = (3, 3) needs
AB = I, i.e. B = A^(-1).  Both traces are Gram-matrix products (one over
the matrices, one over their adjugates), computed blockwise in numpy,
exactly in int64 when the entry bound permits; only the (-1, -1) survivors
need an arbitrary-precision check.

The mod-p verification program from the source material runs against these
portions: no vertex reduces to the identity mod p, every edge maps to an
edge with distinct endpoints, and the pulled-back coloring of the mod-2
graph is proper, bounding the portion's chromatic number by eight.
"""

from __future__ import annotations

import json
import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .cliques import CliqueResult, clique_number, verify_clique
from .coloring import (Coloring, ChromaticResult, chromatic_number_exact,
                       improve_coloring, lift_coloring)
from .elements import (DEFAULT_ENTRY_LIMIT, IntMatrix3, MAT3_IDENTITY,
                       element_key, has_order_dividing_3, mat3_mul,
                       parametric_order3, reduce_mod, serialize_element)
from .graph import (GraphMorphism, MorphismReport, TriangleGraph,
                    build_delta334, induced_morphism)
from .groups import order3_vertices, parse_group_spec

# Order-3 members of the generator pairs quoted in the source material's
# introduction.  The 2x2 pair there has no order-3 members and contributes
# nothing; these four all satisfy m^3 = I.
INTRO_ORDER3_SEEDS = (
    IntMatrix3((0, 0, 1, 1, 0, 0, 0, 1, 0)),
    IntMatrix3((1, 2, 3, 0, -2, -1, 0, 3, 1)),
    IntMatrix3((1, 1, 2, 0, 1, 1, 0, -3, -2)),
    IntMatrix3((-2, 0, -1, -5, 1, -1, 3, 0, 1)),
)

DEFAULT_CONJ_DEPTH = 6
DEFAULT_ENTRY_BOUND = 10 ** 9
DEFAULT_TARGET_VERTICES = 25_000
DEFAULT_FAMILY_BOUND = 1

VERIFICATION_PRIMES = (2, 3, 5)

# E_ij(s) for i != j, s = +-1, as (matrix, inverse) entry tuples
_ELEMENTARY_CONJUGATORS = tuple(
    (tuple(1 if r == c else (s if (r, c) == (i, j) else 0)
           for r in range(3) for c in range(3)),
     tuple(1 if r == c else (-s if (r, c) == (i, j) else 0)
           for r in range(3) for c in range(3)))
    for i in range(3) for j in range(3) if i != j for s in (1, -1)
)


def family_seeds(family_bound: int) -> list[IntMatrix3]:
    """Parametric-family members over |a|, |b|, |c| <= family_bound.
    A bound of zero means no family contribution at all."""
    if family_bound <= 0:
        return []
    rng = range(-family_bound, family_bound + 1)
    return [parametric_order3(a, b, c) for a, b, c in product(rng, rng, rng)]


def default_seeds(family_bound: int = DEFAULT_FAMILY_BOUND) -> list[IntMatrix3]:
    """Intro-pair order-3 members plus the parametric family over
    |a|, |b|, |c| <= family_bound, deduplicated and key-sorted."""
    seen: dict[bytes, IntMatrix3] = {}
    for m in INTRO_ORDER3_SEEDS:
        seen.setdefault(element_key(m), m)
    for m in family_seeds(family_bound):
        seen.setdefault(element_key(m), m)
    return [seen[k] for k in sorted(seen)]


def load_seeds_file(path) -> list[IntMatrix3]:
    """Seeds file: a JSON list of row-major 9-integer arrays."""
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    if not isinstance(doc, list):
        raise ValueError("seeds file must be a JSON list of 9-integer arrays")
    out = []
    for i, entry in enumerate(doc):
        if not (isinstance(entry, list) and len(entry) == 9
                and all(isinstance(x, int) for x in entry)):
            raise ValueError(f"seed {i} is not a 9-integer array")
        out.append(IntMatrix3(entry))
    return out


@dataclass(frozen=True)
class GenerationConfig:
    """Knobs for the conjugation-closure BFS.

    seeds None means the built-in intro-pair seeds; an explicit tuple
    replaces them (an empty tuple drops them).  The parametric family is
    controlled separately by family_bound and is always added on top;
    family_bound 0 disables it.  Every seed must have order exactly 3;
    entry_bound must stay within the carrier's own overflow contract.
    """

    seeds: tuple[IntMatrix3, ...] | None = None
    conj_depth: int = DEFAULT_CONJ_DEPTH
    entry_bound: int = DEFAULT_ENTRY_BOUND
    target_vertices: int = DEFAULT_TARGET_VERTICES
    family_bound: int = DEFAULT_FAMILY_BOUND

    def __post_init__(self):
        if self.conj_depth < 0:
            raise ValueError("conj_depth must be >= 0")
        if not 0 < self.entry_bound <= DEFAULT_ENTRY_LIMIT:
            raise ValueError(f"entry_bound must be in (0, {DEFAULT_ENTRY_LIMIT}]")
        if self.target_vertices < 1:
            raise ValueError("target_vertices must be >= 1")
        if self.family_bound < 0:
            raise ValueError("family_bound must be >= 0")
        if self.seeds is not None:
            object.__setattr__(self, "seeds", tuple(self.seeds))
            for m in self.seeds:
                if m.is_identity() or not has_order_dividing_3(m):
                    raise ValueError(f"seed {m!r} does not have order 3")
            if not self.seeds and self.family_bound == 0:
                raise ValueError("empty seed set")

    def resolved_seeds(self) -> list[IntMatrix3]:
        base = list(self.seeds) if self.seeds is not None else list(INTRO_ORDER3_SEEDS)
        seen: dict[bytes, IntMatrix3] = {}
        for m in base + family_seeds(self.family_bound):
            seen.setdefault(element_key(m), m)
        return [seen[k] for k in sorted(seen)]

    def to_json_dict(self) -> dict:
        return {
            "seeds": [serialize_element(m) for m in self.resolved_seeds()],
            "explicit_seeds": self.seeds is not None,
            "conj_depth": self.conj_depth,
            "entry_bound": self.entry_bound,
            "target_vertices": self.target_vertices,
            "family_bound": self.family_bound,
        }


@dataclass
class GenerationStats:
    """What the BFS and the edge pass did, for run-to-run comparability."""

    frontier_sizes: list[int] = field(default_factory=list)
    entry_bound_rejects: int = 0
    duplicate_hits: int = 0
    max_abs_entry: int = 0
    pairs_total: int = 0
    prefilter_candidates: int = 0  # pairs whose trace lands in {3, -1, 1}
    exact_checks: int = 0  # survivors that still needed a matrix power test
    edges_found: int = 0

    def to_json_dict(self) -> dict:
        return {
            "frontier_sizes": list(self.frontier_sizes),
            "entry_bound_rejects": self.entry_bound_rejects,
            "duplicate_hits": self.duplicate_hits,
            "max_abs_entry": self.max_abs_entry,
            "pairs_total": self.pairs_total,
            "prefilter_candidates": self.prefilter_candidates,
            "exact_checks": self.exact_checks,
            "edges_found": self.edges_found,
        }


@dataclass
class PortionGraph:
    """A built portion: the graph plus how it was made."""

    graph: TriangleGraph
    config: GenerationConfig
    stats: GenerationStats


def generate_portion(cfg: GenerationConfig) -> tuple[list[IntMatrix3], GenerationStats]:
    """Conjugation-closure BFS.  Returns (key-sorted vertices, stats).

    The vertex set is closed under inverses by construction: a matrix is
    admitted only together with its inverse, and only when both fit the
    entry bound.  Deterministic: layers are expanded in key order with a
    fixed conjugator order, and the target cutoff applies at admission time.
    """
    seeds = cfg.resolved_seeds()
    if not seeds:
        raise ValueError("empty seed set: no intro members, no family, none supplied")
    bound = cfg.entry_bound
    stats = GenerationStats()
    admitted: dict[bytes, tuple] = {}

    def admit(entries: tuple) -> bool:
        key = _entries_key(entries)
        if key in admitted:
            stats.duplicate_hits += 1
            return False
        inv = mat3_mul(entries, entries)  # order 3: inverse is the square
        hi = max(max(abs(e) for e in entries), max(abs(e) for e in inv))
        if hi > bound:
            stats.entry_bound_rejects += 1
            return False
        assert entries != MAT3_IDENTITY
        assert mat3_mul(entries, inv) == MAT3_IDENTITY
        admitted[key] = entries
        ikey = _entries_key(inv)
        if ikey not in admitted:
            admitted[ikey] = inv
        stats.max_abs_entry = max(stats.max_abs_entry, hi)
        return True

    before = len(admitted)
    for m in seeds:
        admit(m.entries)
    frontier = sorted(admitted)
    stats.frontier_sizes.append(len(admitted) - before)

    for _ in range(cfg.conj_depth):
        if len(admitted) >= cfg.target_vertices or not frontier:
            break
        before = len(admitted)
        for key in frontier:
            v = admitted[key]
            for conj, conj_inv in _ELEMENTARY_CONJUGATORS:
                w = mat3_mul(conj, mat3_mul(v, conj_inv))
                admit(w)
                if len(admitted) >= cfg.target_vertices:
                    break
            if len(admitted) >= cfg.target_vertices:
                break
        # dict preserves admission order, so this layer's vertices (including
        # inverses added alongside) are exactly the tail
        frontier = sorted(list(admitted)[before:])
        stats.frontier_sizes.append(len(admitted) - before)

    vertices = sorted((IntMatrix3(e) for e in admitted.values()), key=element_key)
    return vertices, stats


def _entries_key(entries: tuple) -> bytes:
    return struct.pack("<9q", *entries)


def build_portion_edges(vertices, cfg: GenerationConfig | None = None,
                        stats: GenerationStats | None = None,
                        threads: int = 1,
                        validate: bool = True) -> PortionGraph:
    """All-pairs adjacency with the trace prefilter; exact (AB)^4 = I checks
    on the survivors.  Edge blocks may run on worker threads; the merged
    edge list is independent of the thread count."""
    verts = sorted(vertices, key=element_key)
    if validate:
        for v in verts:
            if v.is_identity() or not has_order_dividing_3(v):
                raise ValueError(f"portion vertex {v!r} does not have order 3")
    cfg = cfg or GenerationConfig()
    stats = stats or GenerationStats()
    n = len(verts)
    stats.pairs_total = n * (n - 1) // 2

    entries = [v.entries for v in verts]
    candidates_count, exact_checks, edges = _edges_with_prefilter(entries, threads)
    stats.prefilter_candidates = candidates_count
    stats.exact_checks = exact_checks
    stats.edges_found = len(edges)
    if entries:
        stats.max_abs_entry = max(stats.max_abs_entry,
                                  max(max(abs(e) for e in row) for row in entries))

    meta = {
        "source": "sl3z-portion",
        "generation": {"config": cfg.to_json_dict(), "stats": stats.to_json_dict()},
    }
    graph = TriangleGraph(verts, edges, meta=meta)
    return PortionGraph(graph, cfg, stats)


_GOOD_TRACES = (3, -1, 1)


def _transposed_flat(arr: np.ndarray, n: int) -> np.ndarray:
    # trace(A @ B) is the dot product of A flattened with B-transposed
    # flattened, so one Gram product gives all pairwise traces
    return np.ascontiguousarray(arr.reshape(n, 3, 3).transpose(0, 2, 1).reshape(n, 9))


def _adjugate_entries(m: tuple) -> tuple:
    a, b, c, d, e, f, g, h, i = m
    return (e * i - f * h, c * h - b * i, b * f - c * e,
            f * g - d * i, a * i - c * g, c * d - a * f,
            d * h - e * g, b * g - a * h, a * e - b * d)


def _edges_with_prefilter(entries: list[tuple], threads: int):
    """(trace candidates, exact power checks, sorted edges)."""
    n = len(entries)
    if n < 2:
        return 0, 0, []
    maxabs = max(max(abs(e) for e in row) for row in entries)
    trace_exact = 9 * maxabs * maxabs < 2 ** 63
    adj_exact = 9 * (2 * maxabs * maxabs) ** 2 < 2 ** 63

    inv_idx = _inverse_indices(entries)
    block_size = max(1, min(1024, (1 << 22) // max(n, 1)))
    blocks = [slice(s, min(s + block_size, n)) for s in range(0, n, block_size)]

    if trace_exact:
        arr = np.array(entries, dtype=np.int64)
        arr_t = _transposed_flat(arr, n)
        if adj_exact:
            adj = np.array([_adjugate_entries(row) for row in entries], dtype=np.int64)
            adj_t = _transposed_flat(adj, n)
        work = lambda blk: _work_int(blk, entries, arr, arr_t,
                                     adj_t if adj_exact else None,
                                     adj if adj_exact else None, inv_idx,
                                     arr.reshape(n, 3, 3) if adj_exact else None)
    else:
        arr = np.array(entries, dtype=np.float64)
        arr_t = _transposed_flat(arr, n)
        slack = max(100.0, 9.0 * maxabs * maxabs * 1e-9)
        work = lambda blk: _work_float(blk, entries, arr, arr_t, slack)

    total_cand = 0
    total_checks = 0
    all_edges: list[tuple[int, int]] = []
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(work, blocks))
    else:
        results = [work(blk) for blk in blocks]
    for cand, checks, found in results:
        total_cand += cand
        total_checks += checks
        all_edges.extend(found)
    all_edges.sort()
    return total_cand, total_checks, all_edges


def _inverse_indices(entries: list[tuple]) -> np.ndarray:
    index = {row: i for i, row in enumerate(entries)}
    inv = np.full(len(entries), -1, dtype=np.int64)
    for i, row in enumerate(entries):
        j = index.get(mat3_mul(row, row))
        if j is not None:
            inv[i] = j
    return inv


def _work_int(block: slice, entries, arr, arr_t, adj_t, adj, inv_idx, arr3):
    t1 = arr[block] @ arr_t.T
    upper = np.arange(t1.shape[1])[None, :] > np.arange(block.start, block.stop)[:, None]
    good = ((t1 == 3) | (t1 == -1) | (t1 == 1)) & upper
    cand = int(good.sum())
    found: list[tuple[int, int]] = []
    checks = 0
    if adj_t is not None:
        t2 = adj[block] @ adj_t.T
        # (1, 1): characteristic polynomial is (x-1)(x^2+1); edge outright
        rows, cols = np.nonzero((t1 == 1) & (t2 == 1) & upper)
        found.extend((block.start + r, j) for r, j in zip(rows.tolist(), cols.tolist()))
        # (3, 3): AB = I exactly when B is A's inverse
        rows, cols = np.nonzero((t1 == 3) & (t2 == 3) & upper
                                & (np.arange(t1.shape[1])[None, :]
                                   == inv_idx[block][:, None]))
        found.extend((block.start + r, j) for r, j in zip(rows.tolist(), cols.tolist()))
        # (-1, -1): edge exactly when (AB)^2 = I; safe in int64 since the
        # adj_exact tier bounds entries well below the fourth-power limit
        rows, cols = np.nonzero((t1 == -1) & (t2 == -1) & upper)
        checks = int(rows.size)
        if rows.size:
            gi = rows + block.start
            prod = arr3[gi] @ arr3[cols]
            sq = prod @ prod
            ok = (sq == np.eye(3, dtype=np.int64)).all(axis=(1, 2))
            found.extend(zip(gi[ok].tolist(), cols[ok].tolist()))
    else:
        rows, cols = np.nonzero(good)
        for r, j in zip(rows.tolist(), cols.tolist()):
            i = block.start + r
            checks += 1
            if _adjacent_exact(entries[i], entries[j]):
                found.append((i, j))
    return cand, checks, found


def _work_float(block: slice, entries, arr, arr_t, slack):
    tr = arr[block] @ arr_t.T
    upper = np.arange(tr.shape[1])[None, :] > np.arange(block.start, block.stop)[:, None]
    mask = np.zeros(tr.shape, dtype=bool)
    for t in _GOOD_TRACES:
        mask |= np.abs(tr - t) <= slack
    mask &= upper
    cand = 0
    checks = 0
    found = []
    rows, cols = np.nonzero(mask)
    for r, j in zip(rows.tolist(), cols.tolist()):
        i = block.start + r
        cand += 1
        checks += 1
        if _adjacent_exact(entries[i], entries[j]):
            found.append((i, j))
    return cand, checks, found


def _adjacent_exact(a: tuple, b: tuple) -> bool:
    """Exact (AB)^4 = I decision through the characteristic polynomial."""
    p = mat3_mul(a, b)
    t = p[0] + p[4] + p[8]
    if t not in _GOOD_TRACES:
        return False
    s = (p[4] * p[8] - p[5] * p[7]
         + p[0] * p[8] - p[2] * p[6]
         + p[0] * p[4] - p[1] * p[3])
    if s != t:
        return False
    if t == 1:
        return True
    if t == 3:
        return p == MAT3_IDENTITY
    return mat3_mul(p, p) == MAT3_IDENTITY


def generate_and_build(cfg: GenerationConfig, threads: int = 1) -> PortionGraph:
    vertices, stats = generate_portion(cfg)
    return build_portion_edges(vertices, cfg, stats, threads=threads, validate=False)


@dataclass
class IdentityReductionReport:
    """Mod-p identity-reduction scan: the lemma predicts zero violations."""

    p: int
    checked: int
    violations: list[int]  # vertex indices whose reduction is the identity

    @property
    def ok(self) -> bool:
        return not self.violations


def verify_no_identity_reduction(vertices, p: int) -> IdentityReductionReport:
    violations = []
    verts = list(vertices)
    for i, v in enumerate(verts):
        if reduce_mod(v, p).is_identity():
            violations.append(i)
    return IdentityReductionReport(p, len(verts), violations)


@dataclass
class EdgePreservationReport:
    """Mod-p edge preservation: every portion edge must map to a codomain
    edge with distinct endpoints."""

    p: int
    checked_edges: int
    morphism_report: MorphismReport

    @property
    def ok(self) -> bool:
        return self.morphism_report.ok

    @property
    def morphism(self) -> GraphMorphism | None:
        return self.morphism_report.morphism


def verify_edge_preservation(portion, p: int,
                             codomain: TriangleGraph | None = None) -> EdgePreservationReport:
    graph = portion.graph if isinstance(portion, PortionGraph) else portion
    if codomain is None:
        codomain = mod_p_codomain(p)
    report = induced_morphism(graph, p, codomain)
    return EdgePreservationReport(p, graph.edge_count, report)


def mod_p_codomain(p: int) -> TriangleGraph:
    """The full mod-p triangle graph (identity dropped)."""
    return build_delta334(order3_vertices(parse_group_spec(f"SL3({p})")))


@dataclass
class PortionChromaticBounds:
    """Chromatic bounds for a portion with all witnesses attached.

    upper comes from the better of the lifted mod-2 coloring and the
    portion's own search; lower from the clique and any infeasibility
    certificate.  A clique of size four would contradict the source
    material's conjecture: it is flagged as a discovery, not an error.
    """

    lower: int
    upper: int
    exact: bool
    clique: CliqueResult
    lifted: Coloring | None
    own: ChromaticResult
    best_coloring: Coloring
    clique_discovery: bool  # a clique larger than 3 turned up

    @property
    def chi(self) -> int | None:
        return self.lower if self.exact and self.lower == self.upper else None


def portion_chromatic_bounds(portion, *,
                             codomain: TriangleGraph | None = None,
                             codomain_coloring: Coloring | None = None,
                             clique_budget: int | None = None,
                             color_time_budget: float | None = 120.0,
                             color_node_budget: int | None = None) -> PortionChromaticBounds:
    """Certified chromatic bounds for a portion graph.

    Lower bound: exact clique plus whatever the bounded exact search proves.
    Upper bound: best of the exact search's coloring, the mod-2 lifted
    coloring, and an iterated-greedy refinement of the lift.  The exact
    search is time-boxed (default 120s; pass None to lift the cap) because
    portion cores routinely exceed what branch-and-bound can exhaust.
    """
    graph = portion.graph if isinstance(portion, PortionGraph) else portion

    lifted = None
    if codomain is None:
        codomain = mod_p_codomain(2)
    try:
        morphism = induced_morphism(graph, 2, codomain).morphism
    except ValueError:
        morphism = None
    if morphism is not None:
        if codomain_coloring is None:
            codomain_coloring = chromatic_number_exact(codomain).coloring
        if codomain_coloring is not None:
            lifted = lift_coloring(morphism, codomain_coloring)

    kwargs = {}
    if clique_budget is not None:
        kwargs["node_budget"] = clique_budget
    clique = clique_number(graph, **kwargs)
    if clique.witness:
        assert verify_clique(graph, clique.witness)

    color_kwargs: dict = {"time_budget": color_time_budget}
    if color_node_budget is not None:
        color_kwargs["node_budget"] = color_node_budget
    own = chromatic_number_exact(graph, **color_kwargs)

    refined = None
    if lifted is not None and lifted.proper:
        refined = improve_coloring(graph, lifted, rounds=60)

    lower = max(clique.size if clique.exact else 1, own.lower)
    candidates = [c for c in (own.coloring, lifted, refined)
                  if c is not None and c.proper]
    best = min(candidates, key=lambda c: c.num_colors)
    upper = min(own.upper, best.num_colors)
    exact = lower == upper and (own.exact or clique.exact)
    return PortionChromaticBounds(
        lower=lower, upper=upper, exact=exact,
        clique=clique, lifted=lifted, own=own, best_coloring=best,
        clique_discovery=clique.size > 3,
    )
