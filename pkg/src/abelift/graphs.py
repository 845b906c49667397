"""Regular base graphs, signings, abelian lifts, walk operators.

Vertices are 0-based ints internally; JSON payloads use 1-based labels.
Edges are stored canonically as (u, v) with u < v, sorted lexicographically,
and directed edge ids are 2e (u -> v) and 2e + 1 (v -> u).
A lifted vertex (v, i) gets index v * fiber + i.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import serial
from .groups import AbelianGroup

MAX_DENSE_DIM = 4096


class RegularGraph:
    """Simple d-regular graph stored as an (n, d) neighbor table."""

    def __init__(self, adj: Sequence[Sequence[int]]):
        a = np.asarray(adj, dtype=np.int64)
        if a.ndim != 2:
            raise ValueError("adjacency rows must form a rectangular table")
        n, d = a.shape
        if n < 2 or d < 1:
            raise ValueError("need at least two vertices and degree one")
        if a.min() < 0 or a.max() >= n:
            raise ValueError("neighbor label out of range")
        pairs = set()
        for u in range(n):
            row = a[u]
            if np.any(row == u):
                raise ValueError("self-loop found")
            if len(set(row.tolist())) != d:
                raise ValueError("repeated neighbor (multi-edge)")
            for v in row:
                pairs.add((u, int(v)))
        for u, v in pairs:
            if (v, u) not in pairs:
                raise ValueError("adjacency is not symmetric")
        self.adj = a
        self.n = n
        self.d = d
        self.edges = sorted((min(u, v), max(u, v)) for u, v in pairs if u < v)
        self.m = len(self.edges)
        if 2 * self.m != n * d:
            raise ValueError("edge count does not match degree")
        self._eid = {e: i for i, e in enumerate(self.edges)}
        self.eid_table = np.empty((n, d), dtype=np.int64)
        for u in range(n):
            for j in range(d):
                v = int(a[u, j])
                self.eid_table[u, j] = self._eid[(min(u, v), max(u, v))]

    def edge_id(self, u: int, v: int) -> int:
        return self._eid[(min(u, v), max(u, v))]

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self._eid

    def directed_index(self, u: int, v: int) -> int:
        """Index of the directed edge u -> v in the 2m ordering."""
        e = self.edge_id(u, v)
        return 2 * e if u < v else 2 * e + 1

    def directed_edges(self) -> list[tuple[int, int]]:
        out = []
        for u, v in self.edges:
            out.append((u, v))
            out.append((v, u))
        return out

    def adjacency_matrix(self) -> np.ndarray:
        mat = np.zeros((self.n, self.n), dtype=np.float64)
        for u, v in self.edges:
            mat[u, v] = 1.0
            mat[v, u] = 1.0
        return mat

    def neighbor_lists(self) -> list[list[int]]:
        return [list(map(int, row)) for row in self.adj]

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "d": self.d,
            "adj": [[int(v) + 1 for v in row] for row in self.adj],
        }

    @staticmethod
    def from_json(payload: dict) -> "RegularGraph":
        n, d = int(payload["n"]), int(payload["d"])
        adj = payload["adj"]
        if len(adj) != n or any(len(r) != d for r in adj):
            raise ValueError("adjacency table shape does not match n, d")
        return RegularGraph([[int(v) - 1 for v in row] for row in adj])

    def content_hash(self) -> str:
        return serial.object_hash(self.to_json())

    def __repr__(self):
        return f"RegularGraph(n={self.n}, d={self.d})"


def cycle_graph(n: int) -> RegularGraph:
    if n < 3:
        raise ValueError("cycle needs n >= 3")
    return RegularGraph([[(i - 1) % n, (i + 1) % n] for i in range(n)])


def complete_graph(n: int) -> RegularGraph:
    if n < 2:
        raise ValueError("complete graph needs n >= 2")
    return RegularGraph([[v for v in range(n) if v != u] for u in range(n)])


def petersen_graph() -> RegularGraph:
    rows = []
    for i in range(5):
        rows.append([(i - 1) % 5, (i + 1) % 5, i + 5])
    for i in range(5):
        rows.append([5 + (i - 2) % 5, 5 + (i + 2) % 5, i])
    return RegularGraph(rows)


def disjoint_union(g1: RegularGraph, g2: RegularGraph) -> RegularGraph:
    if g1.d != g2.d:
        raise ValueError("degrees differ")
    rows = g1.neighbor_lists() + [[v + g1.n for v in row]
                                  for row in g2.neighbor_lists()]
    return RegularGraph(rows)


def random_regular(n: int, d: int, seed: int, max_tries: int = 20000) -> RegularGraph:
    """Uniform d-regular graph by configuration-model pairing with rejection.

    Draws a random perfect matching on the n*d half-edge stubs and rejects
    any outcome with loops or repeated edges, so accepted graphs are uniform
    over simple d-regular graphs.
    """
    if n * d % 2:
        raise ValueError("n * d must be even")
    if d >= n:
        raise ValueError("degree must be below n for a simple graph")
    rng = np.random.default_rng(seed)
    stubs = np.repeat(np.arange(n), d)
    for _ in range(max_tries):
        pairs = rng.permutation(stubs).reshape(-1, 2)
        if np.any(pairs[:, 0] == pairs[:, 1]):
            continue
        key = np.sort(pairs, axis=1)
        uniq = np.unique(key, axis=0)
        if uniq.shape[0] != key.shape[0]:
            continue
        nbrs: list[list[int]] = [[] for _ in range(n)]
        for a, b in pairs:
            nbrs[int(a)].append(int(b))
            nbrs[int(b)].append(int(a))
        return RegularGraph(nbrs)
    raise RuntimeError(
        f"no simple pairing found in {max_tries} tries (n={n}, d={d})")


def random_regular_dense(n: int, d: int, seed: int,
                         max_restarts: int = 200) -> RegularGraph:
    """d-regular graph by suitable-pair stub matching (Steger-Wormald style).

    Unlike plain configuration-model rejection this stays practical when d
    is a sizable fraction of n, at the price of an asymptotically-uniform
    rather than exactly-uniform distribution.  Used for auxiliary expanders.
    """
    if n * d % 2:
        raise ValueError("n * d must be even")
    if d >= n:
        raise ValueError("degree must be below n for a simple graph")
    rng = np.random.default_rng(seed)
    for _ in range(max_restarts):
        edges = _try_suitable_pairing(n, d, rng)
        if edges is None:
            continue
        nbrs: list[list[int]] = [[] for _ in range(n)]
        for u, v in sorted(edges):
            nbrs[u].append(v)
            nbrs[v].append(u)
        return RegularGraph(nbrs)
    raise RuntimeError(f"stub matching failed after {max_restarts} restarts")


def _try_suitable_pairing(n, d, rng):
    edges: set[tuple[int, int]] = set()
    stubs = list(np.repeat(np.arange(n), d))
    while stubs:
        potential: dict[int, int] = {}
        arr = np.array(stubs)
        rng.shuffle(arr)
        it = iter(arr.tolist())
        for s1, s2 in zip(it, it):
            if s1 > s2:
                s1, s2 = s2, s1
            if s1 != s2 and (s1, s2) not in edges:
                edges.add((s1, s2))
            else:
                potential[s1] = potential.get(s1, 0) + 1
                potential[s2] = potential.get(s2, 0) + 1
        if not potential:
            return edges
        # any feasible pair left among the leftover stubs?
        nodes = sorted(potential)
        feasible = any(
            u != v and (min(u, v), max(u, v)) not in edges
            for i, u in enumerate(nodes) for v in nodes[i:])
        if not feasible:
            return None
        stubs = [node for node, cnt in sorted(potential.items())
                 for _ in range(cnt)]
    return edges


def component_count(adj_lists: Iterable[Sequence[int]] | RegularGraph) -> int:
    rows = _neighbor_rows(adj_lists)
    n = len(rows)
    seen = [False] * n
    comps = 0
    for s in range(n):
        if seen[s]:
            continue
        comps += 1
        seen[s] = True
        frontier = [s]
        while frontier:
            x = frontier.pop()
            for y in rows[x]:
                if not seen[y]:
                    seen[y] = True
                    frontier.append(y)
    return comps


def _neighbor_rows(obj) -> list[list[int]]:
    """Accept a RegularGraph or loose neighbor lists (possibly irregular)."""
    if isinstance(obj, RegularGraph):
        return obj.neighbor_lists()
    return [list(map(int, row)) for row in obj]


# ---------------------------------------------------------------------------
# signings and lifts
# ---------------------------------------------------------------------------

@dataclass
class Signing:
    """Assignment of a group element to each canonical (u < v) edge."""

    base: RegularGraph
    group: AbelianGroup
    values: np.ndarray  # (m, num_factors) exponent rows

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.int64)
        if vals.ndim == 1:
            vals = vals.reshape(-1, 1)
        if vals.shape != (self.base.m, len(self.group.factors)):
            raise ValueError("one exponent row per canonical edge required")
        mods = np.array(self.group.factors, dtype=np.int64)
        self.values = vals % mods
    @staticmethod
    def identity(base: RegularGraph, group: AbelianGroup) -> "Signing":
        return Signing(base, group,
                       np.zeros((base.m, len(group.factors)), dtype=np.int64))

    @staticmethod
    def random(base: RegularGraph, group: AbelianGroup, seed: int) -> "Signing":
        rng = np.random.default_rng(seed)
        mods = np.array(group.factors, dtype=np.int64)
        vals = rng.integers(0, mods, size=(base.m, mods.size))
        return Signing(base, group, vals)

    def element(self, e: int) -> tuple[int, ...]:
        return tuple(int(x) for x in self.values[e])

    def directed(self, u: int, v: int) -> tuple[int, ...]:
        """Group element on the directed edge u -> v (inverse against canon)."""
        e = self.base.edge_id(u, v)
        g = self.element(e)
        return g if u < v else self.group.inverse(g)

    def char_on_directed(self, chi, u: int, v: int) -> complex:
        return self.group.char_value(chi, self.directed(u, v))

    def to_json(self) -> dict:
        """Serialize as 1-based [u, v, exponents] triples in canonical order."""
        return {
            "group": self.group.to_json(),
            "edges": [[u + 1, v + 1, [int(x) for x in self.values[e]]]
                      for e, (u, v) in enumerate(self.base.edges)],
        }

    @staticmethod
    def from_json(base: RegularGraph, payload: dict) -> "Signing":
        group = AbelianGroup.from_json(payload["group"])
        values = np.zeros((base.m, len(group.factors)), dtype=np.int64)
        seen = np.zeros(base.m, dtype=bool)
        for u1, v1, exps in payload["edges"]:
            e = base.edge_id(u1 - 1, v1 - 1)
            values[e] = exps
            seen[e] = True
        if not seen.all():
            raise ValueError("signing file misses some base edges")
        return Signing(base, group, values)


def action_is_transitive(group: AbelianGroup,
                         elements: Iterable[tuple[int, ...]]) -> bool:
    """Do the given elements generate a transitive action on the fiber?"""
    ell = group.fiber_size
    perms = [group.perm_of(g) for g in elements]
    invs = [np.argsort(p) for p in perms]
    seen = {0}
    frontier = [0]
    while frontier:
        x = frontier.pop()
        for p in perms + invs:
            y = int(p[x])
            if y not in seen:
                seen.add(y)
                frontier.append(y)
    return len(seen) == ell


def lift(base: RegularGraph, signing: Signing,
         allow_disconnected: bool = False) -> RegularGraph:
    """Build the fiber-product graph of a signing.

    Canonical edge (u, v) with element s yields edges (u, i) ~ (v, s.i)
    for every fiber point i.  Vertex (v, i) sits at index v * fiber + i,
    and lifted neighbor order follows the base neighbor order.
    Signings whose elements act non-transitively give disconnected lifts
    and are refused unless allow_disconnected is set.
    """
    group = signing.group
    ell = group.fiber_size
    if not allow_disconnected:
        if not action_is_transitive(group, [signing.element(e)
                                            for e in range(base.m)]):
            raise ValueError(
                "signing generates a non-transitive action; the lift would "
                "be disconnected (pass allow_disconnected=True to override)")
    perms = [group.perm_of(signing.element(e)) for e in range(base.m)]
    inv_perms = [np.argsort(p) for p in perms]
    n, d = base.n, base.d
    rows = np.empty((n * ell, d), dtype=np.int64)
    for u in range(n):
        for j in range(d):
            v = int(base.adj[u, j])
            e = base.edge_id(u, v)
            fiber_map = perms[e] if u < v else inv_perms[e]
            rows[u * ell:(u + 1) * ell, j] = v * ell + fiber_map
    return RegularGraph(rows)


# ---------------------------------------------------------------------------
# signed walk operators
# ---------------------------------------------------------------------------

@dataclass
class SignedOperator:
    """A character-evaluated walk operator of a signing."""

    kind: str  # "adjacency" or "nonbacktracking"
    chi: tuple[int, ...]
    matrix: np.ndarray


def signed_adjacency(signing: Signing, chi) -> SignedOperator:
    base = signing.base
    mat = np.zeros((base.n, base.n), dtype=np.complex128)
    for e, (u, v) in enumerate(base.edges):
        val = signing.group.char_value(chi, signing.element(e))
        mat[u, v] = val
        mat[v, u] = np.conj(val)
    return SignedOperator("adjacency", tuple(chi), mat)


def _nonbacktracking_matrix(base: RegularGraph, value_of_directed) -> np.ndarray:
    two_m = 2 * base.m
    if two_m > MAX_DENSE_DIM:
        raise ValueError(f"non-backtracking operator is {two_m}-dimensional, "
                         f"above the dense cap {MAX_DENSE_DIM}")
    mat = np.zeros((two_m, two_m), dtype=np.complex128)
    for g, (x, y) in enumerate(base.directed_edges()):
        val = value_of_directed(x, y)
        # rows: directed edges (w -> x) feeding into g, excluding reversal
        for w in base.adj[x]:
            w = int(w)
            if w == y:
                continue
            f = base.directed_index(w, x)
            mat[f, g] = val
    return mat


def nonbacktracking(base: RegularGraph) -> np.ndarray:
    """Unsigned non-backtracking operator on directed edges (real 0/1)."""
    return _nonbacktracking_matrix(base, lambda x, y: 1.0).real


def signed_nonbacktracking(signing: Signing, chi) -> SignedOperator:
    chi = tuple(chi)
    mat = _nonbacktracking_matrix(
        signing.base, lambda x, y: signing.char_on_directed(chi, x, y))
    return SignedOperator("nonbacktracking", chi, mat)


# ---------------------------------------------------------------------------
# girth and bicycle-freeness
# ---------------------------------------------------------------------------

def girth(graph_or_adj) -> int | float:
    """Length of a shortest cycle; math.inf for forests.

    Accepts a RegularGraph or loose neighbor lists, so it also applies to
    irregular subgraphs.
    """
    rows = _neighbor_rows(graph_or_adj)
    n = len(rows)
    best = math.inf
    for root in range(n):
        dist = [-1] * n
        parent = [-1] * n
        dist[root] = 0
        queue = [root]
        head = 0
        while head < len(queue):
            x = queue[head]
            head += 1
            if 2 * dist[x] >= best:
                break
            for y in rows[x]:
                if dist[y] < 0:
                    dist[y] = dist[x] + 1
                    parent[y] = x
                    queue.append(y)
                elif y != parent[x] and dist[y] >= dist[x]:
                    # non-tree edge closes a cycle through the BFS tree
                    best = min(best, dist[x] + dist[y] + 1)
    return best


def ball_excess(rows: list[list[int]], root: int, radius: int) -> int:
    """Edges minus vertices of the radius-r ball around root."""
    n = len(rows)
    dist = {root: 0}
    queue = [root]
    head = 0
    while head < len(queue):
        x = queue[head]
        head += 1
        if dist[x] == radius:
            continue
        for y in rows[x]:
            if y not in dist:
                dist[y] = dist[x] + 1
                queue.append(y)
    n_vertices = len(dist)
    n_edges = 0
    for x in dist:
        for y in rows[x]:
            if y in dist and y > x:
                n_edges += 1
    return n_edges - n_vertices


def bicycle_free_radius(graph_or_adj) -> int | float:
    """Largest r such that every radius-r ball has at most one cycle.

    A ball has at most one cycle exactly when its edge count minus vertex
    count (the excess) is at most 0.  Returns math.inf when even whole
    components never exceed one cycle.
    """
    rows = _neighbor_rows(graph_or_adj)
    n = len(rows)
    if n == 0:
        return math.inf
    cap = n  # balls stop growing at the component diameter
    for r in range(cap + 1):
        for v in range(n):
            if ball_excess(rows, v, r) > 0:
                return r - 1
    return math.inf
