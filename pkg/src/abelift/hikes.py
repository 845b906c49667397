"""Closed walk enumeration, DFS shape encodings, and counting bounds.

A k-hike is a closed walk of 2k steps that is non-backtracking at every
step except step k + 1 (1-based), with no constraint across the closing
point.  Singleton-free means every undirected edge is used either zero
times or at least twice.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from . import kernels
from .graphs import RegularGraph, bicycle_free_radius


class DecodeError(ValueError):
    """Malformed encoding fed to a decoder."""


@dataclass(frozen=True)
class EdgeSubgraph:
    """A sub(multi)set of a host graph's vertices and undirected edges."""

    vertices: frozenset[int]
    edges: frozenset[tuple[int, int]]

    @staticmethod
    def from_edges(edges: Iterable[tuple[int, int]],
                   extra_vertices: Iterable[int] = ()) -> "EdgeSubgraph":
        es = frozenset((min(u, v), max(u, v)) for u, v in edges)
        vs = set(extra_vertices)
        for u, v in es:
            if u == v:
                raise ValueError("self-loop in edge set")
            vs.add(u)
            vs.add(v)
        return EdgeSubgraph(frozenset(vs), es)

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def excess(self) -> int:
        return self.n_edges - self.n_vertices

    def excess_set(self) -> frozenset[int]:
        """Vertices of degree above two."""
        return frozenset(v for v in self.vertices if self.degree(v) > 2)

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edges

    def degree(self, v: int) -> int:
        return sum(1 for e in self.edges if v in e)

    def neighbor_rows(self) -> tuple[list[int], list[list[int]]]:
        """(sorted vertex labels, neighbor lists over local indices)."""
        labels = sorted(self.vertices)
        index = {v: i for i, v in enumerate(labels)}
        rows: list[list[int]] = [[] for _ in labels]
        for u, v in sorted(self.edges):
            rows[index[u]].append(index[v])
            rows[index[v]].append(index[u])
        return labels, rows


# ---------------------------------------------------------------------------
# DFS traversal with the three-state coloring and its string trace
# ---------------------------------------------------------------------------

def _subgraph_neighbor_lists(G: RegularGraph,
                             sub: EdgeSubgraph | None) -> dict[int, list[int]]:
    """Neighbors in base-graph row order, restricted to the subgraph."""
    if sub is None:
        return {v: [int(u) for u in G.adj[v]] for v in range(G.n)}
    for u, v in sub.edges:
        if not G.has_edge(u, v):
            raise ValueError("subgraph edge missing from the host graph")
    return {v: [int(u) for u in G.adj[v] if sub.has_edge(v, int(u))]
            for v in sorted(sub.vertices)}

_GREEN, _YELLOW, _RED = 0, 1, 2


def dfs(G: RegularGraph, start: int,
        subgraph: EdgeSubgraph | None = None) -> tuple[list[tuple[int, int]], str]:
    """Depth-first traversal emitting one R per edge step and one B per return.

    Fresh vertices turn yellow while on the stack and red once exhausted;
    stepping onto a yellow vertex bounces straight back.  Returns the
    directed edge sequence and the R/B trace with the final root B dropped,
    so the trace has exactly 2 * n_edges symbols.
    """
    trav, sigma, _, _ = _dfs_run(G, start, subgraph)
    return trav, sigma


def _dfs_run(G, start, subgraph):
    nbrs = _subgraph_neighbor_lists(G, subgraph)
    if start not in nbrs:
        raise ValueError("start vertex not in the traversed vertex set")
    color = {v: _GREEN for v in nbrs}
    trav: list[tuple[int, int]] = []
    sigma: list[str] = []
    rec_counts: dict[int, int] = {}
    visit_order: list[int] = []

    color[start] = _YELLOW
    visit_order.append(start)
    rec_counts[start] = 0
    stack: list[list] = [[start, None, 0]]
    while stack:
        frame = stack[-1]
        v, parent, pos = frame
        row = nbrs[v]
        advanced = False
        while pos < len(row):
            u = row[pos]
            pos += 1
            if color[u] != _RED and u != parent:
                frame[2] = pos
                sigma.append("R")
                rec_counts[v] += 1
                trav.append((v, u))
                if color[u] == _GREEN:
                    color[u] = _YELLOW
                    visit_order.append(u)
                    rec_counts[u] = 0
                    stack.append([u, v, 0])
                else:
                    sigma.append("B")
                advanced = True
                break
        if advanced:
            continue
        frame[2] = pos
        color[v] = _RED
        sigma.append("B")
        stack.pop()
    if any(c != _RED for c in color.values()):
        raise ValueError("traversal did not reach every vertex (disconnected)")
    return trav, "".join(sigma[:-1]), visit_order, rec_counts


@dataclass(frozen=True)
class GraphEncoding:
    """DFS shape encoding of a connected subgraph.

    mode 1 stores the full R/B trace, mode 2 stores per-vertex recursive
    call counts in visitation order; both carry the degree index of every
    forward step (position among the host row minus the parent slot).
    """

    mode: int
    start: int
    degree_indices: tuple[int, ...]
    sigma: str | None = None
    counts: tuple[int, ...] | None = None


def encode_graph(G: RegularGraph, sub: EdgeSubgraph | None, start: int,
                 mode: int = 1) -> GraphEncoding:
    if mode not in (1, 2):
        raise ValueError("mode must be 1 or 2")
    nbrs = _subgraph_neighbor_lists(G, sub)
    if start not in nbrs:
        raise ValueError("start vertex not in the traversed vertex set")
    trav, sigma, visit_order, rec_counts = _dfs_run(G, start, sub)
    parent_of: dict[int, int | None] = {start: None}
    seen = {start}
    for (v, u) in trav:
        if u not in seen:
            seen.add(u)
            parent_of[u] = v
    indices = []
    for (v, u) in trav:
        row = [int(x) for x in G.adj[v]]
        j = row.index(u)
        p = parent_of[v]
        if p is None:
            indices.append(j)
        else:
            pj = row.index(p)
            indices.append(j - 1 if pj < j else j)
    if mode == 1:
        return GraphEncoding(1, start, tuple(indices), sigma=sigma)
    counts = tuple(rec_counts[v] for v in visit_order)
    return GraphEncoding(2, start, tuple(indices), counts=counts)


def _neighbor_from_index(G: RegularGraph, v: int, parent: int | None,
                         idx: int) -> int:
    row = [int(x) for x in G.adj[v]]
    if parent is None:
        if not 0 <= idx < len(row):
            raise DecodeError("degree index out of range at the start vertex")
        return row[idx]
    if not 0 <= idx < len(row) - 1:
        raise DecodeError("degree index out of range")
    pj = row.index(parent)
    return row[idx] if idx < pj else row[idx + 1]


def decode_graph(G: RegularGraph, enc: GraphEncoding) -> EdgeSubgraph:
    """Rebuild the subgraph a GraphEncoding describes; inverse of encode_graph."""
    if not 0 <= enc.start < G.n:
        raise DecodeError("start vertex out of range")
    if enc.mode == 1:
        return _decode_sigma(G, enc)
    if enc.mode == 2:
        return _decode_counts(G, enc)
    raise DecodeError("unknown encoding mode")


def _decode_sigma(G, enc):
    sigma = enc.sigma or ""
    stack = [enc.start]
    parent: dict[int, int | None] = {enc.start: None}
    edges: set[tuple[int, int]] = set()
    deg_ptr = 0
    pos = 0
    while pos < len(sigma):
        if not stack:
            raise DecodeError("stack underflow (too many B symbols)")
        v = stack[-1]
        c = sigma[pos]
        pos += 1
        if c == "R":
            if deg_ptr >= len(enc.degree_indices):
                raise DecodeError("degree index sequence exhausted")
            u = _neighbor_from_index(G, v, parent[v], enc.degree_indices[deg_ptr])
            deg_ptr += 1
            e = (min(u, v), max(u, v))
            if e in edges:
                raise DecodeError("edge repeated in trace")
            edges.add(e)
            if u not in parent:
                parent[u] = v
                stack.append(u)
            else:
                # stepping onto an open vertex bounces straight back
                if pos >= len(sigma) or sigma[pos] != "B":
                    raise DecodeError("missing forced backtrack after a revisit")
                pos += 1
        elif c == "B":
            stack.pop()
        else:
            raise DecodeError(f"bad trace symbol {c!r}")
    if stack != [enc.start]:
        raise DecodeError("trace ended mid-traversal")
    if deg_ptr != len(enc.degree_indices):
        raise DecodeError("unused degree indices")
    return EdgeSubgraph.from_edges(edges, extra_vertices=[enc.start])


def _decode_counts(G, enc):
    counts = list(enc.counts or ())
    if not counts:
        raise DecodeError("empty count sequence")
    remaining = counts.copy()
    order_of = {enc.start: 0}
    parent: dict[int, int | None] = {enc.start: None}
    stack = [enc.start]
    edges: set[tuple[int, int]] = set()
    deg_ptr = 0
    while stack:
        v = stack[-1]
        j = order_of[v]
        if remaining[j] > 0:
            remaining[j] -= 1
            if deg_ptr >= len(enc.degree_indices):
                raise DecodeError("degree index sequence exhausted")
            u = _neighbor_from_index(G, v, parent[v], enc.degree_indices[deg_ptr])
            deg_ptr += 1
            e = (min(u, v), max(u, v))
            if e in edges:
                raise DecodeError("edge repeated in trace")
            edges.add(e)
            if u not in order_of:
                if len(order_of) >= len(counts):
                    raise DecodeError("more vertices visited than counted")
                order_of[u] = len(order_of)
                parent[u] = v
                stack.append(u)
        else:
            stack.pop()
    if deg_ptr != len(enc.degree_indices):
        raise DecodeError("unused degree indices")
    if len(order_of) != len(counts):
        raise DecodeError("fewer vertices visited than counted")
    if any(remaining):
        raise DecodeError("unconsumed recursive calls")
    return EdgeSubgraph.from_edges(edges, extra_vertices=[enc.start])


# ---------------------------------------------------------------------------
# hikes
# ---------------------------------------------------------------------------

def is_hike(G: RegularGraph, walk: Sequence[int]) -> bool:
    """Closed 2k-step walk, non-backtracking except at step k + 1."""
    w = [int(x) for x in walk]
    if len(w) < 3 or len(w) % 2 == 0:
        return False
    if w[0] != w[-1]:
        return False
    k = (len(w) - 1) // 2
    for i in range(1, len(w)):
        if not G.has_edge(w[i - 1], w[i]):
            return False
        if i >= 2 and i != k + 1 and w[i] == w[i - 2]:
            return False
    return True


def hike_graph(walk: Sequence[int]) -> EdgeSubgraph:
    w = [int(x) for x in walk]
    return EdgeSubgraph.from_edges(
        [(w[i - 1], w[i]) for i in range(1, len(w))])


def singleton_free(walk: Sequence[int]) -> bool:
    w = [int(x) for x in walk]
    counts: dict[tuple[int, int], int] = {}
    for i in range(1, len(w)):
        e = (min(w[i - 1], w[i]), max(w[i - 1], w[i]))
        counts[e] = counts.get(e, 0) + 1
    return all(c != 1 for c in counts.values())


def _iter_hikes(G: RegularGraph, k: int, singleton_free_only: bool):
    two_k = 2 * k
    exempt = k + 1
    adj, eidt, d = G.adj, G.eid_table, G.d
    for v0 in range(G.n):
        walk = [v0]
        ec: dict[int, int] = {}

        def rec(p):
            if p > two_k:
                if walk[-1] == v0 and (
                        not singleton_free_only
                        or all(c != 1 for c in ec.values())):
                    yield tuple(walk)
                return
            u = walk[-1]
            for j in range(d):
                w = int(adj[u, j])
                if p >= 2 and p != exempt and w == walk[-2]:
                    continue
                e = int(eidt[u, j])
                ec[e] = ec.get(e, 0) + 1
                walk.append(w)
                yield from rec(p + 1)
                walk.pop()
                ec[e] -= 1

        yield from rec(1)


def enumerate_hikes(G: RegularGraph, k: int, singleton_free_only: bool = True,
                    return_walks: bool = False):
    """Count (or list) the k-hikes of G, every start vertex counted separately."""
    if k < 1:
        raise ValueError("k must be >= 1")
    states = G.n * G.d * max(1, (G.d - 1)) ** (2 * k - 1)
    if states > 2 * 10 ** 7 or states * G.m > 2 * 10 ** 8:
        raise ValueError("hike enumeration budget exceeded for these n, d, k")
    if return_walks:
        walks = list(_iter_hikes(G, k, singleton_free_only))
        return walks
    return kernels.count_hikes(G.adj, G.eid_table, G.m, k,
                               singleton_free=singleton_free_only)


# ---------------------------------------------------------------------------
# segment encoding of a hike against a bicycle-free host
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HikeEncoding:
    """Segment endpoints plus winding counts around each segment ball's cycle."""

    r: int
    endpoints: tuple[int, ...]
    winding: tuple[int, ...]


def _ball_cycle(rows: list[list[int]], root: int, radius: int):
    """Vertex set and the unique cycle (if any) of the radius-r ball."""
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
    inside = set(dist)
    deg = {v: sum(1 for y in rows[v] if y in inside) for v in inside}
    n_edges = sum(deg.values()) // 2
    if n_edges - len(inside) > 0:
        raise ValueError("ball carries more than one independent cycle")
    core = set(inside)
    trimmed = True
    while trimmed:
        trimmed = False
        for v in list(core):
            alive = [y for y in rows[v] if y in core]
            if len(alive) <= 1:
                core.discard(v)
                trimmed = True
    return inside, core


def hike_encoding(G: RegularGraph, walk: Sequence[int], r: int) -> HikeEncoding:
    """Encode a hike by r-step segment endpoints and cycle winding numbers.

    Needs every radius-r ball of G to carry at most one cycle; each
    segment's net signed crossings of that cycle's reference edge (lowest
    vertex toward its smaller cycle neighbor) pins the segment's homotopy.
    """
    w = [int(x) for x in walk]
    if not is_hike(G, w):
        raise ValueError("walk is not a hike on this graph")
    if r < 1:
        raise ValueError("r must be >= 1")
    two_k = len(w) - 1
    rows = G.neighbor_lists()
    n_segments = -(-two_k // r)
    endpoints = []
    winding = []
    for i in range(n_segments):
        a = i * r
        b = min((i + 1) * r, two_k)
        seg = w[a:b + 1]
        endpoints.append(seg[-1])
        _, core = _ball_cycle(rows, seg[0], r)
        if not core:
            winding.append(0)
            continue
        v_min = min(core)
        succ = min(y for y in rows[v_min] if y in core)
        c = 0
        for x, y in zip(seg, seg[1:]):
            if (x, y) == (v_min, succ):
                c += 1
            elif (y, x) == (v_min, succ):
                c -= 1
        if abs(c) > r // 2:
            raise AssertionError("winding count exceeded r/2")
        winding.append(c)
    return HikeEncoding(r=r, endpoints=tuple(endpoints), winding=tuple(winding))


def hike_encoding_count(k: int, r: int, n_host_vertices: int) -> int:
    """Size bound (r * |V|)^ceil(2k / r) on distinct hike encodings."""
    if k < 1 or r < 1 or n_host_vertices < 1:
        raise ValueError("k, r and the vertex count must be positive")
    return (r * n_host_vertices) ** (-(-2 * k // r))


# ---------------------------------------------------------------------------
# counting bounds
# ---------------------------------------------------------------------------

def binary_entropy(x: float) -> float:
    if not 0.0 <= x <= 1.0:
        raise ValueError("entropy argument must lie in [0, 1]")
    if x in (0.0, 1.0):
        return 0.0
    return -x * math.log2(x) - (1.0 - x) * math.log2(1.0 - x)


@dataclass(frozen=True)
class HikeBounds:
    gamma1: float
    bound1: float
    gamma2: float | None
    bound2: float | None
    r_used: int
    r_floored: bool


def count_bounds(n: int, d: int, k: int, r: int,
                 delta: float | None = None) -> HikeBounds:
    """Exponential-rate bounds on singleton-free hike counts.

    The first rate needs only n, d, k, r; the second also takes the
    fraction delta of steps allowed off the typical profile and is only
    valid for 3 <= k <= exp(delta * r).
    """
    if d < 3:
        raise ValueError("bounds require degree >= 3")
    if n < 1 or k < 1:
        raise ValueError("n and k must be positive")
    r_floored = r < 1
    r_used = max(1, r)
    two_k = 2 * k
    gamma1 = (1.0 + math.log2(n * r_used * k) / two_k
              + math.log2(r_used * k) / r_used)
    bound1 = (2.0 ** gamma1 * math.sqrt(d - 1)) ** two_k
    gamma2 = bound2 = None
    if delta is not None:
        if not 0.0 < delta <= 0.2:
            raise ValueError("delta must lie in (0, 0.2] so 5*delta stays in [0, 1]")
        if k < 3:
            raise ValueError("second bound needs k >= 3")
        if k > math.exp(delta * r_used):
            raise ValueError("second bound needs k <= exp(delta * r)")
        gamma2 = (math.log2(16.0 * n * k ** 3 * r_used * d) / two_k
                  + math.log2(r_used * k) / r_used
                  + binary_entropy(5.0 * delta) / 2.0
                  + delta * math.log2(d))
        bound2 = (2.0 ** gamma2 * math.sqrt(d - 1)) ** two_k
    return HikeBounds(gamma1, bound1, gamma2, bound2, r_used, r_floored)


# ---------------------------------------------------------------------------
# excess bound for mostly-path subgraphs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MopReport:
    n_vertices: int
    excess: int
    bound: float
    radius: int
    bfr: int | float
    r_min: float
    hypothesis_ok: bool
    passed: bool | None


def mop_excess_check(subject, r: int) -> MopReport:
    """Check excess <= ln(e |V|) / r * |V| for bicycle-free-at-r subgraphs.

    The hypothesis needs the bicycle-free radius to reach r and
    r >= 10 ln |V|; when it fails the report says so instead of judging.
    Accepts an EdgeSubgraph, a RegularGraph, or loose neighbor lists.
    """
    if isinstance(subject, EdgeSubgraph):
        _, rows = subject.neighbor_rows()
    elif isinstance(subject, RegularGraph):
        rows = subject.neighbor_lists()
    else:
        rows = [list(map(int, row)) for row in subject]
    n_v = len(rows)
    if n_v == 0:
        raise ValueError("empty subgraph")
    n_e = sum(len(row) for row in rows) // 2
    exc = n_e - n_v
    bfr = bicycle_free_radius(rows)
    r_min = 10.0 * math.log(n_v)
    hypothesis_ok = (bfr >= r) and (r >= r_min)
    bound = math.log(math.e * n_v) / r * n_v
    passed = (exc <= bound) if hypothesis_ok else None
    return MopReport(n_vertices=n_v, excess=exc, bound=bound, radius=r,
                     bfr=bfr, r_min=r_min, hypothesis_ok=hypothesis_ok,
                     passed=passed)
