"""Classical F2 codes, Tanner constructions, and circulant CSS products.

Parity matrices are uint8 arrays; all rank and span work runs on the
bit-packed routines in gf2.  Distances come either from exact coset
enumeration (certified) or an information-set sampler (upper bound).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import gf2, kernels
from .graphs import RegularGraph, Signing
from .groups import AbelianGroup

EXACT_DIM_CAP = 24
EXACT_DISTANCE_BUDGET = 1 << 26


class BudgetError(RuntimeError):
    """A bounded search ran out of attempts."""


# ---------------------------------------------------------------------------
# classical linear codes
# ---------------------------------------------------------------------------

class LinearCodeF2:
    """A binary linear code presented by a parity-check matrix."""

    def __init__(self, parity):
        h = gf2.as_f2(parity)
        self.parity = h
        self.length = h.shape[1]

    @property
    def dimension(self) -> int:
        return self.length - gf2.rank(self.parity)

    def generator_matrix(self) -> np.ndarray:
        """Basis of the codeword space, one codeword per row."""
        return gf2.nullspace(self.parity)

    def dual(self) -> "LinearCodeF2":
        return LinearCodeF2(self.generator_matrix())

    def contains(self, word) -> bool:
        w = gf2.as_f2(word)
        return not gf2.matmul(self.parity, w.T).any()

    def distance(self) -> int:
        """Exact minimum weight over all nonzero codewords."""
        gen = self.generator_matrix()
        k = gen.shape[0]
        if k == 0:
            raise ValueError("the zero code has no distance")
        if k > EXACT_DIM_CAP:
            raise ValueError("code too large for exact enumeration")
        zero = np.zeros((1, self.length), dtype=np.uint8)
        return kernels.min_weight_affine(gf2.pack_rows(zero)[0],
                                         gf2.pack_rows(gen), skip_zero=True)

    @staticmethod
    def repetition(n: int) -> "LinearCodeF2":
        h = np.zeros((n - 1, n), dtype=np.uint8)
        for i in range(n - 1):
            h[i, i] = h[i, i + 1] = 1
        return LinearCodeF2(h)

    @staticmethod
    def even_weight(n: int) -> "LinearCodeF2":
        return LinearCodeF2(np.ones((1, n), dtype=np.uint8))

    @staticmethod
    def full_space(n: int) -> "LinearCodeF2":
        return LinearCodeF2(np.zeros((0, n), dtype=np.uint8))

    def __repr__(self):
        return f"LinearCodeF2(n={self.length}, k={self.dimension})"


def code_dimension(parity) -> int:
    h = gf2.as_f2(parity)
    return h.shape[1] - gf2.rank(h)


def tanner_code(G: RegularGraph, local: LinearCodeF2) -> np.ndarray:
    """Parity matrix of the Tanner code of G with a local code on edge slots.

    Bits sit on edges; vertex v imposes the local checks on its incident
    edges read in neighbor-row order.  The local parity is row reduced
    first so the result has exactly n * rank(local) rows.
    """
    if local.length != G.d:
        raise ValueError("local code length must equal the degree")
    lp = gf2.nonzero_rref_rows(local.parity)
    rc = lp.shape[0]
    H = np.zeros((G.n * rc, G.m), dtype=np.uint8)
    for v in range(G.n):
        for c in range(rc):
            row = v * rc + c
            for j in range(G.d):
                H[row, G.eid_table[v, j]] ^= lp[c, j]
    return H


def local_code_search(block_length: int, distance_target: int,
                      dual_distance_target: int = 1, budget: int = 2000,
                      seed: int = 0):
    """Random search for a short code meeting distance floors on both sides.

    Candidate parity matrices are drawn uniformly; the code's distance and
    its dual's distance are both verified exactly, so block_length stays
    small.  Returns (code, report) on success and raises BudgetError when
    the budget runs out first.
    """
    if block_length > 16:
        raise ValueError("exact two-sided verification caps length at 16")
    rng = np.random.default_rng(seed)
    best = None
    for tried in range(1, budget + 1):
        r = int(rng.integers(1, block_length))
        h = rng.integers(0, 2, size=(r, block_length), dtype=np.int64)
        code = LinearCodeF2(h)
        dim = code.dimension
        if dim == 0 or dim == block_length:
            continue  # one side would be the zero code
        dist = code.distance()
        dual_dist = code.dual().distance()
        if best is None or (min(dist, dual_dist), dist) > best[:2]:
            best = (min(dist, dual_dist), dist, dual_dist, code)
        if dist >= distance_target and dual_dist >= dual_distance_target:
            return code, {"found": True, "tried": tried, "distance": dist,
                          "dual_distance": dual_dist, "dimension": dim}
    detail = ""
    if best is not None:
        detail = (f"; best seen had distance {best[1]} and dual distance "
                  f"{best[2]}")
    raise BudgetError(f"no length-{block_length} code with distance >= "
                      f"{distance_target} and dual distance >= "
                      f"{dual_distance_target} in {budget} tries{detail}")


# ---------------------------------------------------------------------------
# matrices over the cyclic group algebra and their circulant expansions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GroupAlgebraMatrix:
    """Matrix with entries in F2[Z_ell], each entry a set of shift exponents.

    Construction collapses repeated exponents to one (set semantics), so
    degenerate reductions such as 1 + x at ell = 1 keep a unit entry.
    """

    ell: int
    entries: tuple[tuple[frozenset, ...], ...]

    @staticmethod
    def from_polys(ell: int, rows: Sequence[Sequence]) -> "GroupAlgebraMatrix":
        if ell < 1:
            raise ValueError("ell must be positive")
        out = []
        for row in rows:
            cells = []
            for cell in row:
                if isinstance(cell, (int, np.integer)):
                    cell = [int(cell)]
                cells.append(frozenset(int(e) % ell for e in cell))
            out.append(tuple(cells))
        if len({len(r) for r in out}) > 1:
            raise ValueError("ragged rows")
        return GroupAlgebraMatrix(ell, tuple(out))

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.entries), len(self.entries[0]) if self.entries else 0

    def star(self) -> "GroupAlgebraMatrix":
        """Transpose with every shift exponent negated (the ring involution)."""
        rows, cols = self.shape
        out = [[frozenset((-e) % self.ell for e in self.entries[i][j])
                for i in range(rows)] for j in range(cols)]
        return GroupAlgebraMatrix(self.ell,
                                  tuple(tuple(r) for r in out))

    def matmul(self, other: "GroupAlgebraMatrix") -> "GroupAlgebraMatrix":
        """Ring product with genuine F2 cancellation of colliding shifts."""
        if self.ell != other.ell:
            raise ValueError("mismatched ell")
        ra, ca = self.shape
        rb, cb = other.shape
        if ca != rb:
            raise ValueError("inner dimensions differ")
        rows = []
        for i in range(ra):
            row = []
            for j in range(cb):
                acc: set[int] = set()
                for t in range(ca):
                    for ea in self.entries[i][t]:
                        for eb in other.entries[t][j]:
                            acc ^= {(ea + eb) % self.ell}
                row.append(frozenset(acc))
            rows.append(tuple(row))
        return GroupAlgebraMatrix(self.ell, tuple(rows))

    def expand(self) -> np.ndarray:
        """Binary block matrix with P_e[i, (i+e) % ell] = 1 for each shift e."""
        rows, cols = self.shape
        ell = self.ell
        out = np.zeros((rows * ell, cols * ell), dtype=np.uint8)
        idx = np.arange(ell)
        for i in range(rows):
            for j in range(cols):
                for e in self.entries[i][j]:
                    out[i * ell + idx, j * ell + (idx + e) % ell] ^= 1
        return out


def group_algebra_from_blocks(H, ell: int) -> GroupAlgebraMatrix:
    """Read the base matrix over F2[Z_ell] back off a block-circulant matrix.

    Rows and columns must come in contiguous fiber blocks of size ell
    (the tanner_from_certificate layout); every ell x ell block must be a
    sum of shift matrices P_e[i, (i + e) % ell] = 1, else this raises.
    Inverse of GroupAlgebraMatrix.expand.
    """
    h = gf2.as_f2(H)
    n_rows, n_cols = h.shape
    if n_rows % ell or n_cols % ell:
        raise ValueError("matrix shape not divisible into ell-blocks")
    idx = np.arange(ell)
    rows = []
    for bi in range(n_rows // ell):
        row = []
        for bj in range(n_cols // ell):
            blk = h[bi * ell:(bi + 1) * ell, bj * ell:(bj + 1) * ell]
            exps = frozenset(int(e) for e in np.nonzero(blk[0])[0])
            rebuilt = np.zeros((ell, ell), dtype=np.uint8)
            for e in exps:
                rebuilt[idx, (idx + e) % ell] ^= 1
            if not np.array_equal(rebuilt, blk):
                raise ValueError(f"block ({bi}, {bj}) is not circulant")
            row.append(exps)
        rows.append(tuple(row))
    return GroupAlgebraMatrix(ell, tuple(rows))


def circulant_structure_check(H, ell: int, block_order=None) -> bool:
    """Is the row space invariant under a one-step cyclic shift of each column block?

    Columns are taken as contiguous fiber blocks of size ell unless
    block_order lists, per column, its (block, fiber) position.
    """
    h = gf2.as_f2(H)
    n = h.shape[1]
    if n % ell:
        raise ValueError("column count not divisible by ell")
    if block_order is None:
        blocks = np.arange(n) // ell
        fibers = np.arange(n) % ell
    else:
        blocks = np.array([b for b, _ in block_order])
        fibers = np.array([f for _, f in block_order])
        if blocks.size != n:
            raise ValueError("block_order must cover every column")
    col_of = {}
    for c in range(n):
        col_of[(int(blocks[c]), int(fibers[c]))] = c
    perm = np.empty(n, dtype=np.int64)
    for c in range(n):
        perm[c] = col_of[(int(blocks[c]), (int(fibers[c]) + 1) % ell)]
    shifted = h[:, perm]
    return gf2.row_space_equal(h, shifted)


# ---------------------------------------------------------------------------
# CSS codes
# ---------------------------------------------------------------------------

def css_valid(hx, hz) -> bool:
    a, b = gf2.as_f2(hx), gf2.as_f2(hz)
    if a.shape[1] != b.shape[1]:
        return False
    return not gf2.matmul(a, b.T).any()


@dataclass
class CSSCode:
    hx: np.ndarray
    hz: np.ndarray

    def __post_init__(self):
        self.hx = gf2.as_f2(self.hx)
        self.hz = gf2.as_f2(self.hz)
        if not css_valid(self.hx, self.hz):
            raise ValueError("H_X H_Z^T != 0, not a CSS pair")

    @property
    def n(self) -> int:
        return self.hx.shape[1]

    @property
    def k(self) -> int:
        return self.n - gf2.rank(self.hx) - gf2.rank(self.hz)

    def to_json(self, distance: dict | None = None) -> dict:
        return {
            "schema": "abelift.css.v1",
            "n": self.n,
            "k": self.k,
            "hx": [_row_hex(r) for r in self.hx],
            "hz": [_row_hex(r) for r in self.hz],
            "distance": distance,
        }

    @staticmethod
    def from_json(payload: dict) -> "CSSCode":
        n = int(payload["n"])
        hx = np.array([_hex_row(s, n) for s in payload["hx"]], dtype=np.uint8)
        hz = np.array([_hex_row(s, n) for s in payload["hz"]], dtype=np.uint8)
        return CSSCode(hx.reshape(-1, n), hz.reshape(-1, n))


def _row_hex(row: np.ndarray) -> str:
    return np.packbits(row.astype(np.uint8), bitorder="little").tobytes().hex()


def _hex_row(s: str, n: int) -> np.ndarray:
    raw = np.frombuffer(bytes.fromhex(s), dtype=np.uint8)
    return np.unpackbits(raw, bitorder="little")[:n]


def lifted_product(A: GroupAlgebraMatrix, B: GroupAlgebraMatrix) -> CSSCode:
    """CSS code from two group-algebra matrices via their expansions.

    With H1 = expand(A) and H2 = expand(B*) = expand(B)^T,
    H_X = [H1 x I | I x H2^T] and H_Z = [I x H2 | H1^T x I]; the mixed
    Kronecker identity makes the pair commute entrywise over F2.
    """
    if A.ell != B.ell:
        raise ValueError("factors must share ell")
    h1 = A.expand()
    h2 = B.expand().T
    m1, n1 = h1.shape
    m2, n2 = h2.shape
    hx = np.hstack([np.kron(h1, np.eye(n2, dtype=np.uint8)),
                    np.kron(np.eye(m1, dtype=np.uint8), h2.T)])
    hz = np.hstack([np.kron(np.eye(n1, dtype=np.uint8), h2),
                    np.kron(h1.T, np.eye(m2, dtype=np.uint8))])
    return CSSCode(hx % 2, hz % 2)


def toric_code(ell: int) -> CSSCode:
    one_plus_x = GroupAlgebraMatrix.from_polys(ell, [[[0, 1]]])
    return lifted_product(one_plus_x, one_plus_x)


# ---------------------------------------------------------------------------
# distances
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DistanceReport:
    value: int
    mode: str
    certified: bool
    dx: int | None = None
    dz: int | None = None


def _logical_min_weight_exact(stab, kernel_basis, n_cols) -> int:
    anchor = gf2.nonzero_rref_rows(stab) if stab.size else np.zeros(
        (0, n_cols), dtype=np.uint8)
    r = anchor.shape[0]
    logicals = []
    cur = anchor
    cur_rank = r
    for v in kernel_basis:
        cand = np.vstack([cur, v.reshape(1, -1)])
        if gf2.rank(cand) > cur_rank:
            logicals.append(v)
            cur = cand
            cur_rank += 1
    k = len(logicals)
    if k == 0:
        raise ValueError("no logical operators in this sector")
    if k > EXACT_DIM_CAP or (2 ** k - 1) * 2 ** r > EXACT_DISTANCE_BUDGET:
        raise ValueError("exact distance budget exceeded; use the "
                         "information-set mode")
    log_packed = gf2.pack_rows(np.asarray(logicals, dtype=np.uint8))
    stab_packed = gf2.pack_rows(anchor) if r else np.zeros(
        (0, log_packed.shape[1]), dtype=np.uint64)
    best = None
    for mask in range(1, 2 ** k):
        vec = np.zeros(log_packed.shape[1], dtype=np.uint64)
        for i in range(k):
            if (mask >> i) & 1:
                vec ^= log_packed[i]
        w = kernels.min_weight_affine(vec, stab_packed, skip_zero=False)
        if best is None or w < best:
            best = w
    return int(best)


def _logical_upper_bound(stab, kernel_basis, n_cols, trials, seed) -> int:
    anchor = gf2.nonzero_rref_rows(stab) if stab.size else np.zeros(
        (0, n_cols), dtype=np.uint8)
    space = np.vstack([anchor, kernel_basis]) if anchor.size else kernel_basis
    space = gf2.nonzero_rref_rows(space)
    rng = np.random.default_rng(seed)
    r_anchor = anchor.shape[0]
    best = None
    for _ in range(trials):
        perm = rng.permutation(n_cols)
        red, piv = gf2.rref(space[:, perm])
        rows = red[: len(piv)]
        cands = np.empty_like(rows)
        cands[:, perm] = rows
        if rows.shape[0] <= 48:
            pair_idx = [(i, j) for i in range(rows.shape[0])
                        for j in range(i + 1, rows.shape[0])]
            if pair_idx:
                pairs = np.array([cands[i] ^ cands[j] for i, j in pair_idx])
                cands = np.vstack([cands, pairs])
        weights = cands.sum(axis=1)
        order = np.argsort(weights)
        for idx in order:
            w = int(weights[idx])
            if best is not None and w >= best:
                break
            vec = cands[idx]
            if w == 0:
                continue
            if r_anchor and gf2.in_row_space(anchor, vec):
                continue
            best = w
            break
    if best is None:
        raise ValueError("sampler found no logical representative")
    return best


def min_distance(obj, mode: str = "exact", trials: int = 200,
                 seed: int = 0) -> DistanceReport:
    """Minimum distance of a classical or CSS code.

    mode 'exact' enumerates logical cosets with Gray-code weight scans and
    is certified; 'information-set' samples random information sets and
    reports an upper bound.
    """
    if mode not in ("exact", "information-set"):
        raise ValueError("mode must be 'exact' or 'information-set'")
    if isinstance(obj, LinearCodeF2):
        if mode == "exact":
            return DistanceReport(obj.distance(), mode, True)
        gen = obj.generator_matrix()
        if gen.shape[0] == 0:
            raise ValueError("the zero code has no distance")
        empty = np.zeros((0, obj.length), dtype=np.uint8)
        val = _logical_upper_bound(empty, gen, obj.length, trials, seed)
        return DistanceReport(val, mode, False)
    if not isinstance(obj, CSSCode):
        raise TypeError("expected LinearCodeF2 or CSSCode")
    if obj.k == 0:
        raise ValueError("code has no logical qubits")
    sides = {}
    for name, stab, other in (("dx", obj.hx, obj.hz), ("dz", obj.hz, obj.hx)):
        kernel = gf2.nullspace(other)
        if mode == "exact":
            sides[name] = _logical_min_weight_exact(stab, kernel, obj.n)
        else:
            sides[name] = _logical_upper_bound(stab, kernel, obj.n,
                                               trials, seed)
    value = min(sides["dx"], sides["dz"])
    return DistanceReport(value, mode, mode == "exact",
                          dx=sides["dx"], dz=sides["dz"])


# ---------------------------------------------------------------------------
# codes from lift certificates
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FreeActionReport:
    vertices_free: bool
    edges_free: bool
    ok: bool
    witness: tuple | None


def _edge_action_fixed_pair(edge_pairs, perm) -> tuple | None:
    """First unordered lifted edge fixed by the fiber permutation, if any."""
    for (u, i), (v, j) in edge_pairs:
        a = (u, int(perm[i]))
        b = (v, int(perm[j]))
        if {a, b} == {(u, i), (v, j)}:
            return ((u, i), (v, j))
    return None


def pairs_action_free(group: AbelianGroup, edge_pairs):
    """Is the fiber action free on an explicit unordered pair list?

    Accepts self-pairings ((u, i), (u, j)): an order-2 shift can fix such
    a pair by swapping its ends.  Simple-graph lifts never contain one,
    but degenerate quotient layouts can, so the check takes raw pairs.
    Returns (free, witness) with witness = (group element, fixed pair).
    """
    for g in group.elements():
        if g == group.identity:
            continue
        perm = group.perm_of(g)
        hit = _edge_action_fixed_pair(edge_pairs, perm)
        if hit is not None:
            return False, (g, hit)
    return True, None


def free_action_check(base: RegularGraph, signing: Signing) -> FreeActionReport:
    """Does the deck action move every lifted vertex and every lifted edge?

    The group acts on fibers only, so a fixed vertex needs a fixed fiber
    point and a fixed edge needs a fixed or swapped endpoint pair.
    """
    group = signing.group
    ell = group.fiber_size
    edge_pairs = []
    for e, (u, v) in enumerate(base.edges):
        perm_e = group.perm_of(signing.element(e))
        for i in range(ell):
            edge_pairs.append(((u, i), (v, int(perm_e[i]))))
    vertices_free = True
    witness = None
    for g in group.elements():
        if g == group.identity:
            continue
        perm = group.perm_of(g)
        if np.any(perm == np.arange(ell)):
            vertices_free = False
            if witness is None:
                fixed = int(np.nonzero(perm == np.arange(ell))[0][0])
                witness = ("vertex", g, fixed)
            break
    edges_free, edge_witness = pairs_action_free(group, edge_pairs)
    if not edges_free and witness is None:
        witness = ("edge",) + edge_witness
    ok = vertices_free and edges_free
    return FreeActionReport(vertices_free, edges_free, ok, witness)


def tanner_from_certificate(cert: dict, local: LinearCodeF2) -> np.ndarray:
    """Tanner parity of a certified lift, laid out in circulant fiber blocks.

    Columns sit at (base edge e, fiber f) -> e * ell + f; rows at
    ((v * checks + c) * ell + i).  Needs the canonical cyclic action so
    fiber shifts are column rotations, which makes every block circulant.
    """
    base = RegularGraph.from_json(cert["base"])
    group = AbelianGroup.from_json(cert["group"])
    ell = group.fiber_size
    canonical = AbelianGroup.cyclic(ell)
    if group.factors != canonical.factors or \
            group.generator_perms != canonical.generator_perms:
        raise ValueError("certificate group is not the canonical cyclic "
                         "rotation action")
    signing = Signing(base, group, np.asarray(cert["signing"]))
    if local.length != base.d:
        raise ValueError("local code length must equal the base degree")
    lp = gf2.nonzero_rref_rows(local.parity)
    rc = lp.shape[0]
    H = np.zeros((base.n * rc * ell, base.m * ell), dtype=np.uint8)
    for v in range(base.n):
        for j in range(base.d):
            w = int(base.adj[v, j])
            e = base.edge_id(v, w)
            a_e = int(signing.values[e, 0])
            for c in range(rc):
                if not lp[c, j]:
                    continue
                for i in range(ell):
                    fiber = i if v < w else (i - a_e) % ell
                    H[(v * rc + c) * ell + i, e * ell + fiber] ^= 1
    return H


def tanner_lift_code(cert: dict, local: LinearCodeF2) -> LinearCodeF2:
    return LinearCodeF2(tanner_from_certificate(cert, local))


# ---------------------------------------------------------------------------
# alist export
# ---------------------------------------------------------------------------

def write_alist(parity, path: str) -> None:
    """Write a parity matrix in MacKay's alist format ('n m' on line one)."""
    h = gf2.as_f2(parity)
    m, n = h.shape
    cols = [list(np.nonzero(h[:, j])[0] + 1) for j in range(n)]
    rows = [list(np.nonzero(h[i, :])[0] + 1) for i in range(m)]
    max_c = max((len(c) for c in cols), default=0)
    max_r = max((len(r) for r in rows), default=0)
    lines = [f"{n} {m}", f"{max_c} {max_r}",
             " ".join(str(len(c)) for c in cols),
             " ".join(str(len(r)) for r in rows)]
    for c in cols:
        lines.append(" ".join(str(x) for x in c + [0] * (max_c - len(c))))
    for r in rows:
        lines.append(" ".join(str(x) for x in r + [0] * (max_r - len(r))))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
