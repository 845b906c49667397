"""Spectra of lifts and signed operators, and the checks built on them.

lambda(G) is the largest eigenvalue magnitude after removing one copy of
the trivial (Perron) eigenvalue d; for a signed operator at a nontrivial
character the whole spectrum is nontrivial and the spectral radius is
used directly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from . import kernels
from .graphs import (MAX_DENSE_DIM, RegularGraph, Signing, lift,
                     nonbacktracking, signed_adjacency, signed_nonbacktracking)

_HUNGARIAN_CAP = 3000


def adjacency_spectrum(G: RegularGraph) -> np.ndarray:
    return np.linalg.eigvalsh(G.adjacency_matrix())


def lambda2(G: RegularGraph) -> float:
    """Largest |eigenvalue| of the adjacency once one copy of d is removed."""
    eigs = adjacency_spectrum(G)
    trimmed = eigs[:-1]  # eigvalsh sorts ascending; the top one is d
    if trimmed.size == 0:
        return 0.0
    return float(np.abs(trimmed).max())


def lambda2_signed(G: RegularGraph) -> float:
    """Second-largest adjacency eigenvalue with its sign (no modulus).

    Bipartite graphs have modulus-convention lambda equal to d, so reports
    carry both conventions.
    """
    eigs = adjacency_spectrum(G)
    return float(eigs[-2])


def spectral_radius(mat: np.ndarray) -> float:
    if mat.shape[0] == 0:
        return 0.0
    if np.allclose(mat, mat.conj().T):
        return float(np.abs(np.linalg.eigvalsh(mat)).max())
    return float(np.abs(np.linalg.eigvals(mat)).max())


def nb_radius_nontrivial(B: np.ndarray) -> float:
    """Spectral radius of a non-backtracking operator after dropping one
    copy of its Perron root d - 1."""
    eigs = np.linalg.eigvals(B)
    mags = np.abs(eigs)
    keep = np.ones(eigs.size, dtype=bool)
    keep[int(np.argmax(mags))] = False
    if not keep.any():
        return 0.0
    return float(mags[keep].max())


def multiset_max_distance(a, b) -> float:
    """Max per-element distance under an optimal matching of two multisets.

    Real multisets pair off in sorted order (optimal for the max metric);
    genuinely complex ones go through a Hungarian assignment.
    """
    av = np.asarray(a).ravel()
    bv = np.asarray(b).ravel()
    if av.size != bv.size:
        raise ValueError("multisets differ in size")
    if av.size == 0:
        return 0.0
    tol_imag = 1e-9
    if (np.abs(np.asarray(av, dtype=np.complex128).imag).max() < tol_imag
            and np.abs(np.asarray(bv, dtype=np.complex128).imag).max() < tol_imag):
        ar = np.sort(np.real(av))
        br = np.sort(np.real(bv))
        return float(np.abs(ar - br).max())
    if av.size > _HUNGARIAN_CAP:
        raise ValueError("complex multiset matching capped at "
                         f"{_HUNGARIAN_CAP} elements")
    cost = np.abs(av[:, None] - bv[None, :])
    rows, cols = linear_sum_assignment(cost)
    return float(cost[rows, cols].max())


# ---------------------------------------------------------------------------
# character decomposition of a lift spectrum
# ---------------------------------------------------------------------------

def character_spectra(signing: Signing) -> list[tuple[tuple[int, ...], int, np.ndarray]]:
    """(character, multiplicity, signed adjacency spectrum) per character."""
    mults = signing.group.character_multiplicities()
    out = []
    for chi, mult in mults.items():
        if mult == 0:
            continue
        eigs = np.linalg.eigvalsh(signed_adjacency(signing, chi).matrix)
        out.append((chi, mult, eigs))
    return out


@dataclass(frozen=True)
class UnionReport:
    adjacency_distance: float
    nb_distance: float | None
    tol: float
    passed: bool


def spectrum_union_check(signing: Signing, tol: float = 1e-8,
                         include_nonbacktracking: bool | None = None) -> UnionReport:
    """Match the lift spectrum against the union of signed character spectra.

    Checks the adjacency operator always and the non-backtracking operator
    when its lifted dimension fits the dense cap (or as requested).
    """
    base = signing.base
    lifted = lift(base, signing, allow_disconnected=True)
    lift_eigs = adjacency_spectrum(lifted)
    union = np.concatenate([np.tile(eigs, mult)
                            for _, mult, eigs in character_spectra(signing)])
    adj_dist = multiset_max_distance(lift_eigs, union)

    nb_dist = None
    nb_dim = 2 * lifted.m
    if include_nonbacktracking is None:
        include_nonbacktracking = nb_dim <= MAX_DENSE_DIM
    if include_nonbacktracking:
        lift_nb_eigs = np.linalg.eigvals(nonbacktracking(lifted))
        parts = []
        for chi, mult in signing.group.character_multiplicities().items():
            if mult == 0:
                continue
            eigs = np.linalg.eigvals(signed_nonbacktracking(signing, chi).matrix)
            parts.append(np.tile(eigs, mult))
        nb_union = np.concatenate(parts)
        nb_dist = multiset_max_distance(lift_nb_eigs, nb_union)
    passed = adj_dist <= tol and (nb_dist is None or nb_dist <= tol)
    return UnionReport(adj_dist, nb_dist, tol, passed)


def lift_lambda(signing: Signing) -> tuple[float, float, list[float]]:
    """(lambda of the lift, lambda of the base, per-nontrivial-character radii).

    Uses the character decomposition, so no lifted matrix is built.
    """
    base = signing.base
    lam_base = lambda2(base)
    rhos = []
    for chi in signing.group.characters():
        if all(c == 0 for c in chi):
            continue
        mat = signed_adjacency(signing, chi).matrix
        rhos.append(float(np.abs(np.linalg.eigvalsh(mat)).max()))
    lam = max([lam_base] + rhos) if rhos else lam_base
    return lam, lam_base, rhos


# ---------------------------------------------------------------------------
# Ihara-style bound and eigenvector transport
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IharaReport:
    lhs: float
    rho_b: float
    bound: float
    trivial: bool
    passed: bool


def ihara_check(signing: Signing, chi=None) -> IharaReport:
    """Check the operator norm bound 2 max(sqrt(d-1), rho(B)) for a character.

    At the trivial character both sides drop their Perron roots: the left
    side is lambda(base) and rho is taken after removing one copy of d - 1.
    """
    base = signing.base
    d = base.d
    if chi is None:
        chi = (0,) * len(signing.group.factors)
    chi = tuple(int(c) for c in chi)
    trivial = all(c == 0 for c in chi)
    if trivial:
        lhs = lambda2(base)
        rho_b = nb_radius_nontrivial(nonbacktracking(base))
    else:
        lhs = float(np.abs(np.linalg.eigvalsh(
            signed_adjacency(signing, chi).matrix)).max())
        rho_b = float(np.abs(np.linalg.eigvals(
            signed_nonbacktracking(signing, chi).matrix)).max())
    bound = 2.0 * max(math.sqrt(d - 1), rho_b)
    return IharaReport(lhs, rho_b, bound, trivial,
                       passed=lhs <= bound + 1e-9)


@dataclass(frozen=True)
class TransportResult:
    g: np.ndarray
    beta: complex
    roots: tuple[complex, complex]
    residual: float
    tol: float
    double_root: bool
    passed: bool


def nb_eigenvector_transport(signing: Signing, chi, f, alpha: float,
                             root: str = "large") -> TransportResult:
    """Push an adjacency eigenvector to a non-backtracking eigenvector.

    For A(chi) f = alpha f and a root beta of beta^2 - alpha beta + (d-1),
    g(u -> v) = conj(A[u, v]) f(u) - beta f(v) satisfies B(chi) g = beta g.
    The residual tolerance relaxes from 1e-7 to 1e-5 near the double root
    alpha^2 = 4 (d - 1).
    """
    base = signing.base
    d = base.d
    chi = tuple(int(c) for c in chi)
    f = np.asarray(f, dtype=np.complex128).ravel()
    if f.size != base.n:
        raise ValueError("f must have one entry per base vertex")
    A = signed_adjacency(signing, chi).matrix
    err = np.abs(A @ f - alpha * f).max()
    if err > 1e-8 * (1.0 + abs(alpha)) * max(1.0, np.abs(f).max()):
        raise ValueError("f is not an eigenvector of the signed adjacency "
                         f"for alpha (residual {err:.3e})")
    disc = complex(alpha) ** 2 - 4.0 * (d - 1)
    sq = np.sqrt(disc + 0j)
    roots = ((alpha + sq) / 2.0, (alpha - sq) / 2.0)
    if root == "large":
        beta = max(roots, key=abs)
    elif root == "small":
        beta = min(roots, key=abs)
    else:
        raise ValueError("root must be 'large' or 'small'")
    g = np.zeros(2 * base.m, dtype=np.complex128)
    for idx, (u, v) in enumerate(base.directed_edges()):
        g[idx] = np.conj(A[u, v]) * f[u] - beta * f[v]
    norm = np.abs(g).max()
    if norm < 1e-12:
        raise ValueError("transported vector vanished (degenerate f, alpha)")
    B = signed_nonbacktracking(signing, chi).matrix
    residual = float(np.abs(B @ g - beta * g).max() / norm)
    double_root = abs(disc) <= 1e-8 * 4.0 * (d - 1)
    tol = 1e-5 if double_root else 1e-7
    return TransportResult(g=g, beta=beta, roots=roots, residual=residual,
                           tol=tol, double_root=double_root,
                           passed=residual <= tol)


# ---------------------------------------------------------------------------
# boolean Rayleigh quotients and the expander mixing inequality
# ---------------------------------------------------------------------------

def boolean_rayleigh_max(mat, mode: str = "exhaustive", trials: int = 2000,
                         seed: int = 0) -> float:
    """max |1_S^T M 1_T| / sqrt(|S| |T|) over disjoint vertex subsets.

    The exhaustive mode scans every support of S exactly; the sampled mode
    draws random S and still solves T exactly, so it never exceeds the
    exhaustive value.
    """
    m = np.asarray(mat, dtype=np.float64)
    if mode == "exhaustive":
        return kernels.rayleigh_01_max(m)
    if mode != "sampled":
        raise ValueError("mode must be 'exhaustive' or 'sampled'")
    n = m.shape[0]
    if n == 0:
        return 0.0
    rng = np.random.default_rng(seed)
    best = 0.0
    for _ in range(trials):
        sel = rng.integers(0, 2, size=n).astype(bool)
        if not sel.any() or sel.all():
            continue
        w = m[sel].sum(axis=0)
        arr = np.sort(w[~sel])
        roots = np.sqrt(np.arange(1, arr.size + 1, dtype=np.float64))
        inner = max(np.abs(np.cumsum(arr) / roots).max(),
                    np.abs(np.cumsum(arr[::-1]) / roots).max())
        best = max(best, float(inner / np.sqrt(sel.sum())))
    return best


@dataclass(frozen=True)
class MixingReport:
    edge_count: float
    lhs: float
    rhs: float
    passed: bool


def mixing_check(G: RegularGraph, S, T, tol: float = 1e-9) -> MixingReport:
    """Expander mixing: |e(S,T) - d |S| |T| / n| <= lambda sqrt(|S| |T|)."""
    s_idx = sorted(set(int(x) for x in S))
    t_idx = sorted(set(int(x) for x in T))
    if not s_idx or not t_idx:
        raise ValueError("S and T must be nonempty")
    if min(s_idx + t_idx) < 0 or max(s_idx + t_idx) >= G.n:
        raise ValueError("vertex label out of range")
    A = G.adjacency_matrix()
    e_st = float(A[np.ix_(s_idx, t_idx)].sum())
    lhs = abs(e_st - G.d * len(s_idx) * len(t_idx) / G.n)
    rhs = lambda2(G) * math.sqrt(len(s_idx) * len(t_idx))
    return MixingReport(e_st, lhs, rhs, passed=lhs <= rhs + tol)
