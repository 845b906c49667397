"""Small-bias supports over (Z_l')^m and expander-walk signings.

The bias of a set against a character is the magnitude of the character
sum averaged over the set; a nu-biased set keeps every nontrivial bias
at most nu.  Signings drawn by a random walk on an auxiliary expander
inherit tail bounds strong enough for the derandomized searches.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import kernels
from .graphs import RegularGraph, Signing, random_regular_dense
from .groups import AbelianGroup

EXACT_CHAR_CAP = 1 << 20
_SAMPLED_TRIALS = 2048


def bias_exact(support, ellp: int) -> float:
    """Exact max nontrivial character bias; refuses above the character cap."""
    return kernels.bias_scan(support, ellp)


def bias_sampled(support, ellp: int, trials: int = _SAMPLED_TRIALS,
                 seed: int = 0) -> float:
    """Lower estimate of the max bias from random nontrivial characters."""
    sup = np.ascontiguousarray(support, dtype=np.int64) % ellp
    n_sup, m = sup.shape
    rng = np.random.default_rng(seed)
    angles = 2.0 * np.pi * np.arange(ellp) / ellp
    cos_t, sin_t = np.cos(angles), np.sin(angles)
    best = 0.0
    done = 0
    while done < trials:
        chars = rng.integers(0, ellp, size=(trials - done, m))
        chars = chars[np.any(chars != 0, axis=1)]
        if chars.shape[0] == 0:
            continue
        done += chars.shape[0]
        res = (sup @ chars.T) % ellp
        re = cos_t[res].sum(axis=0)
        im = sin_t[res].sum(axis=0)
        best = max(best, float(np.hypot(re, im).max() / n_sup))
    return best


@dataclass
class BiasedSet:
    """A support in (Z_ellp)^m with a claimed and a verified bias."""

    ellp: int
    m: int
    support: np.ndarray
    claimed_bias: float
    verified: dict

    def __post_init__(self):
        sup = np.asarray(self.support, dtype=np.int64)
        if sup.ndim != 2 or sup.shape[1] != self.m:
            raise ValueError("support must be (N, m)")
        if sup.shape[0] == 0:
            raise ValueError("support is empty")
        self.support = sup % self.ellp

    @property
    def size(self) -> int:
        return int(self.support.shape[0])

    def verify(self, trials: int = _SAMPLED_TRIALS, seed: int = 0) -> dict:
        """Re-measure the bias, exactly when the character space allows."""
        if self.ellp ** self.m <= EXACT_CHAR_CAP:
            value = bias_exact(self.support, self.ellp)
            report = {"mode": "exact", "value": value}
        else:
            value = bias_sampled(self.support, self.ellp, trials, seed)
            report = {"mode": "sampled", "value": value, "trials": trials,
                      "seed": seed}
        return report

    def translate(self, h: Sequence[int]) -> "BiasedSet":
        """Shift every support point by h; bias is invariant under this."""
        h = np.asarray(h, dtype=np.int64) % self.ellp
        if h.shape != (self.m,):
            raise ValueError("translation must have m coordinates")
        return BiasedSet(self.ellp, self.m, (self.support + h) % self.ellp,
                         self.claimed_bias, dict(self.verified))

    def to_json(self) -> dict:
        return {
            "ellp": self.ellp,
            "m": self.m,
            "support": [[int(x) for x in row] for row in self.support],
            "claimed_bias": float(self.claimed_bias),
            "verified": self.verified,
        }

    @staticmethod
    def from_json(payload: dict) -> "BiasedSet":
        return BiasedSet(int(payload["ellp"]), int(payload["m"]),
                         np.asarray(payload["support"], dtype=np.int64),
                         float(payload["claimed_bias"]),
                         dict(payload["verified"]))


def _full_product(ellp: int, m: int) -> np.ndarray:
    grids = np.meshgrid(*[np.arange(ellp)] * m, indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=1).astype(np.int64)


def _random_support(rng, ellp: int, m: int, size: int) -> np.ndarray:
    total = ellp ** m
    size = min(size, total)
    if total <= EXACT_CHAR_CAP:
        idx = np.sort(rng.choice(total, size=size, replace=False))
        out = np.empty((size, m), dtype=np.int64)
        t = idx.copy()
        for i in range(m):
            out[:, i] = t % ellp
            t //= ellp
        return out
    seen: set[bytes] = set()
    rows = []
    while len(rows) < size:
        tup = rng.integers(0, ellp, size=m, dtype=np.int64)
        key = tup.tobytes()
        if key not in seen:
            seen.add(key)
            rows.append(tup)
    return np.array(rows, dtype=np.int64)


def biased_set_search(ellp: int, m: int, nu: float, size_budget: int,
                      trial_budget: int = 64, seed: int = 0) -> BiasedSet:
    """Find a verified nu-biased support of at most size_budget points.

    Deterministic for fixed arguments: the identity singleton first (bias
    exactly 1), the full product set when it fits the budget (bias exactly
    0), then random supports of budget size.  Every returned set carries
    the verification report that admitted it.
    """
    if ellp < 2 or m < 1:
        raise ValueError("need ellp >= 2 and m >= 1")
    if not 0.0 <= nu <= 1.0:
        raise ValueError("nu must lie in [0, 1]")
    if size_budget < 1:
        raise ValueError("size budget must be positive")
    rng = np.random.default_rng(seed)
    total = ellp ** m
    for trial in range(trial_budget):
        if trial == 0:
            support = np.zeros((1, m), dtype=np.int64)
        elif trial == 1 and total <= size_budget:
            support = _full_product(ellp, m)
        else:
            support = _random_support(rng, ellp, m, size_budget)
        cand = BiasedSet(ellp, m, support, claimed_bias=nu, verified={})
        report = cand.verify(seed=seed)
        if report["value"] <= nu + 1e-12:
            cand.verified = report
            return cand
    raise RuntimeError(f"no nu={nu} support found within {trial_budget} trials")


# ---------------------------------------------------------------------------
# expander-walk signings
# ---------------------------------------------------------------------------

AUX_LAMBDA_FACTOR = 3.0


def effective_walk_degree(ell: int, dprime: int) -> int:
    """Auxiliary degree capped so a simple d'-regular graph on [ell] exists."""
    if ell < 3:
        raise ValueError("walk signings need fiber size >= 3")
    if dprime < 2 or dprime % 2:
        raise ValueError("dprime must be an even integer >= 2")
    return min(dprime, 2 * ((ell - 1) // 2))


def _aux_expander(ell: int, d_eff: int, seed_seq: np.random.SeedSequence,
                  max_attempts: int = 256) -> tuple[RegularGraph, float]:
    from .spectral import lambda2
    bound = AUX_LAMBDA_FACTOR * math.sqrt(d_eff - 1)
    for child in seed_seq.spawn(max_attempts):
        g = random_regular_dense(ell, d_eff, np.random.default_rng(child))
        lam = lambda2(g)
        if lam <= bound:
            return g, lam
    raise RuntimeError("no auxiliary expander met the spectral bound")


@dataclass(frozen=True)
class WalkSigning:
    """A Z_ell signing read off a random walk on an auxiliary expander."""

    signing: Signing
    aux: RegularGraph
    aux_lambda: float
    aux_bound: float
    dprime_used: int
    start: int
    walk: tuple[int, ...]
    seed: object

    def certificate(self) -> dict:
        return {
            "kind": "expander-walk",
            "ell": self.signing.group.fiber_size,
            "dprime_used": self.dprime_used,
            "aux_hash": self.aux.content_hash(),
            "aux_lambda": self.aux_lambda,
            "aux_bound": self.aux_bound,
            "start": self.start,
            "seed": list(self.seed) if isinstance(self.seed, tuple) else self.seed,
        }


def expander_walk_signing(base: RegularGraph, ell: int, dprime: int = 36,
                          seed=0) -> WalkSigning:
    """Sign the base's canonical edges by the vertices of one expander walk.

    An auxiliary d'-regular graph on [ell] is redrawn until its lambda is
    at most 3 sqrt(d' - 1); a uniform-start walk of base.m vertices then
    supplies one Z_ell exponent per canonical edge.
    """
    d_eff = effective_walk_degree(ell, dprime)
    ss = np.random.SeedSequence(seed)
    aux_ss, walk_ss = ss.spawn(2)
    aux, aux_lambda = _aux_expander(ell, d_eff, aux_ss)
    rng = np.random.default_rng(walk_ss)
    start = int(rng.integers(ell))
    walk = [start]
    for _ in range(base.m - 1):
        walk.append(int(aux.adj[walk[-1], rng.integers(d_eff)]))
    group = AbelianGroup.cyclic(ell)
    values = np.array(walk, dtype=np.int64).reshape(-1, 1)
    signing = Signing(base, group, values)
    return WalkSigning(signing=signing, aux=aux, aux_lambda=aux_lambda,
                       aux_bound=AUX_LAMBDA_FACTOR * math.sqrt(d_eff - 1),
                       dprime_used=d_eff, start=start, walk=tuple(walk),
                       seed=seed)


@dataclass(frozen=True)
class HoeffdingReport:
    trials: int
    threshold: float
    empirical_re: float
    empirical_im: float
    bound: float
    sigma: float
    passed: bool


def hoeffding_tail_check(base: RegularGraph, ell: int, edge_subset,
                         threshold: float, trials: int = 10000, seed=0,
                         dprime: int = 36) -> HoeffdingReport:
    """Empirical tail of walk-signing character sums against the theory bound.

    For the character chi = (1) of Z_ell, sums sum_{e in U} chi(s(e)) over
    fresh walks should exceed `threshold` in absolute value (separately in
    the real and imaginary parts) with frequency at most
    2 exp(-t^2 / (128 e |U|)), up to 3 sigma of sampling slack.
    """
    edge_ids = sorted(set(int(e) for e in edge_subset))
    if edge_ids and (edge_ids[0] < 0 or edge_ids[-1] >= base.m):
        raise ValueError("edge id out of range")
    if trials < 1:
        raise ValueError("trials must be positive")
    d_eff = effective_walk_degree(ell, dprime)
    ss = np.random.SeedSequence(seed)
    aux_ss, walk_ss = ss.spawn(2)
    aux, _ = _aux_expander(ell, d_eff, aux_ss)
    rng = np.random.default_rng(walk_ss)
    u_size = len(edge_ids)
    if u_size == 0:
        emp_re = emp_im = float(threshold <= 0.0)
        bound = 2.0 if threshold <= 0.0 else 0.0
    else:
        cur = rng.integers(ell, size=trials)
        values = np.empty((trials, base.m), dtype=np.int64)
        values[:, 0] = cur
        for step in range(1, base.m):
            draws = rng.integers(d_eff, size=trials)
            cur = aux.adj[cur, draws]
            values[:, step] = cur
        angles = 2.0 * np.pi * values[:, edge_ids] / ell
        re = np.cos(angles).sum(axis=1)
        im = np.sin(angles).sum(axis=1)
        emp_re = float((np.abs(re) >= threshold).mean())
        emp_im = float((np.abs(im) >= threshold).mean())
        bound = 2.0 * math.exp(-threshold ** 2 / (128.0 * math.e * u_size))
    b = min(bound, 1.0)
    sigma = math.sqrt(b * (1.0 - b) / trials)
    passed = (emp_re <= bound + 3.0 * sigma) and (emp_im <= bound + 3.0 * sigma)
    return HoeffdingReport(trials=trials, threshold=float(threshold),
                           empirical_re=emp_re, empirical_im=emp_im,
                           bound=bound, sigma=sigma, passed=passed)
