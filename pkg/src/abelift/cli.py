"""Command line front end.

Subcommands: gen-base, spectrum, lift-search, hikes, pseudorandom, codes.
Exit codes: 0 success, 1 a requested check failed (a machine-readable
failure report is still written), 2 usage errors.  Artifacts are canonical
JSON with sorted keys and embed the tool version, a hash of the run
configuration, and hashes of every input file, so reruns are byte
identical; --timing appends wall-clock data and opts out of that.
"""
from __future__ import annotations

import argparse
import os
import sys
import time

import numpy as np

from . import codes, hikes, pseudorandom, search, serial, spectral
from .graphs import (RegularGraph, Signing, complete_graph, cycle_graph,
                     lift, petersen_graph, random_regular)
from .groups import AbelianGroup


def _workers_default() -> int:
    env = os.environ.get("ABELIFT_WORKERS", "").strip()
    if env.isdigit() and int(env) > 0:
        return int(env)
    return 1


def _meta(args: argparse.Namespace, input_paths: list[str]) -> dict:
    from . import __version__
    config = {k: v for k, v in sorted(vars(args).items())
              if k not in ("func", "json", "out", "timing")}
    return {
        "tool": {"name": "abelift", "version": __version__},
        "config_hash": serial.object_hash(config),
        "inputs": {p: "sha256:" + serial.file_hash(p)
                   for p in sorted(set(input_paths))},
    }


def _emit(args, payload: dict, started: float) -> None:
    if getattr(args, "timing", False):
        payload = dict(payload)
        payload["runtime"] = {"seconds": time.perf_counter() - started}
    text = serial.canonical_json(payload)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    if args.json or not args.out:
        print(text)


def _load_graph(path: str) -> RegularGraph:
    payload = serial.load_json(path)
    if isinstance(payload.get("graph"), dict):
        payload = payload["graph"]
    return RegularGraph.from_json(payload)


def _parse_ints(text: str) -> list[int]:
    text = text.strip()
    if not text:
        return []
    return [int(x) for x in text.replace(",", " ").split()]


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_gen_base(args) -> int:
    started = time.perf_counter()
    if args.kind == "random":
        if args.n is None or args.d is None:
            raise SystemExit("gen-base random needs --n and --d")
        g = random_regular(args.n, args.d, seed=args.seed)
    elif args.kind == "cycle":
        g = cycle_graph(args.n)
    elif args.kind == "complete":
        g = complete_graph(args.n)
    else:
        g = petersen_graph()
    payload = {"meta": _meta(args, []), "graph": g.to_json(),
               "graph_hash": g.content_hash()}
    _emit(args, payload, started)
    return 0


def _signing_from_file(base: RegularGraph, path: str) -> Signing:
    return Signing.from_json(base, serial.load_json(path))


def cmd_spectrum(args) -> int:
    started = time.perf_counter()
    base = _load_graph(args.graph)
    inputs = [args.graph]
    payload: dict = {"check": args.check}
    failed = False
    if args.check == "union":
        signing = _signing_from_file(base, args.signing)
        inputs.append(args.signing)
        rep = spectral.spectrum_union_check(signing, tol=args.tol)
        lifted = lift(base, signing, allow_disconnected=True)
        eigs = spectral.adjacency_spectrum(lifted)
        payload.update(adjacency_distance=rep.adjacency_distance,
                       nb_distance=rep.nb_distance, tol=rep.tol,
                       passed=rep.passed,
                       lambda_modulus=spectral.lambda2(lifted),
                       lambda_signed=spectral.lambda2_signed(lifted),
                       eigenvalues=[[float(x), 0.0] for x in eigs])
        failed = not rep.passed
    elif args.check == "ihara":
        signing = _signing_from_file(base, args.signing)
        inputs.append(args.signing)
        chi = _parse_ints(args.chi) if args.chi else None
        rep = spectral.ihara_check(signing, chi)
        payload.update(lhs=rep.lhs, rho_b=rep.rho_b, bound=rep.bound,
                       trivial=rep.trivial, passed=rep.passed)
        failed = not rep.passed
    else:  # mixing
        rep = spectral.mixing_check(base, _parse_ints(args.set_s),
                                    _parse_ints(args.set_t))
        payload.update(edge_count=rep.edge_count, lhs=rep.lhs, rhs=rep.rhs,
                       passed=rep.passed)
        failed = not rep.passed
    payload["meta"] = _meta(args, inputs)
    if failed:
        payload["failed"] = True
    _emit(args, payload, started)
    return 1 if failed else 0


def cmd_lift_search(args) -> int:
    started = time.perf_counter()
    base = _load_graph(args.graph)
    inputs = [args.graph]
    if args.mode == "walk":
        result = search.exponential_regime_build(
            base, args.ell, args.seeds, dprime=args.dprime,
            master_seed=args.master_seed, target=args.target,
            crosscheck_every=args.crosscheck_every, workers=args.workers)
    else:
        payload = serial.load_json(args.support)
        if isinstance(payload.get("biased_set"), dict):
            payload = payload["biased_set"]
        dist = pseudorandom.BiasedSet.from_json(payload)
        inputs.append(args.support)
        group = AbelianGroup.cyclic(args.ell)
        result = search.derandomized_lift_search(
            base, group, dist, target=args.target,
            crosscheck_every=args.crosscheck_every, workers=args.workers)
    payload = {"meta": _meta(args, inputs), "certificate": result.certificate}
    failed = args.target is not None and not result.certificate["met_target"]
    if failed:
        payload["failed"] = True
    _emit(args, payload, started)
    return 1 if failed else 0


def cmd_hikes(args) -> int:
    started = time.perf_counter()
    payload: dict = {}
    inputs = []
    failed = False
    base = _load_graph(args.graph)
    inputs.append(args.graph)
    if args.action == "count":
        count = hikes.enumerate_hikes(base, args.k,
                                      singleton_free_only=not args.all_walks)
        payload.update(k=args.k, count=count,
                       singleton_free=not args.all_walks)
    elif args.action == "bounds":
        b = hikes.count_bounds(base.n, base.d, args.k, args.r,
                               delta=args.delta)
        payload.update(k=args.k, gamma1=b.gamma1, bound1=b.bound1,
                       gamma2=b.gamma2, bound2=b.bound2, r_used=b.r_used,
                       r_floored=b.r_floored)
    elif args.action == "check-bound":
        count = hikes.enumerate_hikes(base, args.k - 1,
                                      singleton_free_only=True)
        b = hikes.count_bounds(base.n, base.d, args.k, args.r)
        ok = count <= b.bound1
        payload.update(k=args.k, count=count, bound1=b.bound1, passed=ok)
        failed = not ok
    else:  # mop
        rep = hikes.mop_excess_check(base, args.r)
        payload.update(n_vertices=rep.n_vertices, excess=rep.excess,
                       bound=rep.bound, hypothesis_ok=rep.hypothesis_ok,
                       passed=rep.passed)
        failed = rep.passed is False
    payload["meta"] = _meta(args, inputs)
    if failed:
        payload["failed"] = True
    _emit(args, payload, started)
    return 1 if failed else 0


def cmd_pseudorandom(args) -> int:
    started = time.perf_counter()
    inputs = []
    failed = False
    if args.action == "biased-set":
        bs = pseudorandom.biased_set_search(
            args.ellp, args.m, args.nu, args.size_budget,
            trial_budget=args.trial_budget, seed=args.seed)
        payload = {"biased_set": bs.to_json()}
    else:  # hoeffding
        base = _load_graph(args.graph)
        inputs.append(args.graph)
        edge_ids = (_parse_ints(args.edges) if args.edges
                    else list(range(min(args.edge_count, base.m))))
        rep = pseudorandom.hoeffding_tail_check(
            base, args.ell, edge_ids, args.threshold, trials=args.trials,
            seed=args.seed, dprime=args.dprime)
        payload = {"trials": rep.trials, "threshold": rep.threshold,
                   "empirical_re": rep.empirical_re,
                   "empirical_im": rep.empirical_im,
                   "bound": rep.bound, "sigma": rep.sigma,
                   "passed": rep.passed}
        failed = not rep.passed
    payload["meta"] = _meta(args, inputs)
    if failed:
        payload["failed"] = True
    _emit(args, payload, started)
    return 1 if failed else 0


def cmd_codes(args) -> int:
    started = time.perf_counter()
    inputs = []
    failed = False
    if args.action == "toric":
        code = codes.toric_code(args.ell)
        dist = None
        if args.distance:
            rep = codes.min_distance(code, mode=args.distance,
                                     trials=args.trials, seed=args.seed)
            dist = {"mode": rep.mode, "value": rep.value,
                    "certified": rep.certified, "dx": rep.dx, "dz": rep.dz}
        payload = {"css": code.to_json(distance=dist)}
    elif args.action == "tanner":
        cert_payload = serial.load_json(args.cert)
        inputs.append(args.cert)
        cert = cert_payload.get("certificate", cert_payload)
        local = (codes.LinearCodeF2.even_weight(
                    RegularGraph.from_json(cert["base"]).d)
                 if args.local == "even-weight"
                 else codes.LinearCodeF2.repetition(
                    RegularGraph.from_json(cert["base"]).d))
        H = codes.tanner_from_certificate(cert, local)
        payload = {"tanner": {"rows": int(H.shape[0]), "cols": int(H.shape[1]),
                              "dimension": codes.code_dimension(H),
                              "circulant": codes.circulant_structure_check(
                                  H, AbelianGroup.from_json(
                                      cert["group"]).fiber_size),
                              "parity_hash": serial.object_hash(H.tolist())}}
        if args.alist:
            codes.write_alist(H, args.alist)
            payload["tanner"]["alist"] = args.alist
    else:  # css-valid
        a = serial.load_json(args.hx)
        b = serial.load_json(args.hz)
        inputs.extend([args.hx, args.hz])
        ok = codes.css_valid(np.asarray(a), np.asarray(b))
        payload = {"css_valid": ok}
        failed = not ok
    payload["meta"] = _meta(args, inputs)
    if failed:
        payload["failed"] = True
    _emit(args, payload, started)
    return 1 if failed else 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    from . import __version__
    p = argparse.ArgumentParser(prog="abelift")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--out", help="artifact path (canonical JSON)")
        sp.add_argument("--json", action="store_true",
                        help="print the artifact to stdout")
        sp.add_argument("--timing", action="store_true",
                        help="append wall-clock data (artifact no longer "
                             "byte-reproducible)")

    g = sub.add_parser("gen-base", help="generate a base graph")
    g.add_argument("--kind", choices=["random", "cycle", "complete",
                                      "petersen"], default="random")
    g.add_argument("--n", type=int)
    g.add_argument("--d", type=int)
    g.add_argument("--seed", type=int, default=0)
    common(g)
    g.set_defaults(func=cmd_gen_base)

    s = sub.add_parser("spectrum", help="spectral checks on graphs and lifts")
    s.add_argument("--graph", required=True)
    s.add_argument("--signing")
    s.add_argument("--check", choices=["union", "ihara", "mixing"],
                   default="union")
    s.add_argument("--chi", help="character exponents, comma separated")
    s.add_argument("--tol", type=float, default=1e-8)
    s.add_argument("--set-s", dest="set_s", help="vertex set S")
    s.add_argument("--set-t", dest="set_t", help="vertex set T")
    common(s)
    s.set_defaults(func=cmd_spectrum)

    ls = sub.add_parser("lift-search", help="search signings for small lambda")
    ls.add_argument("--graph", required=True)
    ls.add_argument("--mode", choices=["walk", "support"], default="walk")
    ls.add_argument("--ell", type=int, required=True)
    ls.add_argument("--seeds", type=int, default=64)
    ls.add_argument("--master-seed", type=int, default=0)
    ls.add_argument("--dprime", type=int, default=36)
    ls.add_argument("--target", type=float)
    ls.add_argument("--support", help="biased set JSON for support mode")
    ls.add_argument("--crosscheck-every", type=int, default=50)
    ls.add_argument("--workers", type=int, default=_workers_default())
    common(ls)
    ls.set_defaults(func=cmd_lift_search)

    h = sub.add_parser("hikes", help="hike counts, bounds and excess checks")
    h.add_argument("action", choices=["count", "bounds", "check-bound", "mop"])
    h.add_argument("--graph", required=True)
    h.add_argument("--k", type=int, default=2)
    h.add_argument("--r", type=int, default=1)
    h.add_argument("--delta", type=float)
    h.add_argument("--all-walks", action="store_true",
                   help="count all hikes, not only singleton-free ones")
    common(h)
    h.set_defaults(func=cmd_hikes)

    pr = sub.add_parser("pseudorandom", help="biased sets and walk tails")
    pr.add_argument("action", choices=["biased-set", "hoeffding"])
    pr.add_argument("--ellp", type=int, default=2)
    pr.add_argument("--m", type=int, default=2)
    pr.add_argument("--nu", type=float, default=0.5)
    pr.add_argument("--size-budget", type=int, default=64)
    pr.add_argument("--trial-budget", type=int, default=64)
    pr.add_argument("--seed", type=int, default=0)
    pr.add_argument("--graph")
    pr.add_argument("--ell", type=int, default=8)
    pr.add_argument("--edges", help="edge ids, comma separated")
    pr.add_argument("--edge-count", type=int, default=10)
    pr.add_argument("--threshold", type=float, default=4.0)
    pr.add_argument("--trials", type=int, default=10000)
    pr.add_argument("--dprime", type=int, default=36)
    common(pr)
    pr.set_defaults(func=cmd_pseudorandom)

    c = sub.add_parser("codes", help="CSS and Tanner code construction")
    c.add_argument("action", choices=["toric", "tanner", "css-valid"])
    c.add_argument("--ell", type=int, default=2)
    c.add_argument("--distance", choices=["exact", "information-set"])
    c.add_argument("--trials", type=int, default=200)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--cert", help="lift certificate JSON")
    c.add_argument("--local", choices=["even-weight", "repetition"],
                   default="even-weight")
    c.add_argument("--alist", help="also export the parity in alist format")
    c.add_argument("--hx", help="JSON 0/1 matrix file")
    c.add_argument("--hz", help="JSON 0/1 matrix file")
    common(c)
    c.set_defaults(func=cmd_codes)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FileNotFoundError as exc:
        parser.exit(2, f"abelift: missing input file: {exc.filename}\n")
    except (ValueError, KeyError) as exc:
        print(serial.canonical_json({"failed": True, "error": str(exc)}))
        return 1


if __name__ == "__main__":
    sys.exit(main())
