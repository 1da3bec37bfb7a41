"""Command line front end.

Exit codes follow a strict contract so CI can tell outcomes apart:

* 0: run completed and every check is consistent with the proved theorems
     and the conjectured inequalities;
* 2: run completed but produced candidate counterexample certificates
     (a mathematical finding, not a software failure);
* 1: usage error, malformed input, or a numerical failure (including a
     violated theorem-status bound, which can only be a software bug).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass

from . import __version__
from .dynamics import OrbitConfig, mlp_check, orbit
from .errors import SmaleLabError
from .polycore import Poly, is_normalized, poly_from_json
from .report import (
    certificate_to_json,
    complex_pair,
    dumps,
    poly_payload,
    scalar_report_to_json,
    search_state_to_json,
    write_report,
)
from .rootfind import RootFindConfig, cached_critical_points
from .search import (
    SearchConfig,
    hunt_mlp,
    run_hunt,
    search_extremal_ds0,
    search_extremal_s0,
)
from .smale import CONJ_SLACK, SampleConfig, bound_report
from .verify import Certificate, exact_normalized_ratios

DEFAULT_SEED = 42


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    seed: int
    out: str | None
    fmt: str
    rootcfg: RootFindConfig
    jobs: int


def _default_seed() -> int:
    env = os.environ.get("SMALE_LAB_SEED")
    if env is None:
        return DEFAULT_SEED
    try:
        return int(env)
    except ValueError:
        raise SmaleLabError(f"SMALE_LAB_SEED must be an integer, got {env!r}")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="smale-lab",
        description="Mean value quantities of complex polynomials and their "
        "sup-norm function-algebra analogues.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(sp):
        sp.add_argument("--seed", type=int, default=None, help="RNG seed (default 42, or SMALE_LAB_SEED)")
        sp.add_argument("--out", type=str, default=None, help="report output path (default stdout)")
        sp.add_argument("--format", choices=("json", "csv"), default="json")
        sp.add_argument("--step-tol", type=float, default=1e-14, help="root iteration relative step tolerance")
        sp.add_argument("--max-iters", type=int, default=200, help="max root iteration sweeps")
        sp.add_argument("--cluster-tol", type=float, default=None, help="root clustering distance (default 1e-7 x Cauchy bound)")
        sp.add_argument("--jobs", type=int, default=1, help="worker cap for trial loops")

    sp = sub.add_parser("analyze", help="quotient statistics and theorem bounds for one polynomial")
    sp.add_argument("--poly", required=True, help='polynomial as JSON: {"coeffs": [[re,im],...]} or {"roots": ...}')
    sp.add_argument("--normalized", action="store_true", help="require p(0)=0, p'(0)=1 and report the normalized quantities")
    sp.add_argument("--samples", type=int, default=200)
    common(sp)

    sp = sub.add_parser("cstar", help="randomized conjecture sweep over algebra polynomials")
    sp.add_argument("--degree", type=int, required=True)
    sp.add_argument("--dim", type=int, required=True, help="number of Gelfand points k")
    sp.add_argument("--trials", type=int, required=True)
    sp.add_argument("--strong", action="store_true", help="also check the operator-order strong forms")
    common(sp)

    sp = sub.add_parser("search", help="extremal search / counterexample hunt")
    sp.add_argument("--mode", choices=("s0", "ds0", "cstar"), required=True)
    sp.add_argument("--degree", type=int, required=True)
    sp.add_argument("--dim", type=int, default=1)
    sp.add_argument("--restarts", type=int, default=64)
    sp.add_argument("--trials", type=int, default=1000)
    common(sp)

    sp = sub.add_parser("dynamics", help="critical orbit checks")
    group = sp.add_mutually_exclusive_group(required=True)
    group.add_argument("--poly", help="normalized polynomial as JSON")
    group.add_argument("--random-sweep", metavar="N,TRIALS", help="sweep random normalized degree-N polynomials")
    common(sp)
    return parser


def _emit(payload: dict, cfg: RunConfig, csv_rows: list[str] | None = None) -> None:
    if cfg.fmt == "csv" and csv_rows is not None:
        text = "\n".join(csv_rows) + "\n"
        if cfg.out:
            with open(cfg.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
        return
    if cfg.out:
        write_report(cfg.out, payload)
    else:
        sys.stdout.write(dumps(payload) + "\n")


def _parse_poly(raw: str) -> Poly:
    try:
        obj = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise SmaleLabError(f"--poly is not valid JSON: {exc}") from exc
    return poly_from_json(obj)


def _cmd_analyze(ns, cfg: RunConfig) -> int:
    start = time.monotonic()
    p = _parse_poly(ns.poly)
    if ns.normalized and not is_normalized(p):
        raise SmaleLabError("--normalized given but p(0) != 0 or p'(0) != 1")
    sampler = SampleConfig(n_samples=ns.samples, seed=cfg.seed)
    rep = bound_report(p, sampler)

    certificates: list[Certificate] = []
    if rep.s0 is not None and rep.ds0 is not None:
        n = rep.degree
        sharp = (n - 1) / n
        if rep.s0 > sharp + CONJ_SLACK or rep.ds0 < 1.0 / n - CONJ_SLACK:
            crits = list(cached_critical_points(p).roots)
            lo2, hi2 = exact_normalized_ratios(list(p.coeffs), crits)
            if rep.s0 > sharp + CONJ_SLACK and float(lo2) > sharp ** 2:
                certificates.append(
                    Certificate(
                        kind="s0_sharp",
                        degree=n,
                        dim=1,
                        trial=0,
                        seed=cfg.seed,
                        confirmed=True,
                        data={"poly": poly_payload(p), "s0": rep.s0,
                              "exact_min_ratio_sq": float(lo2)},
                    )
                )
            if rep.ds0 < 1.0 / n - CONJ_SLACK and float(hi2) < (1.0 / n) ** 2:
                certificates.append(
                    Certificate(
                        kind="ds0_dual",
                        degree=n,
                        dim=1,
                        trial=0,
                        seed=cfg.seed,
                        confirmed=True,
                        data={"poly": poly_payload(p), "ds0": rep.ds0,
                              "exact_max_ratio_sq": float(hi2)},
                    )
                )

    payload = {
        "kind": "analyze",
        "seed": cfg.seed,
        "samples": ns.samples,
        "poly": poly_payload(p),
        "normalized": is_normalized(p),
        "report": scalar_report_to_json(rep),
        "certificates": [certificate_to_json(c) for c in certificates],
        "wall_time_s": time.monotonic() - start,
    }
    _emit(payload, cfg)
    if not rep.all_theorems_pass:
        sys.stderr.write("theorem-status bound violated: software bug\n")
        return 1
    return 2 if certificates else 0


def _cmd_cstar(ns, cfg: RunConfig) -> int:
    start = time.monotonic()
    scfg = SearchConfig(seed=cfg.seed)
    result = run_hunt(
        ns.degree,
        ns.dim,
        ns.trials,
        scfg,
        strong=ns.strong,
        rootcfg=cfg.rootcfg,
        jobs=cfg.jobs,
    )
    payload = {
        "kind": "cstar",
        "model": f"C({ns.dim} points)",
        "degree": ns.degree,
        "dim": ns.dim,
        "trials": ns.trials,
        "seed": cfg.seed,
        "strong": ns.strong,
        "stats": {
            "trials_run": result.stats.trials_run,
            "trials_skipped": result.stats.trials_skipped,
            "worst_min_ratio": result.stats.worst_min_ratio,
            "best_min_ratio": result.stats.best_min_ratio,
            "worst_max_ratio": result.stats.worst_max_ratio,
            "sharp_margin": result.stats.sharp_margin,
            "dual_margin": result.stats.dual_margin,
        },
        "certificates": [certificate_to_json(c) for c in result.certificates],
        "wall_time_s": time.monotonic() - start,
    }
    _emit(payload, cfg)
    return 2 if result.certificates else 0


def _cmd_search(ns, cfg: RunConfig) -> int:
    start = time.monotonic()
    scfg = SearchConfig(restarts=ns.restarts, seed=cfg.seed)
    if ns.mode == "cstar":
        result = run_hunt(
            ns.degree, ns.dim, ns.trials, scfg, rootcfg=cfg.rootcfg, jobs=cfg.jobs
        )
        payload = {
            "kind": "search",
            "mode": "cstar",
            "degree": ns.degree,
            "dim": ns.dim,
            "trials": ns.trials,
            "seed": cfg.seed,
            "certificates": [certificate_to_json(c) for c in result.certificates],
            "worst_min_ratio": result.stats.worst_min_ratio,
            "worst_max_ratio": result.stats.worst_max_ratio,
            "wall_time_s": time.monotonic() - start,
        }
        rows = ["n,k,best_value,bound,pass"]
        rows.append(
            f"{ns.degree},{ns.dim},{result.stats.worst_min_ratio:.17g},"
            f"{(ns.degree - 1) / ns.degree:.17g},{not result.certificates}"
        )
        _emit(payload, cfg, rows)
        return 2 if result.certificates else 0

    n = ns.degree
    if ns.mode == "s0":
        state = search_extremal_s0(n, scfg)
        conjectured = (n - 1) / n
        # the searched supremum may not exceed the weak ceiling 1; beyond
        # the sharp value it is a candidate finding
        certificates = []
        if state.objective > conjectured + 1e-6:
            from .rootfind import critical_points

            ws = list(critical_points(state.best_poly).roots)
            lo2, _ = exact_normalized_ratios(list(state.best_poly.coeffs), ws)
            certificates.append(
                Certificate(
                    kind="s0_sharp",
                    degree=n,
                    dim=1,
                    trial=0,
                    seed=cfg.seed,
                    confirmed=float(lo2) > conjectured ** 2,
                    data={
                        "poly": poly_payload(state.best_poly),
                        "objective": state.objective,
                        "exact_min_ratio_sq": float(lo2),
                    },
                )
            )
    else:
        state = search_extremal_ds0(n, scfg)
        conjectured = 1.0 / n
        certificates = []
        if state.objective < conjectured - 1e-6:
            from .rootfind import critical_points

            ws = list(critical_points(state.best_poly).roots)
            _, hi2 = exact_normalized_ratios(list(state.best_poly.coeffs), ws)
            certificates.append(
                Certificate(
                    kind="ds0_dual",
                    degree=n,
                    dim=1,
                    trial=0,
                    seed=cfg.seed,
                    confirmed=float(hi2) < conjectured ** 2,
                    data={
                        "poly": poly_payload(state.best_poly),
                        "objective": state.objective,
                        "exact_max_ratio_sq": float(hi2),
                    },
                )
            )

    payload = {
        "kind": "search",
        "mode": ns.mode,
        "degree": n,
        "seed": cfg.seed,
        "restarts": ns.restarts,
        "conjectured_value": conjectured,
        "state": search_state_to_json(state),
        "certificates": [certificate_to_json(c) for c in certificates],
        "wall_time_s": time.monotonic() - start,
    }
    rows = ["n,k,best_value,bound,pass"]
    rows.append(
        f"{n},1,{state.objective:.17g},{conjectured:.17g},{not certificates}"
    )
    _emit(payload, cfg, rows)
    return 2 if certificates else 0


def _cmd_dynamics(ns, cfg: RunConfig) -> int:
    start = time.monotonic()
    ocfg = OrbitConfig()
    if ns.poly is not None:
        p = _parse_poly(ns.poly)
        ok, res = mlp_check(p, ocfg)
        crits = cached_critical_points(p).roots
        orbits = []
        for w in crits:
            r = orbit(p, w, ocfg)
            orbits.append(
                {
                    "w0": complex_pair(r.w0),
                    "ratio": r.ratio,
                    "verdict": r.verdict,
                    "trajectory_len": r.trajectory_len,
                    "final_modulus": r.final_modulus,
                }
            )
        payload = {
            "kind": "dynamics",
            "seed": cfg.seed,
            "poly": poly_payload(p),
            "mlp_pass": ok,
            "witness": complex_pair(res.w0),
            "orbits": orbits,
            "certificates": [],
            "wall_time_s": time.monotonic() - start,
        }
        _emit(payload, cfg)
        return 0 if ok else 2

    try:
        deg_text, trials_text = ns.random_sweep.split(",")
        degree = int(deg_text)
        trials = int(trials_text)
    except ValueError:
        raise SmaleLabError("--random-sweep expects N,TRIALS (e.g. 3,100)")
    certs, passed = hunt_mlp(degree, trials, seed=cfg.seed, cfg=ocfg)
    payload = {
        "kind": "dynamics",
        "seed": cfg.seed,
        "sweep_degree": degree,
        "trials": trials,
        "passed": passed,
        "certificates": [certificate_to_json(c) for c in certs],
        "wall_time_s": time.monotonic() - start,
    }
    _emit(payload, cfg)
    return 2 if certs else 0


def run(argv) -> int:
    parser = _build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    try:
        seed = ns.seed if ns.seed is not None else _default_seed()
        cfg = RunConfig(
            subcommand=ns.subcommand,
            seed=seed,
            out=ns.out,
            fmt=ns.format,
            rootcfg=RootFindConfig(
                step_tol=ns.step_tol,
                max_iters=ns.max_iters,
                cluster_tol=ns.cluster_tol,
            ),
            jobs=max(1, ns.jobs),
        )
        handler = {
            "analyze": _cmd_analyze,
            "cstar": _cmd_cstar,
            "search": _cmd_search,
            "dynamics": _cmd_dynamics,
        }[ns.subcommand]
        return handler(ns, cfg)
    except SmaleLabError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
