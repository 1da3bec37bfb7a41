"""Extremal search over normalized polynomials and conjecture hunting.

The extremal searches parametrize a normalized polynomial by its critical
points c_1 .. c_{n-1}: the derivative is prod (1 - z/c_j), which fixes
P'(0) = 1, and integrating with P(0) = 0 fixes the rest.  Moduli live in
log-radial coordinates with bound constraints, so the optimizer cannot
drive a critical point to 0 or infinity, and a collision guard keeps the
objective defined.  The objective is a min (or max) over branches, hence
not smooth at witness switches; a derivative-free simplex with many seeded
restarts is used instead of gradients.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .cstar import (
    DEFAULT_PRODUCT_CAP,
    CStarElement,
    CStarPoly,
    check_strong_forms,
    cstar_derivative_eval,
    enumerate_critical_set,
)
from .dynamics import OrbitConfig, mlp_check
from .errors import CapacityError, DomainError, SmaleLabError
from .polycore import (
    CRITICAL_TOL,
    Poly,
    antiderivative_zero_at_origin,
    divided_difference,
    from_coeffs,
    from_roots,
    poly_to_json,
)
from .rng import Stream
from .rootfind import RootFindConfig, cached_critical_points
from .smale import CONJ_SLACK, SAMPLER_MARGIN
from .verify import (
    Certificate,
    exact_cstar_quotients,
    exact_normalized_ratios,
)

_STREAM_SEARCH = 23
_STREAM_HUNT = 29
_STREAM_MLP = 31

_ROOT_DRAW_RADIUS = 2.0


@dataclass(frozen=True)
class SearchConfig:
    restarts: int = 64
    seed: int = 42
    max_iter: int = 800
    radius_bounds: tuple[float, float] = (1e-2, 1e2)
    collision_tol: float = 1e-6
    cap: int = DEFAULT_PRODUCT_CAP


@dataclass(frozen=True)
class RestartRecord:
    index: int
    objective: float
    best_so_far: float


@dataclass(frozen=True)
class SearchState:
    params: tuple[float, ...]
    objective: float
    best_poly: Poly
    restarts_done: int
    table: tuple[RestartRecord, ...]


def critical_points_from_params(params) -> list[complex]:
    """Decode (log r, angle) pairs into critical points."""
    cs = []
    for j in range(0, len(params), 2):
        r = math.exp(params[j])
        cs.append(complex(r * math.cos(params[j + 1]), r * math.sin(params[j + 1])))
    return cs


def poly_from_critical_points(cs) -> Poly:
    """The normalized polynomial whose critical points are exactly cs.

    The derivative is prod (z - c_j) divided by its own value at 0, so the
    constant term is exactly 1.0 and the antiderivative is normalized with
    no rounding residue.
    """
    q = from_roots(cs)
    q0 = q.coeffs[0]
    dp = Poly((1.0 + 0.0j,) + tuple(coeff / q0 for coeff in q.coeffs[1:]))
    return antiderivative_zero_at_origin(dp)


def _normalized_extremes(cs) -> tuple[float, float]:
    """(min, max) over critical points of |P(c)/c| for the decoded poly."""
    p = poly_from_critical_points(cs)
    inv = 1.0 / abs(p.coeffs[1])
    vals = [abs(divided_difference(p, c, 0.0 + 0.0j)) * inv for c in cs]
    return min(vals), max(vals)


def _search(n: int, cfg: SearchConfig, maximize: bool) -> SearchState:
    from scipy.optimize import minimize

    if not 2 <= n <= 12:
        raise DomainError(f"search supports degrees 2..12, got {n}")
    m = n - 1
    lo = math.log(cfg.radius_bounds[0])
    hi = math.log(cfg.radius_bounds[1])
    bounds = []
    for _ in range(m):
        bounds.append((lo, hi))
        bounds.append((-math.inf, math.inf))
    sign = -1.0 if maximize else 1.0

    def objective(x) -> float:
        cs = critical_points_from_params([float(v) for v in x])
        for i in range(len(cs)):
            for j in range(i + 1, len(cs)):
                if abs(cs[i] - cs[j]) < cfg.collision_tol:
                    return math.inf
        smin, smax = _normalized_extremes(cs)
        return sign * (smin if maximize else smax)

    stream = Stream(cfg.seed, _STREAM_SEARCH).derive(n).derive(1 if maximize else 2)
    best_val: float | None = None
    best_x: list[float] | None = None
    table = []
    for r in range(cfg.restarts):
        st = stream.derive(r)
        x0 = []
        for _ in range(m):
            x0.append(st.uniform_in(math.log(0.3), math.log(3.0)))
            x0.append(st.uniform_in(0.0, 2.0 * math.pi))
        res = minimize(
            objective,
            x0,
            method="Nelder-Mead",
            bounds=bounds,
            options={
                "maxiter": cfg.max_iter,
                "xatol": 1e-9,
                "fatol": 1e-11,
                "adaptive": m > 1,
            },
        )
        val = sign * float(res.fun)
        better = best_val is None or (val > best_val if maximize else val < best_val)
        if math.isfinite(val) and better:
            best_val = val
            best_x = [float(v) for v in res.x]
        assert best_val is not None
        table.append(RestartRecord(r, val, best_val))

    assert best_x is not None and best_val is not None
    cs = critical_points_from_params(best_x)
    return SearchState(
        params=tuple(best_x),
        objective=best_val,
        best_poly=poly_from_critical_points(cs),
        restarts_done=cfg.restarts,
        table=tuple(table),
    )


def search_extremal_s0(n: int, cfg: SearchConfig = SearchConfig()) -> SearchState:
    """Maximize the minimized normalized quotient over degree-n polynomials."""
    return _search(n, cfg, maximize=True)


def search_extremal_ds0(n: int, cfg: SearchConfig = SearchConfig()) -> SearchState:
    """Minimize the maximized normalized quotient over degree-n polynomials."""
    return _search(n, cfg, maximize=False)


def extremal_family(n: int) -> Poly:
    """z - z^n / n: every critical value ratio equals (n-1)/n."""
    if n < 2:
        raise DomainError("family needs degree >= 2")
    coeffs = [0.0 + 0.0j] * (n + 1)
    coeffs[1] = 1.0 + 0.0j
    coeffs[n] = -1.0 / n
    return from_coeffs(coeffs)


@dataclass(frozen=True)
class HuntStats:
    trials_run: int
    trials_skipped: int
    worst_min_ratio: float
    best_min_ratio: float
    worst_max_ratio: float
    sharp_margin: float
    dual_margin: float


@dataclass(frozen=True)
class HuntResult:
    certificates: tuple[Certificate, ...]
    stats: HuntStats


def _draw_cstar_instance(st: Stream, n: int, k: int, rootcfg: RootFindConfig):
    roots = tuple(
        CStarElement(tuple(st.complex_in_disk(_ROOT_DRAW_RADIUS) for _ in range(k)))
        for _ in range(n)
    )
    P = CStarPoly(roots)
    crit = enumerate_critical_set(P, rootcfg)
    radius = 2.0 * (
        1.0 + max(abs(c) for r in roots for c in r.coords)
    )
    coords = []
    for t in range(k):
        pool = crit.per_coordinate[t].roots
        for _attempt in range(256):
            cand = st.complex_in_disk(radius)
            if all(abs(cand - w) > SAMPLER_MARGIN for w in pool):
                coords.append(cand)
                break
        else:
            return P, crit, None
    z = CStarElement(tuple(coords))
    if cstar_derivative_eval(P, z).norm() <= CRITICAL_TOL * 10.0:
        return P, crit, None
    return P, crit, z


def _hunt_trial(args):
    """One hunt trial; pure function of its arguments, safe to parallelize."""
    stream_key, trial, n, k, strong, rootcfg, seed = args
    st = Stream.from_key(stream_key).derive(trial)
    try:
        P, crit, z = _draw_cstar_instance(st, n, k, rootcfg)
    except SmaleLabError:
        return None
    if z is None:
        return None
    verdict = check_strong_forms(P, z)
    # the operator-order form implies the norm form (take norms); allow a
    # bridge between the relative and absolute comparison slacks
    assert not verdict.strong_smale_pass or verdict.min_ratio <= (
        (n - 1) / n + 1e-7
    ), "strong form passed but norm form failed: comparison bug"
    flags = {
        "cstar_sharp": not verdict.sharp_pass,
        "cstar_dual": not verdict.dual_pass,
    }
    if strong:
        flags["cstar_strong_smale"] = not verdict.strong_smale_pass
        flags["cstar_strong_dual"] = not verdict.strong_dual_pass
    certs = []
    if any(flags.values()):
        witnesses = [w.coords for w in crit.elements()]
        exact = exact_cstar_quotients(
            [list(r.coords) for r in P.roots], list(z.coords), witnesses
        )
        confirmations = {
            "cstar_sharp": exact.sharp_violated,
            "cstar_dual": exact.dual_violated,
            "cstar_strong_smale": exact.strong_smale_violated,
            "cstar_strong_dual": exact.strong_dual_violated,
        }
        residuals = [
            max(rs.residuals) if rs.residuals else 0.0
            for rs in crit.per_coordinate
        ]
        for kind, flagged in flags.items():
            if flagged and confirmations[kind]:
                certs.append(
                    Certificate(
                        kind=kind,
                        degree=n,
                        dim=k,
                        trial=trial,
                        seed=seed,
                        confirmed=True,
                        data={
                            "poly": P.to_json(),
                            "z": z.to_json(),
                            "min_ratio": verdict.min_ratio,
                            "max_ratio": verdict.max_ratio,
                            "exact_min_ratio_sq": float(exact.min_ratio2),
                            "exact_max_ratio_sq": float(exact.max_ratio2),
                            "critical_residual_worst": max(residuals),
                            "float_slack": CONJ_SLACK,
                        },
                    )
                )
    return verdict.min_ratio, verdict.max_ratio, certs


def run_hunt(
    n: int,
    k: int,
    trials: int,
    cfg: SearchConfig = SearchConfig(),
    strong: bool = True,
    rootcfg: RootFindConfig = RootFindConfig(),
    jobs: int = 1,
) -> HuntResult:
    """Randomized conjecture sweep over algebra polynomials.

    Every trial enumerates its critical set exhaustively, so each verdict
    is exact up to root residuals; candidates failing a conjectured
    inequality are re-decided in exact rational arithmetic before being
    reported.  An empty certificate list is the expected outcome.  Trials
    are independent; results are merged in trial order, so the report does
    not depend on the worker count.
    """
    if (n - 1) ** k > cfg.cap:
        raise CapacityError(
            f"critical product size {(n - 1) ** k} exceeds cap {cfg.cap}"
        )
    stream_key = Stream(cfg.seed, _STREAM_HUNT).derive(n).derive(k).key
    work = [(stream_key, t, n, k, strong, rootcfg, cfg.seed) for t in range(trials)]
    if jobs > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_hunt_trial, work))
    else:
        results = [_hunt_trial(item) for item in work]

    certificates: list[Certificate] = []
    skipped = 0
    run = 0
    worst_min = 0.0
    best_min = math.inf
    worst_max = math.inf
    for item in results:
        if item is None:
            skipped += 1
            continue
        run += 1
        min_ratio, max_ratio, certs = item
        worst_min = max(worst_min, min_ratio)
        best_min = min(best_min, min_ratio)
        worst_max = min(worst_max, max_ratio)
        certificates.extend(certs)
    stats = HuntStats(
        trials_run=run,
        trials_skipped=skipped,
        worst_min_ratio=worst_min,
        best_min_ratio=best_min if run else 0.0,
        worst_max_ratio=worst_max if run else 0.0,
        sharp_margin=(n - 1) / n - worst_min,
        dual_margin=(worst_max if run else 0.0) - 1.0 / n,
    )
    return HuntResult(tuple(certificates), stats)


def hunt_cstar(
    n: int,
    k: int,
    trials: int,
    cfg: SearchConfig = SearchConfig(),
) -> list[Certificate]:
    """Certificates (expected none) from a randomized conjecture sweep."""
    return list(run_hunt(n, k, trials, cfg).certificates)


def random_normalized_poly(degree: int, st: Stream) -> Poly:
    """z + a_2 z^2 + ... + a_n z^n with coefficients in the radius-2 disk."""
    if degree < 2:
        raise DomainError("normalized draws need degree >= 2")
    while True:
        coeffs = [0.0 + 0.0j, 1.0 + 0.0j]
        coeffs.extend(st.complex_in_disk(2.0) for _ in range(degree - 1))
        if abs(coeffs[-1]) > 1e-6:
            return from_coeffs(coeffs)


def hunt_mlp(
    degree: int,
    trials: int,
    seed: int = 42,
    cfg: OrbitConfig = OrbitConfig(),
) -> tuple[list[Certificate], int]:
    """Dynamics sweep; returns (certificates, number of passing trials)."""
    stream = Stream(seed, _STREAM_MLP).derive(degree)
    certificates = []
    passed = 0
    for trial in range(trials):
        p = random_normalized_poly(degree, stream.derive(trial))
        ok, res = mlp_check(p, cfg)
        if ok:
            passed += 1
            continue
        crits = list(cached_critical_points(p).roots)
        lo2, _hi2 = exact_normalized_ratios(list(p.coeffs), crits)
        certificates.append(
            Certificate(
                kind="mlp",
                degree=degree,
                dim=1,
                trial=trial,
                seed=seed,
                confirmed=float(lo2) > 1.0,  # exact only for the ratio half
                data={
                    "poly": poly_to_json(p),
                    "witness": [res.w0.real, res.w0.imag],
                    "ratio": res.ratio,
                    "verdict": res.verdict,
                    "trajectory_len": res.trajectory_len,
                    "final_modulus": res.final_modulus,
                    "exact_min_ratio_sq": float(lo2),
                },
            )
        )
    return certificates, passed
