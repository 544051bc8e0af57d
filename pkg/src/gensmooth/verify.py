"""Empirical verification layer: samplers, oracles, and rate monitors.

Everything here is an independent check on the rest of the package:
finite differences validate analytic gradients, randomized pair sampling
probes the growth envelopes and convex lower bounds that the stepsize
rules rely on, and post-hoc monitors replay recorded traces against the
worst-case rate guarantees.  All sampling is deterministic given a seed,
and reports serialize to a stable line format, so a clean rerun is
byte-identical.

A verification layer that cannot fail is itself broken, so the test suite
runs deliberate negative controls (corrupted gradients, halved curvature
floors) through these same functions and requires them to report failures.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .kernels import SmoothnessParams, phi, phi_star
from .problems import Objective, sample_ball
from .first_order import Trace

MONITOR_BOUNDS = (
    "min_grad",
    "convex_gap",
    "normalized",
    "polyak",
    "accelerated",
    "two_stage",
)

DEFAULT_EPS_GRID = (1e-1, 1e-2, 1e-3)


@dataclass
class CheckReport:
    """Outcome of one check over a batch of cases.

    `worst_margin` is the most negative slack seen (bound minus observed);
    a case fails when its margin drops below -tolerance, so n_failures == 0
    exactly when worst_margin >= -tolerance.  `informational` marks checks
    that are reported but excluded from pass/fail aggregation.
    """

    check_name: str
    n_cases: int
    n_failures: int
    worst_margin: float
    worst_case_input: str = ""
    seed: int = 0
    informational: bool = False

    @property
    def passed(self) -> bool:
        return self.n_failures == 0

    def line(self) -> str:
        return "\t".join(
            [
                self.check_name,
                str(self.n_cases),
                str(self.n_failures),
                format(self.worst_margin, ".17g"),
                str(self.seed),
            ]
        )


class _Margins:
    """Accumulates (margin, case description) pairs against one tolerance."""

    def __init__(self, tol: float):
        self.tol = tol
        self.n_cases = 0
        self.n_failures = 0
        self.worst = math.inf
        self.worst_input = ""

    def add(self, margin: float, case: str):
        self.n_cases += 1
        if not (margin >= -self.tol):
            self.n_failures += 1
        if margin < self.worst:
            self.worst = margin
            self.worst_input = case

    def add_grid(self, slack: np.ndarray, inputs: np.ndarray, label: str):
        self.n_cases += slack.size
        self.n_failures += int(np.sum(~(slack >= -self.tol)))
        i = int(np.argmin(slack))
        if slack[i] < self.worst:
            self.worst = float(slack[i])
            self.worst_input = f"{label}={inputs[i]}"

    def report(self, name: str, seed: int = 0, informational: bool = False) -> CheckReport:
        worst = self.worst if self.n_cases else math.inf
        return CheckReport(
            check_name=name,
            n_cases=self.n_cases,
            n_failures=self.n_failures,
            worst_margin=worst,
            worst_case_input=self.worst_input,
            seed=seed,
            informational=informational,
        )


def merge_reports(reports: list[CheckReport]) -> CheckReport:
    """Combine shards of one check: counts add, margins take the minimum."""
    if not reports:
        raise ValueError("nothing to merge")
    worst = min(reports, key=lambda r: r.worst_margin)
    return CheckReport(
        check_name=worst.check_name,
        n_cases=sum(r.n_cases for r in reports),
        n_failures=sum(r.n_failures for r in reports),
        worst_margin=worst.worst_margin,
        worst_case_input=worst.worst_case_input,
        seed=worst.seed,
        informational=any(r.informational for r in reports),
    )


def serialize_reports(reports: list[CheckReport]) -> str:
    return "".join(r.line() + "\n" for r in reports)


def fd_gradient_check(
    f: Objective,
    n_points: int = 100,
    seed: int = 0,
    rel_tol: float = 1e-5,
    radius: float = 5.0,
) -> CheckReport:
    """Central-difference check of the analytic gradient on sampled points.

    Step h = 1e-6 * (1 + ||x||) per coordinate; the error is measured
    relative to 1 + ||grad|| so near-stationary points do not blow it up.
    """
    rng = np.random.default_rng(seed)
    points = sample_ball(rng, f.dim, radius, n_points)
    margins = _Margins(tol=0.0)
    for x in points:
        h = 1e-6 * (1.0 + float(np.linalg.norm(x)))
        fd = np.empty(f.dim)
        for j in range(f.dim):
            e = np.zeros(f.dim)
            e[j] = h
            fd[j] = (f.value(x + e) - f.value(x - e)) / (2.0 * h)
        grad = f.gradient(x)
        err = float(np.linalg.norm(fd - grad)) / (1.0 + float(np.linalg.norm(grad)))
        margins.add(rel_tol - err, f"x={x.tolist()}")
    return margins.report(f"fd_gradient[{f.name}]", seed=seed)


def _sample_pairs(rng, dim, n_pairs, max_sep, radius):
    xs = sample_ball(rng, dim, radius, n_pairs)
    dirs = rng.standard_normal((n_pairs, dim))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    seps = max_sep * rng.random(n_pairs)
    return xs, xs + dirs * seps[:, None]


def check_smoothness_envelopes(
    f: Objective,
    p: SmoothnessParams,
    n_pairs: int = 1000,
    max_sep: float = 2.0,
    seed: int = 0,
    radius: float = 5.0,
    tol: float = 1e-9,
) -> CheckReport:
    """Sampled check of the two growth envelopes implied by the curvature model:

        ||grad f(y) - grad f(x)||            <= a * (exp(l1*s) - 1) / l1
        |f(y) - f(x) - <grad f(x), y - x>|   <= a * phi(l1*s) / l1^2

    with a = l0 + l1*||grad f(x)|| and s = ||y - x||; for l1 = 0 the right
    sides degrade to the familiar a*s and a*s^2/2.
    """
    rng = np.random.default_rng(seed)
    xs, ys = _sample_pairs(rng, f.dim, n_pairs, max_sep, radius)
    margins = _Margins(tol=tol)
    for x, y in zip(xs, ys):
        gx = f.gradient(x)
        gy = f.gradient(y)
        a = p.l0 + p.l1 * float(np.linalg.norm(gx))
        s = float(np.linalg.norm(y - x))
        if p.l1 > 0:
            grad_bound = a * math.expm1(p.l1 * s) / p.l1
            taylor_bound = a * float(phi(p.l1 * s)) / p.l1**2
        else:
            grad_bound = a * s
            taylor_bound = 0.5 * a * s * s
        m1 = grad_bound - float(np.linalg.norm(gy - gx))
        m2 = taylor_bound - abs(f.value(y) - f.value(x) - float(gx @ (y - x)))
        margins.add(min(m1, m2), f"x={x.tolist()} y={y.tolist()}")
    return margins.report(f"smoothness_envelopes[{f.name}]", seed=seed)


def _conjugate_term(s: float, a: float, l1: float) -> float:
    # (a/l1^2) * phi_star(l1*s/a), with the l1 -> 0 limit s^2/(2a)
    if a <= 0:
        return math.inf if s > 0 else 0.0
    if l1 == 0.0:
        return s * s / (2.0 * a)
    return a / l1**2 * float(phi_star(l1 * s / a))


def check_convex_lower_bounds(
    f: Objective,
    p: SmoothnessParams,
    n_pairs: int = 1000,
    seed: int = 0,
    radius: float = 5.0,
    max_sep: float = 2.0,
    tol: float = 1e-9,
) -> CheckReport:
    """Sampled check of the convex lower-bound family.

    With a_x = l0 + l1*||grad f(x)|| and s = ||grad f(y) - grad f(x)||:

      f(y) - f(x) - <grad f(x), y - x>  >=  conj(s, a_y)
      <grad f(x) - grad f(y), x - y>    >=  conj(s, a_y) + conj(s, a_x)
      f(y) - f(x) - <grad f(x), y - x>  >=  s^2 / (2*a_y + l1*s)

    where conj(s, a) = (a/l1^2) * phi_star(l1*s/a).  Convex input only.
    """
    if not f.convex:
        raise ValueError(f"objective {f.name!r} is not marked convex")
    rng = np.random.default_rng(seed)
    xs, ys = _sample_pairs(rng, f.dim, n_pairs, max_sep, radius)
    margins = _Margins(tol=tol)
    for x, y in zip(xs, ys):
        gx, gy = f.gradient(x), f.gradient(y)
        a_x = p.l0 + p.l1 * float(np.linalg.norm(gx))
        a_y = p.l0 + p.l1 * float(np.linalg.norm(gy))
        s = float(np.linalg.norm(gy - gx))
        bregman = f.value(y) - f.value(x) - float(gx @ (y - x))
        m1 = bregman - _conjugate_term(s, a_y, p.l1)
        m2 = float((gx - gy) @ (x - y)) - (
            _conjugate_term(s, a_y, p.l1) + _conjugate_term(s, a_x, p.l1)
        )
        denom = 2.0 * a_y + p.l1 * s
        m3 = bregman - s * s / denom if denom > 0 else (0.0 if s == 0 else -math.inf)
        margins.add(min(m1, m2, m3), f"x={x.tolist()} y={y.tolist()}")
    return margins.report(f"convex_lower_bounds[{f.name}]", seed=seed)


def support_distance(f: Objective, x: np.ndarray, x_star: np.ndarray) -> float:
    """Distance from x_star to the supporting hyperplane of the sublevel set
    at x: max(<grad f(x), x - x_star>, 0) / ||grad f(x)||."""
    x = np.asarray(x, dtype=float)
    grad = f.gradient(x)
    g = float(np.linalg.norm(grad))
    if g == 0.0:
        raise ValueError("support distance undefined at a stationary point")
    return max(float(grad @ (x - np.asarray(x_star, float))), 0.0) / g


def kernel_bound_checks(n_grid: int = 10**4, tol: float = 1e-12) -> list[CheckReport]:
    """Dense-grid checks of the scalar kernel inequalities.

    - phi(t) <= t^2/(2 - 2t/3) on [0, 3)
    - g^2/(2+g) <= phi_star(g) <= g^2/2 on [0, 100]
    - ln-bracket 2g/(2+g) <= ln(1+g) <= g on [0, 100]
    """
    reports = []

    t = np.linspace(0.0, 3.0, n_grid, endpoint=False)
    margins = _Margins(tol=tol)
    margins.add_grid(t * t / (2.0 - 2.0 * t / 3.0) - phi(t), t, "t")
    reports.append(margins.report("kernel_phi_upper"))

    g = np.linspace(0.0, 100.0, n_grid)
    ps = phi_star(g)
    margins = _Margins(tol=tol)
    margins.add_grid(np.minimum(ps - g * g / (2.0 + g), g * g / 2.0 - ps), g, "g")
    reports.append(margins.report("kernel_conjugate_sandwich"))

    ln = np.log1p(g)
    margins = _Margins(tol=tol)
    margins.add_grid(np.minimum(ln - 2.0 * g / (2.0 + g), g - ln), g, "g")
    reports.append(margins.report("kernel_log_bracket"))

    return reports


def conjugate_grid_consistency(
    n_samples: int = 100, g_max: float = 10.0, seed: int = 0, tol: float = 1e-6
) -> CheckReport:
    """phi_star(g) must match max_t {g*t - phi(t)} over a fine t-grid."""
    rng = np.random.default_rng(seed)
    gs = g_max * rng.random(n_samples)
    margins = _Margins(tol=tol)
    for g in gs:
        t_grid = np.linspace(0.0, math.log1p(g) + 0.5, 40001)
        grid_max = float(np.max(g * t_grid - phi(t_grid)))
        margins.add(tol - abs(float(phi_star(g)) - grid_max), f"g={g}")
    return margins.report("kernel_conjugate_grid", seed=seed)


def _gap_threshold_check(
    margins: _Margins,
    trace: Trace,
    eps_grid,
    threshold,
    use_best: bool,
):
    """Check 'gap <= eps from iteration threshold(eps) onward' on the trace.

    With `use_best` the target is the running best gap (guarantees stated
    for the best iterate); otherwise the gap itself, in which case descent
    monotonicity is verified first so the first-hit index is conclusive.
    A threshold beyond the recorded horizon that was never hit is skipped
    as unverifiable rather than counted either way.
    """
    recs = trace.records
    gaps = [rec.f_gap for rec in recs]
    if any(gap is None for gap in gaps):
        raise ValueError("gap monitors require a known optimal value on every record")
    if not use_best:
        for prev, nxt in zip(recs, recs[1:]):
            margins.add(prev.f_gap - nxt.f_gap, f"monotone gap k={prev.k}")
    horizon = recs[-1].k
    for eps in eps_grid:
        limit = threshold(eps)
        best = math.inf
        hit = None
        for rec in recs:
            best = min(best, rec.f_gap)
            if best <= eps:
                hit = rec.k
                break
        if hit is not None:
            margins.add(float(limit - hit), f"eps={eps}")
        elif horizon >= limit:
            margins.add(-math.inf, f"eps={eps} never reached")


def rate_monitor(
    trace: Trace,
    bound: str,
    *,
    params: SmoothnessParams | None = None,
    f0: float | None = None,
    r: float | None = None,
    r_hat: float | None = None,
    l_const: float | None = None,
    eps_grid=DEFAULT_EPS_GRID,
    tol: float = 1e-9,
) -> CheckReport:
    """Replay a recorded trace against one of the worst-case guarantees.

    bound:
      min_grad     min_{i<=K} g_i <= sqrt(2*l0*F0/(K+1)) + 3*l1*F0/(K+1)
                   for every K in the trace (F0 = initial gap).
      convex_gap   gap <= eps once K >= max(4*l0*R^2/eps, 36*l1^2*R^2);
                   descent monotonicity is checked so the first hitting
                   index is conclusive.  Informational for the clipped
                   rule, whose guarantee carries different constants.
      normalized   min support distance <= (R^2+r_hat^2)/(2*r_hat*sqrt(K+1))
                   on fixed horizons, plus the best-gap threshold
                   K >= max(l0*rb^2/eps, (4/9)*l1^2*rb^2) with
                   rb = R^2/r_hat + r_hat; decaying schedules get a
                   log-envelope check only (informational, constant pinned
                   at K = 16; no exact constant is guaranteed there).
      polyak       per-step distance contraction by (gap/grad)^2 plus the
                   best-gap threshold max(4*l0*R^2/eps, 36*l1^2*R^2).
      accelerated  monotone chain, per-step progress f(y_k) - f(x_{k+1})
                   >= g_k^2/(2L), model certificate A_k*f(x_k) <=
                   zeta_k(v_k) + 1e-7, A_k >= k^2/(4L), gap <= 2*L*R^2/k^2.
      two_stage    stage-1 exit gradient <= l0/l1, stage-2 sublevel
                   containment and gradient cap, and oracle calls to reach
                   eps within mbar*sqrt(12*l0*R^2/eps) + 36*l1^2*R^2, with
                   mbar the recorded mean line-search cost per iteration.
    """
    if bound not in MONITOR_BOUNDS:
        raise ValueError(f"unknown bound {bound!r}")
    recs = trace.records

    if bound == "min_grad":
        if params is None or f0 is None:
            raise ValueError("min_grad monitor needs params and f0")
        if any(rec.grad_norm is None for rec in recs):
            raise ValueError("min_grad monitor requires gradient norms on every record")
        margins = _Margins(tol=tol)
        running = math.inf
        for rec in recs:
            running = min(running, rec.grad_norm)
            k1 = rec.k + 1
            limit = math.sqrt(2.0 * params.l0 * f0 / k1) + 3.0 * params.l1 * f0 / k1
            margins.add(limit - running, f"K={rec.k}")
        return margins.report("rate_min_grad")

    if bound == "convex_gap":
        if params is None or r is None:
            raise ValueError("convex_gap monitor needs params and r")
        margins = _Margins(tol=tol)
        _gap_threshold_check(
            margins,
            trace,
            eps_grid,
            lambda e: max(4.0 * params.l0 * r * r / e, 36.0 * params.l1**2 * r * r),
            use_best=False,
        )
        return margins.report(
            "rate_convex_gap", informational=(trace.method == "gd:clipped")
        )

    if bound == "normalized":
        if params is None or r is None or r_hat is None:
            raise ValueError("normalized monitor needs params, r and r_hat")
        if all(rec.support_dist is None for rec in recs):
            raise ValueError(
                "normalized monitor requires recorded support distances (known x_star)"
            )
        if trace.method == "ngd:fixed":
            margins = _Margins(tol=tol)
            horizon = recs[-1].k
            v_min = min(rec.support_dist for rec in recs if rec.support_dist is not None)
            v_bound = (r * r + r_hat * r_hat) / (2.0 * r_hat * math.sqrt(horizon + 1))
            margins.add(v_bound - v_min, f"K={horizon}")
            r_bar = r * r / r_hat + r_hat
            if horizon >= (4.0 / 9.0) * params.l1**2 * r_bar**2:
                eps = params.l0 * r_bar**2 / horizon
                best_gap = min(rec.f_gap for rec in recs if rec.f_gap is not None)
                margins.add(eps - best_gap, f"gap at K={horizon}")
            return margins.report("rate_normalized_fixed")
        margins = _Margins(tol=tol)
        running = math.inf
        v_at = {}
        for rec in recs:
            if rec.support_dist is not None:
                running = min(running, rec.support_dist)
            v_at[rec.k] = running
        if 16 in v_at and math.isfinite(v_at[16]):
            c = v_at[16] * math.sqrt(17.0) / math.log(17.0)
            for k, v in v_at.items():
                if k >= 16:
                    margins.add(c * math.log(k + 1) / math.sqrt(k + 1) - v, f"K={k}")
        return margins.report("rate_normalized_decay", informational=True)

    if bound == "polyak":
        if params is None or r is None:
            raise ValueError("polyak monitor needs params and r")
        margins = _Margins(tol=tol)
        for prev, nxt in zip(recs, recs[1:]):
            if prev.dist_opt is None or not prev.grad_norm:
                continue
            drop = (prev.f_gap / prev.grad_norm) ** 2
            margins.add(prev.dist_opt**2 - drop - nxt.dist_opt**2, f"k={prev.k}")
        _gap_threshold_check(
            margins,
            trace,
            eps_grid,
            lambda e: max(4.0 * params.l0 * r * r / e, 36.0 * params.l1**2 * r * r),
            use_best=True,
        )
        return margins.report("rate_polyak")

    if bound == "accelerated":
        if l_const is None or r is None:
            raise ValueError("accelerated monitor needs l_const and r")
        if recs[0].a_capital is None:
            raise ValueError("accelerated monitor requires an accelerated-method trace")
        margins = _Margins(tol=tol)
        cert = _Margins(tol=1e-7)
        for rec, nxt in zip(recs, recs[1:]):
            if rec.f_y is not None:
                margins.add(rec.f_val - rec.f_y, f"f(y)<=f(x) at k={rec.k}")
                margins.add(rec.f_y - nxt.f_val, f"f(x+)<=f(y) at k={rec.k}")
                # descent-operator contract backing the 1/k^2 rate
                required = rec.grad_norm**2 / (2.0 * l_const)
                margins.add(
                    rec.f_y - nxt.f_val - required, f"step progress k={rec.k}"
                )
        for rec in recs:
            cert.add(rec.zeta_star - rec.a_capital * rec.f_val, f"certificate k={rec.k}")
            if rec.k >= 1:
                margins.add(
                    rec.a_capital - rec.k**2 / (4.0 * l_const), f"A_k growth k={rec.k}"
                )
                if rec.f_gap is not None:
                    margins.add(
                        2.0 * l_const * r * r / rec.k**2 - rec.f_gap,
                        f"gap bound k={rec.k}",
                    )
        return merge_reports(
            [margins.report("rate_accelerated"), cert.report("rate_accelerated")]
        )

    # two_stage
    if params is None or r is None:
        raise ValueError("two_stage monitor needs params and r")
    margins = _Margins(tol=tol)
    stage1 = [rec for rec in recs if rec.stage == 1]
    stage2 = [rec for rec in recs if rec.stage == 2]
    if params.l1 > 0 and stage1:
        margins.add(
            params.l0 / params.l1 - stage1[-1].grad_norm, "stage-1 exit gradient"
        )
    if stage2:
        start_val = stage2[0].f_val
        for rec in stage2:
            margins.add(start_val - rec.f_val, f"sublevel k={rec.k}")
            if rec.grad_norm is not None and params.l1 > 0:
                margins.add(
                    params.l0 / params.l1 + 1e-6 - rec.grad_norm,
                    f"stage-2 gradient k={rec.k}",
                )
        ls = [rec.ls_evals for rec in stage2 if rec.ls_evals is not None]
        mbar = float(np.mean(ls)) if ls else 1.0
        for eps in eps_grid:
            limit = (
                mbar * math.sqrt(12.0 * params.l0 * r * r / eps)
                + 36.0 * params.l1**2 * r * r
            )
            best = math.inf
            hit_calls = None
            for rec in recs:
                if rec.f_gap is None:
                    break
                best = min(best, rec.f_gap)
                if best <= eps:
                    hit_calls = rec.oracle_calls
                    break
            if hit_calls is not None:
                margins.add(limit - hit_calls, f"oracle calls to eps={eps}")
    return margins.report("rate_two_stage")
