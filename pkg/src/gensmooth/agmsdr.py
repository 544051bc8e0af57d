"""Accelerated gradient method with segment relaxation, plus its two-stage driver.

The accelerated loop maintains a quadratic-plus-linear model

    zeta_k(x) = 0.5*||x - x0||^2 + sum_i a_i * [f(y_{i-1}) + <grad f(y_{i-1}), x - y_{i-1}>]

whose exact minimizer v_k is tracked in closed form.  Each iteration line
searches the segment [v_k, x_k] for y_k, takes a certified descent step
from y_k to get x_{k+1}, and grows the scaling coefficient A_k by the root
of L*a^2 = A_k + a.  On convex inputs this certifies A_k * f(x_k) <=
zeta_k(v_k) and yields an O(1/k^2) gap, with monotone function values.

The two-stage driver first runs plain gradient descent until the gap (or,
lacking a known optimum, the gradient norm) is small enough that the
curvature along the rest of the trajectory is bounded by a constant, then
hands over to the accelerated loop.  Oracle accounting here charges both
gradient calls and line-search value calls.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .kernels import SmoothnessParams
from .problems import Objective
from .first_order import (
    IterRecord,
    StepRule,
    Trace,
    gd_run,
    stepsize_simplified,
)

_INV_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0  # 0.618...


class LineSearchError(RuntimeError):
    """Non-finite value met during the segment search."""

    def __init__(self, beta: float, value: float):
        super().__init__(f"non-finite objective value {value} at beta = {beta}")
        self.beta = beta


@dataclass
class EstimateState:
    """Running state of the quadratic model.

    `lin_accum` is the accumulated linear term sum_i a_i * grad f(y_{i-1}),
    so the model minimizer is always x0 - lin_accum.  `affine_accum` is the
    matching scalar sum_i a_i * (f(y_{i-1}) - <grad f(y_{i-1}), y_{i-1}>),
    which makes the model value at the minimizer available in closed form.
    `zeta_star_lower` caches that value; it certifies a_capital * f(x_k)
    from above on convex problems.
    """

    x0: np.ndarray
    a_capital: float = 0.0
    lin_accum: np.ndarray | None = None
    affine_accum: float = 0.0
    zeta_star_lower: float = 0.0

    def __post_init__(self):
        if self.lin_accum is None:
            self.lin_accum = np.zeros_like(self.x0)

    @property
    def minimizer(self) -> np.ndarray:
        return self.x0 - self.lin_accum

    def model_minimum(self) -> float:
        s = self.lin_accum
        return float(s @ self.x0) - 0.5 * float(s @ s) + self.affine_accum

    def accumulate(self, a: float, y: np.ndarray, f_y: float, grad_y: np.ndarray):
        self.a_capital += a
        self.lin_accum = self.lin_accum + a * grad_y
        self.affine_accum += a * (f_y - float(grad_y @ y))
        self.zeta_star_lower = self.model_minimum()


@dataclass
class LineSearchResult:
    y: np.ndarray
    f_y: float
    beta: float
    evals: int


def segment_line_search(
    f: Objective,
    v: np.ndarray,
    x: np.ndarray,
    tol: float = 1e-10,
    max_evals: int = 60,
    f_v: float | None = None,
    f_x: float | None = None,
) -> LineSearchResult:
    """Golden-section minimization of beta -> f(v + beta*(x - v)) on [0, 1].

    Convexity of f makes the restriction unimodal, so the bracket shrinks
    by the golden ratio per evaluation.  Both endpoints are always in the
    candidate set, so the returned value never exceeds min(f(v), f(x)).
    Known endpoint values can be passed in to save evaluations; `evals`
    counts the calls actually made here.
    """
    direction = x - v
    evals = 0
    best_beta, best_val = 1.0, math.inf

    def h(beta: float) -> float:
        nonlocal evals, best_beta, best_val
        val = f.value(v + beta * direction)
        evals += 1
        if not math.isfinite(val):
            raise LineSearchError(beta, val)
        if val < best_val:
            best_beta, best_val = beta, val
        return val

    if f_x is None:
        f_x = h(1.0)
    else:
        best_beta, best_val = 1.0, f_x
    if float(np.linalg.norm(direction)) == 0.0:
        return LineSearchResult(y=x.copy(), f_y=f_x, beta=1.0, evals=evals)
    if f_v is None:
        f_v = h(0.0)
    elif f_v < best_val:
        best_beta, best_val = 0.0, f_v

    lo, hi = 0.0, 1.0
    b1 = hi - _INV_GOLDEN * (hi - lo)
    b2 = lo + _INV_GOLDEN * (hi - lo)
    h1, h2 = h(b1), h(b2)
    while hi - lo > tol and evals < max_evals:
        if h1 <= h2:
            hi, b2, h2 = b2, b1, h1
            b1 = hi - _INV_GOLDEN * (hi - lo)
            h1 = h(b1)
        else:
            lo, b1, h1 = b1, b2, h2
            b2 = lo + _INV_GOLDEN * (hi - lo)
            h2 = h(b2)
    return LineSearchResult(
        y=v + best_beta * direction, f_y=best_val, beta=best_beta, evals=evals
    )


def agmsdr_run(
    f: Objective,
    x0: np.ndarray,
    l_const: float,
    budget: int,
    ls_tol: float = 1e-10,
    ls_max_evals: int = 60,
    t_params: SmoothnessParams | None = None,
    monotone_tol: float = 1e-9,
) -> Trace:
    """Accelerated loop from x0 with scaling constant l_const.

    The descent operator is the simplified-stepsize gradient step, using
    `t_params` (default: the objective's own constants).  Each record k
    carries f(x_k), the model scale A_k and the model minimum at arrival,
    plus the iteration products f(y_k), ||grad f(y_k)|| and the search
    cost.  Oracle calls accumulate value and gradient evaluations alike.

    A rise f(x_{k+1}) > f(y_k) beyond `monotone_tol` aborts: on a convex
    objective that can only mean the curvature constants are wrong.
    """
    if l_const <= 0:
        raise ValueError("l_const must be positive")
    params = t_params if t_params is not None else f.params
    if params is None:
        raise ValueError("objective carries no smoothness constants for the descent step")
    x = f.check_point(x0)

    state = EstimateState(x0=x.copy())
    f_x = f.value(x)
    if not math.isfinite(f_x):
        raise ValueError("objective is not finite at the starting point")
    calls = 1
    records: list[IterRecord] = []
    termination = "BudgetExhausted"

    def arrival_record(k: int) -> IterRecord:
        return IterRecord(
            k=k,
            f_val=f_x,
            f_gap=f_x - f.f_star if f.f_star is not None else None,
            grad_norm=None,
            step_len=0.0,
            oracle_calls=calls,
            stage=2,
            a_capital=state.a_capital,
            zeta_star=state.zeta_star_lower,
            dist_opt=float(np.linalg.norm(x - f.x_star)) if f.x_star is not None else None,
        )

    while calls < budget:
        k = len(records)
        ls = segment_line_search(
            f, state.minimizer, x, tol=ls_tol, max_evals=ls_max_evals, f_x=f_x
        )
        calls += ls.evals
        y, f_y = ls.y, ls.f_y

        grad_y = f.gradient(y)
        calls += 1
        g = float(np.linalg.norm(grad_y))

        step_len = stepsize_simplified(g, params) * g if g > 0 else 0.0
        x_next = y - step_len * (grad_y / g) if g > 0 else y
        f_next = f.value(x_next)
        calls += 1
        if f_next > f_y + monotone_tol:
            raise RuntimeError(
                f"descent step increased the value at iteration {k} "
                f"({f_y} -> {f_next}): curvature constants do not match the objective"
            )

        rec = arrival_record(k)
        rec.grad_norm = g
        rec.step_len = step_len
        rec.f_y = f_y
        rec.ls_evals = ls.evals
        records.append(rec)

        a_next = (1.0 + math.sqrt(1.0 + 4.0 * l_const * state.a_capital)) / (2.0 * l_const)
        state.accumulate(a_next, y, f_y, grad_y)
        x, f_x = x_next, f_next

        if g == 0.0:
            termination = "StationaryExact"
            break
        if not math.isfinite(f_x) or abs(f_x) > 1e150:
            termination = "Diverged"
            break

    records.append(arrival_record(len(records)))
    return Trace(
        records=records,
        final_x=x,
        termination=termination,
        method="agmsdr",
        value_calls=0,
    )


@dataclass(frozen=True)
class TwoStageConfig:
    """Knobs for the two-stage procedure.

    `l_const` is the scaling constant handed to the accelerated stage
    (default 3*l0, which the simplified descent step supports once the
    gradient norm is at most l0/l1).  `stage1_target` picks the hand-over
    test: "gap" stops when f - f_star <= l0/(5*l1^2) and needs a known
    optimum; "grad" stops at ||grad|| <= l0/l1 and is the documented
    fallback when f_star is unavailable.  "auto" prefers "gap".
    """

    l_const: float | None = None
    stage1_variant: str = "simplified"
    stage1_target: str = "auto"
    line_search_tol: float = 1e-10
    line_search_max_evals: int = 60

    def __post_init__(self):
        if self.l_const is not None and self.l_const <= 0:
            raise ValueError("l_const must be positive")
        if self.stage1_variant not in ("optimal", "simplified"):
            raise ValueError("stage 1 must use the optimal or simplified rule")
        if self.stage1_target not in ("auto", "gap", "grad"):
            raise ValueError("stage1_target must be 'auto', 'gap' or 'grad'")
        if self.line_search_tol <= 0:
            raise ValueError("line_search_tol must be positive")


def two_stage_run(
    f: Objective,
    x_s: np.ndarray,
    p: SmoothnessParams,
    cfg: TwoStageConfig = TwoStageConfig(),
    budget: int = 10**6,
) -> Trace:
    """Gradient descent until the hand-over target, then the accelerated loop.

    With l1 = 0 the target is vacuous and stage 1 is skipped entirely.
    Stage-2 records continue the combined iteration index and oracle
    count; stage-1 rows are marked stage 1, accelerated rows stage 2.
    Returns the partial stage-1 trace if its budget runs out first.
    """
    l_const = cfg.l_const if cfg.l_const is not None else 3.0 * p.l0
    if p.l1 == 0.0:
        return agmsdr_run(
            f,
            x_s,
            l_const,
            budget,
            ls_tol=cfg.line_search_tol,
            ls_max_evals=cfg.line_search_max_evals,
            t_params=p,
        )

    target = cfg.stage1_target
    if target == "auto":
        target = "gap" if f.f_star is not None else "grad"
    if target == "gap" and f.f_star is None:
        raise ValueError("the 'gap' hand-over target requires a known f_star")

    rule = StepRule(variant=cfg.stage1_variant, params=p)
    if target == "gap":
        stage1 = gd_run(
            f, rule, x_s, budget, grad_tol=0.0, gap_tol=p.l0 / (5.0 * p.l1**2)
        )
    else:
        stage1 = gd_run(f, rule, x_s, budget, grad_tol=p.l0 / p.l1)

    stage1_calls = stage1.records[-1].oracle_calls
    if stage1.termination in ("BudgetExhausted", "Diverged"):
        return Trace(
            records=stage1.records,
            final_x=stage1.final_x,
            termination=stage1.termination,
            method="two_stage",
            value_calls=stage1.value_calls,
        )

    stage2 = agmsdr_run(
        f,
        stage1.final_x,
        l_const,
        budget - stage1_calls,
        ls_tol=cfg.line_search_tol,
        ls_max_evals=cfg.line_search_max_evals,
        t_params=p,
    )

    combined: list[IterRecord] = list(stage1.records)
    offset_k = stage1.records[-1].k + 1
    for rec in stage2.records:
        rec.k = rec.k + offset_k
        rec.oracle_calls += stage1_calls
        combined.append(rec)
    return Trace(
        records=combined,
        final_x=stage2.final_x,
        termination=stage2.termination,
        method="two_stage",
        value_calls=stage1.value_calls,
    )
