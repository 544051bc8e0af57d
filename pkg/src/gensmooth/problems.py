"""Test objectives with analytically known curvature constants.

Each constructor returns an :class:`Objective` whose value/gradient/hessian
callables are exact closed forms, together with a pair (l0, l1) for which

    ||hess f(x)|| <= l0 + l1 * ||grad f(x)||      for all x.

`certify_smoothness` probes that inequality empirically on a sampled ball:
it cannot prove the global statement, but it pins the constants down on the
region where the benchmark runs actually live, and it reliably rejects
constants that are too small (the negative controls in the test suite).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .kernels import SmoothnessParams


@dataclass(frozen=True, eq=False)
class Objective:
    """Evaluation contract for a smooth objective on R^dim.

    `value` and `gradient` are required; `hessian` is optional (needed only
    by the certifier).  `f_star`/`x_star` are filled in when the optimum is
    known analytically, otherwise left None.
    """

    dim: int
    value: Callable[[np.ndarray], float]
    gradient: Callable[[np.ndarray], np.ndarray]
    hessian: Callable[[np.ndarray], np.ndarray] | None = None
    f_star: float | None = None
    x_star: np.ndarray | None = None
    params: SmoothnessParams | None = None
    convex: bool = True
    name: str = ""

    def check_point(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dim,):
            raise ValueError(f"expected a point of dimension {self.dim}, got shape {x.shape}")
        return x


@dataclass(frozen=True, eq=False)
class CertificateReport:
    """Outcome of sampling the curvature inequality on a ball."""

    n_samples: int
    max_violation: float
    violating_point: np.ndarray | None
    region_radius: float

    def passes(self, tol: float = 1e-8) -> bool:
        return self.max_violation <= tol


def power_norm(dim: int, p: float, l1: float) -> Objective:
    """(1/p) * ||x||^p with p > 2; minimal l0 for a chosen l1 is ((p-2)/l1)^(p-2)."""
    if p <= 2:
        raise ValueError("p must exceed 2")
    if l1 <= 0:
        raise ValueError("l1 must be positive")
    if dim < 1:
        raise ValueError("dim must be positive")

    def value(x):
        return float(np.linalg.norm(x) ** p / p)

    def gradient(x):
        r = np.linalg.norm(x)
        if r == 0.0:
            return np.zeros(dim)
        return r ** (p - 2) * x

    def hessian(x):
        r = np.linalg.norm(x)
        if r == 0.0:
            # 0/0 at the origin; the limit is the zero matrix for p > 2
            return np.zeros((dim, dim))
        u = x / r
        return r ** (p - 2) * (np.eye(dim) + (p - 2) * np.outer(u, u))

    l0 = ((p - 2) / l1) ** (p - 2)
    return Objective(
        dim=dim,
        value=value,
        gradient=gradient,
        hessian=hessian,
        f_star=0.0,
        x_star=np.zeros(dim),
        params=SmoothnessParams(l0, l1),
        name=f"power_norm(d={dim},p={p},l1={l1})",
    )


def _sigmoid(t: float) -> float:
    if t >= 0:
        return 1.0 / (1.0 + math.exp(-t))
    e = math.exp(t)
    return e / (1.0 + e)


def logistic_1d(l1: float = 0.0) -> Objective:
    """ln(1 + exp(x)) on R; admits l0 = (1 - l1)^2 / 4 for any l1 in [0, 1].

    The infimum 0 is approached as x -> -infinity but never attained, so
    f_star is left unset; Polyak-style runs must pass an explicit target.
    """
    if not 0.0 <= l1 <= 1.0:
        raise ValueError("l1 must lie in [0, 1]")

    def value(x):
        return float(np.logaddexp(0.0, x[0]))

    def gradient(x):
        return np.array([_sigmoid(x[0])])

    def hessian(x):
        s = _sigmoid(x[0])
        return np.array([[s * (1.0 - s)]])

    return Objective(
        dim=1,
        value=value,
        gradient=gradient,
        hessian=hessian,
        params=SmoothnessParams(0.25 * (1.0 - l1) ** 2, l1),
        name=f"logistic(l1={l1})",
    )


def affine_logistic(a: np.ndarray, b: float, l1: float) -> Objective:
    """ln(1 + exp(<a, x> + b)); affine substitution scales the constants to
    l0 = (||a|| - l1)^2 / 4 for any l1 in [0, ||a||]."""
    a = np.asarray(a, dtype=float)
    norm_a = float(np.linalg.norm(a))
    if norm_a == 0.0:
        raise ValueError("a must be nonzero")
    if not 0.0 <= l1 <= norm_a:
        raise ValueError(f"l1 must lie in [0, ||a||] = [0, {norm_a}]")

    def value(x):
        return float(np.logaddexp(0.0, float(a @ x) + b))

    def gradient(x):
        return _sigmoid(float(a @ x) + b) * a

    def hessian(x):
        s = _sigmoid(float(a @ x) + b)
        return s * (1.0 - s) * np.outer(a, a)

    return Objective(
        dim=a.size,
        value=value,
        gradient=gradient,
        hessian=hessian,
        params=SmoothnessParams(0.25 * (norm_a - l1) ** 2, l1),
        name=f"affine_logistic(|a|={norm_a:g},b={b},l1={l1})",
    )


def exp_phi(dim: int, params: SmoothnessParams) -> Objective:
    """(l0/l1^2) * (exp(l1*||x||) - l1*||x|| - 1): the radial profile whose
    curvature inequality holds with equality at every point."""
    if params.l1 <= 0:
        raise ValueError("l1 must be positive (use a quadratic for l1 = 0)")
    if params.l0 <= 0:
        raise ValueError("l0 must be positive")
    l0, l1 = params.l0, params.l1

    def value(x):
        r = np.linalg.norm(x)
        return float(l0 / l1**2 * (math.expm1(l1 * r) - l1 * r))

    def gradient(x):
        r = np.linalg.norm(x)
        if r == 0.0:
            return np.zeros(dim)
        return (l0 / l1) * math.expm1(l1 * r) * x / r

    def hessian(x):
        r = np.linalg.norm(x)
        if r == 0.0:
            # radial and tangential curvatures both tend to l0 at the origin
            return l0 * np.eye(dim)
        u = np.outer(x, x) / r**2
        radial = l0 * math.exp(l1 * r)
        tangential = (l0 / l1) * math.expm1(l1 * r) / r
        return radial * u + tangential * (np.eye(dim) - u)

    return Objective(
        dim=dim,
        value=value,
        gradient=gradient,
        hessian=hessian,
        f_star=0.0,
        x_star=np.zeros(dim),
        params=params,
        name=f"exp_phi(d={dim},l0={l0},l1={l1})",
    )


def sum_with_smooth(
    f: Objective,
    g: Objective,
    g_lip_grad: float,
    g_lip_val: float,
    g_convex: bool = True,
) -> Objective:
    """Sum f + g where g has gradient Lipschitz constant `g_lip_grad` and
    value Lipschitz constant `g_lip_val` on the region of interest.

    The sum keeps l1 and absorbs g into the floor:
    (l0, l1) -> (l0 + g_lip_val*l1 + g_lip_grad, l1).
    """
    if f.dim != g.dim:
        raise ValueError(f"dimension mismatch: {f.dim} vs {g.dim}")
    if f.params is None:
        raise ValueError("f must carry smoothness constants")
    if g_lip_grad < 0 or g_lip_val < 0:
        raise ValueError("Lipschitz constants must be nonnegative")

    have_hessians = f.hessian is not None and g.hessian is not None

    def value(x):
        return f.value(x) + g.value(x)

    def gradient(x):
        return f.gradient(x) + g.gradient(x)

    def hessian(x):
        return f.hessian(x) + g.hessian(x)

    params = SmoothnessParams(
        f.params.l0 + g_lip_val * f.params.l1 + g_lip_grad, f.params.l1
    )
    return Objective(
        dim=f.dim,
        value=value,
        gradient=gradient,
        hessian=hessian if have_hessians else None,
        params=params,
        convex=f.convex and g_convex,
        name=f"sum({f.name},{g.name})",
    )


def separable_sum(parts: list[Objective]) -> Objective:
    """Block objective sum_i f_i(x_i) on the concatenated space.

    Curvature constants combine as the componentwise maximum.
    """
    if not parts:
        raise ValueError("parts must be nonempty")
    if any(p.params is None for p in parts):
        raise ValueError("every part must carry smoothness constants")
    dims = [p.dim for p in parts]
    offsets = np.concatenate([[0], np.cumsum(dims)]).astype(int)
    total = int(offsets[-1])
    have_hessians = all(p.hessian is not None for p in parts)

    def blocks(x):
        return [x[offsets[i] : offsets[i + 1]] for i in range(len(parts))]

    def value(x):
        return float(sum(p.value(b) for p, b in zip(parts, blocks(x))))

    def gradient(x):
        return np.concatenate([p.gradient(b) for p, b in zip(parts, blocks(x))])

    def hessian(x):
        out = np.zeros((total, total))
        for p, (i, j) in zip(parts, zip(offsets, offsets[1:])):
            out[i:j, i:j] = p.hessian(x[i:j])
        return out

    f_star = None
    if all(p.f_star is not None for p in parts):
        f_star = float(sum(p.f_star for p in parts))
    x_star = None
    if all(p.x_star is not None for p in parts):
        x_star = np.concatenate([p.x_star for p in parts])

    params = SmoothnessParams(
        max(p.params.l0 for p in parts), max(p.params.l1 for p in parts)
    )
    return Objective(
        dim=total,
        value=value,
        gradient=gradient,
        hessian=hessian if have_hessians else None,
        f_star=f_star,
        x_star=x_star,
        params=params,
        convex=all(p.convex for p in parts),
        name=f"separable[{','.join(p.name for p in parts)}]",
    )


def separable_pnorm(dim: int, p: float, l1: float) -> Objective:
    """(1/p) * sum_i |x_i|^p, the separable composition of 1-D power terms."""
    obj = separable_sum([power_norm(1, p, l1) for _ in range(dim)])
    return Objective(
        dim=obj.dim,
        value=obj.value,
        gradient=obj.gradient,
        hessian=obj.hessian,
        f_star=obj.f_star,
        x_star=obj.x_star,
        params=obj.params,
        convex=True,
        name=f"separable_pnorm(d={dim},p={p},l1={l1})",
    )


def sample_ball(rng: np.random.Generator, dim: int, radius: float, n: int) -> np.ndarray:
    """n points uniform in the closed ball of the given radius (rows)."""
    directions = rng.standard_normal((n, dim))
    norms = np.linalg.norm(directions, axis=1, keepdims=True)
    norms[norms == 0.0] = 1.0
    radii = radius * rng.random(n) ** (1.0 / dim)
    return directions / norms * radii[:, None]


def spectral_norm(h: np.ndarray, rng: np.random.Generator,
                  tol: float = 1e-10, max_iter: int = 500) -> float:
    """Largest-magnitude eigenvalue of a symmetric matrix by power iteration."""
    n = h.shape[0]
    if n == 1:
        return abs(float(h[0, 0]))
    v = rng.standard_normal(n)
    v /= np.linalg.norm(v)
    lam = 0.0
    for _ in range(max_iter):
        hv = h @ v
        norm_hv = np.linalg.norm(hv)
        if norm_hv == 0.0:
            return 0.0
        new_lam = float(v @ hv)
        v = hv / norm_hv
        if abs(new_lam - lam) <= tol * max(1.0, abs(new_lam)):
            lam = new_lam
            break
        lam = new_lam
    return abs(lam)


def certify_smoothness(
    f: Objective,
    params: SmoothnessParams,
    region_radius: float,
    n_samples: int,
    seed: int,
) -> CertificateReport:
    """Sample the ball and report the worst value of

        ||hess f(x)|| - l0 - l1 * ||grad f(x)||.

    Nonpositive max violation certifies the constants on the sampled region;
    a clearly positive value is a counterexample (up to power-iteration
    tolerance).  Deterministic for a fixed seed.
    """
    if f.hessian is None:
        raise ValueError(f"objective {f.name!r} does not provide a Hessian")
    if n_samples < 1:
        raise ValueError("n_samples must be at least 1")
    rng = np.random.default_rng(seed)
    points = sample_ball(rng, f.dim, region_radius, n_samples)
    worst = -math.inf
    worst_point = None
    for x in points:
        h_norm = spectral_norm(f.hessian(x), rng)
        violation = h_norm - params.l0 - params.l1 * float(np.linalg.norm(f.gradient(x)))
        if violation > worst:
            worst = violation
            worst_point = x.copy()
    return CertificateReport(
        n_samples=n_samples,
        max_violation=worst,
        violating_point=worst_point,
        region_radius=region_radius,
    )
