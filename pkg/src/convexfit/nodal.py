"""Nodal discretization: optimize the support values (h_0, ..., h_{N-1}) on
the uniform angular grid.

Convexity of the candidate shape is the rigorous discrete condition
h_{j+1} + h_{j-1} - 2 h_j cos(2*pi/N) >= 0, which captures boundary
segments exactly (a slack constraint means a straight edge).  Inclusion in
the container and the quadratic area equality complete the program; p = inf
is handled by an epigraph slack variable, never by a huge finite exponent.

The constraint stencils are circulant, so the Gauss-Newton seed handed to
the solver is assembled in O(N) as a pentadiagonal-plus-rank-one matrix.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .geometry import (
    GeometryError,
    SupportSamples,
    TWO_PI,
    _clip_halfplane,
    container_scale,
    interior_point,
    support_samples,
    unit_vector,
)
from .multistart import InfeasibleError, best_violation_message, run_multistart, seed_key
from .results import SolveResult
from .solver import NlpProblem, SolverParams

INIT_SCALE_RANGE = (0.3, 1.0)


@dataclass
class NodalProblem:
    """Container, grid size, exponent (math.inf allowed) and area fraction.

    The area target is alpha times the *discrete* container area, so that
    alpha = 1 is exactly feasible on every grid.
    """

    container: object
    n: int = 256
    p: float = 2.0
    alpha: float = 0.5

    def __post_init__(self):
        if self.n < 3:
            raise GeometryError("nodal grid needs n >= 3")
        if not (math.isinf(self.p) or self.p >= 1.0):
            raise GeometryError("exponent p must be >= 1 (or inf)")
        if not 0.0 <= self.alpha <= 1.0:
            raise GeometryError("area fraction alpha must lie in [0, 1]")
        self.container_values = support_samples(self.container, self.n).values
        self.container_area_discrete = nodal_area(self.container_values)[0]
        self.target_area = self.alpha * self.container_area_discrete

    @property
    def angles(self):
        return TWO_PI * np.arange(self.n) / self.n


def _values(h):
    return h.values if isinstance(h, SupportSamples) else np.asarray(h, dtype=float)


def nodal_area(h):
    """Discrete area (pi/N)/(2-2cos(2pi/N)) * sum h_j c_j and its gradient.

    Exact for constants: h == r gives pi r^2 on every grid.
    """
    v = _values(h)
    n = v.size
    cos = np.cos(TWO_PI / n)
    kappa = (np.pi / n) / (2.0 - 2.0 * cos)
    c = np.roll(v, -1) + np.roll(v, 1) - 2.0 * cos * v
    return float(kappa * np.sum(v * c)), 2.0 * kappa * c


def nodal_objective(h, prob):
    """Rectangle-rule powered gap (2pi/N) sum max(h_C - h_j, 0)^p with gradient.

    The clamp at zero keeps odd and fractional exponents real for iterates
    that overshoot the container between multiplier updates; at clamped
    nodes the gradient is taken as zero.
    """
    if math.isinf(prob.p):
        raise GeometryError("p = inf has no smooth nodal objective; use solve_minimax")
    v = _values(h)
    gap = np.maximum(prob.container_values - v, 0.0)
    w = TWO_PI / prob.n
    value = w * np.sum(gap**prob.p)
    grad = -prob.p * w * gap ** (prob.p - 1.0) if prob.p > 1.0 else -w * (gap > 0.0)
    return float(value), np.asarray(grad, dtype=float)


@dataclass
class ConstraintReport:
    inclusion: np.ndarray  # h_C(theta_j) - h_j, feasible when >= 0
    convexity: np.ndarray  # c_j, feasible when >= 0
    area_residual: float  # (area - target) / |container|, feasible when ~ 0

    @property
    def max_violation(self):
        return max(
            float(np.max(-self.inclusion, initial=0.0)),
            float(np.max(-self.convexity, initial=0.0)),
            abs(self.area_residual),
        )


def nodal_constraints(h, prob):
    v = _values(h)
    n = v.size
    cos = np.cos(TWO_PI / n)
    c = np.roll(v, -1) + np.roll(v, 1) - 2.0 * cos * v
    area, _ = nodal_area(v)
    scale = max(prob.container_area_discrete, 1e-300)
    return ConstraintReport(
        inclusion=prob.container_values - v,
        convexity=c,
        area_residual=(area - prob.target_area) / scale,
    )


def energy_of(h, prob):
    """Reported energy J_p of a candidate (max gap playing J_inf for p = inf)."""
    v = _values(h)
    gap = np.maximum(prob.container_values - v, 0.0)
    if math.isinf(prob.p):
        return float(np.max(gap))
    value = TWO_PI / prob.n * np.sum(gap**prob.p)
    return float(value ** (1.0 / prob.p))


def convexify(values):
    """Largest discretely-convex minorant of the given nodal values.

    Equals the sampled support function of the polygon cut out by the
    half-planes <x, u(theta_j)> <= v_j, so the result is exactly feasible
    for the discrete convexity condition.  (Iterative local averaging of
    the violating nodes converges to the same kind of minorant, but needs
    far more than 10 N sweeps to clear the last 1e-8; the polygon route is
    exact and O(N^2).)  Only ever lowers values, preserving inclusion.
    """
    v = np.asarray(values, dtype=float)
    n = v.size
    theta = TWO_PI * np.arange(n) / n
    u = unit_vector(theta)
    r = 2.0 * float(np.max(np.abs(v))) + 1.0
    pts = np.array([[r, r], [-r, r], [-r, -r], [r, -r]])
    for j in range(n):
        pts = _clip_halfplane(pts, u[j], v[j])
        if len(pts) < 3:
            raise GeometryError("convexification emptied the shape")
    return np.min(np.stack([np.max(pts @ u.T, axis=0), v]), axis=0)


# ---------------------------------------------------------------------------
# multistart plumbing
# ---------------------------------------------------------------------------


def _anchor_start(prob, zu):
    """Copy of the container scaled about the interior point to the exact
    target area (the frequency-1 part is area-neutral, so the factor is
    sqrt(alpha))."""
    radial = prob.container_values - zu
    return math.sqrt(prob.alpha) * radial + zu


def _random_start(prob, zu, rng):
    radial = prob.container_values - zu
    lo, hi = INIT_SCALE_RANGE
    v = rng.uniform(lo, hi, size=prob.n) * radial + zu
    v = convexify(v)
    w = v - zu
    area = nodal_area(w)[0]
    if area > 1e-12 * max(prob.target_area, 1.0):
        s = math.sqrt(max(prob.target_area, 0.0) / area)
        pos = w > 1e-14
        if np.any(pos):
            s = min(s, float(np.min(radial[pos] / w[pos])))
        v = s * w + zu
    return v


def _prepare_init(init, prob):
    v = _values(init)
    if v.size != prob.n:
        raise GeometryError(f"warm start has {v.size} nodes, problem needs {prob.n}")
    return convexify(np.minimum(v, prob.container_values))


def _gather_starts(prob, init, seeds, base_seed):
    zu = unit_vector(prob.angles) @ interior_point(prob.container)
    starts = []
    if init is not None:
        starts.append(_prepare_init(init, prob))
    starts.append(_anchor_start(prob, zu))
    for i in range(seeds):
        rng = np.random.default_rng(seed_key(base_seed, i))
        starts.append(_random_start(prob, zu, rng))
    return starts, zu


def _inequality_rows(prob, extra_cols=0):
    n = prob.n
    eye = np.eye(n)
    shift_next = np.roll(eye, 1, axis=1)  # picks h_{j+1}
    shift_prev = np.roll(eye, -1, axis=1)  # picks h_{j-1}
    cos = np.cos(TWO_PI / n)
    a_inc = eye
    a_cvx = -(shift_next + shift_prev - 2.0 * cos * eye)
    rows = np.vstack([a_inc, a_cvx])
    rhs = np.concatenate([prob.container_values, np.zeros(n)])
    if extra_cols:
        rows = np.hstack([rows, np.zeros((rows.shape[0], extra_cols))])
    return rows, rhs


def _area_equality(prob, dim):
    scale = max(prob.container_area_discrete, 1e-300)
    n = prob.n

    def equality(x):
        area, grad = nodal_area(x[:n])
        g = np.zeros(dim)
        g[:n] = grad / scale
        return (area - prob.target_area) / scale, g

    return equality


def _h0_builder(prob, nlp, obj_hess_diag, minimax=False):
    """O(N) assembly of the Gauss-Newton seed for the solver.

    The active normal matrix rho A_act^T A_act is diagonal (inclusion and
    gap rows) plus C^T D C for the convexity stencil, i.e. pentadiagonal
    with circular wrap; the area gradient adds a rank-one term.  The dense
    matrix is filled band by band and factorized by numpy.
    """
    n = prob.n
    cos = np.cos(TWO_PI / n)
    A, b = nlp.ineq_matrix, nlp.ineq_rhs
    dim = nlp.dim
    idx = np.arange(n)
    up1, up2 = (idx + 1) % n, (idx + 2) % n

    def builder(x, lam, mu, rho):
        act = (lam + rho * (A @ x - b)) >= 0.0
        d_inc = act[:n].astype(float)
        d_cvx = act[n : 2 * n].astype(float)
        H = np.zeros((dim, dim))
        diag = np.asarray(obj_hess_diag(x))[:n] + rho * d_inc
        diag += rho * (np.roll(d_cvx, 1) + 4.0 * cos**2 * d_cvx + np.roll(d_cvx, -1))
        H[idx, idx] = diag
        band1 = -2.0 * cos * rho * (d_cvx + np.roll(d_cvx, -1))
        H[idx, up1] += band1
        H[up1, idx] += band1
        band2 = rho * np.roll(d_cvx, -1)
        H[idx, up2] += band2
        H[up2, idx] += band2
        if minimax:
            d_gap = act[2 * n :].astype(float)
            H[idx, idx] += rho * d_gap
            H[idx, -1] += rho * d_gap
            H[-1, idx] += rho * d_gap
            H[-1, -1] += rho * float(np.sum(d_gap))
        eg = nlp.equality(x)[1]
        H += rho * np.outer(eg, eg)
        H[np.arange(dim), np.arange(dim)] += 1e-8 * max(1.0, float(np.max(diag, initial=1.0)))

        def apply(q):
            return np.linalg.solve(H, q)

        return apply

    return builder


def _assemble_result(prob, best, failures, outcomes, elapsed, base_seed, n_starts):
    if best is None:
        raise InfeasibleError(best_violation_message(failures, outcomes))
    energy, idx, rank, x, result = best
    values = x[: prob.n]
    report = nodal_constraints(values, prob)
    area = nodal_area(values)[0]
    gap = np.maximum(prob.container_values - values, 0.0)
    if math.isinf(prob.p):
        powered = float("inf")
        sigma = energy
        slack = float(x[-1])
    else:
        powered = float(TWO_PI / prob.n * np.sum(gap**prob.p))
        sigma = float((powered / TWO_PI) ** (1.0 / prob.p))
        slack = None
    flagged = float(np.min(report.convexity)) >= -1e-9 * max(1.0, float(np.max(np.abs(values))))
    if result is not None and rank == 0:
        status = result.status
    else:
        status = "max_iter"  # feasible retained start, optimality not certified
    return SolveResult(
        samples=SupportSamples(values, convex_checked=flagged),
        energy=energy,
        powered_value=powered,
        sigma_normalized=sigma,
        p=prob.p,
        area=area,
        area_residual=report.area_residual,
        max_inclusion_violation=float(np.max(-report.inclusion, initial=0.0)),
        min_convexity_residual=float(np.min(report.convexity)),
        kkt_residual=result.kkt_residual if result is not None else np.inf,
        status=status,
        history=result.history if result is not None else [],
        wall_time=elapsed,
        base_seed=base_seed,
        n_starts=n_starts,
        best_start=idx,
        minimax_slack=slack,
        message="; ".join(failures),
    )


def default_params():
    return SolverParams(outer_tol=1e-6, feas_tol=1e-8, max_outer=30, max_inner=150)


def solve_nodal(prob, init=None, seeds=4, base_seed=0, params=None, threads=1):
    """Best-of-multistart solve of the finite-p nodal problem.

    `init` (a SupportSamples warm start) is clipped into the container and
    convexified, then competes with the deterministic scaled-copy anchor and
    `seeds` random feasible starts.
    """
    if math.isinf(prob.p):
        raise GeometryError("use solve_minimax for p = inf")
    params = params or default_params()
    t0 = time.perf_counter()
    starts, zu = _gather_starts(prob, init, seeds, base_seed)

    anchor_gap = float(np.max(prob.container_values - _anchor_start(prob, zu)))
    ref = max(anchor_gap, 1e-6 * container_scale(prob.container))
    w = TWO_PI / prob.n
    p = prob.p

    if p == 1.0:
        # the clamped gap has a kink exactly on the inclusion boundary and
        # its zero-gradient side creates spurious stationary points there;
        # the linear form is identical on the feasible set and smooth
        def objective(x):
            gap = (prob.container_values - x) / ref
            return float(w * np.sum(gap)), np.full(prob.n, -w / ref)

    else:

        def objective(x):
            gap = np.maximum((prob.container_values - x) / ref, 0.0)
            value = w * np.sum(gap**p)
            return float(value), -(p / ref) * w * gap ** (p - 1.0)

    def obj_hess_diag(x):
        # below p = 2 the powered gap has little or no curvature; a proximal
        # floor at the p = 2 scale keeps the Newton seed bounded and steps
        # at the natural shape scale
        if p < 2.0:
            return np.full(prob.n, w / ref**2)
        gap = np.maximum((prob.container_values - x) / ref, 0.0)
        return p * (p - 1.0) * w / ref**2 * gap ** (p - 2.0)

    rows, rhs = _inequality_rows(prob)
    nlp = NlpProblem(
        dim=prob.n,
        objective=objective,
        ineq_matrix=rows,
        ineq_rhs=rhs,
        equality=_area_equality(prob, prob.n),
    )
    nlp.h0_builder = _h0_builder(prob, nlp, obj_hess_diag)
    best, failures, outcomes = run_multistart(
        nlp, starts, params, lambda x: energy_of(x, prob), threads
    )
    return _assemble_result(
        prob, best, failures, outcomes, time.perf_counter() - t0, base_seed, len(starts)
    )


def solve_minimax(prob, init=None, seeds=4, base_seed=0, params=None, threads=1):
    """Epigraph solve of the p = inf problem: min t with every gap <= t.

    Returns the Hausdorff-distance estimate as `energy` (and
    `minimax_slack`), alongside the optimal nodal shape.
    """
    if not math.isinf(prob.p):
        raise GeometryError("solve_minimax requires a problem flagged p = inf")
    params = params or default_params()
    t0 = time.perf_counter()
    n = prob.n
    shape_starts, _ = _gather_starts(prob, init, seeds, base_seed)
    starts = []
    for v in shape_starts:
        slack = float(np.max(prob.container_values - v)) * (1.0 + 1e-9) + 1e-12
        starts.append(np.concatenate([v, [slack]]))

    def objective(x):
        g = np.zeros(n + 1)
        g[-1] = 1.0
        return float(x[-1]), g

    rows, rhs = _inequality_rows(prob, extra_cols=1)
    gap_rows = np.hstack([-np.eye(n), -np.ones((n, 1))])
    rows = np.vstack([rows, gap_rows])
    rhs = np.concatenate([rhs, -prob.container_values])
    nlp = NlpProblem(
        dim=n + 1,
        objective=objective,
        ineq_matrix=rows,
        ineq_rhs=rhs,
        equality=_area_equality(prob, n + 1),
    )
    nlp.h0_builder = _h0_builder(prob, nlp, lambda x: np.zeros(n + 1), minimax=True)
    best, failures, outcomes = run_multistart(
        nlp, starts, params, lambda x: float(x[-1]), threads
    )
    return _assemble_result(
        prob, best, failures, outcomes, time.perf_counter() - t0, base_seed, len(starts)
    )
