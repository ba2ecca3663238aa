"""Augmented-Lagrangian solver for smooth objectives under linear inequality
constraints and one scalar equality constraint.

The outer loop is the classical safeguarded method of multipliers:
inequalities enter through the Powell-Hestenes-Rockafellar squared-hinge
term with multiplier estimates, the equality through the usual linear +
quadratic penalty.  Subproblems are minimized by a quasi-Newton descent
with backtracking Armijo line search: limited-memory BFGS by default, or,
when the problem supplies a curvature seed (`h0_builder`), damped Newton
steps on the active-set Gauss-Newton model of the augmented Lagrangian.
The seed is what makes the nearly-degenerate convexity constraints of the
shape problems tractable; plain L-BFGS crawls in their flat valleys.

The solver draws no random numbers: identical inputs give bitwise
identical iteration histories.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class SolverAbort(RuntimeError):
    """Objective or gradient became non-finite at the current iterate."""


@dataclass
class NlpProblem:
    """min f(x)  s.t.  A x <= b  and  g(x) = 0.

    `objective` and `equality` map x to (value, gradient); either constraint
    block may be absent.  All callables must be deterministic and return
    finite values near the feasible set.

    `h0_builder(x, lam, mu, rho) -> (q -> d)` may supply an approximate
    inverse Hessian of the augmented Lagrangian (rebuilt at every inner
    iterate); problems with structured constraints should provide it.
    """

    dim: int
    objective: object
    ineq_matrix: np.ndarray | None = None
    ineq_rhs: np.ndarray | None = None
    equality: object | None = None
    h0_builder: object | None = None

    def __post_init__(self):
        if self.ineq_matrix is not None:
            self.ineq_matrix = np.asarray(self.ineq_matrix, dtype=float)
            self.ineq_rhs = np.asarray(self.ineq_rhs, dtype=float)
            if self.ineq_matrix.shape != (self.ineq_rhs.size, self.dim):
                raise ValueError("inequality matrix/rhs shapes do not match dim")

    @property
    def n_ineq(self):
        return 0 if self.ineq_matrix is None else self.ineq_rhs.size


@dataclass
class SolverParams:
    rho0: float = 10.0
    rho_growth: float = 10.0
    rho_max: float = 1e8
    violation_shrink: float = 4.0
    outer_tol: float = 1e-6
    feas_tol: float | None = None  # defaults to outer_tol
    max_outer: int = 30
    max_inner: int = 300
    memory: int = 10
    inner_tol_floor: float = 1e-9
    armijo: float = 1e-4
    backtrack: float = 0.5
    max_backtracks: int = 40

    def __post_init__(self):
        if not (self.rho0 > 0 and self.rho_growth > 1):
            raise ValueError("need rho0 > 0 and rho_growth > 1")
        if not (self.outer_tol > 0 and self.inner_tol_floor > 0):
            raise ValueError("tolerances must be positive")
        if self.feas_tol is None:
            self.feas_tol = self.outer_tol


@dataclass
class OuterRecord:
    outer_iter: int
    inner_iters: int
    objective: float
    eq_residual: float
    max_violation: float
    stationarity: float


@dataclass
class NlpResult:
    x: np.ndarray
    objective: float
    ineq_multipliers: np.ndarray
    eq_multiplier: float
    kkt_residual: float
    max_violation: float
    history: list = field(default_factory=list)
    status: str = "converged"


def _violation(problem, x):
    """(max positive inequality overrun or |g|, g)."""
    v_ineq = 0.0
    if problem.n_ineq:
        v_ineq = float(np.max(problem.ineq_matrix @ x - problem.ineq_rhs, initial=0.0))
        v_ineq = max(v_ineq, 0.0)
    g = 0.0
    if problem.equality is not None:
        g = float(problem.equality(x)[0])
    return max(v_ineq, abs(g)), g


def check_kkt(problem, x, ineq_multipliers=None, eq_multiplier=0.0):
    """KKT residual report at (x, multipliers).

    stationarity = ||grad f + A^T lambda + mu grad g|| / max(1, ||grad f||);
    primal = max constraint violation; complementarity = max |lambda_i slack_i|.
    """
    f, grad = problem.objective(x)
    r = grad.copy()
    comp = 0.0
    if problem.n_ineq:
        lam = (
            np.zeros(problem.n_ineq)
            if ineq_multipliers is None
            else np.asarray(ineq_multipliers, dtype=float)
        )
        r += problem.ineq_matrix.T @ lam
        slack = problem.ineq_rhs - problem.ineq_matrix @ x
        comp = float(np.max(np.abs(lam * slack), initial=0.0))
    if problem.equality is not None:
        r += eq_multiplier * problem.equality(x)[1]
    primal, _ = _violation(problem, x)
    stationarity = float(np.linalg.norm(r) / max(1.0, np.linalg.norm(grad)))
    return {
        "stationarity": stationarity,
        "primal": primal,
        "complementarity": comp,
        "objective": float(f),
    }


def _lbfgs_direction(grad, s_list, y_list):
    q = grad.copy()
    alphas = []
    rhos = [1.0 / float(y @ s) for s, y in zip(s_list, y_list)]
    for (s, y), rho in zip(reversed(list(zip(s_list, y_list))), reversed(rhos)):
        a = rho * float(s @ q)
        alphas.append(a)
        q -= a * y
    if s_list:
        s, y = s_list[-1], y_list[-1]
        q *= float(s @ y) / float(y @ y)
    for (s, y), rho, a in zip(zip(s_list, y_list), rhos, reversed(alphas)):
        b = rho * float(y @ q)
        q += (a - b) * s
    return -q


def _inner_minimize(al, x0, tol, params, make_h0=None):
    """Quasi-Newton descent with backtracking Armijo on the function `al`.

    With `make_h0` the search direction is the damped Newton step
    -H0(x)^{-1} g rebuilt at every iterate (no memory pairs: the hinge
    structure of the augmented Lagrangian makes stale pairs harmful);
    otherwise plain L-BFGS.
    """
    x = x0.copy()
    f, g = al(x)
    if not (np.isfinite(f) and np.all(np.isfinite(g))):
        raise SolverAbort("non-finite objective or gradient at the start point")
    s_list, y_list = [], []
    iters = 0
    while iters < params.max_inner and np.linalg.norm(g, np.inf) > tol:
        if make_h0 is not None:
            d = -make_h0(x)(g)
        else:
            d = _lbfgs_direction(g, s_list, y_list)
        slope = float(g @ d)
        if not np.isfinite(slope) or slope >= 0:
            s_list, y_list = [], []
            d = -g
            slope = float(g @ d)
        step = 1.0
        f_new = g_new = None
        fallback = None  # best simple-decrease trial (objective kinks break Armijo)
        for _ in range(params.max_backtracks):
            x_new = x + step * d
            f_try, g_try = al(x_new)
            if np.isfinite(f_try) and f_try <= f + params.armijo * step * slope:
                f_new, g_new = f_try, g_try
                break
            if (
                fallback is None
                and np.isfinite(f_try)
                and f_try < f - 1e-12 * max(1.0, abs(f))
            ):
                fallback = (x_new, f_try, g_try)
            step *= params.backtrack
        if f_new is None and fallback is not None:
            x_new, f_new, g_new = fallback
        if f_new is None:
            if s_list:
                s_list, y_list = [], []
                continue
            break  # no decrease even along steepest descent: stop
        if make_h0 is None:
            s, y = x_new - x, g_new - g
            sy = float(s @ y)
            if sy > 1e-10 * np.linalg.norm(s) * np.linalg.norm(y):
                s_list.append(s)
                y_list.append(y)
                if len(s_list) > params.memory:
                    s_list.pop(0)
                    y_list.pop(0)
        x, f, g = x_new, f_new, g_new
        iters += 1
    return x, iters


def dense_h0_builder(problem, obj_hessian):
    """Gauss-Newton seed: (H_f + rho A_act^T A_act + rho eg eg^T + delta I)^{-1}.

    `obj_hessian(x)` returns the (dense or diagonal) objective Hessian.  The
    indefinite curvature of the equality constraint is deliberately dropped:
    the remaining model is positive semidefinite by construction.  Meant for
    moderate dimensions (the masked normal matrix is formed densely).
    """
    A, b = problem.ineq_matrix, problem.ineq_rhs

    def builder(x, lam, mu, rho):
        mask = (lam + rho * (A @ x - b)) >= 0.0
        Am = A[mask]
        H = rho * (Am.T @ Am)
        Hf = obj_hessian(x)
        if np.ndim(Hf) == 1:
            H[np.diag_indices_from(H)] += Hf
        else:
            H += Hf
        if problem.equality is not None:
            eg = problem.equality(x)[1]
            H += rho * np.outer(eg, eg)
        H[np.diag_indices_from(H)] += 1e-8 * max(1.0, float(np.max(np.abs(H))))

        def apply(q):
            return np.linalg.solve(H, q)

        return apply

    return builder


def solve_nlp(problem, x0, params=None):
    """Minimize an NlpProblem from x0; returns an NlpResult with history.

    Each outer iteration minimizes the augmented Lagrangian to a tolerance
    that tightens with the outer counter, then updates multipliers; the
    penalty grows tenfold whenever the violation is above tolerance and
    failed to shrink by the configured factor.
    """
    params = params or SolverParams()
    x = np.asarray(x0, dtype=float).copy()
    if x.shape != (problem.dim,):
        raise ValueError(f"x0 must have shape ({problem.dim},)")
    if not np.all(np.isfinite(x)):
        raise SolverAbort("x0 is not finite")

    A, b = problem.ineq_matrix, problem.ineq_rhs
    lam = np.zeros(problem.n_ineq)
    mu = 0.0
    rho = params.rho0

    f0, g0 = problem.objective(x)
    if not (np.isfinite(f0) and np.all(np.isfinite(g0))):
        raise SolverAbort("objective not finite at x0")
    gscale = max(1.0, float(np.linalg.norm(g0, np.inf)))
    bscale = max(1.0, float(np.max(np.abs(b))) if problem.n_ineq else 1.0)

    def augmented(z):
        f, grad = problem.objective(z)
        val = f
        grad = grad.copy()
        if problem.n_ineq:
            t = np.maximum(0.0, lam + rho * (A @ z - b))
            val += (float(t @ t) - float(lam @ lam)) / (2.0 * rho)
            grad += A.T @ t
        if problem.equality is not None:
            e, eg = problem.equality(z)
            val += mu * e + 0.5 * rho * e * e
            grad += (mu + rho * e) * eg
        return val, grad

    history = []
    prev_viol = np.inf
    prev_obj = np.inf
    status = "max_iter"
    stalled = 0
    flat = 0
    for outer in range(params.max_outer):
        # tighten with the outer counter, but never lag behind the violation:
        # a multiplier update perturbs the AL gradient by about rho * viol,
        # and the inner solve must resolve that to make the update matter
        schedule = 10.0 ** (-2.0 - outer / 2.0)
        if np.isfinite(prev_viol):
            schedule = min(schedule, 0.3 * prev_viol)
        tol_inner = max(params.inner_tol_floor, schedule) * gscale
        make_h0 = None
        if problem.h0_builder is not None:
            make_h0 = lambda z: problem.h0_builder(z, lam, mu, rho)  # noqa: E731
        x, inner_iters = _inner_minimize(augmented, x, tol_inner, params, make_h0)

        viol, g_eq = _violation(problem, x)
        lam_hat = np.maximum(0.0, lam + rho * (A @ x - b)) if problem.n_ineq else lam
        mu_hat = mu + rho * g_eq if problem.equality is not None else mu
        report = check_kkt(problem, x, lam_hat, mu_hat)
        history.append(
            OuterRecord(
                outer_iter=outer,
                inner_iters=inner_iters,
                objective=report["objective"],
                eq_residual=g_eq,
                max_violation=viol,
                stationarity=report["stationarity"],
            )
        )
        lam, mu = lam_hat, mu_hat

        if report["stationarity"] <= params.outer_tol and viol <= params.feas_tol * bscale:
            status = "converged"
            break
        stalled = stalled + 1 if inner_iters == 0 else 0
        if stalled >= 8:
            break  # repeated multiplier updates no longer move anything
        feasible_now = viol <= params.feas_tol * bscale
        obj_flat = abs(report["objective"] - prev_obj) <= 1e-8 * max(1.0, abs(report["objective"]))
        flat = flat + 1 if (feasible_now and obj_flat) else 0
        prev_obj = report["objective"]
        if flat >= 2:
            break  # feasible and the objective has stopped moving
        if (
            inner_iters > 0  # an idle outer teaches nothing about the penalty
            and viol > params.feas_tol * bscale
            and viol > prev_viol / params.violation_shrink
        ):
            rho = min(rho * params.rho_growth, params.rho_max)
        prev_viol = viol

    viol, _ = _violation(problem, x)
    if status != "converged" and viol > params.feas_tol * bscale:
        status = "infeasible"
    return NlpResult(
        x=x,
        objective=float(problem.objective(x)[0]),
        ineq_multipliers=lam,
        eq_multiplier=mu,
        kkt_residual=history[-1].stationarity if history else np.inf,
        max_violation=viol,
        history=history,
        status=status,
    )
