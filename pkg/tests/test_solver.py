"""Augmented-Lagrangian solver: KKT behavior, determinism, QP cross-checks."""

import itertools

import numpy as np
import pytest

from convexfit.solver import NlpProblem, SolverAbort, SolverParams, check_kkt, solve_nlp


def quadratic(center):
    c = np.asarray(center, dtype=float)

    def f(x):
        return float((x - c) @ (x - c)), 2.0 * (x - c)

    return f


def test_unconstrained_quadratic():
    prob = NlpProblem(dim=2, objective=quadratic([1.0, 2.0]))
    res = solve_nlp(prob, np.zeros(2))
    np.testing.assert_allclose(res.x, [1.0, 2.0], atol=1e-10)
    assert res.status == "converged"
    assert res.kkt_residual <= 1e-10


def test_active_bound_multiplier():
    # min x1 s.t. x1 >= 0, written as -x1 <= 0
    prob = NlpProblem(
        dim=1,
        objective=lambda x: (float(x[0]), np.array([1.0])),
        ineq_matrix=np.array([[-1.0]]),
        ineq_rhs=np.array([0.0]),
    )
    res = solve_nlp(prob, np.array([3.0]))
    assert res.status == "converged"
    assert abs(res.x[0]) <= 1e-8
    assert res.ineq_multipliers[0] == pytest.approx(1.0, abs=1e-6)


def test_symmetric_projection():
    prob = NlpProblem(
        dim=2,
        objective=lambda x: (float(x @ x), 2.0 * x),
        equality=lambda x: (float(x[0] + x[1] - 1.0), np.array([1.0, 1.0])),
    )
    res = solve_nlp(prob, np.zeros(2), SolverParams(feas_tol=1e-9))
    np.testing.assert_allclose(res.x, [0.5, 0.5], atol=1e-6)
    report = check_kkt(prob, res.x, None, res.eq_multiplier)
    assert report["stationarity"] <= 1e-8
    assert report["primal"] <= 1e-8


def test_kkt_flags_interior_point():
    prob = NlpProblem(
        dim=1,
        objective=lambda x: (float(x[0]), np.array([1.0])),
        ineq_matrix=np.array([[-1.0]]),
        ineq_rhs=np.array([0.0]),
    )
    report = check_kkt(prob, np.array([2.0]), np.array([0.0]))
    assert report["stationarity"] == pytest.approx(1.0)


def test_kkt_residual_equals_gradient_norm():
    prob = NlpProblem(dim=2, objective=quadratic([0.0, 0.0]))
    x = np.array([3.0, 4.0])
    report = check_kkt(prob, x)
    grad = 2.0 * x
    assert report["stationarity"] == pytest.approx(
        np.linalg.norm(grad) / max(1.0, np.linalg.norm(grad))
    )


def test_bitwise_deterministic_history():
    prob = NlpProblem(
        dim=2,
        objective=lambda x: (float(x @ x), 2.0 * x),
        equality=lambda x: (float(x[0] + x[1] - 1.0), np.array([1.0, 1.0])),
    )
    a = solve_nlp(prob, np.array([0.3, -0.2]))
    b = solve_nlp(prob, np.array([0.3, -0.2]))
    assert len(a.history) == len(b.history)
    for ra, rb in zip(a.history, b.history):
        assert ra == rb  # dataclass equality on floats: bitwise


def _active_set_qp(Q, q, A, b):
    """Enumerate active sets; return the optimum of the convex QP."""
    n, m = Q.shape[0], len(b)
    best = None
    for k in range(0, min(n, m) + 1):
        for S in itertools.combinations(range(m), k):
            S = list(S)
            if k:
                kkt = np.block([[Q, A[S].T], [A[S], np.zeros((k, k))]])
                rhs = np.concatenate([-q, b[S]])
            else:
                kkt, rhs = Q, -q
            try:
                sol = np.linalg.solve(kkt, rhs)
            except np.linalg.LinAlgError:
                continue
            x, lam = sol[:n], sol[n:]
            if np.all(A @ x - b <= 1e-9) and np.all(lam >= -1e-9):
                val = 0.5 * x @ Q @ x + q @ x
                if best is None or val < best[0]:
                    best = (val, x)
    return best


@pytest.mark.parametrize("seed", range(6))
def test_matches_active_set_enumeration(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 9))
    m = int(rng.integers(1, 7))
    M = rng.normal(size=(n, n))
    Q = M @ M.T + n * np.eye(n)
    q = rng.normal(size=n)
    A = rng.normal(size=(m, n))
    b = rng.normal(size=m) + 1.0
    prob = NlpProblem(
        dim=n,
        objective=lambda x: (float(0.5 * x @ Q @ x + q @ x), Q @ x + q),
        ineq_matrix=A,
        ineq_rhs=b,
    )
    res = solve_nlp(prob, np.zeros(n), SolverParams(feas_tol=1e-10))
    val, x_ref = _active_set_qp(Q, q, A, b)
    assert abs(res.objective - val) <= 1e-6
    np.testing.assert_allclose(res.x, x_ref, atol=1e-5)


def test_penalty_violation_monotone():
    rng = np.random.default_rng(7)
    n, m = 6, 4
    M = rng.normal(size=(n, n))
    Q = M @ M.T + n * np.eye(n)
    q = rng.normal(size=n)
    A = rng.normal(size=(m, n))
    b = rng.normal(size=m) - 1.0  # start infeasible
    prob = NlpProblem(
        dim=n,
        objective=lambda x: (float(0.5 * x @ Q @ x + q @ x), Q @ x + q),
        ineq_matrix=A,
        ineq_rhs=b,
        equality=lambda x: (float(x @ x - 1.0), 2.0 * x),
    )
    res = solve_nlp(prob, np.full(n, 2.0))
    viols = [rec.max_violation for rec in res.history[1:]]
    for earlier, later in zip(viols, viols[1:]):
        assert later <= 1.01 * earlier


def test_nonfinite_objective_aborts():
    def bad(x):
        return float("nan"), np.zeros(1)

    with pytest.raises(SolverAbort):
        solve_nlp(NlpProblem(dim=1, objective=bad), np.zeros(1))


def test_params_validation():
    with pytest.raises(ValueError):
        SolverParams(rho0=-1.0)
    with pytest.raises(ValueError):
        SolverParams(rho_growth=0.5)
    with pytest.raises(ValueError):
        SolverParams(outer_tol=0.0)
