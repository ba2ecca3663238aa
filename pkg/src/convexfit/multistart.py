"""Shared multistart driver for the two discretizations.

Every start is solved independently with a deterministic RNG stream derived
from (base_seed, start_index); raw starts and polished points are pooled and
the best feasible candidate wins.  A feasible warm start can therefore never
be beaten by a worse "solution": descent only polishes it downward.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .solver import SolverAbort, solve_nlp


class InfeasibleError(RuntimeError):
    """No feasible start or iterate was found."""


def seed_key(base_seed, index):
    if isinstance(base_seed, (tuple, list)):
        return [int(s) for s in base_seed] + [int(index)]
    return [int(base_seed), int(index)]


def run_multistart(nlp, starts, params, energy_fn, threads=1):
    """Solve from every start, pool starts and finals, keep the best feasible.

    Strictly lowest energy wins; ties within 1e-12 go to the lowest start
    index, and within a start the polished point beats the raw one.
    Returns (best, failures, outcomes) with best = (energy, start_idx, rank,
    x, NlpResult or None), or best = None when nothing was feasible.
    """
    bscale = max(1.0, float(np.max(np.abs(nlp.ineq_rhs))))
    feas = params.feas_tol * bscale

    def run(item):
        idx, x0 = item
        try:
            return idx, solve_nlp(nlp, x0, params)
        except SolverAbort as exc:
            return idx, exc

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            outcomes = list(pool.map(run, enumerate(starts)))
    else:
        outcomes = [run(item) for item in enumerate(starts)]

    def violation_of(x):
        v = float(np.max(nlp.ineq_matrix @ x - nlp.ineq_rhs, initial=0.0))
        if nlp.equality is not None:
            v = max(v, abs(nlp.equality(x)[0]))
        return v

    candidates = []  # (energy, start_idx, rank, x, result)
    failures = []
    for (idx, outcome), x0 in zip(outcomes, starts):
        if isinstance(outcome, SolverAbort):
            failures.append(f"start {idx}: {outcome}")
            result = None
        else:
            result = outcome
            if violation_of(result.x) <= feas:
                candidates.append((energy_fn(result.x), idx, 0, result.x, result))
        if violation_of(x0) <= feas:
            candidates.append((energy_fn(x0), idx, 1, x0, result))

    best = None
    for cand in candidates:
        if best is None:
            best = cand
            continue
        if cand[0] < best[0] - 1e-12:
            best = cand
        elif abs(cand[0] - best[0]) <= 1e-12 and (cand[1], cand[2]) < (best[1], best[2]):
            best = cand
    return best, failures, outcomes


def best_violation_message(failures, outcomes):
    finals = [o for _, o in outcomes if not isinstance(o, SolverAbort)]
    worst = min((r.max_violation for r in finals), default=np.inf)
    return (
        "no feasible point found by any start "
        f"(best violation {worst:.3e}; {'; '.join(failures) or 'no aborts'})"
    )
