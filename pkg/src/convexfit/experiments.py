"""Scripted studies: convergence of the p-distance optima to the Hausdorff
optimum, Fourier-vs-nodal method comparison, the value curve alpha -> f(alpha),
the area/energy problem-equivalence probe, and boundary-polygonality metrics.

Every study is deterministic given (config, base seed): per-cell seeds are
derived as (base_seed, cell_index), cells may run concurrently, and output
CSV/SVG bytes are identical across reruns.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field

import numpy as np

from .fourier import FourierProblem, solve_fourier
from .geometry import (
    SupportSamples,
    TWO_PI,
    container_scale,
    hausdorff_from_supports,
    support_samples,
)
from .multistart import InfeasibleError
from .nodal import (
    NodalProblem,
    _gather_starts,
    _inequality_rows,
    default_params,
    energy_of,
    nodal_area,
    solve_minimax,
    solve_nodal,
)
from .solver import NlpProblem, SolverAbort, solve_nlp
from . import exports


@dataclass
class StudyConfig:
    """Shared knobs for the study drivers.

    `alphas`/`ps` are the study grids (singletons for single-cell studies);
    `output_dir=None` disables file output.
    """

    container: object
    container_name: str = "container"
    alphas: tuple = (0.5,)
    ps: tuple = (2.0,)
    n: int = 256
    n_f: int = 32
    m: int = 720
    q: int = 1024
    seeds: int = 4
    base_seed: int = 0
    threads: int = 1
    output_dir: str | None = None
    params: object = None

    def __post_init__(self):
        if not self.alphas or not self.ps:
            raise ValueError("alpha and p lists must be non-empty")
        self.alphas = tuple(float(a) for a in self.alphas)
        self.ps = tuple(float(p) for p in self.ps)

    def cell_seed(self, index):
        return [int(self.base_seed), int(index)]

    def out_path(self, name):
        os.makedirs(self.output_dir, exist_ok=True)
        return os.path.join(self.output_dir, name)


def _maybe_svg(cfg, samples, name):
    if cfg.output_dir is not None:
        exports.export_svg(cfg.container, [samples], cfg.out_path(name))


GAMMA_COLUMNS = [
    "p",
    "sigma_normalized",
    "sigma_infinity",
    "hausdorff_to_minimax",
    "powered_value",
    "energy",
    "status",
]


def gamma_sweep(cfg):
    """Normalized optima across p against the Hausdorff optimum.

    Solves the minimax problem first, then walks the p grid downward,
    warm-starting each solve from the previous optimum.  The pointwise
    power-mean inequality then makes the reported normalized energies
    nondecreasing in p by construction, with each solve free to improve on
    its warm start.  Rows are emitted in ascending p.
    """
    alpha = cfg.alphas[0]
    inf_prob = NodalProblem(cfg.container, n=cfg.n, p=math.inf, alpha=alpha)
    r_inf = solve_minimax(
        inf_prob, seeds=cfg.seeds, base_seed=cfg.cell_seed(0), params=cfg.params, threads=cfg.threads
    )
    sigma_inf = r_inf.energy
    _maybe_svg(cfg, r_inf.samples, f"gamma_{cfg.container_name}_pinf.svg")

    rows = []
    chain = r_inf.samples
    for k, p in enumerate(sorted(cfg.ps, reverse=True)):
        try:
            res = solve_nodal(
                NodalProblem(cfg.container, n=cfg.n, p=p, alpha=alpha),
                init=chain,
                seeds=cfg.seeds,
                base_seed=cfg.cell_seed(k + 1),
                params=cfg.params,
                threads=cfg.threads,
            )
            chain = res.samples
            rows.append(
                {
                    "p": p,
                    "sigma_normalized": res.sigma_normalized,
                    "sigma_infinity": sigma_inf,
                    "hausdorff_to_minimax": hausdorff_from_supports(res.samples, r_inf.samples),
                    "powered_value": res.powered_value,
                    "energy": res.energy,
                    "status": res.status,
                }
            )
            _maybe_svg(cfg, res.samples, f"gamma_{cfg.container_name}_p{p:g}.svg")
        except InfeasibleError as exc:
            rows.append(
                {
                    "p": p,
                    "sigma_normalized": float("nan"),
                    "sigma_infinity": sigma_inf,
                    "hausdorff_to_minimax": float("nan"),
                    "powered_value": float("nan"),
                    "energy": float("nan"),
                    "status": f"infeasible({exc})",
                }
            )
    rows.sort(key=lambda r: r["p"])
    if cfg.output_dir is not None:
        exports.export_study_csv(GAMMA_COLUMNS, rows, cfg.out_path(f"gamma_{cfg.container_name}.csv"))
    return rows, r_inf


def compare_methods(cfg):
    """Fourier solve vs nodal solves (cold and warm-started from Fourier).

    All energies are evaluated on the common nodal grid.  The warm branch
    runs the same multistart as the cold branch plus the Fourier solution
    as a privileged extra start, so by construction it can only improve on
    both the Fourier energy and the cold branch.  The constraint grid m is
    rounded up to a multiple of n so the warm start inherits inclusion
    feasibility at the nodal angles.
    """
    p, alpha = cfg.ps[0], cfg.alphas[0]
    report = {"p": p, "alpha": alpha}
    m_aligned = cfg.m if cfg.m % cfg.n == 0 else (cfg.m // cfg.n + 1) * cfg.n
    nodal_prob = NodalProblem(cfg.container, n=cfg.n, p=p, alpha=alpha)
    try:
        f_prob = FourierProblem(
            cfg.container, n_f=cfg.n_f, m=m_aligned, q=cfg.q, p=p, alpha=alpha
        )
        r1 = solve_fourier(
            f_prob,
            seeds=cfg.seeds,
            base_seed=cfg.cell_seed(0),
            params=cfg.params,
            n_samples=cfg.n,
            threads=cfg.threads,
        )
        report["fourier"] = r1
        report["energy_fourier"] = energy_of(r1.samples, nodal_prob)
        _maybe_svg(cfg, r1.samples, f"compare_{cfg.container_name}_fourier.svg")
    except InfeasibleError as exc:
        r1 = None
        report["fourier_error"] = str(exc)

    try:
        cold = solve_nodal(
            nodal_prob, seeds=cfg.seeds, base_seed=cfg.cell_seed(1), params=cfg.params, threads=cfg.threads
        )
        report["nodal_cold"] = cold
        report["energy_nodal_cold"] = cold.energy
        _maybe_svg(cfg, cold.samples, f"compare_{cfg.container_name}_nodal_cold.svg")
    except InfeasibleError as exc:
        report["nodal_cold_error"] = str(exc)

    if r1 is not None:
        try:
            warm = solve_nodal(
                nodal_prob,
                init=r1.samples,
                seeds=cfg.seeds,
                base_seed=cfg.cell_seed(1),
                params=cfg.params,
                threads=cfg.threads,
            )
            report["nodal_warm"] = warm
            report["energy_nodal_warm"] = warm.energy
            _maybe_svg(cfg, warm.samples, f"compare_{cfg.container_name}_nodal_warm.svg")
        except InfeasibleError as exc:
            report["nodal_warm_error"] = str(exc)

    if cfg.output_dir is not None:
        columns = ["p", "alpha", "energy_fourier", "energy_nodal_cold", "energy_nodal_warm"]
        row = {c: report.get(c, float("nan")) for c in columns}
        exports.export_study_csv(columns, [row], cfg.out_path(f"compare_{cfg.container_name}.csv"))
        for key, name in (
            ("fourier", "fourier"),
            ("nodal_cold", "nodal_cold"),
            ("nodal_warm", "nodal_warm"),
        ):
            if key in report:
                exports.export_history_csv(
                    report[key].history, cfg.out_path(f"compare_{cfg.container_name}_{name}_history.csv")
                )
    return report


F_CURVE_COLUMNS = ["alpha", "f_value", "status"]


def f_curve(cfg):
    """Best energy as a function of the area fraction, plus monotonicity.

    Returns (rows, max_upward_violation): the theory says f decreases in
    alpha, so any increase between consecutive cells is solver noise.
    Each cell warm-starts from its left neighbor.
    """
    p = cfg.ps[0]
    rows = []
    chain = None
    for k, alpha in enumerate(cfg.alphas):
        try:
            prob = NodalProblem(cfg.container, n=cfg.n, p=p, alpha=alpha)
            if math.isinf(p):
                res = solve_minimax(
                    prob, init=chain, seeds=cfg.seeds, base_seed=cfg.cell_seed(k),
                    params=cfg.params, threads=cfg.threads,
                )
            else:
                res = solve_nodal(
                    prob, init=chain, seeds=cfg.seeds, base_seed=cfg.cell_seed(k),
                    params=cfg.params, threads=cfg.threads,
                )
            chain = res.samples
            rows.append({"alpha": alpha, "f_value": res.energy, "status": res.status})
        except InfeasibleError as exc:
            rows.append({"alpha": alpha, "f_value": float("nan"), "status": f"infeasible({exc})"})
    values = [r["f_value"] for r in rows if np.isfinite(r["f_value"])]
    violation = max(
        (b - a for a, b in zip(values, values[1:])), default=0.0
    )
    if cfg.output_dir is not None:
        exports.export_study_csv(F_CURVE_COLUMNS, rows, cfg.out_path(f"fcurve_{cfg.container_name}.csv"))
    return rows, max(violation, 0.0)


def equivalence_probe(cfg):
    """Solve min-energy-at-area, then min-area-at-that-energy, and compare.

    The second stage minimizes the discrete area subject to the powered
    objective pinned at the stage-one optimum (for p = inf: the box
    constraint h >= h_container - t*), convexity and inclusion.  Reports the
    recovered area against the stage-one target.
    """
    p, alpha = cfg.ps[0], cfg.alphas[0]
    prob = NodalProblem(cfg.container, n=cfg.n, p=p, alpha=alpha)
    if math.isinf(p):
        stage1 = solve_minimax(
            prob, seeds=cfg.seeds, base_seed=cfg.cell_seed(0), params=cfg.params, threads=cfg.threads
        )
    else:
        stage1 = solve_nodal(
            prob, seeds=cfg.seeds, base_seed=cfg.cell_seed(0), params=cfg.params, threads=cfg.threads
        )
    f_val = stage1.energy

    n = prob.n
    params = cfg.params or default_params()
    area_scale = max(prob.container_area_discrete, 1e-300)

    def area_objective(x):
        area, grad = nodal_area(x)
        return area / area_scale, grad / area_scale

    def area_hess_diag(x):
        cos = np.cos(TWO_PI / n)
        kappa = (np.pi / n) / (2.0 - 2.0 * cos)
        return np.full(n, 8.0 * kappa / area_scale)

    rows, rhs = _inequality_rows(prob)
    has_box = math.isinf(p)
    if has_box:
        rows = np.vstack([rows, -np.eye(n)])
        rhs = np.concatenate([rhs, f_val - prob.container_values])
        equality = None
    else:
        target_powered = stage1.powered_value
        eq_scale = max(target_powered, 1e-12)
        w = TWO_PI / n

        def equality(x):
            gap = np.maximum(prob.container_values - x, 0.0)
            value = w * np.sum(gap**p)
            grad = -p * w * gap ** (p - 1.0) if p > 1.0 else -w * (gap > 0.0).astype(float)
            return (value - target_powered) / eq_scale, grad / eq_scale

    nlp = NlpProblem(dim=n, objective=area_objective, ineq_matrix=rows, ineq_rhs=rhs, equality=equality)

    cos = np.cos(TWO_PI / n)
    idx = np.arange(n)
    up1, up2 = (idx + 1) % n, (idx + 2) % n

    def h0_builder(x, lam, mu, rho):
        act = (lam + rho * (rows @ x - rhs)) >= 0.0
        d_cvx = act[n : 2 * n].astype(float)
        diag = area_hess_diag(x) + rho * act[:n].astype(float)
        if has_box:
            diag = diag + rho * act[2 * n :].astype(float)
        diag = diag + rho * (np.roll(d_cvx, 1) + 4.0 * cos**2 * d_cvx + np.roll(d_cvx, -1))
        H = np.zeros((n, n))
        H[idx, idx] = diag
        band1 = -2.0 * cos * rho * (d_cvx + np.roll(d_cvx, -1))
        H[idx, up1] += band1
        H[up1, idx] += band1
        band2 = rho * np.roll(d_cvx, -1)
        H[idx, up2] += band2
        H[up2, idx] += band2
        if equality is not None:
            eg = equality(x)[1]
            H += rho * np.outer(eg, eg)
        H[idx, idx] += 1e-8 * max(1.0, float(np.max(diag, initial=1.0)))
        return lambda q: np.linalg.solve(H, q)

    nlp.h0_builder = h0_builder

    starts = [stage1.samples.values.copy()]
    extra, _ = _gather_starts(prob, None, cfg.seeds, cfg.cell_seed(1))
    starts += extra

    def feasible_area(x):
        v = float(np.max(rows @ x - rhs, initial=0.0))
        if equality is not None:
            v = max(v, abs(equality(x)[0]))
        return v

    bscale = max(1.0, float(np.max(np.abs(rhs))))
    best = None
    for start_idx, x0 in enumerate(starts):
        try:
            res = solve_nlp(nlp, x0, params)
        except SolverAbort:
            continue
        for rank, x in ((0, res.x), (1, x0)):
            if feasible_area(x) <= params.feas_tol * bscale:
                area = nodal_area(x)[0]
                cand = (area, start_idx, rank, x)
                if best is None or cand[:3] < best[:3]:
                    best = cand
    if best is None:
        raise InfeasibleError("area-minimization stage found no feasible point")
    area, _, _, x = best
    report = {
        "p": p,
        "alpha": alpha,
        "f_value": f_val,
        "target_area": prob.target_area,
        "recovered_area": area,
        "area_gap": abs(area - prob.target_area),
        "relative_gap": abs(area - prob.target_area) / max(prob.container_area_discrete, 1e-300),
        "stage1": stage1,
        "stage2_samples": SupportSamples(x),
    }
    if cfg.output_dir is not None:
        columns = ["p", "alpha", "f_value", "target_area", "recovered_area", "area_gap"]
        exports.export_study_csv(
            columns,
            [{c: (report[c] if not (c == "p" and math.isinf(report[c])) else float("inf")) for c in columns}],
            cfg.out_path(f"equivalence_{cfg.container_name}.csv"),
        )
    return report


@dataclass
class PolygonalityThresholds:
    """Calibration constants for the boundary-structure report.

    free_gap_rel scales the contact/free split by the container size;
    curvature_rel scales the near-zero test by the contact curvature (or,
    for polygonal containers whose contact curvature is itself zero, by the
    mean curvature radius perimeter/2pi).
    """

    free_gap_rel: float = 1e-4
    curvature_rel: float = 1e-3


@dataclass
class PolygonalityReport:
    n_nodes: int
    n_free: int
    n_contact: int
    near_zero_fraction: float
    segment_count: int
    curvature_scale: float
    threshold: float
    free_radii: np.ndarray = field(repr=False, default=None)


def polygonality_report(shape, container, thresholds=None):
    """Classify free-boundary nodes by discrete curvature radius.

    A node is free when its gap to the container exceeds the free-gap
    threshold; among free nodes, those with curvature radius below the
    near-zero threshold lie on straight segments.  Maximal circular runs of
    near-zero free nodes estimate the segment count.
    """
    thresholds = thresholds or PolygonalityThresholds()
    values = shape.values
    n = values.size
    h_c = support_samples(container, n).values
    gap = h_c - values
    cos = np.cos(TWO_PI / n)
    c = np.roll(values, -1) + np.roll(values, 1) - 2.0 * cos * values
    radius = c / (2.0 - 2.0 * cos)

    eps_free = thresholds.free_gap_rel * container_scale(container)
    free = gap > eps_free
    contact = ~free
    mean_radius = float(TWO_PI / n * np.sum(values)) / TWO_PI  # perimeter / 2pi
    scale = float(np.median(radius[contact])) if np.any(contact) else 0.0
    if scale <= 1e-9 * max(1.0, mean_radius):
        scale = mean_radius  # polygonal containers have zero contact curvature
    threshold = thresholds.curvature_rel * scale

    near_zero = free & (radius <= threshold)
    n_free = int(np.sum(free))
    fraction = float(np.sum(near_zero)) / n_free if n_free else 1.0

    # count maximal circular runs of near-zero nodes
    if not np.any(near_zero):
        segments = 0
    elif np.all(near_zero):
        segments = 1
    else:
        starts = near_zero & ~np.roll(near_zero, 1)
        segments = int(np.sum(starts))
    return PolygonalityReport(
        n_nodes=n,
        n_free=n_free,
        n_contact=int(np.sum(contact)),
        near_zero_fraction=fraction,
        segment_count=segments,
        curvature_scale=scale,
        threshold=threshold,
        free_radii=radius[free],
    )


GALLERY_COLUMNS = ["p", "alpha", "energy", "sigma_normalized", "area", "status"]


def shape_gallery(cfg):
    """Solve every (p, alpha) cell of the grid; one SVG per cell."""
    rows = []
    for i, p in enumerate(cfg.ps):
        for j, alpha in enumerate(cfg.alphas):
            idx = i * len(cfg.alphas) + j
            prob = NodalProblem(cfg.container, n=cfg.n, p=p, alpha=alpha)
            try:
                if math.isinf(p):
                    res = solve_minimax(
                        prob, seeds=cfg.seeds, base_seed=cfg.cell_seed(idx),
                        params=cfg.params, threads=cfg.threads,
                    )
                else:
                    res = solve_nodal(
                        prob, seeds=cfg.seeds, base_seed=cfg.cell_seed(idx),
                        params=cfg.params, threads=cfg.threads,
                    )
                rows.append(
                    {
                        "p": p,
                        "alpha": alpha,
                        "energy": res.energy,
                        "sigma_normalized": res.sigma_normalized,
                        "area": res.area,
                        "status": res.status,
                    }
                )
                _maybe_svg(cfg, res.samples, f"gallery_{cfg.container_name}_p{p:g}_a{alpha:g}.svg")
            except InfeasibleError as exc:
                rows.append(
                    {
                        "p": p,
                        "alpha": alpha,
                        "energy": float("nan"),
                        "sigma_normalized": float("nan"),
                        "area": float("nan"),
                        "status": f"infeasible({exc})",
                    }
                )
    if cfg.output_dir is not None:
        exports.export_study_csv(GALLERY_COLUMNS, rows, cfg.out_path(f"gallery_{cfg.container_name}.csv"))
    return rows
