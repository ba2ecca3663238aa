"""Fourier discretization: constraint assembly, area form, objective, solves."""

import numpy as np
import pytest

from convexfit.fourier import (
    FourierProblem,
    FourierShape,
    assemble_linear_constraints,
    fourier_area,
    fourier_objective,
    fourier_to_nodal,
    solve_fourier,
    truncate_container,
)
from convexfit.geometry import Disk, GeometryError, named_container, support_eval

DISK = Disk((0.0, 0.0), 1.0)
SQUARE = named_container("square")


def shape(a, b=None):
    a = np.atleast_1d(np.asarray(a, dtype=float))
    if b is None:
        b = np.zeros(a.size - 1)
    return FourierShape(a, np.asarray(b, dtype=float))


class TestConstraints:
    def test_order_one_curvature_rows_keep_only_a0(self):
        prob = FourierProblem(DISK, n_f=1, m=3, q=8, p=2.0, alpha=0.5)
        (_, _), (cvx, rhs) = assemble_linear_constraints(prob)
        # the degree-1 factor (1 - 1^2) wipes the trigonometric columns
        np.testing.assert_allclose(cvx[:, 1:], 0.0, atol=1e-15)
        np.testing.assert_allclose(cvx[:, 0], 1.0)
        np.testing.assert_allclose(rhs, 0.0)

    def test_disk_inclusion_rhs(self):
        prob = FourierProblem(DISK, n_f=4, m=16, q=64, p=2.0, alpha=0.5)
        (inc, rhs), _ = assemble_linear_constraints(prob)
        np.testing.assert_allclose(rhs, 1.0)
        assert inc.shape == (16, 9)

    def test_square_axis_rhs(self):
        prob = FourierProblem(SQUARE, n_f=2, m=4, q=32, p=2.0, alpha=0.5)
        (_, rhs), _ = assemble_linear_constraints(prob)
        np.testing.assert_allclose(rhs, 1.0)  # constraint angles are the edge normals


class TestArea:
    def test_unit_disk(self):
        assert fourier_area(shape([1.0]))[0] == pytest.approx(np.pi)

    def test_translation_coefficient_is_area_free(self):
        assert fourier_area(shape([1.0, 0.2]))[0] == pytest.approx(np.pi)

    def test_second_harmonic(self):
        value = fourier_area(shape([1.0, 0.0, 0.1]))[0]
        assert value == pytest.approx(np.pi - 1.5 * np.pi * 0.01)

    def test_gradient_matches_finite_differences_exactly(self):
        rng = np.random.default_rng(3)
        x = rng.normal(size=11) * 0.3
        _, grad = fourier_area(x)
        step = 1e-4  # exact for a quadratic; larger step shrinks cancellation noise
        for i in range(x.size):
            e = np.zeros_like(x)
            e[i] = step
            fd = (fourier_area(x + e)[0] - fourier_area(x - e)[0]) / (2 * step)
            assert abs(fd - grad[i]) <= 1e-9 * max(1.0, abs(grad[i]))


class TestObjective:
    def test_zero_gap(self):
        prob = FourierProblem(DISK, n_f=4, m=16, q=64, p=2.0, alpha=1.0)
        trunc = truncate_container(DISK, 4)
        value, _ = fourier_objective(trunc, prob)
        assert value == pytest.approx(0.0, abs=1e-20)

    def test_constant_gap_p2(self):
        prob = FourierProblem(DISK, n_f=4, m=16, q=256, p=2.0, alpha=0.25)
        value, _ = fourier_objective(shape([0.5, 0, 0, 0, 0]), prob)
        assert value == pytest.approx(np.pi / 2)
        assert value ** 0.5 == pytest.approx(np.sqrt(np.pi / 2))

    def test_constant_gap_p1_is_perimeter_difference(self):
        prob = FourierProblem(DISK, n_f=4, m=16, q=256, p=1.0, alpha=0.25)
        value, _ = fourier_objective(shape([0.5, 0, 0, 0, 0]), prob)
        assert value == pytest.approx(np.pi)  # P(disk 1) - P(disk 0.5)

    def test_rejects_p_below_one(self):
        with pytest.raises(GeometryError):
            FourierProblem(DISK, n_f=4, m=16, q=64, p=0.5, alpha=0.25)

    @pytest.mark.parametrize("p", [1.0, 2.0, 4.0, 10.0])
    def test_gradient_check(self, p):
        prob = FourierProblem(SQUARE, n_f=6, m=24, q=128, p=p, alpha=0.5)
        rng = np.random.default_rng(11)
        # strictly interior shape: gaps bounded away from the p=1 kink
        x = truncate_container(SQUARE, 6).to_vector() * 0.6
        x[1:] += 0.01 * rng.normal(size=x.size - 1)
        value, grad = fourier_objective(x, prob)
        assert value > 0
        step = 1e-6 * max(1.0, np.max(np.abs(x)))
        scale = max(1.0, float(np.max(np.abs(grad))))
        for i in range(x.size):
            e = np.zeros_like(x)
            e[i] = step
            fd = (fourier_objective(x + e, prob)[0] - fourier_objective(x - e, prob)[0]) / (2 * step)
            assert abs(fd - grad[i]) <= 1e-5 * scale

    def test_joint_translation_leaves_energy_unchanged(self):
        # moving container and shape by the same vector only shifts the
        # degree-1 coefficients of both support functions
        v = np.array([0.21, -0.34])
        prob0 = FourierProblem(DISK, n_f=4, m=16, q=256, p=2.0, alpha=0.25)
        prob1 = FourierProblem(
            type(DISK)((v[0], v[1]), 1.0), n_f=4, m=16, q=256, p=2.0, alpha=0.25
        )
        x = np.array([0.5, 0.05, 0.0, 0.0, 0.0, -0.03, 0.0, 0.0, 0.0])
        x_shift = x.copy()
        x_shift[1] += v[0]
        x_shift[5] += v[1]
        v0 = fourier_objective(x, prob0)[0]
        v1 = fourier_objective(x_shift, prob1)[0]
        assert abs(v0 - v1) <= 1e-12


class TestToNodal:
    def test_constant(self):
        np.testing.assert_allclose(fourier_to_nodal(shape([1.0]), 16).values, 1.0)

    def test_first_harmonic(self):
        samples = fourier_to_nodal(shape([1.0, 0.3]), 32)
        theta = samples.angles
        np.testing.assert_allclose(samples.values, 1.0 + 0.3 * np.cos(theta), atol=1e-15)

    def test_square_truncation_close_to_exact(self):
        trunc = truncate_container(SQUARE, 48)
        samples = fourier_to_nodal(trunc, 256)
        exact = support_eval(SQUARE, samples.angles)
        # measured truncation error of the square support at order 48
        assert np.max(np.abs(samples.values - exact)) <= 2e-2


class TestSolve:
    def test_alpha_one_disk_recovers_container(self):
        prob = FourierProblem(DISK, n_f=6, m=32, q=128, p=2.0, alpha=1.0)
        res = solve_fourier(prob, seeds=1, base_seed=0)
        assert res.energy == pytest.approx(0.0, abs=1e-8)
        assert res.fourier_coefficients[0][0] == pytest.approx(1.0, abs=1e-8)

    def test_alpha_zero_degenerates_to_point(self):
        prob = FourierProblem(DISK, n_f=4, m=16, q=64, p=2.0, alpha=0.0)
        res = solve_fourier(prob, seeds=1, base_seed=0)
        assert abs(res.area) <= 1e-8

    def test_large_p_surrogate_close_to_hausdorff_optimum(self):
        prob = FourierProblem(DISK, n_f=24, m=240, q=384, p=64.0, alpha=0.25)
        res = solve_fourier(prob, seeds=2, base_seed=0)
        assert abs(res.energy - 0.5) <= 0.05

    def test_rooted_objective_same_argmin(self):
        prob = FourierProblem(DISK, n_f=8, m=48, q=128, p=2.0, alpha=0.4)
        plain = solve_fourier(prob, seeds=2, base_seed=5)
        rooted = solve_fourier(prob, seeds=2, base_seed=5, use_root=True)
        assert abs(plain.energy - rooted.energy) <= 1e-6

    def test_solve_records_samples_and_coefficients(self):
        prob = FourierProblem(DISK, n_f=6, m=32, q=128, p=2.0, alpha=0.5)
        res = solve_fourier(prob, seeds=1, base_seed=0, n_samples=96)
        assert res.samples.n == 96
        a, b = res.fourier_coefficients
        assert a.size == 7 and b.size == 6
