import math

import numpy as np
from pytest import mark, raises

from mlpr.bench import instance_seed, random_tensor
from mlpr.continuation import pc_newton
from mlpr.solvers import (
    SolverOptions,
    SolveStatus,
    c_alpha,
    fixed_point,
    g_minimum,
    g_poly,
    minimal_solution,
    newton_baseline,
    newton_fixed_alpha,
)
from mlpr.tensor import Problem, StochasticTensor, residual_h

# alias
parametrize = mark.parametrize


def absorbing_problem(alpha: float, n: int = 3, m: int = 2) -> Problem:
    r = np.zeros((n, n**m))
    r[0] = 1.0
    return Problem.uniform(StochasticTensor(r, m), alpha)


##
#
# SCALAR ANALYSIS
#


@parametrize(
    ("alpha", "expected"),
    (
        (0.9, 1 / 9),
        (0.6, 2 / 3),
        (0.3, 7 / 3),
        (0.1, 9.0),
    ),
    ids=("0.9", "0.6", "0.3", "0.1"),
)
def test_c_alpha_order_2(alpha, expected):
    # g(z) = (z - 1)(α z - (1 - α))
    assert math.isclose(c_alpha(alpha, 2), expected, rel_tol=1e-12)


@parametrize(
    "alpha",
    (0.9, 0.5, 0.2),
)
def test_c_alpha_order_3(alpha):
    # g(z) = (z - 1)(α z² + α z - (1 - α))
    expected = (-alpha + math.sqrt(alpha**2 + 4 * alpha * (1 - alpha))) / (2 * alpha)

    assert math.isclose(c_alpha(alpha, 3), expected, rel_tol=1e-12)


@parametrize(
    ("alpha", "m"),
    (
        (0.95, 2),
        (0.99, 4),
        (0.05, 3),
        (0.26, 4),
    ),
)
def test_c_alpha_is_root(alpha, m):
    c = c_alpha(alpha, m)

    assert c > 0.0
    assert abs(g_poly(c, alpha, m)) < 1e-12

    # on the other side of the minimizer than 1
    assert (c < g_minimum(alpha, m)) == (alpha * m > 1.0)


@parametrize(
    "m",
    (2, 3, 4),
)
def test_c_alpha_double_root(m):
    assert c_alpha(1 / m, m) == 1.0


@parametrize(
    ("alpha", "m"),
    (
        (0.0, 2),
        (1.0, 2),
        (0.5, 1),
    ),
    ids=("alpha 0", "alpha 1", "order 1"),
)
def test_c_alpha_invalid(alpha, m):
    with raises(ValueError):
        c_alpha(alpha, m)


##
#
# ITERATIONS
#


def test_solver_options():
    with raises(ValueError):
        SolverOptions(tol=0.0)

    with raises(ValueError):
        SolverOptions(maxit=-1)

    options = SolverOptions.from_config({"tol": 1e-6, "maxit": 5, "alpha": 0.9})

    assert options.tol == 1e-6
    assert options.maxit == 5


@parametrize(
    "seed",
    (0, 1, 42),
)
def test_solvers_agree_below_one_over_m(seed):
    problem = Problem.uniform(random_tensor(5, 2, seed), 0.4)

    fp = fixed_point(problem, problem.v)
    n = newton_baseline(problem)

    assert fp.converged
    assert n.converged

    assert np.allclose(fp.x, n.x, atol=1e-7)
    assert np.isclose(n.x.sum(), 1.0)
    assert np.all(n.x >= 0.0)

    # residual is reported in the 1-norm
    assert math.isclose(
        n.residual_norm, np.abs(residual_h(problem, n.x, 0.4)).sum(), rel_tol=1e-9
    )


def test_fixed_point_of_absorbing_tensor():
    problem = absorbing_problem(0.8)

    report = fixed_point(problem, problem.v)

    assert report.status is SolveStatus.CONVERGED
    assert np.allclose(report.x, 0.8 * np.eye(3)[0] + 0.2 * problem.v)


def test_fixed_point_max_iterations():
    problem = Problem.uniform(random_tensor(5, 2, 42), 0.9)

    report = fixed_point(problem, problem.v, SolverOptions(maxit=1))

    assert report.status is SolveStatus.MAX_ITERATIONS
    assert report.iterations == 1
    assert not report.converged


def test_fixed_point_record():
    problem = Problem.uniform(random_tensor(4, 2, 3), 0.3)

    report = fixed_point(problem, problem.v, SolverOptions(record=True))

    assert report.converged
    assert len(report.trace) == report.iterations + 1
    assert report.trace[-1].residual_norm == report.residual_norm
    assert all(point.alpha == 0.3 for point in report.trace)


def test_fixed_point_negative_start():
    problem = absorbing_problem(0.5)

    with raises(ValueError):
        fixed_point(problem, [1.0, -0.5, 0.5])


@parametrize(
    ("alpha", "m"),
    (
        (0.9, 2),
        (0.4, 2),
        (0.5, 3),
        (0.2, 3),
    ),
)
def test_minimal_solution_sum(alpha, m):
    problem = Problem.uniform(random_tensor(4, m, 11), alpha)

    report = minimal_solution(problem)

    assert report.converged
    assert math.isclose(report.x.sum(), min(1.0, c_alpha(alpha, m)), rel_tol=1e-6)


def test_newton_sum_follows_scalar_newton():
    # the entry sum of a Newton iterate is a scalar Newton iterate on g
    problem = absorbing_problem(0.6, n=5)

    plain = newton_baseline(problem, SolverOptions(normalize=False))
    normalized = newton_baseline(problem)

    assert plain.converged
    assert math.isclose(plain.x.sum(), 2 / 3, rel_tol=1e-7)

    assert normalized.converged
    assert math.isclose(normalized.x.sum(), 1.0, rel_tol=1e-7)


def test_newton_singular_at_one_over_m():
    # e^T (α P_x - I) vanishes for α = 1/m and a stochastic x
    problem = Problem.uniform(random_tensor(5, 2, 42), 0.5)

    report = newton_fixed_alpha(problem, problem.v)

    assert report.status is SolveStatus.SINGULAR_JACOBIAN
    assert report.iterations == 0


def test_newton_record():
    problem = absorbing_problem(0.7)

    report = newton_fixed_alpha(problem, problem.v, SolverOptions(record=True))

    assert report.converged
    assert len(report.trace) == report.iterations + 1

    residuals = [point.residual_norm for point in report.trace]
    assert residuals[-1] <= SolverOptions().tol


def test_newton_zero_budget():
    problem = absorbing_problem(0.7)

    report = newton_fixed_alpha(problem, problem.v, SolverOptions(maxit=0))

    assert report.status is SolveStatus.MAX_ITERATIONS
    assert report.iterations == 0


##
#
# SOLUTION STRUCTURE
#


@parametrize(
    "m",
    (2, 3, 4),
)
def test_c_alpha_sign_pattern(m):
    for k in range(1, 100):
        alpha = k / 100
        c = c_alpha(alpha, m)

        if math.isclose(alpha * m, 1.0):
            assert c == 1.0
        elif alpha * m < 1.0:
            assert c > 1.0
        else:
            assert c < 1.0


def test_fixed_point_from_zero_is_nondecreasing():
    for index in range(100):
        problem = Problem.uniform(random_tensor(5, 2, instance_seed(3, index)), 0.99)

        report = fixed_point(problem, np.zeros(5), SolverOptions(record=True))

        assert report.converged

        iterates = np.array([point.x for point in report.trace])
        assert np.all(np.diff(iterates, axis=0) >= 0.0)

        assert math.isclose(report.x.sum(), c_alpha(0.99, 2), abs_tol=1e-6)


@parametrize(
    ("alpha", "m"),
    (
        (0.3, 2),
        (0.3, 3),
        (0.5, 3),
        (0.9, 2),
        (0.9, 3),
        (0.99, 2),
        (0.99, 3),
    ),
)
def test_entry_sum_is_one_or_c_alpha(alpha, m):
    # the entry sum s of a solution is a root of α s^m - s + (1 - α)
    c = c_alpha(alpha, m)
    converged = 0

    for index in range(30):
        problem = Problem.uniform(random_tensor(4, m, instance_seed(m, index)), alpha)

        for options in (SolverOptions(), SolverOptions(normalize=False)):
            report = newton_baseline(problem, options)

            if not report.converged:
                continue

            converged += 1
            total = report.x.sum()

            assert abs(total - 1.0) <= 1e-6 or abs(total - c) <= 1e-6

    assert converged > 0


@parametrize(
    "m",
    (2, 3),
)
def test_solvers_agree_in_uniqueness_regime(m):
    alpha = 1 / m - 0.01

    for index in range(10):
        problem = Problem.uniform(random_tensor(5, m, instance_seed(5, index)), alpha)

        fp = fixed_point(problem, problem.v)
        n = newton_fixed_alpha(problem, problem.v)
        pcn = pc_newton(problem)

        assert fp.converged
        assert n.converged
        assert pcn.converged

        assert np.abs(fp.x - n.x).sum() <= 1e-6
        assert np.abs(n.x - pcn.x).sum() <= 1e-6
        assert np.abs(fp.x - pcn.x).sum() <= 1e-6
