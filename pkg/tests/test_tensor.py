import numpy as np
from pytest import mark, raises

from mlpr.bench import random_tensor
from mlpr.tensor import (
    CurvePoint,
    DimensionMismatchError,
    InvalidTensorError,
    Problem,
    StochasticTensor,
    apply_tensor,
    is_stochastic,
    jacobian_h,
    jacobian_px,
    kron_power,
    residual_h,
    validate,
)

# alias
parametrize = mark.parametrize


def absorbing_tensor(n: int, m: int) -> StochasticTensor:
    """
    Tensor sending every index tuple to the first state.
    """
    r = np.zeros((n, n**m))
    r[0] = 1.0
    return StochasticTensor(r, m)


def test_kron_power():
    assert np.array_equal(kron_power([1.0, 2.0], 1), [1.0, 2.0])
    assert np.array_equal(kron_power([1.0, 2.0], 2), [1.0, 2.0, 2.0, 4.0])
    assert np.array_equal(kron_power([1.0, 2.0], 3), [1, 2, 2, 4, 2, 4, 4, 8])

    with raises(ValueError):
        kron_power([1.0], 0)


@parametrize(
    ("index", "column"),
    (
        ((0, 0), 0),
        ((0, 1), 1),
        ((1, 0), 3),
        ((2, 1), 7),
    ),
    ids=("first", "last slot fastest", "first slot slowest", "mixed"),
)
def test_column_order(index, column):
    tensor = absorbing_tensor(3, 2)

    assert tensor.column_index(index) == column
    assert tensor.column_tuple(column) == index


def test_apply_tensor_follows_kronecker_order():
    # column (1, 0) sends to state 2, all others to state 0
    r = np.zeros((3, 9))
    r[0] = 1.0
    r[:, 3] = [0.0, 0.0, 1.0]
    tensor = StochasticTensor(r, 2)

    x = np.array([0.5, 0.3, 0.2])
    y = apply_tensor(tensor, x)

    assert np.isclose(y[2], x[1] * x[0])
    assert np.isclose(y.sum(), 1.0)


@parametrize(
    ("n", "m", "seed"),
    (
        (3, 2, 0),
        (4, 3, 1),
        (2, 4, 2),
    ),
    ids=("order 2", "order 3", "order 4"),
)
def test_jacobian_px_matches_finite_differences(n, m, seed):
    tensor = random_tensor(n, m, seed)
    x = np.random.default_rng(seed).uniform(0.1, 1.0, n)

    h = 1e-6
    expected = np.column_stack(
        [
            (apply_tensor(tensor, x + h * e) - apply_tensor(tensor, x - h * e)) / (2 * h)
            for e in np.eye(n)
        ]
    )

    assert np.allclose(jacobian_px(tensor, x), expected, atol=1e-7)


@parametrize(
    "scale",
    (1.0, 0.5, 2.0),
)
def test_jacobian_px_column_sums(scale):
    # e^T P_x = m s^{m-1} e^T
    tensor = random_tensor(4, 3, 5)
    x = scale * np.full(4, 0.25)

    sums = jacobian_px(tensor, x).sum(axis=0)

    assert np.allclose(sums, 3 * scale**2)


def test_jacobian_h():
    tensor = random_tensor(3, 2, 3)
    problem = Problem.uniform(tensor, 0.7)
    x = np.array([0.2, 0.5, 0.3])

    j = jacobian_h(problem, x, 0.4)

    assert j.shape == (3, 4)
    assert np.allclose(j[:, :3], 0.4 * jacobian_px(tensor, x) - np.eye(3))
    assert np.allclose(j[:, 3], apply_tensor(tensor, x) - problem.v)


@parametrize(
    "n",
    range(2, 7),
)
@parametrize(
    "m",
    (2, 3),
)
def test_jacobian_h_matches_finite_differences(n, m):
    rng = np.random.default_rng(100 * n + m)
    h = 1e-6

    for seed in range(10):
        problem = Problem.uniform(random_tensor(n, m, seed), 0.5)
        x = rng.dirichlet(np.ones(n))
        alpha = rng.uniform(0.05, 0.95)

        y = np.append(x, alpha)
        expected = np.column_stack(
            [
                (
                    residual_h(problem, (y + h * e)[:-1], (y + h * e)[-1])
                    - residual_h(problem, (y - h * e)[:-1], (y - h * e)[-1])
                )
                / (2 * h)
                for e in np.eye(n + 1)
            ]
        )

        assert np.allclose(jacobian_h(problem, x, alpha), expected, rtol=0.0, atol=1e-6)

        # e^T P_x = m (e^T x)^{m-1} e^T with e^T x = 1
        sums = jacobian_px(problem.tensor, x).sum(axis=0)
        assert np.allclose(sums, m, rtol=0.0, atol=1e-12)


@parametrize(
    "m",
    (2, 3, 4),
)
def test_jacobian_x_left_null_vector_at_one_over_m(m):
    problem = Problem.uniform(random_tensor(3, m, m), 0.9)
    x = np.random.default_rng(m).dirichlet(np.ones(3))

    # e^T (α P_x - I) = (α m - 1) e^T vanishes for α = 1/m
    j = jacobian_h(problem, x, 1 / m)

    assert np.allclose(np.ones(3) @ j[:, :3], 0.0, atol=1e-12)
    assert np.linalg.matrix_rank(j[:, :3]) < 3
    assert not np.allclose(np.ones(3) @ jacobian_h(problem, x, 0.9)[:, :3], 0.0)


def test_residual_h_of_absorbing_tensor():
    tensor = absorbing_tensor(3, 2)
    problem = Problem.uniform(tensor, 0.6)

    # x = α e_1 + (1-α) v solves the instance
    x = 0.6 * np.eye(3)[0] + 0.4 * problem.v

    assert np.allclose(residual_h(problem, x, 0.6), 0.0)
    assert not np.allclose(residual_h(problem, x, 0.5), 0.0)


def test_random_tensor_is_valid():
    assert validate(random_tensor(5, 2, 0)) == []


def test_validate():
    r = np.full((2, 4), 0.5)
    r[:, 1] = [1.5, -0.5]
    r[:, 2] = [0.5, 0.6]

    violations = validate(StochasticTensor(r, 2))

    kinds = sorted((violation.kind, violation.column) for violation in violations)
    assert kinds == [("column-sum", 2), ("negative", 1)]

    negative = next(v for v in violations if v.kind == "negative")
    assert negative.row == 1
    assert negative.index == (0, 1)


def test_check():
    r = np.full((2, 4), 0.5)
    r[0, 3] = 0.4

    with raises(InvalidTensorError) as info:
        StochasticTensor(r, 2).check()

    assert len(info.value.violations) == 1
    assert "(1, 1)" in str(info.value)


@parametrize(
    ("r", "m"),
    (
        (np.ones((2, 2)), 1),
        (np.ones((2, 5)), 2),
        (np.ones(4), 2),
    ),
    ids=("order 1", "wrong columns", "vector"),
)
def test_tensor_shape(r, m):
    with raises(ValueError):
        StochasticTensor(r, m)


def test_tensor_is_frozen():
    tensor = absorbing_tensor(2, 2)

    with raises(ValueError):
        tensor.r[0, 0] = 2.0


@parametrize(
    ("v", "alpha", "exception"),
    (
        (np.full(3, 0.5), 0.5, ValueError),
        (np.array([1.5, -0.5, 0.0]), 0.5, ValueError),
        (np.full(2, 0.5), 0.5, DimensionMismatchError),
        (np.full(3, 1 / 3), 1.0, ValueError),
        (np.full(3, 1 / 3), -0.1, ValueError),
    ),
    ids=("sum", "negative", "length", "alpha 1", "negative alpha"),
)
def test_problem_invalid(v, alpha, exception):
    with raises(exception):
        Problem(absorbing_tensor(3, 2), v, alpha)


def test_problem():
    problem = Problem.uniform(absorbing_tensor(4, 3), 0.5)

    assert problem.n == 4
    assert problem.m == 3
    assert np.allclose(problem.v, 0.25)

    other = problem.with_alpha(0.9)

    assert other.alpha == 0.9
    assert other.tensor is problem.tensor


def test_is_stochastic():
    assert is_stochastic([0.5, 0.5])
    assert not is_stochastic([0.5, 0.6])
    assert not is_stochastic([1.5, -0.5])


def test_curve_point():
    problem = Problem.uniform(absorbing_tensor(2, 2), 0.5)

    point = CurvePoint.from_array(problem, [0.5, 0.5, 0.0], tau=0.1)

    assert point.alpha == 0.0
    assert point.tau == 0.1
    assert point.residual_norm == 0.0
    assert np.array_equal(point.as_array(), [0.5, 0.5, 0.0])

    with raises(DimensionMismatchError):
        CurvePoint.from_array(problem, [0.5, 0.5])
