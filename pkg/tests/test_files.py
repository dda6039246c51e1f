import io

import numpy as np
from pytest import fixture, mark, raises

from mlpr.bench import InstanceRecord, Method, random_tensor
from mlpr.files import (
    FormatError,
    number,
    read_tensor,
    read_tensor_dir,
    read_vector,
    write_curve,
    write_instances,
    write_summary,
    write_tensor,
)
from mlpr.solvers import SolveStatus
from mlpr.tensor import CurvePoint, InvalidTensorError

# alias
parametrize = mark.parametrize


@fixture
def tensor_file(tmp_path):
    path = tmp_path / "tensor.txt"
    path.write_text(
        "# two states, order two\n"
        "2 2\n"
        "\n"
        "1 0.5 0.25 0\n"
        "0 0.5 0.75 1\n"
    )
    return path


def test_read_tensor(tensor_file):
    tensor = read_tensor(tensor_file)

    assert tensor.n == 2
    assert tensor.m == 2
    assert np.array_equal(tensor.r, [[1.0, 0.5, 0.25, 0.0], [0.0, 0.5, 0.75, 1.0]])


def test_write_tensor_reads_back(tmp_path):
    tensor = random_tensor(3, 3, 8)
    path = tmp_path / "random.txt"

    write_tensor(path, tensor)

    assert path.read_text().startswith("3 3\n")
    assert np.array_equal(read_tensor(path).r, tensor.r)


@parametrize(
    ("content", "line"),
    (
        ("", 0),
        ("# only a comment\n", 0),
        ("2\n1 0 0 1\n0 1 1 0\n", 1),
        ("2 1\n1 0\n0 1\n", 1),
        ("2 2\n1 0 0 1\n", 0),
        ("2 2\n1 0 0\n0 1 1 0\n", 2),
        ("2 2\n1 0 0 one\n0 1 1 0\n", 2),
    ),
    ids=(
        "empty",
        "comments only",
        "short header",
        "order 1",
        "missing row",
        "short row",
        "not a number",
    ),
)
def test_read_tensor_malformed(tmp_path, content, line):
    path = tmp_path / "bad.txt"
    path.write_text(content)

    with raises(FormatError) as info:
        read_tensor(path)

    assert info.value.line == line
    assert str(path) in str(info.value)


def test_read_tensor_not_stochastic(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("2 2\n1 1 1 1\n1 0 0 0\n")

    with raises(InvalidTensorError):
        read_tensor(path)


def test_read_tensor_dir(tmp_path):
    write_tensor(tmp_path / "b.txt", random_tensor(2, 2, 1))
    write_tensor(tmp_path / "a.txt", random_tensor(3, 2, 2))
    (tmp_path / "notes.md").write_text("not a tensor")

    tensors = read_tensor_dir(tmp_path)

    assert [name for name, _ in tensors] == ["a", "b"]
    assert [tensor.n for _, tensor in tensors] == [3, 2]


def test_read_tensor_dir_empty(tmp_path):
    with raises(FormatError):
        read_tensor_dir(tmp_path)


def test_read_vector(tmp_path):
    path = tmp_path / "v.txt"
    path.write_text("0.25 0.25\n0.5\n")

    assert np.array_equal(read_vector(path, 3), [0.25, 0.25, 0.5])

    with raises(FormatError):
        read_vector(path, 2)


@parametrize(
    ("value", "expected"),
    (
        (1.0, "1"),
        (0.1, "0.10000000000000001"),
        (1e-20, "9.9999999999999995e-21"),
    ),
)
def test_number(value, expected):
    assert number(value) == expected
    assert float(number(value)) == value


def test_write_curve():
    stream = io.StringIO()
    points = [
        CurvePoint(np.array([0.5, 0.5]), 0.25, 0.0),
        CurvePoint(np.array([0.75, 0.25]), 0.5, 1e-9, tau=0.125),
    ]

    write_curve(stream, points)

    assert stream.getvalue().splitlines() == [
        "alpha,x1,x2,residual,tau",
        "0.25,0.5,0.5,0,0",
        "0.5,0.75,0.25,1.0000000000000001e-09,0.125",
    ]


def test_write_instances():
    record = InstanceRecord(
        id="007",
        method=Method.PCN,
        alpha=0.5,
        status=SolveStatus.MAX_ITERATIONS,
        iterations=10000,
        residual=0.25,
        time_s=1.5,
    )

    timed = io.StringIO()
    write_instances(timed, [record])

    assert timed.getvalue().splitlines() == [
        "id,method,alpha,status,iterations,residual,time_s",
        "007,pcn,0.5,max-iterations,10000,0.25,1.5",
    ]

    untimed = io.StringIO()
    write_instances(untimed, [record], timing=False)

    assert untimed.getvalue().splitlines()[1] == "007,pcn,0.5,max-iterations,10000,0.25"


def test_write_summary():
    stream = io.StringIO()

    write_summary(stream, [(0.5, {Method.N: 3, Method.PCN: 0})])

    assert stream.getvalue().splitlines() == ["alpha,n,pcn", "0.5,3,0"]
