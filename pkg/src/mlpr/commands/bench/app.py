"""
App definition.
"""

from click import UsageError
from rich.console import Console
from rich.progress import Progress
from rich.table import Table

from mlpr.bench import (
    Cost,
    ExperimentResult,
    ExperimentSpec,
    emit_profile,
    failure_table,
    run_experiment,
)
from mlpr.config import Config
from mlpr.continuation import ContinuationConfig
from mlpr.files import FormatError, read_tensor_dir, write_instances, write_summary
from mlpr.solvers import SolverOptions
from mlpr.tensor import InvalidTensorError


def experiment(config: Config) -> ExperimentSpec:
    """
    Build the experiment described by the `bench` section.

    Raises:
        UsageError: if the section or the tensor directory is invalid.
    """
    c = config["bench"]

    tensors = None

    if (directory := c.get("tensors")) is not None:
        try:
            tensors = read_tensor_dir(directory)
        except (OSError, FormatError, InvalidTensorError) as exc:
            raise UsageError(str(exc)) from None

    try:
        return ExperimentSpec(
            methods=c["methods"],
            alphas=c["alphas"],
            ensemble_size=c["ensemble"],
            n=c["n"],
            m=c["m"],
            seed=c["seed"],
            solver=SolverOptions.from_config(c),
            continuation=ContinuationConfig.from_config(c),
            workers=c["workers"],
            tensors=tensors,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def table(result: ExperimentResult, instances: int) -> Table:
    """
    Render the failure counts.
    """
    out = Table(title=f"Failures on {instances} instances")
    out.add_column("alpha", justify="right")

    for method in result.methods:
        out.add_column(str(method).upper(), justify="right")

    for alpha, counts in failure_table(result):
        out.add_row(f"{alpha:g}", *(str(counts[method]) for method in result.methods))

    return out


def write(config: Config, result: ExperimentResult) -> None:
    """
    Write the result files into the output directory.
    """
    out = config["bench.out"]
    out.mkdir(parents=True, exist_ok=True)

    with (out / "instances.csv").open("w", newline="") as file:
        write_instances(file, result.records)

    with (out / "summary.csv").open("w", newline="") as file:
        write_summary(file, failure_table(result))

    cost = Cost(config.get("bench.profile_cost", Cost.ITERATIONS.value))

    for alpha in result.alphas:
        with (out / f"profile_{alpha:g}.csv").open("w", newline="") as file:
            emit_profile([result], file, alpha, cost)


async def main(config: Config) -> int:
    """
    Main app routine.

    Runs the experiment with a progress bar and prints the failure table to stderr.

    Arguments:
        config: configuration parameter mapping.

    Returns:
        0, failures of the solvers are results.
    """
    spec = experiment(config)
    instances = len(spec.tensors) if spec.tensors is not None else spec.ensemble_size

    console = Console(stderr=True)
    total = instances * len(spec.alphas) * len(spec.methods)

    with Progress(console=console, transient=True) as progress:
        task = progress.add_task("solving", total=total)
        result = await run_experiment(spec, lambda: progress.advance(task))

    console.print(table(result, instances))

    if config.get("bench.out") is not None:
        write(config, result)

    return 0
