import functools
import time
from typing import List

import click
from pydantic import ValidationError

from .constructions import CONSTRUCTIONS, get_construction
from .constructions.base_construction import certificate_list
from .errors import (
    BudgetExhaustedError,
    ConstructionError,
    GuardError,
    InputFormatError,
    InvalidInstanceError,
    InvalidParameterError,
    InvalidWitnessError,
)
from .instances import Family, GeneratorSpec, generate, power_family_lower_bound
from .reports import DEFAULT_FAMILIES, RunReport, input_digest, run_sweep, sweep_bound_ratios, write_csv
from .solver import BasisInstance, default_ground_set, min_basis
from .sumsets import failing_elements, is_k_basis, k_fold_sumset
from .utils.config import get_default_config, get_setting, set_setting
from .utils.io import dumps, load_element_set, load_model, to_jsonable, write_json
from .utils.log import configure_logging, get_logger
from .vector_model import VectorFamily, check_parity_counterexample, check_vector_cover, probe_pair_cover
from .version import __version__


logger = get_logger(__name__)

EXIT_OK = 0
EXIT_FALSE = 1
EXIT_INPUT = 2
EXIT_GUARD = 3
EXIT_BUDGET = 4


def handle_errors(func):
    """Map library errors to the documented exit codes."""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        ctx = click.get_current_context()
        try:
            return func(*args, **kwargs)
        except (FileNotFoundError, InputFormatError, InvalidParameterError,
                InvalidInstanceError, InvalidWitnessError, ValidationError) as e:
            click.echo(f"Input error: {e}", err=True)
            ctx.exit(EXIT_INPUT)
        except GuardError as e:
            click.echo(f"Refused: {e}", err=True)
            ctx.exit(EXIT_GUARD)
        except ConstructionError as e:
            logger.warning("Construction failed", error=str(e))
            click.echo(f"Construction failed: {e}", err=True)
            ctx.exit(EXIT_FALSE)

    return wrapper


def parse_int_list(value: str) -> List[int]:
    """Parse "4,8,16" or "2..5" (inclusive) into a list of integers."""
    value = value.strip()
    if not value:
        return []
    try:
        if ".." in value:
            low, high = value.split("..", 1)
            return list(range(int(low), int(high) + 1))
        return [int(v) for v in value.split(",") if v.strip()]
    except ValueError:
        raise InvalidParameterError(f"Not an integer list or range: {value!r}")


def emit(ctx, command: dict, inputs, results, timings=None, bound_ratios=None) -> RunReport:
    """Print the run report to stdout and write it to --json-out when given."""
    report = RunReport(
        command=command,
        input_digest=input_digest(inputs),
        results=to_jsonable(results),
        timings=timings or {},
        bound_ratios=bound_ratios or {},
    )
    click.echo(dumps(report))
    json_out = ctx.obj.get("json_out")
    if json_out:
        write_json(report, json_out)
    return report


@click.group()
@click.version_option(version=__version__)
@click.option(
    "--config-file",
    type=click.Path(exists=False),
    help="Path to a custom configuration file",
    envvar="ADDITIVE_BASES_CONFIG_FILE"
)
@click.option("--threads", type=int, default=1, show_default=True, help="Worker threads")
@click.option("--seed", type=int, default=0, show_default=True, help="Base random seed")
@click.option("--json-out", type=click.Path(dir_okay=False), help="Also write the JSON report here")
@click.option("--csv-out", type=click.Path(dir_okay=False), help="Write sweep rows as CSV here")
@click.option(
    "--log-level",
    type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"], case_sensitive=False),
    default="WARNING",
    show_default=True,
)
@click.option("--progress/--no-progress", default=False, help="Show a progress bar on stderr")
@click.pass_context
def cli(ctx, config_file, threads, seed, json_out, csv_out, log_level, progress):
    """Exact constructions and checks for additive k-bases."""
    configure_logging(log_level)
    ctx.ensure_object(dict)
    ctx.obj.update(
        config_file=config_file,
        threads=threads,
        seed=seed,
        json_out=json_out,
        csv_out=csv_out,
        progress=progress,
    )


@cli.command()
@click.argument("section", type=click.Choice(sorted(get_default_config())))
@click.argument("key", type=str)
@click.argument("value", type=str)
@click.pass_context
@handle_errors
def config(ctx, section, key, value):
    """Store a setting in the configuration file."""
    default = get_default_config()[section].get(key)
    if default is None:
        raise GuardError(f"Unknown setting {section}.{key}")
    try:
        typed = type(default)(value)
    except ValueError:
        raise GuardError(f"Setting {section}.{key} expects {type(default).__name__}, got {value!r}")
    set_setting(section, key, typed, ctx.obj.get("config_file"))
    click.echo(f"Setting {section}.{key} has been set successfully.")


@cli.command()
@click.option("--input", "input_path", required=True, type=click.Path(dir_okay=False))
@click.option("--window-multiplier", type=int, default=None, help="Window radius as a multiple of max|A|")
@click.option("--node-budget", type=int, default=None, help="Search node limit")
@click.pass_context
@handle_errors
def solve(ctx, input_path, window_multiplier, node_budget):
    """Compute a minimum k-basis of an instance over its ground set."""
    config_file = ctx.obj.get("config_file")
    if window_multiplier is None:
        window_multiplier = get_setting("solver", "window_multiplier", config_file)
    if node_budget is None:
        node_budget = get_setting("solver", "node_budget", config_file)

    started = time.perf_counter()
    instance = load_model(input_path, BasisInstance)
    ground = default_ground_set(instance, window_multiplier)
    loaded = time.perf_counter()

    command = {"name": "solve", "window_multiplier": window_multiplier, "node_budget": node_budget}
    inputs = instance.model_dump(mode="json")
    try:
        result = min_basis(instance, ground, budget=node_budget, threads=ctx.obj["threads"])
    except BudgetExhaustedError as e:
        emit(ctx, command, inputs, {
            "status": "budget-exhausted",
            "best_size": e.best_size,
            "best_basis": [str(b) for b in (e.best_witness or ())],
            "nodes": e.nodes,
        })
        ctx.exit(EXIT_BUDGET)
    finished = time.perf_counter()

    emit(ctx, command, inputs, result, timings={"load": loaded - started, "search": finished - loaded})


def _construct_ratios(name: str, size: int, bound: float, diagnostics: dict) -> dict:
    ratios = {name: size / bound} if bound > 0 else {}
    if diagnostics.get("max_stage_ratio") is not None:
        ratios["max_stage"] = diagnostics["max_stage_ratio"]
    return ratios


@cli.command()
@click.argument("name", type=click.Choice(list(CONSTRUCTIONS)))
@click.option("--input", "input_path", required=True, type=click.Path(dir_okay=False))
@click.option("--k", "k", type=int, default=2, show_default=True)
@click.option("--targets", "targets_path", type=click.Path(dir_okay=False),
              help="Targets to cover (natural construction); default kB ∩ N")
@click.option("--emit-certificates/--no-emit-certificates", default=False)
@click.pass_context
@handle_errors
def construct(ctx, name, input_path, k, targets_path, emit_certificates):
    """Build a basis with one of the constructions and verify its coverage."""
    construction = get_construction(name)
    basis = load_element_set(input_path)
    targets = load_element_set(targets_path, key="A") if targets_path else None

    started = time.perf_counter()
    if targets is None:
        targets = construction.targets(basis, k)
    output = construction.build(basis, k, targets)
    built = time.perf_counter()
    covered, certificates = construction.certify(basis, k, output=output, targets=targets)
    verified = time.perf_counter()

    n = construction.size_parameter(basis)
    bound = construction.bound(n, k)
    results = {
        "construction": name,
        "k": k,
        "n": n,
        "basis": output,
        "size": len(output),
        "bound": bound,
        "covered": covered,
        "failing": failing_elements(certificates),
    }
    lower = construction.lower_bound(n, k)
    if lower is not None:
        results["lower_bound"] = lower
    diagnostics = construction.diagnostics(basis, k)
    results.update(diagnostics)
    if emit_certificates:
        results["certificates"] = certificate_list(certificates)

    emit(
        ctx,
        {"name": f"construct {name}", "k": k},
        {"basis": basis, "targets": targets},
        results,
        timings={"build": built - started, "verify": verified - built},
        bound_ratios=_construct_ratios(name, len(output), bound, diagnostics),
    )
    ctx.exit(EXIT_OK if covered else EXIT_FALSE)


@cli.command()
@click.option("--basis", "basis_path", required=True, type=click.Path(dir_okay=False))
@click.option("--targets", "targets_path", required=True, type=click.Path(dir_okay=False))
@click.option("--k", "k", type=int, default=2, show_default=True)
@click.pass_context
@handle_errors
def verify(ctx, basis_path, targets_path, k):
    """Check that every target is a sum of k basis elements."""
    basis = load_element_set(basis_path, key="basis")
    targets = load_element_set(targets_path, key="A")

    started = time.perf_counter()
    covered, certificates = is_k_basis(basis, targets, k)
    finished = time.perf_counter()

    emit(
        ctx,
        {"name": "verify", "k": k},
        {"basis": basis, "targets": targets},
        {
            "covered": covered,
            "failing": failing_elements(certificates),
            "certificates": certificate_list(certificates),
        },
        timings={"verify": finished - started},
    )
    ctx.exit(EXIT_OK if covered else EXIT_FALSE)


@cli.group()
def gen():
    """Generate instances."""


def _emit_instance(ctx, spec: GeneratorSpec, document: dict) -> None:
    document = {"k": spec.k, **document, "generator": spec.model_dump(mode="json")}
    click.echo(dumps(document))
    json_out = ctx.obj.get("json_out")
    if json_out:
        write_json(document, json_out)


@gen.command("power-family")
@click.option("--n", "n", type=int, required=True)
@click.option("--base", type=int, default=None, help="Growth factor (default from config)")
@click.pass_context
@handle_errors
def gen_power_family_command(ctx, n, base):
    """Signed powers C and A = (C + C) ∩ N."""
    if base is None:
        base = get_setting("generators", "power_base", ctx.obj.get("config_file"))
    spec = GeneratorSpec(family=Family.POWER_FAMILY, n=n, parameters={"base": base})
    C = generate(spec)
    _emit_instance(ctx, spec, {"domain": "N", "A": k_fold_sumset(C, 2).naturals(), "basis": C,
                               "lower_bound": power_family_lower_bound(n)})


@gen.command("random-basis")
@click.option("--n", "n", type=int, required=True)
@click.option("--denom", type=int, required=True, help="Denominator bound")
@click.option("--mag", type=int, required=True, help="Magnitude bound")
@click.option("--k", "k", type=int, default=2, show_default=True)
@click.option("--seed", type=int, default=None, help="Overrides the global seed")
@click.pass_context
@handle_errors
def gen_random_basis_command(ctx, n, denom, mag, k, seed):
    """n distinct rationals from a bounded grid."""
    spec = GeneratorSpec(
        family=Family.RANDOM_RATIONAL_BASIS, n=n, k=k, seed=ctx.obj["seed"] if seed is None else seed,
        parameters={"denominator_bound": denom, "magnitude_bound": mag},
    )
    _emit_instance(ctx, spec, {"basis": generate(spec)})


@gen.command("random-signed")
@click.option("--n", "n", type=int, required=True)
@click.option("--mag", type=int, required=True, help="Magnitude bound, at least n")
@click.option("--seed", type=int, default=None, help="Overrides the global seed")
@click.pass_context
@handle_errors
def gen_random_signed_command(ctx, n, mag, seed):
    """n distinct integer magnitudes with random signs."""
    spec = GeneratorSpec(
        family=Family.RANDOM_SIGNED_INTEGER, n=n, seed=ctx.obj["seed"] if seed is None else seed,
        parameters={"magnitude_bound": mag},
    )
    _emit_instance(ctx, spec, {"basis": generate(spec)})


@cli.group()
def probe():
    """Vector-model checks and searches."""


@probe.command("vector-cover")
@click.option("--input", "input_path", required=True, type=click.Path(dir_okay=False))
@click.pass_context
@handle_errors
def probe_vector_cover(ctx, input_path):
    """Check the covering condition for a family B_0, ..., B_{k-1}."""
    family = load_model(input_path, VectorFamily)
    covered, witnesses = check_vector_cover(family)
    emit(
        ctx,
        {"name": "probe vector-cover"},
        family.model_dump(mode="json"),
        {
            "covered": covered,
            "witnesses": [
                {"target": target, "witness": witness}
                for target, witness in witnesses.items()
            ],
        },
    )
    ctx.exit(EXIT_OK if covered else EXIT_FALSE)


@probe.command("pair-cover")
@click.option("--n", "n", type=int, required=True)
@click.option("--sizes", required=True, help="Sizes s0,s1")
@click.option("--coord-bound", type=int, default=None)
@click.option("--denom-bound", type=int, default=None)
@click.option("--budget", type=int, default=None)
@click.pass_context
@handle_errors
def probe_pair_cover_command(ctx, n, sizes, coord_bound, denom_bound, budget):
    """Search a rational grid for B0 + B1 covering every e_i + e_j."""
    config_file = ctx.obj.get("config_file")
    if coord_bound is None:
        coord_bound = get_setting("probe", "coord_bound", config_file)
    if denom_bound is None:
        denom_bound = get_setting("probe", "denom_bound", config_file)
    if budget is None:
        budget = get_setting("probe", "budget", config_file)
    parsed = parse_int_list(sizes)
    if len(parsed) != 2:
        raise InvalidParameterError(f"--sizes needs two integers, got {sizes!r}")

    started = time.perf_counter()
    report = probe_pair_cover(n, (parsed[0], parsed[1]), coord_bound, denom_bound, budget, ctx.obj["seed"])
    finished = time.perf_counter()
    emit(
        ctx,
        {"name": "probe pair-cover", "n": n, "sizes": parsed, "coord_bound": coord_bound,
         "denom_bound": denom_bound, "budget": budget, "seed": ctx.obj["seed"]},
        {},
        report,
        timings={"search": finished - started},
    )


@probe.command("parity")
@click.pass_context
@handle_errors
def probe_parity(ctx):
    """Check that three parity systems cover Z^2 jointly but not singly."""
    holds = check_parity_counterexample()
    emit(ctx, {"name": "probe parity"}, {}, {"holds": holds})
    ctx.exit(EXIT_OK if holds else EXIT_FALSE)


@cli.command()
@click.option("--construction", "construction_name", required=True, type=click.Choice(list(CONSTRUCTIONS)))
@click.option("--n", "n_range", required=True, help='Sizes, e.g. "4,8,16" or "2..4"')
@click.option("--k", "k_range", default="2", show_default=True, help='Orders, e.g. "2,3"')
@click.option("--family", type=click.Choice(["power-family", "random-basis", "random-signed", "normalized"]),
              default=None, help="Input family (default depends on the construction)")
@click.pass_context
@handle_errors
def sweep(ctx, construction_name, n_range, k_range, family):
    """Run a construction over a grid of sizes and orders."""
    max_cells = get_setting("sweep", "max_cells", ctx.obj.get("config_file"))
    n_values = parse_int_list(n_range)
    k_values = parse_int_list(k_range)
    family = family or DEFAULT_FAMILIES[construction_name]

    started = time.perf_counter()
    frame, results = run_sweep(
        construction_name, n_values, k_values,
        seed=ctx.obj["seed"], family=family, threads=ctx.obj["threads"],
        max_cells=max_cells, progress=ctx.obj["progress"],
    )
    finished = time.perf_counter()

    csv_out = ctx.obj.get("csv_out")
    if csv_out:
        write_csv(frame, csv_out)

    emit(
        ctx,
        {"name": "sweep", "construction": construction_name, "family": family,
         "n": n_values, "k": k_values, "seed": ctx.obj["seed"]},
        {"construction": construction_name, "family": family, "n": n_values, "k": k_values,
         "seed": ctx.obj["seed"]},
        results,
        timings={"sweep": finished - started},
        bound_ratios=sweep_bound_ratios(results),
    )
    ctx.exit(EXIT_OK if all(row["covered"] for row in results) else EXIT_FALSE)


def main():
    """Entry point for the application."""
    cli()


if __name__ == "__main__":
    main()
