"""Scenario CLI: drive the full allocation pipeline from files on disk.

Exit codes: 0 when the plan is optimal or heuristic, 2 when it is
infeasible, 1 on any error (missing files, parse errors, geocoding
failures, solver misuse).
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .allocator import InstanceTooLarge, brute_force_oracle, check_plan_invariants
from .kb import validate_consistency
from .kb.entities import store_from_entities
from .pipeline import PipelineError, SolveOptions, canonical_json
from .report import FORMATS, render_report
from .routing.times import FALLBACK_POLICIES
from .scenario import MissingFileError, load_scenario, run_scenario
from .service.config import ServiceConfig

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INFEASIBLE = 2


def _fail(message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(EXIT_ERROR)


@click.group()
def main():
    """Evacuation resource-allocation toolkit."""


@main.command()
@click.argument("scenario_dir", type=click.Path(exists=True, file_okay=False))
@click.option("--solver", type=click.Choice(["auto", "exact", "greedy"]), default=None,
              help="Override the request file's solver choice.")
@click.option("--fallback", type=click.Choice(list(FALLBACK_POLICIES)), default=None,
              help="Override the unreachable-pair policy.")
@click.option("--format", "fmt", type=click.Choice(list(FORMATS)), default="text")
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="Write the report to a file.")
@click.option("--oracle", is_flag=True, help="Cross-check the plan against the brute-force oracle.")
@click.option("--check-expected", is_flag=True, help="Compare against the bundle's golden plan document.")
def run(scenario_dir, solver, fallback, fmt, out, oracle, check_expected):
    """Run a scenario bundle and render the allocation report."""
    try:
        bundle = load_scenario(scenario_dir)
        options = bundle.options
        if solver or fallback:
            options = SolveOptions(
                solver=solver or options.solver,
                fallback=fallback or options.fallback,
                exact_cap=options.exact_cap,
            )
        result = run_scenario(bundle, options)
    except (MissingFileError, PipelineError, InstanceTooLarge, ValueError, OSError) as exc:
        _fail(str(exc))

    problems = check_plan_invariants(result.instance, result.plan)
    if problems:
        _fail("plan violates allocation constraints: " + "; ".join(problems))

    if oracle:
        try:
            reference = brute_force_oracle(result.instance)
        except InstanceTooLarge as exc:
            _fail(str(exc))
        same = (
            abs(reference.objective_s - result.plan.objective_s) <= 1e-9
            and reference.vehicles_used == result.plan.vehicles_used
            and [(a.point_id, a.resource_id) for a in reference.assignments]
            == [(a.point_id, a.resource_id) for a in result.plan.assignments]
        )
        if not same:
            _fail(
                f"oracle disagrees: oracle objective {reference.objective_s} with "
                f"{reference.vehicles_used} vehicles vs plan {result.plan.objective_s} "
                f"with {result.plan.vehicles_used}"
            )
        click.echo("oracle check passed", err=True)

    if check_expected:
        if bundle.expected is None:
            _fail("scenario bundle has no expected plan document")
        if canonical_json(bundle.expected) != canonical_json(result.document):
            _fail("plan document differs from the golden expected.json")
        click.echo("expected plan matched", err=True)

    matrix = (
        [p.id for p in result.instance.points],
        [r.id for r in result.instance.resources],
        result.plan.matrix(result.instance),
    )
    report = render_report(result.document, fmt, matrix=matrix)
    if out:
        Path(out).write_text(report, encoding="utf-8")
    else:
        click.echo(report, nl=False)
    sys.exit(EXIT_INFEASIBLE if result.plan.status == "infeasible" else EXIT_OK)


@main.command()
@click.argument("scenario_dir", type=click.Path(exists=True, file_okay=False))
def validate(scenario_dir):
    """Check the scenario's knowledge base consistency only."""
    try:
        bundle = load_scenario(scenario_dir)
    except (MissingFileError, ValueError, OSError) as exc:
        _fail(str(exc))
    store = store_from_entities(bundle.resources, bundle.rescue_points, bundle.shelters)
    violations = validate_consistency(store)
    if violations:
        for v in violations:
            click.echo(f"violation {v.code} on {v.subject}: {v.message}")
        sys.exit(EXIT_ERROR)
    click.echo(
        f"ok: {len(bundle.resources)} moving resources, "
        f"{len(bundle.rescue_points)} rescue points, {len(bundle.shelters)} shelters"
    )


@main.command("oracle-check")
@click.argument("scenario_dir", type=click.Path(exists=True, file_okay=False))
def oracle_check(scenario_dir):
    """Solve a small scenario and verify the plan against full enumeration."""
    try:
        bundle = load_scenario(scenario_dir)
        result = run_scenario(bundle)
        reference = brute_force_oracle(result.instance)
    except (MissingFileError, PipelineError, InstanceTooLarge, ValueError, OSError) as exc:
        _fail(str(exc))
    same_objective = abs(reference.objective_s - result.plan.objective_s) <= 1e-9
    same_vehicles = reference.vehicles_used == result.plan.vehicles_used
    same_pairs = [(a.point_id, a.resource_id) for a in reference.assignments] == [
        (a.point_id, a.resource_id) for a in result.plan.assignments
    ]
    if same_objective and same_vehicles and same_pairs:
        click.echo(
            f"oracle agrees: objective {result.plan.objective_s:.3f} s, "
            f"{result.plan.vehicles_used} vehicles"
        )
        sys.exit(EXIT_OK)
    click.echo("oracle disagrees with the solver plan:", err=True)
    click.echo(f"  solver: {result.plan.objective_s} s / {result.plan.vehicles_used} vehicles", err=True)
    click.echo(f"  oracle: {reference.objective_s} s / {reference.vehicles_used} vehicles", err=True)
    sys.exit(EXIT_ERROR)


@main.command()
@click.argument("plan_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--format", "fmt", type=click.Choice(["text", "structured"]), default="text")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def render(plan_file, fmt, out):
    """Render a saved plan document (as produced by --format structured)."""
    try:
        document = json.loads(Path(plan_file).read_text(encoding="utf-8"))
        report = render_report(document, fmt)
    except (ValueError, OSError) as exc:
        _fail(str(exc))
    if out:
        Path(out).write_text(report, encoding="utf-8")
    else:
        click.echo(report, nl=False)


@main.command()
@click.option("--host", default=None, help="Bind address (default from EVACALLOC_HOST).")
@click.option("--port", type=int, default=None, help="Port (default from EVACALLOC_PORT).")
@click.option("--scenario", type=click.Path(exists=True, file_okay=False), default=None,
              help="Seed KB, graph and gazetteer from a scenario bundle.")
def serve(host, port, scenario):
    """Start the HTTP service."""
    import uvicorn

    from .service.app import create_app

    config = ServiceConfig.from_env()
    if scenario:
        manifest = json.loads((Path(scenario) / "manifest.json").read_text(encoding="utf-8"))
        config.entities_path = str(Path(scenario) / manifest["entities"])
        config.graph_path = str(Path(scenario) / manifest["graph"])
        config.gazetteer_path = str(Path(scenario) / manifest["gazetteer"])
    if host:
        config.host = host
    if port:
        config.port = port
    if not config.graph_path:
        _fail("no road graph configured (EVACALLOC_GRAPH or --scenario)")
    app = create_app(config)
    uvicorn.run(app, host=config.host, port=config.port, log_level="warning")


if __name__ == "__main__":
    main()
