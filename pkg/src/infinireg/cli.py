"""CLI entry point for infinireg."""

from __future__ import annotations

import logging
import sys
from pathlib import Path

import click
from rich.console import Console
from rich.logging import RichHandler

from . import config as config_mod
from . import report
from .config import (
    build_default_config,
    get_bounds,
    get_cap,
    get_log_level,
    get_retry_cap,
    get_ring_size,
    get_samples,
    get_seed,
    load_config,
    save_config,
)
from .dsl import Command, CommandScript, Kind, parse_script, run_command, run_script
from .errors import GeneratorExhausted, ScriptError
from .models import SUITE_NAMES, PropertySuiteConfig
from .suites import run_suite

console = Console(width=report.REPORT_WIDTH)

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _setup_logging(level: str) -> None:
    handler = RichHandler(console=Console(stderr=True), show_path=False, show_time=False)
    logging.basicConfig(level=level, format="%(message)s", handlers=[handler], force=True)


def _fail_usage(code: str, message: str) -> None:
    report.render_error(code, message)
    sys.exit(EXIT_USAGE)


def _read_script(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except (UnicodeDecodeError, OSError) as exc:
        _fail_usage("PARSE_ERROR", f"cannot read {path}: {exc}")


def _load_script(path: str) -> CommandScript:
    text = _read_script(path)
    try:
        return parse_script(text)
    except ScriptError as exc:
        _fail_usage(exc.code, exc.message)


def _lookup(script: CommandScript, name: str, *kinds: Kind):
    try:
        return script.lookup(name, *kinds)
    except ScriptError as exc:
        _fail_usage(exc.code, exc.message)


@click.group()
@click.option("--config", "config_path", type=click.Path(dir_okay=False, path_type=Path),
              default=None, help="Config file (default ~/.infinireg/config.yaml)")
@click.option("--verbose", is_flag=True, help="Log at DEBUG level")
@click.pass_context
def main(ctx, config_path: Path | None, verbose: bool):
    """infinireg: exact computations with the infinitesimal weight-two regulator."""
    config = load_config(config_path)
    _setup_logging("DEBUG" if verbose else get_log_level(config))
    ctx.obj = config
    ctx.meta["config_path"] = config_path


@main.command()
@click.option("--seed", type=int, default=42, show_default=True)
@click.option("--samples", type=int, default=25, show_default=True)
@click.option("--cap", type=int, default=6, show_default=True)
@click.pass_context
def setup(ctx, seed: int, samples: int, cap: int):
    """Write a default configuration file."""
    path = ctx.meta.get("config_path") or config_mod.CONFIG_FILE
    save_config(build_default_config(seed, samples, cap), path)
    console.print(f"[green]✓ Config saved to {path}[/green]")


@main.command()
@click.argument("script", type=click.Path(exists=True, dir_okay=False))
@click.option("--cap", type=int, default=None, help="Degree cap of the exactness ansatz")
@click.pass_obj
def run(config: dict, script: str, cap: int | None):
    """Run every command of a script file."""
    parsed = _load_script(script)
    cap = cap if cap is not None else get_cap(config)
    outputs = run_script(parsed, cap)
    for out in outputs:
        console.print(f"[bold cyan]» {out.command.label}[/bold cyan]  [dim]line {out.command.line}[/dim]")
        report.render_command_output(out.lines)
    sys.exit(EXIT_PASS if all(out.ok for out in outputs) else EXIT_FAIL)


@main.command()
@click.argument("suite", type=click.Choice(SUITE_NAMES))
@click.option("--seed", type=int, default=None)
@click.option("--samples", type=int, default=None)
@click.option("--xvars", type=int, default=None, help="Number of base variables n")
@click.option("--tvars", type=int, default=None, help="Rank m of I")
@click.option("--deg", type=int, default=None, help="Polynomial degree bound")
@click.option("--height", type=int, default=None, help="Coefficient height bound")
@click.option("--cap", type=int, default=None, help="Degree cap of the exactness ansatz")
@click.option("--brief", is_flag=True, help="Print only the one-line summary")
@click.pass_obj
def check(config: dict, suite: str, seed, samples, xvars, tvars, deg, height, cap, brief: bool):
    """Run a seeded property suite; exits 1 if any sample fails."""
    n, m = get_ring_size(config)
    degree, bound = get_bounds(config)
    try:
        cfg = PropertySuiteConfig(
            suite=suite,
            seed=get_seed(config) if seed is None else seed,
            samples=get_samples(config) if samples is None else samples,
            xvars=n if xvars is None else xvars,
            tvars=m if tvars is None else tvars,
            degree=degree if deg is None else deg,
            height=bound if height is None else height,
            cap=get_cap(config) if cap is None else cap,
            retry_cap=get_retry_cap(config),
        )
    except ValueError as exc:
        _fail_usage("USAGE", str(exc))
    try:
        result = run_suite(cfg)
    except GeneratorExhausted as exc:
        report.render_error(exc.code, exc.message)
        sys.exit(EXIT_FAIL)
    if brief:
        report.render_status_line(result)
    else:
        report.render_suite_report(result)
    sys.exit(EXIT_PASS if result.all_passed else EXIT_FAIL)


@main.command()
@click.argument("script", type=click.Path(exists=True, dir_okay=False))
@click.argument("splitting")
@click.argument("sum_name", metavar="SUM")
@click.option("--method", type=click.Choice(["first", "second", "both"]), default="first",
              show_default=True)
def li2(script: str, splitting: str, sum_name: str, method: str):
    """Evaluate li2 of a declared sum under a declared splitting."""
    _run_named(script, "li2", [splitting, sum_name], method)


@main.command()
@click.argument("script", type=click.Path(exists=True, dir_okay=False))
@click.argument("sum_name", metavar="SUM")
def delta(script: str, sum_name: str):
    """Print the differential of a declared Bloch sum."""
    _run_named(script, "delta", [sum_name])


@main.command()
@click.argument("script", type=click.Path(exists=True, dir_okay=False))
@click.argument("x")
@click.argument("y")
def fiveterm(script: str, x: str, y: str):
    """Print the five-term sum of two declared elements."""
    _run_named(script, "fiveterm", [x, y])


@main.command()
@click.argument("script", type=click.Path(exists=True, dir_okay=False))
@click.argument("hom")
@click.argument("splitting1")
@click.argument("splitting2")
@click.argument("wedge")
def homotopy(script: str, hom: str, splitting1: str, splitting2: str, wedge: str):
    """Evaluate the homotopy h_f(tau1, tau2) on a wedge sum or infinitesimal Bloch sum."""
    _run_named(script, "homotopy", [hom, splitting1, splitting2, wedge])


@main.group()
def cech():
    """Čech assembly over a finite cover."""


def _cech_name(script: CommandScript, name: str | None) -> str:
    blocks = [n for n, d in script.definitions.items() if d.kind is Kind.CECH]
    if name is not None:
        _lookup(script, name, Kind.CECH)
        return name
    if not blocks:
        _fail_usage("UNKNOWN_IDENT", "script declares no cech block")
    return blocks[0]


@cech.command("verify")
@click.argument("script", type=click.Path(exists=True, dir_okay=False))
@click.option("--name", default=None, help="Cech block to use (default: the first)")
def cech_verify(script: str, name: str | None):
    """Assemble gamma and check the cocycle condition."""
    parsed = _load_script(script)
    _run_block(parsed, "cech verify", _cech_name(parsed, name), 0)


@cech.command("rho1")
@click.argument("script", type=click.Path(exists=True, dir_okay=False))
@click.option("--name", default=None, help="Cech block to use (default: the first)")
@click.option("--cap", type=int, default=None, help="Degree cap of the exactness ansatz")
@click.pass_obj
def cech_rho1(config: dict, script: str, name: str | None, cap: int | None):
    """Check that the degree-one sections glue up to exact forms."""
    parsed = _load_script(script)
    cap = cap if cap is not None else get_cap(config)
    _run_block(parsed, "cech rho1", _cech_name(parsed, name), cap)


def _run_named(path: str, verb: str, words: list[str], option: str | None = None) -> None:
    text = _read_script(path)
    line = " ".join([f"cmd {verb}", *words] + ([option] if option else [])) + ";"
    try:
        command = parse_script(text + "\n" + line).commands[-1]
    except ScriptError as exc:
        _fail_usage(exc.code, exc.message)
    _finish(run_command(command))


def _run_block(script: CommandScript, verb: str, name: str, cap: int) -> None:
    definition = script.definitions[name]
    command = Command(verb, [definition.value], [name], None, definition.line, definition.column)
    _finish(run_command(command, cap))


def _finish(out) -> None:
    report.render_command_output(out.lines)
    sys.exit(EXIT_PASS if out.ok else EXIT_FAIL)


if __name__ == "__main__":
    main()
