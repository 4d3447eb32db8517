"""CLI for tube radius certificates, the inequality suite and the Moser flow."""

import logging
import sys
from collections.abc import Callable
from pathlib import Path
from typing import Any, NoReturn

import click
from pydantic import ValidationError

from weinstein_tube.bounds import ALPHA_DISCREPANCY
from weinstein_tube.errors import TubeError
from weinstein_tube.formatters import FORMATTERS, BaseFormatter, get_formatter
from weinstein_tube.models import MoserReport, SuiteReport
from weinstein_tube.parsers import load_scene
from weinstein_tube.suite import SuiteContext, list_checks, run_moser, run_suite

logger = logging.getLogger("tube")

FORMAT_CHOICE = click.Choice(sorted(FORMATTERS))


def _configure_logging(verbose: bool, quiet: bool) -> None:
    level = logging.DEBUG if verbose else (logging.ERROR if quiet else logging.WARNING)
    logging.basicConfig(level=level, format="%(levelname)s: %(message)s")


def _get_formatter(fmt: str) -> BaseFormatter:
    try:
        return get_formatter(fmt)
    except TubeError as e:
        raise click.UsageError(str(e)) from e


def _quiet(ctx: click.Context) -> bool:
    return bool(ctx.find_root().params.get("quiet", False))


def _fail(message: str) -> NoReturn:
    click.secho(message, fg="red", err=True)
    sys.exit(1)


def _emit(text: str, output: Path | None, force: bool) -> None:
    if output is None:
        click.echo(text, nl=False)
        return
    if output.exists() and not force:
        raise click.UsageError(f"{output} exists; pass --force to overwrite")
    output.parent.mkdir(parents=True, exist_ok=True)
    output.write_text(text, encoding="utf-8")
    if not _quiet(click.get_current_context()):
        click.echo(f"Wrote {output}")


def _parse_radius(value: str) -> float | None:
    if value == "auto":
        return None
    try:
        r = float(value)
    except ValueError:
        raise click.BadParameter(
            f"expected a positive number or 'auto', got {value!r}"
        ) from None
    if not r > 0:
        raise click.BadParameter(f"radius must be positive, got {value}")
    return r


config_option = click.option(
    "--config",
    "-c",
    "config",
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    help="Scene configuration (JSON).",
)
output_option = click.option(
    "--output",
    "-o",
    type=click.Path(path_type=Path),
    help="Output file path (default: stdout).",
)
force_option = click.option(
    "--force",
    "-F",
    is_flag=True,
    help="Overwrite the output file if it already exists.",
)
radius_option = click.option(
    "--radius",
    "-r",
    default="auto",
    help="Tube radius, or 'auto' for the policy.",
)


def format_option(default: str) -> Callable[[Callable[..., Any]], Callable[..., Any]]:
    return click.option(
        "--format",
        "-f",
        "output_format",
        type=FORMAT_CHOICE,
        default=default,
        help="Output format.",
    )


@click.group()
@click.option("--verbose", "-v", is_flag=True, help="Verbose output.")
@click.option("--quiet", "-q", is_flag=True, help="Suppress non-error output.")
@click.pass_context
def cli(ctx: click.Context, verbose: bool, quiet: bool) -> None:
    """Explicit Weinstein tube radii and a verified Moser construction."""
    _configure_logging(verbose, quiet)
    ctx.ensure_object(dict)


@cli.command()
@config_option
@click.option(
    "--printed-alpha",
    "--paper-alpha",
    "use_printed_alpha",
    is_flag=True,
    help="Use the printed subtube factor for the Moser subtube radius.",
)
@format_option("text")
@output_option
@force_option
def bounds(
    config: Path | None,
    use_printed_alpha: bool,
    output_format: str,
    output: Path | None,
    force: bool,
) -> None:
    """Print every radius certificate for the scene."""
    if config is None:
        raise click.UsageError("--config is required")
    formatter = _get_formatter(output_format)
    try:
        scene = load_scene(config)
        context = SuiteContext(scene)
        if use_printed_alpha:
            logger.warning("%s", ALPHA_DISCREPANCY)
        report = SuiteReport(
            scene=scene.name,
            seed=context.seed,
            radius=context.radius,
            certificates=context.certificates(use_printed_alpha),
        )
        _emit(formatter.format(report), output, force)
    except click.ClickException:
        raise
    except TubeError as e:
        logger.exception("Bounds failed")
        _fail(f"Error: {e}")
    except Exception as e:
        logger.exception("Bounds failed")
        _fail(f"Error: {type(e).__name__}: {e}")


@cli.command()
@config_option
@click.option(
    "--checks", default=None, help="Comma-separated check ids (default: all)."
)
@click.option(
    "--list", "list_only", is_flag=True, help="List registered checks and exit."
)
@radius_option
@click.option(
    "--printed-alpha",
    "--paper-alpha",
    "use_printed_alpha",
    is_flag=True,
    help="Certify the subtube with the printed factor.",
)
@format_option("json")
@output_option
@force_option
@click.pass_context
def verify(
    ctx: click.Context,
    config: Path | None,
    checks: str | None,
    list_only: bool,
    radius: str,
    use_printed_alpha: bool,
    output_format: str,
    output: Path | None,
    force: bool,
) -> None:
    """Run the inequality suite; exits 1 if any check fails."""
    if list_only:
        for check_id, anchor, title in list_checks():
            click.echo(f"{check_id:<32} {anchor:<32} {title}")
        return
    if config is None:
        raise click.UsageError("--config is required unless --list is given")
    formatter = _get_formatter(output_format)
    selected = [c.strip() for c in checks.split(",") if c.strip()] if checks else None
    try:
        scene = load_scene(config)
        report = run_suite(
            scene,
            selected,
            _parse_radius(radius),
            use_printed_alpha,
            progress=not _quiet(ctx),
        )
        _emit(formatter.format(report), output, force)
    except click.ClickException:
        raise
    except TubeError as e:
        logger.exception("Verification failed")
        _fail(f"Error: {e}")
    except Exception as e:
        logger.exception("Verification failed")
        _fail(f"Error: {type(e).__name__}: {e}")
    failed = [c.check_id for c in report.checks if c.verdict == "fail"]
    if failed:
        _fail(f"{len(failed)} check(s) failed: {', '.join(failed)}")


@cli.command()
@config_option
@radius_option
@click.option(
    "--starts",
    "-n",
    type=click.IntRange(min=1),
    default=None,
    help="Number of flow starts (default: sampling.flow_starts).",
)
@click.option(
    "--no-residual", is_flag=True, help="Skip the symplectic residual of Θ."
)
@format_option("text")
@output_option
@force_option
@click.pass_context
def moser(
    ctx: click.Context,
    config: Path | None,
    radius: str,
    starts: int | None,
    no_residual: bool,
    output_format: str,
    output: Path | None,
    force: bool,
) -> None:
    """Run the Moser construction from the practical α-subtube."""
    if config is None:
        raise click.UsageError("--config is required")
    formatter = _get_formatter(output_format)
    try:
        scene = load_scene(config)
        report = run_moser(
            scene,
            _parse_radius(radius),
            starts,
            not no_residual,
            progress=not _quiet(ctx),
        )
        _emit(formatter.format_moser(report), output, force)
    except click.ClickException:
        raise
    except TubeError as e:
        logger.exception("Moser construction failed")
        _fail(f"Error: {e}")
    except Exception as e:
        logger.exception("Moser construction failed")
        _fail(f"Error: {type(e).__name__}: {e}")
    if not report.all_inside:
        _fail("Error: a trajectory left the tube")


@cli.command()
@click.option(
    "--in",
    "input_file",
    required=True,
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    help="JSON report written by verify or moser.",
)
@format_option("csv")
@output_option
@force_option
def report(
    input_file: Path, output_format: str, output: Path | None, force: bool
) -> None:
    """Convert a JSON report to another format."""
    formatter = _get_formatter(output_format)
    try:
        content = input_file.read_text(encoding="utf-8")
        try:
            text = formatter.format(SuiteReport.model_validate_json(content))
        except ValidationError:
            text = formatter.format_moser(MoserReport.model_validate_json(content))
        _emit(text, output, force)
    except click.ClickException:
        raise
    except ValidationError as e:
        logger.exception("Report conversion failed")
        _fail(f"Error: {input_file} is not a suite or Moser report: {e}")
    except Exception as e:
        logger.exception("Report conversion failed")
        _fail(f"Error: cannot read {input_file}: {e}")


def main() -> None:
    """Entry point for the CLI."""
    cli(obj={})


if __name__ == "__main__":
    main()
