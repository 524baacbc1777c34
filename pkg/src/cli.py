#!/usr/bin/env python3
"""Command Line Interface for the gordonlab numerical laboratory.

Requires: pip install -r requirements.txt

Usage:
    cd src
    python cli.py cfrac --config ../configs/golden_cosine.toml
    python cli.py lyap --config ../configs/golden_cosine.toml --threads 4
    python cli.py gordon --config ../configs/liouville_free.toml
    python cli.py selftest --seed 7

Exit codes: 0 success, 2 configuration error, 3 invariant or theory
violation (including a failed self-test), 4 scale-budget refusal.
"""
from __future__ import annotations

import contextlib
import math
from pathlib import Path
from typing import Iterator, Optional

import typer
from rich.console import Console
from rich.table import Table

from core.config import get_settings
from core.exceptions import GordonLabError
from core.logging_config import get_logger, setup_logging
from core.run_config import RunConfig, load_run_config

LOGGER = get_logger(__name__)
SETTINGS = get_settings()

FAILED_SELFTEST_EXIT = 3

app = typer.Typer(help="Numerical laboratory for the Gordon exclusion of eigenvalues", no_args_is_help=True)
console = Console()
err_console = Console(stderr=True)


@app.callback()
def main_callback(
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Enable verbose output"),
) -> None:
    """Quasi-periodic Schrödinger operators: continued fractions, Lyapunov scans, Gordon checks."""
    log_level = "DEBUG" if verbose else SETTINGS.log_level
    setup_logging(level=log_level, log_file=SETTINGS.log_file, json_format=SETTINGS.json_logs)


@contextlib.contextmanager
def _exit_on_error() -> Iterator[None]:
    """Map library errors onto the exit-code contract."""
    try:
        yield
    except GordonLabError as exc:
        err_console.print(f"[red]✗ {type(exc).__name__}:[/red] {exc}")
        raise typer.Exit(code=exc.exit_code)


def _load(config: Path, *blocks: str) -> RunConfig:
    run = load_run_config(config)
    run.require(*blocks)
    return run


# =============================================================================
# Continued fractions
# =============================================================================


@app.command("cfrac")
def cmd_cfrac(
    config: Path = typer.Option(..., "--config", "-c", help="Run configuration (TOML)"),
) -> None:
    """Convergent table with r_n = ln(q_{n+1}) / q_n and the beta estimate."""
    from frequency import beta_estimate
    from reporting import cfrac_frame, write_csv

    with _exit_on_error():
        run = _load(config)
        freq = run.build_frequency()
        frame = cfrac_frame(freq, run.frequency.depth)

        table = Table(title=f"Continued fraction of {freq.omega:.15g}")
        for column in frame.columns:
            table.add_column(column, justify="right")
        for row in frame.itertuples(index=False):
            table.add_row(*("" if isinstance(v, float) and math.isnan(v) else f"{v:.12g}" for v in row))
        console.print(table)

        if freq.depth >= 2 or freq.is_rational:
            beta = beta_estimate(freq)
            console.print(f"beta_hat = {beta.running_max:.6g}")
        if run.output is not None:
            path = write_csv(frame, run.resolve(run.output.csv_path))
            typer.secho(f"✓ Wrote {len(frame)} rows to {path}", fg="green", err=True)


# =============================================================================
# Lyapunov scan
# =============================================================================


@app.command("lyap")
def cmd_lyap(
    config: Path = typer.Option(..., "--config", "-c", help="Run configuration (TOML)"),
    threads: Optional[int] = typer.Option(None, "--threads", "-t", min=1, help="Worker threads"),
) -> None:
    """Lyapunov exponent over the energy grid; CSV plus optional SVG plot."""
    from frequency import beta_estimate
    from gordon import regime_threshold
    from lyapunov import lyapunov_scan
    from reporting import lyap_frame, lyapunov_svg, write_csv, write_svg

    with _exit_on_error():
        run = _load(config, "potential", "scan", "output")
        freq = run.build_frequency()
        spec = run.build_potential()
        lyap = run.lyapunov
        estimates = lyapunov_scan(
            spec, freq, run.scan.grid(), lyap.length, lyap.n_phases, lyap.h, threads=threads
        )
        path = write_csv(lyap_frame(estimates), run.resolve(run.output.csv_path))
        typer.secho(f"✓ Wrote {len(estimates)} energies to {path}", fg="green", err=True)

        if run.output.svg_path is not None:
            beta_hat = beta_estimate(freq).running_max if freq.depth >= 2 or freq.is_rational else math.nan
            threshold = regime_threshold(spec.gamma, beta_hat, run.gordon.margin)
            svg = lyapunov_svg(estimates, title=f"L_hat(E), {spec.label}", threshold=threshold)
            svg_path = write_svg(svg, run.resolve(run.output.svg_path))
            typer.secho(f"✓ Wrote plot to {svg_path}", fg="green", err=True)


# =============================================================================
# Gordon exclusion
# =============================================================================


@app.command("gordon")
def cmd_gordon(
    config: Path = typer.Option(..., "--config", "-c", help="Run configuration (TOML)"),
    threads: Optional[int] = typer.Option(None, "--threads", "-t", min=1, help="Worker threads"),
) -> None:
    """Per-(E, q) defects and exclusion verdicts; CSV plus JSON summary."""
    from frequency import beta_estimate, resonant_scales
    from gordon import exclusion_scan
    from lyapunov import lyapunov_scan
    from reporting import gordon_frame, gordon_summary, write_csv, write_summary

    with _exit_on_error():
        run = _load(config, "potential", "scan", "output")
        freq = run.build_frequency()
        spec = run.build_potential()
        lyap, gcfg = run.lyapunov, run.gordon

        beta = beta_estimate(freq)
        ladder = resonant_scales(freq, gcfg.epsilon, gcfg.max_q, gcfg.min_q, beta=beta)
        LOGGER.info(f"Resonant ladder {list(ladder.scales)} (beta_hat={ladder.beta_hat:.6g})")

        estimates = lyapunov_scan(
            spec, freq, run.scan.grid(), lyap.length, lyap.n_phases, lyap.h, threads=threads
        )
        reports = exclusion_scan(
            spec, freq, estimates, ladder, gcfg.margin, gcfg.h, gcfg.n_phi, threads=threads
        )

        csv_path = write_csv(gordon_frame(reports), run.resolve(run.output.csv_path))
        summary_target = run.resolve(run.output.summary_path) or csv_path.with_suffix(".json")
        write_summary(gordon_summary(reports, ladder, beta, estimates), summary_target)

        table = Table(title="Exclusion verdicts")
        for column in ("E", "L_hat", "verdict", "reason"):
            table.add_column(column)
        for report in reports:
            table.add_row(f"{report.energy:.6g}", f"{report.l_hat:.6g}", report.verdict.value, report.reason)
        console.print(table)
        typer.secho(f"✓ Wrote {csv_path} and {summary_target}", fg="green", err=True)


# =============================================================================
# Self-test
# =============================================================================


@app.command("selftest")
def cmd_selftest(
    seed: int = typer.Option(0, "--seed", min=0, help="Seed for the fuzz suites"),
    fuzz_count: int = typer.Option(100_000, "--fuzz-count", min=1, help="Random instances for simon_fuzz"),
    h: float = typer.Option(1e-3, "--h", help="Integration step"),
    inject_fault: Optional[str] = typer.Option(None, "--inject-fault", hidden=True),
) -> None:
    """Run the oracle suites and print a pass/fail matrix."""
    from cocycle import inject_det_fault
    from selftest import DET_FAULT_FACTOR, run_suites

    if inject_fault not in (None, "det-drift"):
        err_console.print(f"[red]✗ unknown fault {inject_fault!r}[/red]")
        raise typer.Exit(code=2)

    fault = inject_det_fault(DET_FAULT_FACTOR) if inject_fault else contextlib.nullcontext()
    with _exit_on_error(), fault:
        results = run_suites(seed=seed, fuzz_count=fuzz_count, h=h)

    table = Table(title="Self-test")
    table.add_column("suite")
    table.add_column("result")
    table.add_column("detail")
    table.add_column("ms", justify="right")
    for result in results:
        status = "[green]PASS[/green]" if result.passed else "[red]FAIL[/red]"
        table.add_row(result.name, status, result.detail, f"{result.duration_ms:.0f}")
    console.print(table)

    if not all(r.passed for r in results):
        raise typer.Exit(code=FAILED_SELFTEST_EXIT)


if __name__ == "__main__":
    app()
