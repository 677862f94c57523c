"""
Main entry point for the bellveto CLI.
"""

import logging
from pathlib import Path
from typing import Any, Dict, List, Optional

import typer
from rich.console import Console
from rich.panel import Panel

app = typer.Typer(
    name="bellveto",
    help="Bell-state quantum anonymous veto simulator - elections, verification sweeps and efficiency tables",
    add_completion=False
)
console = Console(stderr=True)

# Flags that map onto AppConfig keys; everything else describes the run itself.
_SETTING_FLAGS = (
    "seed", "trials", "workers", "backend", "pair_rule", "noise", "p", "loss",
    "adversary", "delta1", "threshold", "auth", "signature_length", "auth_threshold", "format",
)


def _configure_logging(verbose: bool) -> None:
    from rich.logging import RichHandler

    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=console, show_path=False)],
        force=True,
    )


def _n_option():
    return typer.Option(None, "--n", help="Number of voters (defaults to the --votes length, else 4)")


def _seed_option():
    return typer.Option(None, "--seed", help="Master seed (or QAV_SIM_SEED, default 1729)")


def _trials_option():
    return typer.Option(None, "--trials", help="Monte Carlo trials per data point")


def _backend_option():
    return typer.Option(None, "--backend", help="abstract or photonic")


def _noise_option():
    return typer.Option(None, "--noise", help="Hop noise: ideal, dephasing or depolarizing")


def _p_option():
    return typer.Option(None, "--p", help="Noise strength per hop")


def _loss_option():
    return typer.Option(None, "--loss", help="Photon loss probability per hop")


def _adversary_option():
    return typer.Option(None, "--adversary", help="none or intercept_resend")


def _delta1_option():
    return typer.Option(None, "--delta1", help="Decoy qubits per hop")


def _threshold_option():
    return typer.Option(None, "--threshold", help="Pooled decoy error rate that aborts a run")


def _pair_rule_option():
    return typer.Option(None, "--pair-rule", help="Bell-pair count rule: floor or ceil")


def _auth_option():
    return typer.Option(None, "--auth/--no-auth", help="Authenticate voters before distribution")


def _format_option():
    return typer.Option(None, "--format", help="json or csv (csv for table reports)")


def _out_option():
    return typer.Option(None, "--out", "-o", help="Write the report to this path instead of stdout")


def _config_option():
    return typer.Option(None, "--config", help="JSON file mirroring the CLI flags; flags override it")


def _workers_option():
    return typer.Option(None, "--workers", help="Worker processes for trial batches")


def _verbose_option():
    return typer.Option(False, "--verbose", "-v", help="Debug logging on stderr")


def _parse_list(text: Any, cast) -> List[Any]:
    if text is None:
        return []
    if isinstance(text, (list, tuple)):
        return [cast(v) for v in text]
    return [cast(v.strip()) for v in str(text).split(",") if v.strip()]


def _build_spec(
    subcommand: str,
    config_path: Optional[Path],
    flags: Dict[str, Any],
    default_trials: Optional[int] = None,
):
    """Merge defaults, environment, config file and flags (highest) into a RunSpec.

    default_trials replaces the configured trial count only when nothing set it.
    """
    from .models.config import AppConfig, get_config
    from .models.report import RunSpec

    if config_path:
        config, run = AppConfig.from_file(config_path)
    else:
        config, run = get_config(), {}

    config = config.merged({k: flags.get(k) for k in _SETTING_FLAGS})
    run.update({k: v for k, v in flags.items() if k not in _SETTING_FLAGS and v is not None})

    votes = run.get("votes")
    n = run.get("n")
    if n is None:
        n = len(str(votes).strip()) if votes is not None else 4

    sim, channel, auth = config.simulation, config.channel, config.auth
    trials = sim.trials
    if default_trials is not None and not config.is_set("simulation", "trials"):
        trials = default_trials
    return RunSpec(
        subcommand=subcommand,
        n=n,
        votes=votes,
        k=run.get("k"),
        seed=sim.seed,
        trials=trials,
        workers=sim.workers,
        backend=sim.backend,
        noise=channel.noise,
        p=channel.p,
        loss=channel.loss,
        adversary=channel.adversary,
        delta1=channel.delta1,
        threshold=channel.threshold,
        authenticate=auth.enabled,
        signature_length=auth.signature_length,
        auth_threshold=auth.threshold,
        pair_rule=sim.pair_rule,
        sweep=run.get("sweep", "p"),
        grid=_parse_list(run.get("grid"), float),
        n_values=_parse_list(run.get("n_values"), int),
        output_format=config.output.format,
        out=run.get("out"),
    ), config


def _render_summary(report) -> None:
    from rich.table import Table

    table = Table(show_header=True, header_style="bold magenta", title=report.spec.subcommand.value)
    table.add_column("Result", style="cyan")
    table.add_column("Value", style="green")
    for key, value in report.results.items():
        if isinstance(value, float):
            value = f"{value:.6g}"
        table.add_row(key, str(value))
    if report.table:
        table.add_row("rows", str(len(report.table)))
    console.print(table)


def _emit(report, spec, reports_dir: str) -> None:
    from .models.report import OutputFormat
    from .utils.export import records_to_csv

    if spec.output_format == OutputFormat.CSV:
        if not report.table:
            raise ValueError(f"CSV output needs a table report; {spec.subcommand.value} has none")
        text = records_to_csv(report.table)
    else:
        text = report.to_json()

    if not spec.out:
        typer.echo(text)
        return

    path = Path(spec.out)
    if path.parent == Path("."):
        path = Path(reports_dir) / path
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text + "\n", encoding="utf-8")
    console.print(f"[green]✓[/green] Report written to {path}")


def _execute(
    subcommand: str,
    config_path: Optional[Path],
    verbose: bool,
    default_trials: Optional[int] = None,
    **flags,
) -> None:
    """Build the spec, run the experiment and emit the report; errors exit with status 1."""
    from .services.experiment_service import ExperimentService

    _configure_logging(verbose)
    try:
        spec, config = _build_spec(subcommand, config_path, flags, default_trials)
        console.print(Panel(f"bellveto {subcommand} (n={spec.n}, seed={spec.seed})", style="bold blue"))
        report = ExperimentService(spec).run()
        _render_summary(report)
        _emit(report, spec, config.output.reports_dir)
    except Exception as e:
        console.print(f"[red]Error: {e}[/red]")
        raise typer.Exit(1)


@app.command()
def tally(
    n: Optional[int] = _n_option(),
    votes: Optional[str] = typer.Option(None, "--votes", help="Vote bitstring, V_0 first (e.g. 0100)"),
    k: Optional[int] = typer.Option(None, "--k", help="Random vote vector with k vetoes"),
    seed: Optional[int] = _seed_option(),
    trials: Optional[int] = _trials_option(),
    backend: Optional[str] = _backend_option(),
    noise: Optional[str] = _noise_option(),
    p: Optional[float] = _p_option(),
    loss: Optional[float] = _loss_option(),
    adversary: Optional[str] = _adversary_option(),
    delta1: Optional[int] = _delta1_option(),
    threshold: Optional[float] = _threshold_option(),
    pair_rule: Optional[str] = _pair_rule_option(),
    auth: Optional[bool] = _auth_option(),
    output_format: Optional[str] = _format_option(),
    out: Optional[str] = _out_option(),
    config: Optional[Path] = _config_option(),
    workers: Optional[int] = _workers_option(),
    verbose: bool = _verbose_option(),
):
    """Run one election (or --trials elections) and report the veto verdict."""
    _execute(
        "tally", config, verbose, default_trials=1,
        n=n, votes=votes, k=k, seed=seed, trials=trials, backend=backend, noise=noise,
        p=p, loss=loss, adversary=adversary, delta1=delta1, threshold=threshold,
        pair_rule=pair_rule, auth=auth, format=output_format, out=out, workers=workers,
    )


@app.command()
def exhaustive(
    n: Optional[int] = _n_option(),
    seed: Optional[int] = _seed_option(),
    backend: Optional[str] = _backend_option(),
    noise: Optional[str] = _noise_option(),
    p: Optional[float] = _p_option(),
    loss: Optional[float] = _loss_option(),
    adversary: Optional[str] = _adversary_option(),
    delta1: Optional[int] = _delta1_option(),
    threshold: Optional[float] = _threshold_option(),
    pair_rule: Optional[str] = _pair_rule_option(),
    auth: Optional[bool] = _auth_option(),
    out: Optional[str] = _out_option(),
    config: Optional[Path] = _config_option(),
    workers: Optional[int] = _workers_option(),
    verbose: bool = _verbose_option(),
):
    """Run all 2^n vote vectors (n ≤ 16) and list verdicts that disagree with k ≥ 1."""
    _execute(
        "exhaustive", config, verbose,
        n=n, seed=seed, backend=backend, noise=noise, p=p, loss=loss, adversary=adversary,
        delta1=delta1, threshold=threshold, pair_rule=pair_rule, auth=auth, out=out,
        workers=workers,
    )


@app.command()
def sweep(
    n: Optional[int] = _n_option(),
    votes: Optional[str] = typer.Option(None, "--votes", help="Vote bitstring, V_0 first"),
    k: Optional[int] = typer.Option(None, "--k", help="Random vote vector with k vetoes (default 0)"),
    parameter: Optional[str] = typer.Option(None, "--sweep", help="Swept parameter: p or loss"),
    grid: Optional[str] = typer.Option(None, "--grid", help="Comma-separated values, e.g. 0,0.01,0.05"),
    seed: Optional[int] = _seed_option(),
    trials: Optional[int] = _trials_option(),
    backend: Optional[str] = _backend_option(),
    noise: Optional[str] = _noise_option(),
    p: Optional[float] = _p_option(),
    loss: Optional[float] = _loss_option(),
    adversary: Optional[str] = _adversary_option(),
    delta1: Optional[int] = _delta1_option(),
    threshold: Optional[float] = _threshold_option(),
    pair_rule: Optional[str] = _pair_rule_option(),
    auth: Optional[bool] = _auth_option(),
    output_format: Optional[str] = _format_option(),
    out: Optional[str] = _out_option(),
    config: Optional[Path] = _config_option(),
    workers: Optional[int] = _workers_option(),
    verbose: bool = _verbose_option(),
):
    """False-positive, false-negative and abort rates across a noise or loss grid."""
    _execute(
        "sweep", config, verbose,
        n=n, votes=votes, k=k, sweep=parameter, grid=grid, seed=seed, trials=trials,
        backend=backend, noise=noise, p=p, loss=loss, adversary=adversary, delta1=delta1,
        threshold=threshold, pair_rule=pair_rule, auth=auth, format=output_format, out=out,
        workers=workers,
    )


@app.command()
def efficiency(
    n_values: Optional[str] = typer.Option(None, "--n", help="Comma-separated voter counts (default 2,4,8,16)"),
    delta1: Optional[int] = _delta1_option(),
    pair_rule: Optional[str] = _pair_rule_option(),
    output_format: Optional[str] = _format_option(),
    out: Optional[str] = _out_option(),
    config: Optional[Path] = _config_option(),
    verbose: bool = _verbose_option(),
):
    """Qubit-efficiency table of the deterministic and iterative protocols."""
    _execute(
        "efficiency", config, verbose,
        n_values=n_values, delta1=delta1, pair_rule=pair_rule, format=output_format, out=out,
    )


@app.command()
def adversary(
    n: Optional[int] = _n_option(),
    seed: Optional[int] = _seed_option(),
    trials: Optional[int] = _trials_option(),
    backend: Optional[str] = _backend_option(),
    noise: Optional[str] = _noise_option(),
    p: Optional[float] = _p_option(),
    delta1: Optional[int] = _delta1_option(),
    threshold: Optional[float] = _threshold_option(),
    pair_rule: Optional[str] = _pair_rule_option(),
    auth: Optional[bool] = _auth_option(),
    out: Optional[str] = _out_option(),
    config: Optional[Path] = _config_option(),
    workers: Optional[int] = _workers_option(),
    verbose: bool = _verbose_option(),
):
    """Decoy statistics and abort rate under an intercept-resend attacker."""
    _execute(
        "adversary", config, verbose,
        n=n, seed=seed, trials=trials, backend=backend, noise=noise, p=p, delta1=delta1,
        threshold=threshold, pair_rule=pair_rule, auth=auth, out=out, workers=workers,
    )


@app.command()
def auth(
    seed: Optional[int] = _seed_option(),
    trials: Optional[int] = _trials_option(),
    signature_length: Optional[int] = typer.Option(None, "--signature-length", help="BB84 symbols per signature"),
    auth_threshold: Optional[float] = typer.Option(None, "--auth-threshold", help="Maximum accepted mismatch rate"),
    out: Optional[str] = _out_option(),
    config: Optional[Path] = _config_option(),
    verbose: bool = _verbose_option(),
):
    """Honest and forged signature mismatch and rejection rates."""
    _execute(
        "auth", config, verbose,
        seed=seed, trials=trials, signature_length=signature_length,
        auth_threshold=auth_threshold, out=out,
    )


@app.command()
def backend(
    n: Optional[int] = _n_option(),
    seed: Optional[int] = _seed_option(),
    trials: Optional[int] = _trials_option(),
    pair_rule: Optional[str] = _pair_rule_option(),
    output_format: Optional[str] = _format_option(),
    out: Optional[str] = _out_option(),
    config: Optional[Path] = _config_option(),
    verbose: bool = _verbose_option(),
):
    """Compare abstract and photonic outcome statistics for every veto count."""
    _execute(
        "backend", config, verbose,
        n=n, seed=seed, trials=trials, pair_rule=pair_rule, format=output_format, out=out,
    )


@app.command()
def config(
    show: bool = typer.Option(
        False,
        "--show",
        help="Show current configuration"
    )
):
    """Manage configuration."""
    from .models.config import get_config
    from rich.table import Table

    cfg = get_config()

    if show:
        table = Table(show_header=True, header_style="bold magenta", title="Current Configuration")
        table.add_column("Setting", style="cyan")
        table.add_column("Value", style="green")
        for key, value in cfg.flat().items():
            table.add_row(key, str(value))
        console.print(table)
    else:
        console.print("Use --show to display current configuration")


if __name__ == "__main__":
    app()
