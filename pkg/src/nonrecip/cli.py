"""Command-line interface.

Each subcommand reads one JSON run-configuration document and writes one
text artifact to --out (stdout by default).  By default the run executes
in-process; with --server <url> the same request is sent to a running
HTTP service and the returned content is written unchanged, so both
paths produce identical bytes.

Exit statuses: 0 success, 1 configuration problem, 2 domain
infeasibility, 3 internal numeric or transport failure.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Optional

import click
import httpx

from . import __version__, runner
from .config import RunConfig, parse_config
from .errors import (
    CONFIG_ERRORS,
    DOMAIN_ERRORS,
    NUMERIC_ERRORS,
    ValidationError,
    exit_status_for,
)

_PACKAGE_ERRORS = CONFIG_ERRORS + DOMAIN_ERRORS + NUMERIC_ERRORS

_MODELS = ("full", "reduced", "analytic")


def _load_config(text: str, model: Optional[str]) -> RunConfig:
    if model is None:
        return parse_config(text)
    cfg = parse_config(text)
    if cfg.model == model:
        return cfg
    doc = json.loads(text)
    if not isinstance(doc, dict):
        raise ValidationError("config root must be a JSON object")
    doc["model"] = model
    return parse_config(json.dumps(doc))


def _run_local(command: str, text: str, model: Optional[str], workers: int) -> str:
    cfg = _load_config(text, model)
    if command == "sweep":
        return runner.run_sweep(cfg, workers=workers).to_csv()
    if command == "map":
        return runner.run_map(cfg, workers=workers)
    if command == "design":
        return runner.run_design(cfg)
    if command == "stability":
        return runner.run_stability(cfg)
    return runner.run_noise(cfg, workers=workers)


def _run_server(
    server: str, command: str, text: str, model: Optional[str], workers: int
) -> str:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(
            f"config is not valid JSON (line {exc.lineno}, column {exc.colno}): {exc.msg}"
        ) from exc
    body = {"config": doc, "workers": workers}
    if model is not None:
        body["model"] = model
    url = f"{server.rstrip('/')}/v1/{command}"
    try:
        resp = httpx.post(url, json=body, timeout=300.0)
    except httpx.HTTPError as exc:
        click.echo(f"error: cannot reach {url}: {exc}", err=True)
        raise SystemExit(3)
    if resp.status_code == 200:
        return resp.json()["content"]
    detail = resp.json().get("detail", "request rejected")
    if isinstance(detail, dict):
        click.echo(f"error: {detail.get('error')}: {detail.get('message')}", err=True)
        raise SystemExit(int(detail.get("exit_status", 3)))
    click.echo(f"error: {detail}", err=True)
    raise SystemExit(1)


def _execute(command, config_path, out_path, model, workers, server) -> None:
    try:
        text = Path(config_path).read_text(encoding="utf-8")
    except OSError as exc:
        click.echo(f"error: cannot read config: {exc}", err=True)
        raise SystemExit(1)
    try:
        if server is None:
            content = _run_local(command, text, model, workers)
        else:
            content = _run_server(server, command, text, model, workers)
    except _PACKAGE_ERRORS as exc:
        click.echo(f"error: {type(exc).__name__}: {exc}", err=True)
        raise SystemExit(exit_status_for(exc))
    if out_path is None:
        click.echo(content, nl=False)
    else:
        Path(out_path).write_text(content, encoding="utf-8", newline="\n")


def _common_options(fn):
    for option in reversed(
        (
            click.option(
                "--config",
                "config_path",
                required=True,
                type=click.Path(dir_okay=False),
                help="path to the JSON run configuration",
            ),
            click.option(
                "--out",
                "out_path",
                default=None,
                type=click.Path(dir_okay=False),
                help="output file (default: stdout)",
            ),
            click.option(
                "--model",
                default=None,
                type=click.Choice(_MODELS),
                help="override the config's model",
            ),
            click.option(
                "--workers",
                default=1,
                type=click.IntRange(1, 64),
                show_default=True,
                help="worker threads for per-point evaluation",
            ),
            click.option(
                "--server",
                default=None,
                metavar="URL",
                help="send the run to a service instead of executing locally",
            ),
        )
    ):
        fn = option(fn)
    return fn


@click.group()
@click.version_option(__version__, prog_name="nonrecip")
def main():
    """Frequency-domain simulator and designer for a two-cavity,
    two-oscillator nonreciprocal device."""


@main.command()
@_common_options
def sweep(config_path, out_path, model, workers, server):
    """Transmission table over a frequency grid (CSV)."""
    _execute("sweep", config_path, out_path, model, workers, server)


@main.command(name="map")
@_common_options
def grid_map(config_path, out_path, model, workers, server):
    """Scalar over a two-parameter grid (headered CSV)."""
    _execute("map", config_path, out_path, model, workers, server)


@main.command()
@_common_options
def design(config_path, out_path, model, workers, server):
    """Isolation solutions, working point, optional optimization (JSON)."""
    _execute("design", config_path, out_path, model, workers, server)


@main.command()
@_common_options
def stability(config_path, out_path, model, workers, server):
    """Stability verdict, margin, and legacy inequality block (JSON)."""
    _execute("stability", config_path, out_path, model, workers, server)


@main.command()
@_common_options
def noise(config_path, out_path, model, workers, server):
    """Output spectrum, gain, and added noise over a frequency grid (CSV)."""
    _execute("noise", config_path, out_path, model, workers, server)


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, type=int, show_default=True)
def serve(host, port):
    """Run the HTTP service."""
    import uvicorn

    from .service import app

    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
