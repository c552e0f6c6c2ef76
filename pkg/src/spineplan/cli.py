"""Command-line driver: fixture validation, headless planning, serving.

Exit codes:
  validate-bbox: 0 all files parse, 2 any parse failure, 1 any I/O failure
  plan:          0 plan written, 2 script syntax error, 1 anything else
                 (failing command, bad fixture, unreachable server)
  serve:         1 on config or bind failure
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .bbox import load_bbox_file
from .config import load_config
from .errors import ParseError, PlanningError, ScriptError
from .scripting import (
    HttpExecutor,
    LocalExecutor,
    ScriptExecutionError,
    parse_script,
    run_script,
)
from .session import ImageMeta, create_session

DEFAULT_SESSION_ID = "cli"


@click.group()
def main() -> None:
    """Biplanar pedicle-screw planning tools."""


@main.command("validate-bbox")
@click.argument("files", nargs=-1, required=True, type=click.Path(path_type=Path))
def validate_bbox(files: tuple[Path, ...]) -> None:
    """Check detection box files; reports every file before exiting."""
    parse_failed = io_failed = False
    for path in files:
        try:
            boxes = load_bbox_file(path)
        except ParseError as err:
            click.echo(f"{path}: line {err.line_no}: {err.reason}", err=True)
            parse_failed = True
        except OSError as err:
            click.echo(f"{path}: {err}", err=True)
            io_failed = True
        else:
            click.echo(f"{path}: ok ({len(boxes)} boxes)")
    if parse_failed:
        sys.exit(2)
    if io_failed:
        sys.exit(1)


def _image_meta(spec: tuple[str, str, str], name: str) -> ImageMeta:
    ref, w, h = spec
    try:
        return ImageMeta(ref, int(w), int(h))
    except ValueError:
        raise click.BadParameter(
            f"--{name} expects REF WIDTH HEIGHT, got {spec}", param_hint=f"--{name}"
        ) from None


@main.command()
@click.option("--script", "script_path", required=True, type=click.Path(path_type=Path))
@click.option("--out", "out_path", required=True, type=click.Path(path_type=Path))
@click.option("--ap", nargs=3, required=True, metavar="REF WIDTH HEIGHT")
@click.option("--lp", nargs=3, required=True, metavar="REF WIDTH HEIGHT")
@click.option("--session-id", default=DEFAULT_SESSION_ID, show_default=True)
@click.option("--server", "server_url", default=None, metavar="URL",
              help="Run against a live service instead of in-process.")
def plan(script_path, out_path, ap, lp, session_id, server_url) -> None:
    """Execute a plan script headlessly and write the plan document."""
    ap_meta = _image_meta(ap, "ap")
    lp_meta = _image_meta(lp, "lp")
    try:
        text = script_path.read_text(encoding="utf-8")
    except OSError as err:
        click.echo(f"cannot read script: {err}", err=True)
        sys.exit(1)
    try:
        commands = parse_script(text, base_dir=script_path.parent)
    except ScriptError as err:
        click.echo(f"script error, {err.message}", err=True)
        sys.exit(2)

    try:
        if server_url is None:
            executor = LocalExecutor(create_session(ap_meta, lp_meta, session_id))
        else:
            executor = _remote_executor(server_url, ap_meta, lp_meta, session_id)
        plan_text = run_script(commands, executor)
    except ScriptExecutionError as err:
        click.echo(str(err), err=True)
        sys.exit(1)
    except PlanningError as err:
        click.echo(f"[{err.code}] {err.message}", err=True)
        sys.exit(1)

    try:
        out_path.write_text(plan_text, encoding="utf-8")
    except OSError as err:
        click.echo(f"cannot write plan: {err}", err=True)
        sys.exit(1)

    body = json.loads(plan_text)
    click.echo(f"session {body['session_id']}: {len(body['screws'])} screw(s)")
    for row in body["screws"]:
        click.echo(
            f"  {row['vertebra_label']} {row['side']}: "
            f"{row['length_mm']:.1f} mm x {row['diameter_mm']:.1f} mm {row['screw_type']}"
        )
    click.echo(f"plan written to {out_path}")


def _remote_executor(server_url, ap_meta, lp_meta, session_id) -> HttpExecutor:
    import httpx

    client = httpx.Client(base_url=server_url, timeout=30.0)
    response = client.post(
        "/sessions",
        json={
            "ap": {"image_ref": ap_meta.image_ref, "width": ap_meta.width,
                   "height": ap_meta.height},
            "lp": {"image_ref": lp_meta.image_ref, "width": lp_meta.width,
                   "height": lp_meta.height},
            "session_id": session_id,
        },
    )
    if response.status_code != 201:
        raise _remote_create_error(response.json())
    return HttpExecutor(client, session_id)


def _remote_create_error(body: dict) -> PlanningError:
    err = PlanningError(body.get("message", "session create failed"), body.get("detail"))
    err.code = body.get("code", "PLANNING_ERROR")
    return err


@main.command()
@click.option("--config", "config_path", type=click.Path(path_type=Path), default=None)
def serve(config_path) -> None:
    """Run the planning service until interrupted."""
    import uvicorn

    from .server import create_app

    try:
        config = load_config(config_path)
    except ValueError as err:
        click.echo(str(err), err=True)
        sys.exit(1)
    app = create_app(config)
    try:
        uvicorn.run(app, host=config.host, port=config.port, log_level="warning")
    except (OSError, ValueError) as err:
        click.echo(f"cannot serve: {err}", err=True)
        sys.exit(1)


if __name__ == "__main__":
    main()
