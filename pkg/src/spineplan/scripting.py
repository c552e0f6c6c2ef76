"""Plan scripts: line-oriented commands that drive a session headlessly.

Grammar, one command per line (`#` starts a comment, blank lines are
skipped):

    attach <AP|LP> <bbox-file>
    orient <AP|LP> <rotation> [flip]
    label <AP|LP> <u> <v> <vertebra>
    add-screw <vertebra> <left|right>
    move <screw-id> <AP|LP> <entry|target> <u> <v>
    export

``attach`` paths are resolved against the script's directory so fixture
trees stay relocatable.  A script that never says ``export`` exports
implicitly after its last command.

The same parsed script can run against an in-process session
(LocalExecutor) or a live service (HttpExecutor); the two must produce
byte-identical plan documents.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Protocol, Sequence

from .bbox import BBox, load_bbox_file
from .errors import PlanningError, ScriptError
from .geometry import Point2, ScrewEndpoint, Side, ViewKind
from .session import (
    ROTATIONS,
    Session,
    add_screw,
    apply_label,
    attach_detections,
    export_plan,
    move_endpoint,
    set_orientation,
)
from .plandoc import render_plan

VIEW_NAMES = {"AP": ViewKind.AP, "LP": ViewKind.LP}
SIDE_NAMES = {"left": Side.LEFT, "right": Side.RIGHT}
ENDPOINT_NAMES = {"entry": ScrewEndpoint.ENTRY, "target": ScrewEndpoint.TARGET}


@dataclass(frozen=True)
class Command:
    line_no: int


@dataclass(frozen=True)
class AttachCmd(Command):
    view: ViewKind
    path: Path


@dataclass(frozen=True)
class OrientCmd(Command):
    view: ViewKind
    rotation: int
    flip: bool


@dataclass(frozen=True)
class LabelCmd(Command):
    view: ViewKind
    u: float
    v: float
    label: str


@dataclass(frozen=True)
class AddScrewCmd(Command):
    label: str
    side: Side


@dataclass(frozen=True)
class MoveCmd(Command):
    screw_id: str
    view: ViewKind
    endpoint: ScrewEndpoint
    u: float
    v: float


@dataclass(frozen=True)
class ExportCmd(Command):
    pass


def _view(token: str, line_no: int) -> ViewKind:
    if token not in VIEW_NAMES:
        raise ScriptError(line_no, f"unknown view {token!r} (expected AP or LP)")
    return VIEW_NAMES[token]


def _number(token: str, line_no: int) -> float:
    try:
        return float(token)
    except ValueError:
        raise ScriptError(line_no, f"expected a number, got {token!r}") from None


def parse_script(text: str, base_dir: Path | str = ".") -> list[Command]:
    """Parse script text into commands; ScriptError names the bad line."""
    base = Path(base_dir)
    commands: list[Command] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        op, args = tokens[0], tokens[1:]
        if op == "attach":
            if len(args) != 2:
                raise ScriptError(line_no, "attach takes: <AP|LP> <bbox-file>")
            commands.append(
                AttachCmd(line_no, _view(args[0], line_no), base / args[1])
            )
        elif op == "orient":
            if len(args) not in (2, 3) or (len(args) == 3 and args[2] != "flip"):
                raise ScriptError(line_no, "orient takes: <AP|LP> <rotation> [flip]")
            rotation = int(_number(args[1], line_no))
            if rotation not in ROTATIONS:
                raise ScriptError(line_no, f"rotation must be one of {ROTATIONS}")
            commands.append(
                OrientCmd(line_no, _view(args[0], line_no), rotation, len(args) == 3)
            )
        elif op == "label":
            if len(args) != 4:
                raise ScriptError(line_no, "label takes: <AP|LP> <u> <v> <vertebra>")
            commands.append(
                LabelCmd(
                    line_no,
                    _view(args[0], line_no),
                    _number(args[1], line_no),
                    _number(args[2], line_no),
                    args[3],
                )
            )
        elif op == "add-screw":
            if len(args) != 2 or args[1] not in SIDE_NAMES:
                raise ScriptError(line_no, "add-screw takes: <vertebra> <left|right>")
            commands.append(AddScrewCmd(line_no, args[0], SIDE_NAMES[args[1]]))
        elif op == "move":
            if len(args) != 5 or args[2] not in ENDPOINT_NAMES:
                raise ScriptError(
                    line_no, "move takes: <screw-id> <AP|LP> <entry|target> <u> <v>"
                )
            commands.append(
                MoveCmd(
                    line_no,
                    args[0],
                    _view(args[1], line_no),
                    ENDPOINT_NAMES[args[2]],
                    _number(args[3], line_no),
                    _number(args[4], line_no),
                )
            )
        elif op == "export":
            if args:
                raise ScriptError(line_no, "export takes no arguments")
            commands.append(ExportCmd(line_no))
        else:
            raise ScriptError(line_no, f"unknown command {op!r}")
    return commands


class Executor(Protocol):
    """One planning backend; commands hit either a Session or a server."""

    def attach(self, view: ViewKind, boxes: list[BBox]) -> None: ...
    def orient(self, view: ViewKind, rotation: int, flip: bool) -> None: ...
    def label(self, view: ViewKind, u: float, v: float, label: str) -> None: ...
    def add_screw(self, label: str, side: Side) -> None: ...
    def move(
        self, screw_id: str, view: ViewKind, endpoint: ScrewEndpoint, u: float, v: float
    ) -> None: ...
    def export(self) -> str: ...


class LocalExecutor:
    """Runs commands against an in-process Session."""

    def __init__(self, session: Session):
        self.session = session

    def attach(self, view: ViewKind, boxes: list[BBox]) -> None:
        self.session = attach_detections(self.session, view, boxes)

    def orient(self, view: ViewKind, rotation: int, flip: bool) -> None:
        self.session = set_orientation(self.session, view, rotation, flip)

    def label(self, view: ViewKind, u: float, v: float, label: str) -> None:
        self.session, _ = apply_label(self.session, view, Point2(u, v), label)

    def add_screw(self, label: str, side: Side) -> None:
        self.session, _ = add_screw(self.session, label, side)

    def move(
        self, screw_id: str, view: ViewKind, endpoint: ScrewEndpoint, u: float, v: float
    ) -> None:
        self.session = move_endpoint(self.session, screw_id, view, endpoint, Point2(u, v))

    def export(self) -> str:
        return render_plan(export_plan(self.session))


class RemoteError(PlanningError):
    """Service-side error replayed locally; keeps the original code."""

    def __init__(self, code: str, message: str, detail: object = None):
        super().__init__(message, detail)
        self.code = code


class HttpExecutor:
    """Runs commands against a planning service over its wire API.

    ``client`` needs httpx-style post/patch/get; works with httpx.Client
    and with an ASGI test client alike.  The session must already exist.
    """

    def __init__(self, client, session_id: str, base_url: str = ""):
        self.client = client
        self.session_id = session_id
        self.base = f"{base_url}/sessions/{session_id}"

    def _check(self, response):
        if response.status_code >= 400:
            body = response.json()
            raise RemoteError(
                body.get("code", "PLANNING_ERROR"),
                body.get("message", response.text),
                body.get("detail"),
            )
        return response

    def attach(self, view: ViewKind, boxes: list[BBox]) -> None:
        payload = {
            "view": view.value,
            "boxes": [
                {
                    "x1": b.x1,
                    "y1": b.y1,
                    "x2": b.x2,
                    "y2": b.y2,
                    "confidence": b.confidence,
                }
                for b in boxes
            ],
        }
        self._check(self.client.post(f"{self.base}/detections", json=payload))

    def orient(self, view: ViewKind, rotation: int, flip: bool) -> None:
        payload = {"view": view.value, "rotation": rotation, "flip": flip}
        self._check(self.client.post(f"{self.base}/orientation", json=payload))

    def label(self, view: ViewKind, u: float, v: float, label: str) -> None:
        payload = {"view": view.value, "u": u, "v": v, "label": label}
        self._check(self.client.post(f"{self.base}/labels", json=payload))

    def add_screw(self, label: str, side: Side) -> None:
        payload = {"label": label, "side": side.value}
        self._check(self.client.post(f"{self.base}/screws", json=payload))

    def move(
        self, screw_id: str, view: ViewKind, endpoint: ScrewEndpoint, u: float, v: float
    ) -> None:
        payload = {"view": view.value, "endpoint": endpoint.value, "u": u, "v": v}
        self._check(
            self.client.patch(f"{self.base}/screws/{screw_id}/endpoint", json=payload)
        )

    def export(self) -> str:
        return self._check(self.client.get(f"{self.base}/plan")).text


class ScriptExecutionError(Exception):
    """A command failed; carries its position and the domain error code."""

    def __init__(self, index: int, line_no: int, code: str, message: str):
        super().__init__(f"command {index} (line {line_no}): [{code}] {message}")
        self.index = index
        self.line_no = line_no
        self.code = code
        self.reason = message


def run_script(commands: Sequence[Command], executor: Executor) -> str:
    """Execute commands in order; return the exported plan text.

    Bbox files named by ``attach`` are read here so a missing or corrupt
    file fails as that command.  If the script has no explicit export,
    one is appended.
    """
    plan_text: str | None = None
    for index, cmd in enumerate(commands, start=1):
        try:
            if isinstance(cmd, AttachCmd):
                executor.attach(cmd.view, load_bbox_file(cmd.path))
            elif isinstance(cmd, OrientCmd):
                executor.orient(cmd.view, cmd.rotation, cmd.flip)
            elif isinstance(cmd, LabelCmd):
                executor.label(cmd.view, cmd.u, cmd.v, cmd.label)
            elif isinstance(cmd, AddScrewCmd):
                executor.add_screw(cmd.label, cmd.side)
            elif isinstance(cmd, MoveCmd):
                executor.move(cmd.screw_id, cmd.view, cmd.endpoint, cmd.u, cmd.v)
            elif isinstance(cmd, ExportCmd):
                plan_text = executor.export()
            else:  # pragma: no cover - parse_script never emits others
                raise TypeError(f"unhandled command {cmd!r}")
        except PlanningError as err:
            raise ScriptExecutionError(index, cmd.line_no, err.code, err.message) from err
        except OSError as err:
            raise ScriptExecutionError(index, cmd.line_no, "IO_ERROR", str(err)) from err
    if plan_text is None:
        try:
            plan_text = executor.export()
        except PlanningError as err:
            last = len(commands)
            line = commands[-1].line_no if commands else 0
            raise ScriptExecutionError(last, line, err.code, err.message) from err
    return plan_text
