"""Wire API behavior: adapters, error taxonomy, differential against core."""

import random

import pytest
from fastapi.testclient import TestClient

from spineplan.bbox import BBox
from spineplan.config import ServiceConfig
from spineplan.errors import PlanningError
from spineplan.geometry import Point2, ScrewEndpoint, Side, ViewKind
from spineplan.server import create_app
from spineplan.server import schemas
from spineplan.session import (
    ImageMeta,
    add_screw,
    apply_label,
    attach_detections,
    create_session,
    move_endpoint,
    set_orientation,
    validate_session,
)

AP_BOX = {"x1": 100.0, "y1": 200.0, "x2": 180.0, "y2": 260.0, "confidence": 0.9}
LP_BOX = {"x1": 40.0, "y1": 200.0, "x2": 140.0, "y2": 260.0, "confidence": 0.8}


@pytest.fixture
def client():
    return TestClient(create_app())


def make_session(client, sid="s1", w=512, h=512):
    response = client.post(
        "/sessions",
        json={
            "ap": {"image_ref": "ap.png", "width": w, "height": h},
            "lp": {"image_ref": "lp.png", "width": w, "height": h},
            "session_id": sid,
        },
    )
    assert response.status_code == 201, response.text
    return response.json()


def labeled_l4(client, sid="s1"):
    make_session(client, sid)
    client.post(f"/sessions/{sid}/detections", json={"view": "AP", "boxes": [AP_BOX]})
    client.post(f"/sessions/{sid}/detections", json={"view": "LP", "boxes": [LP_BOX]})
    r1 = client.post(
        f"/sessions/{sid}/labels", json={"view": "AP", "u": 110, "v": 210, "label": "L4"}
    )
    r2 = client.post(
        f"/sessions/{sid}/labels", json={"view": "LP", "u": 50, "v": 210, "label": "L4"}
    )
    assert r1.status_code == 200 and r2.status_code == 200
    return sid


class TestCreate:
    def test_valid_pair(self, client):
        body = make_session(client, "fresh")
        assert body["id"] == "fresh"
        assert body["ap"]["view_kind"] == "AP"
        assert body["screws"] == [] and body["labels"] == []

    def test_server_assigns_id_when_absent(self, client):
        response = client.post(
            "/sessions",
            json={
                "ap": {"image_ref": "a", "width": 10, "height": 10},
                "lp": {"image_ref": "b", "width": 10, "height": 10},
            },
        )
        assert response.status_code == 201
        assert response.json()["id"]

    def test_missing_lp_image(self, client):
        response = client.post(
            "/sessions", json={"ap": {"image_ref": "a", "width": 10, "height": 10}}
        )
        assert response.status_code == 422
        assert response.json()["code"] == "VALIDATION_ERROR"

    def test_nonpositive_height(self, client):
        response = client.post(
            "/sessions",
            json={
                "ap": {"image_ref": "a", "width": 10, "height": 0},
                "lp": {"image_ref": "b", "width": 10, "height": 10},
            },
        )
        assert response.status_code == 400
        assert response.json()["code"] == "INVALID_IMAGE"

    def test_unknown_session(self, client):
        response = client.get("/sessions/ghost")
        assert response.status_code == 404
        assert response.json()["code"] == "UNKNOWN_SESSION"

    def test_health(self, client):
        assert client.get("/health").json() == {"status": "ok"}


class TestDetections:
    def test_attach_echoes_boxes(self, client):
        make_session(client)
        response = client.post(
            "/sessions/s1/detections", json={"view": "AP", "boxes": [AP_BOX]}
        )
        assert response.status_code == 200
        assert response.json()["ap_boxes"] == [AP_BOX]
        assert response.json()["lp_boxes"] == []

    def test_out_of_bounds(self, client):
        make_session(client, w=100, h=100)
        response = client.post(
            "/sessions/s1/detections", json={"view": "AP", "boxes": [AP_BOX]}
        )
        assert response.status_code == 400
        assert response.json()["code"] == "OUT_OF_BOUNDS"

    def test_inverted_box(self, client):
        make_session(client)
        bad = dict(AP_BOX, x2=90.0)
        response = client.post(
            "/sessions/s1/detections", json={"view": "AP", "boxes": [bad]}
        )
        assert response.status_code == 400
        assert response.json()["code"] == "INVALID_BOX"


class TestDetectEndpoint:
    def test_stub_detector_attaches_boxes(self, client, stub_detector_cmd):
        app = create_app(ServiceConfig(detector_command=stub_detector_cmd))
        local = TestClient(app)
        make_session(local, "det")
        response = local.post("/sessions/det/detect")
        assert response.status_code == 200
        body = response.json()
        assert len(body["ap_boxes"]) == 3 and len(body["lp_boxes"]) == 3
        snap = local.get("/sessions/det").json()
        assert len(snap["ap"]["boxes"]) == 3

    def test_malformed_detector_output(self, broken_detector_cmd):
        local = TestClient(create_app(ServiceConfig(detector_command=broken_detector_cmd)))
        make_session(local, "det")
        response = local.post("/sessions/det/detect")
        assert response.status_code == 502
        assert response.json()["code"] == "DETECTOR_FAILED"

    def test_missing_precomputed_file(self, tmp_path):
        local = TestClient(create_app(ServiceConfig(bbox_dir=str(tmp_path))))
        make_session(local, "det")
        response = local.post("/sessions/det/detect")
        assert response.status_code == 502

    def test_unconfigured_detector(self, client):
        make_session(client)
        assert client.post("/sessions/s1/detect").status_code == 502


class TestLabels:
    def test_click_inside(self, client):
        make_session(client)
        client.post("/sessions/s1/detections", json={"view": "AP", "boxes": [AP_BOX]})
        response = client.post(
            "/sessions/s1/labels", json={"view": "AP", "u": 110, "v": 210, "label": "L4"}
        )
        assert response.status_code == 200
        body = response.json()
        assert body["box"] == AP_BOX
        assert body["marker"] == {"u": 110.0, "v": 210.0}
        snap = client.get("/sessions/s1").json()
        assert snap["labels"] == [{"view": "AP", "label": "L4", "box": AP_BOX}]

    def test_background_click(self, client):
        make_session(client)
        client.post("/sessions/s1/detections", json={"view": "AP", "boxes": [AP_BOX]})
        response = client.post(
            "/sessions/s1/labels", json={"view": "AP", "u": 5, "v": 5, "label": "L4"}
        )
        assert response.status_code == 409
        assert response.json()["code"] == "NO_MATCHING_BOX"

    def test_box_already_bound(self, client):
        make_session(client)
        client.post("/sessions/s1/detections", json={"view": "AP", "boxes": [AP_BOX]})
        client.post("/sessions/s1/labels", json={"view": "AP", "u": 110, "v": 210, "label": "L4"})
        response = client.post(
            "/sessions/s1/labels", json={"view": "AP", "u": 110, "v": 210, "label": "L5"}
        )
        assert response.status_code == 409
        assert response.json()["code"] == "DUPLICATE_BOX"

    def test_unknown_label(self, client):
        make_session(client)
        client.post("/sessions/s1/detections", json={"view": "AP", "boxes": [AP_BOX]})
        response = client.post(
            "/sessions/s1/labels", json={"view": "AP", "u": 110, "v": 210, "label": "L9"}
        )
        assert response.status_code == 422
        assert response.json()["code"] == "UNKNOWN_LABEL"


class TestScrews:
    def test_default_placement(self, client):
        sid = labeled_l4(client)
        response = client.post(f"/sessions/{sid}/screws", json={"label": "L4", "side": "left"})
        assert response.status_code == 201
        body = response.json()
        assert body["id"] == "L4-left"
        assert body["entry"] == {"x": 124.0, "y": 55.0, "z": 230.0}
        assert body["target"] == {"x": 144.0, "y": 110.0, "z": 230.0}
        assert body["diameter"] == 5.0
        assert body["screw_type"] == "generic-pedicle"

    def test_unpaired_label(self, client):
        make_session(client)
        client.post("/sessions/s1/detections", json={"view": "AP", "boxes": [AP_BOX]})
        client.post("/sessions/s1/labels", json={"view": "AP", "u": 110, "v": 210, "label": "L4"})
        response = client.post("/sessions/s1/screws", json={"label": "L4", "side": "left"})
        assert response.status_code == 409
        assert response.json()["code"] == "UNPAIRED_LABEL"

    def test_duplicate_screw(self, client):
        sid = labeled_l4(client)
        client.post(f"/sessions/{sid}/screws", json={"label": "L4", "side": "left"})
        response = client.post(f"/sessions/{sid}/screws", json={"label": "L4", "side": "left"})
        assert response.status_code == 409
        assert response.json()["code"] == "DUPLICATE_SCREW"

    def test_drag_keeps_views_in_sync(self, client):
        sid = labeled_l4(client)
        client.post(f"/sessions/{sid}/screws", json={"label": "L4", "side": "left"})
        response = client.patch(
            f"/sessions/{sid}/screws/L4-left/endpoint",
            json={"view": "AP", "endpoint": "entry", "u": 130.0, "v": 245.0},
        )
        assert response.status_code == 200
        body = response.json()
        assert body["ap"]["entry"] == {"u": 130.0, "v": 245.0}
        # identical calibrations and captured offset 0: LP v equals AP v
        assert body["lp"]["entry"]["v"] == 245.0

    def test_degenerate_drag(self, client):
        sid = labeled_l4(client)
        created = client.post(
            f"/sessions/{sid}/screws", json={"label": "L4", "side": "left"}
        ).json()
        # collapse entry onto target in LP first, then in AP
        client.patch(
            f"/sessions/{sid}/screws/L4-left/endpoint",
            json={
                "view": "LP",
                "endpoint": "entry",
                "u": created["lp"]["target"]["u"],
                "v": created["lp"]["target"]["v"],
            },
        )
        response = client.patch(
            f"/sessions/{sid}/screws/L4-left/endpoint",
            json={
                "view": "AP",
                "endpoint": "entry",
                "u": created["ap"]["target"]["u"],
                "v": created["ap"]["target"]["v"],
            },
        )
        assert response.status_code == 422
        assert response.json()["code"] == "DEGENERATE_SCREW"

    def test_unknown_screw(self, client):
        sid = labeled_l4(client)
        response = client.patch(
            f"/sessions/{sid}/screws/ghost/endpoint",
            json={"view": "AP", "endpoint": "entry", "u": 0, "v": 0},
        )
        assert response.status_code == 404
        assert response.json()["code"] == "UNKNOWN_SCREW"

    def test_params_patch(self, client):
        sid = labeled_l4(client)
        client.post(f"/sessions/{sid}/screws", json={"label": "L4", "side": "left"})
        response = client.patch(
            f"/sessions/{sid}/screws/L4-left/params",
            json={"diameter": 6.5, "screw_type": "cannulated"},
        )
        assert response.status_code == 200
        assert response.json()["diameter"] == 6.5
        assert response.json()["screw_type"] == "cannulated"

    def test_list_includes_silhouettes(self, client):
        sid = labeled_l4(client)
        client.post(f"/sessions/{sid}/screws", json={"label": "L4", "side": "left"})
        rows = client.get(f"/sessions/{sid}/screws").json()
        assert len(rows) == 1
        quad = rows[0]["ap"]["silhouette"]
        assert len(quad) == 4
        assert all(set(p) == {"u", "v"} for p in quad)

    def test_vertical_screw_has_null_lp_silhouette(self, client):
        sid = labeled_l4(client)
        client.post(f"/sessions/{sid}/screws", json={"label": "L4", "side": "left"})
        # pull the entry to sit directly above the target in LP
        created = client.get(f"/sessions/{sid}/screws").json()[0]
        client.patch(
            f"/sessions/{sid}/screws/L4-left/endpoint",
            json={
                "view": "LP",
                "endpoint": "entry",
                "u": created["lp"]["target"]["u"],
                "v": created["lp"]["target"]["v"] - 20.0,
            },
        )
        rows = client.get(f"/sessions/{sid}/screws").json()
        assert rows[0]["lp"]["silhouette"] is not None
        assert rows[0]["ap"]["silhouette"] is not None


class TestPlan:
    def test_export(self, client):
        sid = labeled_l4(client)
        client.post(f"/sessions/{sid}/screws", json={"label": "L4", "side": "left"})
        response = client.get(f"/sessions/{sid}/plan")
        assert response.status_code == 200
        assert response.headers["content-type"].startswith("text/plain")
        assert '"format": "spine-plan/1"' in response.text

    def test_empty_plan(self, client):
        make_session(client)
        response = client.get("/sessions/s1/plan")
        assert response.status_code == 409
        assert response.json()["code"] == "EMPTY_PLAN"

    def test_repeated_export_identical(self, client):
        sid = labeled_l4(client)
        client.post(f"/sessions/{sid}/screws", json={"label": "L4", "side": "left"})
        first = client.get(f"/sessions/{sid}/plan").text
        second = client.get(f"/sessions/{sid}/plan").text
        assert first == second


class TestOrientationEndpoint:
    def test_rotation_transforms_snapshot(self, client):
        make_session(client, w=100, h=100)
        client.post(
            "/sessions/s1/detections",
            json={"view": "AP", "boxes": [{"x1": 10, "y1": 10, "x2": 20, "y2": 20, "confidence": 1.0}]},
        )
        response = client.post(
            "/sessions/s1/orientation", json={"view": "AP", "rotation": 180, "flip": False}
        )
        assert response.status_code == 200
        box = response.json()["ap"]["boxes"][0]
        assert (box["x1"], box["y1"], box["x2"], box["y2"]) == (80, 80, 90, 90)

    def test_invalid_rotation_rejected(self, client):
        make_session(client)
        response = client.post(
            "/sessions/s1/orientation", json={"view": "AP", "rotation": 45, "flip": False}
        )
        assert response.status_code == 422
        assert response.json()["code"] == "VALIDATION_ERROR"


class TestStaticImages:
    def test_fixture_root_served(self, tmp_path):
        (tmp_path / "ap.png").write_bytes(b"\x89PNG-ish")
        local = TestClient(create_app(ServiceConfig(fixture_root=str(tmp_path))))
        response = local.get("/images/ap.png")
        assert response.status_code == 200
        assert response.content == b"\x89PNG-ish"


GRID_BOXES = {
    view: [
        BBox(10 + 120 * col, 10 + 120 * row, 100 + 120 * col, 100 + 120 * row, 0.5 + 0.1 * col)
        for row in range(4)
        for col in range(4)
    ]
    for view in ViewKind
}
LABEL_POOL = ["L1", "L2", "L3", "L4", "L5", "T12"]


def box_payload(b: BBox) -> dict:
    return {"x1": b.x1, "y1": b.y1, "x2": b.x2, "y2": b.y2, "confidence": b.confidence}


class TestDifferential:
    """Random op sequences through the API equal direct core calls."""

    def test_adapter_equivalence(self, client):
        rng = random.Random(20260815)
        for trial in range(8):
            sid = f"diff-{trial}"
            make_session(client, sid)
            session = create_session(
                ImageMeta("ap.png", 512, 512), ImageMeta("lp.png", 512, 512), sid
            )
            for _ in range(40):
                session = self._step(rng, client, sid, session)
                validate_session(session)
            server_snap = client.get(f"/sessions/{sid}").json()
            local_snap = schemas.snapshot(session).model_dump(mode="json")
            assert server_snap == local_snap

    def _step(self, rng, client, sid, session):
        op = rng.choice(["attach", "orient", "label", "screw", "move"])
        view = rng.choice(list(ViewKind))
        if op == "attach":
            boxes = rng.sample(GRID_BOXES[view], k=rng.randrange(0, 5))
            expected, session = self._apply(
                attach_detections, session, view, boxes
            )
            response = client.post(
                f"/sessions/{sid}/detections",
                json={"view": view.value, "boxes": [box_payload(b) for b in boxes]},
            )
        elif op == "orient":
            rotation = rng.choice([0, 90, 180, 270])
            flip = rng.random() < 0.5
            expected, session = self._apply(
                set_orientation, session, view, rotation, flip
            )
            response = client.post(
                f"/sessions/{sid}/orientation",
                json={"view": view.value, "rotation": rotation, "flip": flip},
            )
        elif op == "label":
            if rng.random() < 0.75 and session.view(view).boxes:
                box = rng.choice(session.view(view).boxes)
                u, v = (box.x1 + box.x2) / 2, (box.y1 + box.y2) / 2
            else:
                u, v = 5.0, 5.0  # background
            label = rng.choice(LABEL_POOL)

            def do_label(s):
                s2, _ = apply_label(s, view, Point2(u, v), label)
                return s2

            expected, session = self._apply(do_label, session)
            response = client.post(
                f"/sessions/{sid}/labels",
                json={"view": view.value, "u": u, "v": v, "label": label},
            )
        elif op == "screw":
            label = rng.choice(LABEL_POOL)
            side = rng.choice(list(Side))

            def do_add(s):
                s2, _ = add_screw(s, label, side)
                return s2

            expected, session = self._apply(do_add, session)
            response = client.post(
                f"/sessions/{sid}/screws", json={"label": label, "side": side.value}
            )
        else:
            screw_id = (
                rng.choice([s.id for s in session.screws])
                if session.screws and rng.random() < 0.8
                else "ghost"
            )
            endpoint = rng.choice(list(ScrewEndpoint))
            u, v = rng.uniform(0, 512), rng.uniform(0, 512)
            expected, session = self._apply(
                move_endpoint, session, screw_id, view, endpoint, Point2(u, v)
            )
            response = client.patch(
                f"/sessions/{sid}/screws/{screw_id}/endpoint",
                json={"view": view.value, "endpoint": endpoint.value, "u": u, "v": v},
            )
        if expected is None:
            assert response.status_code < 400, response.text
        else:
            assert response.status_code >= 400
            assert response.json()["code"] == expected
        return session

    @staticmethod
    def _apply(fn, session, *args):
        """Run a core op; return (error code or None, new session)."""
        try:
            return None, fn(session, *args)
        except PlanningError as err:
            return err.code, session
