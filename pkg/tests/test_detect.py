"""External detector integration: command mode, directory mode, faults."""

import shutil

import pytest

from spineplan.config import ServiceConfig
from spineplan.detect import detect_boxes, run_detection
from spineplan.errors import DetectorFailed
from spineplan.session import ImageMeta, create_session
from tests.conftest import FIXTURES


def session():
    return create_session(
        ImageMeta("ap.png", 512, 512), ImageMeta("lp.png", 512, 512), "det"
    )


class TestCommandMode:
    def test_boxes_detected_and_attached(self, stub_detector_cmd):
        cfg = ServiceConfig(detector_command=stub_detector_cmd)
        s = run_detection(session(), cfg)
        assert len(s.ap.boxes) == 3 and len(s.lp.boxes) == 3
        assert s.ap.boxes[1].confidence == 0.94

    def test_nonzero_exit(self, crashing_detector_cmd):
        cfg = ServiceConfig(detector_command=crashing_detector_cmd)
        with pytest.raises(DetectorFailed) as err:
            detect_boxes("ap.png", cfg)
        assert err.value.detail["exit_status"] == 3

    def test_malformed_output(self, broken_detector_cmd):
        cfg = ServiceConfig(detector_command=broken_detector_cmd)
        with pytest.raises(DetectorFailed) as err:
            detect_boxes("ap.png", cfg)
        assert "malformed" in err.value.message

    def test_missing_output_file(self, tmp_path):
        import sys

        script = tmp_path / "noop.py"
        script.write_text("pass\n")
        cfg = ServiceConfig(detector_command=f"{sys.executable} {script} {{image}} {{outdir}}")
        with pytest.raises(DetectorFailed):
            detect_boxes("ap.png", cfg)

    def test_unrunnable_command(self):
        cfg = ServiceConfig(detector_command="/does/not/exist {image} {outdir}")
        with pytest.raises(DetectorFailed):
            detect_boxes("ap.png", cfg)

    def test_image_resolved_under_fixture_root(self, tmp_path):
        import sys

        # detector that fails unless the image path it gets exists
        script = tmp_path / "strict.py"
        script.write_text(
            "import pathlib, sys\n"
            "image = pathlib.Path(sys.argv[1])\n"
            "assert image.exists(), image\n"
            "out = pathlib.Path(sys.argv[2]) / (image.stem + '.txt')\n"
            "out.write_text('1.0 2.0 3.0 4.0 0.5\\n')\n"
        )
        (tmp_path / "ap.png").write_bytes(b"")
        cfg = ServiceConfig(
            detector_command=f"{sys.executable} {script} {{image}} {{outdir}}",
            fixture_root=str(tmp_path),
        )
        assert len(detect_boxes("ap.png", cfg)) == 1


class TestDirectoryMode:
    def test_precomputed_boxes(self):
        cfg = ServiceConfig(bbox_dir=str(FIXTURES))
        s = run_detection(session(), cfg)
        assert len(s.ap.boxes) == 3 and len(s.lp.boxes) == 3

    def test_missing_file(self, tmp_path):
        cfg = ServiceConfig(bbox_dir=str(tmp_path))
        with pytest.raises(DetectorFailed):
            detect_boxes("ap.png", cfg)

    def test_command_takes_precedence(self, stub_detector_cmd, tmp_path):
        cfg = ServiceConfig(detector_command=stub_detector_cmd, bbox_dir=str(tmp_path))
        assert detect_boxes("ap.png", cfg)


class TestFaults:
    def test_unconfigured(self):
        with pytest.raises(DetectorFailed):
            detect_boxes("ap.png", ServiceConfig())

    def test_out_of_bounds_box_is_detector_fault(self, tmp_path):
        (tmp_path / "ap.txt").write_text("0.0 0.0 600.0 600.0 0.9\n")
        shutil.copy(FIXTURES / "lp.txt", tmp_path / "lp.txt")
        cfg = ServiceConfig(bbox_dir=str(tmp_path))
        with pytest.raises(DetectorFailed):
            run_detection(session(), cfg)

    def test_second_view_failure_leaves_session_untouched(self, tmp_path):
        shutil.copy(FIXTURES / "ap.txt", tmp_path / "ap.txt")  # no lp.txt
        cfg = ServiceConfig(bbox_dir=str(tmp_path))
        s = session()
        with pytest.raises(DetectorFailed):
            run_detection(s, cfg)
        assert s.ap.boxes == () and s.lp.boxes == ()
