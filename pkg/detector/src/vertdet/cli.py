"""Command-line front end: `detect` emits box files, `eval` scores them."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .bboxio import Detection, emit_bbox_file, load_bbox_file
from .errors import BoxFileError, EmptyTruth
from .metrics import evaluate
from .stub import stub_detect


def _load_image(path: Path) -> np.ndarray:
    if path.suffix == ".npy":
        arr = np.load(path)
        if arr.ndim != 2:
            raise ValueError(f"{path}: expected a 2-D array, got shape {arr.shape}")
        return arr
    from PIL import Image

    with Image.open(path) as img:
        return np.asarray(img.convert("L"))


def _cmd_detect(args: argparse.Namespace) -> int:
    image_path = Path(args.image)
    outdir = Path(args.outdir)
    boxes = stub_detect(_load_image(image_path), threshold=args.threshold)
    out = emit_bbox_file(boxes, image_path.stem, outdir)
    print(f"{out}: {len(boxes)} box(es)")
    return 0


def _read_dir(dirpath: Path) -> dict[str, list[Detection]]:
    result = {}
    for path in sorted(dirpath.glob("*.txt")):
        result[path.stem] = load_bbox_file(path)
    return result


def _cmd_eval(args: argparse.Namespace) -> int:
    truths = _read_dir(Path(args.truth))
    pred_files = _read_dir(Path(args.pred))
    # every image with truth is scored; predictions for unknown images count as misses
    predictions = {stem: pred_files.get(stem, []) for stem in truths}
    for stem, boxes in pred_files.items():
        predictions.setdefault(stem, boxes)
    report = evaluate(predictions, truths)
    print(json.dumps(report.to_dict(), indent=2))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="vertdet", description="Vertebra detector tools")
    sub = parser.add_subparsers(dest="command", required=True)

    detect = sub.add_parser("detect", help="detect boxes in one image, write <stem>.txt")
    detect.add_argument("--image", required=True, help="input image (common raster formats or .npy)")
    detect.add_argument("--outdir", required=True, help="directory for the box file")
    detect.add_argument("--threshold", type=float, default=0.5, help="intensity cutoff in [0,1]")
    detect.set_defaults(func=_cmd_detect)

    ev = sub.add_parser("eval", help="score predicted boxes against ground truth")
    ev.add_argument("--pred", required=True, help="directory of predicted box files")
    ev.add_argument("--truth", required=True, help="directory of ground-truth box files")
    ev.set_defaults(func=_cmd_eval)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (BoxFileError, EmptyTruth, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
