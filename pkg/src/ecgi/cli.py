"""Command line driver: ``ecgi score | histogram | compare``.

Exit codes: 0 success, 1 input or pipeline error, 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import cv2
import numpy as np

from .errors import EcgiError
from .highlights import HighlightParams, quantize_u8, write_region_csv
from .imaging import RoiRect, crop_roi, load_image
from .paired import PairScore, summarize
from .report import fmt_score, read_manifest, report_csv, report_json, summary_line
from .scoring import EcgiResult, ecgi_score, write_pmf_tsv


class PairFailed(EcgiError):
    pass


@dataclass(frozen=True)
class RunConfig:
    params: HighlightParams = field(default_factory=HighlightParams)
    quant_max: float = 1.0
    suppress: bool = True
    fmt: str = "json"
    dump_gradient: Path | None = None
    dump_mask: Path | None = None
    dump_pmf: Path | None = None
    workers: int = 1
    label_a: str = "LCI"
    label_b: str = "WL"

    def __post_init__(self):
        if self.workers < 1:
            raise ValueError("worker count must be >= 1")
        if self.quant_max <= 0:
            raise ValueError("quant-max must be positive")

    def echo(self) -> dict:
        """Settings that determine the scores; echoed into reports."""
        return {
            "label_a": self.label_a,
            "label_b": self.label_b,
            "highlight_mask": self.suppress,
            "highlight_params": self.params.as_dict(),
            "quant_max": self.quant_max,
            "test": "paired t-test, two-sided",
        }


def score_image(path, roi: RoiRect | None, cfg: RunConfig, stem: str | None = None) -> EcgiResult:
    img = load_image(path)
    if roi is not None:
        img = crop_roi(img, roi)
    result = ecgi_score(img, cfg.params, quant_max=cfg.quant_max, suppress=cfg.suppress)
    dump(result, stem or Path(path).stem, cfg)
    return result


def dump(result: EcgiResult, stem: str, cfg: RunConfig) -> None:
    if cfg.dump_gradient:
        cfg.dump_gradient.mkdir(parents=True, exist_ok=True)
        for tag, plane in (("F", result.gradient), ("G", result.final)):
            plane.astype("<f4").tofile(cfg.dump_gradient / f"{stem}_{tag}.f32")
            cv2.imwrite(str(cfg.dump_gradient / f"{stem}_{tag}.png"), quantize_u8(plane))
    if cfg.dump_mask:
        cfg.dump_mask.mkdir(parents=True, exist_ok=True)
        cv2.imwrite(str(cfg.dump_mask / f"{stem}_mask.png"), result.mask.astype(np.uint8) * 255)
        write_region_csv(cfg.dump_mask / f"{stem}_regions.csv", result.regions)
    if cfg.dump_pmf:
        cfg.dump_pmf.mkdir(parents=True, exist_ok=True)
        write_pmf_tsv(cfg.dump_pmf / f"{stem}_pmf.tsv", result.pmf, cfg.quant_max)


def _score_pair(job) -> PairScore:
    row, cfg = job
    scores = []
    for side, path, roi in (("a", row.path_a, row.roi_a), ("b", row.path_b, row.roi_b)):
        try:
            scores.append(score_image(path, roi, cfg, stem=f"{row.pair_id}_{side}").score)
        except EcgiError as exc:
            raise PairFailed(f"pair {row.pair_id!r} (side {side}): {exc}") from None
    return PairScore(row.pair_id, *scores)


def compare(manifest, cfg: RunConfig):
    """Score every manifest pair; results keep manifest order."""
    rows = read_manifest(manifest)
    jobs = [(row, cfg) for row in rows]
    if cfg.workers == 1 or len(jobs) < 2:
        pairs = [_score_pair(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            pairs = list(pool.map(_score_pair, jobs))
    return summarize(pairs)


def _roi_arg(text):
    try:
        return RoiRect.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _workers_default():
    env = os.environ.get("ECGI_WORKERS")
    if env is None:
        return 1
    try:
        return int(env)
    except ValueError:
        return -1  # rejected by RunConfig as a usage error


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("pipeline")
    g.add_argument("--grad-threshold", type=float, default=0.2,
                   help="gradient validity threshold for MSER members")
    g.add_argument("--area-min", type=int, default=5)
    g.add_argument("--area-max", type=int, default=200)
    g.add_argument("--mser-delta", type=int, default=5)
    g.add_argument("--mser-max-variation", type=float, default=0.25)
    g.add_argument("--closing-radius", type=int, default=1)
    g.add_argument("--lum-threshold", type=float, default=0.8)
    g.add_argument("--quant-max", type=float, default=1.0,
                   help="upper end of the 256-bin quantization range")
    g.add_argument("--no-highlight-mask", action="store_true",
                   help="skip highlight suppression (G = F)")
    d = common.add_argument_group("debug output")
    d.add_argument("--dump-gradient", type=Path, metavar="DIR")
    d.add_argument("--dump-mask", type=Path, metavar="DIR")
    d.add_argument("--dump-pmf", type=Path, metavar="DIR")

    parser = argparse.ArgumentParser(prog="ecgi", description="Entropy of color gradients image scoring.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("score", parents=[common], help="score one image")
    p.add_argument("image", type=Path)
    p.add_argument("--roi", type=_roi_arg, metavar="X,Y,W,H")
    p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("histogram", parents=[common], help="256-bin PMF of G as TSV")
    p.add_argument("image", type=Path)
    p.add_argument("--roi", type=_roi_arg, metavar="X,Y,W,H")
    p.add_argument("--out", type=Path, help="output file (default stdout)")

    p = sub.add_parser("compare", parents=[common], help="paired comparison over a manifest")
    p.add_argument("--manifest", type=Path, required=True)
    p.add_argument("--out", type=Path, help="output file (default stdout)")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--workers", type=int, default=None,
                   help="parallel worker processes (default $ECGI_WORKERS or 1)")
    p.add_argument("--label-a", default="LCI")
    p.add_argument("--label-b", default="WL")
    return parser


def _config(args, parser) -> RunConfig:
    try:
        params = HighlightParams(
            validity_threshold=args.grad_threshold,
            area_min=args.area_min,
            area_max=args.area_max,
            mser_delta=args.mser_delta,
            mser_max_variation=args.mser_max_variation,
            closing_radius=args.closing_radius,
            luminance_threshold=args.lum_threshold,
        )
        workers = getattr(args, "workers", None)
        return RunConfig(
            params=params,
            quant_max=args.quant_max,
            suppress=not args.no_highlight_mask,
            fmt=getattr(args, "format", "json"),
            dump_gradient=args.dump_gradient,
            dump_mask=args.dump_mask,
            dump_pmf=args.dump_pmf,
            workers=_workers_default() if workers is None else workers,
            label_a=getattr(args, "label_a", "LCI"),
            label_b=getattr(args, "label_b", "WL"),
        )
    except ValueError as exc:
        parser.error(str(exc))


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = _config(args, parser)
    try:
        if args.command == "score":
            r = score_image(args.image, args.roi, cfg)
            if cfg.fmt == "json":
                doc = {"score": float(fmt_score(r.score)),
                       "complemental_value": round(r.complemental_value, 6),
                       "mask_pixel_count": r.mask_pixel_count,
                       "config": cfg.echo()}
                sys.stdout.write(json.dumps(doc, indent=2) + "\n")
            else:
                sys.stdout.write(f"score\t{fmt_score(r.score)}\n"
                                 f"complemental_value\t{r.complemental_value:.6f}\n"
                                 f"mask_pixels\t{r.mask_pixel_count}\n")
        elif args.command == "histogram":
            r = score_image(args.image, args.roi, cfg)
            if args.out is None:
                write_pmf_tsv(sys.stdout, r.pmf, cfg.quant_max)
            else:
                write_pmf_tsv(args.out, r.pmf, cfg.quant_max)
        else:
            report = compare(args.manifest, cfg)
            text = report_json(report, cfg.echo()) if cfg.fmt == "json" else report_csv(report)
            _emit(text, args.out)
            print(summary_line(report, cfg.label_a, cfg.label_b), file=sys.stderr)
    except EcgiError as exc:
        print(f"ecgi: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
