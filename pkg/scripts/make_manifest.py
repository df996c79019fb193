"""Build a compare manifest by pairing images with the same stem in two folders.

    python scripts/make_manifest.py LCI/ WL/ -o manifest.csv [--rois rois.csv]

``--rois`` takes a CSV with columns ``stem,side,x,y,w,h`` (side is a or b).
Paths are written relative to the manifest's folder.
"""
import argparse
import csv
import os
import sys
from pathlib import Path

from ecgi.report import MANIFEST_HEADER

IMAGE_SUFFIXES = {".png", ".jpg", ".jpeg", ".bmp"}


def images(folder):
    return {p.stem: p for p in sorted(Path(folder).iterdir()) if p.suffix.lower() in IMAGE_SUFFIXES}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("dir_a", type=Path)
    ap.add_argument("dir_b", type=Path)
    ap.add_argument("-o", "--out", type=Path, required=True)
    ap.add_argument("--rois", type=Path)
    args = ap.parse_args()

    side_a, side_b = images(args.dir_a), images(args.dir_b)
    common = sorted(side_a.keys() & side_b.keys())
    for stem in sorted(side_a.keys() ^ side_b.keys()):
        print(f"unpaired: {stem}", file=sys.stderr)
    rois = {}
    if args.rois:
        with open(args.rois, newline="") as fh:
            for row in csv.DictReader(fh):
                rois[row["stem"], row["side"]] = [row[k] for k in ("x", "y", "w", "h")]

    base = args.out.resolve().parent
    with open(args.out, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(MANIFEST_HEADER)
        for stem in common:
            w.writerow([stem,
                        os.path.relpath(side_a[stem].resolve(), base),
                        os.path.relpath(side_b[stem].resolve(), base),
                        *rois.get((stem, "a"), [""] * 4), *rois.get((stem, "b"), [""] * 4)])
    print(f"{len(common)} pairs -> {args.out}")


if __name__ == "__main__":
    main()
