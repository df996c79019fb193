"""Specular highlight suppression on the gradient field.

Glints produce rims of spuriously high gradient. They are found as bright
MSER regions of the quantized gradient field, rasterized, closed, split
into 8-connected components, and screened by the mean luminance of the
source image under each component. Pixels in kept components get the
complemental value, the mean gradient over pixels with 0 < F < 0.2.
"""
from __future__ import annotations

import csv
from dataclasses import asdict, dataclass

import numpy as np
from scipy import ndimage

from .errors import DimensionMismatch
from .mser import detect_bright_regions

COMPLEMENT_UPPER = 0.2
EIGHT_CONNECTED = np.ones((3, 3), dtype=bool)


@dataclass(frozen=True)
class HighlightParams:
    validity_threshold: float = 0.2
    area_min: int = 5
    area_max: int = 200
    mser_delta: int = 5
    mser_max_variation: float = 0.25
    closing_radius: int = 1
    luminance_threshold: float = 0.8

    def __post_init__(self):
        # 1.0 is admitted so that suppression can be switched off through the threshold
        if not 0.0 < self.validity_threshold <= 1.0:
            raise ValueError("validity_threshold must lie in (0, 1]")
        if not 0 < self.area_min <= self.area_max:
            raise ValueError("need 0 < area_min <= area_max")
        if self.mser_delta < 1:
            raise ValueError("mser_delta must be >= 1")
        if self.mser_max_variation < 0:
            raise ValueError("mser_max_variation must be >= 0")
        if self.closing_radius < 0:
            raise ValueError("closing_radius must be >= 0")
        if not 0.0 <= self.luminance_threshold <= 1.0:
            raise ValueError("luminance_threshold must lie in [0, 1]")

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class RegionProperties:
    label: int
    area: int
    bbox: tuple  # (x, y, w, h)
    centroid: tuple  # (x, y)
    mean_gradient: float
    mean_luminance: float
    kept: bool


def quantize_u8(field: np.ndarray) -> np.ndarray:
    """Clamp to [0, 1], scale by 255 and round half up."""
    return np.floor(np.clip(field, 0.0, 1.0) * 255.0 + 0.5).astype(np.uint8)


def detect_mser_regions(F: np.ndarray, p: HighlightParams = HighlightParams()) -> list:
    """Bright MSER regions of F whose every pixel exceeds the validity threshold.

    Each region is returned as an array of flat pixel indices. Validity is
    tested on F clamped to [0, 1], the same range the detector sees.
    """
    q = quantize_u8(F)
    tree, nodes = detect_bright_regions(q, delta=p.mser_delta,
                                        max_variation=p.mser_max_variation,
                                        min_area=p.area_min, max_area=p.area_max)
    seen = np.clip(F, 0.0, 1.0).ravel()
    regions = []
    for node in nodes:
        pix = tree.pixels(node)
        if seen[pix].min() > p.validity_threshold:
            regions.append(pix)
    return regions


def build_mask(regions, shape) -> np.ndarray:
    mask = np.zeros(shape, dtype=bool)
    flat = mask.reshape(-1)
    for pix in regions:
        flat[np.asarray(pix, dtype=np.int64)] = True
    return mask


def morphological_close(mask: np.ndarray, radius: int) -> np.ndarray:
    """Closing with a (2r+1)^2 square.

    Dilation sees false beyond the border and erosion sees true, which keeps
    the closing extensive and idempotent on a bounded raster.
    """
    mask = np.asarray(mask, dtype=bool)
    if radius == 0:
        return mask.copy()
    se = np.ones((2 * radius + 1, 2 * radius + 1), dtype=bool)
    grown = ndimage.binary_dilation(mask, structure=se, border_value=0)
    return ndimage.binary_erosion(grown, structure=se, border_value=1)


def screen_components(mask, F, lum, p: HighlightParams = HighlightParams()):
    """Keep 8-connected components whose mean source luminance is bright enough.

    Returns the mask of kept components and properties of every component.
    """
    if not (np.shape(mask) == np.shape(F) == np.shape(lum)):
        raise DimensionMismatch("mask, gradient and luminance shapes differ")
    labels, count = ndimage.label(mask, structure=EIGHT_CONNECTED)
    kept = np.zeros(np.shape(mask), dtype=bool)
    props = []
    for label, sl in enumerate(ndimage.find_objects(labels), start=1):
        region = labels[sl] == label
        ys, xs = np.nonzero(region)
        mean_lum = float(lum[sl][region].mean())
        keep = mean_lum >= p.luminance_threshold
        if keep:
            kept[sl] |= region
        props.append(RegionProperties(
            label=label,
            area=int(region.sum()),
            bbox=(sl[1].start, sl[0].start, sl[1].stop - sl[1].start, sl[0].stop - sl[0].start),
            centroid=(float(xs.mean() + sl[1].start), float(ys.mean() + sl[0].start)),
            mean_gradient=float(F[sl][region].mean()),
            mean_luminance=mean_lum,
            kept=keep,
        ))
    return kept, props


def complemental_value(F: np.ndarray) -> float:
    """Mean of F over 0 < F < 0.2; 0 when no pixel qualifies."""
    sel = F[(F > 0.0) & (F < COMPLEMENT_UPPER)]
    return float(sel.mean()) if sel.size else 0.0


def apply_mask(F: np.ndarray, mask: np.ndarray, c: float) -> np.ndarray:
    if np.shape(F) != np.shape(mask):
        raise DimensionMismatch(f"gradient {np.shape(F)} vs mask {np.shape(mask)}")
    return np.where(mask, c, F)


def highlight_mask(F, lum, p: HighlightParams = HighlightParams()):
    """Full detection chain; returns ``(mask, region_properties)``."""
    regions = detect_mser_regions(F, p)
    closed = morphological_close(build_mask(regions, F.shape), p.closing_radius)
    return screen_components(closed, F, lum, p)


def write_region_csv(path, props) -> None:
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh, lineterminator="\n")
        out.writerow(["component_id", "area", "bbox_x", "bbox_y", "bbox_w", "bbox_h",
                      "centroid_x", "centroid_y", "mean_gradient", "mean_luminance", "kept"])
        for r in props:
            out.writerow([r.label, r.area, *r.bbox, f"{r.centroid[0]:.4f}", f"{r.centroid[1]:.4f}",
                          f"{r.mean_gradient:.6f}", f"{r.mean_luminance:.6f}", int(r.kept)])
