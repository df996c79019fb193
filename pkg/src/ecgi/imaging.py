"""Image ingestion: decoding, unit normalization, ROI cropping, luminance.

Images are plain ``(H, W, 3)`` float64 arrays in RGB order with values in
[0, 1]. Arrays returned by :func:`load_image` are read-only.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import cv2
import numpy as np

from .errors import RoiOutOfBounds, TooSmall, UnreadableFile, UnsupportedFormat

MIN_SIZE = 3
REC601 = np.array([0.299, 0.587, 0.114])


@dataclass(frozen=True)
class RoiRect:
    """Axis-aligned rectangle; ``x``/``y`` are column/row offsets."""

    x: int
    y: int
    w: int
    h: int

    @classmethod
    def parse(cls, text: str) -> "RoiRect":
        """Parse ``"x,y,w,h"``."""
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != 4:
            raise ValueError(f"expected x,y,w,h but got {text!r}")
        return cls(*(int(p) for p in parts))

    def validate(self, width: int, height: int) -> None:
        if self.x < 0 or self.y < 0:
            raise RoiOutOfBounds(f"negative ROI offset in {self}")
        if self.w < MIN_SIZE or self.h < MIN_SIZE:
            raise RoiOutOfBounds(f"ROI {self} smaller than {MIN_SIZE}x{MIN_SIZE}")
        if self.x + self.w > width or self.y + self.h > height:
            raise RoiOutOfBounds(f"ROI {self} exceeds {width}x{height} image")


def check_image(img: np.ndarray) -> None:
    if img.ndim != 3 or img.shape[2] != 3:
        raise UnsupportedFormat(f"expected an (H, W, 3) image, got shape {img.shape}")
    if img.shape[0] < MIN_SIZE or img.shape[1] < MIN_SIZE:
        raise TooSmall(f"image is {img.shape[1]}x{img.shape[0]}, minimum is 3x3")


def normalize(raw: np.ndarray) -> np.ndarray:
    """Scale an integer RGB(A) array to [0, 1] by its dtype's max code value."""
    if raw.ndim != 3 or raw.shape[2] < 3:
        raise UnsupportedFormat("grayscale or fewer than 3 channels")
    if raw.dtype == np.uint8:
        scale = 255.0
    elif raw.dtype == np.uint16:
        scale = 65535.0
    else:
        raise UnsupportedFormat(f"unsupported sample type {raw.dtype}")
    img = raw[:, :, :3].astype(np.float64) / scale
    check_image(img)
    return img


def load_image(path) -> np.ndarray:
    """Decode a PNG/JPEG/BMP file into a read-only normalized RGB array.

    Alpha is dropped; 8-bit codes map to v/255 and 16-bit codes to v/65535.
    """
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise UnreadableFile(f"{path}: {exc.strerror or exc}") from exc
    raw = cv2.imdecode(np.frombuffer(data, np.uint8), cv2.IMREAD_UNCHANGED)
    if raw is None:
        raise UnsupportedFormat(f"{path}: could not decode image")
    if raw.ndim == 3 and raw.shape[2] >= 3:
        # OpenCV hands back BGR(A)
        raw = raw[:, :, 2::-1]
    try:
        img = normalize(raw)
    except (UnsupportedFormat, TooSmall) as exc:
        raise type(exc)(f"{path}: {exc}") from None
    img.flags.writeable = False
    return img


def save_image(path, img: np.ndarray) -> None:
    """Write a normalized RGB array as 8-bit (rounded half-up)."""
    codes = np.floor(np.clip(img, 0.0, 1.0) * 255.0 + 0.5).astype(np.uint8)
    if codes.ndim == 3:
        codes = codes[:, :, ::-1]
    if not cv2.imwrite(str(path), codes):
        raise UnreadableFile(f"{path}: could not write image")


def crop_roi(img: np.ndarray, roi: RoiRect) -> np.ndarray:
    check_image(img)
    roi.validate(img.shape[1], img.shape[0])
    return img[roi.y:roi.y + roi.h, roi.x:roi.x + roi.w]


def to_luminance(img: np.ndarray) -> np.ndarray:
    """Rec. 601 luma, bounded in [0, 1] for valid inputs."""
    return img @ REC601
