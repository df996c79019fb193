"""Seeded synthetic scenes for experiments and tests."""
from __future__ import annotations

import csv
from pathlib import Path

import numpy as np
from scipy import ndimage

from .imaging import save_image

MUCOSA = (0.85, 0.6, 0.55)


def random_texture(rng: np.random.Generator, size: int = 128) -> np.ndarray:
    """Contrast-stretched, lightly smoothed RGB noise in [0, 1]."""
    img = ndimage.gaussian_filter(rng.random((size, size, 3)), (1.0, 1.0, 0.0))
    return np.clip((img - img.mean()) * 3.0 + 0.5, 0.0, 1.0)


def box_blur(img: np.ndarray, k: int = 7) -> np.ndarray:
    return ndimage.uniform_filter(img, size=(k, k, 1), mode="nearest")


def mucosa(rng: np.random.Generator, size: int = 64, base=MUCOSA, amplitude: float = 0.08) -> np.ndarray:
    """Low-contrast pinkish tissue texture."""
    noise = ndimage.gaussian_filter(rng.standard_normal((size, size, 3)), (1.5, 1.5, 0.0))
    return np.clip(np.asarray(base) + amplitude * noise / noise.std(), 0.0, 1.0)


def inject_disc(img: np.ndarray, center, radius: float = 4.0, value: float = 1.0) -> np.ndarray:
    """Copy of ``img`` with a saturated disc; ``center`` is (row, col)."""
    out = np.array(img, dtype=np.float64, copy=True)
    yy, xx = np.mgrid[:out.shape[0], :out.shape[1]]
    out[(yy - center[0]) ** 2 + (xx - center[1]) ** 2 <= radius ** 2] = value
    return out


def glint_scene(seed: int = 0, size: int = 64) -> np.ndarray:
    """Tissue texture with one radius-4 saturated disc at the center."""
    rng = np.random.default_rng(seed)
    return inject_disc(mucosa(rng, size), (size // 2, size // 2))


def write_blur_corpus(out_dir, n_pairs: int, size: int = 128, seed: int = 0) -> Path:
    """Write ``n_pairs`` sharp/blurred PNG pairs plus a manifest; returns its path."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    manifest = out_dir / "manifest.csv"
    with open(manifest, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["pair_id", "path_a", "path_b"])
        for i in range(n_pairs):
            img = random_texture(np.random.default_rng(seed + i), size)
            save_image(out_dir / f"p{i:03d}_sharp.png", img)
            save_image(out_dir / f"p{i:03d}_blur.png", box_blur(img))
            w.writerow([f"p{i:03d}", f"p{i:03d}_sharp.png", f"p{i:03d}_blur.png"])
    return manifest
