"""ECGI score: Shannon entropy (bits) of the 256-bin histogram of G."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import EmptyImage, InvalidPmf
from .gradient import color_gradient
from .highlights import (HighlightParams, apply_mask, complemental_value,
                         highlight_mask)
from .imaging import to_luminance

N_BINS = 256
PMF_SUM_TOL = 1e-6


def quantize(G: np.ndarray, quant_max: float = 1.0) -> np.ndarray:
    """256-bin PMF of G over the fixed range [0, quant_max], values clamped."""
    G = np.asarray(G, dtype=np.float64)
    if G.size == 0:
        raise EmptyImage("gradient image has no pixels")
    if quant_max <= 0:
        raise ValueError("quant_max must be positive")
    idx = np.floor(np.clip(G, 0.0, quant_max) / quant_max * N_BINS).astype(np.int64)
    counts = np.bincount(np.minimum(idx, N_BINS - 1).ravel(), minlength=N_BINS)
    return counts / G.size


def entropy(pmf) -> float:
    """Entropy in bits, with 0 log 0 = 0."""
    pmf = np.asarray(pmf, dtype=np.float64)
    if np.any(pmf < 0):
        raise InvalidPmf("negative probability")
    if abs(pmf.sum() - 1.0) > PMF_SUM_TOL:
        raise InvalidPmf(f"probabilities sum to {pmf.sum():.9g}")
    nz = pmf[pmf > 0]
    return float(-np.sum(nz * np.log2(nz)) + 0.0)


@dataclass
class EcgiResult:
    score: float
    pmf: np.ndarray
    complemental_value: float
    mask_pixel_count: int
    params: HighlightParams
    quant_max: float = 1.0
    gradient: np.ndarray | None = field(default=None, repr=False)  # F
    final: np.ndarray | None = field(default=None, repr=False)  # G
    mask: np.ndarray | None = field(default=None, repr=False)
    regions: list = field(default_factory=list, repr=False)


def ecgi_score(img: np.ndarray, params: HighlightParams = HighlightParams(),
               quant_max: float = 1.0, suppress: bool = True) -> EcgiResult:
    """Score one normalized RGB image.

    With ``suppress=False`` the mask is empty and G equals F.
    """
    F = color_gradient(img)
    c = complemental_value(F)
    if suppress:
        mask, regions = highlight_mask(F, to_luminance(img), params)
    else:
        mask, regions = np.zeros(F.shape, dtype=bool), []
    G = apply_mask(F, mask, c)
    pmf = quantize(G, quant_max)
    return EcgiResult(
        score=entropy(pmf),
        pmf=pmf,
        complemental_value=c,
        mask_pixel_count=int(mask.sum()),
        params=params,
        quant_max=quant_max,
        gradient=F,
        final=G,
        mask=mask,
        regions=regions,
    )


def write_pmf_tsv(path_or_file, pmf, quant_max: float = 1.0) -> None:
    """256 headerless rows of ``bin_index, bin_left_edge, probability``."""
    lines = [f"{i}\t{i * quant_max / N_BINS:.8f}\t{float(prob)!r}" for i, prob in enumerate(pmf)]
    text = "\n".join(lines) + "\n"
    if hasattr(path_or_file, "write"):
        path_or_file.write(text)
    else:
        with open(path_or_file, "w") as fh:
            fh.write(text)
