"""Entropy of color gradients image (ECGI): an objective score for color
images built from the Di Zenzo gradient field with specular highlights
suppressed, plus paired statistics for comparing two imaging conditions.
"""
from .errors import EcgiError
from .gradient import color_gradient
from .highlights import HighlightParams
from .imaging import RoiRect, crop_roi, load_image, to_luminance
from .paired import PairScore, paired_t_test, summarize
from .scoring import EcgiResult, ecgi_score, entropy, quantize

__all__ = [
    "EcgiError", "EcgiResult", "HighlightParams", "PairScore", "RoiRect",
    "color_gradient", "crop_roi", "ecgi_score", "entropy", "load_image",
    "paired_t_test", "quantize", "summarize", "to_luminance",
]
