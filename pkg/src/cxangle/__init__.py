"""Complex angles between vectors of complex normed spaces."""

from .angle_core import (
    NormedSpace,
    angle,
    cosine,
    gauge_space,
    gproduct,
    gram_space,
    l2_space,
    linf_space,
    lp_space,
)
from .cxfn import carccos, carcsin, ccos, csin
from .gauge import GeneratorSet, atomic_gauge, sr_generators

__version__ = "0.1.0"

__all__ = [
    "NormedSpace",
    "GeneratorSet",
    "angle",
    "atomic_gauge",
    "carccos",
    "carcsin",
    "ccos",
    "cosine",
    "csin",
    "gauge_space",
    "gproduct",
    "gram_space",
    "l2_space",
    "linf_space",
    "lp_space",
    "sr_generators",
]
