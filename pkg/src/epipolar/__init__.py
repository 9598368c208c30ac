"""Exact existence tests for fundamental and essential matrices from point correspondences."""

from .common import CorrespondenceSet, Tolerances, Verdict
from .essential import decide_essential, is_essential
from .fundamental import decide_fundamental

__all__ = [
    "CorrespondenceSet",
    "Tolerances",
    "Verdict",
    "decide_essential",
    "decide_fundamental",
    "is_essential",
]
__version__ = "0.1.0"
