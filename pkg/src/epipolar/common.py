"""Shared value types: correspondences, verdicts and tolerance settings."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

from .errors import DimensionError
from .linalg import RationalMatrix, homogenize, kron_row, stack


class Verdict(str, enum.Enum):
    EXISTS = "EXISTS"
    NOT_EXISTS = "NOT_EXISTS"
    UNDECIDED = "UNDECIDED"


@dataclass(frozen=True)
class Tolerances:
    """Numerical thresholds. Only witnesses use them; verdicts are exact."""

    tol_res: float = 1e-8   # epipolar residual of a unit max-entry matrix
    tol_rank: float = 1e-9  # singular value ratio
    grid_radius: int = 3


@dataclass(frozen=True)
class CorrespondenceSet:
    """Point pairs ``(x_i, y_i)`` stored as homogeneous 3-vectors with last entry 1."""

    pairs: tuple

    def __post_init__(self):
        if not self.pairs:
            raise DimensionError("need at least one correspondence")
        for x, y in self.pairs:
            if len(x) != 3 or len(y) != 3 or x[2] != 1 or y[2] != 1:
                raise DimensionError("points must be affine (homogeneous coordinate 1)")

    @classmethod
    def from_affine(cls, pairs: Sequence) -> "CorrespondenceSet":
        """Build from ``[((x1, x2), (y1, y2)), ...]`` with exact rational entries."""
        return cls(tuple((homogenize(*x), homogenize(*y)) for x, y in pairs))

    @classmethod
    def from_xy(cls, xs: Sequence, ys: Sequence) -> "CorrespondenceSet":
        if len(xs) != len(ys):
            raise DimensionError("x and y lists differ in length")
        return cls.from_affine(list(zip(xs, ys)))

    @property
    def m(self) -> int:
        return len(self.pairs)

    @property
    def xs(self) -> list:
        return [p[0] for p in self.pairs]

    @property
    def ys(self) -> list:
        return [p[1] for p in self.pairs]

    @cached_property
    def X(self) -> RationalMatrix:
        return stack(self.xs)

    @cached_property
    def Y(self) -> RationalMatrix:
        return stack(self.ys)

    @cached_property
    def Z(self) -> RationalMatrix:
        return stack([kron_row(y, x) for x, y in self.pairs])

    def subset(self, indices: Sequence[int]) -> "CorrespondenceSet":
        return CorrespondenceSet(tuple(self.pairs[i] for i in indices))

    def swapped(self) -> "CorrespondenceSet":
        return CorrespondenceSet(tuple((y, x) for x, y in self.pairs))

    def affine(self) -> list:
        return [((x[0], x[1]), (y[0], y[1])) for x, y in self.pairs]
