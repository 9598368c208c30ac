"""Worked examples transcribed as exact affine coordinates."""

from fractions import Fraction as F

RANK_ONE_AND_THREE = {
    "x": [(F(1, 5), -1), (-1, -7), (F(-1, 2), 0), (-2, -12), (F(-57, 4), 8), (2, 8), (0, F(-1, 9))],
    "y": [(0, 1), (1, 0), (2, 5), (3, F(-5, 12)), (4, 7), (5, F(-11, 8)), (6, 9)],
    "kernel": [
        [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
        [[0, 1, 2], [5, 4, -2], [-15, 3, 11]],
    ],
}

CUBE_WITH_RANK_TWO = {
    "x": [(-1, 0), (-3, 0), (6, 3), (0, 1), (2, 2), (0, F(1, 2)), (F(1, 2), 1)],
    "y": [(1, 0), (F(1, 3), 0), (F(1, 3), -1), (1, -1), (F(1, 2), -1), (4, -2), (2, -2)],
    "kernel": [
        [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
        [[0, 1, 0], [0, 0, 1], [0, 0, 0]],
    ],
}

FIVE_POINTS_NO_REAL_E = {
    "x": [(3, 0), (9, 1), (1, 2), (8, 8), (4, 8)],
    "y": [(2, 0), (5, 4), (9, 6), (2, 5), (1, 4)],
}


def pairs(example) -> list:
    return [((F(a), F(b)), (F(c), F(d))) for (a, b), (c, d) in zip(example["x"], example["y"])]
