"""Random and constructed correspondence sets for tests and experiments.

All generators take a ``random.Random`` so runs are reproducible from a seed.
Coordinates are small rationals, which keeps exact arithmetic cheap.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .common import CorrespondenceSet
from .linalg import RationalMatrix, are_collinear, homogenize, inverse, skew


@dataclass(frozen=True)
class SamplerConfig:
    span: int = 9      # numerators drawn from [-span, span]
    max_den: int = 4   # denominators drawn from [1, max_den]


def rand_rational(rng: random.Random, cfg: SamplerConfig = SamplerConfig()) -> Fraction:
    return Fraction(rng.randint(-cfg.span, cfg.span), rng.randint(1, cfg.max_den))


def rand_point(rng: random.Random, cfg: SamplerConfig = SamplerConfig()) -> tuple:
    return (rand_rational(rng, cfg), rand_rational(rng, cfg))


def _distinct(points) -> bool:
    return len(set(points)) == len(points)


def general_points(rng: random.Random, n: int, cfg: SamplerConfig = SamplerConfig()) -> list:
    """n distinct affine points with no three collinear."""
    while True:
        pts = [rand_point(rng, cfg) for _ in range(n)]
        hom = [homogenize(*p) for p in pts]
        if _distinct(pts) and not any(are_collinear(t) for t in itertools.combinations(hom, 3)):
            return pts


def points_on_line(rng: random.Random, n: int, cfg: SamplerConfig = SamplerConfig()) -> list:
    """n distinct points on a random affine line."""
    p, q = general_points(rng, 2, cfg)
    ts = rng.sample(range(-3 * cfg.span, 3 * cfg.span + 1), n)
    return [(p[0] + Fraction(t, 3) * (q[0] - p[0]), p[1] + Fraction(t, 3) * (q[1] - p[1]))
            for t in ts]


def one_triple(rng: random.Random, cfg: SamplerConfig = SamplerConfig()) -> list:
    """Four distinct points, exactly three of them collinear, in random order."""
    while True:
        pts = points_on_line(rng, 3, cfg) + [rand_point(rng, cfg)]
        hom = [homogenize(*p) for p in pts]
        if _distinct(pts) and not are_collinear(hom):
            rng.shuffle(pts)
            return pts


def four_points(rng: random.Random, pattern: str, cfg: SamplerConfig = SamplerConfig()) -> list:
    """``pattern`` is ``"general"``, ``"triple"`` or ``"line"``."""
    if pattern == "general":
        return general_points(rng, 4, cfg)
    if pattern == "triple":
        return one_triple(rng, cfg)
    if pattern == "line":
        return points_on_line(rng, 4, cfg)
    raise ValueError(pattern)


def generic_instance(rng: random.Random, m: int, cfg: SamplerConfig = SamplerConfig()) -> CorrespondenceSet:
    return CorrespondenceSet.from_xy([rand_point(rng, cfg) for _ in range(m)],
                                     [rand_point(rng, cfg) for _ in range(m)])


def distinct_instance(rng: random.Random, m: int, cfg: SamplerConfig = SamplerConfig()) -> CorrespondenceSet:
    """m pairs with pairwise distinct x's and pairwise distinct y's."""
    while True:
        xs = [rand_point(rng, cfg) for _ in range(m)]
        ys = [rand_point(rng, cfg) for _ in range(m)]
        if _distinct(xs) and _distinct(ys):
            return CorrespondenceSet.from_xy(xs, ys)


def one_side_collinear(rng: random.Random, side: str = "x", m: int = 6,
                       cfg: SamplerConfig = SamplerConfig()) -> CorrespondenceSet:
    line = points_on_line(rng, m, cfg)
    other = [rand_point(rng, cfg) for _ in range(m)]
    return CorrespondenceSet.from_xy(line, other) if side == "x" else \
        CorrespondenceSet.from_xy(other, line)


def tau_pattern(rng: random.Random, k: int, swapped: bool = False,
                cfg: SamplerConfig = SamplerConfig()) -> tuple:
    """Seven pairs: y's collinear on a k-subset tau, x's equal off tau.

    Returns ``(correspondences, tau)``; with ``swapped`` the roles of x and y
    are exchanged.
    """
    tau = sorted(rng.sample(range(7), k))
    line = iter(points_on_line(rng, k, cfg))
    common = rand_point(rng, cfg)
    xs = [rand_point(rng, cfg) if i in tau else common for i in range(7)]
    ys = [next(line) if i in tau else rand_point(rng, cfg) for i in range(7)]
    if swapped:
        xs, ys = ys, xs
    return CorrespondenceSet.from_xy(xs, ys), tuple(tau)


def cayley_rotation(s: tuple) -> RationalMatrix:
    """Rational rotation ``(I - S)^{-1} (I + S)`` for the skew matrix of s."""
    i3 = RationalMatrix.identity(3)
    k = skew(s)
    return inverse(i3 - k) @ (i3 + k)


def rational_essential(rng: random.Random, cfg: SamplerConfig = SamplerConfig()) -> RationalMatrix:
    """``[t]_x R`` with rational t and R, so the result is exactly essential."""
    while True:
        t = tuple(rand_rational(rng, cfg) for _ in range(3))
        if any(t):
            break
    s = tuple(rand_rational(rng, cfg) for _ in range(3))
    return skew(t) @ cayley_rotation(s)


def float_essential(nrng: np.random.Generator) -> np.ndarray:
    q, r = np.linalg.qr(nrng.normal(size=(3, 3)))
    q = q @ np.diag(np.sign(np.diag(r)))
    if np.linalg.det(q) < 0:
        q[:, 0] *= -1
    t = nrng.normal(size=3)
    tx = np.array([[0, -t[2], t[1]], [t[2], 0, -t[0]], [-t[1], t[0], 0]])
    return tx @ q


def float_with_singular_values(nrng: np.random.Generator, sigmas) -> np.ndarray:
    u, _ = np.linalg.qr(nrng.normal(size=(3, 3)))
    v, _ = np.linalg.qr(nrng.normal(size=(3, 3)))
    return u @ np.diag(sigmas) @ v.T


def rational_rank2_unequal(rng: random.Random, cfg: SamplerConfig = SamplerConfig()) -> RationalMatrix:
    """Rank-2 rational matrix ``a b^T + c d^T``; generically not essential."""
    a, b, c, d = (tuple(rand_rational(rng, cfg) for _ in range(3)) for _ in range(4))
    return RationalMatrix.from_rows([[a[i] * b[j] + c[i] * d[j] for j in range(3)] for i in range(3)])


def rational_matrix(rng: random.Random, cfg: SamplerConfig = SamplerConfig()) -> RationalMatrix:
    return RationalMatrix.from_rows([[rand_rational(rng, cfg) for _ in range(3)] for _ in range(3)])

