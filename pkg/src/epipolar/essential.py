"""Essential matrices: Demazure characterisation and constructions for m <= 4.

Rotations are irrational in general, so the constructions for m <= 3 and for
the fourth m = 4 configuration run in floating point and are checked against
the epipolar constraints afterwards. The other m = 4 configurations produce an
exact matrix H with ``y_i ~ H x_i`` or ``H x_i = 0`` for every pair, which
certifies existence without exhibiting E.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional, Sequence

import numpy as np

from .common import CorrespondenceSet, Tolerances, Verdict
from .errors import ContractViolation
from .fundamental import build_reduced, epipolar_residual
from .linalg import (
    RationalMatrix,
    are_collinear,
    cross,
    det,
    inverse,
    kernel_basis,
    line_normalizer,
    rank,
    solve_projectivity,
    stack,
)


class EssentialCase(str, enum.Enum):
    M_LE_3 = "M_LE_3"
    M4_CASE1 = "M4_CASE1"
    M4_CASE2 = "M4_CASE2"
    M4_CASE3 = "M4_CASE3"
    M4_CASE4 = "M4_CASE4"
    M8_POINT = "M8_POINT"
    M9_EMPTY = "M9_EMPTY"
    RANGE_5_7 = "RANGE_5_7"
    HYPOTHESIS_VIOLATED = "HYPOTHESIS_VIOLATED"


class HypothesisViolated(ContractViolation):
    pass


# -- characterisation --------------------------------------------------------

def _as_array(e) -> np.ndarray:
    if isinstance(e, RationalMatrix):
        return e.to_float()
    return np.asarray(e, dtype=float).reshape(3, 3)


def demazure_residuals(e) -> tuple:
    """Entries of ``2 E E^T E - tr(E E^T) E`` (row-major) followed by ``det(E)``.

    Exact for a :class:`RationalMatrix`, floating point otherwise.
    """
    if isinstance(e, RationalMatrix):
        eet = e @ e.T
        tr = eet[0, 0] + eet[1, 1] + eet[2, 2]
        p = (eet @ e).scale(2) - e.scale(tr)
        return tuple(p.entries) + (det(e),)
    a = _as_array(e)
    p = 2 * a @ a.T @ a - np.trace(a @ a.T) * a
    return tuple(float(v) for v in p.reshape(-1)) + (float(np.linalg.det(a)),)


def max_demazure_residual(e) -> float:
    a = _as_array(e)
    a = a / np.max(np.abs(a))
    return max(abs(v) for v in demazure_residuals(a))


def is_essential(e, tol: float = 1e-9) -> bool:
    """Two equal nonzero singular values and a zero one.

    For exact input the answer is the exact vanishing of the Demazure cubics,
    which is the same set.
    """
    if isinstance(e, RationalMatrix):
        if e.is_zero():
            raise ContractViolation("the zero matrix is not a point of projective space")
        return all(v == 0 for v in demazure_residuals(e))
    a = _as_array(e)
    s = np.linalg.svd(a, compute_uv=False)
    if s[0] == 0:
        raise ContractViolation("the zero matrix is not a point of projective space")
    return bool(s[2] / s[0] < tol and (s[0] - s[1]) / s[0] < tol)


# -- constructions -------------------------------------------------------------

@dataclass(frozen=True)
class EssentialWitness:
    """Either an essential matrix (kind ``E_EXACT`` / ``E_NUMERIC``) or an
    exact H certificate (kind ``H_CERTIFICATE``) valid for the relabelled pairs.
    """

    kind: str
    matrix: Any
    residual: float = 0.0


def _hat(v: np.ndarray) -> np.ndarray:
    return np.array([[0, -v[2], v[1]], [v[2], 0, -v[0]], [-v[1], v[0], 0]])


def _orthogonal_to(n: np.ndarray) -> np.ndarray:
    axis = np.zeros(3)
    axis[int(np.argmin(np.abs(n)))] = 1.0
    v = np.cross(n, axis)
    return v / np.linalg.norm(v)


def rotation_between(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Smallest rotation taking direction a to direction b."""
    a = a / np.linalg.norm(a)
    b = b / np.linalg.norm(b)
    v = np.cross(a, b)
    s = np.linalg.norm(v)
    c = float(a @ b)
    if s < 1e-15:
        if c > 0:
            return np.eye(3)
        n = _orthogonal_to(a)
        return 2 * np.outer(n, n) - np.eye(3)  # half-turn
    k = _hat(v)
    return np.eye(3) + k + k @ k * ((1 - c) / s ** 2)


def _float_pairs(c: CorrespondenceSet):
    return [(np.array([float(v) for v in x]), np.array([float(v) for v in y]))
            for x, y in c.pairs]


def _is_tiny(v: np.ndarray, scale: float) -> bool:
    return np.linalg.norm(v) <= 1e-12 * scale


def essential_m3(c: CorrespondenceSet, tol: Tolerances = Tolerances()) -> EssentialWitness:
    if c.m > 3:
        raise ContractViolation("essential_m3 handles at most three pairs")
    pts = _float_pairs(c)
    x1, y1 = pts[0]
    r = rotation_between(x1, y1)
    cs = []
    for x, y in pts[1:]:
        v = np.cross(y, r @ x)
        cs.append(v if not _is_tiny(v, np.linalg.norm(x) * np.linalg.norm(y)) else np.zeros(3))
    while len(cs) < 2:
        cs.append(np.zeros(3))
    t = np.cross(cs[0], cs[1])
    nonzero = [v for v in cs if np.linalg.norm(v) > 0]
    if _is_tiny(t, np.prod([np.linalg.norm(v) for v in cs]) or 1.0):
        t = _orthogonal_to(nonzero[0]) if nonzero else np.array([0.0, 0.0, 1.0])
    e = _hat(t) @ r
    e = e / np.max(np.abs(e))
    res = epipolar_residual(c.Z, e)
    if res >= tol.tol_res:
        raise AssertionError(f"m<=3 construction residual {res:.3g} exceeds tolerance")
    return EssentialWitness("E_NUMERIC", e, res)


@dataclass(frozen=True)
class M4Configuration:
    """``permutation[k]`` is the original index relabelled as point k."""

    case: int
    permutation: tuple
    swapped: bool

    def apply(self, c: CorrespondenceSet) -> CorrespondenceSet:
        d = c.subset(self.permutation)
        return d.swapped() if self.swapped else d


def _distinct(points) -> bool:
    return len({tuple(p) for p in points}) == len(points)


def _no_triple(points) -> bool:
    return not any(are_collinear(t) for t in itertools.combinations(points, 3))


def _matches(case: int, xs, ys) -> bool:
    if case == 1:
        return _no_triple(xs) and _no_triple(ys)
    if case == 2:
        return _no_triple(xs) and are_collinear(ys[:3])
    if case == 3:
        return (are_collinear(xs[:3]) and not are_collinear(xs)
                and are_collinear(ys[:3]) and not are_collinear(ys))
    if case == 4:
        return are_collinear(xs[:3]) and are_collinear(ys[1:])
    raise ValueError(case)


def classify_m4(c: CorrespondenceSet) -> M4Configuration:
    if c.m != 4:
        raise ContractViolation("classify_m4 needs exactly four pairs")
    if not (_distinct(c.xs) and _distinct(c.ys)):
        raise HypothesisViolated("the four x's and the four y's must be pairwise distinct")
    for case in (1, 2, 3, 4):
        for swapped in (False, True):
            for perm in itertools.permutations(range(4)):
                cfg = M4Configuration(case, perm, swapped)
                d = cfg.apply(c)
                if _matches(case, d.xs, d.ys):
                    return cfg
    raise AssertionError("every admissible four-point configuration matches a case")


def certificate_from_H(c: CorrespondenceSet, h: RationalMatrix) -> bool:
    """Exact check that ``rank(H) >= 2`` and each ``H x_i`` is zero or parallel to ``y_i``."""
    if rank(h) < 2:
        return False
    return all(all(v == 0 for v in cross(y, h @ x)) for x, y in c.pairs)


_FRAME = [(1, 1, 1), (0, 0, 1), (0, 1, 0), (1, 0, 0)]


def _case2_h(d: CorrespondenceSet) -> RationalMatrix:
    h1 = solve_projectivity(list(zip(d.xs, _FRAME)))
    h2 = line_normalizer(d.ys[:3], d.ys[0])
    alpha = (h2 @ d.ys[1])[1]
    beta = (h2 @ d.ys[2])[1]
    h3 = RationalMatrix.from_rows([
        [0, 0, 0],
        [0, -alpha * beta, alpha * beta],
        [0, -alpha, beta],
    ])
    h = inverse(h2) @ h3 @ h1
    for x, y in d.pairs[:3]:
        assert all(v == 0 for v in cross(y, h @ x)) and any(h @ x)
    assert not any(h @ d.xs[3])
    return h


def case3_normalized_h(alpha, beta, gamma, delta, x4, y4) -> RationalMatrix:
    """Closed-form H for x = (0,0),(0,a),(0,b),x4 and y = (0,0),(0,c),(0,d),y4."""
    a, b, g, dl = alpha, beta, gamma, delta
    x41, x42 = x4
    y41, y42 = y4
    h11 = (a - x42) * b * g * y41 - (b - x42) * a * dl * y41
    h21 = (-a * x42 * g * dl + b * x42 * g * dl + a * b * g * y42
           - b * x42 * g * y42 - a * b * dl * y42 + a * x42 * dl * y42)
    h22 = (a - b) * x41 * g * dl
    h32 = (a * dl - b * g) * x41
    h33 = (g - dl) * x41 * a * b
    return RationalMatrix.from_rows([[h11, 0, 0], [h21, h22, 0], [0, h32, h33]])


def case3_scale_factors(alpha, beta, gamma, delta, x4, y4) -> tuple:
    """Scalars s_i with ``H x_i = s_i y_i`` in normalised coordinates."""
    a, b, g, dl = alpha, beta, gamma, delta
    x41, x42 = x4
    return (a * b * x41 * (g - dl),
            a * dl * x41 * (a - b),
            b * g * x41 * (a - b),
            x41 * (b * g * (a - x42) - a * dl * (b - x42)))


def _case3_h(d: CorrespondenceSet) -> RationalMatrix:
    gx = line_normalizer(d.xs[:3], d.xs[0])
    gy = line_normalizer(d.ys[:3], d.ys[0])
    nx = [gx @ x for x in d.xs]
    ny = [gy @ y for y in d.ys]
    alpha, beta = nx[1][1], nx[2][1]
    gamma, delta = ny[1][1], ny[2][1]
    x4, y4 = nx[3][:2], ny[3][:2]
    hn = case3_normalized_h(alpha, beta, gamma, delta, x4, y4)
    scales = case3_scale_factors(alpha, beta, gamma, delta, x4, y4)
    for x, y, s in zip(nx, ny, scales):
        assert hn @ x == tuple(s * v for v in y)
    assert hn[1, 1] * hn[2, 2] != 0
    return inverse(gy) @ hn @ gx


def _case4_e(d: CorrespondenceSet) -> np.ndarray:
    (x1, _), _, _, (_, y4) = _float_pairs(d)
    xs = [p[0] for p in _float_pairs(d)]
    ys = [p[1] for p in _float_pairs(d)]
    n_x = np.cross(xs[0], xs[1])  # normal of the plane through the origin and the x line
    n_y = np.cross(ys[2], ys[3])
    xh = x1 / np.linalg.norm(x1)
    yh = y4 / np.linalg.norm(y4)
    u = np.cross(n_x, xh)
    u /= np.linalg.norm(u)
    w = np.cross(n_y, yh)
    w /= np.linalg.norm(w)
    big_u = np.column_stack([xh, u, np.cross(xh, u)])
    big_w = np.column_stack([yh, w, np.cross(yh, w)])
    r = big_w @ big_u.T
    e = _hat(y4) @ r
    return e / np.max(np.abs(e))


@dataclass(frozen=True)
class EssentialDecision:
    verdict: Verdict
    case: EssentialCase
    witness: Optional[EssentialWitness] = None
    configuration: Optional[M4Configuration] = None
    certificate: dict = field(default_factory=dict)


def essential_m4(c: CorrespondenceSet, tol: Tolerances = Tolerances()) -> EssentialDecision:
    try:
        cfg = classify_m4(c)
    except HypothesisViolated:
        return EssentialDecision(Verdict.UNDECIDED, EssentialCase.HYPOTHESIS_VIOLATED)
    d = cfg.apply(c)
    case = EssentialCase(f"M4_CASE{cfg.case}")
    if cfg.case == 4:
        e = _case4_e(d)
        if cfg.swapped:
            e = e.T
        res = epipolar_residual(c.Z, e)
        if res >= tol.tol_res or not is_essential(e, tol.tol_rank):
            raise AssertionError(f"case-4 construction failed its checks (residual {res:.3g})")
        return EssentialDecision(Verdict.EXISTS, case, EssentialWitness("E_NUMERIC", e, res), cfg)
    h = {1: lambda: solve_projectivity(d.pairs), 2: lambda: _case2_h(d), 3: lambda: _case3_h(d)}[cfg.case]()
    if not certificate_from_H(d, h):
        raise AssertionError(f"case {cfg.case} certificate failed exact verification")
    return EssentialDecision(Verdict.EXISTS, case, EssentialWitness("H_CERTIFICATE", h), cfg)


def _four_subset_candidates(c: CorrespondenceSet, first: Sequence[int]):
    yield tuple(first)
    z = c.Z
    for idx in itertools.combinations(range(c.m), 4):
        if idx != tuple(first) and rank(stack([z.row(i) for i in idx])) == 4:
            yield idx


def decide_essential(c: CorrespondenceSet, tol: Tolerances = Tolerances()) -> EssentialDecision:
    red = build_reduced(c)
    mp = red.m_prime
    if mp == 9:
        return EssentialDecision(Verdict.NOT_EXISTS, EssentialCase.M9_EMPTY)
    if mp == 8:
        (v,) = kernel_basis(red.Z)
        a = RationalMatrix.from_vector(v)
        cert = {"kernel_point": a, "demazure": demazure_residuals(a)}
        if is_essential(a):
            return EssentialDecision(Verdict.EXISTS, EssentialCase.M8_POINT,
                                     EssentialWitness("E_EXACT", a), None, cert)
        return EssentialDecision(Verdict.NOT_EXISTS, EssentialCase.M8_POINT, None, None, cert)
    if mp >= 5:
        return EssentialDecision(Verdict.UNDECIDED, EssentialCase.RANGE_5_7,
                                 certificate={"kernel_basis": tuple(kernel_basis(red.Z))})
    if mp <= 3:
        w = essential_m3(red.pairs, tol)
        res = epipolar_residual(c.Z, w.matrix)
        return EssentialDecision(Verdict.EXISTS, EssentialCase.M_LE_3,
                                 EssentialWitness(w.kind, w.matrix, res),
                                 certificate={"selected": red.selected})
    # rank(Z) = 4: any four independent rows have the same kernel
    for idx in _four_subset_candidates(c, red.selected):
        sub = c.subset(idx)
        if not (_distinct(sub.xs) and _distinct(sub.ys)):
            continue
        dec = essential_m4(sub, tol)
        if dec.witness.kind == "E_NUMERIC":
            res = epipolar_residual(c.Z, dec.witness.matrix)
            dec = EssentialDecision(dec.verdict, dec.case,
                                    EssentialWitness("E_NUMERIC", dec.witness.matrix, res),
                                    dec.configuration)
        return EssentialDecision(dec.verdict, dec.case, dec.witness, dec.configuration,
                                 {"selected": idx})
    return EssentialDecision(Verdict.UNDECIDED, EssentialCase.HYPOTHESIS_VIOLATED,
                             certificate={"selected": red.selected})


def oriented_pairs(c: CorrespondenceSet, decision: EssentialDecision) -> CorrespondenceSet:
    """The relabelled four pairs an H certificate refers to."""
    sub = c.subset(decision.certificate["selected"])
    return decision.configuration.apply(sub)
