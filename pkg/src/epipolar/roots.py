"""Exact real root isolation for univariate rational polynomials (Sturm sequences)."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

# polynomials are lists of Fractions, highest degree first, no leading zeros


def _trim(p):
    i = 0
    while i < len(p) - 1 and p[i] == 0:
        i += 1
    return list(p[i:])


def evaluate(p: Sequence, x):
    acc = Fraction(0) if isinstance(x, Fraction) else 0.0
    for c in p:
        acc = acc * x + c
    return acc


def derivative(p: Sequence) -> list:
    n = len(p) - 1
    return _trim([c * (n - i) for i, c in enumerate(p[:-1])]) if n > 0 else [Fraction(0)]


def divmod_poly(a: Sequence, b: Sequence):
    a = [Fraction(c) for c in a]
    b = _trim(b)
    if len(b) == 1 and b[0] == 0:
        raise ZeroDivisionError("polynomial division by zero")
    if len(a) < len(b):
        return [Fraction(0)], _trim(a)
    quot = []
    rem = list(a)
    while len(rem) >= len(b):
        f = rem[0] / b[0]
        quot.append(f)
        for i in range(len(b)):
            rem[i] -= f * b[i]
        rem.pop(0)
    return _trim(quot), _trim(rem or [Fraction(0)])


def is_zero(p) -> bool:
    return all(c == 0 for c in p)


def gcd(a: Sequence, b: Sequence) -> list:
    a, b = _trim(a), _trim(b)
    while not is_zero(b):
        a, b = b, divmod_poly(a, b)[1]
    return [c / a[0] for c in a]


def squarefree(p: Sequence) -> list:
    """``p / gcd(p, p')``: same distinct roots, all simple."""
    p = _trim([Fraction(c) for c in p])
    if len(p) <= 2:
        return p
    g = gcd(p, derivative(p))
    return divmod_poly(p, g)[0] if len(g) > 1 else p


def sturm_sequence(p: Sequence) -> list:
    seq = [_trim(p), derivative(p)]
    while not is_zero(seq[-1]) and len(seq[-1]) > 1:
        r = divmod_poly(seq[-2], seq[-1])[1]
        if is_zero(r):
            break
        seq.append([-c for c in r])
    return seq


def _sign_changes(seq, x) -> int:
    signs = [s for s in (evaluate(p, x) for p in seq) if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if (a > 0) != (b > 0))


def cauchy_bound(p: Sequence) -> Fraction:
    p = _trim(p)
    return 1 + max((abs(c / p[0]) for c in p[1:]), default=Fraction(0))


def isolate_real_roots(p: Sequence) -> list:
    """Disjoint intervals ``(lo, hi]`` each holding exactly one distinct real root.

    Intervals are returned in increasing order. Works for polynomials with
    repeated roots too (Sturm counts distinct roots).
    """
    p = squarefree(p)
    if len(p) == 1:
        return []
    seq = sturm_sequence(p)
    bound = cauchy_bound(p)
    out = []
    stack = [(-bound, bound)]
    while stack:
        lo, hi = stack.pop()
        n = _sign_changes(seq, lo) - _sign_changes(seq, hi)
        if n == 0:
            continue
        if n == 1:
            out.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        stack.append((mid, hi))
        stack.append((lo, mid))
    return sorted(out)


def refine(p: Sequence, lo: Fraction, hi: Fraction, width: Fraction) -> tuple:
    """Bisect an isolating interval ``(lo, hi]`` until it is narrower than ``width``."""
    seq = sturm_sequence(squarefree(p))
    while hi - lo >= width:
        mid = (lo + hi) / 2
        if _sign_changes(seq, lo) - _sign_changes(seq, mid) > 0:
            hi = mid
        else:
            lo = mid
    return lo, hi


def rational_root_in(p: Sequence, lo: Fraction, hi: Fraction):
    """The rational root in ``(lo, hi]`` if there is one, else None.

    For an integer polynomial with leading coefficient ``a``, every rational
    root ``r`` has ``a * r`` integral, so after narrowing the interval below
    ``1 / |a|`` only a couple of candidates remain to be tested exactly.
    """
    p = squarefree(p)
    den = math.lcm(*(c.denominator for c in p))
    ip = [int(c * den) for c in p]
    lead = abs(ip[0])
    lo, hi = refine(p, lo, hi, Fraction(1, 2 * lead))
    for k in range(math.floor(lo * lead), math.ceil(hi * lead) + 1):
        r = Fraction(k, lead)
        if lo < r <= hi and evaluate(p, r) == 0:
            return r
    return None


def to_float_root(p: Sequence, lo: Fraction, hi: Fraction) -> float:
    scale = max(abs(lo), abs(hi), Fraction(1))
    lo, hi = refine(p, lo, hi, scale * Fraction(1, 2 ** 70))
    return float((lo + hi) / 2)
