"""Sweep random and structured instances and tabulate decision branches.

For each m in 1..9 draws random rational correspondences, plus the
structured families with a rank-one kernel, and counts verdict/branch pairs
together with how often the fundamental witness had to be numeric.

usage: python scripts/completeness_sweep.py [--n 100] [--seed 0]
"""

import argparse
import random
import time
from collections import Counter
from dataclasses import dataclass

from epipolar.common import Tolerances
from epipolar.essential import decide_essential
from epipolar.fundamental import build_reduced, decide_fundamental
from epipolar.synthetic import generic_instance, one_side_collinear, tau_pattern


@dataclass(frozen=True)
class SweepConfig:
    n: int = 100
    seed: int = 0
    tol: Tolerances = Tolerances()


def families(rng: random.Random, n: int):
    for m in range(1, 10):
        yield f"random m={m}", [generic_instance(rng, m) for _ in range(n)]
    yield "collinear side, m=6", [one_side_collinear(rng, "xy"[k % 2]) for k in range(n)]
    yield "tau pattern, m=7", [tau_pattern(rng, (4, 5, 6)[k % 3], bool(k % 2))[0] for k in range(n)]


def run(cfg: SweepConfig) -> None:
    rng = random.Random(cfg.seed)
    print(f"{'family':<22} {'rank(Z)':<10} {'fundamental':<40} {'essential':<30} secs")
    for label, instances in families(rng, cfg.n):
        t0 = time.perf_counter()
        ranks, fund, ess = Counter(), Counter(), Counter()
        for c in instances:
            ranks[build_reduced(c).m_prime] += 1
            fd = decide_fundamental(c, cfg.tol)
            kind = f"/{fd.witness.kind.lower()}" if fd.witness else ""
            fund[f"{fd.verdict.value}:{fd.branch.value}{kind}"] += 1
            ess[decide_essential(c, cfg.tol).case.value] += 1
        secs = time.perf_counter() - t0
        fmt = lambda cnt: ", ".join(f"{k} {v}" for k, v in sorted(cnt.items()))
        print(f"{label:<22} {fmt(ranks):<10} {fmt(fund):<40} {fmt(ess):<30} {secs:.1f}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    a = ap.parse_args()
    run(SweepConfig(a.n, a.seed))
