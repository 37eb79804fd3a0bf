"""How large are the return sets R(B, delta) on Z/p for random B?

For each prime p we draw ``trials`` families of ``t`` random sets of density
``alpha`` and record the share of u in (Z/p)* that lie in every R(B_i, delta).
"""

import argparse
import random
from dataclasses import dataclass
from fractions import Fraction
from statistics import mean

from affine_ramsey.arith import is_prime
from affine_ramsey.finite_models import return_sets


@dataclass
class Config:
    max_p: int = 101
    alpha: float = 0.3
    delta: str = "1/2"
    t: int = 2
    trials: int = 20
    seed: int = 0


def main(cfg: Config) -> None:
    rng = random.Random(cfg.seed)
    delta = Fraction(cfg.delta)
    print(f"{'p':>5}{'mean |R|/(p-1)':>16}{'min':>8}{'empty':>7}")
    for p in (q for q in range(3, cfg.max_p + 1) if is_prime(q)):
        k = max(1, round(cfg.alpha * p))
        shares = []
        for _ in range(cfg.trials):
            sets = [rng.sample(range(p), k) for _ in range(cfg.t)]
            rep = return_sets(p, sets, delta=delta)
            shares.append(len(rep.intersection) / (p - 1))
        print(f"{p:>5}{mean(shares):>16.3f}{min(shares):>8.3f}{sum(s == 0 for s in shares):>7}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for name, default in vars(Config()).items():
        ap.add_argument(f"--{name.replace('_', '-')}", type=type(default), default=default)
    main(Config(**vars(ap.parse_args())))
