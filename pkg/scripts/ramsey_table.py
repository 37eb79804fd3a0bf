"""Least N forcing a monochromatic configuration, per pattern and colour count.

Prints one row per (pattern, r).  Rows that run out of budget say so.
"""

import argparse
import time
from dataclasses import dataclass, field

from affine_ramsey.errors import BudgetExceeded
from affine_ramsey.patterns import FoundAt, minimal_ramsey_window


@dataclass
class Config:
    patterns: list[str] = field(default_factory=lambda: ["schur", "product", "sumproduct_pair", "sumproduct_quad"])
    colors: list[int] = field(default_factory=lambda: [1, 2, 3])
    max_n: int = 40
    budget: int = 2_000_000


def main(cfg: Config) -> None:
    print(f"{'pattern':<18}{'r':>3}  {'result':<22}{'nodes':>10}{'sec':>8}")
    for p in cfg.patterns:
        for r in cfg.colors:
            t = time.perf_counter()
            try:
                res = minimal_ramsey_window(p, r, cfg.max_n, cfg.budget)
                what = f"N = {res.n}" if isinstance(res, FoundAt) else f"free up to {res.n}"
                nodes = res.nodes
            except BudgetExceeded as e:
                what, nodes = "budget exceeded", e.args[1] if len(e.args) > 1 else cfg.budget
            print(f"{p:<18}{r:>3}  {what:<22}{nodes:>10}{time.perf_counter() - t:>8.2f}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--patterns", nargs="+", default=Config().patterns)
    ap.add_argument("--colors", nargs="+", type=int, default=Config().colors)
    ap.add_argument("--max-n", type=int, default=Config.max_n)
    ap.add_argument("--budget", type=int, default=Config.budget)
    a = ap.parse_args()
    main(Config(a.patterns, a.colors, a.max_n, a.budget))
