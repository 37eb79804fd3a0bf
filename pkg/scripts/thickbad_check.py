"""Build the sum-product-free set block by block and re-check it on growing windows.

    python3 scripts/thickbad_check.py --blocks 10 --window 1000000
"""

import argparse
import json
import time
from dataclasses import asdict, dataclass

from affine_ramsey.constructions import build_thickbad, thickbad_chain_checks, verify_no_pattern
from affine_ramsey.windows import parse_window


@dataclass
class Config:
    blocks: int = 10
    window: int = 10**6


def main(cfg: Config) -> dict:
    t0 = time.perf_counter()
    bs = build_thickbad(cfg.blocks)
    built = time.perf_counter() - t0
    checks = thickbad_chain_checks(bs)
    rows = []
    n = 100
    while n <= cfg.window:
        t = time.perf_counter()
        v = verify_no_pattern(bs, "sumproduct", parse_window(f"natbox:{n}"))
        rows.append({"window": n, "elements": v.checked, "ok": v.ok, "seconds": round(time.perf_counter() - t, 4)})
        n *= 10
    return {
        "config": asdict(cfg),
        "build_seconds": round(built, 3),
        "prime_digits": [len(str(p)) for p in bs.extra["primes"]],
        "primality": bs.extra["primality"],
        "chain_ok": all(c["ok"] for c in checks),
        "verify": rows,
    }


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--blocks", type=int, default=Config.blocks)
    ap.add_argument("--window", type=int, default=Config.window)
    print(json.dumps(main(Config(**vars(ap.parse_args()))), indent=2))
