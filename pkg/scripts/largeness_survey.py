"""Syndeticity and thickness verdicts for a few named sets on one window.

Each set gets a greedy certificate search (height H, at most k maps) and a
thickness probe with the family {x, x+1, 2x}.  Verdicts are window-verified.
"""

import argparse
from dataclasses import dataclass, field

from affine_ramsey.affine import parse_map
from affine_ramsey.largeness import SyndeticCertificate, find_syndetic_certificate, find_thick_witness
from affine_ramsey.setexpr import ExprSet, eval_set_expr
from affine_ramsey.windows import parse_window


@dataclass
class Config:
    window: str = "natbox:5000"
    height: int = 2
    max_maps: int = 6
    sets: list[str] = field(
        default_factory=lambda: ["mod(1,2)", "mod(0,3)", "thickbad(4)", "compl(thickbad(4))", "union(mod(0,5),interval(1,100))"]
    )
    family: list[str] = field(default_factory=lambda: ["x", "x+1", "2*x"])


def main(cfg: Config) -> None:
    W = parse_window(cfg.window)
    F = [parse_map(m, W.ring) for m in cfg.family]
    print(f"window {W}, candidate height {cfg.height}, at most {cfg.max_maps} maps")
    for text in cfg.sets:
        s = ExprSet(text, W.ring)
        cert = find_syndetic_certificate(s, W, cfg.height, cfg.max_maps)
        synd = f"syndetic via {len(cert.maps)} maps" if isinstance(cert, SyndeticCertificate) else f"no cover (best {float(cert.coverage):.3f})"
        w = find_thick_witness(eval_set_expr(text, W), F, W)
        thick = f"x = {W.ring.format(w.point)}" if w.found else "none"
        print(f"  {text:<34} {synd:<28} thick witness: {thick}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--window", default=Config.window)
    ap.add_argument("--height", type=int, default=Config.height)
    ap.add_argument("--max-maps", type=int, default=Config.max_maps)
    ap.add_argument("--sets", nargs="+", default=Config().sets)
    a = ap.parse_args()
    main(Config(a.window, a.height, a.max_maps, a.sets))
