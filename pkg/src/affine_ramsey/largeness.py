"""Affine syndeticity and thickness on windows, Følner sets, densities, finite sums.

The definitions quantify over a whole infinite ring; everything here is decided
relative to a finite window and labelled ``window-verified`` accordingly.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil
from typing import Any

import numpy as np

from .affine import AffineMap, _same_ring, format_map, image_points, maps_of_height, preimage_in_window
from .errors import ConfigError, EmptyFamily, SizeLimit, WitnessNotFound
from .rings import Ring
from .setexpr import ExprSet, SetExpr, eval_set_expr, parse_set_expr
from .windows import WindowSet, WindowSpec

VERDICT_LABEL = "window-verified"


def _points(window: WindowSpec):
    return window.int_array() if window.is_integer else window.elements()


@dataclass
class SyndeticCertificate:
    maps: list[AffineMap]
    window: WindowSpec
    covered: int
    uncovered: list = field(default_factory=list)  # sample, canonical order
    uncovered_count: int = 0
    out_of_window: int = 0
    label: str = VERDICT_LABEL

    @property
    def coverage(self) -> Fraction:
        return Fraction(self.covered, self.window.size)

    @property
    def complete(self) -> bool:
        return self.uncovered_count == 0

    def to_json(self) -> dict:
        R = self.window.ring
        return {
            "label": self.label,
            "window": self.window.to_json(),
            "maps": [format_map(g) for g in self.maps],
            "coverage": self.coverage,
            "uncovered_count": self.uncovered_count,
            "uncovered_sample": [R.format(x) for x in self.uncovered],
            "out_of_window": self.out_of_window,
        }


@dataclass
class Exhausted:
    """No certificate within the search budget; ``best`` is the best partial cover."""

    best: SyndeticCertificate
    candidates: int

    complete = False

    @property
    def coverage(self) -> Fraction:
        return self.best.coverage

    def to_json(self) -> dict:
        return {"exhausted": True, "candidates": self.candidates, "best": self.best.to_json()}


def _coverage_mask(g: AffineMap, s, window: WindowSpec) -> tuple[np.ndarray, int]:
    pre = preimage_in_window(g, s, window)
    return pre.mask, pre.out_of_window


def check_syndetic_certificate(s, maps: list[AffineMap], window: WindowSpec, sample: int = 20) -> SyndeticCertificate:
    """Compute the union of preimages of ``s`` under ``maps`` inside ``window``."""
    if not maps:
        raise EmptyFamily("certificate needs at least one map")
    _same_ring(window.ring, s.ring, *(g.ring for g in maps))
    covered = np.zeros(window.size, dtype=bool)
    oow = 0
    for g in maps:
        m, o = _coverage_mask(g, s, window)
        covered |= m
        oow += o
    missing = np.flatnonzero(~covered)
    els = window.elements()
    return SyndeticCertificate(
        list(maps),
        window,
        int(covered.sum()),
        [els[i] for i in missing[:sample]],
        len(missing),
        oow,
    )


def find_syndetic_certificate(
    s, window: WindowSpec, height: int, max_maps: int, workers: int = 1
) -> SyndeticCertificate | Exhausted:
    """Greedy set cover over all maps of height <= ``height``, then exact re-check.

    Ties go to the earliest candidate in canonical (u, v) order, so the result
    does not depend on ``workers``.
    """
    if height < 1 or max_maps < 1:
        raise ConfigError("height and max_maps must be >= 1")
    _same_ring(window.ring, s.ring)
    cands = maps_of_height(window.ring, height)
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            masks = list(pool.map(lambda g: _coverage_mask(g, s, window)[0], cands))
    else:
        masks = [_coverage_mask(g, s, window)[0] for g in cands]
    covered = np.zeros(window.size, dtype=bool)
    chosen: list[int] = []
    while len(chosen) < max_maps and not covered.all():
        gains = [int(np.count_nonzero(m & ~covered)) for m in masks]
        best = max(range(len(cands)), key=lambda i: (gains[i], -i))
        if gains[best] == 0:
            break
        chosen.append(best)
        covered |= masks[best]
    if not chosen:
        chosen = [0]
    cert = check_syndetic_certificate(s, [cands[i] for i in chosen], window)
    if cert.complete:
        return cert
    return Exhausted(cert, len(cands))


@dataclass
class ThickWitness:
    point: Any  # None when absent
    maps: list[AffineMap]
    window: WindowSpec
    checked: int
    label: str = VERDICT_LABEL

    @property
    def found(self) -> bool:
        return self.point is not None

    def images(self) -> list:
        return [] if self.point is None else [g(self.point) for g in self.maps]

    def to_json(self) -> dict:
        R = self.window.ring
        return {
            "label": self.label,
            "found": self.found,
            "point": None if self.point is None else R.format(self.point),
            "images": [R.format(y) for y in self.images()],
            "maps": [format_map(g) for g in self.maps],
            "window": self.window.to_json(),
            "checked": self.checked,
        }


def _thick_mask(t, maps: list[AffineMap], window: WindowSpec) -> np.ndarray:
    ok = np.ones(window.size, dtype=bool)
    for g in maps:
        ok &= preimage_in_window(g, t, window).mask
    return ok


def find_thick_witness(t, maps: list[AffineMap], window: WindowSpec) -> ThickWitness:
    """Least ``x`` in ``window`` with ``g(x) in t`` for every map (and inside ``t``'s window)."""
    if not maps:
        raise EmptyFamily("thickness test needs at least one map")
    _same_ring(window.ring, t.ring, *(g.ring for g in maps))
    ok = _thick_mask(t, maps, window)
    hits = np.flatnonzero(ok)
    point = window.elements()[hits[0]] if len(hits) else None
    return ThickWitness(point, list(maps), window, window.size)


# ---------------------------------------------------------------------------
# Følner sequences and densities


FOLNER_KINDS = ("nat", "int", "farey", "thick")
_KIND_SHAPE = {"nat": "natbox", "int": "intbox", "farey": "farey"}


@dataclass
class FolnerSpec:
    """``nat``: [1, N]; ``int``: [-N, N]; ``farey``: Farey(N);
    ``thick``: images of a witness x_N under all maps of height <= N, inside ``thick_set``.
    """

    kind: str
    ring: Ring | None = None
    thick_set: Any = None

    def __post_init__(self):
        if self.kind not in FOLNER_KINDS:
            raise ConfigError(f"unknown Følner kind {self.kind!r}", "folner")
        if self.kind == "thick" and self.thick_set is None:
            raise ConfigError("thick Følner sets need a thick_set", "folner")
        if self.ring is None:
            from .rings import parse_ring

            self.ring = self.thick_set.ring if self.kind == "thick" else parse_ring("q" if self.kind == "farey" else "z")

    def window(self, n: int) -> WindowSpec:
        return WindowSpec(self.ring, _KIND_SHAPE[self.kind], n)


@dataclass
class FromThickSet:
    x: Any
    elements: list
    maps: list[AffineMap]


def thick_folner_set(t: WindowSet, n: int) -> FromThickSet:
    """F_N = {g(x_N) : g of height <= N} for the least x_N whose images are distinct and in ``t``.

    Two distinct maps agree at one point at most, so skipping collisions
    only discards finitely many x.
    """
    R = t.ring
    maps = maps_of_height(R, n)
    window = t.window
    ok = _thick_mask(t, maps, window)
    els = window.elements()
    for i in np.flatnonzero(ok):
        x = els[i]
        imgs = [g(x) for g in maps]
        if len(set(imgs)) == len(imgs):
            return FromThickSet(x, imgs, maps)
    raise WitnessNotFound(f"no x in {window} maps into the set under all {len(maps)} maps of height <= {n}")


def folner_sets(spec: FolnerSpec, n: int) -> WindowSet:
    if spec.kind == "thick":
        f = thick_folner_set(spec.thick_set, n)
        return WindowSet.from_elements(spec.thick_set.window, f.elements)
    return WindowSet.full(spec.window(n))


def folner_defect(f: WindowSet, u, additive: bool = True) -> Fraction:
    """|F ∩ (F + u)| / |F| (or |F ∩ uF| / |F| when ``additive`` is false)."""
    R = f.ring
    g = AffineMap(R, R.one, u) if additive else AffineMap(R, u, R.zero)
    els = f.elements()
    moved = set(g(x) for x in els)
    return Fraction(sum(1 for x in els if x in moved), len(els))


@dataclass
class DensityReport:
    counts: np.ndarray  # |E ∩ F_n| for n = 1..N
    sizes: np.ndarray  # |F_n|
    tail: float
    upper: Fraction = field(init=False)
    lower: Fraction = field(init=False)

    def __post_init__(self):
        n = len(self.counts)
        start = max(0, n - max(1, ceil(self.tail * n)))
        self.upper = _extreme_ratio(self.counts[start:], self.sizes[start:], max)
        self.lower = _extreme_ratio(self.counts[start:], self.sizes[start:], min)

    def ratio(self, n: int) -> Fraction:
        return Fraction(int(self.counts[n - 1]), int(self.sizes[n - 1]))

    @property
    def final(self) -> Fraction:
        return self.ratio(len(self.counts))

    def ratios(self) -> list[Fraction]:
        return [Fraction(int(c), int(s)) for c, s in zip(self.counts, self.sizes)]

    def to_json(self, series: bool | None = None) -> dict:
        out = {
            "upto": len(self.counts),
            "final": self.final,
            "upper": self.upper,
            "lower": self.lower,
            "tail_fraction": self.tail,
        }
        if series or (series is None and len(self.counts) <= 1000):
            out["ratios"] = self.ratios()
        return out

    def rows(self) -> list[dict]:
        return [{"n": i + 1, "count": int(c), "size": int(s)} for i, (c, s) in enumerate(zip(self.counts, self.sizes))]


def _extreme_ratio(counts: np.ndarray, sizes: np.ndarray, pick) -> Fraction:
    """Exact max/min of counts/sizes; floats only narrow the candidates."""
    r = counts / sizes
    target = r.max() if pick is max else r.min()
    near = np.flatnonzero(np.abs(r - target) <= 1e-9 * max(1.0, abs(target)))
    return pick(Fraction(int(counts[i]), int(sizes[i])) for i in near)


def density(e, spec: FolnerSpec, upto: int, tail: float = 0.5) -> DensityReport:
    """Ratios |E ∩ F_n| / |F_n| for n = 1..upto.

    ``e`` is a set expression (text or AST), evaluated exactly, or any object
    with a ``lookup`` method.
    """
    if upto < 1:
        raise ConfigError("upto must be >= 1", "upto")
    if isinstance(e, (str, SetExpr)):
        e = parse_set_expr(e) if isinstance(e, str) else e
        member = ExprSet(e, spec.ring)
    else:
        member = e
    if spec.kind == "thick":
        counts, sizes = [], []
        for n in range(1, upto + 1):
            f = thick_folner_set(spec.thick_set, n)
            pts = np.array(f.elements, dtype=object) if spec.ring.name == "z" else f.elements
            m, _ = member.lookup(pts)
            counts.append(int(m.sum()))
            sizes.append(len(f.elements))
        return DensityReport(np.array(counts), np.array(sizes), tail)
    window = spec.window(upto)
    if isinstance(member, ExprSet):
        s = eval_set_expr(member.expr, window)
        hits = s.mask
    else:
        hits, _ = member.lookup(_points(window))
    sizes = np.array(window.prefix_sizes(upto), dtype=np.int64)
    cum = np.cumsum(hits, dtype=np.int64)
    return DensityReport(cum[sizes - 1], sizes, tail)


# ---------------------------------------------------------------------------


MAX_FS_GENERATORS = 24


def finite_sums(z: list, ring: Ring | None = None) -> list:
    """All sums over nonempty sub-multisets of ``z``, deduplicated and sorted."""
    if not z:
        raise ConfigError("finite_sums needs a nonempty list", "values")
    if len(z) > MAX_FS_GENERATORS:
        raise SizeLimit(f"at most {MAX_FS_GENERATORS} generators, got {len(z)}")
    add = ring.add if ring is not None else (lambda a, b: a + b)
    sums: set = set()
    for x in z:
        sums |= {add(s, x) for s in sums}
        sums.add(x)
    return sorted(sums, key=ring.key if ring is not None else None)


def exact_points(window: WindowSpec, elements: list) -> Any:
    """Elements in the representation ``lookup`` expects for this window's ring."""
    if window.is_integer:
        return np.array(elements, dtype=object)
    return elements


def as_set(s, ring: Ring):
    """Coerce text / AST into an exact :class:`ExprSet`; pass other sets through."""
    if isinstance(s, (str, SetExpr)):
        return ExprSet(s, ring)
    return s


def image_window_elements(g: AffineMap, pts) -> Any:
    return image_points(g, pts)
