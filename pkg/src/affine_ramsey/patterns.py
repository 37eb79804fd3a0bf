"""Monochromatic configurations, sum-product pairs inside sets, and Ramsey windows.

Configurations are sets: coincident elements collapse.  Nondegeneracy is
controlled per pattern by :class:`PatternKind` flags so every convention is
explicit.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import Any, Callable

import numpy as np

from .errors import (
    BudgetExceeded,
    ConfigError,
    NotMultSyndeticOnWindow,
    RingMismatch,
    UnsupportedPattern,
)
from .rings import Ring, parse_ring
from .windows import WindowSet, WindowSpec, parse_window, window_from_json

# ---------------------------------------------------------------------------
# pattern kinds


@dataclass(frozen=True)
class PatternKind:
    """A two-parameter configuration together with its nondegeneracy rules.

    ``x_excluded`` / ``y_excluded`` list small integers (mapped into the ring)
    that x, resp. y, may not equal.  ``sum_ne_product`` forbids x + y == x*y,
    where {x+y, xy} would collapse to one point.  ``min_value`` bounds x and y
    from below on ordered windows.
    """

    name: str
    x_excluded: tuple[int, ...] = (0,)
    y_excluded: tuple[int, ...] = (0,)
    sum_ne_product: bool = False
    allow_equal: bool = True
    min_value: int | None = None
    symmetric: bool = True

    def elements(self, R: Ring, x, y) -> tuple:
        """The configuration as a tuple, duplicates removed, canonically sorted."""
        s, p = R.add(x, y), R.mul(x, y)
        raw = {
            "schur": (x, y, s),
            "product": (x, y, p),
            "sumproduct_pair": (s, p),
            "sumproduct_quad": (x, y, s, p),
            "restricted_pair": (s, p),
        }[self.name]
        return tuple(sorted(set(raw), key=R.key))

    def admissible(self, R: Ring, x, y) -> bool:
        if any(x == R.normalize(k) for k in self.x_excluded):
            return False
        if any(y == R.normalize(k) for k in self.y_excluded):
            return False
        if not self.allow_equal and x == y:
            return False
        if self.sum_ne_product and R.add(x, y) == R.mul(x, y):
            return False
        if self.min_value is not None and (x < self.min_value or y < self.min_value):
            return False
        return True

    def relaxed(self) -> "PatternKind":
        return replace(self, x_excluded=(), y_excluded=(), sum_ne_product=False, allow_equal=True, min_value=None)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "x_excluded": list(self.x_excluded),
            "y_excluded": list(self.y_excluded),
            "sum_ne_product": self.sum_ne_product,
            "allow_equal": self.allow_equal,
            "min_value": self.min_value,
        }


SCHUR = PatternKind("schur", (0,), (0,))
PRODUCT = PatternKind("product", (0, 1), (0, 1))
SUMPRODUCT_PAIR = PatternKind("sumproduct_pair", (0, 1), (0, 1), sum_ne_product=True)
SUMPRODUCT_QUAD = PatternKind("sumproduct_quad", (0, 1), (0, 1), sum_ne_product=True)
RESTRICTED_PAIR = PatternKind("restricted_pair", (0,), (0, 1), symmetric=False)

PATTERNS = {p.name: p for p in (SCHUR, PRODUCT, SUMPRODUCT_PAIR, SUMPRODUCT_QUAD, RESTRICTED_PAIR)}
_ALIASES = {
    "schurtriple": "schur",
    "producttriple": "product",
    "sumproductpair": "sumproduct_pair",
    "sumproduct": "sumproduct_pair",
    "pair": "sumproduct_pair",
    "sumproductquad": "sumproduct_quad",
    "quad": "sumproduct_quad",
    "restrictedpair": "restricted_pair",
    "restricted": "restricted_pair",
}


def pattern_kind(name: str | PatternKind) -> PatternKind:
    if isinstance(name, PatternKind):
        return name
    key = name.strip().lower().replace("-", "_")
    key = _ALIASES.get(key.replace("_", ""), key)
    if key not in PATTERNS:
        raise UnsupportedPattern(f"unknown pattern {name!r}; expected one of {sorted(PATTERNS)}")
    return PATTERNS[key]


# ---------------------------------------------------------------------------
# colorings


@dataclass
class Coloring:
    window: WindowSpec
    colors: np.ndarray
    r: int

    def __post_init__(self):
        self.colors = np.asarray(self.colors, dtype=np.int64)
        if self.r < 1:
            raise ConfigError("a coloring needs r >= 1", "colors")
        if self.colors.shape != (self.window.size,):
            raise ConfigError(f"{len(self.colors)} colors for a window of {self.window.size}", "coloring")
        if len(self.colors) and (self.colors.min() < 0 or self.colors.max() >= self.r):
            raise ConfigError(f"colors must lie in [0, {self.r})", "coloring")

    @classmethod
    def from_function(cls, window: WindowSpec, r: int, f: Callable[[Any], int]) -> "Coloring":
        return cls(window, np.array([f(x) for x in window.elements()], dtype=np.int64), r)

    @classmethod
    def from_sets(cls, window: WindowSpec, sets: list[WindowSet]) -> "Coloring":
        """Color i = first set containing the point; points in none get color len(sets)."""
        colors = np.full(window.size, len(sets), dtype=np.int64)
        for i in reversed(range(len(sets))):
            colors[sets[i].mask] = i
        r = len(sets) + int((colors == len(sets)).any())
        return cls(window, colors, max(r, 1))

    @classmethod
    def random(cls, window: WindowSpec, r: int, rng: np.random.Generator) -> "Coloring":
        return cls(window, rng.integers(0, r, window.size), r)

    @property
    def ring(self) -> Ring:
        return self.window.ring

    def color_of(self, x) -> int | None:
        i = self.window.index_of(x)
        return None if i is None else int(self.colors[i])

    def cell(self, c: int) -> WindowSet:
        return WindowSet(self.window, self.colors == c)

    def to_json(self) -> dict:
        return {"window": self.window.to_json(), "r": self.r, "colors": self.colors.tolist()}

    @classmethod
    def from_json(cls, obj: dict | str) -> "Coloring":
        if isinstance(obj, str):
            obj = json.loads(obj)
        w = obj["window"]
        window = parse_window(w) if isinstance(w, str) else window_from_json(w)
        colors = obj["colors"]
        r = obj.get("r", (max(colors) + 1) if colors else 1)
        return cls(window, np.array(colors, dtype=np.int64), r)


def parity_coloring(window: WindowSpec) -> Coloring:
    return Coloring.from_function(window, 2, lambda x: x % 2)


# ---------------------------------------------------------------------------
# witnesses


@dataclass
class Witness:
    x: Any
    y: Any
    elements: tuple
    color: int | None = None
    derivation: str | None = None
    data: dict = field(default_factory=dict)

    def to_json(self, R: Ring) -> dict:
        out = {"x": R.format(self.x), "y": R.format(self.y), "elements": [R.format(e) for e in self.elements]}
        if self.color is not None:
            out["color"] = self.color
        if self.derivation is not None:
            out["derivation"] = self.derivation
        if self.data:
            out["data"] = {k: R.format(v) if not isinstance(v, (bool, str)) else v for k, v in self.data.items()}
        return out


@dataclass
class WitnessList:
    pattern: PatternKind
    ring: Ring
    witnesses: list[Witness]
    count: int
    truncated: bool
    skipped_out_of_window: int = 0
    extra: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.witnesses)

    def __iter__(self):
        return iter(self.witnesses)

    def __bool__(self) -> bool:
        return self.count > 0

    @property
    def first(self) -> Witness | None:
        return self.witnesses[0] if self.witnesses else None

    def to_json(self) -> dict:
        out = {
            "pattern": self.pattern.to_json(),
            "ring": self.ring.name,
            "count": self.count,
            "truncated": self.truncated,
            "skipped_out_of_window": self.skipped_out_of_window,
            "witnesses": [w.to_json(self.ring) for w in self.witnesses],
        }
        out.update(self.extra)
        return out


def _finish(p, R, found: list[Witness], max_witnesses: int, skipped: int, extra=None) -> WitnessList:
    found.sort(key=lambda w: (R.key(w.x), R.key(w.y)))
    return WitnessList(p, R, found[:max_witnesses], len(found), len(found) > max_witnesses, skipped, extra or {})


# ---------------------------------------------------------------------------
# monochromatic search


def _int_configs(p: PatternKind, x: int, ys: np.ndarray) -> list[np.ndarray]:
    xs = np.full(len(ys), x, dtype=ys.dtype)
    s, q = xs + ys, xs * ys
    return {
        "schur": [xs, ys, s],
        "product": [xs, ys, q],
        "sumproduct_pair": [s, q],
        "sumproduct_quad": [xs, ys, s, q],
        "restricted_pair": [s, q],
    }[p.name]


def _int_admissible(p: PatternKind, x: int, ys: np.ndarray) -> np.ndarray:
    ok = np.ones(len(ys), dtype=bool)
    if x in p.x_excluded:
        ok[:] = False
    for k in p.y_excluded:
        ok &= ys != k
    if not p.allow_equal:
        ok &= ys != x
    if p.sum_ne_product:
        ok &= x + ys != x * ys
    if p.min_value is not None:
        ok &= ys >= p.min_value
        if x < p.min_value:
            ok[:] = False
    return ok


def _pairs_int(p: PatternKind, pts: np.ndarray, ypts: np.ndarray, on_row):
    """Drive ``on_row(x, ys, configs, admissible)`` over x in canonical order."""
    big = int(max(np.abs(pts).max(initial=0), np.abs(ypts).max(initial=0)))
    if big * big >= 2**62:
        pts, ypts = pts.astype(object), ypts.astype(object)
    for i, x in enumerate(pts.tolist()):
        ys = ypts[i:] if p.symmetric and ypts is pts else ypts
        on_row(x, ys, _int_configs(p, x, ys), _int_admissible(p, x, ys))


def find_monochromatic(
    c: Coloring, p: PatternKind | str, max_witnesses: int = 100, y_window: WindowSpec | None = None
) -> WitnessList:
    """Configurations of ``p`` lying inside one color class of ``c``.

    Pairs (x, y) run in canonical order with x no later than y for symmetric
    patterns.  For ``restricted_pair`` n = y runs over ``y_window`` (default:
    the coloring's window).  Configurations leaving the window are skipped and
    counted.
    """
    p = pattern_kind(p)
    W, R = c.window, c.ring
    yw = y_window or W
    if yw.ring != R:
        raise RingMismatch(f"{yw.ring.name} vs {R.name}")
    found: list[Witness] = []
    skipped = 0

    if W.is_integer and yw.is_integer:
        pts = W.int_array()
        ypts = pts if yw == W else yw.int_array()

        def on_row(x, ys, cfg, ok):
            nonlocal skipped
            idx = [W.int_index(e) for e in cfg]
            outside = np.zeros(len(ys), dtype=bool)
            for ix in idx:
                outside |= ix < 0
            skipped += int((outside & ok).sum())
            good = ok & ~outside
            if not good.any():
                return
            col = [np.where(ix >= 0, c.colors[np.maximum(ix, 0)], -1) for ix in idx]
            mono = good.copy()
            for cc in col[1:]:
                mono &= cc == col[0]
            for j in np.flatnonzero(mono):
                y = ys[j]
                found.append(Witness(x, int(y), p.elements(R, x, int(y)), int(col[0][j])))

        _pairs_int(p, pts, ypts, on_row)
        return _finish(p, R, found, max_witnesses, skipped)

    els = W.elements()
    yels = els if yw == W else yw.elements()
    for i, x in enumerate(els):
        for y in (yels[i:] if p.symmetric and yels is els else yels):
            if not p.admissible(R, x, y):
                continue
            cfg = p.elements(R, x, y)
            cols = [c.color_of(e) for e in cfg]
            if None in cols:
                skipped += 1
                continue
            if len(set(cols)) == 1:
                found.append(Witness(x, y, cfg, cols[0]))
    return _finish(p, R, found, max_witnesses, skipped)


def pattern_instances(window: WindowSpec, p: PatternKind | str) -> set[frozenset]:
    """Every admissible configuration contained in ``window``, colour-blind."""
    p = pattern_kind(p)
    R = window.ring
    els = window.elements()
    out = set()
    for i, x in enumerate(els):
        for y in els[i:] if p.symmetric else els:
            if p.admissible(R, x, y):
                cfg = p.elements(R, x, y)
                if all(e in window for e in cfg):
                    out.add(frozenset(cfg))
    return out


# ---------------------------------------------------------------------------
# sum-product pairs inside a set

_SUBRINGS = {"q": "z", "quadfield": "quadint", "ratfunc": "polyfp"}


def _check_subring(R: Ring, subring: str | bool) -> None:
    kind = R.name.partition(":")[0]
    if kind not in _SUBRINGS:
        raise RingMismatch(f"{R.name} has no designated subring")
    if subring is True:
        return
    want = subring.partition(":")[0].lower()
    if want != _SUBRINGS[kind]:
        raise RingMismatch(f"{subring} is not the designated subring of {R.name} ({_SUBRINGS[kind]})")


def sumproduct_in_set(
    s: WindowSet,
    subring: str | bool | None = None,
    max_witnesses: int = 100,
    y_window: WindowSpec | None = None,
    pattern: PatternKind | str | None = None,
) -> WitnessList:
    """Pairs (x, y) with {x+y, xy} in ``s``.

    For each candidate y the admissible x are exactly (S - y) ∩ (S / y), which
    is recorded as the witness's derivation.  With ``subring`` set, y runs over
    the designated subring (Z in Q, the integers of Q(sqrt d), F_p[t] in
    F_p(t)) inside ``y_window`` and the pattern is ``restricted_pair``.
    """
    R = s.ring
    yw = y_window or s.window
    if yw.ring != R:
        raise RingMismatch(f"{yw.ring.name} vs {R.name}")
    if subring:
        _check_subring(R, subring)
        p = pattern_kind(pattern or RESTRICTED_PAIR)
        ys = [y for y in yw.elements() if R.in_subring(y)]
    else:
        p = pattern_kind(pattern or SUMPRODUCT_PAIR)
        ys = yw.elements()
    members = s.elements()
    found: dict[tuple, Witness] = {}
    skipped = 0

    def emit(x, y):
        if p.symmetric and R.key(y) < R.key(x):
            x, y = y, x
        if (x, y) not in found:
            found[(x, y)] = Witness(x, y, p.elements(R, x, y), derivation=f"x in (S-({R.format(y)})) ∩ (S/({R.format(y)}))")

    if s.window.is_integer and yw.is_integer:
        sv = np.array(members, dtype=np.int64)
        for y in ys:
            xs = sv - y
            ok = _int_admissible_x(p, xs, y)
            prod = safe_int(xs, y) * y
            hit, out = s.lookup(prod)
            skipped += int((out & ok).sum())
            for x in xs[ok & hit].tolist():
                emit(int(x), y)
    else:
        for y in ys:
            for t in members:
                x = R.sub(t, y)
                if not p.admissible(R, x, y):
                    continue
                q = R.mul(x, y)
                i = s.window.index_of(q)
                if i is None:
                    skipped += 1
                elif s.mask[i]:
                    emit(x, y)
    return _finish(p, R, list(found.values()), max_witnesses, skipped)


def safe_int(a: np.ndarray, m: int) -> np.ndarray:
    if len(a) and int(np.abs(a).max()) * abs(m) >= 2**62:
        return a.astype(object)
    return a


def _int_admissible_x(p: PatternKind, xs: np.ndarray, y: int) -> np.ndarray:
    ok = np.ones(len(xs), dtype=bool)
    for k in p.x_excluded:
        ok &= xs != k
    if y in p.y_excluded:
        ok[:] = False
    if not p.allow_equal:
        ok &= xs != y
    if p.sum_ne_product:
        ok &= xs + y != xs * y
    if p.min_value is not None:
        ok &= xs >= p.min_value
        if y < p.min_value:
            ok[:] = False
    return ok


# ---------------------------------------------------------------------------
# minimal Ramsey window


@dataclass
class FoundAt:
    """Every r-coloring of [1, n] contains the pattern; ``evidence`` colors [1, n-1] without it."""

    n: int
    evidence: list[int]
    nodes: int
    r: int

    def evidence_coloring(self) -> Coloring:
        return Coloring(parse_window(f"natbox:{len(self.evidence)}"), np.array(self.evidence, dtype=np.int64), self.r)

    def to_json(self) -> dict:
        return {"status": "found", "n": self.n, "nodes": self.nodes, "evidence": self.evidence_coloring().to_json()}


@dataclass
class ExhaustedAt:
    """A pattern-free r-coloring of [1, n] exists (``evidence``)."""

    n: int
    evidence: list[int]
    nodes: int
    r: int

    def evidence_coloring(self) -> Coloring:
        return Coloring(parse_window(f"natbox:{self.n}"), np.array(self.evidence, dtype=np.int64), self.r)

    def to_json(self) -> dict:
        return {"status": "exhausted", "n": self.n, "nodes": self.nodes, "evidence": self.evidence_coloring().to_json()}


DEFAULT_NODE_BUDGET = 20_000_000


def nat_configs(p: PatternKind, max_n: int) -> list[list[int]]:
    """For each k <= max_n, bitmasks of (config minus k) over configs in [1, max_n] with maximum k."""
    p = pattern_kind(p)
    Z = parse_ring("z")
    by_max: list[set[int]] = [set() for _ in range(max_n + 1)]
    lo = max(1, p.min_value or 1)
    for x in range(lo, max_n + 1):
        for y in range(x if p.symmetric else lo, max_n + 1):
            if x * y > max_n and x + y > max_n:
                break
            if not p.admissible(Z, x, y):
                continue
            cfg = p.elements(Z, x, y)
            if min(cfg) < 1 or max(cfg) > max_n:
                continue
            k = max(cfg)
            by_max[k].add(sum(1 << e for e in cfg if e != k))
    return [sorted(b) for b in by_max]


def minimal_ramsey_window(
    p: PatternKind | str, r: int, max_n: int, budget: int | None = DEFAULT_NODE_BUDGET
) -> FoundAt | ExhaustedAt:
    """Least N <= max_n such that every r-coloring of [1, N] has a monochromatic configuration.

    Depth-first over colorings in element order, colors in index order,
    extending only pattern-free prefixes.  A new color is opened only as the
    next unused index, which removes the r! relabelings.
    """
    if r < 1 or max_n < 1:
        raise ConfigError("need r >= 1 and max_n >= 1")
    p = pattern_kind(p)
    forbid = nat_configs(p, max_n)
    assign = [0] * (max_n + 2)
    trial = [0] * (max_n + 2)
    opened = [0] * (max_n + 2)  # colors used among 1..k-1
    bits = [0] * r
    best, best_col, nodes = 0, [], 0
    k = 1
    while k >= 1:
        if k > max_n:
            return ExhaustedAt(max_n, assign[1 : max_n + 1], nodes, r)
        c = trial[k]
        if c >= min(r, opened[k] + 1):
            k -= 1
            if k >= 1:
                bits[assign[k]] ^= 1 << k
                trial[k] += 1
            continue
        nodes += 1
        if budget is not None and nodes > budget:
            raise BudgetExceeded(f"node budget {budget} exhausted at depth {k}", nodes)
        cb = bits[c]
        if any(m & cb == m for m in forbid[k]):
            trial[k] += 1
            continue
        assign[k] = c
        bits[c] |= 1 << k
        if k > best:
            best, best_col = k, assign[1 : k + 1]
        k += 1
        trial[k] = 0
        opened[k] = max(opened[k - 1], c + 1)
    return FoundAt(best + 1, best_col, nodes, r)


# ---------------------------------------------------------------------------
# pairs inside multiplicatively syndetic sets


def multsyndetic_pattern_check(
    s: WindowSet, f: list[int], max_witnesses: int = 100, relaxed: bool = False
) -> WitnessList:
    """Pairs {a + bn, abn} in ``s`` following the covering argument.

    First checks that the union of S/n over n in F covers the probe window
    [1, N // max F].  Then searches a, b with a + bF inside S and some n in F
    with abn in S.  Witnesses are (x, y) = (a, bn) with a, b, n in ``data``.
    """
    W = s.window
    if W.shape != "natbox":
        raise RingMismatch("multsyndetic_pattern_check works on natbox windows")
    if not f or min(f) < 1:
        raise ConfigError("F must be a nonempty list of positive integers", "F")
    f = sorted(set(int(n) for n in f))
    N, top = W.param, max(f)
    probe = np.arange(1, N // top + 1, dtype=np.int64)
    cover = np.zeros(len(probe), dtype=bool)
    for n in f:
        cover |= s.lookup(probe * n)[0]
    if not cover.all():
        unc = probe[~cover]
        raise NotMultSyndeticOnWindow(
            f"union of S/n over F misses {len(unc)} points of [1, {N // top}], first {unc[:5].tolist()}",
            unc[:20].tolist(),
        )
    p = SUMPRODUCT_PAIR.relaxed() if relaxed else SUMPRODUCT_PAIR
    R = W.ring
    mask = np.concatenate([[False], s.mask])  # mask[v] for v in 0..N
    found: list[Witness] = []
    fa = np.array(f, dtype=np.int64)
    for a in range(1, N + 1):
        bmax = min((N - a) // top, N // (a * f[0]))
        if bmax < 1:
            continue
        b = np.arange(1, bmax + 1, dtype=np.int64)
        ok = np.ones(len(b), dtype=bool)
        for n in f:
            ok &= mask[a + b * n]
        for n in f:
            v = a * b * n
            inside = v <= N
            hit = ok & inside & mask[np.minimum(v, N)]
            for bb in b[hit].tolist():
                x, y = a, bb * n
                if p.admissible(R, x, y):
                    found.append(Witness(x, y, p.elements(R, x, y), data={"a": a, "b": bb, "n": n}))
    extra = {"F": f, "probe": f"natbox:{N // top}", "relaxed": relaxed}
    found.sort(key=lambda w: (w.data["a"], w.data["b"], w.data["n"]))
    return WitnessList(p, R, found[:max_witnesses], len(found), len(found) > max_witnesses, 0, extra)


# ---------------------------------------------------------------------------
# independent re-check


def validate_witness(
    w: Witness,
    p: PatternKind | str,
    ring: Ring,
    coloring: Coloring | None = None,
    s: Any = None,
    f: list[int] | None = None,
) -> bool:
    """Recompute ``w`` from (x, y) and confirm membership (or a common color)."""
    p = pattern_kind(p)
    R = ring
    if not p.admissible(R, w.x, w.y):
        return False
    cfg = tuple(sorted(set(p.elements(R, w.x, w.y)), key=R.key))
    if cfg != tuple(w.elements):
        return False
    if coloring is not None:
        cols = {coloring.color_of(e) for e in cfg}
        if None in cols or len(cols) != 1 or (w.color is not None and cols != {w.color}):
            return False
    if s is not None:
        if not all(e in s for e in cfg):
            return False
        if f is not None and w.data:
            a, b, n = w.data["a"], w.data["b"], w.data["n"]
            if not (w.x == a and w.y == b * n and all(a + b * m in s for m in f)):
                return False
    return True
