"""The two explicit counterexample sets and their pattern verifiers.

``thickbad``: a subset of N that is additively and multiplicatively thick yet
contains no pair {x+y, xy} with x, y > 2.  Blocks alternate between dilates
p_N*[1, N] of [1, N] by rapidly growing primes and long intervals.

``example45``: a subset of Q that is thick for both operations but contains
no triple {x, x+1, 2x}.  Blocks alternate between translates a_N + G_N and
dilates a_N * G_N of the Farey window G_N.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Any, Iterable

import numpy as np

from .arith import is_prime, next_prime, primality_method
from .errors import BlockLimit, UnsupportedPattern
from .rings import farey_elements

MAX_BLOCKS = 12


def _as_fraction(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def _farey_height(x: Fraction) -> int:
    return max(abs(x.numerator), x.denominator)


# ---------------------------------------------------------------------------
# blocks


@dataclass(frozen=True)
class APBlock:
    """{step * j : 1 <= j <= count}"""

    step: int
    count: int
    kind = "ap"

    def contains(self, x) -> bool:
        x = _as_fraction(x)
        if x.denominator != 1:
            return False
        q, r = divmod(x.numerator, self.step)
        return r == 0 and 1 <= q <= self.count

    @property
    def min_abs(self):
        return self.step

    @property
    def max_abs(self):
        return self.step * self.count

    @property
    def max(self):
        return self.step * self.count

    has_zero = False

    def size(self) -> int:
        return self.count

    def elements(self) -> list:
        return [self.step * j for j in range(1, self.count + 1)]

    def elements_in_range(self, lo, hi) -> list:
        j0 = max(1, -(-lo // self.step))
        j1 = min(self.count, hi // self.step)
        return [self.step * j for j in range(j0, j1 + 1)]

    def int_mask(self, pts: np.ndarray) -> np.ndarray:
        return (pts % self.step == 0) & (pts >= self.step) & (pts <= self.step * self.count)

    def to_json(self) -> dict:
        return {"type": "ap", "step": str(self.step), "count": self.count}


@dataclass(frozen=True)
class IntervalBlock:
    """{lo, lo+1, ..., hi}"""

    lo: int
    hi: int
    kind = "interval"

    def contains(self, x) -> bool:
        x = _as_fraction(x)
        return x.denominator == 1 and self.lo <= x.numerator <= self.hi

    @property
    def min_abs(self):
        return self.lo

    @property
    def max_abs(self):
        return self.hi

    @property
    def max(self):
        return self.hi

    has_zero = False

    def size(self) -> int:
        return self.hi - self.lo + 1

    def elements(self) -> list:
        return list(range(self.lo, self.hi + 1))

    def elements_in_range(self, lo, hi) -> list:
        return list(range(max(lo, self.lo), min(hi, self.hi) + 1))

    def int_mask(self, pts: np.ndarray) -> np.ndarray:
        return (pts >= self.lo) & (pts <= self.hi)

    def to_json(self) -> dict:
        return {"type": "interval", "lo": str(self.lo), "hi": str(self.hi)}


@dataclass(frozen=True)
class FareyShift:
    """shift + Farey(height); used for odd blocks of example45 (shift > height)."""

    shift: Fraction
    height: int
    kind = "farey_shift"

    def contains(self, x) -> bool:
        return _farey_height(_as_fraction(x) - self.shift) <= self.height

    @property
    def min_abs(self):
        return self.shift - self.height

    @property
    def max_abs(self):
        return self.shift + self.height

    @property
    def max(self):
        return self.shift + self.height

    has_zero = False

    def size(self) -> int:
        return len(farey_elements(self.height))

    def elements(self) -> list:
        return sorted(self.shift + g for g in farey_elements(self.height))

    def int_mask(self, pts: np.ndarray) -> np.ndarray:
        if self.shift.denominator == 1:
            return np.abs(pts - int(self.shift)) <= self.height
        return np.zeros(len(pts), dtype=bool)

    def to_json(self) -> dict:
        return {"type": "farey_shift", "shift": str(self.shift), "height": self.height}


@dataclass(frozen=True)
class FareyScale:
    """scale * Farey(height); used for even blocks of example45."""

    scale: Fraction
    height: int
    kind = "farey_scale"

    def contains(self, x) -> bool:
        return _farey_height(_as_fraction(x) / self.scale) <= self.height

    @property
    def min_abs(self):
        return self.scale / self.height

    @property
    def max_abs(self):
        return self.scale * self.height

    @property
    def max(self):
        return self.scale * self.height

    has_zero = True

    def size(self) -> int:
        return len(farey_elements(self.height))

    def elements(self) -> list:
        return sorted(self.scale * g for g in farey_elements(self.height))

    def int_mask(self, pts: np.ndarray) -> np.ndarray:
        out = np.zeros(len(pts), dtype=bool)
        near = np.flatnonzero(np.abs(pts) <= self.max_abs)
        for i in near:
            out[i] = self.contains(int(pts[i]))
        return out

    def to_json(self) -> dict:
        return {"type": "farey_scale", "scale": str(self.scale), "height": self.height}


Block = APBlock | IntervalBlock | FareyShift | FareyScale


def block_from_json(obj: dict) -> Block:
    t = obj["type"]
    if t == "ap":
        return APBlock(int(obj["step"]), int(obj["count"]))
    if t == "interval":
        return IntervalBlock(int(obj["lo"]), int(obj["hi"]))
    if t == "farey_shift":
        return FareyShift(Fraction(obj["shift"]), int(obj["height"]))
    if t == "farey_scale":
        return FareyScale(Fraction(obj["scale"]), int(obj["height"]))
    raise ValueError(f"unknown block type {t!r}")


@dataclass
class BlockSet:
    """A union of pairwise disjoint blocks E_1, E_2, ...

    Block |x|-ranges are increasing and disjoint (zero excepted), so membership
    is a binary search over block boundaries followed by one block test.
    """

    blocks: list
    construction: str
    params: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        self._lo = [b.min_abs for b in self.blocks]
        self._hi = [b.max_abs for b in self.blocks]
        self._zero = any(b.has_zero for b in self.blocks)
        for i in range(1, len(self.blocks)):
            if not self._hi[i - 1] < self._lo[i]:
                raise ValueError(f"block {i + 1} overlaps block {i} in absolute value")

    def __len__(self) -> int:
        return len(self.blocks)

    def __contains__(self, x) -> bool:
        if x == 0:
            return self._zero
        ax = abs(x)
        i = bisect.bisect_right(self._lo, ax) - 1
        return i >= 0 and ax <= self._hi[i] and self.blocks[i].contains(x)

    contains = __contains__

    def which_block(self, x) -> int | None:
        """1-based index N of the block E_N containing ``x``."""
        for i, b in enumerate(self.blocks):
            if b.contains(x):
                return i + 1
        return None

    def int_mask(self, pts: np.ndarray) -> np.ndarray:
        """Vectorised membership for an integer array (int64 or object)."""
        out = np.zeros(len(pts), dtype=bool)
        if len(pts) == 0:
            return out
        top = int(np.abs(pts).max())
        for b in self.blocks:
            if b.min_abs > top:
                break
            out |= b.int_mask(pts)
        if self._zero:
            out |= pts == 0
        return out

    def elements_in_range(self, lo, hi) -> list:
        """Integer-valued blocks only: sorted elements within [lo, hi]."""
        out = []
        for b in self.blocks:
            if b.min_abs > max(abs(lo), abs(hi)):
                break
            out += b.elements_in_range(lo, hi)
        return sorted(out)

    def elements(self) -> list:
        """All elements, sorted.  Only sensible when every block is small."""
        out = []
        for b in self.blocks:
            out += b.elements()
        return sorted(set(out))

    def size(self) -> int:
        """Distinct elements; 0 may sit in several blocks and counts once."""
        zeros = sum(1 for b in self.blocks if b.has_zero)
        return sum(b.size() for b in self.blocks) - max(0, zeros - 1)

    def to_json(self) -> dict:
        return {
            "construction": self.construction,
            "params": {k: str(v) if isinstance(v, Fraction) else v for k, v in self.params.items()},
            "blocks": [b.to_json() for b in self.blocks],
            **{k: _jsonable(v) for k, v in self.extra.items()},
        }

    @classmethod
    def from_json(cls, obj: dict) -> "BlockSet":
        blocks = [block_from_json(b) for b in obj["blocks"]]
        extra = {k: v for k, v in obj.items() if k not in ("construction", "params", "blocks")}
        return cls(blocks, obj["construction"], dict(obj.get("params", {})), extra)


def _jsonable(v):
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, int) and not isinstance(v, bool):
        return str(v)
    return v


# ---------------------------------------------------------------------------
# thickbad


def thickbad_primes(count: int) -> list[int]:
    """p_1 = 5 and p_{N+1} = least prime > 4 (N p_N)^4."""
    ps = [5]
    while len(ps) < count:
        n = len(ps)
        ps.append(next_prime(4 * (n * ps[-1]) ** 4))
    return ps


def build_thickbad(k: int) -> BlockSet:
    """Blocks E_1..E_k with E_{2N-1} = p_N [1, N] and E_{2N} = [(N p_N)^2 + 1, 2 (N p_N)^2 - 3]."""
    if not 1 <= k <= MAX_BLOCKS:
        raise BlockLimit(f"thickbad supports 1..{MAX_BLOCKS} blocks, got {k}")
    primes = thickbad_primes((k + 1) // 2)
    blocks: list = []
    for n, p in enumerate(primes, start=1):
        blocks.append(APBlock(p, n))
        if len(blocks) < k:
            m = (n * p) ** 2
            blocks.append(IntervalBlock(m + 1, 2 * m - 3))
    return BlockSet(
        blocks[:k],
        "thickbad",
        {"blocks": k},
        {"primes": primes, "primality": [primality_method(p) for p in primes]},
    )


def thickbad_chain_checks(bs: BlockSet) -> list[dict]:
    """The two growth inequalities behind pattern-freeness, per consecutive block pair.

    (max E_{2N-1})^2 < min E_{2N}  and  (max E_{2N})^2 < p_{N+1} = min E_{2N+1}.
    Also re-checks p_{N+1} > 4 (N p_N)^4 and primality.
    """
    out = []
    blocks, primes = bs.blocks, [int(p) for p in bs.extra["primes"]]
    for i in range(len(blocks) - 1):
        a, b = blocks[i], blocks[i + 1]
        out.append({"pair": (i + 1, i + 2), "ok": a.max_abs**2 < b.min_abs})
    for n in range(1, len(primes)):
        p, q = primes[n - 1], primes[n]
        out.append({"prime": n + 1, "ok": q > 4 * (n * p) ** 4 and is_prime(q)})
    return out


# ---------------------------------------------------------------------------
# example45


def min_gap(values: Iterable[Fraction]) -> Fraction:
    v = sorted(values)
    return min(b - a for a, b in zip(v, v[1:]))


def build_example45(k: int, seed: Iterable = (1,)) -> BlockSet:
    """Blocks E_1..E_k over Q, with G_N the Farey window of height N.

    Odd N:  E_N = a_N + G_N,  a_N = 2 max E_{N-1} + max G_N - 2 min G_N.
    Even N: E_N = a_N * G_N,  a_N = 1/min(gaps of G_N) + 2 max E_{N-1} / min|G_N \\ 0|.
    ``seed`` is E_0; it feeds the recursion but is not part of the set.
    """
    if not 1 <= k <= MAX_BLOCKS:
        raise BlockLimit(f"example45 supports 1..{MAX_BLOCKS} blocks, got {k}")
    seed = [Fraction(s) for s in seed]
    prev_max = max(seed)
    blocks: list = []
    a_values = []
    for n in range(1, k + 1):
        g = farey_elements(n)
        if n % 2:
            a = 2 * prev_max + max(g) - 2 * min(g)
            blk = FareyShift(a, n)
        else:
            smallest = min(abs(x) for x in g if x != 0)
            a = 1 / min_gap(g) + 2 * prev_max / smallest
            blk = FareyScale(a, n)
        a_values.append(a)
        blocks.append(blk)
        prev_max = blk.max
    return BlockSet(
        blocks,
        "example45",
        {"blocks": k, "seed": ",".join(str(s) for s in seed)},
        {"a": a_values},
    )


def example45_growth_checks(bs: BlockSet) -> list[dict]:
    """min{|x| : x in E_{N+1}, x != 0} > 2 max{|x| : x in E_N} for consecutive blocks."""
    out = []
    for i in range(len(bs.blocks) - 1):
        a, b = bs.blocks[i], bs.blocks[i + 1]
        out.append({"pair": (i + 1, i + 2), "ok": b.min_abs > 2 * a.max_abs})
    return out


# ---------------------------------------------------------------------------
# verification


@dataclass
class Verdict:
    ok: bool
    pattern: str
    checked: int
    witness: dict | None = None

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "pattern": self.pattern,
            "checked": self.checked,
            "witness": None if self.witness is None else {k: _jsonable(v) for k, v in self.witness.items()},
        }


PATTERNS = ("sumproduct", "triple")


def _window_elements(s, window) -> list:
    """Elements of ``s`` lying in ``window`` (a WindowSpec) or all of them if ``None``."""
    if isinstance(s, BlockSet):
        if window is not None and window.shape == "natbox":
            return s.elements_in_range(1, window.param)
        if window is not None and window.shape == "intbox":
            return s.elements_in_range(-window.param, window.param)
        els = s.elements()
    else:
        els = sorted(s)
    if window is None:
        return els
    return [e for e in els if window.index_of(e) is not None]


def verify_no_pattern(s, pattern: str, window=None, min_xy: int = 3) -> Verdict:
    """Search ``s`` (restricted to ``window``) for a forbidden configuration.

    ``sumproduct``: b = x+y and a = xy both in the set with x, y >= ``min_xy``;
    decided per pair (b, a) by testing whether b^2 - 4a is a perfect square.
    ``triple``: some x with {x, x+1, 2x} in the set.
    """
    if pattern not in PATTERNS:
        raise UnsupportedPattern(f"unknown pattern {pattern!r}; expected one of {PATTERNS}")
    els = _window_elements(s, window)
    member = s.__contains__
    if pattern == "triple":
        for x in els:
            if member(x + 1) and member(2 * x):
                return Verdict(False, pattern, len(els), {"x": x, "config": [x, x + 1, 2 * x]})
        return Verdict(True, pattern, len(els))

    best = None
    ints = [int(e) for e in els if _as_fraction(e).denominator == 1]
    for b in ints:
        for a in ints:
            disc = b * b - 4 * a
            if disc < 0:
                continue
            r = isqrt(disc)
            if r * r != disc or (b + r) % 2:
                continue
            x, y = (b - r) // 2, (b + r) // 2
            if x >= min_xy and (best is None or (x, y) < (best["x"], best["y"])):
                best = {"x": x, "y": y, "sum": b, "product": a}
    if best is not None:
        return Verdict(False, pattern, len(ints), best)
    return Verdict(True, pattern, len(ints))
