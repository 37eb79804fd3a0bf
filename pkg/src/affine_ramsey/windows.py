"""Finite windows of a ring and dense membership sets over them."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Any, Iterable

import numpy as np

from .arith import zrank
from .errors import ConfigError, RingMismatch
from .rings import QuadraticIntegers, Ring, farey_elements, parse_ring

SHAPES = ("natbox", "intbox", "farey", "polydeg", "quadbox", "residue", "ratfuncdeg")

_SHAPE_RINGS = {
    "natbox": ("z",),
    "intbox": ("z",),
    "farey": ("q",),
    "polydeg": ("polyfp",),
    "quadbox": ("quadint", "quadfield"),
    "residue": ("zmod",),
    "ratfuncdeg": ("ratfunc",),
}
_DEFAULT_RING = {"natbox": "z", "intbox": "z", "farey": "q"}

_INT64_SAFE = 2**62


@dataclass(frozen=True)
class WindowSpec:
    """A finite, canonically ordered piece of a ring.

    ``natbox:N``  {1..N}            ``intbox:N``  {-N..N}
    ``farey:N``   {p/q : |p| <= N, 1 <= q <= N}
    ``polydeg:d`` polynomials of degree < d
    ``quadbox:N`` {a + b*w : |a|, |b| <= N} (rational a, b of height <= N for quadfield)
    ``residue``   all of Z/n
    ``ratfuncdeg:d`` num/den with both degrees < d
    """

    ring: Ring
    shape: str
    param: int | None = None

    def __post_init__(self):
        if self.shape not in SHAPES:
            raise ConfigError(f"unknown window shape {self.shape!r}", "window")
        kind = self.ring.name.partition(":")[0]
        if kind not in _SHAPE_RINGS[self.shape]:
            raise RingMismatch(f"window {self.shape} does not fit ring {self.ring.name}")
        if self.shape != "residue" and (self.param is None or self.param < 0):
            raise ConfigError(f"window {self.shape} needs a nonnegative size", "window")

    # -- enumeration ---------------------------------------------------------
    @cached_property
    def size(self) -> int:
        s, n = self.shape, self.param
        if s == "natbox":
            return n
        if s == "intbox":
            return 2 * n + 1
        if s == "polydeg":
            return self.ring.p**n
        if s == "residue":
            return self.ring.n
        if s == "quadbox" and isinstance(self.ring, QuadraticIntegers):
            return (2 * n + 1) ** 2
        return len(self.elements())

    def __len__(self) -> int:
        return self.size

    def elements(self) -> list:
        return self._elements

    @cached_property
    def _elements(self) -> list:
        s, n, R = self.shape, self.param, self.ring
        if s == "natbox":
            return list(range(1, n + 1))
        if s == "intbox":
            return R.elements_of_height(n)
        if s == "farey":
            return list(farey_elements(n))
        if s == "polydeg":
            return [R.decode(k) for k in range(R.p**n)]
        if s == "residue":
            return list(range(R.n))
        if s == "quadbox":
            if isinstance(R, QuadraticIntegers):
                return R.elements_of_height(n)
            f = farey_elements(n)
            return sorted(((a, b) for a in f for b in f), key=R.key)
        if s == "ratfuncdeg":
            return [e for e in R.elements_of_height(max(n - 1, 0)) if n > 0]
        raise AssertionError(s)

    @cached_property
    def _index(self) -> dict:
        return {e: i for i, e in enumerate(self.elements())}

    def index_of(self, x) -> int | None:
        """Position of ``x`` in the window enumeration, or ``None`` if outside."""
        s, n = self.shape, self.param
        if s in ("natbox", "intbox"):
            if isinstance(x, Fraction):
                if x.denominator != 1:
                    return None
                x = x.numerator
            if s == "natbox":
                return x - 1 if 1 <= x <= n else None
            return zrank(x) if -n <= x <= n else None
        if s == "residue":
            return x if 0 <= x < self.ring.n else None
        if s == "polydeg":
            return self.ring.code(x) if len(x) <= n else None
        return self._index.get(x)

    def __contains__(self, x) -> bool:
        # height tests, so huge windows need not be enumerated
        if self.shape == "farey":
            x = Fraction(x)
            return max(abs(x.numerator), x.denominator) <= self.param
        if self.shape == "quadbox" and isinstance(self.ring, QuadraticIntegers):
            return max(abs(x[0]), abs(x[1])) <= self.param
        return self.index_of(x) is not None

    @property
    def is_integer(self) -> bool:
        return self.shape in ("natbox", "intbox")

    def int_array(self) -> np.ndarray:
        """Elements as an int64 array (integer windows only)."""
        if self.shape == "natbox":
            return np.arange(1, self.param + 1, dtype=np.int64)
        if self.shape == "intbox":
            i = np.arange(self.size, dtype=np.int64)
            return np.where(i % 2 == 1, (i + 1) // 2, -(i // 2))
        raise RingMismatch("int_array needs an integer window")

    def int_index(self, pts: np.ndarray) -> np.ndarray:
        """Vectorised :meth:`index_of` for integer windows; -1 marks outside."""
        n = self.param
        if pts.dtype == object:
            return np.array([-1 if (i := self.index_of(int(x))) is None else i for x in pts], dtype=np.int64)
        if self.shape == "natbox":
            return np.where((pts >= 1) & (pts <= n), pts - 1, -1)
        inside = (pts >= -n) & (pts <= n)
        return np.where(inside, np.where(pts > 0, 2 * pts - 1, -2 * pts), -1)

    def prefix_sizes(self, upto: int) -> list[int]:
        """Sizes of the nested sub-windows of parameter 1..upto (canonical-order prefixes)."""
        if self.shape in ("natbox",):
            return list(range(1, upto + 1))
        if self.shape == "intbox":
            return [2 * k + 1 for k in range(1, upto + 1)]
        if self.shape == "farey":
            return [len(farey_elements(k)) for k in range(1, upto + 1)]
        if self.shape == "polydeg":
            return [self.ring.p**k for k in range(1, upto + 1)]
        raise ConfigError(f"window {self.shape} has no nested prefix family", "folner")

    # -- text ------------------------------------------------------------------
    def text(self) -> str:
        return self.shape if self.param is None else f"{self.shape}:{self.param}"

    def to_json(self) -> dict:
        return {"ring": self.ring.name, "shape": self.shape, "param": self.param}

    def __str__(self) -> str:
        return f"{self.ring.name}/{self.text()}"


def parse_window(text: str, ring: Ring | str | None = None) -> WindowSpec:
    """Parse ``natbox:100``, ``farey:50``, ``polydeg:4`` (with ``ring``), ``residue`` ..."""
    shape, _, param = text.strip().lower().partition(":")
    if shape not in SHAPES:
        raise ConfigError(f"unknown window shape {shape!r}", "window")
    if ring is None:
        if shape not in _DEFAULT_RING:
            raise ConfigError(f"window {shape} needs an explicit ring", "ring")
        ring = _DEFAULT_RING[shape]
    R = parse_ring(ring) if isinstance(ring, str) else ring
    try:
        p = int(param) if param else None
    except ValueError:
        raise ConfigError(f"bad window size {param!r}", "window") from None
    return WindowSpec(R, shape, p)


def window_from_json(obj: dict, ring: Ring | str | None = None) -> WindowSpec:
    ring = obj.get("ring", ring)
    R = parse_ring(ring) if isinstance(ring, str) else ring
    return WindowSpec(R, obj["shape"], obj.get("param"))


# ---------------------------------------------------------------------------


class WindowSet:
    """A subset of a window, stored as a boolean mask aligned with its enumeration.

    ``out_of_window`` counts points whose membership could not be decided
    because they fell outside some other window (see ``preimage_in_window``).
    """

    __slots__ = ("window", "mask", "out_of_window", "_card")

    def __init__(self, window: WindowSpec, mask, out_of_window: int = 0):
        mask = np.asarray(mask, dtype=bool)
        if mask.shape != (window.size,):
            raise ValueError(f"mask has shape {mask.shape}, window has {window.size} elements")
        mask.setflags(write=False)
        self.window = window
        self.mask = mask
        self.out_of_window = out_of_window
        self._card = int(np.count_nonzero(mask))

    @classmethod
    def from_elements(cls, window: WindowSpec, elements: Iterable) -> "WindowSet":
        mask = np.zeros(window.size, dtype=bool)
        R = window.ring
        for e in elements:
            i = window.index_of(R.normalize(e))
            if i is not None:
                mask[i] = True
        return cls(window, mask)

    @classmethod
    def full(cls, window: WindowSpec) -> "WindowSet":
        return cls(window, np.ones(window.size, dtype=bool))

    @classmethod
    def empty(cls, window: WindowSpec) -> "WindowSet":
        return cls(window, np.zeros(window.size, dtype=bool))

    @property
    def ring(self) -> Ring:
        return self.window.ring

    @property
    def cardinality(self) -> int:
        return self._card

    def __len__(self) -> int:
        return self._card

    def __contains__(self, x) -> bool:
        i = self.window.index_of(x)
        return i is not None and bool(self.mask[i])

    contains = __contains__

    def lookup(self, points) -> tuple[np.ndarray, np.ndarray]:
        """Membership of many points: ``(member, outside_window)`` boolean arrays."""
        w = self.window
        if w.is_integer and isinstance(points, np.ndarray):
            idx = w.int_index(points)
        else:
            idx = np.array([-1 if (i := w.index_of(p)) is None else i for p in points], dtype=np.int64)
        outside = idx < 0
        member = np.zeros(len(idx), dtype=bool)
        member[~outside] = self.mask[idx[~outside]]
        return member, outside

    def elements(self) -> list:
        els = self.window.elements()
        return [els[i] for i in np.flatnonzero(self.mask)]

    def indices(self) -> np.ndarray:
        return np.flatnonzero(self.mask)

    def _check(self, other: "WindowSet") -> None:
        if other.window != self.window:
            raise RingMismatch(f"windows differ: {self.window} vs {other.window}")

    def __or__(self, other):
        self._check(other)
        return WindowSet(self.window, self.mask | other.mask)

    def __and__(self, other):
        self._check(other)
        return WindowSet(self.window, self.mask & other.mask)

    def __sub__(self, other):
        self._check(other)
        return WindowSet(self.window, self.mask & ~other.mask)

    def complement(self) -> "WindowSet":
        """Complement relative to the window."""
        return WindowSet(self.window, ~self.mask)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, WindowSet)
            and other.window == self.window
            and bool(np.array_equal(other.mask, self.mask))
        )

    def __hash__(self):
        return hash((self.window, self.mask.tobytes()))

    def __repr__(self) -> str:
        els = self.elements()
        R = self.ring
        shown = ", ".join(R.format(e) for e in els[:8]) + (", ..." if len(els) > 8 else "")
        return f"WindowSet({self.window}, |S|={self._card}, {{{shown}}})"

    # -- persistence -----------------------------------------------------------
    def to_json(self) -> dict:
        R = self.ring
        return {
            "ring": R.name,
            "window": {"shape": self.window.shape, "param": self.window.param},
            "elements": [R.format(e) for e in self.elements()],
        }


def set_from_json(obj: dict | str, window: WindowSpec | None = None) -> WindowSet:
    """Load a set stored as ``{ring, window, expr}`` or ``{ring, window, elements}``.

    ``window`` overrides the stored window (the expression is re-evaluated on it).
    """
    from .setexpr import eval_set_expr, parse_set_expr

    if isinstance(obj, str):
        obj = json.loads(obj)
    R = parse_ring(obj["ring"])
    if window is None:
        window = window_from_json(obj["window"], R)
    if "expr" in obj:
        return eval_set_expr(parse_set_expr(obj["expr"]), window)
    return WindowSet.from_elements(window, (R.parse(str(e)) for e in obj["elements"]))


def set_to_json(s: WindowSet, expr: Any = None) -> dict:
    if expr is None:
        return s.to_json()
    from .setexpr import to_text

    return {
        "ring": s.ring.name,
        "window": {"shape": s.window.shape, "param": s.window.param},
        "expr": expr if isinstance(expr, str) else to_text(expr),
    }


def safe_int_array(pts: np.ndarray, mult: int = 1, add: int = 0) -> np.ndarray:
    """Switch to Python-int (object) arithmetic when ``mult*pts + add`` could overflow int64."""
    if pts.dtype == object or len(pts) == 0:
        return pts
    bound = int(np.abs(pts).max())
    if bound * abs(int(mult)) + abs(int(add)) >= _INT64_SAFE:
        return pts.astype(object)
    return pts
