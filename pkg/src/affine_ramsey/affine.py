"""Affine maps x -> u*x + v over a ring, their composition and action on window sets."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

import numpy as np

from .errors import RingMismatch, UnitElement, ZeroElement
from .rings import Ring, parse_ring
from .windows import WindowSet, WindowSpec, safe_int_array


@dataclass(frozen=True)
class AffineMap:
    """The map ``x -> u*x + v``; ``u`` must be nonzero.

    Composition follows function order: ``g.compose(h)(x) == g(h(x))``.
    """

    ring: Ring
    u: Any
    v: Any

    def __post_init__(self):
        u = self.ring.normalize(self.u)
        if self.ring.is_zero(u):
            raise ZeroElement("affine map needs a nonzero multiplier")
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", self.ring.normalize(self.v))

    @classmethod
    def identity(cls, ring: Ring) -> "AffineMap":
        return cls(ring, ring.one, ring.zero)

    @classmethod
    def add(cls, ring: Ring, v) -> "AffineMap":
        """A_v : x -> x + v."""
        return cls(ring, ring.one, v)

    @classmethod
    def mul(cls, ring: Ring, u) -> "AffineMap":
        """M_u : x -> u*x."""
        return cls(ring, u, ring.zero)

    def __call__(self, x):
        return apply(self, x)

    def compose(self, other: "AffineMap") -> "AffineMap":
        return compose(self, other)

    def inverse(self) -> "AffineMap":
        R = self.ring
        if not R.is_unit(self.u):
            raise UnitElement(f"{R.format(self.u)} is not a unit; map is not invertible")
        ui = R.inverse(self.u)
        return AffineMap(R, ui, R.neg(R.mul(ui, self.v)))

    def preimage_point(self, y):
        """The unique ``x`` with ``u*x + v == y``, or ``None`` if there is none."""
        R = self.ring
        try:
            return R.exact_div(R.sub(y, self.v), self.u)
        except ArithmeticError:
            return None

    def is_injective(self) -> bool:
        return not self.ring.is_finite or self.ring.is_unit(self.u)

    def height(self) -> int:
        return max(self.ring.height(self.u), self.ring.height(self.v))

    def __str__(self) -> str:
        return format_map(self)


def _same_ring(*rings: Ring) -> None:
    first = rings[0]
    for r in rings[1:]:
        if r != first:
            raise RingMismatch(f"{first.name} vs {r.name}")


def compose(g: AffineMap, h: AffineMap) -> AffineMap:
    """``g o h``: (u1, v1) o (u2, v2) = (u1*u2, u1*v2 + v1)."""
    _same_ring(g.ring, h.ring)
    R = g.ring
    return AffineMap(R, R.mul(g.u, h.u), R.add(R.mul(g.u, h.v), g.v))


def apply(g: AffineMap, x, ring: Ring | None = None):
    if ring is not None:
        _same_ring(g.ring, ring)
    R = g.ring
    return R.add(R.mul(g.u, x), g.v)


def maps_of_height(ring: Ring, h: int) -> list[AffineMap]:
    """All maps with ``height(u), height(v) <= h``, ordered by (u, v) canonically."""
    elems = ring.elements_of_height(h)
    return [AffineMap(ring, u, v) for u in elems if not ring.is_zero(u) for v in elems]


# ---------------------------------------------------------------------------
# text form  "(u)*x+(v)"


def _matching_paren(text: str, start: int) -> int:
    depth = 0
    for i in range(start, len(text)):
        depth += text[i] == "("
        depth -= text[i] == ")"
        if depth == 0:
            return i
    raise ValueError(f"unbalanced parentheses in {text!r}")


def format_map(g: AffineMap) -> str:
    R = g.ring
    return f"({R.format(g.u)})*x+({R.format(g.v)})"


def parse_map(text: str, ring: Ring | str) -> AffineMap:
    """Parse ``u*x+v``; ``u`` and ``v`` may be parenthesised ring literals.

    Shorthands ``x``, ``x+v`` and ``u*x`` are accepted as well.
    """
    R = parse_ring(ring) if isinstance(ring, str) else ring
    t = text.replace(" ", "")
    if t.startswith("("):
        end = _matching_paren(t, 0)
        u_text, rest = t[1:end], t[end + 1 :]
        if not rest.startswith("*x"):
            raise ValueError(f"expected '*x' after multiplier in {text!r}")
        rest = rest[2:]
    elif t.startswith("x"):
        u_text, rest = "1", t[1:]
    else:
        u_text, _, rest = t.partition("*x")
        if not _:
            raise ValueError(f"expected 'u*x+v', got {text!r}")
    if rest == "":
        v_text = "0"
    elif rest.startswith("+"):
        v_text = rest[1:]
    elif rest.startswith("-"):
        v_text = rest
    else:
        raise ValueError(f"expected '+v' in {text!r}")
    if v_text.startswith("(") and _matching_paren(v_text, 0) == len(v_text) - 1:
        v_text = v_text[1:-1]
    return AffineMap(R, R.parse(u_text), R.parse(v_text))


def maps_to_json(maps: list[AffineMap]) -> dict:
    if not maps:
        return {"ring": None, "maps": []}
    return {"ring": maps[0].ring.name, "maps": [format_map(g) for g in maps]}


def maps_from_json(obj, ring: Ring | str | None = None) -> list[AffineMap]:
    """Accept ``{"ring": ..., "maps": [...]}`` or a bare list of strings."""
    if isinstance(obj, dict):
        ring = obj.get("ring") or ring
        items = obj["maps"]
    else:
        items = obj
    if ring is None:
        raise ValueError("ring must be given for a bare list of maps")
    R = parse_ring(ring) if isinstance(ring, str) else ring
    out = []
    for it in items:
        if isinstance(it, str):
            out.append(parse_map(it, R))
        else:
            u, v = it
            out.append(AffineMap(R, R(u) if isinstance(u, str) else u, R(v) if isinstance(v, str) else v))
    return out


# ---------------------------------------------------------------------------
# action on window sets


def image_points(g: AffineMap, points):
    """``[g(x) for x in points]``, vectorised for integer arrays."""
    if isinstance(points, np.ndarray):
        u, v = int(g.u), int(g.v)
        p = safe_int_array(points, u, v)
        return u * p + v
    return [apply(g, x) for x in points]


def preimage_in_window(g: AffineMap, s, window: WindowSpec) -> WindowSet:
    """``{x in window : g(x) in s}``.

    ``s`` is a :class:`WindowSet` (images outside its window count as
    non-members and are tallied in ``out_of_window``) or any object with a
    ``lookup`` method such as :class:`~affine_ramsey.setexpr.ExprSet`.
    """
    _same_ring(g.ring, window.ring, s.ring)
    pts = window.int_array() if window.is_integer else window.elements()
    member, outside = s.lookup(image_points(g, pts))
    return WindowSet(window, member, int(outside.sum()))


def image_in_window(g: AffineMap, s: WindowSet, window: WindowSpec) -> WindowSet:
    """``{g(x) : x in s} ∩ window``; images landing outside ``window`` are tallied."""
    _same_ring(g.ring, window.ring, s.ring)
    els = s.elements()
    pts = np.array(els, dtype=np.int64) if s.window.is_integer and window.is_integer else els
    imgs = image_points(g, pts)
    mask = np.zeros(window.size, dtype=bool)
    if isinstance(imgs, np.ndarray) and window.is_integer:
        idx = window.int_index(imgs)
    else:
        idx = np.array([-1 if (i := window.index_of(y)) is None else i for y in imgs], dtype=np.int64)
    mask[idx[idx >= 0]] = True
    return WindowSet(window, mask, int((idx < 0).sum()))
