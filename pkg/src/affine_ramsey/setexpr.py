"""A small set-expression language, its parser and its exact evaluator.

Grammar::

    EXPR := ATOM
          | union(EXPR{,EXPR}) | inter(EXPR{,EXPR}) | compl(EXPR) | diff(EXPR,EXPR)
          | affine(U,V,EXPR)      image {u*x + v : x in EXPR}
          | preimage(U,V,EXPR)    {x : u*x + v in EXPR}
    ATOM := interval(a,b) | ap(a,d) | mod(r,m) | set{e,...}
          | thickbad(k) | example45(k)

Literals (a, b, d, r, m, U, V, e) are ring elements in the ring's text syntax
and are only interpreted at evaluation time, so one expression can be
evaluated over several rings.  Over Q, ``mod(r, m)`` tests ``floor(x) = r mod m``;
elsewhere it tests ``m | x - r``.

Evaluation is pointwise and exact: every node decides membership of an
arbitrary ring element, so ``preimage`` never needs to look outside a window.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import RingMismatch, SetExprSyntaxError, UnknownConstruction
from .rings import Integers, Rationals, Ring
from .windows import WindowSet, WindowSpec, safe_int_array


class SetExpr:
    __slots__ = ()


@dataclass(frozen=True)
class Interval(SetExpr):
    a: str
    b: str


@dataclass(frozen=True)
class AP(SetExpr):
    a: str
    d: str


@dataclass(frozen=True)
class Mod(SetExpr):
    r: str
    m: str


@dataclass(frozen=True)
class Explicit(SetExpr):
    elements: tuple


@dataclass(frozen=True)
class Named(SetExpr):
    name: str
    k: int


@dataclass(frozen=True)
class Union(SetExpr):
    args: tuple


@dataclass(frozen=True)
class Inter(SetExpr):
    args: tuple


@dataclass(frozen=True)
class Compl(SetExpr):
    arg: SetExpr


@dataclass(frozen=True)
class Diff(SetExpr):
    left: SetExpr
    right: SetExpr


@dataclass(frozen=True)
class Affine(SetExpr):
    u: str
    v: str
    arg: SetExpr


@dataclass(frozen=True)
class Preimage(SetExpr):
    u: str
    v: str
    arg: SetExpr


NAMED = ("thickbad", "example45")
_ATOMS = {"interval": Interval, "ap": AP, "mod": Mod}
_NARY = {"union": Union, "inter": Inter}
_MAPS = {"affine": Affine, "preimage": Preimage}


# ---------------------------------------------------------------------------
# parsing


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, msg: str, pos: int | None = None):
        raise SetExprSyntaxError(msg, self.text, self.pos if pos is None else pos)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def expect(self, ch: str):
        self.skip()
        if not self.text.startswith(ch, self.pos):
            found = self.text[self.pos : self.pos + 1] or "end of input"
            self.error(f"expected {ch!r}, found {found!r}")
        self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos : self.pos + 1]

    def ident(self) -> str:
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and (self.text[self.pos].isalnum() or self.text[self.pos] == "_"):
            self.pos += 1
        if start == self.pos:
            self.error("expected a set expression")
        return self.text[start : self.pos]

    def literal(self) -> str:
        """A ring literal: everything up to a top-level ',', ')' or '}'."""
        self.skip()
        start, depth = self.pos, 0
        while self.pos < len(self.text):
            ch = self.text[self.pos]
            if ch == "(":
                depth += 1
            elif ch == ")":
                if depth == 0:
                    break
                depth -= 1
            elif ch in ",}" and depth == 0:
                break
            elif ch == "{":
                self.error("unexpected '{' in literal")
            self.pos += 1
        lit = "".join(self.text[start : self.pos].split())
        if not lit:
            self.error("expected a literal", start)
        return lit

    def integer(self) -> int:
        start = self.pos
        lit = self.literal()
        try:
            return int(lit)
        except ValueError:
            self.error(f"expected an integer, found {lit!r}", start)

    def expr(self) -> SetExpr:
        start = self.pos
        name = self.ident()
        if name == "set":
            self.expect("{")
            items = []
            if self.peek() != "}":
                items.append(self.literal())
                while self.peek() == ",":
                    self.pos += 1
                    items.append(self.literal())
            self.expect("}")
            return Explicit(tuple(items))
        if name not in _ATOMS and name not in _NARY and name not in _MAPS and name not in NAMED and name not in ("compl", "diff"):
            self.skip()
            if self.text.startswith("(", self.pos):
                raise UnknownConstruction(f"unknown construction {name!r} at position {start}")
            self.error(f"unknown name {name!r}", start)
        self.expect("(")
        if name in _ATOMS:
            a = self.literal()
            self.expect(",")
            b = self.literal()
            node = _ATOMS[name](a, b)
        elif name in NAMED:
            node = Named(name, self.integer())
        elif name in _NARY:
            args = [self.expr()]
            while self.peek() == ",":
                self.pos += 1
                args.append(self.expr())
            node = _NARY[name](tuple(args))
        elif name == "compl":
            node = Compl(self.expr())
        elif name == "diff":
            left = self.expr()
            self.expect(",")
            node = Diff(left, self.expr())
        else:
            u = self.literal()
            self.expect(",")
            v = self.literal()
            self.expect(",")
            node = _MAPS[name](u, v, self.expr())
        self.expect(")")
        return node


def parse_set_expr(text: str) -> SetExpr:
    p = _Parser(text)
    node = p.expr()
    p.skip()
    if p.pos != len(text):
        p.error("trailing input")
    return node


def to_text(e: SetExpr) -> str:
    """Canonical text; ``parse_set_expr(to_text(e)) == e``."""
    if isinstance(e, Interval):
        return f"interval({e.a},{e.b})"
    if isinstance(e, AP):
        return f"ap({e.a},{e.d})"
    if isinstance(e, Mod):
        return f"mod({e.r},{e.m})"
    if isinstance(e, Explicit):
        return "set{" + ",".join(e.elements) + "}"
    if isinstance(e, Named):
        return f"{e.name}({e.k})"
    if isinstance(e, Union):
        return "union(" + ",".join(map(to_text, e.args)) + ")"
    if isinstance(e, Inter):
        return "inter(" + ",".join(map(to_text, e.args)) + ")"
    if isinstance(e, Compl):
        return f"compl({to_text(e.arg)})"
    if isinstance(e, Diff):
        return f"diff({to_text(e.left)},{to_text(e.right)})"
    if isinstance(e, Affine):
        return f"affine({e.u},{e.v},{to_text(e.arg)})"
    if isinstance(e, Preimage):
        return f"preimage({e.u},{e.v},{to_text(e.arg)})"
    raise TypeError(f"not a set expression: {e!r}")


# ---------------------------------------------------------------------------
# evaluation


@lru_cache(maxsize=32)
def construction(name: str, k: int):
    from .constructions import build_example45, build_thickbad

    if name == "thickbad":
        return build_thickbad(k)
    if name == "example45":
        return build_example45(k)
    raise UnknownConstruction(f"unknown construction {name!r}")


def _ordered(R: Ring, what: str) -> None:
    if not R.is_ordered:
        raise RingMismatch(f"{what} needs an ordered ring, not {R.name}")


def _mask_int(e: SetExpr, pts: np.ndarray) -> np.ndarray:
    """Membership over Z for an integer array (int64 or Python-int object array)."""
    if isinstance(e, Interval):
        return (pts >= int(e.a)) & (pts <= int(e.b))
    if isinstance(e, AP):
        a, d = int(e.a), int(e.d)
        if d == 0:
            return pts == a
        p = safe_int_array(pts, 1, a)
        diff = p - a
        return (diff % d == 0) & (diff // d >= 0)
    if isinstance(e, Mod):
        r, m = int(e.r), int(e.m)
        if m == 0:
            return pts == r
        p = safe_int_array(pts, 1, r)
        return (p - r) % m == 0
    if isinstance(e, Explicit):
        vals = {int(x) for x in e.elements}
        return np.fromiter((int(x) in vals for x in pts), dtype=bool, count=len(pts))
    if isinstance(e, Named):
        return construction(e.name, e.k).int_mask(pts)
    if isinstance(e, Union):
        out = np.zeros(len(pts), dtype=bool)
        for a in e.args:
            out |= _mask_int(a, pts)
        return out
    if isinstance(e, Inter):
        out = np.ones(len(pts), dtype=bool)
        for a in e.args:
            out &= _mask_int(a, pts)
        return out
    if isinstance(e, Compl):
        return ~_mask_int(e.arg, pts)
    if isinstance(e, Diff):
        return _mask_int(e.left, pts) & ~_mask_int(e.right, pts)
    if isinstance(e, Preimage):
        u, v = int(e.u), int(e.v)
        if u == 0:
            raise ValueError("affine map needs u != 0")
        p = safe_int_array(pts, u, v)
        return _mask_int(e.arg, u * p + v)
    if isinstance(e, Affine):
        u, v = int(e.u), int(e.v)
        if u == 0:
            raise ValueError("affine map needs u != 0")
        p = safe_int_array(pts, 1, v)
        diff = p - v
        ok = diff % u == 0
        out = np.zeros(len(pts), dtype=bool)
        idx = np.flatnonzero(ok)
        if len(idx):
            out[idx] = _mask_int(e.arg, diff[idx] // u)
        return out
    raise TypeError(f"not a set expression: {e!r}")


def _mask_generic(e: SetExpr, R: Ring, pts: list) -> np.ndarray:
    n = len(pts)
    if isinstance(e, Interval):
        _ordered(R, "interval")
        a, b = R.parse(e.a), R.parse(e.b)
        return np.fromiter((a <= x <= b for x in pts), dtype=bool, count=n)
    if isinstance(e, AP):
        _ordered(R, "ap")
        a, d = R.parse(e.a), R.parse(e.d)

        def on_ap(x):
            if d == 0:
                return x == a
            j = Fraction(x - a) / d
            return j.denominator == 1 and j >= 0

        return np.fromiter((on_ap(x) for x in pts), dtype=bool, count=n)
    if isinstance(e, Mod):
        r, m = R.parse(e.r), R.parse(e.m)
        if isinstance(R, Rationals):
            r, m = int(r), int(m)
            return np.fromiter(
                ((math.floor(x) - r) % m == 0 if m else math.floor(x) == r for x in pts), dtype=bool, count=n
            )
        return np.fromiter((R.divides(m, R.sub(x, r)) for x in pts), dtype=bool, count=n)
    if isinstance(e, Explicit):
        vals = {R.parse(x) for x in e.elements}
        return np.fromiter((x in vals for x in pts), dtype=bool, count=n)
    if isinstance(e, Named):
        if not isinstance(R, (Integers, Rationals)):
            raise RingMismatch(f"{e.name} lives in Z or Q, not {R.name}")
        s = construction(e.name, e.k)
        return np.fromiter((x in s for x in pts), dtype=bool, count=n)
    if isinstance(e, Union):
        out = np.zeros(n, dtype=bool)
        for a in e.args:
            out |= _mask_generic(a, R, pts)
        return out
    if isinstance(e, Inter):
        out = np.ones(n, dtype=bool)
        for a in e.args:
            out &= _mask_generic(a, R, pts)
        return out
    if isinstance(e, Compl):
        return ~_mask_generic(e.arg, R, pts)
    if isinstance(e, Diff):
        return _mask_generic(e.left, R, pts) & ~_mask_generic(e.right, R, pts)
    if isinstance(e, Preimage):
        from .affine import AffineMap

        g = AffineMap(R, R.parse(e.u), R.parse(e.v))
        return _mask_generic(e.arg, R, [g(x) for x in pts])
    if isinstance(e, Affine):
        from .affine import AffineMap

        g = AffineMap(R, R.parse(e.u), R.parse(e.v))
        pre = [g.preimage_point(y) for y in pts]
        idx = [i for i, x in enumerate(pre) if x is not None]
        out = np.zeros(n, dtype=bool)
        if idx:
            out[idx] = _mask_generic(e.arg, R, [pre[i] for i in idx])
        return out
    raise TypeError(f"not a set expression: {e!r}")


def mask(e: SetExpr, R: Ring, points) -> np.ndarray:
    """Exact membership of each point; integer arrays take a vectorised path over Z."""
    if isinstance(R, Integers) and isinstance(points, np.ndarray):
        return _mask_int(e, points)
    return _mask_generic(e, R, list(points))


def eval_set_expr(e: SetExpr | str, window: WindowSpec) -> WindowSet:
    if isinstance(e, str):
        e = parse_set_expr(e)
    R = window.ring
    if window.is_integer:
        return WindowSet(window, _mask_int(e, window.int_array()))
    return WindowSet(window, _mask_generic(e, R, window.elements()))


class ExprSet:
    """An exact (untruncated) set given by an expression over a ring."""

    def __init__(self, expr: SetExpr | str, ring: Ring):
        self.expr = parse_set_expr(expr) if isinstance(expr, str) else expr
        self.ring = ring

    def __contains__(self, x) -> bool:
        return bool(mask(self.expr, self.ring, [x])[0])

    contains = __contains__

    def lookup(self, points) -> tuple[np.ndarray, np.ndarray]:
        m = mask(self.expr, self.ring, points)
        return m, np.zeros(len(m), dtype=bool)

    def on(self, window: WindowSpec) -> WindowSet:
        return eval_set_expr(self.expr, window)

    def __repr__(self) -> str:
        return f"ExprSet({to_text(self.expr)!r}, {self.ring.name})"
