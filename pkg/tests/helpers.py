"""Shared generators and brute-force oracles for the test-suite."""

from __future__ import annotations

import random
from fractions import Fraction

from hypothesis import strategies as st

from affine_ramsey.rings import parse_ring
from affine_ramsey.setexpr import (
    AP,
    Affine,
    Compl,
    Diff,
    Explicit,
    Inter,
    Interval,
    Mod,
    Named,
    Preimage,
    Union,
)

RING_IDS = ["z", "q", "zmod:6", "zmod:7", "quadint:-1", "quadint:5", "quadint:-3", "quadfield:5", "quadfield:-2", "polyfp:3", "polyfp:2", "ratfunc:3"]


def small_int(rng: random.Random, lo=-30, hi=30) -> int:
    return rng.randint(lo, hi)


def random_expr(rng: random.Random, depth: int = 4, named: bool = True):
    """A random integer-valued set expression tree of depth <= ``depth``."""
    if depth <= 0 or rng.random() < 0.3:
        kind = rng.choice(["interval", "ap", "mod", "set"] + (["named"] if named else []))
        if kind == "interval":
            a = small_int(rng)
            return Interval(str(a), str(a + rng.randint(0, 40)))
        if kind == "ap":
            return AP(str(small_int(rng)), str(rng.randint(1, 9)))
        if kind == "mod":
            m = rng.randint(1, 9)
            return Mod(str(rng.randrange(m)), str(m))
        if kind == "set":
            return Explicit(tuple(str(small_int(rng)) for _ in range(rng.randint(1, 5))))
        return Named("thickbad", rng.randint(1, 4))
    kind = rng.choice(["union", "inter", "compl", "diff", "affine", "preimage"])
    sub = lambda: random_expr(rng, depth - 1, named)  # noqa: E731
    if kind == "union":
        return Union(tuple(sub() for _ in range(rng.randint(2, 3))))
    if kind == "inter":
        return Inter(tuple(sub() for _ in range(rng.randint(2, 3))))
    if kind == "compl":
        return Compl(sub())
    if kind == "diff":
        return Diff(sub(), sub())
    u = rng.choice([1, -1, 2, 3, -2])
    cls = Affine if kind == "affine" else Preimage
    return cls(str(u), str(small_int(rng, -5, 5)), sub())


@st.composite
def exprs(draw, depth=4, named=False):
    return random_expr(random.Random(draw(st.integers(0, 2**32))), depth, named)


def ring_elements(ring_id: str):
    """Hypothesis strategy for canonical elements of the named ring."""
    R = parse_ring(ring_id)
    kind = ring_id.partition(":")[0]
    ints = st.integers(-(10**6), 10**6)
    fracs = st.fractions(max_denominator=1000).map(lambda f: f.limit_denominator(1000))
    if kind == "z":
        return st.integers(-(2**80), 2**80)
    if kind == "q":
        return st.builds(Fraction, st.integers(-(10**12), 10**12), st.integers(1, 10**12))
    if kind == "zmod":
        return st.integers(0, R.n - 1)
    if kind == "quadint":
        return st.tuples(ints, ints).map(R.normalize)
    if kind == "quadfield":
        return st.tuples(fracs, fracs).map(R.normalize)
    coeffs = st.lists(st.integers(0, R.p - 1 if kind == "polyfp" else R.p - 1), max_size=7)
    if kind == "polyfp":
        return coeffs.map(R.normalize)
    dens = st.lists(st.integers(0, R.p - 1), min_size=1, max_size=5).filter(any)
    return st.tuples(coeffs, dens).map(lambda nd: R.normalize((tuple(nd[0]), tuple(nd[1]))))


def naive_sumproduct_pairs(elements, lo=3):
    """All (x, y), lo <= x <= y, with x+y and xy both in ``elements``."""
    s = set(elements)
    top = max(s) if s else 0
    out = []
    for x in range(lo, top + 1):
        for y in range(x, top + 1):
            if x + y > top and x * y > top:
                break
            if x + y in s and x * y in s:
                out.append((x, y))
    return out
