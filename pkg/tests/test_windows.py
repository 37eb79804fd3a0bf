import json
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from affine_ramsey.errors import RingMismatch, SetExprSyntaxError, UnknownConstruction
from affine_ramsey.rings import Q, Z, farey_elements, parse_ring
from affine_ramsey.setexpr import (
    AP,
    Compl,
    Diff,
    Explicit,
    Inter,
    Interval,
    Mod,
    Named,
    Preimage,
    Union,
    eval_set_expr,
    parse_set_expr,
    to_text,
)
from affine_ramsey.windows import WindowSet, parse_window, set_from_json, set_to_json

from helpers import exprs, random_expr


def test_window_sizes_and_order():
    assert parse_window("natbox:5").elements() == [1, 2, 3, 4, 5]
    assert parse_window("intbox:2").elements() == [0, 1, -1, 2, -2]
    F = parse_window("farey:2").elements()
    assert F == [Fraction(0), Fraction(1), Fraction(-1), Fraction(2), Fraction(-2), Fraction(1, 2), Fraction(-1, 2)]
    assert parse_window("polydeg:2", "polyfp:3").size == 9
    assert parse_window("quadbox:2", "quadint:-1").size == 25
    assert parse_window("residue", "zmod:6").elements() == list(range(6))


@pytest.mark.parametrize(
    "text,ring",
    [("natbox:50", None), ("intbox:30", None), ("farey:12", None), ("polydeg:3", "polyfp:3"), ("quadbox:3", "quadint:5"), ("quadbox:2", "quadfield:2"), ("residue", "zmod:10"), ("ratfuncdeg:2", "ratfunc:2")],
)
def test_window_enumeration_total_and_indexed(text, ring):
    W = parse_window(text, ring)
    els = W.elements()
    assert len(els) == W.size == len(set(els))
    assert els == sorted(els, key=W.ring.key)
    assert all(W.index_of(e) == i for i, e in enumerate(els))


def test_farey_is_prefix_of_canonical_order():
    for n in range(1, 15):
        f = farey_elements(n)
        assert all(max(abs(x.numerator), x.denominator) <= n for x in f)
        assert list(f) == list(farey_elements(n + 1))[: len(f)]


def test_int_index_matches_index_of():
    W = parse_window("intbox:20")
    pts = np.arange(-30, 31)
    idx = W.int_index(pts)
    assert [(-1 if W.index_of(int(p)) is None else W.index_of(int(p))) for p in pts] == idx.tolist()


# -- parser ---------------------------------------------------------------


def test_parse_examples():
    assert parse_set_expr("union(mod(0,2), set{7})") == Union((Mod("0", "2"), Explicit(("7",))))
    assert parse_set_expr("compl(thickbad(4))") == Compl(Named("thickbad", 4))
    assert parse_set_expr("preimage(2,1,interval(1,10))") == Preimage("2", "1", Interval("1", "10"))
    assert parse_set_expr("ap(1/2, 3)") == AP("1/2", "3")


def test_parse_errors():
    with pytest.raises(SetExprSyntaxError) as e:
        parse_set_expr("union(mod(0,2)")
    assert e.value.position is not None
    with pytest.raises(SyntaxError):
        parse_set_expr("mod(0,2) extra")
    with pytest.raises(UnknownConstruction):
        parse_set_expr("fancy(3)")


@given(exprs(depth=6, named=True))
def test_parse_print_roundtrip(e):
    assert parse_set_expr(to_text(e)) == e


# -- evaluation -----------------------------------------------------------


def test_eval_examples():
    assert eval_set_expr("mod(0,2)", parse_window("natbox:10")).elements() == [2, 4, 6, 8, 10]
    assert eval_set_expr("union(interval(2,3), ap(5,5))", parse_window("natbox:12")).elements() == [2, 3, 5, 10]
    assert eval_set_expr("thickbad(2)", parse_window("natbox:100")).elements() == [5] + list(range(26, 48))


def test_eval_rationals_floor_parity():
    W = parse_window("farey:50")
    e1 = eval_set_expr("mod(0,2)", W)
    e2 = eval_set_expr("mod(1,2)", W)
    assert (e1 & e2).cardinality == 0
    assert (e1 | e2).cardinality == W.size
    assert Fraction(5, 2) in e1 and Fraction(7, 2) in e2 and Fraction(-1, 2) in e2


def test_eval_polynomial_ring():
    R = parse_ring("polyfp:3")
    W = parse_window("polydeg:3", R)
    s = eval_set_expr("preimage(t,0,set{t^2,t})", W)
    assert sorted(map(R.format, s.elements())) == ["1", "t"]


def test_eval_ring_mismatch():
    with pytest.raises(RingMismatch):
        eval_set_expr("interval(1,3)", parse_window("polydeg:2", "polyfp:3"))


def _int_oracle(e, x):
    """Pointwise reference semantics over Z."""
    if isinstance(e, Interval):
        return int(e.a) <= x <= int(e.b)
    if isinstance(e, AP):
        a, d = int(e.a), int(e.d)
        return x >= a and (x - a) % d == 0
    if isinstance(e, Mod):
        return x % int(e.m) == int(e.r) % int(e.m)
    if isinstance(e, Explicit):
        return x in {int(v) for v in e.elements}
    if isinstance(e, Named):
        from affine_ramsey.setexpr import construction

        return x in construction(e.name, e.k)
    if isinstance(e, Union):
        return any(_int_oracle(a, x) for a in e.args)
    if isinstance(e, Inter):
        return all(_int_oracle(a, x) for a in e.args)
    if isinstance(e, Compl):
        return not _int_oracle(e.arg, x)
    if isinstance(e, Diff):
        return _int_oracle(e.left, x) and not _int_oracle(e.right, x)
    u, v = int(e.u), int(e.v)
    if isinstance(e, Preimage):
        return _int_oracle(e.arg, u * x + v)
    # affine image: x = u*y + v
    return (x - v) % u == 0 and _int_oracle(e.arg, (x - v) // u)


def test_eval_matches_pointwise_oracle():
    rng = random.Random(11)
    W = parse_window("intbox:60")
    for _ in range(150):
        e = random_expr(rng, 4)
        got = eval_set_expr(e, W)
        want = [x for x in W.elements() if _int_oracle(e, x)]
        assert got.elements() == want, to_text(e)


@given(exprs(depth=4), exprs(depth=4))
def test_eval_homomorphic(a, b):
    W = parse_window("intbox:40")
    ea, eb = eval_set_expr(a, W), eval_set_expr(b, W)
    assert eval_set_expr(Union((a, b)), W) == ea | eb
    assert eval_set_expr(Inter((a, b)), W) == ea & eb
    assert eval_set_expr(Diff(a, b), W) == ea - eb
    assert eval_set_expr(Compl(a), W).cardinality + ea.cardinality == W.size


@given(exprs(depth=3))
def test_compl_count_on_farey(a):
    W = parse_window("farey:8")
    assert eval_set_expr(Compl(a), W).cardinality + eval_set_expr(a, W).cardinality == W.size


def test_set_json_both_forms():
    W = parse_window("natbox:30")
    s = eval_set_expr("mod(0,3)", W)
    assert set_from_json(json.dumps(set_to_json(s))) == s
    assert set_from_json(set_to_json(s, "mod(0,3)")) == s
    # explicit form with rationals
    Wq = parse_window("farey:5")
    t = WindowSet.from_elements(Wq, [Fraction(1, 2), Fraction(-3)])
    assert set_from_json(t.to_json()) == t


def test_windowset_is_readonly_and_counts():
    W = parse_window("natbox:10")
    s = WindowSet.from_elements(W, [1, 5, 50])
    assert s.cardinality == 2 and len(s) == 2
    with pytest.raises(ValueError):
        s.mask[0] = False
    assert s.complement().cardinality == 8


@given(st.lists(st.integers(1, 100), max_size=40), st.lists(st.integers(1, 100), max_size=40))
def test_windowset_algebra(a, b):
    W = parse_window("natbox:100")
    A, B = WindowSet.from_elements(W, a), WindowSet.from_elements(W, b)
    assert set((A | B).elements()) == set(a) | set(b)
    assert set((A & B).elements()) == set(a) & set(b)
    assert set((A - B).elements()) == set(a) - set(b)
    assert (A | B).cardinality == int(np.count_nonzero((A | B).mask))


def test_membership_without_enumeration():
    big = parse_window("farey:100000000")
    assert Fraction(99999999, 7) in big and Fraction(1, 100000001) not in big
    assert "_elements" not in big.__dict__
    q = parse_window("quadbox:10000000", "quadint:-1")
    assert (3, -10000000) in q and (0, 10000001) not in q


@given(st.integers(-12, 12), st.integers(1, 12), st.integers(1, 10))
def test_farey_contains_matches_index(p, q, n):
    W = parse_window(f"farey:{n}")
    x = Fraction(p, q)
    assert (x in W) == (W.index_of(x) is not None)
