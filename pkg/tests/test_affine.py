from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from affine_ramsey.affine import (
    AffineMap,
    apply,
    compose,
    format_map,
    image_in_window,
    maps_from_json,
    maps_of_height,
    maps_to_json,
    parse_map,
    preimage_in_window,
)
from affine_ramsey.errors import RingMismatch, UnitElement, ZeroElement
from affine_ramsey.rings import Q, Z, parse_ring
from affine_ramsey.setexpr import ExprSet, eval_set_expr
from affine_ramsey.windows import WindowSet, parse_window

from helpers import ring_elements

ALGEBRA_RINGS = ["z", "q", "quadint:-1", "quadint:5", "quadfield:3", "polyfp:3", "ratfunc:2", "zmod:7"]


def test_distributive_law_example():
    u, v = 3, 4
    lhs = compose(AffineMap.mul(Z, u), AffineMap.add(Z, v))
    rhs = compose(AffineMap.add(Z, u * v), AffineMap.mul(Z, u))
    assert lhs == rhs == AffineMap(Z, 3, 12)


def test_compose_examples():
    g = AffineMap(Z, 5, -2)
    assert compose(g, AffineMap.identity(Z)) == g
    assert compose(AffineMap(Q, 2, 1), AffineMap(Q, 3, 5)) == AffineMap(Q, 6, 11)


def test_apply_examples():
    assert apply(AffineMap(Z, 2, 1), 3) == 7
    assert apply(AffineMap(Q, Fraction(1, 2), -1), Fraction(4, 3)) == Fraction(-1, 3)
    F2 = parse_ring("polyfp:2")
    g = AffineMap(F2, F2.parse("t"), F2.one)
    assert F2.format(apply(g, F2.parse("t+1"))) == "t^2+t+1"


def test_errors():
    with pytest.raises(ZeroElement):
        AffineMap(Z, 0, 1)
    with pytest.raises(RingMismatch):
        compose(AffineMap(Z, 1, 1), AffineMap(Q, 1, 1))
    with pytest.raises(RingMismatch):
        apply(AffineMap(Z, 1, 1), 2, Q)
    with pytest.raises(UnitElement):
        AffineMap(Z, 2, 0).inverse()


@pytest.mark.parametrize("ring_id", ALGEBRA_RINGS)
def test_composition_is_function_composition(ring_id):
    R = parse_ring(ring_id)
    el = ring_elements(ring_id)

    @given(el, el, el, el, el)
    @settings(max_examples=100)
    def check(u1, v1, u2, v2, x):
        if R.is_zero(u1) or R.is_zero(u2):
            return
        g, h = AffineMap(R, u1, v1), AffineMap(R, u2, v2)
        assert apply(compose(g, h), x) == apply(g, apply(h, x))
        # M_u A_v = A_{uv} M_u
        assert compose(AffineMap.mul(R, u1), AffineMap.add(R, v1)) == compose(AffineMap.add(R, R.mul(u1, v1)), AffineMap.mul(R, u1))

    check()


@pytest.mark.parametrize("ring_id", ["q", "quadfield:5", "ratfunc:3", "zmod:7", "z", "quadint:-1", "polyfp:3"])
def test_inverse_exactly_when_unit(ring_id):
    R = parse_ring(ring_id)
    el = ring_elements(ring_id)

    @given(el, el)
    @settings(max_examples=100)
    def check(u, v):
        if R.is_zero(u):
            return
        g = AffineMap(R, u, v)
        if R.is_unit(u):
            assert compose(g, g.inverse()) == AffineMap.identity(R)
            assert compose(g.inverse(), g) == AffineMap.identity(R)
        else:
            assert not R.is_field
            with pytest.raises(UnitElement):
                g.inverse()

    check()


@pytest.mark.parametrize("ring_id", ["z", "q", "polyfp:3", "quadint:5", "quadfield:-2", "ratfunc:3"])
def test_text_roundtrip(ring_id):
    R = parse_ring(ring_id)
    for g in maps_of_height(R, 1):
        assert parse_map(format_map(g), R) == g
    assert maps_from_json(maps_to_json(maps_of_height(R, 1))) == maps_of_height(R, 1)


def test_polynomial_map_text_uses_t():
    F3 = parse_ring("polyfp:3")
    g = AffineMap(F3, F3.parse("t^2+1"), F3.parse("t"))
    assert format_map(g) == "(t^2+1)*x+(t)"
    assert format_map(AffineMap(Q, Fraction(1, 2), -3)) == "(1/2)*x+(-3)"
    assert parse_map("x+1", Z) == AffineMap(Z, 1, 1)
    assert parse_map("2*x", Z) == AffineMap(Z, 2, 0)
    assert parse_map("3*x-2", Z) == AffineMap(Z, 3, -2)


def test_maps_of_height_counts():
    assert len(maps_of_height(Z, 1)) == 2 * 3
    assert len(maps_of_height(Z, 2)) == 4 * 5
    assert maps_of_height(Z, 1)[0] == AffineMap(Z, 1, 0)


# -- window action ----------------------------------------------------------


def test_preimage_examples():
    W = parse_window("natbox:10")
    odds = eval_set_expr("mod(1,2)", W)
    pre = preimage_in_window(AffineMap(Z, 1, 1), odds, W)
    assert pre.elements() == [2, 4, 6, 8]
    assert pre.out_of_window == 1  # 10 + 1 = 11 falls outside

    s = WindowSet.from_elements(W, [4, 8])
    assert preimage_in_window(AffineMap(Z, 2, 0), s, W).elements() == [2, 4]

    W30 = parse_window("natbox:30")
    s = eval_set_expr("mod(1,3)", W30)
    pre = preimage_in_window(AffineMap(Z, 3, 1), s, W30)
    assert pre.elements() == list(range(1, 10))
    assert pre.out_of_window == 21


def test_preimage_exact_set_has_no_truncation():
    W = parse_window("natbox:10")
    pre = preimage_in_window(AffineMap(Z, 1, 1), ExprSet("mod(1,2)", Z), W)
    assert pre.elements() == [2, 4, 6, 8, 10] and pre.out_of_window == 0


def test_preimage_ring_mismatch():
    with pytest.raises(RingMismatch):
        preimage_in_window(AffineMap(Q, 1, 1), WindowSet.full(parse_window("natbox:5")), parse_window("natbox:5"))


@given(st.integers(-5, 5).filter(bool), st.integers(-20, 20), st.lists(st.integers(-40, 40), max_size=30))
def test_preimage_of_image_contains_set(u, v, elements):
    W = parse_window("intbox:40")
    s = WindowSet.from_elements(W, elements)
    g = AffineMap(Z, u, v)
    big = parse_window("intbox:500")
    img = image_in_window(g, s, big)
    assert img.out_of_window == 0
    back = preimage_in_window(g, img, W)
    assert set(s.elements()) <= set(back.elements())


_small_q = st.builds(Fraction, st.integers(-6, 6), st.integers(1, 4))


@given(_small_q.filter(bool), _small_q)
@settings(max_examples=40)
def test_field_image_then_preimage_identity(u, v):
    W = parse_window("farey:6")
    s = WindowSet.from_elements(W, W.elements()[::3])
    g = AffineMap(Q, u, v)
    img = image_in_window(g, s, W)
    back = preimage_in_window(g, img, W)
    inside = [x for x in s.elements() if g(x) in W]
    assert back.elements() == sorted(inside, key=Q.key)
