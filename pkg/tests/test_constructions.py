import time
from fractions import Fraction
from math import isqrt

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from affine_ramsey.arith import is_prime
from affine_ramsey.constructions import (
    BlockSet,
    build_example45,
    build_thickbad,
    example45_growth_checks,
    thickbad_chain_checks,
    thickbad_primes,
    verify_no_pattern,
)
from affine_ramsey.errors import BlockLimit, UnsupportedPattern
from affine_ramsey.rings import farey_elements
from affine_ramsey.windows import parse_window


def naive_sumproduct(elements, lo=3):
    """O(|W|^2) reference: least (x, y), lo <= x <= y, with x+y and xy both present."""
    s = set(elements)
    top = max(s) if s else 0
    for x in range(lo, top + 1):
        for y in range(x, top // max(x, 1) + 1):
            if x + y in s and x * y in s:
                return (x, y)
    return None


# -- thickbad ---------------------------------------------------------------


def test_thickbad_small():
    assert build_thickbad(1).elements() == [5]
    assert build_thickbad(2).elements() == [5] + list(range(26, 48))
    assert build_thickbad(3).elements() == [5] + list(range(26, 48)) + [2503, 5006]


def test_thickbad_primes():
    ps = thickbad_primes(3)
    assert ps[:2] == [5, 2503]
    assert 2501 == 41 * 61 and 2502 % 2 == 0
    assert all(q > 4 * (n * p) ** 4 for n, (p, q) in enumerate(zip(ps, ps[1:]), start=1))
    # least prime: nothing prime strictly between the bound and p
    bound = 4 * (2 * 2503) ** 4
    assert all(not is_prime(m) for m in range(bound + 1, ps[2]))


@pytest.mark.parametrize("k", range(1, 9))
def test_thickbad_chain(k):
    checks = thickbad_chain_checks(build_thickbad(k))
    assert checks and all(c["ok"] for c in checks) or k == 1


def test_thickbad_twelve_blocks():
    t0 = time.perf_counter()
    bs = build_thickbad(12)
    assert time.perf_counter() - t0 < 30
    assert all(c["ok"] for c in thickbad_chain_checks(bs))
    assert len(bs.extra["primality"]) == 6


def test_thickbad_thickness_witnesses():
    bs = build_thickbad(8)
    for n in range(1, 5):
        ap, iv = bs.blocks[2 * n - 2], bs.blocks[2 * n - 1]
        p = ap.step
        # multiplicative: p [1, n] sits inside E_{2n-1}
        assert all(p * j in bs for j in range(1, n + 1))
        # additive: interval of length (n p)^2 - 3
        assert iv.hi - iv.lo + 1 == (n * p) ** 2 - 3
        assert iv.lo in bs and iv.hi in bs and iv.lo - 1 not in bs and iv.hi + 1 not in bs


def test_thickbad_json_roundtrip():
    bs = build_thickbad(6)
    back = BlockSet.from_json(bs.to_json())
    assert back.blocks == bs.blocks
    assert all(isinstance(b["step"], str) for b in bs.to_json()["blocks"] if b["type"] == "ap")


def test_block_limit():
    with pytest.raises(BlockLimit):
        build_thickbad(13)
    with pytest.raises(BlockLimit):
        build_thickbad(0)
    with pytest.raises(BlockLimit):
        build_example45(13)


def test_thickbad_has_no_pair():
    v = verify_no_pattern(build_thickbad(3), "sumproduct", parse_window("natbox:10000"))
    assert v.ok


def test_five_six_pair():
    v = verify_no_pattern({5, 6}, "sumproduct", min_xy=2)
    assert not v.ok and (v.witness["x"], v.witness["y"]) == (2, 3)
    assert verify_no_pattern({5, 6}, "sumproduct").ok


@given(st.sets(st.integers(1, 400), max_size=60), st.integers(2, 4))
@settings(max_examples=150)
def test_verify_matches_naive(s, lo):
    v = verify_no_pattern(s, "sumproduct", min_xy=lo)
    want = naive_sumproduct(s, lo)
    assert v.ok == (want is None)
    if want:
        assert (v.witness["x"], v.witness["y"]) == want


def test_verify_matches_naive_on_2000_window():
    bs = build_thickbad(4)
    W = parse_window("natbox:2000")
    v = verify_no_pattern(bs, "sumproduct", W)
    assert v.ok and naive_sumproduct(bs.elements_in_range(1, 2000)) is None
    dense = set(range(1, 2001, 3)) | {7, 12}
    v = verify_no_pattern(dense, "sumproduct", W)
    assert (v.witness["x"], v.witness["y"]) == naive_sumproduct(dense)


def test_unsupported_pattern():
    with pytest.raises(UnsupportedPattern):
        verify_no_pattern({1}, "quad")


# -- example45 ----------------------------------------------------------------


def test_example45_first_blocks():
    bs = build_example45(2)
    assert bs.extra["a"] == [5, 26]
    assert bs.blocks[0].elements() == [4, 5, 6]
    assert sorted(bs.blocks[1].elements()) == sorted(26 * g for g in farey_elements(2))
    assert 13 in bs and -52 in bs and 0 in bs


def test_example45_seed_zero_regression():
    bs = build_example45(1, seed=[0])
    assert bs.blocks[0].elements() == [2, 3, 4]
    v = verify_no_pattern(bs, "triple")
    assert not v.ok and v.witness["x"] == 2


def test_example45_growth():
    for k in range(2, 9):
        assert all(c["ok"] for c in example45_growth_checks(build_example45(k)))


def test_example45_no_triple():
    bs = build_example45(8)
    assert verify_no_pattern(bs, "triple", parse_window("farey:60")).ok
    # whole blocks, not just a window
    assert verify_no_pattern(build_example45(5), "triple").ok


def test_example45_membership_consistent():
    bs = build_example45(4)
    els = bs.elements()
    assert all(x in bs for x in els)
    for x in els[:200]:
        for d in (Fraction(1, 97), Fraction(-1, 89)):
            if x + d not in set(els):
                assert (x + d) not in bs
