import itertools
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from affine_ramsey.arith import is_prime
from affine_ramsey.errors import ConfigError, InvariantViolation, ModulusRange
from affine_ramsey.finite_models import (
    FiniteSemigroup,
    additive_group,
    build_affine_semigroup,
    idempotents,
    minimal_left_ideals,
    multiplicative_semigroup,
    quadratic_profile,
    return_profile,
    return_sets,
    semigroup_summary,
)


def naive_assoc(t):
    n = len(t)
    return all(t[t[a][b]][c] == t[a][t[b][c]] for a in range(n) for b in range(n) for c in range(n))


def maps_of(s):
    """(u, v) pairs for each element of an affine semigroup."""
    n = s.meta["n"]
    return [(u, v) for u in s.meta["u"] for v in range(n)]


# -- semigroups ------------------------------------------------------------------


def test_affine_two():
    s = build_affine_semigroup(2)
    assert s.size == 2 and s.group and s.labels == ["1x+0", "1x+1"]


def test_affine_three_is_s3():
    s = build_affine_semigroup(3)
    assert s.size == 6 and s.group
    t = s.table
    # permutation representation: element -> tuple of images of 0, 1, 2
    perm = [tuple((u * x + v) % 3 for x in range(3)) for u, v in maps_of(s)]
    assert sorted(perm) == sorted(itertools.permutations(range(3)))
    for i, j in itertools.product(range(6), repeat=2):
        # table row = left factor, composition (g o h)(x) = g(h(x))
        assert perm[t[i, j]] == tuple(perm[i][perm[j][x]] for x in range(3))
    assert not (t == t.T).all()  # non-abelian


def test_affine_four_semigroup():
    s = build_affine_semigroup(4)
    assert s.size == 16 and not s.group
    assert naive_assoc(s.table.tolist())
    rep = minimal_left_ideals(s)
    assert sorted(maps_of(s)[k] for k in rep.kernel) == [(0, v) for v in range(4)]


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6, 8, 9])
def test_table_is_composition(n):
    s = build_affine_semigroup(n)
    ms = maps_of(s)
    lookup = {m: i for i, m in enumerate(ms)}
    for i, (u1, v1) in enumerate(ms):
        for j, (u2, v2) in enumerate(ms):
            assert s.product(i, j) == lookup[((u1 * u2) % n, (u1 * v2 + v1) % n)]
    assert naive_assoc(s.table.tolist())
    assert s.group == is_prime(n) or n == 2


def test_units_only_is_group():
    for n in (4, 6, 8, 12):
        s = build_affine_semigroup(n, units_only=True)
        assert s.group and s._latin()


def test_modulus_range():
    for bad in (1, 65):
        with pytest.raises(ModulusRange):
            build_affine_semigroup(bad)
        with pytest.raises(ModulusRange):
            multiplicative_semigroup(bad)


def test_non_associative_rejected():
    # a - b mod 3 is not associative
    t = [[(a - b) % 3 for b in range(3)] for a in range(3)]
    with pytest.raises(InvariantViolation):
        FiniteSemigroup.from_table(t)


def test_light_test_agrees_with_naive():
    rng = random.Random(0)
    for _ in range(300):
        n = rng.randint(1, 4)
        t = [[rng.randrange(n) for _ in range(n)] for _ in range(n)]
        want = naive_assoc(t)
        if want:
            assert FiniteSemigroup.from_table(t).is_associative()
        else:
            with pytest.raises(InvariantViolation):
                FiniteSemigroup.from_table(t)


# -- idempotents and ideals ------------------------------------------------------------


def test_idempotent_examples():
    assert idempotents(multiplicative_semigroup(6)) == [0, 1, 3, 4]
    assert idempotents(multiplicative_semigroup(5)) == [0, 1]
    assert idempotents(additive_group(7)) == [0]
    assert idempotents(build_affine_semigroup(5, units_only=True)) == [0]  # 1x+0


def test_kernel_examples():
    rep = minimal_left_ideals(multiplicative_semigroup(6))
    assert rep.kernel == [0] and rep.minimal_idempotents == [0]
    g = build_affine_semigroup(7)
    rep = minimal_left_ideals(g)
    assert rep.left_ideals == [list(range(g.size))] and rep.minimal_idempotents == [0]


def _closure_ideals(t):
    """Oracle: minimal left ideals by brute-force closure of S x."""
    n = len(t)
    ideals = [frozenset(t[s][x] for s in range(n)) for x in range(n)]
    minimal = {L for L in ideals if not any(M < L for M in ideals)}
    return sorted(sorted(L) for L in minimal)


@pytest.mark.parametrize("n", range(2, 17))
def test_ideals_match_closure_and_kernel_absorbs(n):
    for s in (build_affine_semigroup(n), multiplicative_semigroup(n)):
        t = s.table.tolist()
        rep = minimal_left_ideals(s)
        assert rep.left_ideals == _closure_ideals(t)
        K = set(rep.kernel)
        assert all(t[a][k] in K and t[k][a] in K for a in range(s.size) for k in K)
        assert idempotents(s)
        assert rep.minimal_idempotents


def test_all_semigroups_up_to_64():
    for n in range(2, 65):
        for uo in (False, True):
            s = build_affine_semigroup(n, units_only=uo)
            assert idempotents(s)


def test_summary_json():
    d = semigroup_summary(multiplicative_semigroup(6))
    assert d["idempotents"] == ["0", "1", "3", "4"] and d["kernel"] == ["0"]


# -- return sets ----------------------------------------------------------------------


def test_return_example_n5():
    rep = return_sets(5, [[0, 1]], epsilon=0)
    s = rep.sets[0]
    assert s.profile[1] == Fraction(1, 5) and s.measure == Fraction(2, 5)
    assert 1 in s.returns
    assert rep.mode == "epsilon" and not rep.warnings


def test_full_set_returns_everything():
    for n in (5, 7, 11):
        rep = return_sets(n, [range(n)], delta=Fraction(99, 100))
        assert rep.sets[0].returns == list(range(1, n))


def test_two_sets_n7():
    rep = return_sets(7, [[0, 1, 2], [3, 4, 5]], delta=0.5)
    assert rep.threshold == Fraction(1, 2)
    assert rep.intersection == sorted(set(rep.sets[0].returns) & set(rep.sets[1].returns))


def test_delta_strict_epsilon_loose():
    n, b = 5, [0, 1]
    prof = return_profile(n, b)
    mu2 = Fraction(4, 25)
    # delta = 5/4 puts the threshold at exactly 1/5
    d = return_sets(n, [b], delta=Fraction(5, 4)).sets[0].returns
    e = return_sets(n, [b], epsilon=mu2 - Fraction(1, 5)).sets[0].returns
    assert d == [u for u, m in prof.items() if m > Fraction(1, 5)]
    assert e == [u for u, m in prof.items() if m >= Fraction(1, 5)]
    assert set(d) < set(e)


def test_empty_b_and_warnings():
    rep = return_sets(6, [[]], delta=0)
    assert rep.sets[0].returns == [] and len(rep.warnings) == 2
    with pytest.raises(ConfigError):
        return_sets(5, [[0]])
    with pytest.raises(ModulusRange):
        return_sets(1, [[0]], delta=0)


@pytest.mark.parametrize("n", range(2, 32))
def test_profile_matches_quadratic_count(n):
    rng = random.Random(n)
    for _ in range(20):
        b = rng.sample(range(n), rng.randint(0, n))
        assert return_profile(n, b) == quadratic_profile(n, b)


@given(st.sampled_from([p for p in range(2, 40) if is_prime(p)]), st.data())
@settings(max_examples=60)
def test_measure_preserved_on_fields(p, data):
    b = data.draw(st.sets(st.integers(0, p - 1)))
    u = data.draw(st.integers(1, p - 1))
    v = data.draw(st.integers(0, p - 1))
    pre = {x for x in range(p) if (u * x + v) % p in b}
    assert len(pre) == len(b)
