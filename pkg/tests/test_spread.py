import random
from fractions import Fraction
from itertools import combinations

import pytest

from conftest import family_of, ksubsets_family
from partspread.encoding import decode_parts
from partspread.errors import DomainError, PreconditionError, ResourceLimitError
from partspread.exact import ExactPow
from partspread.partitions import Partition, bell
from partspread.setfam import PlainUniverse, SetFamily, restrict
from partspread.spread import (
    find_max_violating,
    find_spread_subfamily,
    find_sunflower,
    is_r_spread,
    spread_factor,
    weak_spread,
)


def test_exactpow_ordering():
    assert ExactPow(52, Fraction(1, 5)) > 2
    assert ExactPow(52, Fraction(1, 5)) < Fraction(9, 4)
    assert ExactPow(4, Fraction(1, 2)) == 2
    assert ExactPow(8, Fraction(2, 3)) == 4
    assert ExactPow.infinity() > ExactPow(10**30)
    assert ExactPow(Fraction(1, 2)) < 1
    values = [ExactPow(3, Fraction(1, 2)), ExactPow(2), ExactPow(5, Fraction(1, 3))]
    assert sorted(values) == [values[2], values[0], values[1]]


def test_spread_factor_singletons():
    f = SetFamily(PlainUniverse(7), [1 << i for i in range(7)])
    rep = spread_factor(f)
    assert rep.r_star == 7
    assert rep.witness.size == 1


def test_spread_factor_pairs_of_four():
    f = ksubsets_family(4, 2)
    rep = spread_factor(f)
    assert rep.r_star == 2
    assert rep.witness.size == 1
    # pairs only give sqrt(6) > 2
    assert ExactPow(6, Fraction(1, 2)) > 2


def test_spread_factor_encoded_b5(b5_encoded):
    u, fam = b5_encoded
    rep = spread_factor(fam)
    assert rep.r_star == ExactPow(52, Fraction(1, 5))
    witness = decode_parts(rep.witness)
    assert witness == Partition([[1], [2], [3], [4], [5]])
    # oracle: minimum over s of (B_5 / B_(5-s))^(1/s)
    oracle = min(
        ExactPow(Fraction(bell(5), bell(5 - s)), Fraction(1, s)) for s in range(1, 6)
    )
    assert rep.r_star == oracle


def test_spread_factor_guard():
    f = SetFamily(PlainUniverse(40), [(1 << 40) - 1])
    with pytest.raises(ResourceLimitError, match="SPREAD_CANDIDATE_MAX"):
        spread_factor(f)
    with pytest.raises(DomainError):
        spread_factor(SetFamily(PlainUniverse(3), []))


def test_is_r_spread():
    f = ksubsets_family(4, 2)
    ok, wit = is_r_spread(f, 1)
    assert ok and wit is None
    ok, wit = is_r_spread(f, 2)
    assert ok
    ok, wit = is_r_spread(f, Fraction(21, 10))
    assert not ok and wit.size == 1
    # a single set violates every r > 1 (any nonempty subset has |F(X)| = |F|)
    single = family_of(5, {0, 1, 2})
    ok, wit = is_r_spread(single, Fraction(101, 100))
    assert not ok and wit.mask & single.masks[0] == wit.mask and wit.size >= 1


def test_is_r_spread_iff_below_factor():
    rnd = random.Random(2)
    for _ in range(15):
        members = [
            frozenset(rnd.randrange(8) for _ in range(rnd.randint(1, 4)))
            for _ in range(rnd.randint(2, 8))
        ]
        f = family_of(8, *members)
        rep = spread_factor(f)
        for r in (Fraction(3, 2), 2, Fraction(5, 2), 3):
            assert is_r_spread(f, r)[0] == (ExactPow(Fraction(r)) <= rep.r_star)


def test_weak_spread_pairs():
    f = ksubsets_family(5, 2)
    t_set, r, wit = weak_spread(f, 1)
    assert t_set.size == 1
    assert r == 4
    assert wit is not None


def test_weak_spread_t0_matches_spread_factor():
    rnd = random.Random(9)
    for _ in range(10):
        members = [
            frozenset(rnd.randrange(7) for _ in range(rnd.randint(1, 3)))
            for _ in range(rnd.randint(1, 6))
        ]
        f = family_of(7, *members)
        t_set, r, _ = weak_spread(f, 0)
        assert t_set.size == 0
        assert r == spread_factor(f).r_star


def test_weak_spread_encoded_b4(b4_encoded):
    u, fam = b4_encoded
    t_set, r, _ = weak_spread(fam, 1)
    part = u.part_at(t_set.indices()[0])
    assert len(part) == 1  # a singleton part maximizes the star
    from partspread.setfam import star_count

    assert star_count(fam, t_set) == bell(3)


def test_weak_spread_errors():
    f = ksubsets_family(4, 2)
    with pytest.raises(DomainError):
        weak_spread(f, 3)


def test_find_max_violating_greedy_trace():
    f = family_of(4, {0, 1}, {0, 2}, {0, 3})
    x = find_max_violating(f, 2)
    assert x.indices() == [0, 1]
    ok, _ = is_r_spread(restrict(f, x), 2)
    assert ok


def test_find_max_violating_singletons():
    f = SetFamily(PlainUniverse(5), [1 << i for i in range(5)])
    # r above n: the first singleton qualifies; maximal at size 1
    x = find_max_violating(f, 7)
    assert x.indices() == [0]
    # r below n: the family is already r-spread, so the empty set is maximal
    x = find_max_violating(f, 3)
    assert x.size == 0
    ok, _ = is_r_spread(restrict(f, x), 3)
    assert ok


def test_find_max_violating_absorbs_multi_element_violators():
    # no single element meets the threshold (all degrees < |F|/r) but a pair
    # does, so plain one-step greedy would stop at the empty set with a
    # restriction that is not r-spread; the returned set must absorb it
    f = family_of(
        9, {0, 1, 2}, {0, 1, 3}, {4}, {5}, {6}, {7}, {8}, {4, 5}, {6, 7}
    )
    assert f.size == 9
    ok, viol = is_r_spread(f, 3)
    assert not ok and viol.indices() == [0, 1]
    x = find_max_violating(f, 3)
    assert x.indices() == [0, 1, 2]
    ok, _ = is_r_spread(restrict(f, x), 3)
    assert ok


def test_find_max_violating_postcondition_randomized(b6_encoded):
    u, fam = b6_encoded
    rnd = random.Random(123)
    ratios = [Fraction(3, 2), 2, Fraction(5, 2), 3, 4]
    for _ in range(30):
        size = rnd.randint(3, 40)
        masks = rnd.sample(fam.masks, size)
        sub = SetFamily(u, masks)
        r = rnd.choice(ratios)
        x = find_max_violating(sub, r)
        assert star_count_ok(sub, x, r)
        ok, _ = is_r_spread(restrict(sub, x), r)
        assert ok
        # threshold property of the returned set itself
        rep = spread_factor(restrict(sub, x))
        assert rep.r_star >= ExactPow(Fraction(r))


def star_count_ok(f, x, r) -> bool:
    from partspread.setfam import star_count

    r = Fraction(r)
    cnt = star_count(f, x)
    s = x.size
    return cnt * r.numerator**s >= f.size * r.denominator**s


def test_find_spread_subfamily():
    f = ksubsets_family(4, 2)
    x, sub = find_spread_subfamily(f, 2)
    assert x.size == 0 and sub == f
    # star plus a triangle: 6 members > 2^2
    fam = family_of(4, {0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3})
    x, sub = find_spread_subfamily(fam, 2)
    ok, _ = is_r_spread(sub, 2)
    assert ok and x.size < 2
    with pytest.raises(PreconditionError):
        find_spread_subfamily(family_of(4, {0, 1}), 2)
    with pytest.raises(PreconditionError):
        find_spread_subfamily(family_of(4, {0, 1}, {0, 1, 2}), 2)


def test_find_spread_subfamily_postcheck_random():
    rnd = random.Random(21)
    for _ in range(20):
        k = rnd.choice([2, 3])
        members = set()
        while len(members) < rnd.randint(5, 12):
            members.add(frozenset(rnd.sample(range(8), k)))
        f = family_of(8, *members)
        alpha = Fraction(rnd.randint(11, 20), 10)
        if not Fraction(f.size) > alpha**k:
            continue
        x, sub = find_spread_subfamily(f, alpha)
        assert x.size < k
        ok, _ = is_r_spread(sub, alpha)
        assert ok


def test_find_sunflower_examples():
    star = family_of(4, {0, 1}, {0, 2}, {0, 3})
    got = find_sunflower(star, 3)
    assert got is not None
    core, petals = got
    assert core.indices() == [0] and len(petals) == 3
    disjoint = family_of(6, {0, 1}, {2, 3}, {4, 5})
    core, petals = find_sunflower(disjoint, 3)
    assert core.size == 0 and len(petals) == 3
    assert find_sunflower(disjoint, 4) is None
    # any two sets form a 2-sunflower
    f2 = family_of(4, {0, 1}, {1, 2})
    core, petals = find_sunflower(f2, 2)
    assert core.indices() == [1]


def test_find_sunflower_petals_are_a_sunflower():
    rnd = random.Random(17)
    for _ in range(20):
        members = set()
        while len(members) < 12:
            members.add(frozenset(rnd.sample(range(9), rnd.randint(1, 3))))
        f = family_of(9, *members)
        for l in (2, 3, 4):
            got = find_sunflower(f, l)
            if got is None:
                continue
            core, petals = got
            assert len(petals) == l
            for i in range(l):
                for j in range(i + 1, l):
                    inter = petals[i].intersection(petals[j])
                    assert inter.mask == core.mask


def test_sunflower_classical_threshold_2_uniform():
    # any 2-uniform family with more than k!(l-1)^k = 8 members contains a
    # 3-sunflower; this implies the looser guarantee quoted for the same
    # parameters, whose constant is astronomically larger
    rnd = random.Random(31)
    for trial in range(25):
        n = rnd.randint(6, 12)
        pool = list(combinations(range(n), 2))
        rnd.shuffle(pool)
        fam = family_of(n, *[set(c) for c in pool[:9]])
        if fam.size <= 8:
            continue
        assert find_sunflower(fam, 3) is not None


def test_find_sunflower_guard():
    f = family_of(4, {0, 1}, {1, 2}, {2, 3})
    with pytest.raises(ResourceLimitError):
        find_sunflower(f, 2, guard=2)
    with pytest.raises(DomainError):
        find_sunflower(f, 0)
