"""Spreadness metrics, maximal violators, spread subfamilies, sunflowers.

A family F is r-spread when |F(X)| <= r^(-|X|) |F| for every set X.  Only
nonempty subsets of members matter (any other X has F(X) empty), so the
candidate space is the union of member power sets.  All comparisons clear
denominators and compare integer powers; no decision is made in floating
point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from .errors import DomainError, PreconditionError, ResourceLimitError
from .exact import ExactPow, as_fraction
from .setfam import ElementSet, SetFamily, restrict
from . import guards


def _candidate_counts(
    f: SetFamily, guard: int | None = None, unguarded: bool = False
) -> dict[int, int]:
    """Map each nonempty submask of a member to |F[X]|, the members containing it."""
    if not unguarded:
        limit = guards.effective(guard, guards.SPREAD_CANDIDATE_MAX)
        total = sum(2 ** m.bit_count() for m in f.masks)
        if total > limit:
            raise ResourceLimitError(
                f"SPREAD_CANDIDATE_MAX: {total} candidate sets exceed the "
                f"guard {limit}; use is_r_spread with an explicit r instead"
            )
    counts: dict[int, int] = {}
    for m in f.masks:
        sub = m
        while sub:
            counts[sub] = counts.get(sub, 0) + 1
            sub = (sub - 1) & m
    return counts


def _canonical_order(masks: Iterable[int]) -> list[int]:
    return sorted(masks, key=lambda m: (m.bit_count(), m))


@dataclass
class SpreadReport:
    """Best spread factor of a family: the family is r-spread iff r <= r_star."""

    r_star: ExactPow
    witness: Optional[ElementSet]
    scanned: int

    def __repr__(self) -> str:
        return (
            f"SpreadReport(r_star={float(self.r_star):.6g}, "
            f"witness={self.witness}, scanned={self.scanned})"
        )


def spread_factor(f: SetFamily, guard: int | None = None) -> SpreadReport:
    """max r such that f is r-spread: min over X of (|F|/|F(X)|)^(1/|X|)."""
    if f.size == 0:
        raise DomainError("spread factor of an empty family")
    counts = _candidate_counts(f, guard=guard)
    best: Optional[ExactPow] = None
    best_mask = None
    for mask in _canonical_order(counts):
        value = ExactPow(Fraction(f.size, counts[mask]), Fraction(1, mask.bit_count()))
        if best is None or value < best:
            best = value
            best_mask = mask
    if best is None:
        return SpreadReport(ExactPow.infinity(), None, 0)
    return SpreadReport(best, ElementSet(f.universe, best_mask), len(counts))


def is_r_spread(
    f: SetFamily, r
) -> tuple[bool, Optional[ElementSet]]:
    """Exact test of |F(X)| * r^|X| <= |F| for all X; returns a violator if any."""
    if f.size == 0:
        raise DomainError("spreadness of an empty family")
    r = as_fraction(r)
    p, q = r.numerator, r.denominator
    counts = _candidate_counts(f, unguarded=True)
    size = f.size
    for mask in _canonical_order(counts):
        s = mask.bit_count()
        if counts[mask] * p**s > size * q**s:
            return False, ElementSet(f.universe, mask)
    return True, None


def weak_spread(
    a: SetFamily, t: int, guard: int | None = None
) -> tuple[ElementSet, ExactPow, Optional[ElementSet]]:
    """Best weak (r, t)-spreadness data of a family.

    Picks the t-set T maximizing |a(T)| (ties lexicographic) and returns the
    largest r such that |a(U)| <= r^(-s) |a(T)| for every (t+s)-set U with
    s >= 1, together with the minimizing U.
    """
    if t < 0:
        raise DomainError("weak_spread needs t >= 0")
    if a.size == 0:
        raise DomainError("weak_spread of an empty family")
    if t == 0:
        rep = spread_factor(a, guard=guard)
        return ElementSet(a.universe, 0), rep.r_star, rep.witness
    if a.max_size() < t:
        raise DomainError(f"no member has size >= t = {t}")
    counts = _candidate_counts(a, guard=guard)
    t_candidates = [m for m in counts if m.bit_count() == t]
    best_t = max(t_candidates, key=lambda m: (counts[m], -m))
    t_count = counts[best_t]
    best: Optional[ExactPow] = None
    best_mask = None
    for mask in _canonical_order(counts):
        s = mask.bit_count() - t
        if s < 1:
            continue
        value = ExactPow(Fraction(t_count, counts[mask]), Fraction(1, s))
        if best is None or value < best:
            best = value
            best_mask = mask
    if best is None:
        return ElementSet(a.universe, best_t), ExactPow.infinity(), None
    return ElementSet(a.universe, best_t), best, ElementSet(a.universe, best_mask)


def find_max_violating(f: SetFamily, r) -> ElementSet:
    """Grow a set X with |F(X)| >= r^(-|X|) |F| until F(X) is r-spread.

    Greedy growth from the empty set: each step adds the element maximizing
    |F(X + e)| among those keeping the threshold, ties to the smallest index.
    When no single element qualifies, a violator of the spreadness of F(X)
    (if any) is absorbed and growth resumes; the returned X therefore always
    satisfies the threshold and leaves restrict(f, X) r-spread.
    """
    if f.size == 0:
        raise DomainError("find_max_violating of an empty family")
    r = as_fraction(r)
    if r <= 1:
        raise DomainError("find_max_violating needs r > 1")
    p, q = r.numerator, r.denominator
    size = f.size
    x = 0
    while True:
        containing = [m for m in f.masks if m & x == x]
        pool = 0
        for m in containing:
            pool |= m
        pool &= ~x
        s1 = x.bit_count() + 1
        lhs_scale = p**s1
        rhs = size * q**s1
        best_e = None
        best_cnt = 0
        m2 = pool
        while m2:
            low = m2 & -m2
            e = low.bit_length() - 1
            m2 ^= low
            bit = 1 << e
            cnt = sum(1 for m in containing if m & bit)
            if cnt * lhs_scale >= rhs and cnt > best_cnt:
                best_cnt = cnt
                best_e = e
        if best_e is not None:
            x |= 1 << best_e
            continue
        ok, viol = is_r_spread(restrict(f, ElementSet(f.universe, x)), r)
        if ok:
            return ElementSet(f.universe, x)
        x |= viol.mask


def find_spread_subfamily(
    f: SetFamily, alpha, guard: int | None = None
) -> tuple[ElementSet, SetFamily]:
    """An alpha-spread restriction F(X) of a k-uniform family with |F| > alpha^k.

    Takes the largest X violating alpha-spreadness (ties lexicographic);
    with no violator the family itself is returned with X empty.
    """
    if f.size == 0:
        raise PreconditionError("empty family")
    sizes = {m.bit_count() for m in f.masks}
    if len(sizes) != 1:
        raise PreconditionError("family is not uniform")
    k = sizes.pop()
    alpha = as_fraction(alpha)
    if not Fraction(f.size) > alpha**k:
        raise PreconditionError(
            f"|F| = {f.size} does not exceed alpha^k = {alpha}**{k}"
        )
    p, q = alpha.numerator, alpha.denominator
    counts = _candidate_counts(f, guard=guard)
    best_mask = None
    best_size = -1
    for mask in _canonical_order(counts):
        s = mask.bit_count()
        if counts[mask] * p**s > f.size * q**s and s > best_size:
            best_size = s
            best_mask = mask
    if best_mask is None:
        return ElementSet(f.universe, 0), f
    x = ElementSet(f.universe, best_mask)
    return x, restrict(f, x)


def _pack_disjoint(residues: list[tuple[int, int]], need: int) -> Optional[list[int]]:
    """Indices of `need` pairwise-disjoint residues, or None; exact DFS."""
    order = sorted(range(len(residues)), key=lambda i: (residues[i][0].bit_count(), i))

    def go(pos: int, used: int, acc: list[int]) -> Optional[list[int]]:
        if len(acc) == need:
            return acc
        if len(order) - pos < need - len(acc):
            return None
        for idx in range(pos, len(order)):
            rm, original = residues[order[idx]]
            if rm & used == 0:
                got = go(idx + 1, used | rm, acc + [original])
                if got is not None:
                    return got
        return None

    return go(0, 0, [])


def find_sunflower(
    f: SetFamily, l: int, guard: int | None = None
) -> Optional[tuple[ElementSet, list[ElementSet]]]:
    """l member sets whose pairwise intersections all equal the common core.

    The core of any sunflower with l >= 2 petals is the intersection of some
    member pair, so scanning all pairwise intersections as candidate cores is
    exhaustive; None is returned only after that scan completes.
    """
    if l < 1:
        raise DomainError("find_sunflower needs l >= 1")
    limit = guards.effective(guard, guards.SUNFLOWER_FAMILY_MAX)
    if f.size > limit:
        raise ResourceLimitError(
            f"SUNFLOWER_FAMILY_MAX: family size {f.size} exceeds guard {limit}"
        )
    if f.size < l:
        return None
    if l == 1:
        m = f.masks[0]
        return ElementSet(f.universe, m), [ElementSet(f.universe, m)]
    cores: set[int] = set()
    masks = f.masks
    for i in range(len(masks)):
        for j in range(i + 1, len(masks)):
            cores.add(masks[i] & masks[j])
    for core in _canonical_order(cores):
        residues = [
            (m & ~core, pos) for pos, m in enumerate(masks) if m & core == core
        ]
        if len(residues) < l:
            continue
        got = _pack_disjoint(residues, l)
        if got is not None:
            petals = [ElementSet(f.universe, masks[pos]) for pos in sorted(got)]
            return ElementSet(f.universe, core), petals
    return None
