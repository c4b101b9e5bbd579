"""Set partitions of [n]: canonical form, enumeration, counting, intersection.

Ground sets are always 1-based intervals [n] = {1, ..., n}.  A partition is
kept in canonical form: each block sorted ascending, blocks sorted by their
minimum element.  Two partitions are equal iff their canonical forms agree.
"""

from __future__ import annotations

import math
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Iterator

from .errors import DomainError, ResourceLimitError
from . import guards


class Partition:
    """A partition of [n] into disjoint nonempty blocks, canonically ordered."""

    __slots__ = ("n", "blocks", "_block_masks")

    def __init__(self, blocks: Iterable[Iterable[int]], n: int | None = None):
        blocks = [tuple(sorted(b)) for b in blocks]
        seen: set[int] = set()
        total = 0
        for b in blocks:
            if not b:
                raise DomainError("empty block")
            total += len(b)
            seen.update(b)
        if len(seen) != total:
            raise DomainError("blocks are not pairwise disjoint")
        if n is None:
            n = total
        if seen != set(range(1, n + 1)):
            raise DomainError(f"blocks do not cover [{n}] exactly")
        blocks.sort(key=lambda b: b[0])
        self.n = n
        self.blocks = tuple(blocks)
        self._block_masks = None

    @classmethod
    def _trusted(cls, n: int, blocks: tuple[tuple[int, ...], ...]) -> "Partition":
        """Build from blocks already known to be canonical (enumeration path)."""
        p = object.__new__(cls)
        p.n = n
        p.blocks = blocks
        p._block_masks = None
        return p

    @property
    def num_blocks(self) -> int:
        return len(self.blocks)

    def profile(self) -> "Profile":
        return Profile(sorted(len(b) for b in self.blocks))

    def block_masks(self) -> tuple[int, ...]:
        """Per-block bitmask with bit (e-1) set for element e."""
        if self._block_masks is None:
            self._block_masks = tuple(
                sum(1 << (e - 1) for e in b) for b in self.blocks
            )
        return self._block_masks

    def has_singleton(self) -> bool:
        return any(len(b) == 1 for b in self.blocks)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Partition)
            and self.n == other.n
            and self.blocks == other.blocks
        )

    def __hash__(self) -> int:
        return hash((self.n, self.blocks))

    def __repr__(self) -> str:
        body = "|".join(",".join(str(e) for e in b) for b in self.blocks)
        return f"Partition[{body}]"


class Profile:
    """A non-decreasing sequence of positive block sizes."""

    __slots__ = ("sizes",)

    def __init__(self, sizes: Iterable[int]):
        sizes = tuple(sizes)
        if not all(isinstance(s, int) and s >= 1 for s in sizes):
            raise DomainError("profile sizes must be positive integers")
        if any(a > b for a, b in zip(sizes, sizes[1:])):
            raise DomainError("profile sizes must be non-decreasing")
        self.sizes = sizes

    @classmethod
    def uniform(cls, k: int, l: int) -> "Profile":
        """The profile of partitions of [k*l] into l blocks of size k."""
        if k < 1 or l < 1:
            raise DomainError("uniform profile needs k >= 1 and l >= 1")
        return cls((k,) * l)

    @property
    def n(self) -> int:
        return sum(self.sizes)

    @property
    def num_blocks(self) -> int:
        return len(self.sizes)

    def __eq__(self, other) -> bool:
        return isinstance(other, Profile) and self.sizes == other.sizes

    def __hash__(self) -> int:
        return hash(self.sizes)

    def __repr__(self) -> str:
        return f"Profile{self.sizes}"


# ---------------------------------------------------------------------------
# counting


_BELLS = [1]  # grown in place: _BELLS[n] = B_n


def bell(n: int) -> int:
    """The n-th Bell number via B_{n+1} = sum_i C(n,i) B_i, cached."""
    if n < 0:
        raise DomainError("bell(n) needs n >= 0")
    while len(_BELLS) <= n:
        m = len(_BELLS) - 1
        _BELLS.append(sum(math.comb(m, i) * _BELLS[i] for i in range(m + 1)))
    return _BELLS[n]


@lru_cache(maxsize=None)
def stirling2(n: int, l: int) -> int:
    """Stirling number of the second kind: partitions of [n] into l blocks."""
    if n < 0 or l < 0:
        raise DomainError("stirling2 needs n >= 0 and l >= 0")
    if l == 0:
        return 1 if n == 0 else 0
    if l > n:
        return 0
    return stirling2(n - 1, l - 1) + l * stirling2(n - 1, l)


@lru_cache(maxsize=None)
def tilde_bell(n: int) -> int:
    """Partitions of [n] with every block of size at least 2.

    Recurrence conditions on the block containing the largest element:
    tB_{n+1} = sum_{i=0, i != 1}^{n-1} C(n, i) tB_i, with tB_0 = 1, tB_1 = 0.
    The i = 0 term (the block is all of [n+1]) is required; without it the
    recurrence gives tB_3 = 0 instead of 1.
    """
    if n < 0:
        raise DomainError("tilde_bell(n) needs n >= 0")
    if n == 0:
        return 1
    if n == 1:
        return 0
    m = n - 1  # previous ground-set size in the recurrence
    return sum(math.comb(m, i) * tilde_bell(i) for i in range(m) if i != 1)


def count_profiled(p: Profile) -> int:
    """Number of partitions whose multiset of block sizes equals the profile.

    n! / (prod k_i! * prod mult_s!) where mult_s counts repeats of size s;
    the multiplicity factor stops equal-size blocks from being ordered.
    """
    n = p.n
    count = math.factorial(n)
    for k in p.sizes:
        count //= math.factorial(k)
    mult = 1
    for i, k in enumerate(p.sizes):
        mult = mult + 1 if i > 0 and k == p.sizes[i - 1] else 1
        count //= mult
    return count


def u_count(k: int, l: int) -> int:
    """Number of partitions of [k*l] into l blocks of size k."""
    return count_profiled(Profile.uniform(k, l))


# ---------------------------------------------------------------------------
# enumeration


def iter_rgs(n: int) -> Iterator[list[int]]:
    """Restricted growth strings of length n in lexicographic order.

    Yields an internal buffer that is mutated in place; copy before storing.
    """
    if n == 0:
        yield []
        return
    a = [0] * n
    b = [1] * n  # b[i] = 1 + max(a[:i]) for i >= 1
    while True:
        yield a
        j = n - 1
        while j > 0 and a[j] >= b[j]:
            j -= 1
        if j == 0:
            return
        a[j] += 1
        nb = b[j] + 1 if a[j] == b[j] else b[j]
        for i in range(j + 1, n):
            a[i] = 0
            b[i] = nb


def _blocks_from_rgs(rgs: list[int], n: int) -> tuple[tuple[int, ...], ...]:
    nblocks = (max(rgs) + 1) if n else 0
    blocks: list[list[int]] = [[] for _ in range(nblocks)]
    for i, lab in enumerate(rgs):
        blocks[lab].append(i + 1)
    # labels appear in first-seen order, so block minima are increasing
    return tuple(tuple(b) for b in blocks)


def iter_partitions(n: int, guard: int | None = None) -> Iterator[Partition]:
    """All partitions of [n] in canonical (RGS-lexicographic) order."""
    if n < 0:
        raise DomainError("iter_partitions needs n >= 0")
    limit = guards.effective(guard, guards.ENUM_MAX_N)
    if n > limit:
        raise ResourceLimitError(
            f"ENUM_MAX_N: n={n} exceeds the enumeration guard {limit}"
        )
    for rgs in iter_rgs(n):
        yield Partition._trusted(n, _blocks_from_rgs(rgs, n))


def enumerate_partitions(n: int, guard: int | None = None) -> list[Partition]:
    """All partitions of [n] as a list; length equals bell(n)."""
    return list(iter_partitions(n, guard=guard))


def enumerate_into_blocks(n: int, l: int, guard: int | None = None) -> list[Partition]:
    """All partitions of [n] with exactly l blocks; length stirling2(n, l)."""
    if l < 1 or l > n:
        raise DomainError(f"need 1 <= l <= n, got l={l}, n={n}")
    return [p for p in iter_partitions(n, guard=guard) if p.num_blocks == l]


def _gen_profiled(
    elems: tuple[int, ...], sizes: tuple[int, ...]
) -> Iterator[tuple[tuple[int, ...], ...]]:
    """Blocks over elems with the given size multiset, minima increasing."""
    if not elems:
        yield ()
        return
    first, rest = elems[0], elems[1:]
    tried: set[int] = set()
    for i, size in enumerate(sizes):
        if size in tried:
            continue
        tried.add(size)
        remaining_sizes = sizes[:i] + sizes[i + 1 :]
        for others in combinations(rest, size - 1):
            block = (first,) + others
            chosen = set(others)
            remaining = tuple(e for e in rest if e not in chosen)
            for tail in _gen_profiled(remaining, remaining_sizes):
                yield (block,) + tail


def enumerate_profiled(p: Profile, guard: int | None = None) -> list[Partition]:
    """All partitions of [sum(sizes)] whose block sizes match the profile."""
    total = count_profiled(p)
    limit = guards.effective(guard, guards.PROFILED_ENUM_MAX)
    if total > limit:
        raise ResourceLimitError(
            f"PROFILED_ENUM_MAX: profile {p.sizes} has {total} partitions, "
            f"exceeding the guard {limit}"
        )
    n = p.n
    elems = tuple(range(1, n + 1))
    return [Partition._trusted(n, bl) for bl in _gen_profiled(elems, p.sizes)]


def enumerate_uniform(k: int, l: int, guard: int | None = None) -> list[Partition]:
    """All partitions of [k*l] into l blocks of size k."""
    return enumerate_profiled(Profile.uniform(k, l), guard=guard)


def count_derangements(p: Partition, guard: int | None = None) -> int:
    """Partitions of [n] sharing no block with p, counted by enumeration."""
    own = set(p.blocks)
    return sum(
        1
        for q in iter_partitions(p.n, guard=guard)
        if not own.intersection(q.blocks)
    )


# ---------------------------------------------------------------------------
# intersection predicates


def t_intersect(p: Partition, q: Partition, t: int) -> bool:
    """True iff p and q have at least t blocks in common (as sets)."""
    if p.n != q.n:
        raise DomainError("partitions over different ground sets")
    if t < 0:
        raise DomainError("t_intersect needs t >= 0")
    if t == 0:
        return True
    shared = set(p.blocks).intersection(q.blocks)
    return len(shared) >= t


def partially_t_intersect(p: Partition, q: Partition, t: int) -> bool:
    """True iff some block of p meets some block of q in >= t elements."""
    if p.n != q.n:
        raise DomainError("partitions over different ground sets")
    if t < 1:
        raise DomainError("partially_t_intersect needs t >= 1")
    qmasks = q.block_masks()
    for pm in p.block_masks():
        for qm in qmasks:
            if (pm & qm).bit_count() >= t:
                return True
    return False
