"""Set encodings of partitions and subpartition machinery.

Two encodings are used.  Parts encoding: each block of a partition becomes
one universe element, so a partition is the set of its blocks.  Edge
encoding: universe elements are the unordered pairs of [n], and a partition
maps to all pairs lying inside a common block (in graph terms, a disjoint
union of cliques).
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .errors import DomainError
from .partitions import Partition, u_count
from .setfam import EdgesUniverse, ElementSet, PartsUniverse, SetFamily


class SubPartition:
    """Disjoint blocks of size >= 2; the weight is sum(|X_i| - 1)."""

    __slots__ = ("blocks",)

    def __init__(self, blocks: Iterable[Iterable[int]], max_block: int | None = None):
        blocks = [tuple(sorted(b)) for b in blocks]
        seen: set[int] = set()
        total = 0
        for b in blocks:
            if len(b) < 2:
                raise DomainError("subpartition blocks must have size >= 2")
            if max_block is not None and len(b) > max_block:
                raise DomainError(
                    f"block {b} larger than the size cap {max_block}"
                )
            total += len(b)
            seen.update(b)
        if len(seen) != total:
            raise DomainError("subpartition blocks are not disjoint")
        blocks.sort(key=lambda b: b[0] if b else 0)
        self.blocks = tuple(blocks)

    @property
    def weight(self) -> int:
        return sum(len(b) - 1 for b in self.blocks)

    @property
    def num_blocks(self) -> int:
        return len(self.blocks)

    def elements(self) -> set[int]:
        out: set[int] = set()
        for b in self.blocks:
            out.update(b)
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, SubPartition) and self.blocks == other.blocks

    def __hash__(self) -> int:
        return hash(self.blocks)

    def __repr__(self) -> str:
        body = "|".join(",".join(str(e) for e in b) for b in self.blocks)
        return f"SubPartition[{body}]"


def subpartition_weight(x: SubPartition) -> int:
    return x.weight


def encode_parts(p: Partition, u: PartsUniverse) -> ElementSet:
    """One universe element per block; the set size is the block count."""
    if u.kind != "parts" or u.n != p.n:
        raise DomainError("partition does not match the parts universe")
    return ElementSet.from_indices(u, (u.index_of(b) for b in p.blocks))


def decode_parts(es: ElementSet) -> Partition:
    u = es.universe
    if u.kind != "parts":
        raise DomainError("decode_parts needs a parts-universe set")
    return Partition([sorted(u.part_at(i)) for i in es.indices()], n=u.n)


def encode_edges(p: Partition, u: EdgesUniverse) -> ElementSet:
    """All within-block pairs; size is sum over blocks of C(|block|, 2)."""
    if u.kind != "edges" or u.n != p.n:
        raise DomainError("partition does not match the edge universe")
    idx = []
    for b in p.blocks:
        for pair in combinations(b, 2):
            idx.append(u.index_of(pair))
    return ElementSet.from_indices(u, idx)


def edges_to_subpartition(es: ElementSet) -> SubPartition:
    """Blocks are the >=2-vertex connected components of the edge set."""
    u = es.universe
    if u.kind != "edges":
        raise DomainError("edges_to_subpartition needs an edge-universe set")
    parent: dict[int, int] = {}

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for idx in es.indices():
        i, j = u.pair_at(idx)
        parent.setdefault(i, i)
        parent.setdefault(j, j)
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[ri] = rj
    comps: dict[int, list[int]] = {}
    for v in parent:
        comps.setdefault(find(v), []).append(v)
    return SubPartition([c for c in comps.values() if len(c) >= 2])


def count_extensions(k: int, l: int, x: SubPartition) -> int:
    """Number of partitions of [k*l] into l k-blocks extending the subpartition.

    A partition extends x when every block of x lies inside some part; two
    blocks of x may share a part when their sizes fit.  For a fixed grouping
    of the blocks into shared parts (group totals <= k) the count is the
    multinomial

        (kl - sum|X_i|)! / ( (l - g)! * k!^(l-g) * prod_groups (k - size)! )

    with g groups, and the exact total sums this over all groupings.  The
    bare single-block-per-part term alone undercounts as soon as two block
    sizes fit into one part (first at k = 4 with two pairs); the summed form
    is validated against enumeration for every u(k,l) <= 1e5 in the tests.
    """
    if k < 1 or l < 1:
        raise DomainError("need k >= 1 and l >= 1")
    a = x.num_blocks
    sizes = [len(b) for b in x.blocks]
    for b in x.blocks:
        if len(b) > k:
            raise DomainError(f"block {b} larger than the part size {k}")
    if any(e < 1 or e > k * l for e in x.elements()):
        raise DomainError(f"subpartition elements must lie in [{k * l}]")
    fixed = sum(sizes)
    free = math.factorial(k * l - fixed)
    total = 0
    for grouping in _block_groupings(a):
        group_sizes = [sum(sizes[i] for i in g) for g in grouping]
        if any(s > k for s in group_sizes):
            continue
        g = len(group_sizes)
        if g > l:
            continue
        denom = math.factorial(l - g) * math.factorial(k) ** (l - g)
        for s in group_sizes:
            denom *= math.factorial(k - s)
        term, rem = divmod(free, denom)
        assert rem == 0
        total += term
    return total


def _block_groupings(a: int):
    """All set partitions of block indices 0..a-1 (a is tiny in practice)."""
    if a == 0:
        yield []
        return
    from .partitions import iter_partitions

    for p in iter_partitions(a, guard=max(a, 13)):
        yield [[e - 1 for e in block] for block in p.blocks]


def extension_ratio(k: int, l: int, x: SubPartition) -> Fraction:
    """count_extensions / u(k,l) as an exact rational."""
    return Fraction(count_extensions(k, l, x), u_count(k, l))


# ---------------------------------------------------------------------------
# family builders


def encode_family_parts(
    partitions: Sequence[Partition],
) -> tuple[PartsUniverse, SetFamily]:
    """Parts-encode a list of partitions over a fresh lazy universe."""
    if not partitions:
        raise DomainError("cannot encode an empty list of partitions")
    n = partitions[0].n
    u = PartsUniverse(n)
    masks = []
    for p in partitions:
        masks.append(encode_parts(p, u).mask)
    return u, SetFamily(u, masks)


def encode_family_edges(
    partitions: Sequence[Partition],
) -> tuple[EdgesUniverse, SetFamily]:
    """Edge-encode a list of partitions over the full pair universe."""
    if not partitions:
        raise DomainError("cannot encode an empty list of partitions")
    n = partitions[0].n
    u = EdgesUniverse(n)
    masks = [encode_edges(p, u).mask for p in partitions]
    return u, SetFamily(u, masks)
