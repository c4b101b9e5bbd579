import sys
from itertools import combinations
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

import pytest

from partspread.setfam import PlainUniverse, SetFamily


def ksubsets_family(n: int, k: int) -> SetFamily:
    """All k-subsets of {0..n-1} over a plain universe."""
    u = PlainUniverse(n)
    return SetFamily(u, [sum(1 << i for i in c) for c in combinations(range(n), k)])


def family_of(n: int, *index_sets) -> SetFamily:
    u = PlainUniverse(n)
    return SetFamily(u, [sum(1 << i for i in s) for s in index_sets])


@pytest.fixture(scope="session")
def b4_encoded():
    from partspread.encoding import encode_family_parts
    from partspread.partitions import enumerate_partitions

    return encode_family_parts(enumerate_partitions(4))


@pytest.fixture(scope="session")
def b5_encoded():
    from partspread.encoding import encode_family_parts
    from partspread.partitions import enumerate_partitions

    return encode_family_parts(enumerate_partitions(5))


@pytest.fixture(scope="session")
def b6_encoded():
    from partspread.encoding import encode_family_parts
    from partspread.partitions import enumerate_partitions

    return encode_family_parts(enumerate_partitions(6))
