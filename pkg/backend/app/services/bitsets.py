"""
Bitset helpers.

Subsets of a carrier with at most `settings.max_size` elements are stored as
plain Python ints; bit i set means element i is a member.
"""

from typing import Iterable, Iterator, List, Sequence


def full(n: int) -> int:
    return (1 << n) - 1


def bit(i: int) -> int:
    return 1 << i


def members(mask: int) -> Iterator[int]:
    """Yield the indices of the set bits in ascending order"""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def to_list(mask: int) -> List[int]:
    return list(members(mask))


def from_indices(indices: Iterable[int]) -> int:
    mask = 0
    for i in indices:
        mask |= 1 << i
    return mask


def size(mask: int) -> int:
    return mask.bit_count()


def is_subset(a: int, b: int) -> bool:
    return a & ~b == 0


def lowest(mask: int) -> int:
    """Index of the lowest set bit, -1 for the empty set"""
    return (mask & -mask).bit_length() - 1


def names_of(mask: int, names: Sequence[str]) -> List[str]:
    return [names[i] for i in members(mask)]


def format_set(mask: int, names: Sequence[str]) -> str:
    if not mask:
        return "∅"
    return "{" + ",".join(names_of(mask, names)) + "}"


def canonical_key(mask: int):
    """Sort key: cardinality first, then bitset value"""
    return (mask.bit_count(), mask)


def star_of(mask: int, rel: Sequence[int], universe: int) -> int:
    """Points related to every member of `mask` under the symmetric relation `rel`"""
    result = universe
    for y in members(mask):
        result &= rel[y]
    return result


def image(mask: int, mapping: Sequence[int]) -> int:
    out = 0
    for i in members(mask):
        out |= 1 << mapping[i]
    return out


def preimage(mask: int, mapping: Sequence[int]) -> int:
    out = 0
    for i, j in enumerate(mapping):
        if mask >> j & 1:
            out |= 1 << i
    return out


def up_sets(up: Sequence[int]) -> Iterator[int]:
    """
    Enumerate every up-set of a finite poset given by principal up-sets.

    `up[x]` is the bitset of points above x (x included). Points are decided
    in order; deciding x "in" forces its whole up-set in, deciding it "out"
    forces everything below it out, so every branch yields a distinct up-set.
    """
    m = len(up)
    down = [0] * m
    for x in range(m):
        for y in members(up[x]):
            down[y] |= 1 << x

    def walk(i: int, inside: int, outside: int) -> Iterator[int]:
        while i < m and (inside | outside) >> i & 1:
            i += 1
        if i == m:
            yield inside
            return
        if up[i] & outside == 0:
            yield from walk(i + 1, inside | up[i], outside)
        if down[i] & inside == 0:
            yield from walk(i + 1, inside, outside | down[i])

    yield from walk(0, 0, 0)


def intersection_closure(generators: Iterable[int], universe: int) -> List[int]:
    """All intersections of generator subfamilies, the empty one giving `universe`"""
    family = {universe}
    for g in generators:
        family |= {s & g for s in family}
    return sorted(family, key=canonical_key)
