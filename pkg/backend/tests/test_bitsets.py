import numpy as np
from hypothesis import given, strategies as st

from app.services import bitsets
from app.services.lattice_service import transitive_closure


@st.composite
def posets(draw, max_points=6):
    """Random finite posets as principal up-set bitsets (edges only go from lower to higher index)"""
    m = draw(st.integers(min_value=0, max_value=max_points))
    relation = np.zeros((m, m), dtype=bool)
    for i in range(m):
        for j in range(i + 1, m):
            relation[i, j] = draw(st.booleans())
    leq = transitive_closure(relation)
    return [bitsets.from_indices(np.flatnonzero(row).tolist()) for row in leq]


class TestBitsets:
    def test_members_ascending(self):
        assert bitsets.to_list(0b10110) == [1, 2, 4]
        assert bitsets.to_list(0) == []

    def test_format_set(self):
        assert bitsets.format_set(0, ["a", "b", "c"]) == "∅"
        assert bitsets.format_set(0b101, ["a", "b", "c"]) == "{a,c}"

    def test_lowest(self):
        assert bitsets.lowest(0) == -1
        assert bitsets.lowest(0b1100) == 2

    def test_image_and_preimage(self):
        mapping = [1, 0, 1]
        assert bitsets.preimage(0b10, mapping) == 0b101
        assert bitsets.image(0b011, mapping) == 0b11

    def test_up_sets_of_a_chain(self):
        up = [0b111, 0b110, 0b100]
        assert sorted(bitsets.up_sets(up)) == [0, 0b100, 0b110, 0b111]

    def test_intersection_closure(self):
        closure = bitsets.intersection_closure([0b011, 0b110], 0b111)
        assert closure == [0b010, 0b011, 0b110, 0b111]

    @given(posets())
    def test_up_sets_match_sweep(self, up):
        m = len(up)
        swept = [u for u in range(1 << m) if all(bitsets.is_subset(up[x], u) for x in bitsets.members(u))]
        assert sorted(bitsets.up_sets(up)) == swept

    @given(st.integers(min_value=0, max_value=(1 << 12) - 1), st.integers(min_value=0, max_value=(1 << 12) - 1))
    def test_star_of_is_antitone(self, small, extra):
        rel = [bitsets.full(12) & ~(1 << i) for i in range(12)]
        larger = small | extra
        assert bitsets.is_subset(bitsets.star_of(larger, rel, bitsets.full(12)),
                                 bitsets.star_of(small, rel, bitsets.full(12)))
