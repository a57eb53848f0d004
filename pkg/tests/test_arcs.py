from hypothesis import given
from hypothesis import strategies as st

from quantized_nbhd.arcs import arc_members, arc_of, format_arc, ring_distance


@given(st.integers(3, 40), st.integers(-20, 20), st.integers(0, 39), st.integers(0, 39))
def test_arc_of_recovers_members(ring, lo, length, origin):
    length = min(length, ring - 1)
    members = arc_members(origin + lo, origin + lo + length, ring)
    arc = arc_of(members, ring, origin)
    assert arc is not None
    assert arc_members(origin + arc[0], origin + arc[1], ring) == members
    assert arc[1] - arc[0] == length


def test_arc_representative_prefers_small_offsets():
    assert arc_of({6, 7}, 8) == (-2, -1)
    assert arc_of({0, 1, 2}, 8) == (0, 2)
    assert arc_of({7, 0, 1}, 8) == (-1, 1)
    assert arc_of(range(8), 8) == (0, 7)
    assert arc_of(set(), 8) is None


def test_non_arcs():
    assert arc_of({0, 2}, 8) is None
    assert arc_of({0, 1, 2, 4}, 10) is None


def test_distance_and_format():
    assert ring_distance(1, 7, 8) == 2
    assert ring_distance(3, 3, 5) == 0
    assert format_arc((-1, 2)) == "[-1,2]"
    assert format_arc(None) == "-"
