import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quantized_nbhd.core import (
    ArityMismatch,
    DimensionCapExceeded,
    DuplicateSite,
    NotInjective,
    RingMap,
    SpaceMismatch,
    Word,
    cap_override,
    compose,
    compose_rules,
    explicit,
    identity_map,
    invert,
    is_identity,
    make_cellspace,
    make_explicit_map,
    power,
    ring_space,
    table_rule,
)
from quantized_nbhd.zoo import j_rule, jt_iterated_rule, jt_rule, tk_rule, toffoli_rule

from conftest import random_map


@given(st.lists(st.integers(1, 4), min_size=1, max_size=4), st.data())
def test_encode_decode_round_trip(sizes, data):
    space = make_cellspace([(i, a) for i, a in enumerate(sizes)])
    idx = data.draw(st.integers(0, space.total_dim - 1))
    letters = space.decode(idx)
    assert space.encode(letters) == idx
    for i, s in enumerate(space.sites):
        assert space.letter(idx, s) == letters[i]


def test_space_validation():
    with pytest.raises(DuplicateSite):
        make_cellspace([("a", 2), ("a", 3)])
    space = make_cellspace([("a", 2), ("b", 3)])
    with pytest.raises(ArityMismatch):
        space.encode((0, 3))
    with pytest.raises(ArityMismatch):
        space.encode((0,))


def test_words_and_key():
    space = make_cellspace([("a", 2), ("b", 3), ("c", 2)])
    w = Word(space, (1, 2, 0))
    assert w["b"] == 2
    assert w.restrict({"a", "c"}).letters == (1, 0)
    assert space.key(w.index, {"b", "c"}) == 2


def test_explicit_map_rejects_non_bijections():
    space = make_cellspace([("a", 2), ("b", 2)])
    with pytest.raises(NotInjective):
        make_explicit_map(space, space, [0, 0, 1, 2])
    with pytest.raises(ArityMismatch):
        make_explicit_map(space, space, [0, 1, 2])
    other = make_cellspace([("c", 2), ("d", 2)])
    f = make_explicit_map(space, other, [3, 2, 1, 0])
    with pytest.raises(SpaceMismatch):
        compose(f, f)


def test_explicit_map_from_dict():
    space = make_cellspace([("a", 2)])
    f = make_explicit_map(space, space, {(0,): (1,), (1,): (0,)})
    assert list(f.table()) == [1, 0]


@settings(max_examples=25)
@given(st.integers(0, 10_000))
def test_inverse_and_power(seed):
    f = random_map(seed)
    g = invert(f)
    assert is_identity(compose(g, f)) and is_identity(compose(f, g))
    f3 = power(f, 3)
    t = f.table()
    assert np.array_equal(f3.table(), t[t[t]])


def test_enumeration_cap():
    with cap_override(8):
        space = ring_space(4, 1)
        with pytest.raises(DimensionCapExceeded):
            space.words()
    assert ring_space(4, 1).words().size == 16


def test_ring_map_matches_cell_formula():
    f = RingMap(6, j_rule(2))
    rng = np.random.default_rng(0)
    letters = rng.integers(0, 4, size=(20, 6))
    out = f.rule.apply_letters(letters)
    for row, img in zip(letters, out):
        for c in range(6):
            here, right = row[c], row[(c + 1) % 6]
            want = ((here & 1) ^ ((right >> 1) & 1)) | ((right & 1) << 1)
            assert img[c] == want


@pytest.mark.parametrize("rule", [j_rule(2), j_rule(3), toffoli_rule(), jt_rule(2, 1)], ids=lambda r: r.name)
def test_inverse_rules_invert(rule):
    f = RingMap(8, rule)
    assert is_identity(RingMap(8, compose_rules(rule.inverse_rule, rule)), samples=2000)
    assert is_identity(RingMap(8, compose_rules(rule, rule.inverse_rule)), samples=2000)
    if f.domain.enumerable:
        assert np.array_equal(invert(explicit(f)).table(), RingMap(8, rule.inverse_rule).table())


def test_t2_inverse_rule_matches_inverted_permutation():
    # T_2 pairs cell 0 with cells 1 and 2; ring 5 keeps the table at 16**5 words
    f = RingMap(5, tk_rule(2))
    g = RingMap(5, tk_rule(2).inverse_rule)
    assert np.array_equal(invert(explicit(f)).table(), g.table())


def test_jt_closed_form_inverse_matches_composite_inverse():
    closed = RingMap(11, jt_rule(2, 1))
    via = RingMap(11, jt_iterated_rule(2, 1, 1))
    assert is_identity(compose(RingMap(11, jt_rule(2, 1).inverse_rule), via), samples=3000)
    assert is_identity(compose(invert(via), closed), samples=3000)


def test_table_rule_round_trip():
    rule = table_rule(1, (0, 1), [0, 1, 1, 0])
    f = RingMap(3, rule)
    # xor of a cell and its right neighbour is not injective on a ring of 3
    with pytest.raises(NotInjective):
        make_explicit_map(f.domain, f.codomain, f.table())


def test_identity_map():
    space = make_cellspace([("a", 3)])
    assert is_identity(identity_map(space))
