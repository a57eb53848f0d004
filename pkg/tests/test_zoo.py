import numpy as np
import pytest

from quantized_nbhd.core import RingTooSmall, compose, invert, is_identity
from quantized_nbhd.zoo import ZOO, make, make_jk, make_toffoli


def test_toffoli_cell_rule():
    f = make_toffoli(6)
    letters = np.array([[0b01, 0b01, 0, 0, 0, 0], [0b11, 0b01, 0, 0, 0, 0], [0b01, 0b00, 0, 0, 0, 0]])
    out = f.rule.apply_letters(letters)
    # bit 0 becomes v_0^1 + v_0^0 v_1^0, bit 1 becomes v_1^0
    assert out[0][0] == 0b11
    assert out[1][0] == 0b10
    assert out[2][0] == 0b00


@pytest.mark.parametrize("name,params", [(n, p) for n, p in [
    ("jk", {"k": 2}), ("jk", {"k": 3}), ("toffoli", {}), ("tk", {"k": 2}),
    ("jt", {"k": 2, "l": 1}), ("jt", {"k": 3, "l": 1}), ("jt_iterated", {"k": 2, "l": 1, "n": 2}),
]])
def test_every_automaton_is_reversible(name, params):
    f = make(name, **params)
    assert f.ring == ZOO[name].default_ring(**params)
    assert is_identity(compose(invert(f), f), samples=500)
    assert is_identity(compose(f, invert(f)), samples=500)
    assert f.origin == {"zoo": name, "params": params}


def test_parameter_validation():
    with pytest.raises(RingTooSmall):
        make_jk(2, ring=4)
    with pytest.raises(ValueError):
        make("jk", k=0)
    with pytest.raises(TypeError):
        make("jk", k=2, l=1)
    with pytest.raises(ValueError):
        make("nonsense")


def test_jt_iterated_with_one_iterate_equals_jt():
    a, b = make("jt", 11, k=2, l=1), make("jt_iterated", 11, k=2, l=1, n=1)
    rng = np.random.default_rng(3)
    letters = rng.integers(0, 16, size=(200, 11))
    assert np.array_equal(a.rule.apply_letters(letters), b.rule.apply_letters(letters))
