import numpy as np
import pytest

from quantized_nbhd.core import make_cellspace, make_explicit_map
from quantized_nbhd.qsim import (
    ProtocolPreconditionFailed,
    StateVector,
    apply_perm_unitary,
    factor_check,
    find_signal_pair,
    local_phase,
    overlap,
    signaling_demo,
)
from quantized_nbhd.zoo import make

from conftest import random_map


def test_state_vector_validation():
    space = make_cellspace([("a", 2), ("b", 2)])
    with pytest.raises(ValueError):
        StateVector(space, np.ones(4))
    s = StateVector.superposition(space, {0: 1, 3: 1})
    assert abs(s.norm - 1) < 1e-12
    assert list(s.support()) == [0, 3]


def test_permutation_unitary_preserves_inner_products():
    f = random_map(5)
    rng = np.random.default_rng(0)
    a = rng.normal(size=8) + 1j * rng.normal(size=8)
    b = rng.normal(size=8) + 1j * rng.normal(size=8)
    s = StateVector(f.domain, a / np.linalg.norm(a))
    t = StateVector(f.domain, b / np.linalg.norm(b))
    assert abs(s.inner(t) - apply_perm_unitary(f, s).inner(apply_perm_unitary(f, t))) < 1e-12


def test_local_phase_and_factor_check():
    space = make_cellspace([("a", 2), ("b", 2)])
    s = StateVector.superposition(space, {(0, 1): 1, (1, 1): 1})
    t = local_phase(s, "a", 1)
    assert overlap(s, t) < 1e-12
    u, local = factor_check(t, {"a"})
    assert u.letters == (1,)
    assert np.allclose(local.amplitudes, np.array([1, -1]) / np.sqrt(2))
    entangled = StateVector.superposition(space, {(0, 0): 1, (1, 1): 1})
    assert factor_check(entangled, {"a"}) is None


def test_j2_signals_past_the_classical_cone():
    f = make("jk", 6, k=2)
    v, w = find_signal_pair(f, 2, 0)
    rep = signaling_demo(f, v, w, 2, 0, name="jk", params={"k": 2})
    assert rep.distinguishable and rep.beats_classical
    assert rep.distance == 2 and rep.classical_nbhd == [0, 1]
    assert rep.to_json()["factorizes_at_bob"]


def test_toffoli_cannot_signal_two_cells():
    # images agreeing off cell 0 have preimages differing only inside the
    # out-neighbourhood of the inverse at 0, which is {0, 1}
    f = make("toffoli", 6)
    assert find_signal_pair(f, 2, 0) is None
    v, w = find_signal_pair(f, 1, 0)
    assert signaling_demo(f, v, w, 1, 0).distinguishable


def test_protocol_preconditions():
    f = make("jk", 6, k=2)
    with pytest.raises(ProtocolPreconditionFailed):
        signaling_demo(f, 0, 0, 2, 0)
    with pytest.raises(ProtocolPreconditionFailed):
        # differ at Alice's cell 2, but the images differ at cells 1 and 2 too
        signaling_demo(f, 0, 1 << 4, 2, 0)


def test_two_steps_through_the_square():
    f = make("jk", 8, k=2)
    pair = find_signal_pair(f, 4, 0, steps=2)
    assert pair is not None
    rep = signaling_demo(f, *pair, 4, 0, steps=2)
    assert rep.distinguishable and not rep.classical_possible


def test_swap_gives_classical_signal():
    space = make_cellspace([("a", 2), ("b", 2)])
    swap = make_explicit_map(space, space, [0, 2, 1, 3])
    v, w = find_signal_pair(swap, "a", "b")
    rep = signaling_demo(swap, v, w, "a", "b")
    assert rep.distinguishable and rep.classical_possible and not rep.beats_classical
