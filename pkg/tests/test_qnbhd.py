import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from quantized_nbhd import qnbhd
from quantized_nbhd.core import compose, invert, power
from quantized_nbhd.nbhd import scheme_transpose
from quantized_nbhd.qnbhd import (
    composition_bound,
    duality_check,
    iterate_bound,
    offsets_of,
    q_localized,
    q_oracle,
    q_tensor,
    quantum_in_nbhd,
    quantum_localized,
    quantum_scheme,
    radii,
    simple_bound,
)
from quantized_nbhd.zoo import make

from conftest import random_map

seeds = st.integers(0, 100_000)


def subsets(sites):
    sites = list(sites)
    return [frozenset(c) for r in range(len(sites) + 1) for c in itertools.combinations(sites, r)]


@settings(max_examples=15, deadline=None)
@given(seeds, st.sampled_from([(2, 2), (2, 2, 2), (3, 2)]))
def test_localization_matches_dense_matrices(seed, sizes):
    f = random_map(seed, sizes)
    for B in subsets(f.codomain.sites)[1:]:
        for A in subsets(f.domain.sites):
            want = oracles.conjugated_is_local(f, B, A)
            got = quantum_localized(f, B, A, "enumerate")
            assert got.holds == want, (B, A)
            assert q_localized(f, B, A) == want
            if not want:
                assert got.replay()


@settings(max_examples=15, deadline=None)
@given(seeds, st.sampled_from([(2, 2), (2, 2, 2), (2, 3)]))
def test_quantum_in_nbhd_is_smallest_region(seed, sizes):
    f = random_map(seed, sizes)
    for y in f.codomain.sites:
        assert set(quantum_in_nbhd(f, y).members) == oracles.quantum_in_nbhd(f, y)


@settings(max_examples=10, deadline=None)
@given(seeds)
def test_q_oracle_matches_tensor(seed):
    f = random_map(seed)
    B = {"s0", "s2"}
    q = q_tensor(f, B)
    X = f.domain
    for v, vp in itertools.product(range(X.total_dim), repeat=2):
        for w, wp in itertools.product(range(4), repeat=2):
            bw, bwp = (w & 1, w >> 1), (wp & 1, wp >> 1)
            assert q[v, vp, w, wp] == q_oracle(f, v, vp, bw, bwp, B)


@settings(max_examples=20, deadline=None)
@given(seeds)
def test_sandwich_and_duality(seed):
    f = random_map(seed, (2, 2, 2, 2))
    rep = simple_bound(f)
    assert rep.ok, rep.violations()
    assert duality_check(f)
    assert scheme_transpose(quantum_scheme(f)) == quantum_scheme(invert(f))


@settings(max_examples=10, deadline=None)
@given(seeds, seeds, seeds)
def test_composition_bound_contains_composite(a, b, c):
    fs = [random_map(a), random_map(b), random_map(c)]
    total = compose(fs[2], compose(fs[1], fs[0]))
    assert quantum_scheme(total) <= composition_bound(fs)


def test_simple_bound_lower_on_j2():
    rep = simple_bound(make("jk", 6, k=2))
    assert rep.ok
    assert offsets_of(rep.computed(0)) == [0, 1, 2]


ZOO_SMALL = [("jk", 6, {"k": 2}), ("toffoli", 6, {}), ("tk", 6, {"k": 1})]


@pytest.mark.parametrize("name,ring,params", ZOO_SMALL)
def test_ring_methods_agree_with_enumeration(name, ring, params):
    f = make(name, ring, **params)
    cells = list(range(ring))
    rng = np.random.default_rng(ring)
    regions = [frozenset(c for c in cells if rng.random() < 0.6) for _ in range(12)]
    regions += [frozenset(cells) - {x} for x in cells]
    for A in regions:
        results = {m: quantum_localized(f, {0}, A, m) for m in ("enumerate", "symbolic", "sat")}
        # the ring paths test the displacement form of condition 3, which
        # matches the literal one only once conditions 1 and 2 hold
        verdicts = {m: (r.cond1, r.cond2, r.cond3 if r.cond1 and r.cond2 else None) for m, r in results.items()}
        assert len(set(verdicts.values())) == 1, (A, verdicts)
        for r in results.values():
            if not r.holds:
                assert r.replay()


@pytest.mark.parametrize("name,ring,params", ZOO_SMALL)
def test_sat_and_symbolic_neighbourhoods_agree(name, ring, params):
    f = make(name, ring, **params)
    assert quantum_in_nbhd(f, 0, "sat") == quantum_in_nbhd(f, 0, "symbolic") == quantum_in_nbhd(f, 0, "enumerate")


def test_symbolic_falls_back_to_sat_on_expression_swell(monkeypatch):
    monkeypatch.setattr(qnbhd, "ANF_PRODUCT_LIMIT", 1)
    f = make("jt", k=2, l=1)
    w = quantum_localized(f, {0}, {0, 1, 2})
    assert w.method == "sat"
    assert not w.holds and w.replay()
    assert quantum_in_nbhd(f, 0).interval() == (0, 3)


@pytest.mark.parametrize("k,n", [(2, 1), (2, 2), (3, 1)])
def test_jk_quantum_interval(k, n):
    f = power(make("jk", 2 * k * n + 4, k=k), n)
    assert quantum_in_nbhd(f, 0).interval() == (0, k * n)


def test_deep_composite_inside_iterate_bound():
    f = make("jt_iterated", k=2, l=1, n=2)
    bound = iterate_bound(*radii(f), 3)
    g = power(make("jt_iterated", 2 * (bound.interval[1] - bound.interval[0]) + 1, k=2, l=1, n=2), 3)
    assert bound.contains(offsets_of(quantum_in_nbhd(g, 0)))


def test_iterate_bound_formula():
    b = iterate_bound(0, 1, 2, 0, 2)
    assert b.interval == (-1, 6)
    with pytest.raises(ValueError):
        iterate_bound(-1, 0, 0, 0, 1)
    assert radii(make("jk", k=2)) == (0, 1, 2, 0)


def test_toffoli_quantum_neighbourhood_from_dense_matrices():
    # independent of every localization routine in the package
    from quantized_nbhd.core import RingMap
    from quantized_nbhd.zoo import toffoli_rule

    f = RingMap(4, toffoli_rule())
    assert oracles.quantum_in_nbhd(f, 0) == {0, 1, 2}
    assert quantum_in_nbhd(f, 0).sorted() == [0, 1, 2]
