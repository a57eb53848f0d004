import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quantized_nbhd.anf import ONE, ZERO, Anf, AnfTooLarge, bit_indices, from_truth_table, product_limit

NVARS = 4
tables = st.lists(st.integers(0, 1), min_size=1 << NVARS, max_size=1 << NVARS).map(np.array)


@given(tables)
def test_truth_table_round_trip(t):
    p = from_truth_table(t)
    assert [p.evaluate(a) for a in range(1 << NVARS)] == list(t)


@given(tables, tables, st.integers(0, (1 << NVARS) - 1))
def test_xor_and_and_evaluate_pointwise(s, t, a):
    p, q = from_truth_table(s), from_truth_table(t)
    assert (p ^ q).evaluate(a) == s[a] ^ t[a]
    assert (p & q).evaluate(a) == s[a] & t[a]


@given(tables, st.integers(0, NVARS - 1))
def test_derivative_detects_dependence(t, i):
    p = from_truth_table(t)
    flips = any(t[a] != t[a ^ (1 << i)] for a in range(1 << NVARS))
    assert bool(p.derivative(i)) == flips
    assert bool(p.support >> i & 1) == flips


@given(tables)
def test_witness_is_a_satisfying_assignment(t):
    p = from_truth_table(t)
    w = p.witness()
    if not t.any():
        assert w is None
    else:
        assert p.evaluate(w) == 1


@given(tables, tables)
def test_substitute_matches_composition(s, t):
    p = from_truth_table(s)
    q = from_truth_table(t)
    values = {i: (q if i == 0 else Anf.var(i)) for i in range(NVARS)}
    r = p.substitute(values)
    for a in range(1 << NVARS):
        b = (a & ~1) | q.evaluate(a)
        assert r.evaluate(a) == p.evaluate(b)


def test_constants_and_bits():
    x = Anf.var(3)
    assert (x ^ x) == ZERO
    assert (x & ONE) == x
    assert (x ^ 1) == (x ^ ONE)
    assert bit_indices(0b10110) == [1, 2, 4]
    assert x.degree == 1 and (x & Anf.var(1)).degree == 2


def test_product_limit_raises_on_large_products():
    p = ZERO
    for i in range(8):
        p = p ^ Anf.var(i)
    with product_limit(10):
        with pytest.raises(AnfTooLarge):
            p & p
    assert (p & p) == p


@settings(max_examples=50)
@given(tables, st.integers(0, (1 << NVARS) - 1))
def test_apply_on_ints_matches_evaluate(t, a):
    p = from_truth_table(t)
    assert p.apply([(a >> i) & 1 for i in range(NVARS)]) == p.evaluate(a)
