"""Brute-force reference implementations, written straight from the definitions.

Nothing here shares code with the package beyond the map and space types:
dependencies are found by flipping letters one word at a time, and
localization by forming the conjugated operators as dense matrices.
"""

import itertools

import numpy as np


def all_words(space):
    return list(itertools.product(*[range(a) for a in space.sizes]))


def image(f, letters):
    return f.codomain.decode(f.apply_index(f.domain.encode(letters)))


def in_nbhd(f, y):
    """Input sites whose letter can change output ``y``."""
    X, Y = f.domain, f.codomain
    j = Y.position(y)
    out = set()
    for letters in all_words(X):
        here = image(f, letters)[j]
        for i, x in enumerate(X.sites):
            for a in range(X.sizes[i]):
                other = list(letters)
                other[i] = a
                if image(f, other)[j] != here:
                    out.add(x)
    return out


def out_nbhd(f, x):
    return {y for y in f.codomain.sites if x in in_nbhd(f, y)}


def permutation_matrix(f):
    n = f.domain.total_dim
    P = np.zeros((n, n))
    for v in range(n):
        P[f.apply_index(v), v] = 1.0
    return P


def conjugated_is_local(f, B, A):
    """Is ``P^T (E (x) 1) P`` of the form ``M_A (x) 1`` for every elementary ``E`` on ``B``?"""
    X, Y = f.domain, f.codomain
    P = permutation_matrix(f)
    ydig = np.array([Y.decode(i) for i in range(Y.total_dim)])
    xdig = np.array([X.decode(i) for i in range(X.total_dim)])
    bpos = [Y.position(b) for b in sorted(B, key=Y.position)]
    apos = [X.position(a) for a in sorted(A, key=X.position)]
    rest = [i for i in range(len(X.sites)) if i not in apos]
    ypos_rest = [i for i in range(len(Y.sites)) if i not in bpos]
    same_rest_y = (ydig[:, None, ypos_rest] == ydig[None, :, ypos_rest]).all(axis=-1)
    differ_off_a = ~(xdig[:, None, rest] == xdig[None, :, rest]).all(axis=-1)
    akey = np.zeros(X.total_dim, dtype=np.int64)
    for i in apos:
        akey = akey * X.sizes[i] + xdig[:, i]
    bwords = list(itertools.product(*[range(Y.sizes[i]) for i in bpos]))
    for w, wp in itertools.product(bwords, repeat=2):
        rows = (ydig[:, bpos] == np.array(w, dtype=np.int64)).all(axis=-1)
        cols = (ydig[:, bpos] == np.array(wp, dtype=np.int64)).all(axis=-1)
        E = (rows[:, None] & cols[None, :] & same_rest_y).astype(float)
        M = P.T @ E @ P
        if np.any(M[differ_off_a] != 0):
            return False
        seen = {}
        for v, vp in zip(*np.nonzero(~differ_off_a)):
            key = (akey[v], akey[vp])
            if seen.setdefault(key, M[v, vp]) != M[v, vp]:
                return False
    return True


def quantum_in_nbhd(f, y):
    """Smallest region localizing output ``y``, found by trying every subset."""
    sites = list(f.domain.sites)
    for r in range(len(sites) + 1):
        good = [set(c) for c in itertools.combinations(sites, r) if conjugated_is_local(f, {y}, set(c))]
        if good:
            assert len(good) == 1, f"several minimal regions {good}"
            return good[0]
    raise AssertionError("the full space must localize")
