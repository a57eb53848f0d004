"""Quantum dependency neighbourhoods of permutation unitaries.

For a bijection ``f`` with quantization ``Q(f)|v> = |f(v)>``, an observable
at output region ``B`` is pulled back into input region ``A`` exactly when

1. ``N<-_f(B)`` is inside ``A``;
2. ``N->_{f^-1}(B)`` is inside ``A``;
3. for words ``v, w`` agreeing off ``A``, whether ``f(v)`` and ``f(w)`` agree
   off ``B`` is decided by ``(v_A, w_A)`` alone.

Explicit maps are checked against these conditions literally, by
enumeration. Ring maps use the pulled-back operator directly: writing
``g = f^-1`` and ``h(v, w) = g(f(v) with B replaced by w) xor v``, the
localization holds iff conditions 1 and 2 hold and every cell whose bits
appear in the polynomial ``h`` lies in ``A``. Given 1 and 2 this third test
is equivalent to condition 3, and it is exact for any ring size.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .anf import Anf, bit_indices
from .arcs import arc_of
from .core import (
    BlockMap,
    CellSpace,
    DimensionCapExceeded,
    NbhdError,
    RingMap,
    SiteSet,
    SpaceMismatch,
    Word,
    compose,
    invert,
)
from .nbhd import (
    NbhdScheme,
    _as_members,
    _ring_locality_counterexample,
    identity_scheme,
    in_nbhd,
    in_scheme,
    locality_counterexample,
    out_nbhd,
    out_scheme,
    scheme_compose,
    scheme_intersection,
    scheme_transpose,
    scheme_union,
)
from .anf import AnfTooLarge, product_limit
from .circuit import Circuit, value_of
from .symbolic import ChainEvaluator, flatten, forward_chain, output_polys, pull_back

# Largest q-tensor (pairs of words times pairs of B-words) built densely.
_Q_TENSOR_CAP = 2**24


class MinimalityViolation(NbhdError):
    """The union of single-site failures is not itself a valid region."""


# ---------------------------------------------------------------------------
# Matrix-element oracle
# ---------------------------------------------------------------------------


def _index(space: CellSpace, w) -> int:
    if isinstance(w, Word):
        if w.space != space:
            raise SpaceMismatch("word belongs to another space")
        return w.index
    if isinstance(w, (tuple, list)):
        return space.encode(w)
    return int(w)


def _partial(space: CellSpace, B: frozenset, w) -> tuple:
    """Letters of a partial word on ``B`` in site order."""
    order = sorted(B, key=space.position)
    if isinstance(w, Word):
        return tuple(w[s] for s in order)
    if isinstance(w, dict):
        return tuple(int(w[s]) for s in order)
    return tuple(int(x) for x in w)


def _restrict(space: CellSpace, word: int, sites) -> tuple:
    return tuple(int(space.letter(word, s)) for s in sorted(sites, key=space.position))


def q_oracle(f: BlockMap, v, vp, w, wp, B) -> int:
    """``<v| Q(f)* (|w><w'| on B) Q(f) |v'>``, which is 0 or 1."""
    X, Y = f.domain, f.codomain
    B = _as_members(Y, B)
    rest = frozenset(Y.sites) - B
    fv, fvp = f.apply_index(_index(X, v)), f.apply_index(_index(X, vp))
    return int(
        _restrict(Y, fv, B) == _partial(Y, B, w)
        and _restrict(Y, fvp, B) == _partial(Y, B, wp)
        and _restrict(Y, fv, rest) == _restrict(Y, fvp, rest)
    )


def q_tensor(f: BlockMap, B) -> np.ndarray:
    """Dense ``q[v, v', w, w']`` over all domain words and all B-words."""
    X, Y = f.domain, f.codomain
    B = _as_members(Y, B)
    X.require_enumerable("building the q tensor")
    n = X.total_dim
    nb = 1
    for s in B:
        nb *= Y.size(s)
    if n * n * nb * nb > _Q_TENSOR_CAP:
        raise DimensionCapExceeded(f"q tensor would have {n * n * nb * nb} entries")
    t = f.table()
    fb = Y.key(t, B)
    rest = Y.key(t, frozenset(Y.sites) - B)
    q = np.zeros((n, n, nb, nb), dtype=np.uint8)
    vv, vp = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    q[vv, vp, fb[vv], fb[vp]] = rest[vv] == rest[vp]
    return q


def q_localized(f: BlockMap, B, A) -> bool:
    """Localization read off the q tensor.

    Holds iff ``q`` vanishes whenever ``v`` and ``v'`` differ off ``A`` and,
    for pairs agreeing off ``A``, depends only on ``(v_A, v'_A)``.
    """
    X = f.domain
    A = _as_members(X, A)
    q = q_tensor(f, B)
    n = X.total_dim
    words = np.arange(n, dtype=np.int64)
    ka = X.key(words, A)
    ku = X.key(words, frozenset(X.sites) - A)
    off = ku[:, None] != ku[None, :]
    if np.any(q[off]):
        return False
    seen: dict = {}
    vi, vpi = np.nonzero(~off)
    for v, vp in zip(vi.tolist(), vpi.tolist()):
        k = (int(ka[v]), int(ka[vp]))
        if k in seen:
            if not np.array_equal(seen[k], q[v, vp]):
                return False
        else:
            seen[k] = q[v, vp]
    return True


# ---------------------------------------------------------------------------
# Three-condition test
# ---------------------------------------------------------------------------


@dataclass
class QuantumLocalityWitness:
    """Verdicts of the three conditions, with a replayable counterexample.

    ``counterexample`` is ``(condition, *words)``:

    * ``("cond1", v, w)``: ``v_A = w_A`` but ``f(v)_B != f(w)_B``;
    * ``("cond2", z, z2)``: codomain words agreeing off ``B`` with
      ``f^-1(z)`` and ``f^-1(z2)`` differing off ``A``;
    * ``("cond3", v, w, v2, w2)``: both pairs agree off ``A``, share their
      ``A`` letters, yet only one pair has images agreeing off ``B``;
    * ``("cond3_ring", v1, v2, wb)``: ``v1, v2`` differ off ``A`` only and
      the pulled-back operator moves them differently, ``wb`` being the
      replaced B letters as ``{cell: letter}``.
    """

    f: BlockMap
    B: SiteSet
    A: SiteSet
    cond1: bool
    cond2: bool
    cond3: bool
    counterexample: tuple | None = None
    method: str = "enumerate"

    @property
    def holds(self) -> bool:
        return self.cond1 and self.cond2 and self.cond3

    def __bool__(self) -> bool:
        return self.holds

    def replay(self) -> bool:
        """True when the stored counterexample really violates its condition."""
        if self.counterexample is None:
            return False
        kind, *words = self.counterexample
        f, X, Y = self.f, self.f.domain, self.f.codomain
        A, B = self.A.members, self.B.members
        notA = frozenset(X.sites) - A
        notB = frozenset(Y.sites) - B
        if kind == "cond1":
            v, w = words
            return _restrict(X, v, A) == _restrict(X, w, A) and _restrict(Y, f.apply_index(v), B) != _restrict(
                Y, f.apply_index(w), B
            )
        if kind == "cond2":
            z, z2 = words
            g = invert(f)
            return _restrict(Y, z, notB) == _restrict(Y, z2, notB) and _restrict(
                X, g.apply_index(z), notA
            ) != _restrict(X, g.apply_index(z2), notA)
        if kind == "cond3":
            v, w, v2, w2 = words

            def agree_off_b(a, b):
                return _restrict(Y, f.apply_index(a), notB) == _restrict(Y, f.apply_index(b), notB)

            same_shape = (
                _restrict(X, v, notA) == _restrict(X, w, notA)
                and _restrict(X, v2, notA) == _restrict(X, w2, notA)
                and _restrict(X, v, A) == _restrict(X, v2, A)
                and _restrict(X, w, A) == _restrict(X, w2, A)
            )
            return same_shape and agree_off_b(v, w) != agree_off_b(v2, w2)
        if kind == "cond3_ring":
            v1, v2, wb = words
            differ = {s for s in X.sites if X.letter(v1, s) != X.letter(v2, s)}
            return bool(differ) and differ <= notA and _moved(f, v1, wb) != _moved(f, v2, wb)
        raise ValueError(f"unknown counterexample kind {kind!r}")


def _moved(f: RingMap, v: int, wb: dict) -> int:
    """``f^-1(f(v) with B letters replaced) xor v`` on a ring."""
    g = _ring_inverse(f)
    L = f.layers
    z = f.apply_index(v)
    for c, letter in wb.items():
        z &= ~(((1 << L) - 1) << (L * c))
        z |= int(letter) << (L * c)
    return g.apply_index(z) ^ v


def _explicit_cond3(f: BlockMap, B: frozenset, A: frozenset):
    """Literal condition 3 by enumeration; returns None or a counterexample."""
    X, Y = f.domain, f.codomain
    X.require_enumerable("checking condition 3")
    words = X.words()
    notA = frozenset(X.sites) - A
    ka, ku = X.key(words, A), X.key(words, notA)
    na = int(np.prod([X.size(s) for s in A], dtype=np.int64)) if A else 1
    nu = int(np.prod([X.size(s) for s in notA], dtype=np.int64)) if notA else 1
    rest = Y.key(f.table(), frozenset(Y.sites) - B)
    K = np.empty((na, nu), dtype=np.int64)
    K[ka, ku] = rest
    W = np.empty((na, nu), dtype=np.int64)
    W[ka, ku] = words
    # canon[a, u] = smallest a' with K[a', u] == K[a, u]
    order = np.argsort(K, axis=0, kind="stable")
    sk = np.take_along_axis(K, order, axis=0)
    start = np.ones_like(sk, dtype=bool)
    start[1:] = sk[1:] != sk[:-1]
    rows = np.where(start, np.arange(na)[:, None], 0)
    rows = np.maximum.accumulate(rows, axis=0)
    first = np.take_along_axis(order, rows, axis=0)
    canon = np.empty_like(first)
    np.put_along_axis(canon, order, first, axis=0)
    diff = canon != canon[:, :1]
    if not diff.any():
        return None
    cols = np.flatnonzero(diff.any(axis=0))
    u1 = int(cols[0])
    a = int(np.flatnonzero(diff[:, u1])[0])
    b = int(min(canon[a, 0], canon[a, u1]))
    return ("cond3", int(W[a, 0]), int(W[b, 0]), int(W[a, u1]), int(W[b, u1]))


def _explicit_localized(f: BlockMap, B: frozenset, A: frozenset) -> QuantumLocalityWitness:
    X, Y = f.domain, f.codomain
    ce1 = locality_counterexample(f, B, A)
    ce2 = locality_counterexample(invert(f), frozenset(X.sites) - A, frozenset(Y.sites) - B)
    ce3 = _explicit_cond3(f, B, A)
    ce = None
    if ce1 is not None:
        ce = ("cond1", *ce1)
    elif ce2 is not None:
        ce = ("cond2", *ce2)
    elif ce3 is not None:
        ce = ce3
    return QuantumLocalityWitness(
        f, SiteSet(Y, B), SiteSet(X, A), ce1 is None, ce2 is None, ce3 is None, ce, "enumerate"
    )


# ---------------------------------------------------------------------------
# Ring maps
# ---------------------------------------------------------------------------


def _ring_inverse(f: RingMap) -> BlockMap:
    if "inverse" not in f._cache:
        f._cache["inverse"] = invert(f)
    return f._cache["inverse"]


def _reach_of_inverse(f: RingMap, B: frozenset) -> frozenset:
    """``N->_{f^-1}(B)``: cells whose inverse output reads a cell of ``B``."""
    key = ("inv_out", B)
    if key not in f._cache:
        g = _ring_inverse(f)
        out = set()
        for b in B:
            out |= out_nbhd(g, b).members
        f._cache[key] = frozenset(out)
    return f._cache[key]


# Monomial pairs allowed per product before the polynomial pull-back gives
# way to the SAT query.
ANF_PRODUCT_LIMIT = 200_000


def _moved_polys(f: RingMap, B: frozenset):
    """``{c: polys}`` of the pulled-back displacement ``h`` on each cell it moves.

    Returns None when the polynomials grow past ``ANF_PRODUCT_LIMIT``.
    """
    key = ("moved", B)
    if key in f._cache:
        return f._cache[key]
    N, L = f.ring, f.layers
    extra = {b: [Anf.var(N * L + j * L + i) for i in range(L)] for j, b in enumerate(sorted(B))}
    try:
        with product_limit(ANF_PRODUCT_LIMIT):
            level0 = pull_back(forward_chain(f), extra)
    except AnfTooLarge:
        f._cache[key] = None
        return None
    except ValueError as e:
        raise NbhdError(str(e)) from e
    out = {}
    for c, polys in level0.items():
        moved = [p ^ Anf.var(c * L + i) for i, p in enumerate(polys)]
        if any(moved):
            out[c] = moved
    f._cache[key] = out
    return out


def _anf_cond3(f: RingMap, B: frozenset, A: frozenset, moved: dict):
    N, L = f.ring, f.layers
    own = (1 << (N * L)) - 1
    for c, polys in moved.items():
        for p in polys:
            for i in sorted(bit_indices(p.support & own)):
                if i // L in A:
                    continue
                wit = p.derivative(i).witness()
                if wit is None:
                    continue
                v1 = wit & own
                wb = {b: (wit >> (N * L + j * L)) & ((1 << L) - 1) for j, b in enumerate(sorted(B))}
                return ("cond3_ring", v1, v1 ^ (1 << i), wb)
    return None


def _sat_cond3(f: RingMap, B: frozenset, A: frozenset):
    """Search for two inputs agreeing on ``A`` that the pulled-back operator moves differently."""
    N, L = f.ring, f.layers
    circ = Circuit()
    first = {c: circ.inputs(L) for c in range(N)}
    second = {c: (first[c] if c in A else circ.inputs(L)) for c in range(N)}
    letters = {b: circ.inputs(L) for b in sorted(B)}
    rules = flatten(f.rule)
    moved = []
    for copy in (first, second):
        chain = ChainEvaluator(N, rules, lambda c, copy=copy: copy[c % N], symbolic=False)
        level0 = pull_back(chain, letters)
        moved.append({c: [x ^ y for x, y in zip(bits, copy[c])] for c, bits in level0.items()})
    diffs = []
    for c in moved[0]:
        for x, y in zip(moved[0][c], moved[1][c]):
            diffs.append(x ^ y)
    if any(isinstance(d, int) and d & 1 for d in diffs):
        clause = []
    else:
        clause = [d.lit for d in diffs if not isinstance(d, int)]
        if not clause:
            return None
    model = circ.solve(clause) if clause else circ.solve([])
    if model is None:
        return None
    truth = set(model)

    def word(copy):
        return sum(value_of(x, truth) << (L * c + i) for c in range(N) for i, x in enumerate(copy[c]))

    wb = {b: sum(value_of(x, truth) << i for i, x in enumerate(bits)) for b, bits in letters.items()}
    return ("cond3_ring", word(first), word(second), wb)


def _ring_localized(f: RingMap, B: frozenset, A: frozenset, use_sat: bool = False) -> QuantumLocalityWitness:
    N, L = f.ring, f.layers
    X = f.domain
    ce1 = _ring_locality_counterexample(f, B, A)
    outside = _reach_of_inverse(f, B) - A
    ce2 = None
    if outside:
        ce2 = _ring_locality_counterexample(_ring_inverse(f), outside, frozenset(X.sites) - B)
    moved = None if use_sat else _moved_polys(f, B)
    if moved is None:
        ce3 = _sat_cond3(f, B, A)
        method = "sat"
    else:
        ce3 = _anf_cond3(f, B, A, moved)
        method = "symbolic"
    ce = None
    if ce1 is not None:
        ce = ("cond1", *ce1)
    elif ce2 is not None:
        ce = ("cond2", *ce2)
    elif ce3 is not None:
        ce = ce3
    return QuantumLocalityWitness(
        f, SiteSet(X, B), SiteSet(X, A), ce1 is None, ce2 is None, ce3 is None, ce, method
    )


def quantum_localized(f: BlockMap, B, A, method: str = "auto") -> QuantumLocalityWitness:
    """Does ``Q(f)* (observables on B) Q(f)`` land in observables on ``A``?

    ``method`` is ``"enumerate"`` (literal conditions, any enumerable map) or
    ``"symbolic"`` (ring maps, any size; falls back to a SAT query when the
    polynomials get too large) or ``"sat"`` (ring maps, SAT query only).
    ``"auto"`` prefers symbolic for ring maps.
    """
    X, Y = f.domain, f.codomain
    B, A = _as_members(Y, B), _as_members(X, A)
    if method == "auto":
        method = "symbolic" if isinstance(f, RingMap) and isinstance(_ring_inverse(f), RingMap) else "enumerate"
    if method in ("symbolic", "sat"):
        if not isinstance(f, RingMap):
            raise ValueError(f"{method} analysis needs a ring map")
        return _ring_localized(f, B, A, use_sat=method == "sat")
    if method == "enumerate":
        return _explicit_localized(f, B, A)
    raise ValueError(f"unknown method {method!r}")


def quantum_in_nbhd(f: BlockMap, y, method: str = "auto") -> SiteSet:
    """Smallest input region ``A`` with ``{y}`` pulled back into ``A``.

    Each site ``x`` is tested by trying to localize on everything but ``x``;
    the union of failures is then checked to be a valid region itself.
    """
    X = f.domain
    f.codomain.position(y)
    everything = frozenset(X.sites)
    members = frozenset(
        x for x in X.sites if not quantum_localized(f, {y}, everything - {x}, method).holds
    )
    check = quantum_localized(f, {y}, members, method)
    if not check.holds:
        raise MinimalityViolation(
            f"sites {sorted(members, key=X.position)} fail to localize output {y!r}: {check.counterexample}"
        )
    return SiteSet(X, members)


def quantum_scheme(f: BlockMap, method: str = "auto") -> NbhdScheme:
    """``N<-_{Q(f)}`` on every output site."""
    key = ("qscheme", method)
    cache = getattr(f, "_cache", None)
    if cache is not None and key in cache:
        return cache[key]
    out = NbhdScheme(
        f.codomain, f.domain, {y: quantum_in_nbhd(f, y, method).members for y in f.codomain.sites}
    )
    if cache is not None:
        cache[key] = out
    return out


# ---------------------------------------------------------------------------
# Bounds
# ---------------------------------------------------------------------------


@dataclass
class BoundReport:
    """Lower bound, exact quantum scheme and upper bound, site by site."""

    lower: NbhdScheme
    computed: NbhdScheme
    upper: NbhdScheme
    upper_forward: NbhdScheme
    upper_backward: NbhdScheme
    verdicts: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(lo and up for lo, up in self.verdicts.values())

    def violations(self) -> list:
        return [s for s, (lo, up) in self.verdicts.items() if not (lo and up)]

    def to_json(self) -> dict:
        space = self.computed.source
        target = self.computed.target
        sites = {}
        for s in space.sites:
            entry = {}
            for name, scheme in (("lower", self.lower), ("computed", self.computed), ("upper", self.upper)):
                members = sorted(scheme.mapping[s], key=target.position)
                entry[name] = members
                if target.ring is not None:
                    arc = arc_of(members, target.ring, s)
                    entry[name + "_offsets"] = list(arc) if arc is not None else None
            lo, up = self.verdicts[s]
            entry["lower_in_computed"] = lo
            entry["computed_in_upper"] = up
            sites[str(s)] = entry
        return {"ok": self.ok, "sites": sites}


def simple_bound(f: BlockMap, method: str = "auto") -> BoundReport:
    """Sandwich ``N<-_f u N->_{f^-1}  <=  N<-_{Q(f)}  <=  upper`` per site.

    ``upper`` is the intersection of ``N<-_f o N->_f o N->_{f^-1}`` and
    ``N->_{f^-1} o N<-_{f^-1} o N<-_f``.
    """
    g = _ring_inverse(f) if isinstance(f, RingMap) else invert(f)
    in_f, out_f = in_scheme(f), out_scheme(f)
    in_g, out_g = in_scheme(g), out_scheme(g)
    lower = scheme_union(in_f, out_g)
    forward = scheme_compose(in_f, scheme_compose(out_f, out_g))
    backward = scheme_compose(out_g, scheme_compose(in_g, in_f))
    upper = scheme_intersection(forward, backward)
    computed = quantum_scheme(f, method)
    verdicts = {
        s: (lower.mapping[s] <= computed.mapping[s], computed.mapping[s] <= upper.mapping[s])
        for s in f.codomain.sites
    }
    return BoundReport(lower, computed, upper, forward, backward, verdicts)


def _chain(fs, i, j) -> BlockMap | None:
    """``fs[j-1] o ... o fs[i]``, or None when the range is empty."""
    out = None
    for f in fs[i:j]:
        out = f if out is None else compose(f, out)
    return out


def composition_bound(fs, method: str = "auto") -> NbhdScheme:
    """Bound on ``N<-_{Q(f_n o ... o f_1)}`` from the factors.

    Union over ``k`` of ``N<-_{f_{k-1}..f_1} o N<-_{Q(f_k)} o N->_{(f_n..f_{k+1})^-1}``,
    empty compositions being identity schemes.
    """
    fs = list(fs)
    if not fs:
        raise ValueError("composition_bound needs at least one map")
    for a, b in zip(fs, fs[1:]):
        if a.codomain != b.domain:
            raise SpaceMismatch("chain is not composable")
    n = len(fs)
    total = None
    for k in range(n):
        before = _chain(fs, 0, k)
        after = _chain(fs, k + 1, n)
        left = in_scheme(before) if before is not None else identity_scheme(fs[0].domain)
        mid = quantum_scheme(fs[k], method)
        right = out_scheme(invert(after)) if after is not None else identity_scheme(fs[-1].codomain)
        term = scheme_compose(left, scheme_compose(mid, right))
        total = term if total is None else scheme_union(total, term)
    return total


def duality_check(f: BlockMap, method: str = "auto") -> bool:
    """Is the transpose of ``N<-_{Q(f)}`` equal to ``N<-_{Q(f^-1)}``?"""
    g = _ring_inverse(f) if isinstance(f, RingMap) else invert(f)
    return scheme_transpose(quantum_scheme(f, method)) == quantum_scheme(g, method)


@dataclass(frozen=True)
class IterationBound:
    alpha: int
    beta: int
    gamma: int
    delta: int
    k: int
    interval: tuple

    def contains(self, offsets) -> bool:
        lo, hi = self.interval
        return all(lo <= d <= hi for d in offsets)


def iterate_bound(alpha: int, beta: int, gamma: int, delta: int, k: int) -> IterationBound:
    """Interval containing ``N<-_{Q(f^k)}(0)`` when ``N<-_f(n)`` is inside
    ``[n-alpha, n+beta]`` and ``N<-_{f^-1}(n)`` inside ``[n-gamma, n+delta]``."""
    if min(alpha, beta, gamma, delta) < 0:
        raise ValueError("radii must be nonnegative")
    if k < 1:
        raise ValueError("k must be positive")
    lo = -(k + 1) * max(alpha, delta) - min(beta, gamma)
    hi = (k + 1) * max(beta, gamma) + min(alpha, delta)
    return IterationBound(alpha, beta, gamma, delta, k, (lo, hi))


def radii(f: RingMap) -> tuple:
    """``(alpha, beta, gamma, delta)`` read off the arcs at cell 0, clipped at 0.

    Clipping only widens the intervals, so the containment hypotheses still hold.
    """
    g = _ring_inverse(f)
    a = in_nbhd(f, 0).interval()
    b = in_nbhd(g, 0).interval()
    if a is None or b is None:
        raise NbhdError("neighbourhood at 0 is not an arc")
    return max(0, -a[0]), max(0, a[1]), max(0, -b[0]), max(0, b[1])


def offsets_of(sites: SiteSet, origin: int = 0) -> list:
    """Members of a ring site set as signed offsets around ``origin``."""
    ring = sites.space.ring
    return sorted(((s - origin + ring // 2) % ring) - ring // 2 for s in sites.members)
