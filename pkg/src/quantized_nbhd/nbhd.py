"""Classical dependency graphs and neighbourhood schemes.

``in_nbhd(f, y)`` is the exact set of input sites whose letter can change
the output letter at ``y``. Explicit maps are analysed by enumeration; ring
maps symbolically, through the algebraic normal form of their local rule,
which is exact at any ring size.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .arcs import arc_of
from .core import (
    BlockMap,
    CellSpace,
    DimensionCapExceeded,
    RingMap,
    SiteSet,
    SpaceMismatch,
    enumeration_cap,
    invert,
)
from .symbolic import output_polys, support_cells


# ---------------------------------------------------------------------------
# Schemes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NbhdScheme:
    """A map from each site of ``source`` to a set of sites of ``target``."""

    source: CellSpace
    target: CellSpace
    mapping: dict

    def __post_init__(self):
        fixed = {}
        for s in self.source.sites:
            if s not in self.mapping:
                raise SpaceMismatch(f"scheme is undefined at site {s!r}")
            members = frozenset(self.mapping[s])
            for t in members:
                self.target.position(t)
            fixed[s] = members
        object.__setattr__(self, "mapping", fixed)

    def __call__(self, site) -> SiteSet:
        return SiteSet(self.target, self.mapping[site])

    def of_set(self, sites: Iterable) -> SiteSet:
        out = frozenset()
        for s in sites:
            out |= self.mapping[s]
        return SiteSet(self.target, out)

    def __eq__(self, other) -> bool:
        if not isinstance(other, NbhdScheme):
            return NotImplemented
        return self.source == other.source and self.target == other.target and self.mapping == other.mapping

    def __hash__(self):
        return hash(tuple(sorted((repr(k), tuple(sorted(map(repr, v)))) for k, v in self.mapping.items())))

    def __le__(self, other: "NbhdScheme") -> bool:
        _same_shape(self, other)
        return all(self.mapping[s] <= other.mapping[s] for s in self.source.sites)

    def __or__(self, other: "NbhdScheme") -> "NbhdScheme":
        return scheme_union(self, other)

    def __and__(self, other: "NbhdScheme") -> "NbhdScheme":
        return scheme_intersection(self, other)

    def offsets(self, site):
        """Arc of ``self(site)`` relative to ``site`` on ring spaces."""
        if self.target.ring is None:
            return None
        return arc_of(self.mapping[site], self.target.ring, site)

    def to_json(self) -> dict:
        sites = {}
        for s in self.source.sites:
            members = sorted(self.mapping[s], key=self.target.position)
            entry = {"members": members}
            if self.target.ring is not None:
                arc = self.offsets(s)
                entry["offsets"] = list(arc) if arc is not None else None
            sites[str(s)] = entry
        return {
            "source": list(self.source.sites),
            "target": list(self.target.sites),
            "sites": sites,
        }


def _same_shape(n1: NbhdScheme, n2: NbhdScheme) -> None:
    if n1.source != n2.source or n1.target != n2.target:
        raise SpaceMismatch("schemes have different source or target spaces")


def identity_scheme(space: CellSpace) -> NbhdScheme:
    return NbhdScheme(space, space, {s: {s} for s in space.sites})


def scheme_union(n1: NbhdScheme, n2: NbhdScheme) -> NbhdScheme:
    _same_shape(n1, n2)
    return NbhdScheme(n1.source, n1.target, {s: n1.mapping[s] | n2.mapping[s] for s in n1.source.sites})


def scheme_intersection(n1: NbhdScheme, n2: NbhdScheme) -> NbhdScheme:
    _same_shape(n1, n2)
    return NbhdScheme(n1.source, n1.target, {s: n1.mapping[s] & n2.mapping[s] for s in n1.source.sites})


def scheme_compose(n2: NbhdScheme, n1: NbhdScheme) -> NbhdScheme:
    """``(n2 o n1)(x) = union of n2(y) over y in n1(x)``."""
    if n1.target != n2.source:
        raise SpaceMismatch("cannot compose: target of the inner scheme is not the source of the outer one")
    return NbhdScheme(n1.source, n2.target, {x: n2.of_set(n1.mapping[x]).members for x in n1.source.sites})


def scheme_transpose(n: NbhdScheme) -> NbhdScheme:
    out = {t: set() for t in n.target.sites}
    for s, members in n.mapping.items():
        for t in members:
            out[t].add(s)
    return NbhdScheme(n.target, n.source, out)


# ---------------------------------------------------------------------------
# Dependencies of a block map
# ---------------------------------------------------------------------------


def _explicit_dependencies(f: BlockMap) -> dict:
    """``{y: frozenset of x}`` for an enumerable map, by exhaustive variation."""
    cache = getattr(f, "_cache", None)
    if cache is not None and "deps" in cache:
        return cache["deps"]
    X, Y = f.domain, f.codomain
    X.require_enumerable("computing a dependency graph")
    table = f.table()
    shape = tuple(int(a) for a in reversed(X.sizes))
    nx = len(X.sites)
    deps = {}
    for y in Y.sites:
        out = np.asarray(Y.letter(table, y)).reshape(shape)
        members = set()
        for i, x in enumerate(X.sites):
            axis = nx - 1 - i
            first = np.take(out, [0], axis=axis)
            if np.any(out != first):
                members.add(x)
        deps[y] = frozenset(members)
    if cache is not None:
        cache["deps"] = deps
    return deps


def _ring_in_nbhd(f: RingMap, y: int) -> frozenset:
    key = ("in", y % f.ring)
    if key not in f._cache:
        f._cache[key] = frozenset(support_cells(output_polys(f, y), f.layers, f.ring))
    return f._cache[key]


def _window_in_nbhd(f: RingMap, y: int) -> frozenset:
    """Enumerate only the rule window around ``y``, other cells fixed to 0."""
    lo, hi = f.rule.window
    width = hi - lo + 1
    if width > f.ring:
        f.domain.require_enumerable("window enumeration on a ring smaller than the window")
        return _explicit_dependencies(f)[y]
    a = 1 << f.layers
    if a**width > enumeration_cap():
        raise DimensionCapExceeded(f"window of {width} cells has {a ** width} assignments")
    combos = np.arange(a**width, dtype=np.int64)
    letters = np.zeros((combos.size, f.ring), dtype=np.int64)
    for j, d in enumerate(range(lo, hi + 1)):
        letters[:, (y + d) % f.ring] = (combos // a**j) % a
    out = f.rule.apply_letters(letters)[:, y % f.ring].reshape((a,) * width)
    members = set()
    for j, d in enumerate(range(lo, hi + 1)):
        axis = width - 1 - j
        if np.any(out != np.take(out, [0], axis=axis)):
            members.add((y + d) % f.ring)
    return frozenset(members)


def in_nbhd(f: BlockMap, y, method: str = "auto") -> SiteSet:
    """Input sites on which output site ``y`` depends.

    ``method`` is ``"enumerate"`` (whole space), ``"window"`` (ring maps:
    the rule window only) or ``"symbolic"`` (ring maps: polynomial support).
    ``"auto"`` picks symbolic for ring maps and enumeration otherwise.
    """
    f.codomain.position(y)
    if method == "auto":
        method = "symbolic" if isinstance(f, RingMap) else "enumerate"
    if method == "enumerate":
        members = _explicit_dependencies(f)[y]
    elif method in ("symbolic", "window"):
        if not isinstance(f, RingMap):
            raise ValueError(f"method {method!r} needs a ring map")
        members = _ring_in_nbhd(f, y) if method == "symbolic" else _window_in_nbhd(f, y)
    else:
        raise ValueError(f"unknown method {method!r}")
    return SiteSet(f.domain, members)


def out_nbhd(f: BlockMap, x, method: str = "auto") -> SiteSet:
    """Output sites that input site ``x`` can influence."""
    f.domain.position(x)
    if isinstance(f, RingMap):
        lo, hi = f.rule.window
        candidates = {(x - d) % f.ring for d in range(lo, hi + 1)}
        if hi - lo + 1 >= f.ring:
            candidates = set(f.codomain.sites)
    else:
        candidates = f.codomain.sites
    members = {y for y in candidates if x in in_nbhd(f, y, method).members}
    return SiteSet(f.codomain, members)


@dataclass(frozen=True)
class DependencyGraph:
    domain: CellSpace
    codomain: CellSpace
    edges: frozenset

    def in_scheme(self) -> NbhdScheme:
        m = {y: set() for y in self.codomain.sites}
        for x, y in self.edges:
            m[y].add(x)
        return NbhdScheme(self.codomain, self.domain, m)

    def out_scheme(self) -> NbhdScheme:
        return scheme_transpose(self.in_scheme())


def dependency_graph(f: BlockMap) -> DependencyGraph:
    edges = frozenset((x, y) for y in f.codomain.sites for x in in_nbhd(f, y).members)
    return DependencyGraph(f.domain, f.codomain, edges)


def in_scheme(f: BlockMap) -> NbhdScheme:
    """``N<-_f`` as a scheme from codomain sites to domain sites."""
    return NbhdScheme(f.codomain, f.domain, {y: in_nbhd(f, y).members for y in f.codomain.sites})


def out_scheme(f: BlockMap) -> NbhdScheme:
    """``N->_f``, the transpose of the in-scheme."""
    return scheme_transpose(in_scheme(f))


def classical_schemes(f: BlockMap) -> dict:
    """The four classical schemes of a bijection and its inverse."""
    g = invert(f)
    return {
        "in_f": in_scheme(f),
        "out_f": out_scheme(f),
        "in_f_inv": in_scheme(g),
        "out_f_inv": out_scheme(g),
    }


# ---------------------------------------------------------------------------
# Locality test
# ---------------------------------------------------------------------------


def _as_members(space: CellSpace, sites) -> frozenset:
    if isinstance(sites, SiteSet):
        if sites.space != space:
            raise SpaceMismatch("site set belongs to another space")
        return sites.members
    members = frozenset(sites)
    for s in members:
        space.position(s)
    return members


def locality_counterexample(f: BlockMap, B, A):
    """Words ``(v, w)`` with ``v_A = w_A`` but ``f(v)_B != f(w)_B``, or None.

    Words are returned as packed indices of the domain.
    """
    X, Y = f.domain, f.codomain
    A, B = _as_members(X, A), _as_members(Y, B)
    if isinstance(f, RingMap) and not X.enumerable:
        return _ring_locality_counterexample(f, B, A)
    X.require_enumerable("checking locality")
    words = X.words()
    key_a = X.key(words, A)
    key_b = Y.key(f.table(), B)
    order = np.lexsort((key_b, key_a))
    ka, kb = key_a[order], key_b[order]
    bad = np.flatnonzero((ka[1:] == ka[:-1]) & (kb[1:] != kb[:-1]))
    if bad.size == 0:
        return None
    i = int(bad[0])
    return int(order[i]), int(order[i + 1])


def _ring_locality_counterexample(f: RingMap, B: frozenset, A: frozenset):
    L = f.layers
    for y in sorted(B):
        for p in output_polys(f, y):
            for i in sorted(_bits_outside(p.support, A, L)):
                wit = p.derivative(i).witness()
                if wit is not None:
                    return wit, wit ^ (1 << i)
    return None


def _bits_outside(support: int, A: frozenset, layers: int) -> set:
    from .anf import bit_indices

    return {i for i in bit_indices(support) if i // layers not in A}


def check_locality(f: BlockMap, B, A) -> bool:
    """True iff ``v_A = w_A`` implies ``f(v)_B = f(w)_B``, i.e. ``N<-_f(B)`` is inside ``A``."""
    return locality_counterexample(f, B, A) is None
