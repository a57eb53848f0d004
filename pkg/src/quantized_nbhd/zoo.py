"""Concrete reversible automata on rings.

Bit layout: a cell of ``layers`` bits stores layer ``i`` (1-based) in bit
``i-1``. For layered automata whose layers are themselves ``m``-bit groups
(``JT``), layer ``i`` occupies bits ``(i-1)*m .. i*m-1``. The Toffoli cell
``(v^0, v^1)`` stores ``v^0`` in bit 0 and ``v^1`` in bit 1.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Callable

from .core import (
    RingMap,
    RingTooSmall,
    RuleSpec,
    compose_rules,
    derive_inverse_rule,
    product_rule,
    stretch_rule,
)

TOFFOLI_PROBE_RING = 6


def _xor(a, b):
    return [x ^ y for x, y in zip(a, b)]


def _group(bits, i: int, m: int):
    """Layer ``i`` (1-based) of a cell whose layers have ``m`` bits."""
    return list(bits[(i - 1) * m:i * m])


# ---------------------------------------------------------------------------
# J_k and its inverse K_k
# ---------------------------------------------------------------------------


def j_rule(k: int, m: int = 1) -> RuleSpec:
    """``J_k(v)_0^i = v_0^i + v_1^{i+1}`` for ``i < k`` and ``v_1^1`` for ``i = k``."""
    if k < 1 or m < 1:
        raise ValueError("k and m must be positive")

    def fn(cell):
        here, right = cell(0), cell(1)
        out = []
        for i in range(1, k):
            out += _xor(_group(here, i, m), _group(right, i + 1, m))
        out += _group(right, 1, m)
        return out

    def inv(cell):
        out = []
        for i in range(1, k + 1):
            acc = _group(cell(-i), k, m)
            for j in range(1, i):
                acc = _xor(acc, _group(cell(j - i), j, m))
            out += acc
        return out

    name = f"J{k}" if m == 1 else f"J{k}x{m}"
    fwd = RuleSpec(k * m, (0, 1), fn, name, {"k": k, "m": m})
    back = RuleSpec(k * m, (-k, -1), inv, name.replace("J", "K", 1), {"k": k, "m": m})
    return fwd.with_inverse(back)


# ---------------------------------------------------------------------------
# Toffoli automaton and its juxtapositions
# ---------------------------------------------------------------------------


def _toffoli_fn(cell):
    a0, b0 = cell(0)
    a1, _ = cell(1)
    return [b0 ^ (a0 & a1), a1]


@functools.lru_cache(maxsize=None)
def toffoli_rule() -> RuleSpec:
    """``T(v)_0 = (v_0^1 + v_0^0 v_1^0, v_1^0)``; inverse read off a small ring."""
    fwd = RuleSpec(2, (0, 1), _toffoli_fn, "T", {})
    return fwd.with_inverse(derive_inverse_rule(fwd, TOFFOLI_PROBE_RING))


@functools.lru_cache(maxsize=None)
def tk_rule(k: int) -> RuleSpec:
    """``k`` Toffoli copies side by side; copy ``j`` pairs cell 0 with cell ``j``.

    Copy ``j`` lives on bits ``2(j-1), 2(j-1)+1``.
    """
    if k < 1:
        raise ValueError("k must be positive")
    t = toffoli_rule()
    return product_rule([stretch_rule(t, j) for j in range(1, k + 1)], f"T_{k}")


def identity_rule(layers: int) -> RuleSpec:
    fwd = RuleSpec(layers, (0, 0), lambda cell: list(cell(0)), "id", {})
    return fwd.with_inverse(RuleSpec(layers, (0, 0), lambda cell: list(cell(0)), "id", {}))


def toffoli_on_last_layer(k: int, l: int) -> RuleSpec:
    """``T_l`` acting on layer ``k`` of ``2l``-bit layers, other layers fixed."""
    parts = [tk_rule(l)]
    if k > 1:
        parts.insert(0, identity_rule(2 * l * (k - 1)))
    return product_rule(parts, f"P{k},{l}")


# ---------------------------------------------------------------------------
# JT_{k,l}
# ---------------------------------------------------------------------------


@functools.lru_cache(maxsize=None)
def jt_rule(k: int, l: int) -> RuleSpec:
    """``JT_{k,l}``: layers ``i < k`` as in ``J_k``; layer ``k`` is ``T_l(v^1)_1``.

    Each of the ``k`` layers holds ``2l`` bits. The inverse is the closed form
    ``T_l^-1(v^k)_{-i} + sum_{j<i} v^j_{j-i}``.
    """
    if k < 1 or l < 1:
        raise ValueError("k and l must be positive")
    m = 2 * l
    t = tk_rule(l)
    t_inv = t.inverse_rule

    def fn(cell):
        here, right = cell(0), cell(1)
        out = []
        for i in range(1, k):
            out += _xor(_group(here, i, m), _group(right, i + 1, m))
        out += t.evaluate(lambda d: _group(cell(1 + d), 1, m))
        return out

    def inv(cell):
        out = []
        for i in range(1, k + 1):
            acc = t_inv.evaluate(lambda d, i=i: _group(cell(d - i), k, m))
            for j in range(1, i):
                acc = _xor(acc, _group(cell(j - i), j, m))
            out += acc
        return out

    lo = t_inv.window[0] - k
    hi = max(t_inv.window[1] - 1, -1)
    fwd = RuleSpec(k * m, (0, 1 + t.window[1]), fn, f"JT{k},{l}", {"k": k, "l": l})
    back = RuleSpec(k * m, (lo, hi), inv, f"JT{k},{l}^-1", {"k": k, "l": l})
    return fwd.with_inverse(back)


@functools.lru_cache(maxsize=None)
def jt_iterated_rule(k: int, l: int, n: int) -> RuleSpec:
    """``JT`` with ``J_k`` replaced by its ``n``-th iterate: ``P o J_k^n``."""
    if n < 1:
        raise ValueError("n must be positive")
    j = j_rule(k, 2 * l)
    jn = j
    for _ in range(n - 1):
        jn = compose_rules(j, jn)
    return compose_rules(toffoli_on_last_layer(k, l), jn)


# ---------------------------------------------------------------------------
# Ring constructors
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ZooEntry:
    """How to build one family of automata on a ring."""

    name: str
    params: tuple
    rule: Callable[..., RuleSpec]
    widest: Callable[..., int]
    min_ring: Callable[..., int]

    def default_ring(self, **params) -> int:
        return max(self.min_ring(**params), 2 * self.widest(**params) + 1)

    def build(self, ring: int | None = None, **params) -> RingMap:
        missing = [p for p in self.params if p not in params]
        extra = [p for p in params if p not in self.params]
        if missing or extra:
            raise TypeError(f"{self.name} takes parameters {list(self.params)}")
        for p in self.params:
            if int(params[p]) < 1:
                raise ValueError(f"{p} must be positive")
        params = {p: int(params[p]) for p in self.params}
        if ring is None:
            ring = self.default_ring(**params)
        need = self.min_ring(**params)
        if ring < need:
            raise RingTooSmall(f"{self.name} with {params} needs a ring of at least {need}, got {ring}")
        out = RingMap(ring, self.rule(**params))
        out.origin = {"zoo": self.name, "params": params}
        return out


ZOO = {
    "jk": ZooEntry("jk", ("k",), lambda k: j_rule(k), lambda k: k + 1, lambda k: 2 * k + 2),
    "toffoli": ZooEntry("toffoli", (), lambda: toffoli_rule(), lambda: 4, lambda: 6),
    "tk": ZooEntry("tk", ("k",), tk_rule, lambda k: 3 * k + 1, lambda k: 4 * k + 2),
    "jt": ZooEntry("jt", ("k", "l"), jt_rule, lambda k, l: k + 3 * l + 1, lambda k, l: k + 3 * l + 2),
    "jt_iterated": ZooEntry(
        "jt_iterated",
        ("k", "l", "n"),
        jt_iterated_rule,
        lambda k, l, n: k * n + 3 * l + 1,
        lambda k, l, n: k * n + 3 * l + 2,
    ),
}


def make_jk(k: int, ring: int | None = None) -> RingMap:
    return ZOO["jk"].build(ring, k=k)


def make_toffoli(ring: int | None = None) -> RingMap:
    return ZOO["toffoli"].build(ring)


def make_tk(k: int, ring: int | None = None) -> RingMap:
    return ZOO["tk"].build(ring, k=k)


def make_jt(k: int, l: int, ring: int | None = None) -> RingMap:
    return ZOO["jt"].build(ring, k=k, l=l)


def make_jt_iterated(k: int, l: int, n: int, ring: int | None = None) -> RingMap:
    return ZOO["jt_iterated"].build(ring, k=k, l=l, n=n)


def make(name: str, ring: int | None = None, **params) -> RingMap:
    try:
        entry = ZOO[name]
    except KeyError:
        raise ValueError(f"unknown automaton {name!r}; choose from {sorted(ZOO)}") from None
    return entry.build(ring, **params)
