"""Boolean polynomials over GF(2) in algebraic normal form.

A polynomial is a set of monomials; a monomial is an ``int`` bitmask of
variable indices (bit ``i`` set means variable ``i`` occurs). The empty
monomial ``0`` is the constant 1. The representation is canonical, so a
Boolean function depends on variable ``i`` exactly when ``i`` occurs in some
monomial. That is what makes it useful for exact neighbourhood analysis.

Local rules are written with ``^`` and ``&`` only, so the same rule code runs
on Python ints, numpy arrays and :class:`Anf` objects.
"""

from __future__ import annotations

import contextlib
from typing import Iterable, Mapping

import numpy as np

# Optional cap on monomial pairs per product; see ``product_limit``.
_PRODUCT_LIMIT: list = [None]


class AnfTooLarge(ArithmeticError):
    """A product would exceed the active monomial-pair limit."""


@contextlib.contextmanager
def product_limit(pairs: int | None):
    """Make products with more than ``pairs`` monomial pairs raise :class:`AnfTooLarge`."""
    old = _PRODUCT_LIMIT[0]
    _PRODUCT_LIMIT[0] = pairs
    try:
        yield
    finally:
        _PRODUCT_LIMIT[0] = old


class Anf:
    __slots__ = ("terms",)

    def __init__(self, terms: Iterable[int] = ()):
        self.terms = frozenset(terms)

    @classmethod
    def var(cls, index: int) -> "Anf":
        return cls((1 << index,))

    @classmethod
    def const(cls, bit: int) -> "Anf":
        return cls((0,)) if bit & 1 else cls()

    def __xor__(self, other) -> "Anf":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return Anf(self.terms ^ other.terms)

    __rxor__ = __xor__

    def __and__(self, other) -> "Anf":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not self.terms or not other.terms:
            return ZERO
        limit = _PRODUCT_LIMIT[0]
        if limit is not None and len(self.terms) * len(other.terms) > limit:
            raise AnfTooLarge(f"product of {len(self.terms)} and {len(other.terms)} monomials")
        acc: set[int] = set()
        for a in self.terms:
            for b in other.terms:
                m = a | b
                if m in acc:
                    acc.remove(m)
                else:
                    acc.add(m)
        return Anf(acc)

    __rand__ = __and__

    def __eq__(self, other) -> bool:
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __repr__(self) -> str:
        if not self.terms:
            return "Anf(0)"
        parts = []
        for m in sorted(self.terms):
            if m == 0:
                parts.append("1")
            else:
                parts.append("*".join(f"x{i}" for i in _bits(m)))
        return "Anf(" + " + ".join(parts) + ")"

    @property
    def support(self) -> int:
        """Bitmask of the variables the function depends on."""
        s = 0
        for m in self.terms:
            s |= m
        return s

    @property
    def degree(self) -> int:
        return max((m.bit_count() for m in self.terms), default=0)

    def evaluate(self, assignment: int) -> int:
        """Value at the point whose true variables are the bits of ``assignment``."""
        v = 0
        for m in self.terms:
            if m & assignment == m:
                v ^= 1
        return v

    def derivative(self, index: int) -> "Anf":
        """f(x with var flipped) + f(x); nonzero iff f depends on the variable."""
        bit = 1 << index
        return Anf(m ^ bit for m in self.terms if m & bit)

    def witness(self) -> int | None:
        """An assignment where the polynomial evaluates to 1, or None if it is 0.

        Setting exactly the variables of an inclusion-minimal monomial to 1
        switches on that monomial and no other.
        """
        if not self.terms:
            return None
        return min(self.terms, key=int.bit_count)

    def substitute(self, values: Mapping[int, "Anf"]) -> "Anf":
        """Replace variable ``i`` by ``values[i]`` for every variable present."""
        out = ZERO
        for m in self.terms:
            term = ONE
            for i in _bits(m):
                term = term & values[i]
            out = out ^ term
        return out

    def apply(self, values):
        """Evaluate with ``values[i]`` for variable ``i``, using only ``^`` and ``&``.

        Works for any value type supporting those operators with the ints 0
        and 1 (numpy arrays, :class:`Anf`, circuit literals).
        """
        out = 0
        for m in self.terms:
            term = 1
            for i in _bits(m):
                term = term & values[i]
            out = out ^ term
        return out


ZERO = Anf()
ONE = Anf((0,))


def _coerce(x):
    if isinstance(x, Anf):
        return x
    if isinstance(x, (int, np.integer)):
        return ONE if int(x) & 1 else ZERO
    return NotImplemented


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def bit_indices(mask: int) -> list[int]:
    return list(_bits(mask))


def from_truth_table(values: np.ndarray) -> Anf:
    """ANF of a Boolean function given by its values on ``0..2**n - 1``.

    Entry ``j`` of ``values`` is the function at the point whose true
    variables are the bits of ``j``. Uses the binary Moebius transform.
    """
    coeffs = np.asarray(values, dtype=np.uint8).copy() & 1
    size = coeffs.size
    n = size.bit_length() - 1
    if 1 << n != size:
        raise ValueError("truth table length must be a power of two")
    step = 1
    for _ in range(n):
        view = coeffs.reshape(-1, 2, step)
        view[:, 1, :] ^= view[:, 0, :]
        step <<= 1
    return Anf(int(j) for j in np.flatnonzero(coeffs))
