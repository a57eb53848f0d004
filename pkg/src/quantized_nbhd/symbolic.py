"""Symbolic evaluation of ring maps.

Input bit ``b`` of cell ``c`` is variable ``c*layers + b``; extra variables
(for replaced letters) are numbered from ``ring*layers`` upwards. Cells are
taken mod the ring, so wraparound is handled exactly.
"""

from __future__ import annotations

from typing import Callable, Sequence

from .anf import Anf, bit_indices
from .core import RingMap, RuleSpec


def cell_vars(layers: int, cell: int) -> list[Anf]:
    return [Anf.var(cell * layers + b) for b in range(layers)]


def input_vars(f: RingMap) -> Callable[[int], list[Anf]]:
    L, N = f.layers, f.ring
    cache: dict[int, list[Anf]] = {}

    def src(c: int):
        c %= N
        if c not in cache:
            cache[c] = cell_vars(L, c)
        return cache[c]

    return src


def output_at(rule: RuleSpec, ring: int, c: int, src: Callable[[int], Sequence], symbolic: bool = True) -> list:
    """Output bits of cell ``c``; ``symbolic`` coerces constants to :class:`Anf`."""
    cell = lambda d: src((c + d) % ring)  # noqa: E731
    return rule.symbolic(cell) if symbolic else rule.evaluate(cell)


def flatten(rule: RuleSpec) -> list[RuleSpec]:
    """Factors of a composite rule in application order (first applied first)."""
    if not rule.factors:
        return [rule]
    outer, inner = rule.factors
    return flatten(inner) + flatten(outer)


class ChainEvaluator:
    """Symbolic whole-ring evaluation of a chain of rules, level by level.

    Level 0 is ``src``; level ``j`` applies ``rules[j-1]`` to level ``j-1``.
    Every intermediate cell is computed once.
    """

    def __init__(self, ring: int, rules: Sequence[RuleSpec], src: Callable[[int], Sequence], symbolic: bool = True):
        self.ring = ring
        self.rules = list(rules)
        self.src = src
        self.symbolic = symbolic
        self._memo: dict = {}

    @property
    def depth(self) -> int:
        return len(self.rules)

    def get(self, level: int, c: int) -> list[Anf]:
        c %= self.ring
        if level == 0:
            return list(self.src(c))
        key = (level, c)
        if key not in self._memo:
            self._memo[key] = output_at(
                self.rules[level - 1], self.ring, c, lambda e: self.get(level - 1, e), self.symbolic
            )
        return self._memo[key]


def pull_back(chain: ChainEvaluator, replaced: dict) -> dict:
    """Undo the chain after replacing some top-level cells.

    ``replaced`` maps cells to new top-level values. Returns the level-0
    values of every cell the replacement can reach; all other cells come
    back to their inputs unchanged. A cell whose inverse window sees no
    disturbed cell simply gets its forward value back.
    """
    inverses = [r.inverse_rule for r in chain.rules]
    if any(r is None for r in inverses):
        raise ValueError("every factor of the chain needs an inverse rule")
    N = chain.ring
    disturbed = {c % N: v for c, v in replaced.items()}
    for level in range(chain.depth, 0, -1):
        inv = inverses[level - 1]
        lo, hi = inv.window
        cells = {(b - d) % N for b in disturbed for d in range(lo, hi + 1)}

        def src(e, level=level, layer=disturbed):
            e %= N
            return layer[e] if e in layer else chain.get(level, e)

        disturbed = {c: output_at(inv, N, c, src, chain.symbolic) for c in sorted(cells)}
    return disturbed


def forward_chain(f: RingMap) -> ChainEvaluator:
    if "chain" not in f._cache:
        f._cache["chain"] = ChainEvaluator(f.ring, flatten(f.rule), input_vars(f))
    return f._cache["chain"]


def output_polys(f: RingMap, c: int) -> list[Anf]:
    """Output bits of cell ``c`` as polynomials in the input bits."""
    chain = forward_chain(f)
    return chain.get(chain.depth, c)


def support_cells(polys: Sequence[Anf], layers: int, ring: int) -> set[int]:
    """Cells whose input bits occur in any of ``polys`` (extra variables ignored)."""
    s = 0
    for p in polys:
        s |= p.support
    s &= (1 << (ring * layers)) - 1
    return {i // layers for i in bit_indices(s)}


def assignment_to_word(assignment: int, f: RingMap) -> int:
    """Ring word whose bits are the first ``ring*layers`` variables of ``assignment``."""
    return assignment & ((1 << (f.ring * f.layers)) - 1)
