"""Boolean circuits as CNF, for SAT-based dependency queries.

:class:`Lit` supports ``^`` and ``&`` with other literals and with the ints 0
and 1, so local rules evaluate on it unchanged. Gates are hashed
structurally: evaluating the same subexpression twice reuses one variable,
which keeps two-copy difference circuits small when the copies share most
of their inputs.
"""

from __future__ import annotations

from pysat.solvers import Solver


class Circuit:
    def __init__(self):
        self.nvars = 0
        self.clauses: list[list[int]] = []
        self._gates: dict = {}

    def input(self) -> "Lit":
        self.nvars += 1
        return Lit(self, self.nvars)

    def inputs(self, n: int) -> list:
        return [self.input() for _ in range(n)]

    def _and(self, a: int, b: int):
        if a == b:
            return Lit(self, a)
        if a == -b:
            return 0
        key = ("and", min(a, b), max(a, b))
        x = self._gates.get(key)
        if x is None:
            self.nvars += 1
            x = self.nvars
            self.clauses += [[-x, a], [-x, b], [x, -a, -b]]
            self._gates[key] = x
        return Lit(self, x)

    def _xor(self, a: int, b: int):
        if a == b:
            return 0
        if a == -b:
            return 1
        flip = (a < 0) != (b < 0)
        a, b = abs(a), abs(b)
        key = ("xor", min(a, b), max(a, b))
        x = self._gates.get(key)
        if x is None:
            self.nvars += 1
            x = self.nvars
            self.clauses += [[-x, a, b], [-x, -a, -b], [x, -a, b], [x, a, -b]]
            self._gates[key] = x
        return Lit(self, -x if flip else x)

    def solve(self, assumptions_clause: list) -> list | None:
        """Model (list of signed ints) satisfying the circuit plus one extra clause, or None."""
        with Solver(name="g4", bootstrap_with=self.clauses + [assumptions_clause]) as s:
            if s.solve():
                return s.get_model()
        return None


class Lit:
    __slots__ = ("circuit", "lit")

    def __init__(self, circuit: Circuit, lit: int):
        self.circuit = circuit
        self.lit = lit

    def __and__(self, other):
        if isinstance(other, Lit):
            return self.circuit._and(self.lit, other.lit)
        return self if int(other) & 1 else 0

    __rand__ = __and__

    def __xor__(self, other):
        if isinstance(other, Lit):
            return self.circuit._xor(self.lit, other.lit)
        return Lit(self.circuit, -self.lit) if int(other) & 1 else self

    __rxor__ = __xor__

    def value(self, model_set: set) -> int:
        return int(self.lit in model_set)

    def __repr__(self) -> str:
        return f"Lit({self.lit})"


def value_of(x, model_set: set) -> int:
    """Value of a literal or constant under a model given as a set of true literals."""
    if isinstance(x, Lit):
        return x.value(model_set)
    return int(x) & 1
