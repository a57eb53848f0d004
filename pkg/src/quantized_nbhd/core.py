"""Cell spaces, words and reversible block maps.

Words are packed into integers in mixed radix with the first site as the
least significant digit. On a ring of uniform ``2**layers`` letters this is
plain bit packing: cell ``n`` occupies bits ``layers*n .. layers*(n+1)-1``
and layer ``i`` (1-based) is bit ``i-1`` of the letter.
"""

from __future__ import annotations

import contextlib
import itertools
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Iterator, Sequence

import numpy as np

from .anf import Anf, bit_indices, from_truth_table

Site = Hashable

# Largest word count any operation will enumerate.
_ENUMERATION_CAP = [2**22]
_CHUNK = 1 << 16


class NbhdError(Exception):
    """Base class for all errors raised by this package."""


class DuplicateSite(NbhdError):
    pass


class DimensionCapExceeded(NbhdError):
    pass


class NotInjective(NbhdError):
    pass


class ArityMismatch(NbhdError):
    pass


class SpaceMismatch(NbhdError):
    pass


class RingTooSmall(NbhdError):
    pass


def enumeration_cap() -> int:
    return _ENUMERATION_CAP[0]


def set_enumeration_cap(cap: int) -> None:
    if cap < 1:
        raise ValueError("cap must be positive")
    _ENUMERATION_CAP[0] = int(cap)


@contextlib.contextmanager
def cap_override(cap: int):
    """Temporarily change the enumeration cap."""
    old = enumeration_cap()
    set_enumeration_cap(cap)
    try:
        yield
    finally:
        set_enumeration_cap(old)


# ---------------------------------------------------------------------------
# Cell spaces, words, site sets
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CellSpace:
    """A finite ordered set of sites, each with its own alphabet size.

    ``ring`` and ``layers`` are set for translation-invariant ring spaces
    (sites ``0..ring-1``, every alphabet ``2**layers``).
    """

    sites: tuple
    sizes: tuple
    ring: int | None = None
    layers: int | None = None
    _pos: dict = field(init=False, repr=False, compare=False, hash=False)
    _radix: tuple = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if len(self.sites) != len(self.sizes):
            raise ArityMismatch("one alphabet size per site is required")
        pos = {}
        for i, s in enumerate(self.sites):
            if s in pos:
                raise DuplicateSite(f"duplicate site {s!r}")
            pos[s] = i
        for s, a in zip(self.sites, self.sizes):
            if int(a) < 1:
                raise ValueError(f"alphabet of site {s!r} must be nonempty")
        radix, r = [], 1
        for a in self.sizes:
            radix.append(r)
            r *= int(a)
        object.__setattr__(self, "_pos", pos)
        object.__setattr__(self, "_radix", tuple(radix))

    @property
    def total_dim(self) -> int:
        d = 1
        for a in self.sizes:
            d *= int(a)
        return d

    @property
    def enumerable(self) -> bool:
        return self.total_dim <= enumeration_cap()

    def require_enumerable(self, what: str = "this operation") -> None:
        if not self.enumerable:
            raise DimensionCapExceeded(
                f"{what} needs all {self.total_dim} words of a {len(self.sites)}-site "
                f"space; the enumeration cap is {enumeration_cap()}"
            )

    def __len__(self) -> int:
        return len(self.sites)

    def __contains__(self, site) -> bool:
        return site in self._pos

    def position(self, site) -> int:
        try:
            return self._pos[site]
        except KeyError:
            raise SpaceMismatch(f"site {site!r} is not in this space") from None

    def size(self, site) -> int:
        return int(self.sizes[self.position(site)])

    def radix(self, site) -> int:
        return self._radix[self.position(site)]

    def subspace(self, sites: Iterable) -> "CellSpace":
        keep = set(sites)
        for s in keep:
            self.position(s)
        chosen = [i for i, s in enumerate(self.sites) if s in keep]
        return CellSpace(tuple(self.sites[i] for i in chosen), tuple(self.sizes[i] for i in chosen))

    def siteset(self, members: Iterable = ()) -> "SiteSet":
        return SiteSet(self, frozenset(members))

    def all_sites(self) -> "SiteSet":
        return SiteSet(self, frozenset(self.sites))

    def encode(self, letters: Sequence[int]) -> int:
        if len(letters) != len(self.sites):
            raise ArityMismatch(f"expected {len(self.sites)} letters, got {len(letters)}")
        idx = 0
        for a, r, x in zip(self.sizes, self._radix, letters):
            x = int(x)
            if not 0 <= x < a:
                raise ArityMismatch(f"letter {x} outside alphabet of size {a}")
            idx += x * r
        return idx

    def decode(self, index: int) -> tuple:
        index = int(index)
        if not 0 <= index < self.total_dim:
            raise ArityMismatch(f"word index {index} out of range")
        out = []
        for a in self.sizes:
            index, x = divmod(index, int(a))
            out.append(x)
        return tuple(out)

    def letter(self, words, site):
        """Letter at ``site`` of packed words (int or int64 array)."""
        i = self.position(site)
        return (words // self._radix[i]) % self.sizes[i]

    def digits(self, words: np.ndarray) -> np.ndarray:
        """``(M, len(sites))`` letter matrix of packed words."""
        words = np.asarray(words, dtype=np.int64)
        out = np.empty(words.shape + (len(self.sites),), dtype=np.int64)
        for i, (a, r) in enumerate(zip(self.sizes, self._radix)):
            out[..., i] = (words // r) % a
        return out

    def pack(self, digits: np.ndarray) -> np.ndarray:
        digits = np.asarray(digits, dtype=np.int64)
        out = np.zeros(digits.shape[:-1], dtype=np.int64)
        for i, r in enumerate(self._radix):
            out += digits[..., i] * r
        return out

    def key(self, words, sites: Iterable) -> np.ndarray:
        """Pack the restriction of words to ``sites`` into a single integer."""
        words = np.asarray(words, dtype=np.int64)
        out = np.zeros(words.shape, dtype=np.int64)
        r = 1
        for s in sorted(set(sites), key=self.position):
            out += self.letter(words, s) * r
            r *= self.size(s)
        return out

    def words(self) -> np.ndarray:
        self.require_enumerable("enumerating words")
        return np.arange(self.total_dim, dtype=np.int64)


def make_cellspace(site_specs: Iterable[tuple]) -> CellSpace:
    """Build a space from ``(identifier, alphabet_size)`` pairs."""
    specs = [(s, int(a)) for s, a in site_specs]
    return CellSpace(tuple(s for s, _ in specs), tuple(a for _, a in specs))


def ring_space(ring: int, layers: int) -> CellSpace:
    if ring < 1 or layers < 1:
        raise ValueError("ring and layers must be positive")
    return CellSpace(tuple(range(ring)), (1 << layers,) * ring, ring=ring, layers=layers)


@dataclass(frozen=True)
class Word:
    space: CellSpace
    letters: tuple

    def __post_init__(self):
        self.space.encode(self.letters)

    @classmethod
    def from_index(cls, space: CellSpace, index: int) -> "Word":
        return cls(space, space.decode(index))

    @classmethod
    def from_mapping(cls, space: CellSpace, letters: dict, default: int = 0) -> "Word":
        return cls(space, tuple(letters.get(s, default) for s in space.sites))

    @property
    def index(self) -> int:
        return self.space.encode(self.letters)

    def __getitem__(self, site) -> int:
        return self.letters[self.space.position(site)]

    def restrict(self, sites: Iterable) -> "Word":
        sub = self.space.subspace(sites)
        return Word(sub, tuple(self[s] for s in sub.sites))

    def with_letters(self, letters: dict) -> "Word":
        new = list(self.letters)
        for s, x in letters.items():
            new[self.space.position(s)] = x
        return Word(self.space, tuple(new))

    def as_dict(self) -> dict:
        return dict(zip(self.space.sites, self.letters))


@dataclass(frozen=True)
class SiteSet:
    space: CellSpace
    members: frozenset

    def __post_init__(self):
        object.__setattr__(self, "members", frozenset(self.members))
        for s in self.members:
            self.space.position(s)

    def _check(self, other: "SiteSet") -> frozenset:
        if isinstance(other, SiteSet):
            if other.space != self.space:
                raise SpaceMismatch("site sets live in different spaces")
            return other.members
        return frozenset(other)

    def __or__(self, other):
        return SiteSet(self.space, self.members | self._check(other))

    def __and__(self, other):
        return SiteSet(self.space, self.members & self._check(other))

    def __sub__(self, other):
        return SiteSet(self.space, self.members - self._check(other))

    def __le__(self, other):
        return self.members <= self._check(other)

    def __ge__(self, other):
        return self.members >= self._check(other)

    def __eq__(self, other):
        if isinstance(other, SiteSet):
            return self.space == other.space and self.members == other.members
        if isinstance(other, (set, frozenset)):
            return self.members == other
        return NotImplemented

    def __hash__(self):
        return hash(self.members)

    def __iter__(self) -> Iterator:
        return iter(self.sorted())

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, site) -> bool:
        return site in self.members

    def complement(self) -> "SiteSet":
        return SiteSet(self.space, frozenset(self.space.sites) - self.members)

    def issubset(self, other) -> bool:
        return self <= other

    def sorted(self) -> list:
        return sorted(self.members, key=self.space.position)

    def interval(self, origin: int = 0):
        """Members as an arc ``(a, b)`` relative to ``origin`` on a ring space."""
        if self.space.ring is None:
            return None
        from .arcs import arc_of

        return arc_of(self.members, self.space.ring, origin)

    def __repr__(self) -> str:
        arc = self.interval()
        if arc is not None:
            return f"SiteSet({self.sorted()}, arc={list(arc)})"
        return f"SiteSet({self.sorted()})"


# ---------------------------------------------------------------------------
# Local rules on rings
# ---------------------------------------------------------------------------

CellAccessor = Callable[[int], Sequence]
LocalFn = Callable[[CellAccessor], Sequence]


@dataclass(frozen=True, eq=False)
class RuleSpec:
    """A translation-invariant local rule on cells of ``layers`` bits.

    ``local_fn(cell)`` returns the output bits of cell 0, where ``cell(d)``
    yields the input bits of the cell at relative offset ``d``. The function
    must only combine bits with ``^`` and ``&`` (and the constants 0 and 1) so
    that it evaluates on numpy arrays as well as on symbolic polynomials.
    """

    layers: int
    window: tuple
    local_fn: LocalFn = field(repr=False)
    name: str = "rule"
    params: dict = field(default_factory=dict)
    inverse_rule: "RuleSpec | None" = field(default=None, repr=False)
    # (outer, inner) when the rule is a composition; lets whole-ring
    # evaluation apply the factors one after the other
    factors: tuple = field(default=(), repr=False)

    def __post_init__(self):
        lo, hi = self.window
        if lo > hi:
            raise ValueError("window must satisfy lo <= hi")
        object.__setattr__(self, "window", (int(lo), int(hi)))

    @property
    def letters(self) -> int:
        return 1 << self.layers

    def with_inverse(self, inverse: "RuleSpec") -> "RuleSpec":
        if inverse.layers != self.layers:
            raise SpaceMismatch("inverse rule has a different number of layers")
        inv = _bare(inverse)
        me = _bare(self)
        object.__setattr__(inv, "inverse_rule", me)
        object.__setattr__(me, "inverse_rule", inv)
        return me

    def evaluate(self, cell: CellAccessor) -> list:
        out = list(self.local_fn(cell))
        if len(out) != self.layers:
            raise ArityMismatch(f"{self.name} returned {len(out)} bits, expected {self.layers}")
        return out

    def apply_letters(self, letters: np.ndarray) -> np.ndarray:
        """Apply the rule to a batch of ring configurations ``(M, N)``."""
        letters = np.asarray(letters, dtype=np.int64)
        if self.factors:
            outer, inner = self.factors
            return outer.apply_letters(inner.apply_letters(letters))
        bits = [((letters >> b) & 1).astype(np.uint8) for b in range(self.layers)]
        cache: dict[int, list] = {}

        def cell(d: int):
            if d not in cache:
                cache[d] = [np.roll(x, -d, axis=-1) for x in bits]
            return cache[d]

        out = np.zeros_like(letters)
        for b, x in enumerate(self.evaluate(cell)):
            out |= (np.asarray(x, dtype=np.int64) & 1) << b
        return out

    def symbolic(self, cell: Callable[[int], Sequence[Anf]]) -> list:
        return [Anf.const(x) if not isinstance(x, Anf) else x for x in self.evaluate(cell)]

    def check_window(self) -> bool:
        """True when the rule reads nothing outside its window.

        The rule is evaluated symbolically on a window widened by one cell on
        each side; it is honest when every accessed offset and every variable
        in the output lies in the declared window.
        """
        lo, hi = self.window
        L = self.layers
        touched = set()

        def cell(d):
            touched.add(d)
            return [Anf.var((d - lo + 1) * L + b) for b in range(L)]

        support = 0
        for p in self.symbolic(cell):
            support |= p.support
        cells = {i // L + lo - 1 for i in bit_indices(support)}
        return touched <= set(range(lo, hi + 1)) and cells <= set(range(lo, hi + 1))


def _bare(rule: RuleSpec) -> RuleSpec:
    return RuleSpec(rule.layers, rule.window, rule.local_fn, rule.name, rule.params, factors=rule.factors)


def _link(forward: RuleSpec, inverses: Sequence[RuleSpec | None], build) -> RuleSpec:
    if all(r is not None for r in inverses):
        return forward.with_inverse(build([_bare(r) for r in inverses]))
    return forward


def compose_rules(g: RuleSpec, f: RuleSpec) -> RuleSpec:
    """Rule of ``g`` applied after ``f``."""
    if f.layers != g.layers:
        raise SpaceMismatch("rules act on different alphabets")

    def fn(cell):
        memo: dict[int, list] = {}

        def inner(d):
            if d not in memo:
                memo[d] = f.evaluate(lambda e: cell(d + e))
            return memo[d]

        return g.evaluate(inner)

    window = (f.window[0] + g.window[0], f.window[1] + g.window[1])
    rule = RuleSpec(f.layers, window, fn, f"{g.name}*{f.name}", {"outer": g.params, "inner": f.params}, factors=(g, f))
    return _link(rule, [f.inverse_rule, g.inverse_rule], lambda inv: compose_rules(inv[0], inv[1]))


def table_rule(layers: int, window: tuple, table: Sequence[int], name: str = "table") -> RuleSpec:
    """Rule given by a lookup table over the window's letters.

    Entry ``j`` is the output letter when the window letters, read from the
    lowest offset as least significant digit, pack to ``j``.
    """
    lo, hi = window
    width = hi - lo + 1
    table = np.asarray(table, dtype=np.int64)
    a = 1 << layers
    if table.size != a**width:
        raise ArityMismatch(f"table needs {a ** width} entries, got {table.size}")
    if table.min(initial=0) < 0 or table.max(initial=0) >= a:
        raise ArityMismatch("table entries must be letters")
    polys = [from_truth_table((table >> b) & 1) for b in range(layers)]

    def fn(cell):
        cells = [cell(d) for d in range(lo, hi + 1)]
        first = cells[0][0]
        if isinstance(first, (int, np.integer, np.ndarray)):
            idx = 0
            for j, bits in enumerate(cells):
                for b, x in enumerate(bits):
                    idx = idx + (np.asarray(x, dtype=np.int64) << (j * layers + b))
            out = table[idx]
            return [(out >> b) & 1 for b in range(layers)]
        values = [x for bits in cells for x in bits]
        if isinstance(first, Anf):
            return [p.substitute(dict(enumerate(values))) for p in polys]
        return [p.apply(values) for p in polys]

    return RuleSpec(layers, (lo, hi), fn, name, {"table": table.tolist()})


def stretch_rule(rule: RuleSpec, factor: int) -> RuleSpec:
    """Same rule with every offset multiplied by ``factor``."""
    if factor < 1:
        raise ValueError("factor must be positive")

    def fn(cell):
        return rule.evaluate(lambda d: cell(factor * d))

    out = RuleSpec(rule.layers, (factor * rule.window[0], factor * rule.window[1]), fn,
                   f"{rule.name}@{factor}", {"base": rule.params, "stretch": factor})
    return _link(out, [rule.inverse_rule], lambda inv: stretch_rule(inv[0], factor))


def product_rule(rules: Sequence[RuleSpec], name: str = "product") -> RuleSpec:
    """Independent rules side by side on consecutive groups of bits."""
    offsets = list(itertools.accumulate([0] + [r.layers for r in rules]))
    layers = offsets[-1]

    def fn(cell):
        out = []
        for r, off in zip(rules, offsets):
            out.extend(r.evaluate(lambda d, off=off, r=r: cell(d)[off:off + r.layers]))
        return out

    window = (min(r.window[0] for r in rules), max(r.window[1] for r in rules))
    out = RuleSpec(layers, window, fn, name, {"parts": [r.params for r in rules]})
    return _link(out, [r.inverse_rule for r in rules], lambda inv: product_rule(inv, f"{name}^-1"))


# ---------------------------------------------------------------------------
# Block maps
# ---------------------------------------------------------------------------


class BlockMap:
    """A bijection from the words of ``domain`` onto the words of ``codomain``."""

    domain: CellSpace
    codomain: CellSpace

    @property
    def inverse_hint(self) -> "BlockMap | None":
        return None

    def table(self) -> np.ndarray:
        raise NotImplementedError

    def apply(self, words) -> np.ndarray:
        return self.table()[np.asarray(words, dtype=np.int64)]

    def apply_index(self, index: int) -> int:
        return int(self.apply(np.array([index]))[0])

    def __call__(self, word: Word) -> Word:
        if word.space != self.domain:
            raise SpaceMismatch("word does not belong to the map's domain")
        return Word.from_index(self.codomain, self.apply_index(word.index))


class ExplicitMap(BlockMap):
    def __init__(self, domain: CellSpace, codomain: CellSpace, table: np.ndarray, inverse_hint=None):
        self.domain = domain
        self.codomain = codomain
        self._table = np.asarray(table, dtype=np.int64)
        self._table.setflags(write=False)
        self._inverse = inverse_hint
        self._cache: dict = {}

    @property
    def inverse_hint(self):
        return self._inverse

    def table(self) -> np.ndarray:
        return self._table

    def __repr__(self) -> str:
        return f"ExplicitMap({list(self.domain.sites)} -> {list(self.codomain.sites)})"


class RingMap(BlockMap):
    """A translation-invariant map on a ring given by a local rule."""

    def __init__(self, ring: int, rule: RuleSpec):
        if ring < 1:
            raise RingTooSmall("ring must have at least one cell")
        self.ring = ring
        self.rule = rule
        self.domain = self.codomain = ring_space(ring, rule.layers)
        self.origin: dict | None = None  # zoo name and parameters, when built from the zoo
        self._cache: dict = {}

    @property
    def layers(self) -> int:
        return self.rule.layers

    @property
    def inverse_hint(self):
        if self.rule.inverse_rule is None:
            return None
        return RingMap(self.ring, self.rule.inverse_rule)

    def letters_of(self, words) -> np.ndarray:
        L, mask = self.layers, (1 << self.layers) - 1
        if self.domain.total_dim <= 2**62:
            w = np.asarray(words, dtype=np.int64)
            shifts = np.arange(self.ring, dtype=np.int64) * L
            return (w[..., None] >> shifts) & mask
        rows = [[(int(x) >> (L * n)) & mask for n in range(self.ring)] for x in np.atleast_1d(words)]
        return np.array(rows, dtype=np.int64)

    def words_of(self, letters: np.ndarray):
        L = self.layers
        if self.domain.total_dim <= 2**62:
            shifts = np.arange(self.ring, dtype=np.int64) * L
            return (np.asarray(letters, dtype=np.int64) << shifts).sum(axis=-1)
        return [sum(int(x) << (L * n) for n, x in enumerate(row)) for row in letters]

    def apply(self, words) -> np.ndarray:
        words = np.asarray(words, dtype=np.int64)
        out = np.empty_like(words)
        flat, res = words.reshape(-1), out.reshape(-1)
        for start in range(0, flat.size, _CHUNK):
            chunk = flat[start:start + _CHUNK]
            res[start:start + _CHUNK] = self.words_of(self.rule.apply_letters(self.letters_of(chunk)))
        return out

    def apply_index(self, index: int) -> int:
        letters = self.letters_of([int(index)])
        out = self.rule.apply_letters(letters)
        w = self.words_of(out)
        return int(w[0])

    def apply_letters(self, letters: Sequence[int]) -> list:
        return [int(x) for x in self.rule.apply_letters(np.asarray([letters], dtype=np.int64))[0]]

    def table(self) -> np.ndarray:
        if "table" not in self._cache:
            self.domain.require_enumerable(f"tabulating {self.rule.name} on a ring of {self.ring}")
            t = self.apply(np.arange(self.domain.total_dim, dtype=np.int64))
            t.setflags(write=False)
            self._cache["table"] = t
        return self._cache["table"]

    def __repr__(self) -> str:
        return f"RingMap({self.rule.name}, ring={self.ring}, layers={self.layers})"


def make_explicit_map(domain: CellSpace, codomain: CellSpace, table) -> ExplicitMap:
    """Explicit map from a table, verified bijective by enumeration.

    ``table`` may be a sequence of codomain word indices in domain order, or
    a dict sending domain words (index, letter tuple or :class:`Word`) to
    codomain words of the same kinds.
    """
    domain.require_enumerable("building an explicit map")
    n = domain.total_dim
    if isinstance(table, dict):
        arr = np.full(n, -1, dtype=np.int64)
        for k, v in table.items():
            arr[_as_index(domain, k)] = _as_index(codomain, v)
        if np.any(arr < 0):
            missing = int(np.flatnonzero(arr < 0)[0])
            raise ArityMismatch(f"table is undefined on domain word {domain.decode(missing)}")
    else:
        arr = np.asarray([_as_index(codomain, v) for v in table] if _needs_conversion(table) else table,
                         dtype=np.int64)
        if arr.shape != (n,):
            raise ArityMismatch(f"table must have {n} entries, got {arr.size}")
    if codomain.total_dim != n:
        raise NotInjective(f"domain has {n} words but codomain has {codomain.total_dim}")
    if arr.min(initial=0) < 0 or arr.max(initial=0) >= codomain.total_dim:
        raise ArityMismatch("table entry is not a codomain word")
    seen = np.zeros(n, dtype=np.int64)
    np.add.at(seen, arr, 1)
    if np.any(seen > 1):
        hit = int(np.flatnonzero(seen > 1)[0])
        a, b = np.flatnonzero(arr == hit)[:2]
        raise NotInjective(
            f"words {domain.decode(int(a))} and {domain.decode(int(b))} both map to {codomain.decode(hit)}"
        )
    return ExplicitMap(domain, codomain, arr)


def _needs_conversion(table) -> bool:
    if isinstance(table, np.ndarray):
        return False
    return any(not isinstance(v, (int, np.integer)) for v in table)


def _as_index(space: CellSpace, w) -> int:
    if isinstance(w, Word):
        if w.space != space:
            raise ArityMismatch("word belongs to another space")
        return w.index
    if isinstance(w, (tuple, list)):
        return space.encode(w)
    return int(w)


def identity_map(space: CellSpace) -> ExplicitMap:
    space.require_enumerable("building an identity map")
    return ExplicitMap(space, space, np.arange(space.total_dim, dtype=np.int64))


def compose(g: BlockMap, f: BlockMap) -> BlockMap:
    """The map ``v -> g(f(v))``."""
    if f.codomain != g.domain:
        raise SpaceMismatch("codomain of the first map is not the domain of the second")
    if isinstance(f, RingMap) and isinstance(g, RingMap):
        return RingMap(f.ring, compose_rules(g.rule, f.rule))
    return ExplicitMap(f.domain, g.codomain, g.apply(f.table()))


def power(f: BlockMap, n: int) -> BlockMap:
    if n < 1:
        raise ValueError("power needs n >= 1")
    out = f
    for _ in range(n - 1):
        out = compose(f, out)
    return out


def invert(f: BlockMap) -> BlockMap:
    """Inverse map; uses the inverse hint when present."""
    hint = f.inverse_hint
    if hint is not None:
        return hint
    if isinstance(f, ExplicitMap) and "inverse" in f._cache:
        return f._cache["inverse"]
    f.domain.require_enumerable("inverting a map without an inverse rule")
    table = f.table()
    inv = np.empty_like(table)
    inv[table] = np.arange(table.size, dtype=np.int64)
    out = ExplicitMap(f.codomain, f.domain, inv, inverse_hint=f)
    if isinstance(f, ExplicitMap):
        f._cache["inverse"] = out
    return out


def explicit(f: BlockMap) -> ExplicitMap:
    """Tabulated copy of any enumerable map."""
    if isinstance(f, ExplicitMap):
        return f
    return ExplicitMap(f.domain, f.codomain, f.table())


def is_identity(f: BlockMap, samples: int = 4096, seed: int = 0) -> bool:
    """Exhaustive identity test when enumerable, random sampling otherwise."""
    if f.domain != f.codomain:
        return False
    if f.domain.enumerable:
        return bool(np.array_equal(f.table(), np.arange(f.domain.total_dim)))
    if not isinstance(f, RingMap):
        raise DimensionCapExceeded("cannot sample a non-ring map above the cap")
    rng = np.random.default_rng(seed)
    letters = rng.integers(0, 1 << f.layers, size=(samples, f.ring))
    return bool(np.array_equal(f.rule.apply_letters(letters), letters))


def derive_inverse_rule(rule: RuleSpec, probe_ring: int) -> RuleSpec:
    """Inverse local rule read off the inverted permutation of a small ring.

    The window of the inverse is the in-neighbourhood of cell 0 found by
    enumeration on the probe ring, written as an arc around 0; the lookup
    table is read with every cell outside the window set to letter 0.
    """
    from .arcs import arc_of

    m = RingMap(probe_ring, rule)
    inv = invert(explicit(m))
    space = m.domain
    t = inv.table()
    out0 = space.letter(t, 0)
    deps = set()
    for x in range(probe_ring):
        base = np.arange(space.total_dim, dtype=np.int64) - space.letter(np.arange(space.total_dim), x) * space.radix(x)
        if np.any(out0 != space.letter(t[base], 0)):
            deps.add(x)
    arc = arc_of(deps, probe_ring, 0) if deps else (0, 0)
    if arc is None:
        raise NbhdError(f"inverse of {rule.name} does not read an arc on a ring of {probe_ring}")
    lo, hi = arc
    if hi - lo + 1 > probe_ring:
        raise RingTooSmall("probe ring too small for the inverse window")
    a = 1 << rule.layers
    width = hi - lo + 1
    combos = np.arange(a**width, dtype=np.int64)
    words = np.zeros_like(combos)
    for j, d in enumerate(range(lo, hi + 1)):
        letter = (combos // a**j) % a
        words += letter << (rule.layers * (d % probe_ring))
    table = space.letter(t[words], 0)
    inverse = table_rule(rule.layers, (lo, hi), table, f"{rule.name}^-1")
    check = RingMap(probe_ring, compose_rules(inverse, rule))
    if not is_identity(check):
        raise NbhdError("derived inverse rule does not invert the map")
    return inverse
