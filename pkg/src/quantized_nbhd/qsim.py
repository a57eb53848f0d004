"""Dense state-vector simulation of permutation unitaries.

``Q(f)`` is the permutation matrix ``|v> -> |f(v)>`` with every phase set
to +1. This is enough to run the entanglement-assisted signaling protocol:
Alice flips the sign of one branch of ``(|v> + |w>)/sqrt 2`` locally, the
automaton runs, and Bob tells the two outcomes apart on his own cell.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .arcs import ring_distance
from .core import (
    BlockMap,
    CellSpace,
    DimensionCapExceeded,
    NbhdError,
    SpaceMismatch,
    Word,
    explicit,
    invert,
    power,
)
from .nbhd import in_nbhd

QSIM_CAP = 2**20
NORM_TOL = 1e-12
ORTHOGONAL_TOL = 1e-12


class ProtocolPreconditionFailed(NbhdError):
    def __init__(self, message: str, site=None):
        super().__init__(message)
        self.site = site


def _require_small(space: CellSpace) -> None:
    if space.total_dim > QSIM_CAP:
        raise DimensionCapExceeded(f"state space of {space.total_dim} words exceeds the simulation cap {QSIM_CAP}")


@dataclass(frozen=True, eq=False)
class StateVector:
    space: CellSpace
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        _require_small(self.space)
        amps = np.asarray(self.amplitudes, dtype=np.complex128)
        if amps.shape != (self.space.total_dim,):
            raise ValueError(f"expected {self.space.total_dim} amplitudes, got shape {amps.shape}")
        norm = float(np.vdot(amps, amps).real)
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state is not normalized (squared norm {norm})")
        amps = amps.copy()
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def basis(cls, space: CellSpace, word) -> "StateVector":
        _require_small(space)
        amps = np.zeros(space.total_dim, dtype=np.complex128)
        amps[_index(space, word)] = 1.0
        return cls(space, amps)

    @classmethod
    def superposition(cls, space: CellSpace, terms: dict) -> "StateVector":
        """Normalized sum of ``coefficient * |word>`` over ``terms``."""
        _require_small(space)
        amps = np.zeros(space.total_dim, dtype=np.complex128)
        for word, c in terms.items():
            amps[_index(space, word)] += c
        norm = np.linalg.norm(amps)
        if norm == 0:
            raise ValueError("superposition is zero")
        return cls(space, amps / norm)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def inner(self, other: "StateVector") -> complex:
        if other.space != self.space:
            raise SpaceMismatch("states live in different spaces")
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def support(self) -> np.ndarray:
        return np.flatnonzero(np.abs(self.amplitudes) > 0)


def _index(space: CellSpace, word) -> int:
    if isinstance(word, Word):
        if word.space != space:
            raise SpaceMismatch("word belongs to another space")
        return word.index
    if isinstance(word, (tuple, list)):
        return space.encode(word)
    return int(word)


def overlap(a: StateVector, b: StateVector) -> float:
    return abs(a.inner(b))


def apply_perm_unitary(f: BlockMap, s: StateVector) -> StateVector:
    """``Q(f) s``: the amplitude of ``|v>`` moves to ``|f(v)>``."""
    if s.space != f.domain:
        raise SpaceMismatch("state does not live on the map's domain")
    _require_small(f.codomain)
    out = np.zeros(f.codomain.total_dim, dtype=np.complex128)
    out[f.table()] = s.amplitudes
    return StateVector(f.codomain, out)


def local_phase(s: StateVector, site, selected_letter: int) -> StateVector:
    """Multiply by -1 the amplitude of every word with ``selected_letter`` at ``site``."""
    s.space.position(site)
    if not 0 <= selected_letter < s.space.size(site):
        raise ValueError(f"letter {selected_letter} outside the alphabet of site {site!r}")
    hit = s.space.letter(np.arange(s.space.total_dim, dtype=np.int64), site) == selected_letter
    return StateVector(s.space, np.where(hit, -s.amplitudes, s.amplitudes))


def factor_check(s: StateVector, region):
    """Split ``s`` as ``|u> (x) |local>`` with ``u`` a fixed word off ``region``.

    Returns ``(u, local)`` where ``u`` is a :class:`Word` on the complement and
    ``local`` a :class:`StateVector` on the region, or None if the nonzero
    amplitudes do not share one outside restriction.
    """
    space = s.space
    region = frozenset(region.members if hasattr(region, "members") else region)
    for x in region:
        space.position(x)
    outside = [x for x in space.sites if x not in region]
    inside = [x for x in space.sites if x in region]
    supp = s.support()
    key_out = space.key(supp, outside)
    if np.any(key_out != key_out[0]):
        return None
    out_space = space.subspace(outside)
    in_space = space.subspace(inside)
    u = Word(out_space, tuple(int(space.letter(int(supp[0]), x)) for x in outside))
    local = np.zeros(in_space.total_dim, dtype=np.complex128)
    local[space.key(supp, inside)] = s.amplitudes[supp]
    return u, StateVector(in_space, local / np.linalg.norm(local))


@dataclass
class SignalReport:
    automaton: str
    params: dict
    alice_site: object
    bob_site: object
    distance: int | None
    steps: int
    overlap: float
    classical_possible: bool
    factorizes: bool
    classical_nbhd: list

    @property
    def distinguishable(self) -> bool:
        return self.overlap < ORTHOGONAL_TOL

    @property
    def beats_classical(self) -> bool:
        return self.distinguishable and not self.classical_possible

    def to_json(self) -> dict:
        return {
            "automaton": self.automaton,
            "params": self.params,
            "alice_site": self.alice_site,
            "bob_site": self.bob_site,
            "distance": self.distance,
            "steps": self.steps,
            "overlap": self.overlap,
            "distinguishable": self.distinguishable,
            "classical_possible": self.classical_possible,
            "classical_nbhd_of_bob": self.classical_nbhd,
            "factorizes_at_bob": self.factorizes,
        }


def signaling_demo(
    automaton: BlockMap,
    v,
    w,
    alice_site,
    bob_site,
    steps: int = 1,
    name: str | None = None,
    params: dict | None = None,
) -> SignalReport:
    """Run the one-bit signaling protocol from Alice's site to Bob's.

    Requires ``v`` and ``w`` to differ at ``alice_site`` and their images
    after ``steps`` applications to agree everywhere except ``bob_site``.
    """
    if steps < 1:
        raise ValueError("steps must be positive")
    X = automaton.domain
    if automaton.codomain != X:
        raise SpaceMismatch("signaling needs a map from a space to itself")
    vi, wi = _index(X, v), _index(X, w)
    if X.letter(vi, alice_site) == X.letter(wi, alice_site):
        raise ProtocolPreconditionFailed(f"v and w agree at Alice's site {alice_site!r}", alice_site)
    f = explicit(power(automaton, steps)) if steps > 1 else explicit(automaton)
    fv, fw = f.apply_index(vi), f.apply_index(wi)
    for s in X.sites:
        if s != bob_site and X.letter(fv, s) != X.letter(fw, s):
            raise ProtocolPreconditionFailed(f"evolved words differ at {s!r}, outside Bob's site", s)
    psi_plus = StateVector.superposition(X, {vi: 1.0, wi: 1.0})
    psi_minus = local_phase(psi_plus, alice_site, int(X.letter(wi, alice_site)))
    phi_plus = apply_perm_unitary(f, psi_plus)
    phi_minus = apply_perm_unitary(f, psi_minus)
    fp, fm = factor_check(phi_plus, {bob_site}), factor_check(phi_minus, {bob_site})
    factorizes = fp is not None and fm is not None and fp[0] == fm[0]
    if factorizes:
        ov = overlap(fp[1], fm[1])
    else:
        ov = overlap(phi_plus, phi_minus)
    cone = in_nbhd(f, bob_site)
    distance = ring_distance(alice_site, bob_site, X.ring) if X.ring is not None else None
    return SignalReport(
        automaton=name or repr(automaton),
        params=dict(params or {}),
        alice_site=alice_site,
        bob_site=bob_site,
        distance=distance,
        steps=steps,
        overlap=float(ov),
        classical_possible=alice_site in cone,
        factorizes=factorizes,
        classical_nbhd=cone.sorted(),
    )


def find_signal_pair(automaton: BlockMap, alice_site, bob_site, steps: int = 1):
    """First pair ``(v, w)`` usable by :func:`signaling_demo`, or None.

    Scans every ``z`` and every other letter at Bob's site: ``v, w`` are the
    preimages of ``z`` and of ``z`` with that letter changed.
    """
    f = explicit(power(automaton, steps)) if steps > 1 else explicit(automaton)
    g = invert(f)
    Y = f.codomain
    Y.require_enumerable("searching for a signaling pair")
    z = Y.words()
    r, a = Y.radix(bob_site), Y.size(bob_site)
    base = z - Y.letter(z, bob_site) * r
    ginv = g.table()
    for delta in range(1, a):
        z2 = base + ((Y.letter(z, bob_site) + delta) % a) * r
        v, w = ginv[z], ginv[z2]
        hit = np.flatnonzero(f.domain.letter(v, alice_site) != f.domain.letter(w, alice_site))
        if hit.size:
            i = int(hit[0])
            return int(v[i]), int(w[i])
    return None
