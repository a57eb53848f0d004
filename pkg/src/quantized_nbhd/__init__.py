"""Classical and quantum dependency neighbourhoods of reversible maps."""

from .core import (
    BlockMap,
    CellSpace,
    ExplicitMap,
    NbhdError,
    RingMap,
    SiteSet,
    Word,
    compose,
    explicit,
    invert,
    make_cellspace,
    make_explicit_map,
    power,
    ring_space,
)
from .nbhd import NbhdScheme, classical_schemes, in_nbhd, in_scheme, out_nbhd, out_scheme
from .qnbhd import (
    BoundReport,
    composition_bound,
    duality_check,
    iterate_bound,
    q_oracle,
    quantum_in_nbhd,
    quantum_localized,
    quantum_scheme,
    simple_bound,
)
from .qsim import StateVector, signaling_demo

__all__ = [
    "BlockMap",
    "BoundReport",
    "CellSpace",
    "ExplicitMap",
    "NbhdError",
    "NbhdScheme",
    "RingMap",
    "SiteSet",
    "StateVector",
    "Word",
    "classical_schemes",
    "compose",
    "composition_bound",
    "duality_check",
    "explicit",
    "in_nbhd",
    "in_scheme",
    "invert",
    "iterate_bound",
    "make_cellspace",
    "make_explicit_map",
    "out_nbhd",
    "out_scheme",
    "power",
    "q_oracle",
    "quantum_in_nbhd",
    "quantum_localized",
    "quantum_scheme",
    "ring_space",
    "signaling_demo",
    "simple_bound",
]
