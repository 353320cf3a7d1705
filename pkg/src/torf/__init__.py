"""Exact arithmetic for toric face rings.

Monoidal complexes over integer lattices, their semi- and weak
normalizations, the classification by face-indexed sublattice families, and
Betti numbers of the associated affine varieties via h-differential forms.
All computations are carried out over the integers and rationals; there is
no floating point anywhere.
"""

from .errors import TorfError
from .linalg import IntMatrix, Sublattice
from .cones import Cone, Fan, cone_from_generators, cone_from_h, faces, fan_validate
from .monoids import (
    AffineMonoid,
    Characteristic,
    StratifiedMonoid,
    from_strata,
    is_seminormal,
    is_weakly_normal,
    member,
    relative_sn,
    relative_wn,
    saturation,
    seminormalization,
    stratify,
    weak_normalization,
)
from .complexes import (
    MonoidalComplex,
    RingElem,
    classify,
    complex_from_lattice_family,
    complex_from_monoid_subfan,
    complex_validate,
    full_complex,
    germ_at,
    ring_mult,
    sn_complex,
    support_locate,
    wn_complex,
)
from .derham import BettiTable, GradedForm, betti, differential, fiber_complex

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
