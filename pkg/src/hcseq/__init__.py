"""Admissible higher-commutator operation sequences on finite lattices."""

from .axioms import AdmissibilityReport, check_admissible, is_admissible
from .enumeration import (
    Classification,
    InfiniteFamily,
    PosetReport,
    brute_force_oracle,
    classify,
    derived_cap,
    enumerate_nonsplitting,
    family_member,
    infinite_family,
    pointwise_leq,
    sequence_poset,
)
from .errors import HcseqError
from .lattice import (
    Decomposition,
    Lattice,
    SplittingPair,
    atoms,
    build_lattice,
    catalog,
    coatoms,
    decompose,
    interval,
    is_isomorphic,
    is_modular,
    product,
    splits_strongly,
    splitting_pairs,
)
from .sequences import (
    SequencePresentation,
    TruncatedTable,
    b2_sequences,
    leq_sequences,
    lower_central_series,
    product_sequence,
    vanishing_arity,
    zero_sequence,
)
from .upsets import UpwardClosedSet

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
