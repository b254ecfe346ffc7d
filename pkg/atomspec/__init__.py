from .errors import (
    AtomSpecError,
    CapabilityError,
    CompositionError,
    NonAdmissibleRelationError,
    ParseError,
    RejectionError,
    ResourceError,
    UsageError,
)
from .models import Membership, OracleLimits, Status, Verdict, VerificationReport
from .rings import BaseRing, PrimePoint, SpecSubset, SpectrumModel, is_open, parse_ring, spectrum_of
from .quiver import Arrow, Path, Quiver, compose, enumerate_paths, is_acyclic, parse_quiver, render_source
from .algebra import AlgebraElement, Relation, is_admissible, load_bound_quiver
from .ideal import IdealHandle, arrow_power_contained, is_right_rooted
from .spectrum import (
    AtomPoint,
    AtomSpectrum,
    ComonoformIdeal,
    atom_spectrum,
    comonoform_ideal,
    emit,
    is_open_atoms,
    order_pairs,
    special_presentation,
    verify_ideal_generators,
)
from .oracle import FiniteRep, check_relations, is_monoform, verify_theorem_a
from .triangular import Bimodule, CommaObject, TriangularRing, triangular_spectrum
from .cli import RunConfig, build_parser, run
