"""Desk-scale verification of orbit theorems for linear groups on V + V and
of the inequality |G : O_{pi'pi}(G)|_pi <= b(H)^2 for Hall pi-subgroups H.

The building blocks are exact: finite fields, Schreier-Sims permutation
groups, matrix groups over several fields acting on integer-encoded vectors,
pi-cores and Hall subgroups, and character degrees by Dixon's method.
"""
from .characters import DegreeMultiset, DixonError, b_of, character_degrees
from .config import CapExceeded, caps, load_config, reset_caps, set_caps
from .finite_field import FieldElement, FieldSpec, canonical_polynomial, make_field, parse_field
from .harness import (
    CorpusEntry,
    RunConfig,
    VerificationRecord,
    load_corpus,
    run_all,
    verify_main_inequality,
)
from .linear import (
    GL,
    SL,
    Gamma,
    HypothesisReport,
    MatrixGroup,
    ModuleSpace,
    Vector,
    check_hypotheses,
    direct_sum,
    socle_and_complete_reducibility,
)
from .orbits import (
    OrbitReport,
    fd_scan,
    gamma_direct_check,
    pair_exists,
    qualifying_orbits,
    regular_orbit_small_centralizer,
)
from .perm import Permutation, parse_cycles
from .permgroup import PermGroup, direct_product
from .pisets import PiSet, pi_part
from .radicals import NotPiSeparable, hall_subgroup, o_pi, o_pi_prime, o_pi_prime_pi

__version__ = "0.1.0"

__all__ = [
    "CapExceeded",
    "CorpusEntry",
    "DegreeMultiset",
    "DixonError",
    "FieldElement",
    "FieldSpec",
    "GL",
    "Gamma",
    "HypothesisReport",
    "MatrixGroup",
    "ModuleSpace",
    "NotPiSeparable",
    "OrbitReport",
    "PermGroup",
    "Permutation",
    "PiSet",
    "RunConfig",
    "SL",
    "Vector",
    "VerificationRecord",
    "b_of",
    "canonical_polynomial",
    "caps",
    "character_degrees",
    "check_hypotheses",
    "direct_product",
    "direct_sum",
    "fd_scan",
    "gamma_direct_check",
    "hall_subgroup",
    "load_config",
    "load_corpus",
    "make_field",
    "o_pi",
    "o_pi_prime",
    "o_pi_prime_pi",
    "pair_exists",
    "parse_cycles",
    "parse_field",
    "pi_part",
    "qualifying_orbits",
    "regular_orbit_small_centralizer",
    "reset_caps",
    "run_all",
    "set_caps",
    "socle_and_complete_reducibility",
    "verify_main_inequality",
]
