"""Exact verification toolkit for a family of alternating lattice sums.

The package computes, all in exact rational arithmetic:

- sphere sizes of affine Coxeter groups by honest Cayley-graph enumeration,
  with closed-form cross-checks through finite-part length polynomials;
- alternating period series sum_k a_k q_F^k (-1/q_E)^k with q_E = q_F^2,
  their closed forms, geometric tail bounds, and exact value bounds;
- a truncated (q_E+1)-regular tree containing a marked (q_F+1)-regular
  subtree, with harmonic-cocycle verification, a one-dimensional invariant
  solver, layer reconstruction, and a sign character on tree automorphisms;
- brute-force orbit closures of affine-square and inversion moves on the
  complement of a residue field inside its quadratic extension;
- a disk cache, a consolidated check suite, and a CLI (`buildingkit`).
"""

from .cache import cache_get, cache_path, cache_put, cached_growth
from .coxeter import (DEFAULT_ELEMENT_BUDGET, INFINITE_ORDER, CoxeterSystem,
                      GrowthSeries, OmegaElement, build_affine_system,
                      epsilon_of_omega, exponents, growth_coefficients,
                      omega_group, poincare_finite)
from .errors import (BudgetError, FactorizationError, InvalidTypeError,
                     ModelError, ToolkitError)
from .orbits import (FiniteFieldPair, OrbitReport, affine_square_orbits,
                     build_fields, canonical_inversion_data,
                     exists_nonsquare_value, inversion_closure_orbits,
                     verify_fraction_identity)
from .period import (BoundsReport, PeriodResult, check_counting_bound,
                     check_theorem_bounds, evaluate_period, l1_diagnostic,
                     period_closed_form, period_series, sphere_size,
                     tail_bound)
from .suite import CheckResult, SuiteReport, run_suite
from .tree import (EdgeCocycle, HarmonicityReport, InvariantSolution,
                   TreeAutomorphism, TreePair, build_tree_pair,
                   check_tree_invariants, cocycle_to_csv, compose,
                   decay_check, distance_to_F, endpoint_swap, epsilon_tree,
                   identity_automorphism, invariant_solver, iwahori_cocycle,
                   random_automorphism, reconstruct_layer,
                   translation_automorphism, tree_period, verify_harmonic)

__version__ = "0.1.0"
