"""Reduction of noncommutative algebra presentations modulo primes."""

__version__ = "0.1.0"

from .freealg import (GF, QQ, FreeAlgebra, NcPolynomial, PrimeField, RationalField, Residue,
                      StructureError, homogeneous_part, homogenize, is_prime, leading_part,
                      parse_rational, specialize)
from .dvr import (NotIntegralError, PLocalSmithForm, Valuation, normalize_content, p_local_smith,
                  reduce_poly, reduce_scalar, scaled_degree, vp)
from .presentations import (FILTERED, GRADED, GrCheck, HilbertTable, ModeError, Presentation,
                            PresentationError, ZeroDivisorWitness, check_gr_presentation,
                            filtered_dims, hilbert_dims, leading_ideal_presentation, presentation,
                            rees_presentation, specialize_presentation, zero_divisor_scan)
from .reduction import (LiftReport, Obs21Result, ReductionReport, good_reduction_report,
                        lattice_rank, lattice_rank_check, lift_report, obs21_check,
                        obs21_invariants, reduce_presentation, rees_lattice_check,
                        saturation_defect)
from .gwa import (CATALOG, AffineAuto, BadPrimeError, CatalogError, GwaData, GwaElement,
                  PrimeVerdict, UniPoly, bad_prime_detect, gwa_catalog, gwa_commutator_check,
                  gwa_dims, gwa_multiply, gwa_reduce, gwa_to_presentation, gwa_zero_divisor,
                  natural_degree_of_h, sigma_apply)

__all__ = [name for name in dir() if not name.startswith("_")]
