"""Polynomial isometry and normality certification for complex matrices."""

from .certify import (INCONCLUSIVE, NORMAL, NOT_ISOMETRIC, IsometryReport,
                      NormalityCertificate, TolProfile, certify_constant_free,
                      certify_normality, example_502, isometry_defect,
                      projection_idempotent_pair, projection_lemma_check)
from .gauge import GaugeSpec, comparison_lemma_gap, gauge_eval, weakly_majorizes
from .linalg import (EigenData, eigen_clustered, rank_with_tolerance,
                     riesz_projection, singular_values)
from .norms import (NormHandle, cp_norm, cp_sandwich_check, ky_fan, operator_norm, schatten,
                    separates_rank, ui_norm)
from .polycalc import (Polynomial, lagrange_basis, minimal_polynomial,
                       poly_eval_matrix, random_polynomial, reconstruction_poly)
from .spectral_sets import (CompactSetGrid, CounterexampleSpec, Frame,
                            build_counterexample, is_lavrentieff,
                            polynomial_hull, verify_counterexample)

__version__ = '0.1.0'
