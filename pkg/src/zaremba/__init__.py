"""Bounded-partial-quotient continued fractions as matrix semigroup orbits.

Denominator sets and multiplicities, local obstructions mod q, averaged
Ramanujan sums and singular series, transfer-operator Hausdorff dimension,
and a desk-scale circle-method harness, with a CLI in zaremba.cli.
"""

from .cf_core import (Alphabet, EigenData, Mat2, Word, canonicalize,
                      complement_expansion, eigen, expand, matrix_of_word,
                      parity_mate, reconstruct, to_even_length, word_of_matrix)
from .orbit import (DET_ALL, DET_PLUS_ONE, MultiplicityIndex, OrbitBall,
                    ball_count, denominators, density_point, density_report,
                    enumerate_ball, orbit_decomposition_check, sector_count)
from .modular import (AdmissibilityCertificate, ObstructionReport, ResidueTable,
                      admissible_residues, closure_mod_q, find_bad_modulus,
                      is_admissible, k_star, sl2_order)
from .arith import (SingularSeriesValue, averaged_Cq, averaged_Cq_closed_form,
                    ramanujan_sum, robin_bound_check, singular_series)
from .dimension import (DimensionEstimate, dimension, dimension_ordering_check,
                        hensley_asymptotic, transfer_eigenvalue)
from .construction import (ProductSet, Schedule, SectorSet, build_schedule,
                           build_sector_set, concat_product, locate_index)
from .circle import (ArcPartition, DecompositionResult, MajorArcConfig,
                     arc_partition, decompose, exponential_sum, main_term,
                     representation_counts, test_functions)
from .primroot import (HeightRecord, complement_primitivity_check,
                       fraction_height, is_primitive_root, search_height_bounded)

__version__ = "0.1.0"
