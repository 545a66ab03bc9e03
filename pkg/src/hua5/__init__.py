"""Desk-scale verification toolkit for sums of five prime squares."""

from .arith import (Factorization, InvalidArgument, NotCubeFree, RationalApproximation,
                    jacobi_symbol, rational_approx, smoothness_classify, squarefree_split)
from .conditions import (ConditionReport, check_mean, check_pseudorandom, check_regularity,
                         check_restriction)
from .gauss import (GaussDecomposition, build_gauss_decomposition, gauss_sum_closed,
                    gauss_sum_direct, jacobi_invariance_check, s_q_sum)
from .hua import HuaReport, verify_hua
from .report import emit_report
from .residues import (WContext, build_w_context, decompose_target, quadratic_residues,
                       sumset_cover_check)
from .sieve import SieveSystem, WeightedSequence, build_sequences, selberg_weights, t_sum
from .spectral import (ArcPartition, SpectrumGrid, classify_arc, dft_grid, f_twisted,
                       lq_norm, weyl_sum)
from .transference import (BohrData, bohr_spectrum, count_weighted_solutions,
                           smooth_decompose)

__version__ = "0.1.0"
