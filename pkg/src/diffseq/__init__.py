"""Difference sequences: Newton's nth-difference identity, derivative estimates
with remainder bounds, and certified scans of two-term Diophantine branches."""

from .diffseq_core import (DifferenceTable, Polynomial, binomial_nth_difference,
                           difference_table, polynomial_table, verify_newton_theorem)
from .derivative_estimator import (SampleGrid, convergence_study, estimate_nth_derivative,
                                   remainder_bound, sample_grid)
from .diophantine_branch import (Branch, BranchPoint, brute_force_solutions, branch_point,
                                 certify_step_bounds, certify_step_monotone,
                                 conditional_gap_bound, fermat_y_bound, frac_accumulation,
                                 gap_audit, min_gap, step, step_asymptote, step_limit,
                                 verify_branch_identity)
from .exact_arith import (RealInterval, Verdict, compare, fractional_part_interval,
                          integer_nth_root, nth_root_interval)

__version__ = "0.1.0"
