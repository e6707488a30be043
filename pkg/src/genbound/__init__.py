"""Generation of finite-dimensional multialgebras: closure, counting, bounds."""
from .errors import BudgetExceeded, UsageError
from .fields import QQ, Field, embedding, extension_of, field_from_params, make_extension, prime_field
from .linalg import Subspace, batched_rref, inverse, nullspace, rank, row_reduce, span_insert, transpose
from .algebra import (AlgebraSpec, MultiOp, base_change, eval_op, load_algebra, matrix, matrix_involution,
                      preset, save_algebra, split_etale, split_octonion, validate, zero_module)
from .generation import (ClosureResult, NmaxResult, closure_batch, find_sextonion, generates,
                         generates_batch, min_generators_exhaustive, min_generators_randomized, nmax,
                         subalgebra_closure, unital_gap)
from .grassmann import gaussian_binomial, grassmannian
from .strata import (StratumQuery, YSliceSpec, build_Y_point, count_Y_incidence, default_Y_spec, in_T2,
                     in_X_i, intersect_Y_X1, rank_stratum_count)
from .counting import (CodimEstimate, CountResult, MCResult, codim_exact_slope, codim_from_mc,
                       count_exhaustive, monte_carlo)
from .bounds import (BoundQuery, BoundResult, azumaya_lower, azumaya_lower_s2, azumaya_upper, codim_formula,
                     cor_azumaya, forster, involution_bound, main2, main3_lower, min_r_for_d, octonion_upper)

__version__ = "0.1.0"
