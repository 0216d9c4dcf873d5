"""Exact tensor-decomposition calculus for cyclic and abelian p-groups."""

from .errors import CapExceededError, HypothesisError, UnsupportedCaseError
from .falgebra import (
    GridFunction,
    alpha,
    embed,
    expand_in_basis,
    f_norm,
    induction_image,
    is_in_Fplus,
    kernel_D,
    restrict_R,
    star,
    star_power,
)
from .forms import (
    B_int,
    D_int,
    FormSpec,
    check_lemma_linear_part,
    decompose,
    gamma_product,
    multilinear_apply,
    tensor_form,
)
from .kobjects import (
    GammaElement,
    LengthFunction,
    gamma_dim,
    gamma_norm,
    induce,
    inflate,
    is_valid_length,
    length_of,
    multiplicities_from_length,
    restrict,
)
from .modp import (
    DenseMatrixModP,
    MonomialQuotientAlgebra,
    PrimeModulus,
    SparsePolynomial,
    corank_powers,
    matrix_rank,
    mult_operator,
    quotient_dim,
)
from .syzygies import (
    AsymptoticProfile,
    GroupShape,
    ModuleSpec,
    StableClass,
    abs_moment_normal,
    asymptotic_profile,
    betti,
    class_product,
    convergence_report,
    core_dims,
    gamma_trunc,
    moments,
    projective_excess,
    recurrence_order,
    socle_core_dims,
    socle_dim,
    syzygy_dim,
)

__version__ = "0.1.0"
