"""diolab: desk-scale computations in metric Diophantine approximation.

Exact scalar arithmetic (rationals, quadratic surds, error-tracked
decimals), continued fractions, weighted Dirichlet searches, counting
functions with proved two-sided bounds, small-dimension geometry of
numbers, seeded Monte Carlo measure estimation, box-counting dimension,
and the classical square-free counterexample construction.
"""

from .errors import (
    DimensionTooLarge,
    DiolabError,
    EmptyRange,
    NonMonotonePsi,
    PrecisionExhausted,
    PrimeCapExceeded,
    SearchBoundExceeded,
    SingularBasis,
)
from .scalars import (
    Dec,
    Scalar,
    Surd,
    WeightVector,
    as_scalar,
    make_surd,
    nearest_integer_distance,
    scalar_pow,
    scmp,
    sqrt_of,
    to_dec,
)
from .psifuncs import (
    ApproxFunction,
    LogPower,
    Power,
    PsiK,
    Restricted,
    ScaledPower,
    Table,
    Verdict,
    classify_series,
    condensation_check,
    eval_psi,
    parse_psi,
    parse_scalar_spec,
    series_partial_sum,
)

__version__ = "0.1.0"
