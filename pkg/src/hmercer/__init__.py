"""Numerical certification of Mercer-type inequalities for h-convex functions."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    ArityError,
    ConfigError,
    DomainError,
    ExprSyntaxError,
    HMercerError,
    NonNegativityError,
    UnknownIdentifier,
)
from .expr import Expression, evaluate, parse, to_source  # noqa: E402
from .hclass import (  # noqa: E402
    CheckVerdict,
    HFamily,
    Tolerance,
    certify,
    check_h_convex,
    check_lemma_condition,
    check_submultiplicative,
    check_supermultiplicative,
    check_weight_condition,
)
from .ineq import (  # noqa: E402
    InequalityReport,
    converse_jensen,
    jensen_h,
    lemma_pointwise,
    mercer_classical,
    mercer_h,
    triangle_refinement,
)
from .objective import ObjectiveSpec  # noqa: E402
from .search import SearchConfig, SearchResult, brute_force_oracle, search_max_violation  # noqa: E402
from .sequences import SampleSequence, WeightVector  # noqa: E402
