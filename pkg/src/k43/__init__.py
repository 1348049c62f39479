"""Two- and three-term relation algebra for the Saalschutzian 4F3(1) combination K.

The central object is the entire function K(a;b,c,d;e,f,g) on the
hyperplane e+f+g-a-b-c-d = 1, built from two regularized unit-argument
4F3 series.  The package provides:

- exact construction of the invariance group (isomorphic to S6) and its
  W(D6) extension, with the 32 coset representatives and their 6-bit
  labels (`cosets`, `coxeter`, `exactlin`);
- arbitrary-precision evaluation of K by series summation with fitted
  tail completion (`series`) and, independently, by Mellin-Barnes
  contour quadrature (`barnes`);
- the symbolic three-term relation engine: five canonical relations,
  transport to any of the 4960 coset triples, and numerical
  verification certificates (`relations`);
- deterministic generic-point sampling (`sampling`) and a batch CLI
  (`k43 ...`, see `cli`).
"""

from .cosets import CosetRep, GroupTables, build_tables, coset_representatives, iota
from .errors import (
    ContourError,
    ConvergenceError,
    DegeneratePointError,
    DistanceMismatchError,
    GroupOrderExceededError,
    IllegalTypeError,
    K43Error,
    NotInGroupError,
    NumericError,
    ParityError,
    PoleError,
    SingularMatrixError,
)
from .exactlin import AffineLinearForm, ExactMatrix7, enumerate_group, mat_inverse, mat_mul
from .relations import (
    CoefficientExpr,
    CoeffMonomial,
    KEvaluator,
    RelationCertificate,
    build_relation,
    canonical_relation,
    verify_relation,
)
from .series import SeriesResult, f43_star, gauss_f21, k_function, pfq_unit
from .barnes import k_integral
from .sf import gamma, pochhammer, precision, recip_gamma, sin_pi

__version__ = "0.1.0"
