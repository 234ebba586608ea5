"""Kazhdan-Lusztig cells, Hecke algebra structure constants and the lowest
two-sided cell for Coxeter groups, computed exactly on length-bounded balls."""

from .cells import (
    CellPartition,
    MuGraph,
    OmegaSet,
    cell_partition,
    d_prime,
    decompose,
    gamma_set,
    lowest_cell,
    mu_graph,
    w_i_closure,
)
from .coxeter import ABSENT, INF, CoxeterMatrix, GroupBall, Profile, build_ball, group_profile
from .errors import (
    BallExceeded,
    CacheMismatch,
    CoxHeckeError,
    EmptyLambda,
    MatrixError,
    MissingPrerequisite,
    NoSuchParabolic,
    NotAQPolynomial,
    NotExpressible,
    NotInOmega,
    ResourceLimit,
    UnknownSuite,
)
from .hecke import HeckeVec, f_coeff, max_f_degree, t_mult
from .kl import CProducts, KLTable, a_assign, a_survey, j_table
from .laurent import ETA, XI, BasisExpansion, LaurentPoly, expand_in
from .verify import SuiteReport, Workspace, run_suite

__version__ = "0.1.0"
