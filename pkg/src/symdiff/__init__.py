"""Exact power-series toolkit for closed symmetric 2-differentials on a surface chart."""

from .coeff import Coeff
from .classify import Classification, SeparatedDensity, classify_point, separate_log_density
from .curves import CurveDivisor, count_representations, enumerate_splittings
from .errors import *  # noqa: F401,F403
from .expr import Document, expand_expr_at, parse_document, parse_expr
from .jets import JetDimQuery, JetDimReport, jacobian_rank_closed_locus, jet_dims
from .laurent import LaurentLog1
from .series import DEFAULT_ORDER, Series1, Series2, ps_compose, ps_exp, ps_inv, ps_log, ps_shift, ps_sqrt
from .surface import (
    ExactDecomposition,
    OneForm2,
    SymDiff2,
    WebChart,
    brioschi_R,
    det_w,
    disc_w,
    exact_decomposition,
    first_integral,
    flatten_to_web,
    is_closed,
    p2,
    rank_of,
    split_local,
)

__version__ = "0.1.0"
