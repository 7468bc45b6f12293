"""Density of everywhere-locally-soluble diagonal quadric fibers over the
split quadric surface y0*y1 = y2*y3."""

from .arithmetic import (Factorization, SpfTable, SquarefreeCore, build_spf_table, factorize,
                         is_perfect_square, is_squarefree, legendre_symbol, p_adic_valuation,
                         squarefree_core)
from .counting import CountLedger, RunConfig, count_nloc
from .delta import ComponentAction, FibrationData, delta_fiber, delta_total, preset
from .solubility import (REAL, DiagonalForm, FinitePlace, RealPlace, SolubilityReport,
                         hasse_invariant, hilbert_symbol, is_isotropic,
                         is_locally_soluble_everywhere, oracle_isotropic_mod_pk)
from .surface import SurfacePoint, TParam, enumerate_points, param_to_point, point_to_param

__version__ = "0.1.0"
