"""p-adic period lattices of genus-2 Mumford curves.

Theta-series evaluation and inversion of the period map, Igusa-Clebsch
invariant reconstruction over number fields, isogeny testing of period
lattices, and p-adic L-invariants.
"""

from .errors import PadicError
from .padic import (HALF, PadicElement, PadicPoly, TowerContext, iwasawa_log,
                    newton_solve, nth_root, nth_roots, poly_roots,
                    sqrt_in_tower, teichmueller)
from .numfield import (Embedding, NFElement, NumberField, build_embedding,
                       integer_relation, lll_reduce, recognize)
from .mumford import (FundamentalPeriods, HalfPeriods, NormalizedSextic,
                      PeriodMatrix, curve_periods, halfperiods_from_periods,
                      halfperiods_from_xcoords, label_and_normalize,
                      matrix_from_periods, periods_from_matrix,
                      sextic_from_model, theta_all, xcoords_from_halfperiods)
from .igusa import (AbsoluteInvariants, IgusaClebsch, absolute_invariants,
                    discriminant_search, igusa_clebsch,
                    invariants_from_halfperiods, weighted_projective_equal)
from .isogeny import (KadzielaResult, PadicLattice, RecoveredLattice,
                      kadziela_check, kadziela_find, mat_power_left,
                      mat_power_right, recover_curve_lattice,
                      solve_isogenous_lattice)
from .linvariant import HeckeAction, LInvariant, l_invariant, pairing_matrices

__version__ = "1.0.0"

__all__ = [
    "HALF", "PadicError", "PadicElement", "PadicPoly", "TowerContext",
    "iwasawa_log", "newton_solve", "nth_root", "nth_roots", "poly_roots",
    "sqrt_in_tower", "teichmueller",
    "Embedding", "NFElement", "NumberField", "build_embedding",
    "integer_relation", "lll_reduce", "recognize",
    "FundamentalPeriods", "HalfPeriods", "NormalizedSextic", "PeriodMatrix",
    "curve_periods", "halfperiods_from_periods", "halfperiods_from_xcoords",
    "label_and_normalize", "matrix_from_periods", "periods_from_matrix",
    "sextic_from_model", "theta_all", "xcoords_from_halfperiods",
    "AbsoluteInvariants", "IgusaClebsch", "absolute_invariants",
    "discriminant_search", "igusa_clebsch", "invariants_from_halfperiods",
    "weighted_projective_equal",
    "KadzielaResult", "PadicLattice", "RecoveredLattice", "kadziela_check",
    "kadziela_find", "mat_power_left", "mat_power_right",
    "recover_curve_lattice", "solve_isogenous_lattice",
    "HeckeAction", "LInvariant", "l_invariant", "pairing_matrices",
    "__version__",
]
