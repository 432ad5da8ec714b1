"""Exact truncated q-series for level-l toric I-functions and mock theta identities."""

from .catalog import list_identities, lookup, mock_theta, registry, verify_identity
from .errors import (
    ConvergenceError,
    DegreeError,
    FieldMismatchError,
    PoleError,
    QLevelsError,
    SchemaError,
    UnmappedSymbolError,
)
from .exactnum import CycloNum, embed, zeta
from .iseries import ChargeModel, PrefixConvention, det_modify, i_function, i_term, q_hypergeometric
from .qlaurent import QSeries, qs_pochhammer
from .symfactor import BinomFactor, DegreeTerm, ParamMonomial, Specialization, min_q_order, specialize_term

__version__ = "0.1.0"
