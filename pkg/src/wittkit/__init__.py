"""Exact truncated big Witt vectors of non-commutative rings."""

from .bimod import (
    CoefWittRep,
    MatBimodule,
    TensorWord,
    chi_coef,
    coef_ghost,
    contract,
    decompose_pure,
    trace_iso,
    weyl_shift,
)
from .charpoly import SpecialMatrix, chi, hs_trace, morita_map, witt_det
from .errors import (
    ConfigurationError,
    MalformedInputError,
    SizeGuardError,
    TensorUnsupportedError,
    UnsupportedOperationError,
    WittkitError,
)
from .oracle import (
    classical_char_poly,
    enumerate_witt,
    ghost_poly_oracle,
    run_oracle_checks,
)
from .rings import (
    CommPoly,
    FreeAssoc,
    Integers,
    MatrixRing,
    Modular,
    ProductRing,
    Ring,
    ring_make,
    tensor_ring,
    trace_class,
)
from .series import TruncatedSeries, su_inv, t_weighted_derivative, ts_mul
from .witt import (
    GhostVector,
    TruncationSet,
    Verdict,
    WittRep,
    frobenius,
    from_series,
    ghost,
    neutral,
    restrict,
    star,
    teichmuller,
    to_series,
    verschiebung,
    witt_add,
    witt_equals,
    witt_neg,
    witt_sub,
)

__all__ = [
    "CoefWittRep",
    "MatBimodule",
    "TensorWord",
    "chi_coef",
    "coef_ghost",
    "contract",
    "decompose_pure",
    "trace_iso",
    "weyl_shift",
    "SpecialMatrix",
    "chi",
    "hs_trace",
    "morita_map",
    "witt_det",
    "ConfigurationError",
    "MalformedInputError",
    "SizeGuardError",
    "TensorUnsupportedError",
    "UnsupportedOperationError",
    "WittkitError",
    "classical_char_poly",
    "enumerate_witt",
    "ghost_poly_oracle",
    "run_oracle_checks",
    "CommPoly",
    "FreeAssoc",
    "Integers",
    "MatrixRing",
    "Modular",
    "ProductRing",
    "Ring",
    "ring_make",
    "tensor_ring",
    "trace_class",
    "TruncatedSeries",
    "su_inv",
    "t_weighted_derivative",
    "ts_mul",
    "GhostVector",
    "TruncationSet",
    "Verdict",
    "WittRep",
    "frobenius",
    "from_series",
    "ghost",
    "neutral",
    "restrict",
    "star",
    "teichmuller",
    "to_series",
    "verschiebung",
    "witt_add",
    "witt_equals",
    "witt_neg",
    "witt_sub",
]

__version__ = "0.1.0"
