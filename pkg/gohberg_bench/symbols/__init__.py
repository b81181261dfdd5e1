from .filters import (
    CoronaFilter,
    InvarianceReport,
    cone_corona,
    custom,
    full_corona,
    intersection,
    union,
)
from .gallery import gallery
from .symbol import DualFunction, SpaceFunction, Symbol
from .tools import (
    OSC,
    D_omega,
    LevelSequence,
    OscillationReport,
    column_sup,
    d_omega,
    in_ideal,
    is_compact_symbol,
    osc,
    osc_max,
    vo_diagnostic,
)

__all__ = [
    "CoronaFilter",
    "D_omega",
    "DualFunction",
    "InvarianceReport",
    "LevelSequence",
    "OSC",
    "OscillationReport",
    "SpaceFunction",
    "Symbol",
    "column_sup",
    "cone_corona",
    "custom",
    "d_omega",
    "full_corona",
    "gallery",
    "in_ideal",
    "intersection",
    "is_compact_symbol",
    "osc",
    "osc_max",
    "union",
    "vo_diagnostic",
]
