from .approximants import (
    Approximant,
    TruncatedSVD,
    cutoff_approximant,
    cutoff_symbol,
    ideal_approximants,
    svd_approximants,
    tail_symbol,
)
from .sandwich import (
    LevelReport,
    Localisation,
    LowerBoundResult,
    SandwichConfig,
    SandwichReport,
    localise,
    lower_bound_estimate,
    right_sandwich,
    sandwich,
)
from .tools import (
    DecaySequence,
    TestVectorFamily,
    frozen_symbol,
    ideal_decay_check,
    make_test_vectors,
    symbol_freeze_check,
)

__all__ = [
    "Approximant",
    "DecaySequence",
    "LevelReport",
    "Localisation",
    "LowerBoundResult",
    "SandwichConfig",
    "SandwichReport",
    "TestVectorFamily",
    "TruncatedSVD",
    "cutoff_approximant",
    "cutoff_symbol",
    "frozen_symbol",
    "ideal_approximants",
    "ideal_decay_check",
    "localise",
    "lower_bound_estimate",
    "make_test_vectors",
    "right_sandwich",
    "sandwich",
    "svd_approximants",
    "symbol_freeze_check",
    "tail_symbol",
]
