from ._core import (
    CapacityError,
    FormatError,
    ParseError,
    check_proof,
    closure,
    decide,
    evaluate,
    find_countermodel,
    normalize,
    translate,
    unwind,
    validate_quasimodel,
)

__all__ = [
    "CapacityError",
    "FormatError",
    "ParseError",
    "check_proof",
    "closure",
    "decide",
    "evaluate",
    "find_countermodel",
    "normalize",
    "translate",
    "unwind",
    "validate_quasimodel",
]
