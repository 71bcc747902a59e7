from ._finsler import (
    FinslerError,
    Metric,
    builtin,
    classify,
    dsl,
    exp_map,
    geodesic,
    verify,
)

__all__ = ["FinslerError", "Metric", "builtin", "classify", "dsl", "exp_map", "geodesic", "verify"]
