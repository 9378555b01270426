from ._qgce import (
    ProductKind,
    divergence,
    gauss_gce,
    gce,
    permutation_average,
    personick,
    solve_dp,
    thermal_curve,
    u_statistic,
    weak_values,
)

__all__ = [
    "ProductKind",
    "divergence",
    "gauss_gce",
    "gce",
    "permutation_average",
    "personick",
    "solve_dp",
    "thermal_curve",
    "u_statistic",
    "weak_values",
]
