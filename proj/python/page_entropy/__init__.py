"""Average entanglement entropy of random states with fixed particle number."""

from ._page_entropy import (
    InfeasibleError,
    LocalModel,
    NumericalError,
    SaddleSolution,
    asymptotic_average,
    beta_family,
    catalog,
    dim_fixed_n,
    exact_average,
    exact_variance,
    mc_average,
    model_from_json,
    n_star,
    page_curve,
    parse_model,
    power,
    product,
    resolved_average,
    spin1_mid_spectrum,
)

__all__ = [name for name in dir() if not name.startswith("_")]
