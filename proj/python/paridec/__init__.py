"""Decision rules for discrete choices whose payoffs are only partially identified."""

from ._core import (
    expected_max_gaussian,
    posterior_mean_max_negative_part,
    posterior_mean_positive_part,
    price_demand,
    rationalizable,
    treat_panel,
    type_matrices,
)

__version__ = "0.1.0"

__all__ = [
    "expected_max_gaussian",
    "posterior_mean_max_negative_part",
    "posterior_mean_positive_part",
    "price_demand",
    "rationalizable",
    "treat_panel",
    "type_matrices",
]
