"""Explanations of transfer learning outcomes from domain ontologies."""

from ._core import (
    DataError,
    Pipeline,
    auc,
    change_rates,
    change_rates_from_counts,
    fti,
    materialize,
    p_value,
    pearson,
)

__all__ = [
    "DataError",
    "Pipeline",
    "auc",
    "change_rates",
    "change_rates_from_counts",
    "fti",
    "materialize",
    "p_value",
    "pearson",
]
