"""Partition-of-unity RBF interpolation with LOOCV-selected radii and shapes."""

from ._rbfpu import (
    SCHEMA_VERSION,
    Error,
    Model,
    benchmark,
    eval_grid,
    fit,
    halton,
    kernel,
    loocv_score,
    product_function,
    rippa_errors,
)

__all__ = [
    "SCHEMA_VERSION",
    "Error",
    "Model",
    "benchmark",
    "eval_grid",
    "fit",
    "halton",
    "kernel",
    "loocv_score",
    "product_function",
    "rippa_errors",
]
__version__ = "0.1.0"
