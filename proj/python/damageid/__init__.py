"""Damaged-elasticity forward solves and damage-process identification."""

from ._damageid import (
    adjoint_mismatch,
    check_config,
    contraction,
    forward,
    invert,
    spectrum,
    synthesize,
)

__all__ = [
    "adjoint_mismatch",
    "check_config",
    "contraction",
    "forward",
    "invert",
    "spectrum",
    "synthesize",
]
