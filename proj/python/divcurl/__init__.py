"""Div-curl systems on tetrahedral meshes with lowest-order Whitney forms."""

import sys

from ._core import (
    CompatibilityError,
    DimensionError,
    Error,
    InputError,
    Mesh,
    SolverError,
    decompose,
    friedrichs,
    harmonic_basis,
    random_field,
    run_cli,
)

__all__ = [
    "CompatibilityError",
    "DimensionError",
    "Error",
    "InputError",
    "Mesh",
    "SolverError",
    "decompose",
    "friedrichs",
    "harmonic_basis",
    "main",
    "random_field",
    "run_cli",
]


def main() -> None:
    sys.exit(run_cli(sys.argv[1:]))
