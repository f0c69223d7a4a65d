"""pvkit: exact difference Galois group computations for first-order systems.

The package builds the solution-ring presentation for a linear difference
system over C(x) (shift or q-shift), splits it into its matching components,
and identifies the associated matrix group together with the invariants that
stay stable under constant base change.
"""
from __future__ import annotations

from .base import DiffField, SigmaSpec
from .engine import (
    DiffSystem,
    PVPresentation,
    build_pv_diagonal,
    build_pv_scalar,
    build_pv_unipotent,
    check_simple,
    decompose,
)
from .groups import (
    ConstantsExtensionDesc,
    GroupDesc,
    base_change,
    connection_matrix_check,
    functor_ideal,
    group_transport_check,
    identify_group,
    weak_pv_compare,
)

__version__ = "0.1.0"

__all__ = [
    "DiffField",
    "SigmaSpec",
    "DiffSystem",
    "PVPresentation",
    "build_pv_scalar",
    "build_pv_diagonal",
    "build_pv_unipotent",
    "check_simple",
    "decompose",
    "ConstantsExtensionDesc",
    "GroupDesc",
    "base_change",
    "connection_matrix_check",
    "functor_ideal",
    "group_transport_check",
    "identify_group",
    "weak_pv_compare",
    "__version__",
]
