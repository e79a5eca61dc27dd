"""Entanglement dynamics after quenches from cell-periodic states of free lattice fermions."""
from importlib.metadata import PackageNotFoundError, version

try:
    __version__ = version("artifact")
except PackageNotFoundError:  # pragma: no cover
    __version__ = "0+unknown"

from .analytic import closed_form_rectangle, qp_entropy_analytic
from .cellstate import CellState, cell_green, classical, multiplet_correlation, occupation, named_state, superposition
from .curves import EntropyCurve
from .entropy import bipartition_entropy, fermi_entropy, stationary_entropy_density
from .exact import correlation_field_thermo, correlation_finite, exact_entropy_curve
from .geometry import Region, interval, polygon, rectangle, regular_polygon, star, unit_rectangle
from .lattice import QuenchConfig, ReducedGrid, dispersion, group_velocity, kshifts
from .montecarlo import McConfig, McEstimate, qp_entropy_curve_mc, qp_entropy_mc

__all__ = [
    "CellState",
    "EntropyCurve",
    "McConfig",
    "McEstimate",
    "QuenchConfig",
    "ReducedGrid",
    "Region",
    "bipartition_entropy",
    "cell_green",
    "classical",
    "closed_form_rectangle",
    "correlation_field_thermo",
    "correlation_finite",
    "dispersion",
    "exact_entropy_curve",
    "fermi_entropy",
    "group_velocity",
    "interval",
    "kshifts",
    "multiplet_correlation",
    "occupation",
    "named_state",
    "polygon",
    "qp_entropy_analytic",
    "qp_entropy_curve_mc",
    "qp_entropy_mc",
    "rectangle",
    "regular_polygon",
    "star",
    "stationary_entropy_density",
    "superposition",
    "unit_rectangle",
]
