"""gaprad: radiative energy and momentum transfer across planar vacuum gaps.

Computes thermal non-equilibrium heat flux, linearized conductance, and
photon pressure between planar multilayer half spaces from their stack
reflection coefficients, and validates the far-field blackbody limit on
triangulated geometries via view factors.
"""

__version__ = "0.1.0"

from .materials import (CONSTANTS, Black, Constant, Drude, LorentzSum,
                        Material, PhysicalConstants, Tabulated, eval_response,
                        planck_energy, planck_energy_dT)
from .planar import (DegenerateInterfaceError, LayerStack, Polarization,
                     interface_reflection, kz, stack_reflection)
from .quadrature import IntegralResult, IntegrationSpec, adaptive_integrate
from .transmissivity import (ChannelBreakdown, GapSystem, energy_integrand,
                             energy_transmissivity_pp, momentum_integrand,
                             momentum_transmissivity_pp)
from .spectral import (ScalarResult, SpectralResult, auto_window, conductance,
                       heat_flux, neq_pressure, spectrum)
from .geometry import (MeshError, TriMesh, bb_heat_rate, bb_transmissivity,
                       bb_transmissivity_direct, load_mesh, rectangle_mesh,
                       save_obj, view_factor)

__all__ = [
    "__version__",
    "CONSTANTS", "PhysicalConstants",
    "Constant", "Drude", "LorentzSum", "Tabulated", "Black", "Material",
    "eval_response", "planck_energy", "planck_energy_dT",
    "Polarization", "LayerStack", "DegenerateInterfaceError",
    "kz", "interface_reflection", "stack_reflection",
    "IntegrationSpec", "IntegralResult", "adaptive_integrate",
    "GapSystem", "ChannelBreakdown",
    "energy_integrand", "momentum_integrand",
    "energy_transmissivity_pp", "momentum_transmissivity_pp",
    "ScalarResult", "SpectralResult", "auto_window",
    "heat_flux", "conductance", "neq_pressure", "spectrum",
    "TriMesh", "MeshError", "load_mesh", "save_obj", "rectangle_mesh",
    "view_factor", "bb_transmissivity", "bb_transmissivity_direct",
    "bb_heat_rate",
]
