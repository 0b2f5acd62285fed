"""Generalized transmissivities of a planar vacuum gap.

The energy transmissivity is the Landauer-like channel sum whose
Bose-weighted frequency integral gives the net radiative exchange between
the two half spaces; the momentum transmissivity plays the same role for
the thermal (non-equilibrium) photon pressure of one body's sources.  Both
are integrals over the in-plane wavevector, split into propagating
(krho < w/c) and evanescent (krho > w/c) branches and into s/p channels.

The evanescent branch is integrated in t = |kz_vacuum| * gap, which pins
the tunneling exponential to unit scale at every gap width; the branch is
cut off at t = 20 (2t = 40, tail below 5e-18) and seeded with 64
logarithmically spaced panels so that sharp surface-polariton resonances
are caught before adaptivity takes over.  The integrable kink at
krho = w/c is handled by ending/starting the branches exactly there;
panel nodes are interior so the point itself is never evaluated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .materials import CONSTANTS
from .planar import LayerStack, Polarization, stack_reflection
from .quadrature import IntegrationSpec, adaptive_integrate

__all__ = [
    "GapSystem",
    "ChannelBreakdown",
    "energy_integrand",
    "momentum_integrand",
    "energy_transmissivity_pp",
    "momentum_transmissivity_pp",
    "EVANESCENT_CUTOFF",
]

_C = CONSTANTS.c

# t = |kz| * gap beyond which the tunneling factor e^{-2t} < 5e-18
EVANESCENT_CUTOFF = 20.0

_DEFAULT_SPEC = IntegrationSpec()


@dataclass(frozen=True)
class GapSystem:
    """Two layer stacks facing a vacuum gap, with body temperatures."""

    body1: LayerStack
    body2: LayerStack
    gap: float     # m
    T1: float = 0.0
    T2: float = 0.0

    def __post_init__(self) -> None:
        if not (self.gap > 0.0 and math.isfinite(self.gap)):
            raise ValueError(f"gap must be positive, got {self.gap!r}")
        if self.T1 < 0.0 or self.T2 < 0.0:
            raise ValueError("temperatures must be >= 0")

    def swapped(self) -> "GapSystem":
        """The same gap seen from the other side (bodies and temperatures)."""
        return GapSystem(self.body2, self.body1, self.gap, self.T2, self.T1)


@dataclass(frozen=True)
class ChannelBreakdown:
    """Per-(polarization, branch) pieces of a transmissivity at one frequency."""

    prop_s: float
    prop_p: float
    evan_s: float
    evan_p: float
    error: float = 0.0
    converged: bool = True
    warnings: tuple[str, ...] = ()

    @property
    def total(self) -> float:
        return self.prop_s + self.prop_p + self.evan_s + self.evan_p

    @property
    def propagating(self) -> float:
        return self.prop_s + self.prop_p

    @property
    def evanescent(self) -> float:
        return self.evan_s + self.evan_p


def _branch_pieces(r1, r2, krho, omega, gap, khz=None):
    """(propagating?, kz or |kz|, tunneling/phase factor, |1 - R1 R2 x|^2).

    khz optionally overrides the vacuum z-wavevector magnitude (real on the
    propagating branch, decay constant on the evanescent one); the
    evanescent-branch quadrature supplies it exactly as t/gap.
    """
    k0 = omega / _C
    krho = np.asarray(krho, dtype=float)
    prop = krho < k0
    if khz is None:
        khz = np.sqrt(np.abs((k0 - krho) * (k0 + krho)))
    else:
        khz = np.asarray(khz, dtype=float)
    x = np.where(prop, np.exp(2j * khz * gap), np.exp(-2.0 * khz * gap))
    den = np.abs(1.0 - np.asarray(r1) * np.asarray(r2) * x) ** 2
    return prop, khz, x, den


def energy_integrand(r1, r2, krho, omega: float, gap: float,
                     pol: Polarization | None = None, khz=None):
    """Per-channel photon transmission probability at one (krho, omega).

    r1, r2 are the stack reflection coefficients of the two bodies for the
    polarization channel being accumulated (pol is carried for reporting
    only).  The propagating form is
        (1-|R1|^2)(1-|R2|^2) / |1 - R1 R2 e^{2i kz l}|^2
    and the evanescent form
        4 Im(R1) Im(R2) e^{-2|kz|l} / |1 - R1 R2 e^{-2|kz|l}|^2,
    each bounded by [0, 1] for passive media.  The branch follows from
    krho vs omega/c; krho = omega/c itself is not a valid input.
    """
    prop, _, x, den = _branch_pieces(r1, r2, krho, omega, gap, khz)
    r1 = np.asarray(r1)
    r2 = np.asarray(r2)
    num_prop = (1.0 - np.abs(r1) ** 2) * (1.0 - np.abs(r2) ** 2)
    num_evan = 4.0 * r1.imag * r2.imag * np.where(prop, 0.0, x.real)
    out = np.where(prop, num_prop, num_evan) / den
    return out if np.ndim(out) else float(out)


def momentum_integrand(r1, r2, krho, omega: float, gap: float,
                       pol: Polarization | None = None, khz=None):
    """Per-channel z-momentum flux kernel at one (krho, omega), s/m.

    Propagating: -(kz/w) (1-|R1|^2)(1+|R2|^2) / |1 - R1 R2 e^{2i kz l}|^2
    (negative for passive bodies: momentum flows toward body 2).
    Evanescent: +(|kz|/w) 4 Im(R1) Re(R2) e^{-2|kz|l} / |...|^2.
    """
    prop, khz, x, den = _branch_pieces(r1, r2, krho, omega, gap, khz)
    r1 = np.asarray(r1)
    r2 = np.asarray(r2)
    num_prop = -(1.0 - np.abs(r1) ** 2) * (1.0 + np.abs(r2) ** 2)
    num_evan = 4.0 * r1.imag * r2.real * np.where(prop, 0.0, x.real)
    out = (khz / omega) * np.where(prop, num_prop, num_evan) / den
    return out if np.ndim(out) else float(out)


# fraction of the Landauer-ceiling channel value below which a channel is
# numerically indistinguishable from zero: the integrand numerators are
# built from cancellations like 1 - |R|^2 whose absolute rounding scale is
# ~1e-16, so integrals this small are pure noise and must not be refined
NOISE_FRACTION = 1e-13


def _channel(system: GapSystem, omega: float, pol: Polarization,
             integrand, spec: IntegrationSpec, momentum: bool):
    """(propagating, evanescent) IntegralResults for one polarization."""
    k0 = omega / _C
    gap = system.gap

    def reflections(krho, kz_host_sq):
        r1 = stack_reflection(system.body1, pol, omega, krho, kz_host_sq)
        r2 = stack_reflection(system.body2, pol, omega, krho, kz_host_sq)
        return r1, r2

    def f_prop(krho):
        kzh2 = (k0 - krho) * (k0 + krho)
        r1, r2 = reflections(krho, kzh2)
        return krho / (2.0 * math.pi) * integrand(r1, r2, krho, omega, gap, pol,
                                                  khz=np.sqrt(kzh2))

    def f_evan(t):
        # substitution t = |kz| * gap: krho dkrho = t dt / gap^2, and the
        # decay constant t/gap is exact even where krho rounds to w/c
        q = t / gap
        krho = np.hypot(k0, q)
        r1, r2 = reflections(krho, -q * q)
        return t / (2.0 * math.pi * gap * gap) * integrand(r1, r2, krho, omega,
                                                           gap, pol, khz=q)

    t_max = EVANESCENT_CUTOFF
    # Landauer-ceiling scales of the two branches (unit integrand over the
    # measure), times the branch bound of |kz|/w for the momentum kernel
    scale_prop = k0 * k0 / (4.0 * math.pi)
    scale_evan = t_max * t_max / (4.0 * math.pi * gap * gap)
    if momentum:
        scale_prop *= 2.0 * k0 / omega
        scale_evan *= 2.0 * t_max / (omega * gap)

    prop_edges = np.linspace(0.0, k0, 17)
    res_prop = adaptive_integrate(f_prop, 0.0, k0, spec, initial_edges=prop_edges,
                                  abs_floor=NOISE_FRACTION * scale_prop)

    evan_edges = np.concatenate([[0.0], np.geomspace(1e-6 * t_max, t_max, 64)])
    res_evan = adaptive_integrate(f_evan, 0.0, t_max, spec, initial_edges=evan_edges,
                                  abs_floor=NOISE_FRACTION * scale_evan)
    return res_prop, res_evan


def _breakdown(system: GapSystem, omega: float, integrand,
               spec: IntegrationSpec, momentum: bool = False) -> ChannelBreakdown:
    if not (omega > 0.0 and math.isfinite(omega)):
        raise ValueError(f"omega must be positive and finite, got {omega!r}")
    pieces = {}
    error = 0.0
    converged = True
    warnings: list[str] = []
    for pol in (Polarization.S, Polarization.P):
        res_prop, res_evan = _channel(system, omega, pol, integrand, spec, momentum)
        pieces[("prop", pol)] = res_prop.value
        pieces[("evan", pol)] = res_evan.value
        error += res_prop.error + res_evan.error
        for branch, res in (("propagating", res_prop), ("evanescent", res_evan)):
            if not res.converged:
                converged = False
                warnings.append(
                    f"{branch} {pol.value}-channel quadrature not converged at "
                    f"omega={omega:.6e}; worst subinterval {res.worst_interval}"
                )
    return ChannelBreakdown(
        prop_s=pieces[("prop", Polarization.S)],
        prop_p=pieces[("prop", Polarization.P)],
        evan_s=pieces[("evan", Polarization.S)],
        evan_p=pieces[("evan", Polarization.P)],
        error=error,
        converged=converged,
        warnings=tuple(warnings),
    )


def energy_transmissivity_pp(system: GapSystem, omega: float,
                             spec: IntegrationSpec = _DEFAULT_SPEC) -> ChannelBreakdown:
    """Energy transmissivity of the gap at omega, split by channel (1/m^2).

    Both branches keep the krho dkrho / 2pi measure inside, so the
    Bose-weighted integral of .total over d(omega)/2pi is the heat flux in
    W/m^2.  Two black bodies give exactly (omega/c)^2 / 2pi.
    """
    return _breakdown(system, omega, energy_integrand, spec)


def momentum_transmissivity_pp(system: GapSystem, omega: float,
                               spec: IntegrationSpec = _DEFAULT_SPEC) -> ChannelBreakdown:
    """Momentum transmissivity for sources in body 1, split by channel (s/m^3).

    Unlike the energy transmissivity this is not symmetric under a body
    swap.  Two black bodies give -omega^2/(3 pi c^3).
    """
    return _breakdown(system, omega, momentum_integrand, spec, momentum=True)
