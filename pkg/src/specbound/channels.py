"""Half-line angular momentum channels of 2d radial operators.

A radial field decomposes the plane operator over integer angular momenta.
After the unitary substitution u = sqrt(r) psi each channel is a half-line
operator -u'' + W(r) u with Dirichlet condition at 0 and

    W(r) = (m^2 - 1/4) / r^2 + h(r)^2 - 2 m h(r) / r,

where h(r) = (1/r) * integral of b(s) s ds over (0, r].  The same reduction
covers the flux-line operator (angular momentum shifted by the flux) and,
with the plain s-wave reduction, the classical oscillating potential with
an embedded positive eigenvalue.
"""

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from ._quad import cumulative_integral, refine_integral
from ._vectorize import as_radial
from .errors import RejectedInput

_CONSISTENCY_TOL = 1e-12


@dataclass(frozen=True)
class RadialChannel:
    """One half-line channel: effective potential, momentum, field profile.

    m is the (possibly non-integer) effective angular momentum entering the
    centrifugal term; h_profile is the accumulated field profile h(r), zero
    for channels without a regular field; extra_potential is any additional
    radial potential on top of the reduction terms.
    """

    m: float
    W: Callable
    label: str
    h_profile: Callable
    extra_potential: Optional[Callable] = None

    def __post_init__(self):
        radii = np.array([0.5, 1.0, 2.0, 5.0])
        w = self.W(radii)
        h = self.h_profile(radii)
        ref = (self.m**2 - 0.25) / radii**2 + h**2 - 2.0 * self.m * h / radii
        if self.extra_potential is not None:
            ref = ref + self.extra_potential(radii)
        mism = np.abs(w - ref)
        finite = np.isfinite(w) & np.isfinite(ref)
        if np.any(mism[finite] > _CONSISTENCY_TOL * (1.0 + np.abs(w[finite]))):
            raise RejectedInput("channel potential is inconsistent with its pieces")


def h_profile(b: Callable, r, quad_nodes: int = 12):
    """h(r) = (1/r) * integral of b(s) s ds over (0, r], scalar or array r.

    Quadrature clusters toward 0 to absorb integrable singularities of b;
    a non-integrable profile returns the +inf sentinel.
    """
    bv = as_radial(b)
    arr = np.asarray(r, dtype=float)
    single = arr.ndim == 0
    flat = arr.reshape(-1)
    if np.any(flat <= 0):
        raise RejectedInput("h is defined for positive radii")
    order = np.argsort(flat)
    sorted_r = flat[order]
    vals, ok = cumulative_integral(lambda s: bv(s) * s, sorted_r,
                                   nodes=quad_nodes)
    if not ok:
        out = np.full_like(flat, math.inf)
        return float(out[0]) if single else out.reshape(arr.shape)
    out = np.empty_like(flat)
    out[order] = vals / sorted_r
    return float(out[0]) if single else out.reshape(arr.shape)


def miller_simon_channel(b: Callable, m: int, quad_nodes: int = 12) -> RadialChannel:
    """Channel of the 2d operator with radial field profile b.

    W(r) = (m^2 - 1/4)/r^2 + h(r)^2 - 2 m h(r)/r; the -1/(4 r^2) piece at
    m = 0 comes from the half-line substitution and is evaluated at offset
    nodes only (the grid never touches r = 0).
    """
    bv = as_radial(b)

    def h(r):
        return h_profile(bv, r, quad_nodes)

    def W(r):
        r = np.asarray(r, dtype=float)
        hr = h(r)
        return (m**2 - 0.25) / r**2 + hr**2 - 2.0 * m * hr / r

    return RadialChannel(float(m), W, f"radial_channel_m{m}", h)


def wigner_von_neumann(r):
    """Classical oscillating radial potential with an embedded eigenvalue at 1.

    V(r) = -32 sin r [g^3 cos r - 3 g^2 sin^3 r + g cos r + sin^3 r]
           / (1 + g^2)^2 with g(r) = 2r - sin 2r; V(0) = 0 by continuity,
    and V(r) = -8 sin(2r)/r + O(r^-2) for large r.
    """
    arr = np.asarray(r, dtype=float)
    single = arr.ndim == 0
    arr = np.atleast_1d(arr)
    if np.any(arr < 0):
        raise RejectedInput("radius must be nonnegative")
    g = 2.0 * arr - np.sin(2.0 * arr)
    s, c = np.sin(arr), np.cos(arr)
    num = -32.0 * s * (g**3 * c - 3.0 * g**2 * s**3 + g * c + s**3)
    out = num / (1.0 + g**2) ** 2
    return float(out[0]) if single else out


def wigner_von_neumann_channel() -> RadialChannel:
    """s-wave half-line operator -u'' + V(r) u for the oscillating potential."""
    zero_h = lambda r: np.zeros_like(np.asarray(r, dtype=float))
    return RadialChannel(0.5, wigner_von_neumann, "wigner_von_neumann",
                         zero_h, extra_potential=wigner_von_neumann)


def aharonov_bohm_channel(B0: float, m: int,
                          V_radial: Optional[Callable] = None) -> RadialChannel:
    """Flux-line channel: angular momentum m shifted to nu = m - B0.

    The flux potential contributes (-2 m B0 + B0^2)/r^2, completing the
    square in the centrifugal term: W(r) = (nu^2 - 1/4)/r^2 + V_radial(r).
    Non-integer nu keeps the Dirichlet condition at 0 (Friedrichs choice).
    """
    nu = float(m) - float(B0)
    vr = as_radial(V_radial) if V_radial is not None else None
    zero_h = lambda r: np.zeros_like(np.asarray(r, dtype=float))

    def W(r):
        r = np.asarray(r, dtype=float)
        out = (nu**2 - 0.25) / r**2
        if vr is not None:
            out = out + vr(r)
        return out

    return RadialChannel(nu, W, f"flux_channel_m{m}_B0{B0}", zero_h,
                         extra_potential=vr)


def flux_of_profile(b: Callable, support_radius: float, quad_nodes: int = 12):
    """Total flux 2 pi * integral of b(s) s ds of a compactly supported profile."""
    bv = as_radial(b)
    val, ok = refine_integral(lambda s: bv(s) * s, 0.0, support_radius,
                              nodes=quad_nodes)
    return 2.0 * math.pi * val if ok else math.inf
