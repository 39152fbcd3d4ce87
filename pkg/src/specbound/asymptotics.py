"""Tail estimators and regularity certificates for fields and potentials.

The threshold formula consumes three numbers: the tail size of the rotated
field, of |x| V1, and of the positive part of the virial of V2.  True
essential suprema at infinity are unattainable, so each estimator samples
deterministic shells out to an outer cutoff, takes suffix suprema (which
makes the reported sequence non-increasing by construction), and applies a
stabilization criterion.  Unstabilized estimates carry an infinity sentinel.

The module also computes Kato-class norms, locally uniform L^p norms,
vanishing certificates, a resolvent-kernel upper envelope, and the
ball-averaged field smallness sequence used for essential spectrum checks.
"""

import math
from dataclasses import dataclass, field as dataclass_field
from typing import Callable, List, Optional

import numpy as np

from ._quad import ball_integral, ball_volume, directions, sphere_area
from ._vectorize import as_point
from .errors import EstimatorError, RejectedInput
from .fields import FieldSpec, PotentialSpec, btilde, poincare_gauge

#: relative agreement of the last two shell values required for stabilization
STABILIZE_RTOL = 1e-3
#: absolute floor: tails that decay to zero stabilize once below this
STABILIZE_ATOL = 1e-3
#: tail extends to this multiple of the largest requested radius
TAIL_FACTOR = 10.0

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass
class AsymptoticEstimate:
    """Shell suprema of a tail quantity with a stabilization verdict.

    values[j] is the supremum over samples with |x| >= radii[j] (up to the
    outer cutoff); the sequence is non-increasing.  limit is the last value
    when the sequence stabilized, +inf otherwise.
    """

    radii: List[float]
    values: List[float]
    limit: float
    stabilized: bool

    @classmethod
    def from_shell_sups(cls, radii, shell_radii, shell_sups):
        shell_sups = np.asarray(shell_sups, dtype=float)
        suffix = np.maximum.accumulate(shell_sups[::-1])[::-1]
        values = [float(suffix[np.searchsorted(shell_radii, r)]) for r in radii]
        values = list(np.minimum.accumulate(values))  # monotone envelope
        tail_start = np.searchsorted(shell_radii, radii[-1])
        diverging = False
        if tail_start < len(shell_sups) - 1:
            inner = np.max(shell_sups[:max(tail_start, 1)])
            outer = np.max(shell_sups[-2:])
            diverging = outer > inner * (1.0 + 10 * STABILIZE_RTOL) + STABILIZE_ATOL
        if len(values) >= 2:
            gap = abs(values[-1] - values[-2])
            near = gap <= max(STABILIZE_RTOL * max(abs(values[-1]), abs(values[-2])),
                              STABILIZE_ATOL)
        else:
            near = True
        stabilized = bool(near and not diverging)
        limit = float(values[-1]) if stabilized else math.inf
        return cls(list(map(float, radii)), values, limit, stabilized)


def _shell_points(dim, r_lo, r_hi, n):
    """Low-discrepancy points filling the shell r_lo <= |x| <= r_hi."""
    k = np.arange(n)
    radii = r_lo + (r_hi - r_lo) * (k + 0.5) / n
    if dim == 2:
        theta = 2.0 * np.pi * np.mod(k * _GOLDEN, 1.0)
        dirs = np.stack([np.cos(theta), np.sin(theta)], axis=1)
    else:
        dirs = directions(dim, n)
    return radii[:, None] * dirs


def _shell_edges(radii):
    """Requested radii extended by doubling shells out to the cutoff."""
    edges = list(map(float, radii))
    cutoff = TAIL_FACTOR * edges[-1]
    r = edges[-1]
    while r * 2.0 < cutoff:
        r *= 2.0
        edges.append(r)
    edges.append(cutoff)
    return np.asarray(edges)


def _tail_supremum_estimate(quantity, dim, radii, samples_per_shell):
    radii = list(map(float, radii))
    if any(b <= a for a, b in zip(radii, radii[1:])):
        raise RejectedInput("radii must be strictly increasing")
    if samples_per_shell < 16:
        raise RejectedInput("at least 16 samples per shell are required")
    edges = _shell_edges(radii)
    sups = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        pts = _shell_points(dim, lo, hi, samples_per_shell)
        sups.append(float(np.max(quantity(pts))))
    return AsymptoticEstimate.from_shell_sups(radii, edges[:-1], sups)


def beta_estimate(field: FieldSpec, radii, samples_per_shell: int) -> AsymptoticEstimate:
    """Tail supremum of |B(x + w)[x]| over shells |x| >= R.

    A finite stabilized limit feeds the threshold as the field bound; a
    field decaying slower than 1/|x| is reported unstabilized with +inf.
    """
    def quantity(pts):
        return np.linalg.norm(btilde(field, pts), axis=1)

    return _tail_supremum_estimate(quantity, field.dimension, radii,
                                   samples_per_shell)


def omega1_estimate(V1: Callable, radii, samples_per_shell: int,
                    dim: int = 2) -> AsymptoticEstimate:
    """Tail supremum of |x| |V1(x)|."""
    f = as_point(V1, dim)

    def quantity(pts):
        return np.linalg.norm(pts, axis=1) * np.abs(f(pts))

    return _tail_supremum_estimate(quantity, dim, radii, samples_per_shell)


def numerical_virial(V: Callable, dim: int) -> Callable:
    """x . grad V by central differences with step 1e-5 (1 + |x|)."""
    f = as_point(V, dim)

    def virial(pts):
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        step = 1e-5 * (1.0 + np.linalg.norm(pts, axis=1))
        out = np.zeros(len(pts))
        for j in range(dim):
            e = np.zeros(dim)
            e[j] = 1.0
            dj = (f(pts + step[:, None] * e) - f(pts - step[:, None] * e)) / (2 * step)
            out += pts[:, j] * dj
        if not np.all(np.isfinite(out)):
            raise EstimatorError("difference quotient of the potential is not finite")
        return out

    return virial


def omega2_estimate(V2, radii, samples_per_shell: int,
                    dim: Optional[int] = None) -> AsymptoticEstimate:
    """Tail supremum of the positive part of x . grad V2.

    V2 may be a PotentialSpec (its analytic virial is used when present) or
    a bare callable, in which case central differences are used.
    """
    if isinstance(V2, PotentialSpec):
        dim = V2.dimension if dim is None else dim
        virial = V2.virial if V2.virial is not None else numerical_virial(V2.V, dim)
    else:
        dim = 2 if dim is None else dim
        virial = numerical_virial(V2, dim)

    def quantity(pts):
        return np.maximum(virial(pts), 0.0)

    return _tail_supremum_estimate(quantity, dim, radii, samples_per_shell)


def green_kernel(d: int):
    """Short-range kernel entering the Kato-class integral."""
    if d == 2:
        return lambda s: np.abs(np.log(s))
    if d >= 3:
        return lambda s: s ** (2 - d)
    raise RejectedInput("Kato norms are defined for d >= 2")


@dataclass
class KatoNormReport:
    """Kato norm together with the small-radius profile of the class integral.

    alpha_profile lists (alpha, sup_x integral over |x-y| <= alpha of the
    kernel times |V|); the profile is non-decreasing in alpha and its decay
    to zero as alpha shrinks is the class membership criterion.
    """

    dimension: int
    norm: float
    alpha_profile: List[tuple]
    kato_class: bool = dataclass_field(default=False)


def default_centers(d: int, radius: float = 2.0):
    """Integer lattice within the given radius, origin first."""
    rng = range(-int(radius), int(radius) + 1)
    pts = []
    import itertools
    for tup in itertools.product(rng, repeat=d):
        p = np.array(tup, dtype=float)
        if np.linalg.norm(p) <= radius:
            pts.append(p)
    pts.sort(key=lambda p: (np.linalg.norm(p), tuple(p)))
    return np.stack(pts)


def _kato_integral(f, d, alpha, centers, nodes):
    kern = green_kernel(d)
    worst = 0.0
    ok_all = True
    for c in centers:
        val, ok = ball_integral(lambda pts: np.abs(f(pts)), d, alpha,
                                weight=kern, center=c, nodes=nodes,
                                n_dirs=16 if d == 2 else 32)
        ok_all = ok_all and ok
        worst = max(worst, val)
    return worst, ok_all


def kato_norm(V: Callable, d: int, quad_nodes: int, centers=None) -> KatoNormReport:
    """Kato norm of V and its small-radius class profile.

    The norm integrates |x-y|^(2-d) |V(y)| over unit balls for d >= 3 and
    |ln|x-y|| |V(y)| over balls of radius 1/2 for d = 2, maximized over the
    given centers (an origin-centered lattice by default).  Divergence
    under refinement yields norm = +inf with kato_class False.
    """
    f = as_point(V, d)
    if centers is None:
        centers = default_centers(d)
    centers = np.atleast_2d(np.asarray(centers, dtype=float))
    norm_radius = 0.5 if d == 2 else 1.0
    norm, ok = _kato_integral(f, d, norm_radius, centers, quad_nodes)
    if not ok:
        norm = math.inf
    alphas = [2.0 ** (-k) for k in range(0, 9)]
    profile = []
    for a in alphas:
        val, aok = _kato_integral(f, d, a, centers, quad_nodes)
        profile.append((a, float(val) if aok else math.inf))
    profile.sort(key=lambda t: t[0])
    smallest = profile[0][1]
    in_class = math.isfinite(norm) and smallest <= 1e-3 * max(1.0, norm)
    return KatoNormReport(d, float(norm), profile, in_class)


def lp_locunif_norm(V: Callable, p: float, centers) -> float:
    """sup over centers of the L^p norm of V on the unit ball at the center."""
    if not (p >= 1 and math.isfinite(p)):
        raise RejectedInput("p must be finite and >= 1")
    centers = np.atleast_2d(np.asarray(centers, dtype=float))
    d = centers.shape[1]
    f = as_point(V, d)
    worst = 0.0
    for c in centers:
        val, ok = ball_integral(lambda pts: np.abs(f(pts)) ** p, d, 1.0,
                                center=c, nodes=12, n_dirs=16 if d == 2 else 32)
        if not ok or not np.isfinite(val):
            return math.inf
        worst = max(worst, val)
    return float(worst ** (1.0 / p))


def _tail_lattice(d, R, n_dirs=8):
    dirs = directions(d, n_dirs)
    return np.concatenate([(R + off) * dirs for off in (0.0, 1.0, 2.0)])


def vanishing_certificate(W: Callable, p: float, radii,
                          dim: int = 2) -> AsymptoticEstimate:
    """Locally uniform L^p size of the tail restriction of W.

    values[j] is the lp_locunif_norm of W restricted to |y| >= radii[j],
    with centers on a lattice straddling the cutoff sphere.  The quantity
    must decay to zero for the vanishing certificate to pass.
    """
    radii = list(map(float, radii))
    f = as_point(W, dim)
    values = []
    for R in radii:
        def truncated(pts):
            vals = f(pts)
            return np.where(np.linalg.norm(np.atleast_2d(pts), axis=1) >= R,
                            vals, 0.0)
        values.append(lp_locunif_norm(truncated, p, _tail_lattice(dim, R)))
    values = list(np.minimum.accumulate(values))
    if len(values) >= 2:
        gap = abs(values[-1] - values[-2])
        stabilized = gap <= max(STABILIZE_RTOL * abs(values[-1]), STABILIZE_ATOL)
    else:
        stabilized = True
    limit = float(values[-1]) if stabilized else math.inf
    return AsymptoticEstimate(radii, values, limit, stabilized)


def resolvent_kato_bound(W: Callable, d: int, lam: float, alpha: float,
                         centers=None, quad_nodes: int = 12) -> float:
    """Upper envelope for the smoothed resolvent kernel acting on |W|.

    Returns the short-range Kato integral at radius alpha plus
    exp(-sqrt(lam) alpha / 4) / (sqrt(lam) alpha) times the locally uniform
    L^1 norm of W, with unit implicit constants.  This is a surrogate
    diagnostic (an upper-envelope shape), not a certified bound.
    """
    if not (lam > 0 and 0 < alpha <= 1):
        raise RejectedInput("need lam > 0 and alpha in (0, 1]")
    f = as_point(W, d)
    if centers is None:
        centers = default_centers(d)
    centers = np.atleast_2d(np.asarray(centers, dtype=float))
    short, ok = _kato_integral(f, d, alpha, centers, quad_nodes)
    if not ok:
        return math.inf
    tail = lp_locunif_norm(W, 1.0, centers)
    root = math.sqrt(lam)
    return float(short + math.exp(-root * alpha / 4.0) / (root * alpha) * tail)


@dataclass
class WeylVanishingReport:
    """Ball-averaged field smallness along a sequence escaping to infinity.

    c_values[n] is the weighted mean square of B(x_n + y)[y] over the ball
    |y| < R_n that controls the recentred gauge there; rayleigh[n] is the
    kinetic Rayleigh quotient of the normalized tent state on that ball in
    the recentred gauge.  c_values -> 0 exhibits a path along which the
    kinetic form has states of arbitrarily small energy.
    """

    centers: List
    radii: List[float]
    c_values: List[float]
    rayleigh: List[float]
    tent_constant_sq: float


def _tent_constant_sq(d):
    # normalization of (1 - |y|) on the unit ball
    from scipy.integrate import quad
    val = quad(lambda s: (1 - s) ** 2 * s ** (d - 1), 0.0, 1.0)[0]
    return 1.0 / (sphere_area(d) * val)


def weyl_vanishing(field: FieldSpec, centers, radii,
                   quad_nodes: int = 8) -> WeylVanishingReport:
    """Weighted field averages and tent-state energies on escaping balls.

    For each center x_n and radius R_n computes
    C_n = R_n^-d * integral over |y| < R_n of
    (|y|/R_n)^(2-d) log(R_n/|y|)^2 |B(x_n + y)[y]|^2, together with the
    Rayleigh quotient of the tent state (1 - |y|/R_n)_+ (normalized) in the
    gauge recentred at x_n.
    """
    centers = [np.asarray(c, dtype=float) for c in centers]
    radii = list(map(float, radii))
    if len(centers) != len(radii):
        raise RejectedInput("centers and radii must have the same length")
    if any(b <= a for a, b in zip(radii, radii[1:])):
        raise RejectedInput("radii must be increasing")
    d = field.dimension
    csq = _tent_constant_sq(d)
    c_vals, rayleigh = [], []
    for x_n, R in zip(centers, radii):
        shifted = field.rebased(x_n)

        def b2(pts):
            return np.sum(btilde(shifted, pts) ** 2, axis=1)

        def cweight(r):
            return (r / R) ** (2 - d) * np.log(R / r) ** 2

        val, ok = ball_integral(b2, d, R, weight=cweight, nodes=quad_nodes,
                                n_dirs=16 if d == 2 else 32)
        c_vals.append(float(val / R ** d) if ok else math.inf)

        gauge = poincare_gauge(shifted, max(8, quad_nodes))

        def a2(pts):
            return np.sum(gauge.on_points(pts) ** 2, axis=1)

        aval, aok = ball_integral(a2, d, R,
                                  weight=lambda r: (1.0 - r / R) ** 2,
                                  nodes=quad_nodes, n_dirs=16 if d == 2 else 32)
        grad_term = csq * ball_volume(d) * R ** (d - 2) / (R ** d)
        pot_term = csq * aval / R ** d if aok else math.inf
        rayleigh.append(float(grad_term + pot_term))
    return WeylVanishingReport(centers, radii, c_vals, rayleigh, csq)
