"""Shared quadrature machinery.

Composite Gauss-Legendre rules on geometric panels clustered toward a
singular endpoint, with a refinement loop that either certifies convergence
or reports failure (the caller maps failure to an infinity sentinel).
Also provides deterministic direction sets for angular averaging.
"""

import numpy as np

_GL_CACHE = {}

#: panel contraction ratio used by all geometric subdivisions
RATIO = 0.5


def gauss_legendre(n):
    if n not in _GL_CACHE:
        _GL_CACHE[n] = np.polynomial.legendre.leggauss(int(n))
    return _GL_CACHE[n]


def panel_rule(a, b, n):
    """Nodes and weights of the n-point Gauss-Legendre rule on [a, b]."""
    x, w = gauss_legendre(n)
    nodes = 0.5 * (b - a) * (x + 1.0) + a
    return nodes, 0.5 * (b - a) * w


def refine_integral(f, a, b, nodes=8, rtol=1e-10, max_levels=60, min_levels=6):
    """Integrate f over (a, b] with panels shrinking geometrically toward a.

    f must accept a 1d array of abscissae and return values of the same
    shape.  Panels are [a + (b-a) q^(k+1), a + (b-a) q^k]; the loop stops
    once the two innermost contributions are negligible against the running
    total, which tolerates integrable singularities at a.

    Returns (value, converged).  A divergent or too slowly converging
    integrand exhausts max_levels and comes back with converged=False.
    """
    length = b - a
    if length <= 0:
        return 0.0, True
    total = 0.0
    prev_small = False
    hi = b
    for k in range(max_levels):
        lo = a + length * RATIO ** (k + 1)
        x, w = panel_rule(lo, hi, nodes)
        contrib = float(np.dot(w, f(x)))
        if not np.isfinite(contrib):
            return np.inf, False
        total += contrib
        hi = lo
        small = abs(contrib) <= rtol * max(abs(total), 1e-300)
        if k >= min_levels and small and prev_small:
            # close the remaining stub (a, lo] with a single panel
            x, w = panel_rule(a, lo, nodes)
            stub = float(np.dot(w, f(x)))
            if np.isfinite(stub):
                total += stub
            return total, True
        prev_small = small
    return total, False


def segment_rule(edges, n):
    """Gauss-Legendre nodes/weights over consecutive segments of `edges`."""
    edges = np.asarray(edges, dtype=float)
    x, w = gauss_legendre(n)
    lo = edges[:-1][:, None]
    hi = edges[1:][:, None]
    nodes = 0.5 * (hi - lo) * (x[None, :] + 1.0) + lo
    weights = 0.5 * (hi - lo) * w[None, :]
    return nodes, weights


def sphere_area(d):
    """Surface measure of the unit sphere in dimension d (2 or 3)."""
    if d == 2:
        return 2.0 * np.pi
    if d == 3:
        return 4.0 * np.pi
    raise ValueError(f"unsupported dimension {d}")


def ball_volume(d, radius=1.0):
    if d == 2:
        return np.pi * radius**2
    if d == 3:
        return 4.0 / 3.0 * np.pi * radius**3
    raise ValueError(f"unsupported dimension {d}")


def directions(d, n):
    """Deterministic unit directions: uniform angles (2d), Fibonacci (3d)."""
    if d == 2:
        theta = 2.0 * np.pi * (np.arange(n) + 0.5) / n
        return np.stack([np.cos(theta), np.sin(theta)], axis=1)
    if d == 3:
        k = np.arange(n) + 0.5
        phi = np.arccos(1.0 - 2.0 * k / n)
        golden = np.pi * (3.0 - np.sqrt(5.0))
        theta = golden * k
        return np.stack(
            [np.sin(phi) * np.cos(theta), np.sin(phi) * np.sin(theta), np.cos(phi)],
            axis=1,
        )
    raise ValueError(f"unsupported dimension {d}")


def ball_integral(scalar, d, radius, weight=None, center=None, nodes=8,
                  n_dirs=16, rtol=1e-10, max_levels=60):
    """Integral of weight(|y|) * scalar(center + y) over the ball |y| < radius.

    `scalar` maps an (m, d) array of points to (m,) values; the radial
    integral is refined toward |y| = 0 so that integrable singularities of
    either factor at the center are handled.  Returns (value, converged).
    """
    dirs = directions(d, n_dirs)
    surf = sphere_area(d)
    center = None if center is None else np.asarray(center, dtype=float)

    def g(r):
        pts = r[:, None, None] * dirs[None, :, :]
        if center is not None:
            pts = pts + center
        vals = scalar(pts.reshape(-1, d)).reshape(len(r), n_dirs).mean(axis=1)
        out = surf * r ** (d - 1) * vals
        if weight is not None:
            out = out * weight(r)
        return out

    return refine_integral(g, 0.0, radius, nodes=nodes, rtol=rtol,
                           max_levels=max_levels)


def cumulative_integral(f, radii, nodes=8, rtol=1e-10):
    """Values of r -> integral of f over (0, r] at each of the sorted `radii`.

    The first segment (0, radii[0]] is refined geometrically toward 0; the
    remaining segments use plain Gauss-Legendre.  Returns (values, converged).
    """
    radii = np.asarray(radii, dtype=float)
    first, ok = refine_integral(f, 0.0, radii[0], nodes=nodes, rtol=rtol)
    if len(radii) == 1:
        return np.array([first]), ok
    seg_nodes, seg_w = segment_rule(radii, nodes)
    vals = f(seg_nodes.reshape(-1)).reshape(seg_nodes.shape)
    contribs = np.sum(seg_w * vals, axis=1)
    out = first + np.concatenate([[0.0], np.cumsum(contribs)])
    if not np.all(np.isfinite(out)):
        ok = False
    return out, ok
