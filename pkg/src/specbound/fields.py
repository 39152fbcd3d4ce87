"""Magnetic fields, scalar potentials, and transversal vector potentials.

A magnetic field is either a 2d radial profile b(r), a general antisymmetric
matrix sampler, or an idealized flux line.  The central object is the vector
field obtained by applying the field matrix at x + w to the position x; its
line integral along rays through the origin yields the transversal gauge,
which satisfies x . A(x) = 0 identically.
"""

from dataclasses import dataclass, field as dataclass_field
from typing import Callable, Optional

import numpy as np

from ._quad import RATIO, ball_integral, directions, panel_rule
from ._vectorize import as_matrix, as_point, as_radial
from .errors import GaugeError, RejectedInput

RADIAL = "radial_profile"
SAMPLER = "sampler"
AHARONOV_BOHM = "aharonov_bohm"

_ANTISYM_TOL = 1e-12


@dataclass(frozen=True)
class FieldSpec:
    """A magnetic field with its evaluation strategy and base point.

    kind is one of 'radial_profile' (2d only, scalar b(r)), 'sampler'
    (antisymmetric matrix valued) or 'aharonov_bohm' (flux line through the
    origin, handled analytically downstream).  The base point shifts where
    the field matrix is sampled: the working vector field is B(x + w)[x].
    """

    dimension: int
    kind: str
    profile: Optional[Callable] = None
    sampler: Optional[Callable] = None
    flux: Optional[float] = None
    base_point: np.ndarray = None  # type: ignore[assignment]

    def __post_init__(self):
        if self.dimension not in (2, 3):
            raise RejectedInput(f"dimension must be 2 or 3, got {self.dimension}")
        if self.kind not in (RADIAL, SAMPLER, AHARONOV_BOHM):
            raise RejectedInput(f"unknown field kind {self.kind!r}")
        if self.kind == RADIAL and self.dimension != 2:
            raise RejectedInput("radial_profile fields are only defined in dimension 2")
        w = np.zeros(self.dimension) if self.base_point is None \
            else np.asarray(self.base_point, dtype=float)
        if w.shape != (self.dimension,) or not np.all(np.isfinite(w)):
            raise RejectedInput("base_point must be a finite point of matching dimension")
        object.__setattr__(self, "base_point", w)
        if self.kind == RADIAL:
            object.__setattr__(self, "profile", as_radial(self.profile))
        elif self.kind == SAMPLER:
            object.__setattr__(self, "sampler", as_matrix(self.sampler, self.dimension))
            self._check_antisymmetry()
        elif self.flux is None or not np.isfinite(self.flux):
            raise RejectedInput("aharonov_bohm fields need a finite flux coefficient")

    def _check_antisymmetry(self):
        rng = np.random.default_rng(0)
        pts = rng.standard_normal((8, self.dimension)) * 1.5
        mats = self.sampler(pts)
        scale = np.max(np.abs(mats)) + 1.0
        defect = np.max(np.abs(mats + np.transpose(mats, (0, 2, 1))))
        if defect > _ANTISYM_TOL * scale:
            raise RejectedInput(
                f"sampler is not antisymmetric: |B + B^T| = {defect:.3e}")

    def rebased(self, shift):
        """The same field sampled around base_point + shift."""
        return FieldSpec(self.dimension, self.kind, self.profile, self.sampler,
                         self.flux, self.base_point + np.asarray(shift, float))

    def scalar_2d(self, points):
        """Scalar field value B(x + w) at 2d points (the B_{2,1} component)."""
        points = np.atleast_2d(np.asarray(points, dtype=float))
        shifted = points + self.base_point
        if self.kind == RADIAL:
            return self.profile(np.linalg.norm(shifted, axis=1))
        if self.kind == SAMPLER:
            return self.sampler(shifted)[:, 1, 0]
        raise RejectedInput("idealized flux fields have no pointwise value")


def radial_field(b, base_point=None) -> FieldSpec:
    """2d field with scalar profile b(|x|)."""
    return FieldSpec(2, RADIAL, profile=b, base_point=base_point)


def sampler_field(B, dimension, base_point=None) -> FieldSpec:
    """Field given by an antisymmetric matrix sampler."""
    return FieldSpec(dimension, SAMPLER, sampler=B, base_point=base_point)


def constant_field_2d(b0) -> FieldSpec:
    return radial_field(lambda r: np.full_like(np.asarray(r, dtype=float), b0))


def aharonov_bohm_field(b0) -> FieldSpec:
    """Idealized 2d flux line with total flux 2 pi b0."""
    return FieldSpec(2, AHARONOV_BOHM, flux=float(b0))


@dataclass(frozen=True)
class PotentialSpec:
    """Scalar potential with optional analytic virial and splitting.

    virial, when present, is x . grad V as a function of the point.  split
    is an optional pair (V1, V2) with V = V1 + V2, checked on sample points.
    """

    V: Callable
    virial: Optional[Callable] = None
    split: Optional[tuple] = None
    dimension: int = 2

    def __post_init__(self):
        object.__setattr__(self, "V", as_point(self.V, self.dimension))
        if self.virial is not None:
            object.__setattr__(self, "virial", as_point(self.virial, self.dimension))
        if self.split is not None:
            v1 = as_point(self.split[0], self.dimension)
            v2 = as_point(self.split[1], self.dimension)
            object.__setattr__(self, "split", (v1, v2))
            rng = np.random.default_rng(1)
            pts = rng.standard_normal((16, self.dimension)) * 2.0
            v, s = self.V(pts), v1(pts) + v2(pts)
            if np.any(np.abs(v - s) > 1e-12 * (1.0 + np.abs(v))):
                raise RejectedInput("split does not sum to V on sampled points")


def radial_potential(f, dimension=2, virial=None, split=None) -> PotentialSpec:
    """PotentialSpec for a radial profile f(|x|); virial likewise radial."""
    def V(pts):
        return f(np.linalg.norm(np.atleast_2d(pts), axis=1))
    vir = None
    if virial is not None:
        def vir(pts):  # noqa: F811
            return virial(np.linalg.norm(np.atleast_2d(pts), axis=1))
    return PotentialSpec(V, virial=vir, split=split, dimension=dimension)


def btilde(field: FieldSpec, x):
    """The working vector field B(x + w)[x] at one point or an (m, d) batch.

    In 2d this is b(|x + w|) (-x2, x1); in 3d the matrix action coincides
    with the cross product of the axial field vector with x.  The result is
    orthogonal to x by antisymmetry.
    """
    pts = np.asarray(x, dtype=float)
    single = pts.ndim == 1
    pts = np.atleast_2d(pts)
    if pts.shape[1] != field.dimension:
        raise RejectedInput(
            f"points of dimension {pts.shape[1]} for a {field.dimension}d field")
    if not np.all(np.isfinite(pts)):
        raise RejectedInput("non-finite evaluation point")
    if field.kind == AHARONOV_BOHM:
        raise RejectedInput(
            "idealized flux fields are handled analytically in channels")
    shifted = pts + field.base_point
    if field.kind == RADIAL:
        b = field.profile(np.linalg.norm(shifted, axis=1))
        out = b[:, None] * np.stack([-pts[:, 1], pts[:, 0]], axis=1)
    else:
        mats = field.sampler(shifted)
        if not np.all(np.isfinite(mats)):
            raise RejectedInput("sampler returned non-finite values")
        out = np.einsum("mij,mj->mi", mats, pts)
    return out[0] if single else out


@dataclass(frozen=True)
class GaugePotential:
    """Vector potential obtained from the ray line integral of the field.

    transversal means x . A(x) = 0 holds identically; every potential built
    by poincare_gauge or aharonov_bohm_gauge has the flag set.
    """

    A: Callable
    quadrature_nodes: int
    transversal: bool = True
    _cache: dict = dataclass_field(default_factory=dict, repr=False, compare=False)

    def __call__(self, x):
        return self.A(x)

    def on_points(self, points):
        """Vectorized evaluation on an (m, d) array."""
        return self.A(points)

    def on_grid(self, key, points):
        """Evaluation cached by an immutable grid key."""
        if key not in self._cache:
            self._cache[key] = self.on_points(points)
        return self._cache[key]


def _radial_gauge_evaluator(field: FieldSpec, nodes: int, levels: int = 40):
    # A(x) = (-y, x) I(r) / r^2 with I(r) the flux integrand accumulated to r
    b = field.profile

    def ray_integral(r):
        # integral of b(s) s ds from 0 to each entry of r, clustered toward 0
        r = np.asarray(r, dtype=float)
        flat = r.reshape(-1)
        order = np.argsort(flat)
        out = np.zeros_like(flat)
        pos = flat[order] > 0
        if np.any(pos):
            radii = flat[order][pos]
            x0, w0 = _geometric_rule(radii[0], nodes, levels)
            first = float(np.dot(w0, b(x0) * x0))
            if len(radii) > 1:
                edges = radii
                from ._quad import segment_rule
                seg_x, seg_w = segment_rule(edges, nodes)
                vals = b(seg_x.reshape(-1)).reshape(seg_x.shape) * seg_x
                cum = first + np.concatenate([[0.0], np.cumsum(np.sum(seg_w * vals, axis=1))])
            else:
                cum = np.array([first])
            res = np.zeros(len(flat[order]))
            res[pos] = cum
            out[order] = res
        return out.reshape(r.shape)

    def A(x):
        pts = np.asarray(x, dtype=float)
        single = pts.ndim == 1
        pts = np.atleast_2d(pts)
        r = np.linalg.norm(pts, axis=1)
        I = ray_integral(r)
        with np.errstate(invalid="ignore", divide="ignore"):
            coef = np.where(r > 0, I / np.where(r > 0, r**2, 1.0), 0.0)
        out = coef[:, None] * np.stack([-pts[:, 1], pts[:, 0]], axis=1)
        return out[0] if single else out

    return A


def _geometric_rule(upper, nodes, levels=40):
    """Composite rule on (0, upper] with panels shrinking toward 0."""
    xs, ws = [], []
    hi = upper
    for k in range(levels):
        lo = upper * RATIO ** (k + 1)
        x, w = panel_rule(lo, hi, nodes)
        xs.append(x)
        ws.append(w)
        hi = lo
    return np.concatenate(xs), np.concatenate(ws)


def _generic_gauge_evaluator(field: FieldSpec, nodes: int, levels: int = 40):
    t, wt = _geometric_rule(1.0, nodes, levels)

    def A(x):
        pts = np.asarray(x, dtype=float)
        single = pts.ndim == 1
        pts = np.atleast_2d(pts)
        m, d = pts.shape
        scaled = (t[:, None, None] * pts[None, :, :]).reshape(-1, d)
        vals = btilde(field, scaled).reshape(len(t), m, d)
        out = np.einsum("k,kmd->md", wt, vals)
        return out[0] if single else out

    return A


def poincare_gauge(field: FieldSpec, nodes: int) -> GaugePotential:
    """Transversal vector potential A(x) = ray integral of the field over [0, 1].

    Uses composite Gauss-Legendre in the ray parameter with geometric node
    clustering toward 0 so that strong local singularities of the field are
    absorbed.  Construction is certified by comparing two refinement levels
    on probe points; disagreement raises GaugeError.
    """
    if nodes < 8:
        raise RejectedInput("at least 8 quadrature nodes are required")
    if field.kind == AHARONOV_BOHM:
        raise GaugeError(
            "flux-line fields have a closed form potential; use aharonov_bohm_gauge")
    make = _radial_gauge_evaluator if (
        field.kind == RADIAL and not field.base_point.any()) else _generic_gauge_evaluator
    # refine both the node count and the clustering depth: a divergent ray
    # integral keeps accumulating under deeper panels and gets rejected
    coarse = make(field, nodes, levels=40)
    fine = make(field, nodes + 4, levels=52)
    probes = np.concatenate([r * directions(field.dimension, 6)
                             for r in (0.5, 1.0, 2.0, 4.0)])
    a0, a1 = coarse(probes), fine(probes)
    scale = np.linalg.norm(a1, axis=1) + 1.0
    worst = np.max(np.linalg.norm(a1 - a0, axis=1) / scale)
    if not np.isfinite(worst) or worst > 1e-8:
        raise GaugeError(
            f"gauge quadrature did not converge (refinement disagreement {worst:.3e})")
    return GaugePotential(A=fine, quadrature_nodes=nodes)


def aharonov_bohm_gauge(b0) -> GaugePotential:
    """Closed form potential b0 (-y, x) / r^2 of the idealized flux line."""
    def A(x):
        pts = np.asarray(x, dtype=float)
        single = pts.ndim == 1
        pts = np.atleast_2d(pts)
        r2 = np.sum(pts**2, axis=1)
        with np.errstate(invalid="ignore", divide="ignore"):
            coef = np.where(r2 > 0, b0 / np.where(r2 > 0, r2, 1.0), 0.0)
        out = coef[:, None] * np.stack([-pts[:, 1], pts[:, 0]], axis=1)
        return out[0] if single else out

    return GaugePotential(A=A, quadrature_nodes=0)


def _box_lattice(lo, hi, per_axis):
    axes = [np.linspace(lo[i], hi[i], per_axis) for i in range(len(lo))]
    grids = np.meshgrid(*axes, indexing="ij")
    return np.stack([g.reshape(-1) for g in grids], axis=1)


def curl_check(gauge: GaugePotential, field: FieldSpec, grid_spacing: float,
               sample_box, per_axis: int = 5) -> float:
    """Worst relative mismatch between the finite-difference curl of A and B.

    sample_box is a (lower, upper) pair of points; a small lattice inside it
    is sampled, skipping a neighborhood of the origin where A may be
    singular.  Returns max |curl A - B| / (1 + |B|), or +inf if any sample
    is non-finite.  Second order central differences, so the residual
    scales with grid_spacing squared.
    """
    lo = np.asarray(sample_box[0], dtype=float)
    hi = np.asarray(sample_box[1], dtype=float)
    d = field.dimension
    pts = _box_lattice(lo, hi, per_axis)
    pts = pts[np.linalg.norm(pts, axis=1) > 10 * grid_spacing]
    if len(pts) == 0:
        raise RejectedInput("sample box contains no usable points")
    h = grid_spacing
    try:
        if d == 2:
            def partial(j, comp):
                e = np.zeros(2)
                e[j] = h
                return (gauge.on_points(pts + e)[:, comp]
                        - gauge.on_points(pts - e)[:, comp]) / (2 * h)
            curl = partial(0, 1) - partial(1, 0)
            bvals = field.scalar_2d(pts)
            resid = np.abs(curl - bvals) / (1.0 + np.abs(bvals))
        else:
            def partial(j, comp):
                e = np.zeros(3)
                e[j] = h
                return (gauge.on_points(pts + e)[:, comp]
                        - gauge.on_points(pts - e)[:, comp]) / (2 * h)
            curl = np.stack([partial(1, 2) - partial(2, 1),
                             partial(2, 0) - partial(0, 2),
                             partial(0, 1) - partial(1, 0)], axis=1)
            mats = field.sampler(pts + field.base_point)
            bvec = np.stack([mats[:, 2, 1], mats[:, 0, 2], mats[:, 1, 0]], axis=1)
            resid = np.linalg.norm(curl - bvec, axis=1) / (
                1.0 + np.linalg.norm(bvec, axis=1))
    except RejectedInput:
        raise
    except Exception:
        return np.inf
    if not np.all(np.isfinite(resid)):
        return np.inf
    return float(np.max(resid))


def gauge_regularity_norm(field: FieldSpec, R: float, nodes: int) -> float:
    """Weighted L2 size of the field that controls the gauge near the origin.

    Square root of the integral over |x| < R of
    |x|^(2-d) log(R/|x|)^2 |B(x + w)[x]|^2.  Divergence under quadrature
    refinement reports +inf, meaning the field fails the local square
    integrability requirement for the transversal gauge.
    """
    if R <= 0:
        raise RejectedInput("R must be positive")
    d = field.dimension

    def scalar(pts):
        return np.sum(btilde(field, pts) ** 2, axis=1)

    def weight(r):
        return r ** (2 - d) * np.log(R / r) ** 2

    value, ok = ball_integral(scalar, d, R, weight=weight, nodes=nodes,
                              n_dirs=16 if d == 2 else 32)
    if not ok or not np.isfinite(value):
        return np.inf
    return float(np.sqrt(value))


def weighted_potential_integral(gauge: GaugePotential, d: int, R: float,
                                nodes: int = 8) -> float:
    """Integral of |x|^(2-d) |A(x)|^2 over |x| < R (companion to the norm above)."""
    def scalar(pts):
        return np.sum(gauge.on_points(pts) ** 2, axis=1)

    value, ok = ball_integral(scalar, d, R, weight=lambda r: r ** (2 - d),
                              nodes=nodes, n_dirs=16 if d == 2 else 32)
    return float(value) if ok else np.inf
