"""Acceptance suite: one test per criterion, at the stated tolerances.

Each test prints a single pass/fail line (visible with pytest -s, or in the
captured output on failure) and asserts the criterion, including its wall
clock budget where one is stated.
"""

import math
import time

import numpy as np
import pytest

import specbound as sb


def criterion(num, description, passed):
    print(f"criterion {num:2d} {'PASS' if passed else 'FAIL'}: {description}")
    assert passed, f"criterion {num} failed: {description}"


def wvn_point(pts):
    return sb.wigner_von_neumann(np.linalg.norm(np.atleast_2d(pts), axis=1))


def test_criterion_01_oscillating_tail_threshold_pipeline():
    t0 = time.monotonic()
    radii = list(np.linspace(100.0, 500.0, 17))
    o1 = sb.omega1_estimate(wvn_point, radii, 600)
    o2 = sb.omega2_estimate(wvn_point, radii, 600)
    rep = sb.optimize_split(0.0, 8.0, 16.0)
    elapsed = time.monotonic() - t0
    ok = (o1.stabilized and abs(o1.limit - 8.0) <= 0.05
          and o2.stabilized and abs(o2.limit - 16.0) <= 0.1
          and abs(rep.lam - 8.0) <= 1e-12
          and elapsed < 1.0)
    criterion(1, f"tail bounds ({o1.limit:.4f}, {o2.limit:.4f}) and "
                 f"optimized threshold {rep.lam} in {elapsed:.2f} s", ok)


def test_criterion_02_embedded_eigenvalue():
    t0 = time.monotonic()
    channel = sb.wigner_von_neumann_channel()
    rep = sb.classify_spurious(channel, (0.9, 1.1), 200.0, 200000, 1e-7,
                               threshold=8.0)
    genuine = rep.genuine()
    count_ok = len(genuine) == 1 and abs(genuine[0] - 1.0) <= 5e-3
    bigger = sb.discretize(channel, 300.0, 300000)
    nearby = sb.eigen_in_window(bigger, (0.99, 1.01), 1e-8)
    drift = float(np.min(np.abs(nearby - genuine[0]))) if count_ok else math.inf
    elapsed = time.monotonic() - t0
    ok = count_ok and drift < 1e-3 and elapsed < 30.0
    criterion(2, f"one embedded state at {genuine[0] if count_ok else None}, "
                 f"box-growth drift {drift:.2e}, {elapsed:.1f} s", ok)


def test_criterion_03_radial_field_sharpness():
    t0 = time.monotonic()
    reference_ok = True
    all_flagged = True
    for m in (1, 2, 3):
        ch = sb.miller_simon_channel(lambda r: 1.0 / r, m)
        low = sb.classify_spurious(ch, (0.0, 0.999), 400.0, 40000, 1e-7,
                                   threshold=1.0)
        ref = sb.coulomb_channel_levels(1.0, m, 3)
        got = sorted(low.genuine())[:3]
        reference_ok = reference_ok and len(got) == 3 and all(
            abs(a - b) <= 2e-3 for a, b in zip(got, ref))
        high = sb.classify_spurious(ch, (1.01, 4.0), 400.0, 40000, 1e-7,
                                    threshold=1.0)
        all_flagged = all_flagged and bool(high.spurious.all()) \
            and len(high.eigenvalues) > 100
    elapsed = time.monotonic() - t0
    ok = reference_ok and all_flagged and elapsed < 60.0
    criterion(3, f"channel series match and continuum window fully flagged, "
                 f"{elapsed:.1f} s", ok)


def test_criterion_04_endpoint_optimizer():
    t0 = time.monotonic()
    rng = np.random.default_rng(42)
    s_grid = np.linspace(0.0, 1.0, 1001)
    bs = rng.uniform(0.0, 10.0, 10_000) + 1e-12
    cs = rng.uniform(0.0, 10.0, 10_000) + 1e-12
    min_ok = True
    branch_ok = True
    for b, c in zip(bs, cs):
        grid = sb.bang_bang_g(b, c, s_grid)
        g0, g1 = grid[0], grid[-1]
        if np.min(grid) < min(g0, g1) - 1e-12:
            min_ok = False
            break
        crit = c - 2.0 * b - 2.0
        if abs(crit) > 1e-9:
            if (g1 < g0) != (crit > 0):
                branch_ok = False
                break
    const = sb.bang_bang_g(0.0, 2.0, s_grid)
    const_ok = bool(np.max(np.abs(const - 2.0)) <= 1e-12)
    elapsed = time.monotonic() - t0
    ok = min_ok and branch_ok and const_ok and elapsed < 1.0
    criterion(4, f"10^4 random splittings endpoint-optimal, constant case "
                 f"flat, {elapsed:.2f} s", ok)


def test_criterion_05_threshold_arithmetic():
    rng = np.random.default_rng(7)
    pure = all(abs(sb.compute_lambda(0.0, 0.0, w) - w / 2.0) <= 1e-12
               for w in rng.uniform(0.0, 10.0, 100))
    scale = True
    for _ in range(100):
        b, w1, w2 = rng.uniform(0.0, 5.0, 3)
        t = rng.uniform(0.1, 3.0)
        lhs = sb.compute_lambda(t * b, t * w1, t**2 * w2)
        rhs = t**2 * sb.compute_lambda(b, w1, w2)
        scale = scale and abs(lhs - rhs) <= 1e-10 * max(1.0, abs(rhs))
    criterion(5, "pure-virial value and quadratic scale covariance",
              pure and scale)


def test_criterion_06_transversal_gauge():
    constant = sb.constant_field_2d(1.0)
    gauge_c = sb.poincare_gauge(constant, 16)
    rng = np.random.default_rng(11)
    pts = rng.uniform(-4.0, 4.0, size=(1200, 2))
    pts = pts[np.linalg.norm(pts, axis=1) > 1e-3][:1000]
    exact = 0.5 * np.stack([-pts[:, 1], pts[:, 0]], axis=1)
    gauge_err = float(np.max(np.linalg.norm(gauge_c.on_points(pts) - exact,
                                            axis=1)))
    gaussian = sb.radial_field(lambda r: np.exp(-(r**2)))
    gauge_g = sb.poincare_gauge(gaussian, 16)
    curl_resid = sb.curl_check(gauge_g, gaussian, 1e-3,
                               (np.array([0.3, 0.3]), np.array([2.0, 2.0])))
    avals = gauge_g.on_points(pts)
    dots = np.abs(np.sum(pts * avals, axis=1))
    scale = np.linalg.norm(pts, axis=1) * np.linalg.norm(avals, axis=1)
    keep = scale > 0
    transversality = float(np.max(dots[keep] / scale[keep]))
    ok = gauge_err < 1e-10 and curl_resid < 1e-5 and transversality < 1e-10
    criterion(6, f"constant gauge {gauge_err:.1e}, curl {curl_resid:.1e}, "
                 f"transversality {transversality:.1e}", ok)


def test_criterion_07_commutator_identity_bench():
    t0 = time.monotonic()
    field = sb.radial_field(lambda r: np.exp(-(r**2)))
    V = sb.radial_potential(lambda r: np.exp(-(r**2) / 2), dimension=2,
                            virial=lambda r: -(r**2) * np.exp(-(r**2) / 2))
    gauge = sb.poincare_gauge(field, 16)
    phi = sb.gaussian_state(2, 10.0, 0.05, width=1.0)
    rhs = sb.virial_rhs(gauge, field, V, phi)
    t_list = [0.1, 0.05, 0.025]
    quotients = [sb.commutator_quotient(gauge, V, phi, t) for t in t_list]
    slope = sb.richardson_order(t_list, quotients)
    extrap = (4.0 * quotients[2] - quotients[1]) / 3.0
    resid = abs(extrap - rhs) / abs(rhs)
    elapsed = time.monotonic() - t0
    ok = slope >= 1.5 and resid < 1e-2 and elapsed < 60.0
    criterion(7, f"quotient order {slope:.2f}, extrapolated residual "
                 f"{resid:.2e}, {elapsed:.1f} s", ok)


def test_criterion_08_kato_virial_and_localization():
    phi = sb.gaussian_state(2, 19.0, 0.02, width=3.0)
    V1 = lambda pts: np.exp(-np.sum(np.atleast_2d(pts) ** 2, axis=1))
    xV1 = lambda pts: np.atleast_2d(pts) * V1(pts)[:, None]
    kato = sb.kato_virial(V1, xV1, None, phi)
    pts = phi.points()
    r2 = np.sum(pts**2, axis=1)
    direct = float(np.sum(-2.0 * r2 * np.exp(-r2)
                          * np.abs(phi.values.reshape(-1)) ** 2) * phi.h**2)
    kato_rel = abs(kato - direct) / abs(direct)

    def step_pair(c):
        def xi(p):
            r = np.linalg.norm(np.atleast_2d(p), axis=1)
            return 0.5 * (1.0 + np.tanh(2.0 * (c - r)))

        def grad_xi(p):
            p = np.atleast_2d(p)
            r = np.linalg.norm(p, axis=1)
            sech2 = 1.0 / np.cosh(2.0 * (c - r)) ** 2
            coef = np.where(r > 0, -sech2 / np.where(r > 0, r, 1.0), 0.0)
            return coef[:, None] * p

        return xi, grad_xi

    xi, grad_xi = step_pair(3.25)
    res = [sb.ims_check(xi, grad_xi, None, None,
                        sb.gaussian_state(2, 6.5, h, width=1.0))
           for h in (0.1, 0.05)]
    ims_slope = float(np.log2(res[0] / res[1]))
    ok = kato_rel < 1e-5 and 1.8 <= ims_slope <= 2.2
    criterion(8, f"Kato-route virial relative error {kato_rel:.1e}, "
                 f"localization residual order {ims_slope:.2f}", ok)


def test_criterion_09_energy_boost():
    L, h, c = 24.0, 0.02, 12.0
    psi, E, eta = sb.grid_eigenpair_1d(lambda r: (r - c) ** 2, L, h, index=0)
    assert eta < 1e-6
    V = sb.radial_potential(lambda r: (r - c) ** 2, dimension=1,
                            virial=lambda r: 2.0 * r * (r - c))
    w = sb.WeightFunction(mu=0.3, eps=0.5, lam=1.0)
    res = sb.energy_boost_residual(None, V, psi, E, w)
    psi_f = np.exp(w.F(psi.points())).reshape(psi.values.shape) * psi.values
    nf2 = float(np.sum(np.abs(psi_f) ** 2) * h)
    bound = 10.0 * (eta + h**2) * nf2
    ok = res <= bound
    criterion(9, f"weighted-form energy shift residual {res:.2e} within "
                 f"{bound:.2e}", ok)


def test_criterion_10_kato_norms():
    one = lambda pts: np.ones(len(np.atleast_2d(pts)))
    norm3 = sb.kato_norm(one, 3, 12).norm
    norm2 = sb.kato_norm(one, 2, 12).norm
    want2 = np.pi * np.log(2.0) / 4.0 + np.pi / 8.0
    ok = abs(norm3 - 2 * np.pi) <= 1e-6 and abs(norm2 - want2) <= 1e-6
    criterion(10, f"unit potential norms {norm3:.8f} (3d), {norm2:.8f} (2d)",
              ok)


def test_criterion_11_ball_averaged_field_decay():
    radii = [1.0, 2.0, 4.0, 8.0, 16.0]
    centers = [np.array([2.0 * R, 0.0]) for R in radii]
    grow = sb.weyl_vanishing(sb.constant_field_2d(1.0), centers, radii)
    exponent = float(np.polyfit(np.log(radii), np.log(grow.c_values), 1)[0])
    # |B| <= 1/R^2 near the centers puts a 1/R envelope on B(x_n + y)[y]
    decay = sb.weyl_vanishing(sb.radial_field(lambda r: r**-2.0), centers,
                              radii)
    monotone = all(b < a for a, b in zip(decay.c_values, decay.c_values[1:]))
    ok = abs(exponent - 2.0) <= 0.05 and monotone \
        and decay.c_values[-1] < decay.c_values[0] / 100.0
    criterion(11, f"constant-field growth exponent {exponent:.3f}, decaying "
                  f"field averages shrink monotonically", ok)
