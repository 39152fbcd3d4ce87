"""Scenario-driven command line front end.

`specbound run <config> --out <path> --format json|csv` reads one scenario
from a JSON config, orchestrates the library modules, and writes a
machine-readable report; `specbound list-scenarios` documents every
scenario kind and its parameter schema.  Reports are deterministic for a
fixed config, seed and version: wall time is printed to stderr instead of
being embedded in the file.  `--plots DIR` additionally renders figures
alongside the delimited output.
"""

import argparse
import csv
import json
import math
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .asymptotics import (default_centers, kato_norm, lp_locunif_norm,
                          weyl_vanishing)
from .channels import aharonov_bohm_channel, miller_simon_channel, \
    wigner_von_neumann, wigner_von_neumann_channel
from .eigensolve import classify_spurious, coulomb_channel_levels
from .errors import ConfigError, SpecboundError
from .fields import (FieldSpec, PotentialSpec, aharonov_bohm_field,
                     curl_check, gauge_regularity_norm, poincare_gauge,
                     radial_field)
from .threshold import (aharonov_bohm_threshold, bang_bang_g, compute_lambda,
                        dirac_window, optimize_split, pauli_threshold)
from .virial import (commutator_quotient, gaussian_state, richardson_order,
                     virial_rhs)
from ._quad import ball_volume

# ---------------------------------------------------------------------------
# expression profiles and presets

_EXPR_FUNCS = {name: getattr(np, name) for name in (
    "sin", "cos", "tan", "exp", "log", "sqrt", "abs", "arctan", "sinh",
    "cosh", "tanh", "where", "sign", "minimum", "maximum")}
_EXPR_FUNCS["pi"] = np.pi


def radial_expression(expr: str):
    """Compile a radial profile from a whitelisted numpy expression in r."""
    try:
        code = compile(expr, "<expression>", "eval")
    except SyntaxError as exc:
        raise ConfigError(f"cannot parse expression {expr!r}: {exc}") from exc
    unknown = set(code.co_names) - set(_EXPR_FUNCS) - {"r"}
    if unknown:
        raise ConfigError(f"expression uses unknown names {sorted(unknown)}")

    def profile(r):
        env = dict(_EXPR_FUNCS)
        env["r"] = np.asarray(r, dtype=float)
        return np.asarray(eval(code, {"__builtins__": {}}, env), dtype=float)

    return profile


_FIELD_KEYS = {"profile", "b0", "scale", "alpha", "expr", "flux"}


def build_field(cfg: dict) -> FieldSpec:
    """Radial 2d field (or flux line) from a preset dictionary."""
    _reject_unknown(cfg, _FIELD_KEYS, "field")
    profile = cfg.get("profile", "constant")
    b0 = _number(cfg.get("b0", 1.0))
    if profile == "flux":
        return aharonov_bohm_field(_number(cfg.get("flux", b0)))
    if profile == "constant":
        return radial_field(lambda r: np.full_like(np.asarray(r, float), b0))
    if profile == "gaussian":
        scale = _number(cfg.get("scale", 1.0))
        return radial_field(lambda r: b0 * np.exp(-(np.asarray(r, float) / scale) ** 2))
    if profile == "inverse_r":
        return radial_field(lambda r: b0 / np.asarray(r, float))
    if profile == "power":
        alpha = _number(cfg.get("alpha", 1.0))
        return radial_field(lambda r: b0 * np.asarray(r, float) ** (-alpha))
    if profile == "expression":
        if "expr" not in cfg:
            raise ConfigError("missing required key 'expr' for expression field")
        return radial_field(radial_expression(cfg["expr"]))
    raise ConfigError(f"unknown field profile {profile!r}")


_POTENTIAL_KEYS = {"kind", "v0", "sigma", "z", "expr", "virial_expr"}


def build_radial_potential(cfg: dict):
    """(radial callable, radial virial callable or None) from a preset."""
    _reject_unknown(cfg, _POTENTIAL_KEYS, "potential")
    kind = cfg.get("kind", "zero")
    if kind == "zero":
        zero = lambda r: np.zeros_like(np.asarray(r, float))
        return zero, zero
    if kind == "wigner_von_neumann":
        return wigner_von_neumann, None
    if kind == "gaussian":
        v0 = _number(cfg.get("v0", 1.0))
        sigma = _number(cfg.get("sigma", 1.0))

        def V(r):
            r = np.asarray(r, float)
            return v0 * np.exp(-(r**2) / (2.0 * sigma**2))

        def vir(r):
            r = np.asarray(r, float)
            return -v0 * r**2 / sigma**2 * np.exp(-(r**2) / (2.0 * sigma**2))

        return V, vir
    if kind == "coulomb":
        z = _number(cfg.get("z", 1.0))
        return (lambda r: -z / np.asarray(r, float),
                lambda r: z / np.asarray(r, float))
    if kind == "expression":
        if "expr" not in cfg:
            raise ConfigError("missing required key 'expr' for expression potential")
        V = radial_expression(cfg["expr"])
        vir = radial_expression(cfg["virial_expr"]) if "virial_expr" in cfg else None
        return V, vir
    raise ConfigError(f"unknown potential kind {kind!r}")


def build_potential_spec(cfg: dict, dimension=2) -> PotentialSpec:
    V, vir = build_radial_potential(cfg)

    def pt(pts):
        return V(np.linalg.norm(np.atleast_2d(pts), axis=1))

    vir_pt = None
    if vir is not None:
        def vir_pt(pts):  # noqa: F811
            return vir(np.linalg.norm(np.atleast_2d(pts), axis=1))
    return PotentialSpec(pt, virial=vir_pt, dimension=dimension)


# ---------------------------------------------------------------------------
# config plumbing

def _number(x):
    if isinstance(x, str):
        if x.lower() in ("inf", "+inf", "infinity"):
            return math.inf
        raise ConfigError(f"expected a number, got {x!r}")
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise ConfigError(f"expected a number, got {x!r}")
    return float(x)


def _require(d: dict, key: str, kind: str):
    if key not in d:
        raise ConfigError(f"missing required key '{key}' for scenario kind '{kind}'")
    return d[key]


def _reject_unknown(d: dict, allowed, ctx: str):
    unknown = sorted(set(d) - set(allowed))
    if unknown:
        raise ConfigError(f"unknown key(s) {unknown} in {ctx}")


def _numerics(config: dict, defaults: dict) -> dict:
    given = config.get("numerics", {})
    _reject_unknown(given, defaults, "numerics")
    out = dict(defaults)
    out.update(given)
    return out


def _window(value, kind):
    try:
        a, b = float(value[0]), float(value[1])
    except Exception as exc:
        raise ConfigError(f"'window' for kind '{kind}' must be a pair") from exc
    if not a < b:
        raise ConfigError(f"'window' for kind '{kind}' must be increasing")
    return (a, b)


# ---------------------------------------------------------------------------
# scenario runners: each returns (outputs, verdicts, rows, plot_fn)

def _run_threshold(params, numerics, ctx):
    _reject_unknown(params, {"beta", "omega1", "omega2", "expected_lambda",
                             "expected_tol"}, "parameters")
    beta = _number(_require(params, "beta", "threshold"))
    omega1 = _number(_require(params, "omega1", "threshold"))
    omega2 = _number(_require(params, "omega2", "threshold"))
    lam = compute_lambda(beta, omega1, omega2)
    # algebraically independent route: (s + sqrt(s^2+2w))^2/4
    # equals (s^2 + w + s sqrt(s^2+2w))/2
    if math.isfinite(lam):
        s = beta + omega1
        expanded = 0.5 * (s * s + omega2 + s * math.sqrt(s * s + 2.0 * omega2))
        recheck = abs(lam - expanded) <= 1e-12 * max(1.0, lam)
    else:
        recheck = True
    verdicts = [("lambda_recomputation", recheck)]
    if "expected_lambda" in params:
        tol = _number(params.get("expected_tol", 1e-9))
        verdicts.append(("matches_expected",
                         abs(lam - _number(params["expected_lambda"])) <= tol))
    outputs = {"beta": beta, "omega1": omega1, "omega2": omega2, "lambda": lam}
    rows = [("threshold", "lambda", 0, "", lam)]
    return outputs, verdicts, rows, None


def _run_optimize_split(params, numerics, ctx):
    _reject_unknown(params, {"beta", "omega1", "omega2", "expected_lambda",
                             "expected_tol"}, "parameters")
    beta = _number(_require(params, "beta", "optimize_split"))
    omega1 = _number(_require(params, "omega1", "optimize_split"))
    omega2 = _number(_require(params, "omega2", "optimize_split"))
    rep = optimize_split(beta, omega1, omega2)
    endpoint_ok = True
    if omega1 > 0:
        b, c = beta / omega1, omega2 / omega1**2
        grid = [bang_bang_g(b, c, s) for s in np.linspace(0.0, 1.0, 101)]
        endpoint_ok = min(grid) >= min(bang_bang_g(b, c, 0.0),
                                       bang_bang_g(b, c, 1.0)) - 1e-12
    crit = omega2 - 2.0 * omega1 * (beta + omega1)
    if rep.split_parameter == "constant":
        branch_ok = abs(crit) <= 1e-9 * max(1.0, omega2) or omega1 == 0
    else:
        branch_ok = (rep.split_parameter == 1.0) == (crit > 0)
    verdicts = [("endpoint_optimal", bool(endpoint_ok)),
                ("branch_consistent", bool(branch_ok))]
    if "expected_lambda" in params:
        tol = _number(params.get("expected_tol", 1e-9))
        verdicts.append(("matches_expected",
                         abs(rep.lam - _number(params["expected_lambda"])) <= tol))
    outputs = {"beta": beta, "omega1": omega1, "omega2": omega2,
               "lambda": rep.lam, "split_parameter": rep.split_parameter,
               "endpoints": rep.provenance}
    rows = [("threshold", "lambda", 0, "", rep.lam)]
    return outputs, verdicts, rows, None


def _run_pauli(params, numerics, ctx):
    _reject_unknown(params, {"beta", "omega"}, "parameters")
    beta = _number(_require(params, "beta", "pauli"))
    omega = _number(_require(params, "omega", "pauli"))
    lam_p = pauli_threshold(beta, omega)
    verdicts = [("within_field_cap", lam_p <= 4.0 * beta**2 + 1e-12)]
    outputs = {"beta": beta, "omega": omega, "lambda_p": lam_p}
    rows = [("threshold", "lambda_p", 0, "", lam_p)]
    return outputs, verdicts, rows, None


def _run_dirac(params, numerics, ctx):
    _reject_unknown(params, {"beta", "omega", "mass"}, "parameters")
    beta = _number(_require(params, "beta", "dirac"))
    omega = _number(_require(params, "omega", "dirac"))
    mass = _number(_require(params, "mass", "dirac"))
    lo, hi = dirac_window(beta, omega, mass)
    verdicts = [("window_symmetric", lo == -hi),
                ("window_contains_gap", hi >= mass)]
    outputs = {"beta": beta, "omega": omega, "mass": mass,
               "window": [lo, hi]}
    rows = [("threshold", "dirac_edge", 0, "", hi)]
    return outputs, verdicts, rows, None


def _solve_channels(channels, window, numerics, threshold, threads, seed):
    results = {}
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = {
            key: pool.submit(classify_spurious, ch, window,
                             numerics["R_max"], int(numerics["N"]),
                             numerics["tol"], threshold, seed=seed)
            for key, ch in channels.items()
        }
        for key, fut in futures.items():
            results[key] = fut.result()
    return results


def _channel_rows(reports):
    rows = []
    for key in sorted(reports):
        rep = reports[key]
        for i, lam in enumerate(rep.eigenvalues):
            rows.append(("eigenvalue", str(key), i, "", float(lam),
                         int(rep.spurious[i]), float(rep.drift[i]),
                         float(rep.localization_ratio[i])))
    return rows


def _channel_outputs(reports):
    out = {}
    for key in sorted(reports):
        rep = reports[key]
        out[str(key)] = {
            "eigenvalues": [float(v) for v in rep.eigenvalues],
            "spurious": [bool(s) for s in rep.spurious],
            "drift": [float(v) for v in rep.drift],
            "localization_ratio": [float(v) for v in rep.localization_ratio],
            "threshold_consistent": rep.threshold_consistent,
        }
    return out


def _run_miller_simon(params, numerics, ctx):
    _reject_unknown(params, {"b0", "m_list", "window", "spurious_window",
                             "reference_count", "reference_tol",
                             "check_reference"}, "parameters")
    b0 = _number(_require(params, "b0", "miller_simon"))
    window = _window(_require(params, "window", "miller_simon"), "miller_simon")
    m_list = [int(m) for m in params.get("m_list", [1, 2, 3])]
    threshold = b0 * b0
    channels = {f"m={m}": miller_simon_channel(lambda r, _b0=b0: _b0 / r, m)
                for m in m_list}
    reports = _solve_channels(channels, window, numerics, threshold,
                              ctx["threads"], ctx["seed"])
    verdicts = [("no_genuine_above_threshold",
                 all(rep.threshold_consistent for rep in reports.values()))]
    if params.get("check_reference", True):
        count = int(params.get("reference_count", 3))
        tol = _number(params.get("reference_tol", 2e-3))
        ok = True
        for m in m_list:
            ref = coulomb_channel_levels(b0, m, count)
            ref = [e for e in ref if window[0] < e < window[1]][:count]
            got = sorted(reports[f"m={m}"].genuine())[:len(ref)]
            ok = ok and len(got) >= len(ref) and all(
                abs(g - e) <= tol for g, e in zip(got, ref))
        verdicts.append(("reference_match", bool(ok)))
    outputs = {"b0": b0, "threshold": threshold,
               "channels": _channel_outputs(reports)}
    rows = _channel_rows(reports)
    if "spurious_window" in params:
        upper = _window(params["spurious_window"], "miller_simon")
        upper_reports = _solve_channels(channels, upper, numerics, threshold,
                                        ctx["threads"], ctx["seed"])
        verdicts.append(("all_spurious_in_upper_window",
                         all(bool(np.all(rep.spurious))
                             for rep in upper_reports.values())))
        outputs["upper_window_channels"] = _channel_outputs(upper_reports)
        rows += [("upper_" + r[0],) + r[1:] for r in _channel_rows(upper_reports)]

    def plot(out_dir):
        from .plots import spectrum_figure
        series = [(k, reports[k].eigenvalues, reports[k].spurious)
                  for k in sorted(reports)]
        return [spectrum_figure(out_dir, series, threshold=threshold,
                                name="miller_simon_spectrum")]

    return outputs, verdicts, rows, plot


def _run_wigner_von_neumann(params, numerics, ctx):
    _reject_unknown(params, {"window", "expected_energy", "expected_count",
                             "energy_tol", "threshold", "estimate_omegas"},
                    "parameters")
    window = _window(params.get("window", (0.9, 1.1)), "wigner_von_neumann")
    expected_energy = _number(params.get("expected_energy", 1.0))
    expected_count = int(params.get("expected_count", 1))
    energy_tol = _number(params.get("energy_tol", 5e-3))
    threshold = _number(params.get("threshold", 8.0))
    estimates = None
    if params.get("estimate_omegas", False):
        from .asymptotics import omega1_estimate, omega2_estimate
        shells = numerics["shells"] or list(np.linspace(100.0, 500.0, 17))
        per_shell = int(numerics["samples_per_shell"])

        def point_v(pts):
            return wigner_von_neumann(
                np.linalg.norm(np.atleast_2d(pts), axis=1))

        o1 = omega1_estimate(point_v, shells, per_shell)
        o2 = omega2_estimate(point_v, shells, per_shell)
        opt = optimize_split(0.0, o1.limit, o2.limit)
        estimates = {"omega1": o1.limit, "omega2": o2.limit,
                     "omega1_stabilized": o1.stabilized,
                     "omega2_stabilized": o2.stabilized,
                     "optimized_lambda": opt.lam,
                     "split_parameter": opt.split_parameter}
    channel = wigner_von_neumann_channel()
    rep = classify_spurious(channel, window, numerics["R_max"],
                            int(numerics["N"]), numerics["tol"], threshold,
                            seed=ctx["seed"])
    genuine = sorted(rep.genuine())
    count_ok = len(genuine) == expected_count
    energy_ok = count_ok and all(abs(g - expected_energy) <= energy_tol
                                 for g in genuine)
    verdicts = [("embedded_count_matches", bool(count_ok)),
                ("embedded_energy_matches", bool(energy_ok)),
                ("no_genuine_above_threshold", bool(rep.threshold_consistent))]
    outputs = {"window": list(window), "genuine": [float(g) for g in genuine],
               "channels": _channel_outputs({"s_wave": rep})}
    if estimates is not None:
        outputs["estimates"] = estimates
        verdicts.append(("estimates_stabilized",
                         bool(estimates["omega1_stabilized"]
                              and estimates["omega2_stabilized"])))
    rows = _channel_rows({"s_wave": rep})

    def plot(out_dir):
        from .plots import spectrum_figure
        return [spectrum_figure(out_dir, [("s_wave", rep.eigenvalues,
                                           rep.spurious)],
                                threshold=expected_energy,
                                name="wigner_von_neumann_spectrum")]

    return outputs, verdicts, rows, plot


def _run_aharonov_bohm(params, numerics, ctx):
    _reject_unknown(params, {"omega1", "omega2", "flux", "m_list", "window",
                             "potential"}, "parameters")
    omega1 = _number(_require(params, "omega1", "aharonov_bohm"))
    omega2 = _number(_require(params, "omega2", "aharonov_bohm"))
    lam = aharonov_bohm_threshold(omega1, omega2)
    verdicts = [("threshold_nonnegative", lam >= 0.0)]
    outputs = {"omega1": omega1, "omega2": omega2, "lambda": lam}
    rows = [("threshold", "lambda", 0, "", lam)]
    plot = None
    if "flux" in params:
        flux = _number(params["flux"])
        m_list = [int(m) for m in params.get("m_list", [0, 1, -1])]
        window = _window(params.get("window", (lam + 0.01, lam + 4.0)),
                         "aharonov_bohm")
        pot, _ = build_radial_potential(params.get("potential", {"kind": "zero"}))
        channels = {f"m={m}": aharonov_bohm_channel(flux, m, V_radial=pot)
                    for m in m_list}
        reports = _solve_channels(channels, window, numerics, lam,
                                  ctx["threads"], ctx["seed"])
        verdicts.append(("no_genuine_above_threshold",
                         all(rep.threshold_consistent
                             for rep in reports.values())))
        outputs["channels"] = _channel_outputs(reports)
        rows += _channel_rows(reports)

        def plot(out_dir):  # noqa: F811
            from .plots import spectrum_figure
            series = [(k, reports[k].eigenvalues, reports[k].spurious)
                      for k in sorted(reports)]
            return [spectrum_figure(out_dir, series, threshold=lam,
                                    name="flux_channel_spectrum")]

    return outputs, verdicts, rows, plot


def _run_custom_channel(params, numerics, ctx):
    _reject_unknown(params, {"m", "potential", "window", "threshold", "label"},
                    "parameters")
    m = _number(_require(params, "m", "custom_channel"))
    window = _window(_require(params, "window", "custom_channel"),
                     "custom_channel")
    pot, _ = build_radial_potential(_require(params, "potential",
                                             "custom_channel"))
    threshold = _number(params["threshold"]) if "threshold" in params else None
    channel = aharonov_bohm_channel(0.0, m, V_radial=pot)
    rep = classify_spurious(channel, window, numerics["R_max"],
                            int(numerics["N"]), numerics["tol"], threshold,
                            seed=ctx["seed"])
    verdicts = [("solve_succeeded", True)]
    if threshold is not None:
        verdicts.append(("no_genuine_above_threshold",
                         bool(rep.threshold_consistent)))
    key = params.get("label", f"m={m}")
    outputs = {"channels": _channel_outputs({key: rep})}
    rows = _channel_rows({key: rep})
    return outputs, verdicts, rows, None


def _run_virial_bench(params, numerics, ctx):
    _reject_unknown(params, {"field", "potential", "state_width", "min_slope",
                             "max_residual"}, "parameters")
    field = build_field(params.get("field", {"profile": "gaussian"}))
    pot = build_potential_spec(params.get("potential",
                                          {"kind": "gaussian", "sigma": 1.0}))
    width = _number(params.get("state_width", 1.0))
    min_slope = _number(params.get("min_slope", 1.5))
    max_residual = _number(params.get("max_residual", 1e-2))
    L, h = numerics["grid_L"], numerics["h"]
    t_list = sorted((float(t) for t in numerics["t_list"]), reverse=True)
    gauge = poincare_gauge(field, int(numerics["quad_nodes"]))
    phi = gaussian_state(2, L, h, width=width)
    rhs = virial_rhs(gauge, field, pot, phi)
    quotients = [commutator_quotient(gauge, pot, phi, t) for t in t_list]
    residuals = [abs(q - rhs) for q in quotients]
    slope = richardson_order(t_list, quotients)
    extrapolated = (4.0 * quotients[-1] - quotients[-2]) / 3.0 \
        if len(quotients) >= 2 else quotients[-1]
    rel_resid = abs(extrapolated - rhs) / max(abs(rhs), 1e-300)
    verdicts = [("slope_ok", slope >= min_slope),
                ("residual_ok", rel_resid <= max_residual)]
    outputs = {"closed_form": rhs, "quotients": dict(zip(map(str, t_list),
                                                         quotients)),
               "slope": slope, "extrapolated": extrapolated,
               "extrapolated_relative_residual": rel_resid}
    rows = [("residual", "commutator", i, t, r)
            for i, (t, r) in enumerate(zip(t_list, residuals))]

    def plot(out_dir):
        from .plots import residual_figure
        return [residual_figure(out_dir, t_list, residuals, slope,
                                name="virial_residuals")]

    return outputs, verdicts, rows, plot


def _run_gauge_audit(params, numerics, ctx):
    _reject_unknown(params, {"field", "transversal_tol", "curl_tol"},
                    "parameters")
    field = build_field(_require(params, "field", "gauge_audit"))
    transversal_tol = _number(params.get("transversal_tol", 1e-10))
    curl_tol = _number(params.get("curl_tol", 1e-5))
    gauge = poincare_gauge(field, int(numerics["quad_nodes"]))
    rng = np.random.default_rng(ctx["seed"])
    pts = rng.uniform(-3.0, 3.0, size=(int(numerics["n_points"]), 2))
    pts = pts[np.linalg.norm(pts, axis=1) > 0.05]
    avals = gauge.on_points(pts)
    dots = np.abs(np.sum(pts * avals, axis=1))
    scale = np.linalg.norm(pts, axis=1) * np.linalg.norm(avals, axis=1)
    mask = scale > 0
    transversality = float(np.max(dots[mask] / scale[mask])) if mask.any() else 0.0
    box = (np.array([0.3, 0.3]), np.array([2.0, 2.0]))
    curl_residual = curl_check(gauge, field, numerics["h"], box)
    reg = gauge_regularity_norm(field, numerics["R_max"],
                                int(numerics["quad_nodes"]))
    verdicts = [("transversal_ok", transversality <= transversal_tol),
                ("curl_ok", curl_residual < curl_tol),
                ("regularity_finite", math.isfinite(reg))]
    outputs = {"transversality": transversality,
               "curl_residual": curl_residual, "regularity_norm": reg}
    rows = [("audit", "transversality", 0, "", transversality),
            ("audit", "curl_residual", 0, "", curl_residual),
            ("audit", "regularity_norm", 0, "", reg)]
    return outputs, verdicts, rows, None


def _run_kato_audit(params, numerics, ctx):
    _reject_unknown(params, {"potential", "d", "p", "expected_norm",
                             "expected_tol"}, "parameters")
    pot, _ = build_radial_potential(_require(params, "potential", "kato_audit"))
    d = int(params.get("d", 2))

    def point_V(pts):
        return pot(np.linalg.norm(np.atleast_2d(pts), axis=1))

    report = kato_norm(point_V, d, int(numerics["quad_nodes"]))
    outputs = {"dimension": d, "norm": report.norm,
               "kato_class": report.kato_class,
               "alpha_profile": [[a, v] for a, v in report.alpha_profile]}
    verdicts = [("kato_class_member", bool(report.kato_class))]
    if "p" in params:
        p = _number(params["p"])
        lp = lp_locunif_norm(point_V, p, default_centers(d))
        outputs["lp_locunif_norm"] = lp
        outputs["p"] = p
    if "expected_norm" in params:
        tol = _number(params.get("expected_tol", 1e-6))
        verdicts.append(("matches_expected",
                         abs(report.norm - _number(params["expected_norm"]))
                         <= tol))
    rows = [("kato", "alpha_profile", i, a, v)
            for i, (a, v) in enumerate(report.alpha_profile)]
    rows.append(("kato", "norm", 0, "", report.norm))

    def plot(out_dir):
        from .plots import kato_profile_figure
        return [kato_profile_figure(out_dir, report.alpha_profile)]

    return outputs, verdicts, rows, plot


def _run_weyl_audit(params, numerics, ctx):
    _reject_unknown(params, {"field", "R_list", "center_factor", "expect"},
                    "parameters")
    field = build_field(_require(params, "field", "weyl_audit"))
    radii = [
        _number(v) for v in _require(params, "R_list", "weyl_audit")]
    factor = _number(params.get("center_factor", 2.0))
    centers = [np.array([factor * R, 0.0]) for R in radii]
    report = weyl_vanishing(field, centers, radii,
                            quad_nodes=int(numerics["quad_nodes"]))
    c = report.c_values
    expect = params.get("expect", "decay")
    if expect == "decay":
        ok = all(b < a for a, b in zip(c, c[1:]))
        verdicts = [("c_decreasing", bool(ok))]
    else:
        exponent = _number(expect.get("exponent", 2.0))
        tol = _number(expect.get("tol", 0.05))
        slope = float(np.polyfit(np.log(radii), np.log(c), 1)[0])
        verdicts = [("growth_exponent_matches", abs(slope - exponent) <= tol)]
    grad = [report.tent_constant_sq * ball_volume(2) / R**2 for R in radii]
    chain_ok = all(ray <= g + 4.0 * report.tent_constant_sq * cn * 1.01 + 1e-12
                   for ray, g, cn in zip(report.rayleigh, grad, c))
    verdicts.append(("rayleigh_chain", bool(chain_ok)))
    outputs = {"radii": radii, "c_values": c, "rayleigh": report.rayleigh,
               "tent_constant_sq": report.tent_constant_sq}
    rows = [("ball_average", "c", i, R, v)
            for i, (R, v) in enumerate(zip(radii, c))]
    rows += [("rayleigh", "tent", i, R, v)
             for i, (R, v) in enumerate(zip(radii, report.rayleigh))]

    def plot(out_dir):
        from .plots import decay_figure
        return [decay_figure(out_dir, radii, c, "ball-averaged field size",
                             name="weyl_decay")]

    return outputs, verdicts, rows, plot


_NUMERIC_DEFAULTS = {
    "R_max": 200.0, "N": 20000, "tol": 1e-6, "quad_nodes": 16,
    "shells": None, "samples_per_shell": 600, "grid_L": 10.0, "h": 1e-3,
    "t_list": [0.1, 0.05, 0.025], "n_points": 1000,
}

_RUNNERS = {
    "threshold": _run_threshold,
    "optimize_split": _run_optimize_split,
    "pauli": _run_pauli,
    "dirac": _run_dirac,
    "aharonov_bohm": _run_aharonov_bohm,
    "miller_simon": _run_miller_simon,
    "wigner_von_neumann": _run_wigner_von_neumann,
    "custom_channel": _run_custom_channel,
    "virial_bench": _run_virial_bench,
    "gauge_audit": _run_gauge_audit,
    "kato_audit": _run_kato_audit,
    "weyl_audit": _run_weyl_audit,
}

_SCENARIO_DOCS = {
    "threshold": (
        "Evaluate the eigenvalue-free threshold "
        "lambda = (beta + omega1 + sqrt((beta + omega1)^2 + 2*omega2))^2 / 4 "
        "from the three tail bounds.",
        {"beta": "tail bound of the rotated field (required)",
         "omega1": "tail bound of |x| V1 (required)",
         "omega2": "tail bound of the positive part of x . grad V2 (required)",
         "expected_lambda": "optional reference value for a verdict",
         "expected_tol": "tolerance for the reference check"}),
    "optimize_split": (
        "Optimize the threshold over proportional splittings of the "
        "potential; the optimum is an endpoint (all mass in the Kato slot "
        "or all in the virial slot).",
        {"beta": "field tail bound (required)",
         "omega1": "Kato-slot tail bound of the full potential (required)",
         "omega2": "virial-slot tail bound of the full potential (required)",
         "expected_lambda": "optional reference value",
         "expected_tol": "tolerance for the reference check"}),
    "pauli": (
        "Threshold for the 2d spin-coupled operator: "
        "min(4 beta^2, (beta + omega + sqrt((beta + omega)^2 + 2*omega))^2 / 4).",
        {"beta": "field tail bound (required)",
         "omega": "max one-sided virial tail bound of the field (required)"}),
    "dirac": (
        "Interval (-sqrt(lambda_p + m^2), sqrt(lambda_p + m^2)) outside "
        "which the 2d Dirac operator has no eigenvalues.",
        {"beta": "field tail bound (required)",
         "omega": "virial tail bound of the field (required)",
         "mass": "particle mass (required)"}),
    "aharonov_bohm": (
        "Flux-line threshold (omega1 + sqrt(omega1^2 + 2*omega2))^2 / 4 "
        "and optional shifted-channel solves (angular momentum m - flux).",
        {"omega1": "Kato-slot tail bound (required)",
         "omega2": "virial-slot tail bound (required)",
         "flux": "optional flux coefficient to solve channels",
         "m_list": "channel angular momenta (default [0, 1, -1])",
         "window": "eigenvalue window for the channel solves",
         "potential": "radial potential preset for the channels; supply a "
                      "short-range one (a strictly free channel is scale "
                      "covariant, so its box states cannot be drift-filtered)"}),
    "miller_simon": (
        "Channels of the 2d field b0/r: half-line potentials "
        "(m^2 - 1/4)/r^2 + h^2 - 2 m h / r with h = b0; genuine eigenvalues "
        "accumulate below b0^2 and match the closed-form series "
        "b0^2 - (m b0)^2/(k + m + 1/2)^2.",
        {"b0": "field amplitude (required)",
         "m_list": "channels to solve (default [1, 2, 3])",
         "window": "eigenvalue window (required)",
         "spurious_window": "optional window expected to hold only box artifacts",
         "reference_count": "levels per channel compared to the series (default 3)",
         "reference_tol": "tolerance of the comparison (default 2e-3)",
         "check_reference": "enable the series comparison (default true)"}),
    "wigner_von_neumann": (
        "s-wave half-line operator with the oscillating potential "
        "V(r) = -32 sin r [g^3 cos r - 3 g^2 sin^3 r + g cos r + sin^3 r] "
        "/ (1+g^2)^2, g = 2r - sin 2r, which carries an embedded eigenvalue "
        "at 1 and tail -8 sin(2r)/r.",
        {"window": "eigenvalue window (default [0.9, 1.1])",
         "expected_energy": "embedded level (default 1.0)",
         "expected_count": "genuine states expected in the window (default 1)",
         "energy_tol": "tolerance on the level (default 5e-3)",
         "threshold": "eigenvalue-free threshold to check against (default 8)",
         "estimate_omegas": "also estimate the tail bounds over the shell "
                            "radii and optimize the split (default false)"}),
    "custom_channel": (
        "Half-line channel -u'' + [(m^2 - 1/4)/r^2 + V(r)] u with a "
        "user-supplied radial potential.",
        {"m": "effective angular momentum, any real (required)",
         "potential": "radial potential preset (required)",
         "window": "eigenvalue window (required)",
         "threshold": "optional threshold for the consistency verdict",
         "label": "optional report label"}),
    "virial_bench": (
        "Compare the symmetric dilation-quotient commutator "
        "2 Re q(phi, i D_t phi) with the closed expression "
        "2||(P-A)phi||^2 + 2 Re <B~ phi, (P-A) phi> - <phi, x.grad V phi> "
        "on a 2d grid; reports the Richardson slope in t and the "
        "extrapolated residual.",
        {"field": "radial field preset (default gaussian)",
         "potential": "radial potential preset with analytic virial",
         "state_width": "width of the Gaussian test state (default 1.0)",
         "min_slope": "slope verdict threshold (default 1.5)",
         "max_residual": "extrapolated relative residual bound (default 1e-2)"}),
    "gauge_audit": (
        "Construct the transversal gauge A(x) = integral of B(tx)[tx] dt "
        "and audit x . A = 0, the finite-difference curl against the field, "
        "and the weighted regularity norm.",
        {"field": "radial field preset (required)",
         "transversal_tol": "bound on |x.A| / (|x||A|) (default 1e-10)",
         "curl_tol": "bound on the curl residual (default 1e-5)"}),
    "kato_audit": (
        "Kato norm (kernel |x-y|^(2-d) for d >= 3, |ln|x-y|| for d = 2) and "
        "the small-radius class profile of a radial potential.",
        {"potential": "radial potential preset (required)",
         "d": "ambient dimension (default 2)",
         "p": "optional exponent: also report the locally uniform L^p norm",
         "expected_norm": "optional reference value",
         "expected_tol": "tolerance for the reference check (default 1e-6)"}),
    "weyl_audit": (
        "Ball-averaged field smallness R^-d int (|y|/R)^(2-d) log(R/|y|)^2 "
        "|B(x_n + y)[y]|^2 dy along escaping centers, with the tent-state "
        "Rayleigh quotient in the recentred gauge.",
        {"field": "radial field preset (required)",
         "R_list": "increasing ball radii (required)",
         "center_factor": "centers at factor * R along the x axis (default 2)",
         "expect": "'decay' or {'exponent': g, 'tol': t} growth check"}),
}


_PRESET_DOC = """\
field presets (the 'field' parameter):
  {"profile": "constant", "b0": B}          b(r) = B
  {"profile": "gaussian", "b0": B, "scale": s}   b(r) = B exp(-(r/s)^2)
  {"profile": "inverse_r", "b0": B}         b(r) = B / r
  {"profile": "power", "b0": B, "alpha": a} b(r) = B r^-a
  {"profile": "expression", "expr": "..."}  numpy expression in r
  {"profile": "flux", "flux": B}            idealized flux line
potential presets (the 'potential' parameter):
  {"kind": "zero"} | {"kind": "wigner_von_neumann"} |
  {"kind": "gaussian", "v0": V, "sigma": s} | {"kind": "coulomb", "z": Z} |
  {"kind": "expression", "expr": "...", "virial_expr": "..."}"""


def list_scenarios() -> str:
    """Human-readable schema of every scenario kind, in stable order."""
    lines = ["Scenario kinds", "=============", ""]
    for kind in _RUNNERS:
        doc, params = _SCENARIO_DOCS[kind]
        lines.append(kind)
        lines.append("-" * len(kind))
        lines.append(doc)
        lines.append("parameters:")
        for name, desc in params.items():
            lines.append(f"  {name}: {desc}")
        lines.append("numerics: R_max, N, tol, quad_nodes, shells, "
                     "samples_per_shell, grid_L, h, t_list, n_points "
                     "(all optional)")
        lines.append("")
    lines.append(_PRESET_DOC)
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# report serialization

def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (np.bool_, bool)):  # before int: bool is an int subclass
        return bool(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    return obj


_CSV_HEADER = ["record", "series", "index", "coordinate", "value",
               "spurious", "drift", "localization"]


def _write_csv(path, rows, verdicts):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(_CSV_HEADER)
        for row in rows:
            padded = list(row) + [""] * (len(_CSV_HEADER) - len(row))
            writer.writerow([repr(float(v)) if isinstance(v, (float, np.floating))
                             and not isinstance(v, bool) else v
                             for v in padded])
        for name, ok in verdicts:
            writer.writerow(["verdict", name, 0, "", repr(1.0 if ok else 0.0),
                             "", "", ""])


def _write_json(path, report):
    text = json.dumps(_plain(report), indent=2, sort_keys=True)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text + "\n")


def run(config_path, out_path, fmt="json", threads=None, seed=42,
        plots_dir=None) -> int:
    """Execute one scenario config and write the report; returns the exit code."""
    t0 = time.monotonic()
    try:
        try:
            raw = Path(config_path).read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from exc
        try:
            config = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise ConfigError(
                f"config is not valid JSON (line {exc.lineno}): {exc.msg}") from exc
        if not isinstance(config, dict):
            raise ConfigError("config must be a JSON object")
        _reject_unknown(config, {"kind", "parameters", "numerics"}, "config")
        if "kind" not in config:
            raise ConfigError("missing required key 'kind'")
        kind = config["kind"]
        if kind not in _RUNNERS:
            raise ConfigError(f"unknown scenario kind '{kind}'")
        params = config.get("parameters", {})
        if not isinstance(params, dict):
            raise ConfigError("'parameters' must be an object")
        numerics = _numerics(config, _NUMERIC_DEFAULTS)
        ctx = {"threads": threads, "seed": int(seed)}
        outputs, verdicts, rows, plot = _RUNNERS[kind](params, numerics, ctx)
    except SpecboundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    # provenance excludes run-local facts (threads, wall time) so that
    # identical config + seed + version yields byte-identical output
    report = {
        "scenario": config,
        "outputs": outputs,
        "verdicts": [{"name": name, "passed": bool(ok)} for name, ok in verdicts],
        "provenance": {"tool": "specbound", "version": __version__,
                       "seed": int(seed)},
    }
    if fmt == "json":
        _write_json(out_path, report)
    elif fmt == "csv":
        _write_csv(out_path, rows, verdicts)
    else:
        print(f"error: unknown format '{fmt}'", file=sys.stderr)
        return 1
    if plots_dir is not None and plot is not None:
        for path in plot(plots_dir):
            print(f"figure: {path}")
    for name, ok in verdicts:
        print(f"{'PASS' if ok else 'FAIL'} {name}")
    print(f"wall time: {time.monotonic() - t0:.3f} s", file=sys.stderr)
    return 0 if all(ok for _, ok in verdicts) else 2


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="specbound",
        description="Spectral-threshold laboratory for magnetic Schrodinger "
                    "operators")
    sub = parser.add_subparsers(dest="command", required=True)
    run_p = sub.add_parser("run", help="execute a scenario config")
    run_p.add_argument("config", help="path to the JSON scenario config")
    run_p.add_argument("--out", required=True, help="report output path")
    run_p.add_argument("--format", choices=["json", "csv"], default="json")
    run_p.add_argument("--threads", type=int, default=None,
                       help="bound on concurrent channel solves")
    run_p.add_argument("--seed", type=int, default=42)
    run_p.add_argument("--plots", default=None, metavar="DIR",
                       help="also render figures into DIR")
    sub.add_parser("list-scenarios", help="document every scenario kind")
    args = parser.parse_args(argv)
    if args.command == "list-scenarios":
        print(list_scenarios())
        return 0
    return run(args.config, args.out, fmt=args.format, threads=args.threads,
               seed=args.seed, plots_dir=args.plots)


if __name__ == "__main__":
    sys.exit(main())
