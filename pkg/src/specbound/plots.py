"""Figure rendering for scenario reports.

Each helper takes already-computed report data, draws one matplotlib figure
and writes it as a PNG next to the delimited output.  The JSON and CSV
reports stay figure-free; plotting is an optional side channel.
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def _finish(fig, out_dir, name):
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / f"{name}.png"
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return str(path)


def spectrum_figure(out_dir, series, threshold=None, name="spectrum"):
    """Eigenvalues per channel, genuine vs box artifacts, with threshold line.

    series: list of (label, eigenvalues, spurious_mask).
    """
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for k, (label, vals, spur) in enumerate(series):
        genuine = [v for v, s in zip(vals, spur) if not s]
        boxed = [v for v, s in zip(vals, spur) if s]
        ax.plot([k] * len(boxed), boxed, "x", color="0.7",
                label="box artifact" if k == 0 and boxed else None)
        ax.plot([k] * len(genuine), genuine, "o", color="C0",
                label="genuine" if k == 0 and genuine else None)
    ax.set_xticks(range(len(series)), [s[0] for s in series])
    if threshold is not None:
        ax.axhline(threshold, color="C3", lw=1, ls="--", label="threshold")
    ax.set_ylabel("eigenvalue")
    ax.legend(loc="best", fontsize=8)
    return _finish(fig, out_dir, name)


def estimate_figure(out_dir, radii, values, label, name="estimate"):
    """Tail estimate values against the shell radius."""
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.plot(radii, values, "o-", color="C0")
    ax.set_xlabel("shell radius")
    ax.set_ylabel(label)
    return _finish(fig, out_dir, name)


def residual_figure(out_dir, t_values, residuals, slope=None, name="residuals"):
    """Commutator-vs-closed-form residual against the quotient parameter."""
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.loglog(t_values, residuals, "o-", color="C0")
    if slope is not None:
        ax.set_title(f"fitted order {slope:.2f}")
    ax.set_xlabel("t")
    ax.set_ylabel("|quotient - closed form|")
    return _finish(fig, out_dir, name)


def decay_figure(out_dir, radii, values, ylabel, name="decay"):
    """Log-log decay/growth plot for ball-averaged field sequences."""
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.loglog(radii, values, "o-", color="C0")
    ax.set_xlabel("ball radius")
    ax.set_ylabel(ylabel)
    return _finish(fig, out_dir, name)


def kato_profile_figure(out_dir, profile, name="kato_profile"):
    """Small-radius class integral against alpha."""
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    alphas = [p[0] for p in profile]
    vals = [p[1] for p in profile]
    ax.loglog(alphas, vals, "o-", color="C0")
    ax.set_xlabel("alpha")
    ax.set_ylabel("short-range integral")
    return _finish(fig, out_dir, name)
