"""Report bundle: every headline quantity reproduced in one run.

``reproduce`` executes all verification suites, then renders their tables
as CSV files, a combined JSON + text report, and matplotlib figures, all
under one output directory.  With a fixed seed and profile the bundle is
byte-identical across runs (figures are written without software metadata).
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from . import numerics as num
from .verify import PROFILES, run_suites

_FIG_DPI = 120


def _write_table_csv(path: Path, rows: list[dict]) -> None:
    if not rows:
        return
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(rows[0].keys()))
        writer.writeheader()
        writer.writerows(rows)


def _save(fig, path: Path) -> None:
    fig.savefig(path, dpi=_FIG_DPI, metadata={"Software": None})
    plt.close(fig)


def _fig_hermite(rows: list[dict], path: Path) -> None:
    k = [r["k"] for r in rows]
    fig, ax = plt.subplots(figsize=(6.0, 3.8))
    ax.plot(k, [r["variance_time"] for r in rows], "o", label="time variance")
    ax.plot(k, [r["variance_freq"] for r in rows], "x", label="frequency variance")
    ax.plot(k, [r["expected"] for r in rows], "-", color="0.4", label="(2k+1)/(4 pi)")
    ax.set_xlabel("index k")
    ax.set_ylabel("variance of $|h_k|^2$")
    ax.set_title("Hermite dispersions")
    ax.legend()
    fig.tight_layout()
    _save(fig, path)


def _fig_sharp(rows: list[dict], path: Path) -> None:
    n = [r["n"] for r in rows]
    fig, ax = plt.subplots(figsize=(6.0, 3.8))
    ax.plot(n, [r["sum"] for r in rows], "o", label="Hermite cumulative sum")
    ax.plot(n, [r["bound"] for r in rows], "-", color="0.4", label="sharp bound $(n+1)^2/(2\\pi)$")
    ax.plot(n, [r["displayed_bound"] for r in rows], "--", color="0.7", label="weaker companion constant")
    ax.set_xlabel("n")
    ax.set_ylabel("dispersion sum")
    ax.set_title("Cumulative mean-dispersion sums vs. lower bounds")
    ax.legend()
    fig.tight_layout()
    _save(fig, path)


def _fig_pswf(rows: list[dict], path: Path) -> None:
    fig, ax = plt.subplots(figsize=(6.0, 3.8))
    ax.semilogy([r["n"] for r in rows], [r["lambda"] for r in rows], "o-")
    ax.axvline(4.0, color="0.6", linestyle="--", label="4 T Omega")
    ax.set_xlabel("mode n")
    ax.set_ylabel("concentration eigenvalue")
    ax.set_title("Prolate eigenvalue plunge at (T, Omega) = (1, 1)")
    ax.legend()
    fig.tight_layout()
    _save(fig, path)


def _fig_landau_pollak(rows: list[dict], path: Path) -> None:
    if not rows:
        return
    fig, ax = plt.subplots(figsize=(6.0, 3.8))
    eps7 = np.array([r["seven_eps"] for r in rows])
    resid = np.array([r["residual"] for r in rows])
    ax.loglog(eps7, np.maximum(resid, 1e-18), "o", label="projection residual")
    span = np.array([eps7.min() * 0.8, eps7.max() * 1.2])
    ax.loglog(span, span, "-", color="0.4", label="7 eps ceiling")
    ax.set_xlabel("7 eps")
    ax.set_ylabel("residual")
    ax.set_title("Concentration-class projection residuals at (T, Omega) = (1, 1)")
    ax.legend()
    fig.tight_layout()
    _save(fig, path)


def _fig_codes(rows: list[dict], path: Path) -> None:
    fig, ax = plt.subplots(figsize=(6.0, 3.8))
    dims = sorted({r["dim"] for r in rows})
    for d in dims:
        sub = [r for r in rows if r["dim"] == d]
        ax.plot([r["alpha"] for r in sub], [r["best_upper"] for r in sub], "-", label=f"upper, d={d}")
        ax.plot([r["alpha"] for r in sub], [r["greedy"] for r in sub], "o", ms=3)
    ax.set_yscale("log")
    ax.set_xlabel("coherence level alpha")
    ax.set_ylabel("code size")
    ax.set_title("Spherical-code bounds (lines) vs greedy witnesses (dots)")
    ax.legend(fontsize=7)
    fig.tight_layout()
    _save(fig, path)


def _fig_power_trend(path: Path) -> None:
    from .bounds import power_law_bound

    p_values = [4.0, 6.0, 10.0, 20.0, 50.0, 100.0, 200.0]
    values = [
        power_law_bound(p, math.sqrt((2 * p - 1) / 2.0)).details["closed_form_value"]
        for p in p_values
    ]
    fig, ax = plt.subplots(figsize=(6.0, 3.8))
    ax.semilogx(p_values, values, "o-")
    ax.axhline(4.0, color="0.6", linestyle="--", label="limit 4")
    ax.set_xlabel("decay exponent p")
    ax.set_ylabel("closed-form bound")
    ax.set_title("Power-law bound at critical constant, large p")
    ax.legend()
    fig.tight_layout()
    _save(fig, path)


_TABLE_FIGURES = {
    "hermite_dispersions": _fig_hermite,
    "sharp_bound": _fig_sharp,
    "pswf_eigenvalues": _fig_pswf,
    "landau_pollak": _fig_landau_pollak,
    "code_bounds": _fig_codes,
}


def reproduce(
    out_dir,
    profile_name: str = "strict",
    seed: int = 0,
    grid: num.Grid | None = None,
    manifest_extra: dict | None = None,
) -> dict:
    """Run every suite and write the full bundle under ``out_dir``.

    Returns the bundle summary (also written as ``report.json``).
    """
    if profile_name not in PROFILES:
        raise num.DomainError(f"unknown profile {profile_name!r}")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    suites = run_suites(
        ["hermite", "pswf", "codes", "projections", "pipelines", "riesz"],
        profile_name,
        grid=grid,
        seed=seed,
    )

    outputs: list[str] = []
    tables: dict[str, list[dict]] = {}
    for suite in suites:
        tables.update(suite.tables)
    for name, rows in tables.items():
        path = out / f"{name}.csv"
        _write_table_csv(path, rows)
        outputs.append(path.name)

    for name, renderer in _TABLE_FIGURES.items():
        if name in tables and tables[name]:
            fig_path = out / f"fig_{name}.png"
            renderer(tables[name], fig_path)
            outputs.append(fig_path.name)
    trend_path = out / "fig_power_law_trend.png"
    _fig_power_trend(trend_path)
    outputs.append(trend_path.name)

    summary = {
        "profile": profile_name,
        "seed": seed,
        "passed": all(s.passed for s in suites),
        "suites": [s.to_json_dict() for s in suites],
        "outputs": sorted(outputs),
    }
    if manifest_extra:
        summary["manifest"] = manifest_extra
    with open(out / "report.json", "w") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
    with open(out / "report.txt", "w") as fh:
        fh.write("\n\n".join(s.format_text() for s in suites) + "\n")
    return summary
