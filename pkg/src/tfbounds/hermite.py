"""Hermite basis, Hermite operator form, and mean-dispersion sums.

The Hermite functions used here are the ones tied to the Fourier convention
``e^{-2i pi t xi}``: eigenfunctions of the transform (``F h_k = i^{-k} h_k``)
and of ``H f = -(1/4 pi^2) f'' + t^2 f`` with eigenvalues ``(2k+1)/(2 pi)``.
They are generated by the three-term recurrence

    h_{k+1}(t) = sqrt(4 pi/(k+1)) t h_k(t) - sqrt(k/(k+1)) h_{k-1}(t)

starting from ``h_0(t) = 2^{1/4} e^{-pi t^2}``, which keeps the family
orthonormal (the recurrence is the standard normalized Hermite recurrence
after the substitution ``x = sqrt(2 pi) t``).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .numerics import (
    DomainError,
    Grid,
    SampledFunction,
    fourier_transform,
    inner_product,
    l2_norm,
    mean_and_variance,
    second_moment,
)


class HermiteConstructionError(RuntimeError):
    """Raised when the sampled basis fails its orthonormality check."""


def hermite_values(count: int, t: np.ndarray) -> np.ndarray:
    """Rows ``h_0(t) .. h_{count-1}(t)`` evaluated by the recurrence."""
    if count < 1:
        raise DomainError("need at least one Hermite function")
    t = np.asarray(t, dtype=float)
    out = np.zeros((count, t.size))
    out[0] = 2.0**0.25 * np.exp(-np.pi * t**2)
    if count > 1:
        out[1] = np.sqrt(4.0 * np.pi) * t * out[0]
    for k in range(1, count - 1):
        out[k + 1] = np.sqrt(4.0 * np.pi / (k + 1)) * t * out[k] - np.sqrt(k / (k + 1.0)) * out[k - 1]
    return out


def hermite_function(k: int, grid: Grid, shift: float = 0.0, modulation: float = 0.0) -> SampledFunction:
    """``h_k(t - shift) e^{2 pi i modulation t}`` sampled exactly on the grid.

    Shift and modulation are evaluated analytically (no grid interpolation),
    which makes translated/modulated Hermite functions exact test vectors.
    """
    t = grid.points()
    values = hermite_values(k + 1, t - shift)[k].astype(np.complex128)
    if modulation != 0.0:
        values = values * np.exp(2j * np.pi * modulation * t)
    return SampledFunction(grid, values)


@dataclass
class HermiteBasis:
    """First K Hermite functions on a grid, with construction diagnostics."""

    K: int
    grid: Grid
    functions: list[SampledFunction]
    gram_residual: float = 0.0

    def values_matrix(self) -> np.ndarray:
        return np.vstack([f.values for f in self.functions])


def build_hermite_basis(K: int, grid: Grid, gram_tol: float = 1e-8) -> HermiteBasis:
    """Sample h_0..h_{K-1} and validate orthonormality post hoc.

    The recurrence is exact in real arithmetic; the Gram residual measures
    only the quadrature/grid adequacy, so a violation means the grid is too
    coarse or too narrow for the requested K.
    """
    if K < 1:
        raise DomainError("K must be >= 1")
    rows = hermite_values(K, grid.points())
    w = grid.trapezoid_weights()
    gram = (rows * w) @ rows.T
    resid = np.abs(gram - np.eye(K))
    gram_residual = float(resid.max())
    if gram_residual > gram_tol:
        i, j = np.unravel_index(np.argmax(resid), resid.shape)
        raise HermiteConstructionError(
            f"Gram residual {gram_residual:.3e} beyond {gram_tol:.1e} at (h_{i}, h_{j}); "
            "increase the grid extent or density"
        )
    functions = [SampledFunction(grid, row.astype(np.complex128)) for row in rows]
    return HermiteBasis(K=K, grid=grid, functions=functions, gram_residual=gram_residual)


def _check_unit_norm(f: SampledFunction, tol: float = 1e-6) -> None:
    nrm = l2_norm(f)
    if abs(nrm - 1.0) > tol:
        raise NormalizationGateError(f"expected unit L2 norm, got {nrm:.12f}")


class NormalizationGateError(ValueError):
    pass


def hermite_form(f: SampledFunction, raw: bool = False) -> float:
    """Quadratic form ``<Hf, f> = int t^2 |f|^2 dt + int xi^2 |f^|^2 dxi``.

    Computed spectrally from the moments of f and its transform, avoiding
    differentiation.  Requires unit norm unless ``raw=True``.
    """
    if not raw:
        _check_unit_norm(f)
    fhat = fourier_transform(f)
    return second_moment(f) + second_moment(fhat)


def hermite_operator_fd(f: SampledFunction) -> SampledFunction:
    """``H f`` with the second derivative from a 4th-order centered stencil.

    Test-oracle route, independent of the spectral path used by
    :func:`hermite_form`.  Values beyond the grid are treated as zero, which
    is exact for functions that decay within the grid.
    """
    h = f.grid.spacing
    v = f.values
    padded = np.concatenate([np.zeros(2, dtype=v.dtype), v, np.zeros(2, dtype=v.dtype)])
    second = (
        -padded[:-4] + 16 * padded[1:-3] - 30 * padded[2:-2] + 16 * padded[3:-1] - padded[4:]
    ) / (12.0 * h**2)
    t = f.grid.points()
    return SampledFunction(f.grid, -second / (4.0 * np.pi**2) + t**2 * v)


def hermite_form_matrix(family: list[SampledFunction]) -> np.ndarray:
    """Matrix ``M_jk = <H phi_j, phi_k>`` via the polarized spectral form."""
    base = family[0].grid
    t = base.points()
    w = base.trapezoid_weights()
    rows = np.vstack([f.values for f in family])
    hats = np.vstack([fourier_transform(f).values for f in family])
    xi = base.fourier_grid().points()
    w_xi = base.fourier_grid().trapezoid_weights()
    m_time = (rows * (w * t**2)) @ rows.conj().T
    m_freq = (hats * (w_xi * xi**2)) @ hats.conj().T
    m = m_time + m_freq
    return 0.5 * (m + m.conj().T)


def _require_orthonormal(family: list[SampledFunction], tol: float) -> None:
    base = family[0].grid
    w = base.trapezoid_weights()
    rows = np.vstack([f.values for f in family])
    gram = (rows * w) @ rows.conj().T
    resid = float(np.abs(gram - np.eye(len(family))).max())
    if resid > tol:
        raise DomainError(f"family is not orthonormal: Gram residual {resid:.3e} > {tol:.1e}")


def trace_lower_bound(n: int) -> float:
    """``sum_{k<=n} (2k+1)/(2 pi)`` = ``(n+1)^2/(2 pi)``: the eigenvalue trace."""
    return (n + 1) ** 2 / (2.0 * np.pi)


@dataclass
class RayleighRitzResult:
    lhs: float
    rhs: float
    matrix_eigenvalues: np.ndarray

    @property
    def satisfied(self) -> bool:
        return self.lhs <= self.rhs + 1e-8 * max(1.0, abs(self.rhs))


def rayleigh_ritz_trace(family: list[SampledFunction], orthonormal_tol: float = 1e-6) -> RayleighRitzResult:
    """Trace inequality ``sum lambda_k <= sum <H phi_k, phi_k>``.

    Returns both sides plus the eigenvalues of the compression matrix
    ``[<H phi_j, phi_k>]`` (each dominating the corresponding operator
    eigenvalue).
    """
    if not family:
        raise DomainError("family must be nonempty")
    _require_orthonormal(family, orthonormal_tol)
    m = hermite_form_matrix(family)
    eigenvalues = np.linalg.eigvalsh(m)
    lhs = trace_lower_bound(len(family) - 1)
    rhs = float(np.real(np.trace(m)))
    result = RayleighRitzResult(lhs=lhs, rhs=rhs, matrix_eigenvalues=eigenvalues)
    if not result.satisfied:
        raise RuntimeError(f"trace inequality violated: {lhs} > {rhs}")
    return result


@dataclass
class ConcentrationRecord:
    index: int
    mean_time: float
    mean_freq: float
    variance_time: float
    variance_freq: float
    form: float

    @property
    def total(self) -> float:
        return self.variance_time + self.variance_freq + self.mean_time**2 + self.mean_freq**2


@dataclass
class ConcentrationSummary:
    """Per-index means/dispersions of a family and the running sums."""

    records: list[ConcentrationRecord]
    running_sums: np.ndarray = field(default=None)

    def __post_init__(self):
        if self.running_sums is None:
            self.running_sums = np.cumsum([r.total for r in self.records])

    def to_json_dict(self) -> dict:
        return {
            "records": [
                {
                    "index": r.index,
                    "mean_time": r.mean_time,
                    "mean_freq": r.mean_freq,
                    "variance_time": r.variance_time,
                    "variance_freq": r.variance_freq,
                    "form": r.form,
                    "total": r.total,
                }
                for r in self.records
            ],
            "running_sums": [float(s) for s in self.running_sums],
        }

    def format_table(self) -> str:
        lines = [
            f"{'k':>3} {'mu(e_k)':>12} {'mu(^e_k)':>12} {'Var(e_k)':>12} "
            f"{'Var(^e_k)':>12} {'<He_k,e_k>':>12} {'running sum':>12}"
        ]
        for r, s in zip(self.records, self.running_sums):
            lines.append(
                f"{r.index:>3} {r.mean_time:>12.6f} {r.mean_freq:>12.6f} "
                f"{r.variance_time:>12.6f} {r.variance_freq:>12.6f} {r.form:>12.6f} {s:>12.6f}"
            )
        return "\n".join(lines)


def concentration_summary(family: list[SampledFunction]) -> ConcentrationSummary:
    """Means, dispersions and Hermite forms for each unit-norm family member.

    The identity ``<He,e> = Var(e) + Var(^e) + mu(e)^2 + mu(^e)^2`` ties the
    form column to the other four.
    """
    records = []
    for k, f in enumerate(family):
        fhat = fourier_transform(f)
        mu_t, var_t = mean_and_variance(f)
        mu_x, var_x = mean_and_variance(fhat)
        form = second_moment(f) + second_moment(fhat)
        records.append(
            ConcentrationRecord(
                index=k,
                mean_time=mu_t,
                mean_freq=mu_x,
                variance_time=var_t,
                variance_freq=var_x,
                form=form,
            )
        )
    return ConcentrationSummary(records=records)


def sharp_bound(n: int) -> float:
    """Sharp lower bound for the cumulative dispersion sum at index n.

    Equals the eigenvalue trace ``sum_{k<=n}(2k+1)/(2 pi)``; the Hermite
    family attains it with equality for every n.
    """
    return trace_lower_bound(n)


def displayed_bound(n: int) -> float:
    """Weaker companion constant ``(n+1)(2n+1)/(4 pi)``.

    Kept for reference alongside :func:`sharp_bound`; it is strictly below
    the trace for every n >= 0, so the sharp bound implies it.
    """
    return (n + 1) * (2 * n + 1) / (4.0 * np.pi)


@dataclass
class SharpMeanDispersionResult:
    summary: ConcentrationSummary
    sums: np.ndarray
    bounds: np.ndarray
    displayed_bounds: np.ndarray
    equality_flags: np.ndarray
    hermite_alignment: np.ndarray | None
    equality_prefix: int

    def to_json_dict(self) -> dict:
        return {
            "sums": [float(s) for s in self.sums],
            "bounds": [float(b) for b in self.bounds],
            "displayed_bounds": [float(b) for b in self.displayed_bounds],
            "equality_flags": [bool(b) for b in self.equality_flags],
            "equality_prefix": int(self.equality_prefix),
            "hermite_alignment": None
            if self.hermite_alignment is None
            else [float(a) for a in self.hermite_alignment],
            "concentration": self.summary.to_json_dict(),
        }


def sharp_mean_dispersion_check(
    family: list[SampledFunction],
    orthonormal_tol: float = 1e-6,
    equality_rel_tol: float = 1e-6,
    alignment_tol: float = 1e-4,
) -> SharpMeanDispersionResult:
    """Cumulative dispersion sums against the sharp per-n lower bounds.

    For each n the sum ``sum_{k<=n} Var(e_k)+Var(^e_k)+mu(e_k)^2+mu(^e_k)^2``
    is compared with :func:`sharp_bound`; equality within ``equality_rel_tol``
    is flagged, and when it holds for every n <= n0 the family is checked to
    be a unimodular multiple of the Hermite basis via ``|<e_k, h_k>| ~ 1``.
    """
    if not family:
        raise DomainError("family must be nonempty")
    _require_orthonormal(family, orthonormal_tol)
    summary = concentration_summary(family)
    sums = summary.running_sums
    n_values = np.arange(len(family))
    bounds = np.array([sharp_bound(n) for n in n_values])
    displayed = np.array([displayed_bound(n) for n in n_values])
    equality = np.abs(sums - bounds) <= equality_rel_tol * bounds

    prefix = 0
    while prefix < len(family) and equality[prefix]:
        prefix += 1

    alignment = None
    if prefix > 0:
        basis = build_hermite_basis(prefix, family[0].grid)
        alignment = np.array(
            [abs(inner_product(family[k], basis.functions[k])) for k in range(prefix)]
        )
        if np.any(np.abs(alignment - 1.0) > alignment_tol):
            k_bad = int(np.argmax(np.abs(alignment - 1.0)))
            raise RuntimeError(
                "equality chain holds but e_%d is not aligned with h_%d "
                "(|<e,h>| = %.6f); inconsistent with the equality characterization"
                % (k_bad, k_bad, alignment[k_bad])
            )
    return SharpMeanDispersionResult(
        summary=summary,
        sums=sums,
        bounds=bounds,
        displayed_bounds=displayed,
        equality_flags=equality,
        hermite_alignment=alignment,
        equality_prefix=prefix,
    )


def heisenberg_product(f: SampledFunction) -> float:
    """``Delta(f) * Delta(^f)`` for unit-norm f (floor 1/(4 pi), odd: 3/(4 pi))."""
    fhat = fourier_transform(f)
    _, var_t = mean_and_variance(f)
    _, var_x = mean_and_variance(fhat)
    return float(np.sqrt(var_t) * np.sqrt(var_x))
