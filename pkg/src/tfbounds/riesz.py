"""Riesz-basis extensions of the concentration machinery.

A Riesz basis is an orthonormal basis pushed through a bounded isomorphism
U (the orthogonalizer).  Its frame constants ``1/|U|^2`` and ``|U^{-1}|^2``
control everything here: the trace inequality picks up a factor ``|U|^2``,
element norms are pinched between ``1/|U|`` and ``|U^{-1}|``, pairwise
angles are bounded by the constant

    C(U) = sqrt(2) min(1 - (1/(|U| |U^{-1}|))^2, (|U^{-1}|/|U|)^2 - 1),

and the projection-to-code construction survives with

    alpha = (eps^2 + C(U) |U^{-1}|^2) / (|U|^{-2} - eps^2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bounds import BoundReport, Envelope, _best_code_bound, c_f_epsilon, umbrella_bound
from .hermite import hermite_form, trace_lower_bound
from .numerics import DomainError, SampledFunction


@dataclass
class OrthogonalizerStats:
    """Operator norms of an orthogonalizer and the derived angle constant."""

    norm_U: float
    norm_Uinv: float
    C_U: float
    near_isometry_beta: float | None = None

    @classmethod
    def from_norms(cls, norm_U: float, norm_Uinv: float) -> "OrthogonalizerStats":
        return orthogonalizer_stats(norm_U, norm_Uinv)

    @classmethod
    def from_beta(cls, beta: float) -> "OrthogonalizerStats":
        """Worst-case stats among ``(1+beta)^{-1} <= |U|^2 <= |Uinv|^2 <= 1+beta``.

        The angle constant is maximized at ``|Uinv|^2 = 1+beta`` with
        ``|U|^2`` chosen where the two min-terms of C(U) cross; any member
        of the band has a smaller C(U) than this pair.
        """
        if beta < 0:
            raise DomainError("beta must be nonnegative")
        v_sq = 1.0 + beta
        u_sq = (v_sq**2 + 1.0) / (2.0 * v_sq)
        stats = orthogonalizer_stats(math.sqrt(u_sq), math.sqrt(v_sq))
        stats.near_isometry_beta = beta
        return stats

    @property
    def beta_angle_bound(self) -> float | None:
        """``sqrt(2) beta (2+beta)/(1+beta)^2`` when a beta is declared."""
        if self.near_isometry_beta is None:
            return None
        b = self.near_isometry_beta
        return math.sqrt(2.0) * b * (2.0 + b) / (1.0 + b) ** 2

    @property
    def element_norm_range(self) -> tuple[float, float]:
        return 1.0 / self.norm_U, self.norm_Uinv


def orthogonalizer_stats(norm_U: float, norm_Uinv: float) -> OrthogonalizerStats:
    """Angle constant C(U) from the declared operator norms.

    The factored pairwise bound ``|<x_k, x_l>| <= C(U) |x_k| |x_l|`` is
    provable when element norms dominate ``|U|`` (for matrix mixings:
    smallest singular value at least 1); the first min-term alone,
    ``sqrt(2)(1 - 1/(|U| |Uinv|)^2)``, is valid for any normalization and is
    what the near-isometry pipeline relies on.
    """
    if norm_U <= 0 or norm_Uinv <= 0:
        raise DomainError("operator norms must be positive")
    if norm_U * norm_Uinv < 1.0 - 1e-12:
        raise DomainError(
            f"inconsistent norms: |U| |U^-1| = {norm_U * norm_Uinv:.6g} < 1"
        )
    c_u = math.sqrt(2.0) * min(
        1.0 - (1.0 / (norm_U * norm_Uinv)) ** 2,
        (norm_Uinv / norm_U) ** 2 - 1.0,
    )
    return OrthogonalizerStats(norm_U=norm_U, norm_Uinv=norm_Uinv, C_U=max(c_u, 0.0))


@dataclass
class RieszTraceResult:
    lhs: float
    rhs: float
    norm_U: float
    scaled_rhs: float

    @property
    def satisfied(self) -> bool:
        return self.lhs <= self.scaled_rhs + 1e-8 * max(1.0, self.scaled_rhs)


def riesz_trace_bound(family: list[SampledFunction], norm_U: float) -> RieszTraceResult:
    """``sum_{k<=n} (2k+1)/(2 pi) <= |U|^2 sum <H x_k, x_k>`` for a Riesz family.

    The family members need not be unit-norm; the forms are evaluated raw.
    """
    if not family:
        raise DomainError("family must be nonempty")
    if norm_U <= 0:
        raise DomainError("norm_U must be positive")
    rhs = sum(hermite_form(f, raw=True) for f in family)
    lhs = trace_lower_bound(len(family) - 1)
    return RieszTraceResult(lhs=lhs, rhs=rhs, norm_U=norm_U, scaled_rhs=norm_U**2 * rhs)


@dataclass
class RieszMeanDispersionResult:
    A: float
    norm_U: float
    n_max: int
    headline: float


def riesz_mean_dispersion_bound(A: float, norm_U: float) -> RieszMeanDispersionResult:
    """At most ``8 pi A^2 |U|^2`` Riesz elements keep all four statistics <= A."""
    if A <= 0 or norm_U <= 0:
        raise DomainError("A and norm_U must be positive")
    scale = A * norm_U
    raw = math.floor((16.0 * math.pi * scale**2 - 1.0) / 2.0)
    return RieszMeanDispersionResult(
        A=A,
        norm_U=norm_U,
        n_max=max(0, int(raw)),
        headline=8.0 * math.pi * scale**2,
    )


def riesz_minimax_lower(n: int, norm_U: float) -> float:
    """``(1/|U|) sqrt((2n+1)/(16 pi))``."""
    if n < 0:
        raise DomainError("n must be nonnegative")
    if norm_U <= 0:
        raise DomainError("norm_U must be positive")
    return math.sqrt((2.0 * n + 1.0) / (16.0 * math.pi)) / norm_U


def riesz_alpha_ceiling(stats: OrthogonalizerStats) -> float:
    """Largest admissible eps for :func:`riesz_alpha` (possibly 0)."""
    inv_sq = stats.norm_U ** (-2.0)
    gap = inv_sq - stats.C_U * stats.norm_Uinv**2
    if gap <= 0:
        return 0.0
    return min(inv_sq, math.sqrt(gap / 2.0))


def riesz_alpha(eps: float, stats: OrthogonalizerStats) -> float:
    """Code coherence level for a Riesz family with projection residuals < eps.

    Reduces exactly to ``eps^2/(1-eps^2)`` when U is an isometry.  The eps
    ceiling guarantees 0 < alpha < 1; violating it raises with the binding
    constraint named.
    """
    if eps <= 0:
        raise DomainError("eps must be positive")
    inv_sq = stats.norm_U ** (-2.0)
    gap = inv_sq - stats.C_U * stats.norm_Uinv**2
    if gap <= 0:
        raise DomainError(
            "no admissible eps: C(U) |U^-1|^2 = "
            f"{stats.C_U * stats.norm_Uinv**2:.6g} >= |U|^-2 = {inv_sq:.6g}"
        )
    ceiling = riesz_alpha_ceiling(stats)
    if eps >= ceiling:
        binding = (
            "|U|^-2"
            if inv_sq <= math.sqrt(gap / 2.0)
            else "sqrt((|U|^-2 - C(U) |U^-1|^2)/2)"
        )
        raise DomainError(
            f"eps = {eps:.6g} is at or beyond the ceiling {ceiling:.6g} "
            f"(binding constraint: {binding})"
        )
    return (eps**2 + stats.C_U * stats.norm_Uinv**2) / (inv_sq - eps**2)


def max_feasible_beta(phi: Envelope, psi: Envelope) -> float:
    """Largest near-isometry defect admitting some eps in the umbrella chain.

    Found by bisection on the constructive feasibility of
    :func:`umbrella_riesz_bound`'s eps search.
    """
    lo, hi = 0.0, 1.0
    if _riesz_feasible_eps(phi, psi, hi) is not None:
        return hi
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if _riesz_feasible_eps(phi, psi, mid) is not None:
            lo = mid
        else:
            hi = mid
    return lo


def _riesz_alpha_for_pipeline(eps: float, M: float, beta: float) -> float | None:
    """Coherence level fed to the code bound in the Riesz umbrella chain.

    Envelope domination puts each element within ``7 eps M |U^{-1}|`` of the
    d-dimensional prolate span (element norms reach ``|U^{-1}|``), so the
    residual level is ``7 eps M sqrt(1+beta)``.  Over the whole
    near-isometry band ``C(U) |U^{-1}|^2 <= sqrt(2) beta (2+beta)/(1+beta)``
    and ``|U|^{-2} >= 1/(1+beta)``, giving the conservative coherence

        alpha <= ((1+beta) level^2 + sqrt(2) beta (2+beta)) /
                 (1 - (1+beta) level^2).

    Returns None when the level is inadmissible (alpha would reach 1).
    """
    level_sq = (7.0 * eps * M) ** 2 * (1.0 + beta)
    numerator = (1.0 + beta) * level_sq + math.sqrt(2.0) * beta * (2.0 + beta)
    denominator = 1.0 - (1.0 + beta) * level_sq
    if denominator <= 0 or numerator >= denominator:
        return None
    return numerator / denominator


def _riesz_feasible_eps(phi: Envelope, psi: Envelope, beta: float) -> float | None:
    M = min(phi.M, psi.M)
    if M < 1.0 - 1e-9:
        return None
    eps_hi = 1.0 / (50.0 * M)
    for eps in np.geomspace(eps_hi, eps_hi * 1e-8, 60):
        if _riesz_alpha_for_pipeline(eps, M, beta) is not None:
            return float(eps)
    return None


def umbrella_riesz_bound(phi: Envelope, psi: Envelope, beta: float, eps: float | None = None) -> BoundReport:
    """Umbrella pipeline for Riesz bases with near-isometric orthogonalizer.

    ``beta = 0`` is the orthonormal case and delegates to
    :func:`tfbounds.bounds.umbrella_bound` verbatim.  For ``beta > 0`` the
    admissible eps (searched over a geometric sweep to minimize the final
    bound when not supplied) leads to the Riesz coherence level and the
    usual spherical-code evaluation.  Infeasible betas raise with the
    constructive feasibility boundary for these envelopes.
    """
    if beta < 0:
        raise DomainError("beta must be nonnegative")
    if beta == 0:
        return umbrella_bound(phi, psi, eps)
    M = min(phi.M, psi.M)
    if M < 1.0 - 1e-9:
        raise DomainError(f"umbrella pipeline needs M >= 1 (got {M:.6g})")
    stats = OrthogonalizerStats.from_beta(beta)
    eps_hi = 1.0 / (50.0 * M)

    def evaluate(e: float):
        alpha = _riesz_alpha_for_pipeline(e, M, beta)
        if alpha is None:
            return None
        radius = max(c_f_epsilon(phi, e), c_f_epsilon(psi, e))
        T = radius * (1.0 + 1e-12)
        d = int(math.floor(4.0 * T * T)) + 1
        best, method, details = _best_code_bound(alpha, d)
        return alpha, T, d, best, method, details

    if eps is not None:
        if not 0 < eps <= eps_hi * (1.0 + 1e-12):
            raise DomainError(f"eps must lie in (0, 1/(50 M)] (got {eps})")
        chosen = evaluate(eps)
        if chosen is None:
            raise DomainError(
                f"eps = {eps:.6g} is inadmissible at beta = {beta:.6g}; "
                f"max feasible beta for these envelopes is {max_feasible_beta(phi, psi):.6g}"
            )
        eps_used = eps
    else:
        candidates = []
        for e in np.geomspace(eps_hi, eps_hi * 1e-8, 60):
            result = evaluate(float(e))
            if result is not None:
                candidates.append((result[3].log10, float(e), result))
        if not candidates:
            raise DomainError(
                f"beta = {beta:.6g} admits no eps for these envelopes; "
                f"max feasible beta is {max_feasible_beta(phi, psi):.6g}"
            )
        _, eps_used, chosen = min(candidates, key=lambda item: (item[0], item[1]))
    alpha, T, d, best, method, details = chosen
    details["orthogonalizer"] = {
        "beta": beta,
        "norm_U": stats.norm_U,
        "norm_Uinv": stats.norm_Uinv,
        "C_U": stats.C_U,
    }
    return BoundReport(
        pipeline="umbrella_riesz",
        inputs={"phi": phi.describe(), "psi": psi.describe(), "beta": beta},
        epsilon=eps_used,
        T=T,
        M=M,
        d=d,
        alpha=alpha,
        n_bound=best.value,
        n_bound_log10=best.log10,
        method=method,
        trace=[
            f"residual level 7 eps M sqrt(1+beta) = {7 * eps_used * M * math.sqrt(1 + beta):.6g}",
            f"alpha = {alpha:.6g}; d = {d}",
        ],
        details=details,
    )
