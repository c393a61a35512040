"""From almost-orthonormal families to spherical codes.

Projecting a unit family onto the first d elements of a reference
orthonormal system and normalizing the coefficient vectors produces a
spherical code whose coherence is controlled by the projection residuals:
residuals below eps and pairwise overlaps below eta^2 give coherence at most
``(eps^2 + eta^2) / (1 - eps^2)``.  This turns cardinality bounds for codes
into cardinality bounds for concentrated families.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import cholesky, solve_triangular

from .hermite import HermiteBasis
from .numerics import DomainError, SampledFunction, l2_norm
from .pswf import PswfBasis
from .sphere_codes import (
    COMPLEX,
    REAL,
    CodeBoundQuery,
    SphericalCode,
    code_upper_bound,
)


@dataclass
class CodeFromFamily:
    """Spherical code built from the normalized projection coefficients."""

    d: int
    vectors: np.ndarray
    coherence: float
    alpha_bound: float
    eps: float
    eta: float
    residuals: np.ndarray
    field: str

    def spherical_code(self) -> SphericalCode:
        vecs = self.vectors
        if self.field == REAL:
            vecs = vecs.real
        return SphericalCode(dim=self.d, field=self.field, vectors=vecs)

    def to_json_dict(self) -> dict:
        return {
            "d": self.d,
            "coherence": self.coherence,
            "alpha_bound": self.alpha_bound,
            "eps": self.eps,
            "eta": self.eta,
            "residuals": [float(r) for r in self.residuals],
            "field": self.field,
            "size": int(self.vectors.shape[0]),
        }


def _basis_rows(basis, d: int) -> tuple[np.ndarray, np.ndarray]:
    """Sampled values (d rows) and quadrature weights of a reference basis."""
    if isinstance(basis, (PswfBasis, HermiteBasis)):
        functions = basis.functions
        grid = basis.grid
    else:
        functions = list(basis)
        grid = functions[0].grid
        for f in functions:
            if not f.grid.same(grid):
                raise DomainError("reference basis must live on a single grid")
    if d > len(functions):
        raise DomainError(f"reference basis has {len(functions)} elements, d = {d} requested")
    rows = np.vstack([f.values for f in functions[:d]])
    return rows, grid.trapezoid_weights()


def _code_from_coefficients(
    coeff_rows: np.ndarray,
    residuals: np.ndarray,
    eps: float,
    eta: float,
) -> CodeFromFamily:
    norms = np.linalg.norm(coeff_rows, axis=1)
    w = coeff_rows / norms[:, None]
    gram = w @ w.conj().T
    off = np.abs(gram - np.diag(np.diag(gram)))
    coherence = float(off.max()) if len(w) > 1 else 0.0
    alpha_bound = (eps**2 + eta**2) / (1.0 - eps**2)
    is_real = bool(np.max(np.abs(coeff_rows.imag)) < 1e-12)
    return CodeFromFamily(
        d=coeff_rows.shape[1],
        vectors=w,
        coherence=coherence,
        alpha_bound=alpha_bound,
        eps=eps,
        eta=eta,
        residuals=residuals,
        field=REAL if is_real else COMPLEX,
    )


def onb_to_code(
    family: list[SampledFunction],
    basis,
    d: int,
    eps: float,
    eta: float | None = None,
) -> CodeFromFamily:
    """Map a unit family to a spherical code via projection coefficients.

    ``basis`` may be a :class:`PswfBasis`, a :class:`HermiteBasis`, or any
    list of orthonormal sampled functions.  Preconditions are enforced
    per-index: unit norms, projection residuals below ``eps``, pairwise
    inner products below ``eta^2`` (eta is estimated from the family's Gram
    matrix when not supplied).  Coefficients are taken in an exactly
    orthonormal frame for the grid inner product (Cholesky of the reference
    Gram), so the coherence bound carries no basis-quadrature slack.
    """
    if not family:
        raise DomainError("family must be nonempty")
    if not 0 < eps < 1.0 / np.sqrt(2.0):
        raise DomainError(f"eps must lie in (0, 1/sqrt(2)) (got {eps})")
    rows, weights = _basis_rows(basis, d)

    bad = [k for k, f in enumerate(family) if abs(l2_norm(f) - 1.0) > 1e-6]
    if bad:
        raise DomainError(f"family members {bad} are not unit-norm")

    fam_rows = np.vstack([f.values for f in family])
    fam_gram = (fam_rows * weights) @ fam_rows.conj().T
    overlaps = np.abs(fam_gram - np.diag(np.diag(fam_gram)))
    max_overlap = float(overlaps.max()) if len(family) > 1 else 0.0
    if eta is None:
        eta = float(np.sqrt(max_overlap))
    elif max_overlap > eta**2 + 1e-10:
        pairs = np.argwhere(overlaps > eta**2 + 1e-10)
        raise DomainError(
            f"family pairs {pairs[:4].tolist()} exceed the declared eta^2 = {eta**2:.3e} "
            f"(max overlap {max_overlap:.3e})"
        )

    ref_gram = (rows * weights) @ rows.conj().T
    chol = cholesky(ref_gram, lower=False)
    raw = fam_rows @ (weights * rows.conj()).T  # <f_k, b_j> for j < d
    coeffs = solve_triangular(chol, raw.T, trans="C", lower=False).T

    # residual^2 = ||f||^2 - ||P_d f||^2 in the grid inner product
    norms_sq = np.real(np.einsum("kj,kj->k", fam_rows * weights, fam_rows.conj()))
    proj_sq = np.linalg.norm(coeffs, axis=1) ** 2
    residuals = np.sqrt(np.maximum(norms_sq - proj_sq, 0.0))
    bad = [int(k) for k in np.nonzero(residuals >= eps)[0]]
    if bad:
        raise DomainError(
            f"family members {bad} have projection residual >= eps = {eps}: "
            f"{[float(residuals[k]) for k in bad]}"
        )
    return _code_from_coefficients(coeffs, residuals, eps, float(eta))


def approximable_family_bound(eps: float, d: int, field: str = REAL) -> int:
    """Upper bound on orthonormal families that are eps,d-approximable.

    Evaluates the spherical-code bound at ``alpha = eps^2/(1 - eps^2)``.
    """
    if not 0 < eps < 1.0 / np.sqrt(2.0):
        raise DomainError(f"eps must lie in (0, 1/sqrt(2)) (got {eps})")
    alpha = eps**2 / (1.0 - eps**2)
    report = code_upper_bound(CodeBoundQuery(alpha, d, field))
    best = report.best_upper
    if best is None:
        raise DomainError(
            f"bound too large to materialize (log10 = {report.best_upper_log10:.3e}); "
            "query code_upper_bound directly for the log form"
        )
    return best


@dataclass
class CanonicalExampleResult:
    """The canonical-basis-versus-flat-complement example in R^n."""

    n: int
    residuals: np.ndarray
    code: CodeFromFamily


def canonical_basis_example(n: int) -> CanonicalExampleResult:
    """Project the canonical R^n basis onto the complement of (1, ..., 1).

    Every residual equals 1/sqrt(n) exactly, giving n unit vectors that are
    (1/sqrt(n) + delta, n-1)-approximable; the projected code attains the
    coherence bound with equality, so it witnesses that the projection
    construction is sharp.
    """
    if n < 2:
        raise DomainError("need n >= 2")
    # Helmert rows: an exact orthonormal basis of span{(1,...,1)}^perp
    basis = np.zeros((n - 1, n))
    for j in range(1, n):
        basis[j - 1, :j] = 1.0
        basis[j - 1, j] = -j
        basis[j - 1] /= np.sqrt(j * (j + 1.0))
    coeffs = np.eye(n) @ basis.T
    proj_norms_sq = np.sum(coeffs**2, axis=1)
    residuals = np.sqrt(1.0 - proj_norms_sq)
    eps = float(residuals.max()) * (1.0 + 1e-12)
    code = _code_from_coefficients(coeffs.astype(np.complex128), residuals, eps, 0.0)
    return CanonicalExampleResult(n=n, residuals=residuals, code=code)
