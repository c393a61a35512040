"""Prolate spheroidal wave functions and concentration projections.

Construction route: the concentration (time-and-band-limiting) operator on
``[-T, T]`` for band ``[-Omega, Omega]`` commutes with the Sturm-Liouville
operator

    L = d/dx[(T^2 - x^2) d/dx] - (c x / T)^2,   c = 2 pi T Omega,

whose Galerkin matrix in Legendre polynomials rescaled to ``[-T, T]`` splits
by parity into two symmetric tridiagonal blocks (``x^2`` couples k to k+-2).
Eigenvectors of those blocks give the functions on ``[-T, T]`` to spectral
accuracy where the sinc-kernel integral operator itself is hopelessly
ill-conditioned.  The concentration eigenvalues ``lambda_n`` and the
extension of each function to the whole grid are then recovered by applying
the kernel

    K(u) = sin(2 pi Omega u) / (pi u)

to the boxed eigenfunctions with Gauss-Legendre quadrature:
``psi_n = K (psi_n restricted) / sqrt(lambda_n)`` on all of R.

The bandwidth parameter is ``c = 2 pi T Omega``: with the transform
convention ``e^{-2 i pi t xi}``, the reproducing kernel of the Paley-Wiener
space over ``[-Omega, Omega]`` is exactly K above, and getting this 2 pi
wrong silently invalidates the dimension rule ``d = floor(4 T Omega) + 1``.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import cholesky, eigh_tridiagonal, solve_triangular

from .numerics import (
    DomainError,
    Grid,
    SampledFunction,
    fourier_transform,
    l2_norm,
    tail_energy,
)

LAMBDA_FLOOR = 1e-12


class PlungeRegionError(ValueError):
    """Requested modes reach below the reliable eigenvalue floor."""

    def __init__(self, message: str, max_reliable_index: int):
        super().__init__(message)
        self.max_reliable_index = max_reliable_index


class PClassError(DomainError):
    """A function fails its declared time/frequency concentration class."""

    def __init__(self, message: str, attained_epsilon: float):
        super().__init__(message)
        self.attained_epsilon = attained_epsilon


def landau_pollak_dimension(T: float, Omega: float) -> int:
    """Projection dimension ``floor(4 T Omega) + 1``."""
    return int(np.floor(4.0 * T * Omega)) + 1


def _legendre_b(k: np.ndarray) -> np.ndarray:
    # Jacobi off-diagonal of normalized Legendre: x Pb_k = b_{k+1} Pb_{k+1} + b_k Pb_{k-1}
    k = np.asarray(k, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        b = k / np.sqrt(4.0 * k**2 - 1.0)
    return np.where(k == 0, 0.0, b)


def _normalized_legendre_rows(u: np.ndarray, n_modes: int) -> np.ndarray:
    """Rows ``Pbar_k(u)`` for k < n_modes (orthonormal on [-1, 1])."""
    out = np.zeros((n_modes, u.size))
    out[0] = 1.0 / np.sqrt(2.0)
    if n_modes > 1:
        out[1] = np.sqrt(1.5) * u
    b = _legendre_b(np.arange(n_modes + 1))
    for k in range(1, n_modes - 1):
        out[k + 1] = (u * out[k] - b[k] * out[k - 1]) / b[k + 1]
    return out


def _parity_block(c: float, parity: int, m_count: int) -> tuple[np.ndarray, np.ndarray]:
    k = 2 * np.arange(m_count) + parity
    b = _legendre_b(k.astype(float))
    b_next = _legendre_b(k + 1.0)
    diag = -k * (k + 1.0) - c**2 * (b**2 + b_next**2)
    b2 = _legendre_b(k[:-1] + 2.0)
    off = -(c**2) * b_next[:-1] * b2
    return diag, off


@dataclass
class PswfBasis:
    """First ``d_max`` prolate functions for (T, Omega) on a grid.

    ``functions`` hold the true (unit L2(R) norm) prolate functions sampled
    on the grid; their energy beyond the grid edge is of order
    ``(1 - lambda_n) T / L`` and is accounted for by the projection
    machinery, which orthogonalizes in the grid inner product.
    """

    T: float
    Omega: float
    d_max: int
    grid: Grid
    functions: list[SampledFunction]
    lambdas: np.ndarray
    c: float
    construction_gram_residual: float
    grid_gram_residual: float
    _legendre_coeffs: np.ndarray = field(repr=False, default=None)
    _gl_nodes: np.ndarray = field(repr=False, default=None)
    _gl_weights: np.ndarray = field(repr=False, default=None)
    _psi_gl: np.ndarray = field(repr=False, default=None)
    _chol: np.ndarray = field(repr=False, default=None)

    def values_matrix(self) -> np.ndarray:
        return np.vstack([f.values for f in self.functions])

    def restricted_gram(self) -> np.ndarray:
        """Inner products over ``[-T, T]`` via the Gauss-Legendre machinery.

        For exact prolates this equals ``diag(lambda)`` (double
        orthogonality); here the boxed eigenfunctions are orthonormal by
        construction, so this is the quadrature image of that identity.
        """
        w = self._gl_weights
        root = np.sqrt(self.lambdas)
        boxed_gram = (self._psi_gl * w) @ self._psi_gl.T
        return boxed_gram * np.outer(root, root)

    def l2_gram(self) -> np.ndarray:
        """Gram of the constructed functions in L2(R).

        Uses ``<psi_i, psi_j> = Q_ij / sqrt(lambda_i lambda_j)`` with Q the
        kernel quadratic form on ``[-T, T]``, so it sees the whole-line inner
        product without needing the far tails on the grid.
        """
        w = self._gl_weights
        k = _kernel_matrix(self.Omega, self._gl_nodes, self._gl_nodes)
        q = (self._psi_gl * w) @ k @ (self._psi_gl * w).T
        s = 1.0 / np.sqrt(self.lambdas)
        return q * np.outer(s, s)

    def bandlimited_spectrum(self, xi: np.ndarray, n: int) -> np.ndarray:
        """Exact transform of psi_n: supported in [-Omega, Omega]."""
        xi = np.asarray(xi, dtype=float)
        phase = np.exp(-2j * np.pi * np.outer(xi, self._gl_nodes))
        vals = phase @ (self._gl_weights * self._psi_gl[n]) / np.sqrt(self.lambdas[n])
        vals[np.abs(xi) > self.Omega] = 0.0
        return vals


def _kernel_matrix(Omega: float, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return 2.0 * Omega * np.sinc(2.0 * Omega * (x[:, None] - y[None, :]))


def build_pswf_basis(
    T: float,
    Omega: float,
    d_max: int,
    grid: Grid,
    lambda_floor: float = LAMBDA_FLOOR,
) -> PswfBasis:
    """Construct the first ``d_max`` prolate functions for (T, Omega).

    Eigenvectors with concentration below ``lambda_floor`` sit past the
    plunge region where the extension formula divides by ``sqrt(lambda_n)``;
    requesting them raises :class:`PlungeRegionError` naming the last
    reliable index.
    """
    if T <= 0 or Omega <= 0:
        raise DomainError("T and Omega must be positive")
    d_lp = landau_pollak_dimension(T, Omega)
    if d_max < d_lp + 1:
        raise DomainError(
            f"d_max must be at least floor(4 T Omega) + 2 = {d_lp + 1} (got {d_max})"
        )
    c = 2.0 * np.pi * T * Omega

    n_modes = d_max + int(np.ceil(2.0 * c)) + 40
    theta_list: list[tuple[float, int, np.ndarray]] = []
    for parity in (0, 1):
        m_count = (n_modes - parity + 1) // 2
        diag, off = _parity_block(c, parity, m_count)
        theta, vecs = eigh_tridiagonal(diag, off)
        keep = min(m_count, d_max + 4)
        for i in range(1, keep + 1):
            theta_list.append((theta[-i], parity, vecs[:, -i]))
    theta_list.sort(key=lambda item: -item[0])
    theta_list = theta_list[:d_max]

    # Galerkin truncation check: kept eigenvectors must have decayed tails.
    tail = max(float(np.abs(v[-2:]).max()) for _, _, v in theta_list)
    if tail > 1e-10:
        raise RuntimeError(
            f"Legendre expansion not converged (tail coefficient {tail:.2e}); "
            "the requested (T, Omega, d_max) needs a larger modal basis"
        )

    coeffs = np.zeros((d_max, n_modes))
    for n, (_, parity, vec) in enumerate(theta_list):
        coeffs[n, parity : parity + 2 * len(vec) : 2] = vec

    n_gl = max(128, n_modes + int(2 * c) + 32)
    u, w_u = np.polynomial.legendre.leggauss(n_gl)
    x = T * u
    w = T * w_u
    # phi_k(x) = Pbar_k(x/T)/sqrt(T): orthonormal on [-T, T]
    leg_rows = _normalized_legendre_rows(u, n_modes) / np.sqrt(T)
    psi_gl = coeffs @ leg_rows

    # Slepian-style sign convention: positive at (or just right of) center.
    i0 = int(np.argmin(np.abs(x)))
    i0_pos = i0 if x[i0] > 0 else i0 + 1
    for n in range(d_max):
        parity = theta_list[n][1]
        ref = psi_gl[n, i0_pos] if parity == 1 else psi_gl[n, i0]
        if ref < 0:
            psi_gl[n] *= -1.0

    kernel = _kernel_matrix(Omega, x, x)
    smeared = (psi_gl * w) @ kernel.T  # rows: Q psi_n at the GL nodes
    q = smeared @ (psi_gl * w).T
    lambdas = np.diag(q).copy()

    if np.any(lambdas <= 0):
        bad = int(np.argmax(lambdas <= 0))
        raise PlungeRegionError(
            f"eigenvalue {bad} nonpositive ({lambdas[bad]:.2e}); max reliable index {bad - 1}",
            max_reliable_index=bad - 1,
        )
    if lambdas[-1] < lambda_floor:
        reliable = int(np.searchsorted(-lambdas, -lambda_floor) - 1)
        raise PlungeRegionError(
            f"lambda_{d_max - 1} = {lambdas[-1]:.3e} below the reliable floor "
            f"{lambda_floor:.0e}; max reliable index {reliable}",
            max_reliable_index=reliable,
        )
    if lambdas[0] > 1.0 + 1e-10:
        raise RuntimeError(f"lambda_0 = {lambdas[0]} > 1: construction failure")
    if np.any(np.diff(lambdas) > 1e-12 * lambdas[:-1]):
        raise RuntimeError("concentration eigenvalues are not decreasing")
    # For large c the top eigenvalues sit within double rounding of 1; store
    # them as the largest representable value below 1 and keep the sequence
    # weakly decreasing where rounding created ties.
    lambdas = np.minimum.accumulate(np.minimum(lambdas, np.nextafter(1.0, 0.0)))

    s = 1.0 / np.sqrt(lambdas)
    gram_construction = q * np.outer(s, s)
    construction_residual = float(np.abs(gram_construction - np.eye(d_max)).max())

    t = grid.points()
    extension = _kernel_matrix(Omega, t, x)
    rows = (extension @ (psi_gl * w).T).T * s[:, None]

    w_grid = grid.trapezoid_weights()
    grid_gram = (rows * w_grid) @ rows.T
    grid_residual = float(np.abs(grid_gram - np.eye(d_max)).max())
    chol = cholesky(grid_gram, lower=False)

    functions = [SampledFunction(grid, row.astype(np.complex128)) for row in rows]
    return PswfBasis(
        T=T,
        Omega=Omega,
        d_max=d_max,
        grid=grid,
        functions=functions,
        lambdas=lambdas,
        c=c,
        construction_gram_residual=construction_residual,
        grid_gram_residual=grid_residual,
        _legendre_coeffs=coeffs,
        _gl_nodes=x,
        _gl_weights=w,
        _psi_gl=psi_gl,
        _chol=chol,
    )


def raw_coefficients(f: SampledFunction, basis: PswfBasis, d: int) -> np.ndarray:
    """Plain grid inner products ``<f, psi_j>`` for j < d."""
    if d < 1 or d > basis.d_max:
        raise DomainError(f"d must be in [1, {basis.d_max}] (got {d})")
    if not f.grid.same(basis.grid):
        raise DomainError("function and basis live on different grids")
    w = basis.grid.trapezoid_weights()
    rows = basis.values_matrix()[:d]
    return rows.conj() @ (w * f.values)


def orthonormal_coefficients(f: SampledFunction, basis: PswfBasis, d: int) -> np.ndarray:
    """Coordinates of the projection of f in a grid-orthonormal frame.

    The sampled prolates are orthonormal on the whole line but lose a sliver
    of norm to the part of their tails beyond the grid.  Solving with the
    (Cholesky-nested) Gram factor makes the projection an exact orthogonal
    projection in the grid inner product, so Pythagoras and idempotence hold
    to machine precision.
    """
    c = raw_coefficients(f, basis, d)
    r = basis._chol[:d, :d]
    return solve_triangular(r, c, trans="C", lower=False)


def project(f: SampledFunction, basis: PswfBasis, d: int) -> SampledFunction:
    """Orthogonal projection (grid inner product) onto the first d prolates."""
    c = raw_coefficients(f, basis, d)
    r = basis._chol[:d, :d]
    y = solve_triangular(r, c, trans="C", lower=False)
    coeffs = solve_triangular(r, y, lower=False)
    values = coeffs @ basis.values_matrix()[:d]
    return SampledFunction(basis.grid, values)


def residual_norm(f: SampledFunction, basis: PswfBasis, d: int) -> float:
    """``||f - P_d f||`` in the grid inner product."""
    proj = project(f, basis, d)
    return l2_norm(SampledFunction(f.grid, f.values - proj.values))


def in_P_class(f: SampledFunction, T: float, Omega: float) -> float:
    """Smallest eps with f in the (T, Omega) concentration class.

    Returns ``max(sqrt(time tail beyond T), sqrt(frequency tail beyond
    Omega))``; an eps of 1 for a unit-norm function means no concentration
    at all.
    """
    if T < 0 or Omega < 0:
        raise DomainError("T and Omega must be nonnegative")
    time_tail = tail_energy(f, T)
    freq_tail = tail_energy(fourier_transform(f), Omega)
    return float(max(np.sqrt(max(time_tail, 0.0)), np.sqrt(max(freq_tail, 0.0))))


@dataclass
class ApproximabilityReport:
    """Distance of a unit function from the span of the first d prolates."""

    epsilon: float
    d: int
    residual: float
    member_of_S: bool

    def to_json_dict(self) -> dict:
        return {
            "epsilon": self.epsilon,
            "d": self.d,
            "residual": self.residual,
            "member_of_S": self.member_of_S,
        }


def landau_pollak_check(
    f: SampledFunction,
    T: float,
    Omega: float,
    eps: float,
    basis: PswfBasis,
) -> ApproximabilityReport:
    """Certify ``||f - P_d f|| <= 7 eps`` with ``d = floor(4 T Omega) + 1``.

    Preconditions (checked): f is unit-norm and its attained concentration
    eps does not exceed the declared one.  Violation of the 7-eps conclusion
    itself would falsify the underlying theorem and raises RuntimeError.
    """
    attained = in_P_class(f, T, Omega)
    if attained > eps * (1.0 + 1e-9):
        raise PClassError(
            f"f is not in the declared class: attained eps {attained:.6e} > {eps:.6e}",
            attained_epsilon=attained,
        )
    nrm = l2_norm(f)
    if abs(nrm - 1.0) > 1e-6:
        raise DomainError(f"landau_pollak_check requires unit norm (got {nrm:.8f})")
    d = landau_pollak_dimension(T, Omega)
    if d > basis.d_max:
        raise DomainError(f"basis holds {basis.d_max} modes but d = {d} are required")
    resid = residual_norm(f, basis, d)
    level = 7.0 * eps
    if resid > level:
        raise RuntimeError(
            f"residual {resid:.6e} exceeds 7 eps = {level:.6e}: "
            "this contradicts the concentration theorem; check the basis construction"
        )
    return ApproximabilityReport(
        epsilon=level,
        d=d,
        residual=resid,
        member_of_S=bool(resid < level and abs(nrm - 1.0) <= 1e-6),
    )


def save_pswf_basis(basis: PswfBasis, json_path, csv_path) -> None:
    """JSON header (T, Omega, d_max, lambdas) plus CSV matrix of samples."""
    header = {
        "T": basis.T,
        "Omega": basis.Omega,
        "d_max": basis.d_max,
        "c": basis.c,
        "lambdas": [float(x) for x in basis.lambdas],
        "grid": {"half_width": basis.grid.half_width, "n_points": basis.grid.n_points},
        "construction_gram_residual": basis.construction_gram_residual,
        "grid_gram_residual": basis.grid_gram_residual,
        "csv_matrix": str(csv_path),
    }
    with open(json_path, "w") as fh:
        json.dump(header, fh, indent=2, sort_keys=True)
    with open(csv_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t"] + [f"psi{n}" for n in range(basis.d_max)])
        matrix = basis.values_matrix().real
        for i, t in enumerate(basis.grid.points()):
            writer.writerow([repr(float(t))] + [repr(float(matrix[n, i])) for n in range(basis.d_max)])
