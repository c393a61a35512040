"""Grid-based function representation and the analytic substrate.

Everything downstream works on complex-valued functions sampled on a
uniform symmetric grid: Fourier transforms (continuous-kernel convention
``e^{-2i pi t xi}``), trapezoid quadrature, tail energies, and the
generalized p-means / p-dispersions.  All operations are pure functions of
immutable inputs and can be called concurrently.
"""

from __future__ import annotations

import csv
import json
import warnings
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy.optimize import minimize_scalar


class GridMismatchError(ValueError):
    """Raised when two sampled functions do not share the same grid."""


class NormalizationError(ValueError):
    """Raised when an operation requires a nonzero (or unit) L2 norm."""


class DomainError(ValueError):
    """Raised when a parameter lies outside the mathematically valid range."""


class TruncationWarning(UserWarning):
    """Emitted when a computation silently loses mass beyond the grid."""


@dataclass
class Grid:
    """Uniform symmetric grid on ``[-L, L]`` with ``n_points`` samples.

    Both endpoints are included, so the spacing is ``2L/(n_points - 1)``.
    """

    half_width: float
    n_points: int
    _points: np.ndarray = field(init=False, repr=False, compare=False, default=None)

    def __post_init__(self):
        if not self.half_width > 0:
            raise DomainError("grid half_width must be positive")
        if self.n_points < 16:
            raise DomainError("grid needs at least 16 points")
        self._points = None

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_width / (self.n_points - 1)

    def points(self) -> np.ndarray:
        if self._points is None:
            self._points = np.linspace(-self.half_width, self.half_width, self.n_points)
        return self._points

    def trapezoid_weights(self) -> np.ndarray:
        w = np.full(self.n_points, self.spacing)
        w[0] *= 0.5
        w[-1] *= 0.5
        return w

    def fourier_grid(self) -> "Grid":
        """Frequency grid paired with this grid by the discrete transform.

        Spacing ``1/(n h)`` makes the transform an exact DFT up to unit-modulus
        phases; the map is an involution (the frequency grid of the frequency
        grid is this grid again).
        """
        n = self.n_points
        xi_max = (n - 1) ** 2 / (4.0 * n * self.half_width)
        return Grid(xi_max, n)

    def same(self, other: "Grid") -> bool:
        return (
            self.n_points == other.n_points
            and abs(self.half_width - other.half_width) <= 1e-12 * self.half_width
        )


@dataclass
class SampledFunction:
    """A complex-valued function sampled on a :class:`Grid`.

    ``warnings`` carries accuracy flags attached by producing operations
    (band-edge mass, truncation); it does not affect numeric identity.
    """

    grid: Grid
    values: np.ndarray
    warnings: tuple = ()

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.complex128)
        if self.values.shape != (self.grid.n_points,):
            raise ValueError(
                f"values have shape {self.values.shape}, expected ({self.grid.n_points},)"
            )
        if not np.all(np.isfinite(self.values.view(np.float64))):
            raise ValueError("values must be finite")

    def norm(self) -> float:
        return l2_norm(self)

    def with_values(self, values: np.ndarray, extra_warnings: Iterable[str] = ()) -> "SampledFunction":
        return SampledFunction(self.grid, values, self.warnings + tuple(extra_warnings))


@dataclass
class PStats:
    """Generalized mean / variance of the density ``|f|^2`` for exponent p.

    ``normalized`` flags that the input had to be rescaled to unit L2 norm.
    ``curvature`` is the second difference of the objective at the minimizer;
    it degrades as p -> 1 where the objective flattens.
    """

    p: float
    mean: float
    variance: float
    dispersion: float
    normalized: bool = False
    curvature: float | None = None


def sample_function(grid: Grid, fn: Callable[[np.ndarray], np.ndarray]) -> SampledFunction:
    return SampledFunction(grid, np.asarray(fn(grid.points()), dtype=np.complex128))


def combine(coefficients: Sequence[complex], functions: Sequence[SampledFunction]) -> SampledFunction:
    """Linear combination ``sum c_k f_k`` of functions on one grid."""
    if len(coefficients) != len(functions):
        raise ValueError("coefficient/function count mismatch")
    base = functions[0]
    values = np.zeros(base.grid.n_points, dtype=np.complex128)
    for c, f in zip(coefficients, functions):
        if not f.grid.same(base.grid):
            raise GridMismatchError("combine requires a common grid")
        values += c * f.values
    return SampledFunction(base.grid, values)


def inner_product(f: SampledFunction, g: SampledFunction) -> complex:
    """Trapezoid approximation of ``int f(t) conj(g(t)) dt``."""
    if not f.grid.same(g.grid):
        raise GridMismatchError("inner_product requires functions on the same grid")
    w = f.grid.trapezoid_weights()
    return complex(np.sum(w * f.values * np.conj(g.values)))


def l2_norm(f: SampledFunction) -> float:
    w = f.grid.trapezoid_weights()
    return float(np.sqrt(np.sum(w * np.abs(f.values) ** 2)))


def normalized(f: SampledFunction) -> SampledFunction:
    nrm = l2_norm(f)
    if nrm <= 0:
        raise NormalizationError("cannot normalize a zero function")
    return f.with_values(f.values / nrm)


def modulated(f: SampledFunction, theta: float) -> SampledFunction:
    """Multiply by ``e^{2 pi i theta t}`` (shifts the transform by theta)."""
    t = f.grid.points()
    return f.with_values(f.values * np.exp(2j * np.pi * theta * t))


# Fraction of spectral mass allowed in the outer band before the transform
# result is flagged as grid-limited.
_BAND_EDGE_FRACTION = 0.05
_BAND_EDGE_TOL = 1e-10


def fourier_transform(f: SampledFunction) -> SampledFunction:
    """Continuous-kernel Fourier transform sampled on the paired grid.

    Evaluates the trapezoid quadrature of ``int f(t) e^{-2i pi t xi} dt``
    exactly at every point of ``grid.fourier_grid()`` via one FFT and
    unit-modulus phase corrections.  With ``t_j = -L + jh`` and
    ``xi_k = -Xi + k/(nh)``::

        t_j xi_k = L*Xi - (n-1)k/(2n) - (n-1)j/(2n) + jk/n

    so the quadrature sum factors into pre/post phase vectors around a plain
    DFT.  The 2 pi placement here fixes every constant downstream.
    """
    grid = f.grid
    n = grid.n_points
    h = grid.spacing
    freq_grid = grid.fourier_grid()

    j = np.arange(n)
    half_phase = (n - 1) / (2.0 * n)
    pre = np.exp(2j * np.pi * half_phase * j)
    post = np.exp(2j * np.pi * half_phase * j)  # same exponent in k
    const = np.exp(-2j * np.pi * (n - 1) ** 2 / (4.0 * n))

    w = grid.trapezoid_weights()
    spectrum = const * post * np.fft.fft(w * f.values * pre)

    out = SampledFunction(freq_grid, spectrum, f.warnings)
    edge = max(1, int(_BAND_EDGE_FRACTION * n))
    power = np.abs(spectrum) ** 2
    total = power.sum()
    if total > 0 and (power[:edge].sum() + power[-edge:].sum()) > _BAND_EDGE_TOL * total:
        out = out.with_values(spectrum, ("band_edge_mass: grid may be too coarse for this band",))
    return out


def inverse_fourier_transform(f: SampledFunction) -> SampledFunction:
    """Inverse transform; ``inverse(forward(f))`` recovers f to tolerance."""
    conj_in = f.with_values(np.conj(f.values))
    fwd = fourier_transform(conj_in)
    return fwd.with_values(np.conj(fwd.values))


def _cumulative_from_edges(density: np.ndarray, h: float) -> tuple[np.ndarray, np.ndarray]:
    # Trapezoid cumulative integrals from the left and right grid ends.
    seg = 0.5 * h * (density[1:] + density[:-1])
    left = np.concatenate(([0.0], np.cumsum(seg)))
    right = np.concatenate(([0.0], np.cumsum(seg[::-1])))[::-1]
    return left, right


def tail_energy(f: SampledFunction, T: float) -> float:
    """Energy ``int_{|t|>T} |f|^2 dt`` by trapezoid quadrature.

    Partial cells at ``+-T`` are handled by linear interpolation of the
    density, which keeps the result continuous and nonincreasing in T.
    """
    if T < 0:
        raise DomainError("tail threshold T must be nonnegative")
    grid = f.grid
    L = grid.half_width
    if T >= L:
        if T > L:
            warnings.warn(
                f"tail threshold T={T} exceeds grid half-width {L}; tail truncated to 0",
                TruncationWarning,
                stacklevel=2,
            )
        return 0.0

    t = grid.points()
    h = grid.spacing
    density = np.abs(f.values) ** 2
    left_cum, right_cum = _cumulative_from_edges(density, h)

    def one_sided(threshold: float, cum: np.ndarray, from_right: bool) -> float:
        # integral of density over [threshold, L] (or [-L, -threshold]).
        x = threshold if from_right else -threshold
        idx = np.searchsorted(t, x)
        if from_right:
            # full cells from t[idx] to L, plus the partial cell [x, t[idx]]
            full = right_cum[idx]
            if idx == 0:
                return full
            d0, d1 = density[idx - 1], density[idx]
            frac = (t[idx] - x) / h
            dx_val = d1 + (d0 - d1) * frac  # density at x by linear interp
            partial = 0.5 * (dx_val + d1) * (t[idx] - x)
            return full + partial
        # mirrored for the left tail
        idx = np.searchsorted(t, x, side="right")
        full = left_cum[idx - 1] if idx > 0 else 0.0
        if idx >= len(t):
            return full
        d0, d1 = density[idx - 1], density[idx]
        frac = (x - t[idx - 1]) / h
        dx_val = d0 + (d1 - d0) * frac
        partial = 0.5 * (d0 + dx_val) * (x - t[idx - 1])
        return full + partial

    return float(one_sided(T, right_cum, True) + one_sided(T, left_cum, False))


def restricted_inner_product(f: SampledFunction, g: SampledFunction, T: float) -> complex:
    """``int_{-T}^{T} f(t) conj(g(t)) dt`` by trapezoid quadrature.

    The cells cut by ``+-T`` are integrated against the linear interpolant of
    the product, so the value is continuous in T.
    """
    if not f.grid.same(g.grid):
        raise GridMismatchError("restricted_inner_product requires a common grid")
    if T < 0:
        raise DomainError("T must be nonnegative")
    grid = f.grid
    L = grid.half_width
    if T >= L:
        return inner_product(f, g)
    t = grid.points()
    h = grid.spacing
    product = f.values * np.conj(g.values)

    lo = np.searchsorted(t, -T)          # first grid point >= -T
    hi = np.searchsorted(t, T, "right") - 1  # last grid point <= T
    if hi <= lo:
        # both boundaries inside one or two cells; integrate the interpolant
        left = product[lo - 1] + (product[lo] - product[lo - 1]) * ((-T - t[lo - 1]) / h)
        right = product[hi] + (product[hi + 1] - product[hi]) * ((T - t[hi]) / h)
        return complex(0.5 * (left + right) * (2.0 * T))
    core = complex(np.trapezoid(product[lo : hi + 1], dx=h))
    val_left = product[lo - 1] + (product[lo] - product[lo - 1]) * ((-T - t[lo - 1]) / h)
    core += 0.5 * (val_left + product[lo]) * (t[lo] - (-T))
    val_right = product[hi] + (product[hi + 1] - product[hi]) * ((T - t[hi]) / h)
    core += 0.5 * (product[hi] + val_right) * (T - t[hi])
    return complex(core)


def _p_objective(f: SampledFunction, p: float) -> Callable[[float], float]:
    t = f.grid.points()
    w = f.grid.trapezoid_weights()
    density = w * np.abs(f.values) ** 2

    def objective(a: float) -> float:
        return float(np.sum(np.abs(t - a) ** p * density))

    return objective


_P_MEAN_XATOL = 1e-10


def _prepare_unit(f: SampledFunction) -> tuple[SampledFunction, bool]:
    nrm = l2_norm(f)
    if nrm <= 1e-300:
        raise NormalizationError("p-statistics require a nonzero function")
    if abs(nrm - 1.0) <= 1e-9:
        return f, False
    return f.with_values(f.values / nrm), True


def p_mean(f: SampledFunction, p: float) -> float:
    """Minimizer of ``a -> int |t-a|^p |f|^2 dt`` (strictly convex for p>1).

    Solved by bounded scalar minimization over the grid extent to an
    absolute tolerance of 1e-10 in ``a``.
    """
    if p <= 1:
        raise DomainError("p-mean requires p > 1")
    g, _ = _prepare_unit(f)
    objective = _p_objective(g, p)
    L = f.grid.half_width
    res = minimize_scalar(objective, bounds=(-L, L), method="bounded",
                          options={"xatol": _P_MEAN_XATOL})
    return float(res.x)


def p_variance(f: SampledFunction, p: float) -> PStats:
    """p-variance ``inf_a int |t-a|^p |f|^2 dt`` with its minimizer.

    For p = 2 this reduces to the ordinary variance of the density
    ``|f|^2`` and the minimizer to its first moment.
    """
    if p <= 1:
        raise DomainError("p-variance requires p > 1")
    g, was_normalized = _prepare_unit(f)
    objective = _p_objective(g, p)
    L = f.grid.half_width
    res = minimize_scalar(objective, bounds=(-L, L), method="bounded",
                          options={"xatol": _P_MEAN_XATOL})
    mu = float(res.x)
    var = max(float(res.fun), 0.0)
    # conditioning probe: the objective flattens as p -> 1+
    delta = 1e-4 * max(1.0, abs(mu))
    curv = (objective(mu + delta) - 2.0 * res.fun + objective(mu - delta)) / delta**2
    return PStats(
        p=p,
        mean=mu,
        variance=var,
        dispersion=float(np.sqrt(var)),
        normalized=was_normalized,
        curvature=float(curv),
    )


def mean_and_variance(f: SampledFunction) -> tuple[float, float]:
    """First moment and variance of ``|f|^2`` by direct quadrature.

    Assumes ``f`` is unit-norm; this is the p = 2 closed form used by the
    concentration machinery (independent of the convex solver).
    """
    t = f.grid.points()
    w = f.grid.trapezoid_weights()
    density = w * np.abs(f.values) ** 2
    mu = float(np.sum(t * density))
    var = float(np.sum((t - mu) ** 2 * density))
    return mu, max(var, 0.0)


def second_moment(f: SampledFunction) -> float:
    t = f.grid.points()
    w = f.grid.trapezoid_weights()
    return float(np.sum(t**2 * w * np.abs(f.values) ** 2))


# ---------------------------------------------------------------------------
# serialization: CSV columns (t, re, im); JSON with grid metadata


def write_function_csv(f: SampledFunction, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t", "re", "im"])
        for t, v in zip(f.grid.points(), f.values):
            writer.writerow([repr(float(t)), repr(float(v.real)), repr(float(v.imag))])


def read_function_csv(path) -> SampledFunction:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or rows[0][:3] != ["t", "re", "im"]:
        raise ValueError(f"{path}: expected CSV header 't,re,im'")
    data = np.array([[float(a), float(b), float(c)] for a, b, c in rows[1:]])
    t = data[:, 0]
    n = len(t)
    if n < 16:
        raise ValueError("need at least 16 samples")
    spacings = np.diff(t)
    if not np.allclose(spacings, spacings[0], rtol=1e-9, atol=1e-12):
        raise ValueError("grid must be uniform")
    if abs(t[0] + t[-1]) > 1e-9 * max(1.0, abs(t[-1])):
        raise ValueError("grid must be symmetric about 0")
    grid = Grid(float(t[-1]), n)
    return SampledFunction(grid, data[:, 1] + 1j * data[:, 2])


def function_to_json_dict(f: SampledFunction) -> dict:
    return {
        "grid": {"half_width": f.grid.half_width, "n_points": f.grid.n_points},
        "re": [float(x) for x in f.values.real],
        "im": [float(x) for x in f.values.imag],
    }


def function_from_json_dict(d: dict) -> SampledFunction:
    grid = Grid(float(d["grid"]["half_width"]), int(d["grid"]["n_points"]))
    values = np.asarray(d["re"], dtype=float) + 1j * np.asarray(d["im"], dtype=float)
    return SampledFunction(grid, values)


def write_function_json(f: SampledFunction, path) -> None:
    with open(path, "w") as fh:
        json.dump(function_to_json_dict(f), fh, sort_keys=True)


def read_function_json(path) -> SampledFunction:
    with open(path) as fh:
        return function_from_json_dict(json.load(fh))


def load_family(paths) -> list[SampledFunction]:
    """Load one or more functions from CSV/JSON files.

    A JSON file may hold either a single function object or a list of them.
    """
    family: list[SampledFunction] = []
    for path in paths:
        text = str(path)
        if text.endswith(".csv"):
            family.append(read_function_csv(path))
        else:
            with open(path) as fh:
                payload = json.load(fh)
            if isinstance(payload, list):
                family.extend(function_from_json_dict(d) for d in payload)
            else:
                family.append(function_from_json_dict(payload))
    return family


DEFAULT_GRID_HALF_WIDTH = 16.0
DEFAULT_GRID_POINTS = 4096


def default_grid() -> Grid:
    """Default grid: wide/fine enough for Hermite h_0..h_31 at 1e-8."""
    return Grid(DEFAULT_GRID_HALF_WIDTH, DEFAULT_GRID_POINTS)
