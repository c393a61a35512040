"""Cardinality bounds and witnesses for spherical codes with bounded coherence.

A code here is a set of unit vectors in R^d or C^d whose pairwise inner
products all have modulus at most alpha.  ``code_upper_bound`` evaluates
every closed-form upper bound that applies to a query and reports the best;
``greedy_code`` produces verified lower-bound witnesses.

Bounds can be astronomically large (the volume bound grows like
``(1 + sqrt(2/(1-alpha)))^{hd}``), so every method value is carried both as
an exact integer where it fits and as log10 for comparisons and reporting.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .numerics import DomainError

# integers above this are reported in log10 form only
_MATERIALIZE_LOG10 = 18.0

REAL = "real"
COMPLEX = "complex"


def _guarded_floor(x: float) -> int:
    # Floor with a relative guard against float dust just below an integer.
    # Rounding an upper bound up by one can only weaken it, never falsify it.
    return int(math.floor(x * (1.0 + 1e-12)))


def _check_field(name: str) -> str:
    if name not in (REAL, COMPLEX):
        raise DomainError(f"field must be 'real' or 'complex' (got {name!r})")
    return name


@dataclass
class CodeBoundQuery:
    alpha: float
    dim: int
    field: str = REAL

    def __post_init__(self):
        if not 0 < self.alpha <= 1:
            raise DomainError(f"alpha must lie in (0, 1] (got {self.alpha})")
        if self.dim < 1:
            raise DomainError("dimension must be at least 1")
        self.field = _check_field(self.field)


@dataclass
class MethodValue:
    """One bound: exact integer when small enough, always a log10."""

    value: int | None
    log10: float

    @classmethod
    def from_int(cls, n: int) -> "MethodValue":
        return cls(value=int(n), log10=math.log10(n) if n > 0 else -math.inf)

    @classmethod
    def from_log10(cls, log10: float) -> "MethodValue":
        if log10 <= _MATERIALIZE_LOG10:
            return cls(value=_guarded_floor(10.0**log10), log10=log10)
        return cls(value=None, log10=log10)

    @classmethod
    def from_float(cls, x: float) -> "MethodValue":
        """Materialize from a directly computed float (no log round trip)."""
        if not x > 0:
            raise ValueError("bound values must be positive")
        if math.isinf(x) or math.log10(x) > _MATERIALIZE_LOG10:
            return cls(value=None, log10=math.log10(x) if not math.isinf(x) else math.inf)
        return cls(value=_guarded_floor(x), log10=math.log10(x))


@dataclass
class CodeBoundReport:
    query: CodeBoundQuery
    methods: dict = field(default_factory=dict)  # name -> MethodValue | None
    lower_bound: int | None = None

    @property
    def best_method(self) -> str:
        applicable = {k: v for k, v in self.methods.items() if v is not None}
        return min(applicable, key=lambda k: applicable[k].log10)

    @property
    def best(self) -> MethodValue:
        return self.methods[self.best_method]

    @property
    def best_upper(self) -> int | None:
        return self.best.value

    @property
    def best_upper_log10(self) -> float:
        return self.best.log10

    def to_json_dict(self) -> dict:
        return {
            "alpha": self.query.alpha,
            "dim": self.query.dim,
            "field": self.query.field,
            "methods": {
                name: None if mv is None else {"value": mv.value, "log10": mv.log10}
                for name, mv in self.methods.items()
            },
            "best_method": self.best_method,
            "best_upper": self.best_upper,
            "best_upper_log10": self.best_upper_log10,
            "lower_bound": self.lower_bound,
        }


def _exact_dim2(alpha: float) -> int:
    # planar codes: equiangular fans; largest N with cos(pi/N) <= alpha
    if alpha < 0.5:
        return 2
    n = max(3, int(math.floor(math.pi / math.acos(alpha))))
    while math.cos(math.pi / (n + 1)) <= alpha + 1e-12:
        n += 1
    while n > 3 and math.cos(math.pi / n) > alpha + 1e-12:
        n -= 1
    return n


def _volume_log10(alpha: float, dim: int, field: str) -> float:
    h = 1 if field == REAL else 2
    base = 1.0 + math.sqrt(2.0 / (1.0 - alpha))
    return h * dim * math.log10(base)


def _delsarte(alpha: float, dim: int) -> int | None:
    # real field only, valid strictly below alpha = 1/sqrt(dim)
    if alpha * alpha * dim >= 1.0:
        return None
    return _guarded_floor((1.0 - alpha**2) * dim / (1.0 - alpha**2 * dim))


def code_upper_bound(query: CodeBoundQuery) -> CodeBoundReport:
    """Evaluate every applicable upper-bound method and report the minimum.

    Methods: exact planar values (real, d <= 2), the linear-independence
    bound (N = d when alpha < 1/d, exact), the volume-counting bound, the
    Delsarte-Goethals-Seidel bound for alpha < 1/sqrt(d) (real), and, for
    complex queries, realification into dimension 2d.
    """
    alpha, dim, fieldname = query.alpha, query.dim, query.field
    if alpha >= 1:
        raise DomainError("alpha = 1 admits arbitrarily large codes (degenerate)")

    methods: dict[str, MethodValue | None] = {}

    if fieldname == REAL and dim == 1:
        methods["exact_small_dim"] = MethodValue.from_int(1)
    elif fieldname == REAL and dim == 2:
        methods["exact_small_dim"] = MethodValue.from_int(_exact_dim2(alpha))
    else:
        methods["exact_small_dim"] = None

    methods["linear_independence"] = (
        MethodValue.from_int(dim) if alpha < 1.0 / dim else None
    )

    methods["volume"] = MethodValue.from_log10(_volume_log10(alpha, dim, fieldname))

    if fieldname == REAL:
        delsarte = _delsarte(alpha, dim)
        methods["delsarte"] = None if delsarte is None else MethodValue.from_int(delsarte)
        methods["complexification"] = None
    else:
        methods["delsarte"] = None
        real_report = code_upper_bound(CodeBoundQuery(alpha, 2 * dim, REAL))
        methods["complexification"] = real_report.best

    return CodeBoundReport(query=query, methods=methods)


@dataclass
class SphericalCode:
    dim: int
    field: str
    vectors: np.ndarray  # shape (N, dim)

    def __post_init__(self):
        self.field = _check_field(self.field)
        dtype = np.complex128 if self.field == COMPLEX else np.float64
        self.vectors = np.asarray(self.vectors, dtype=dtype)
        if self.vectors.ndim != 2 or self.vectors.shape[1] != self.dim:
            raise ValueError(f"vectors must have shape (N, {self.dim})")

    @property
    def size(self) -> int:
        return self.vectors.shape[0]


@dataclass
class CodeVerification:
    ok: bool
    max_coherence: float


def verify_code(code: SphericalCode, alpha: float, norm_tol: float = 1e-10) -> CodeVerification:
    """Check unit norms and pairwise coherence ``<= alpha`` (plus tolerance)."""
    v = code.vectors
    norms = np.linalg.norm(v, axis=1)
    if np.any(np.abs(norms - 1.0) > norm_tol):
        bad = int(np.argmax(np.abs(norms - 1.0)))
        raise DomainError(f"vector {bad} has norm {norms[bad]:.12f}, not unit")
    if code.size < 2:
        return CodeVerification(ok=True, max_coherence=0.0)
    gram = v @ v.conj().T
    off = np.abs(gram - np.diag(np.diag(gram)))
    max_coh = float(off.max())
    return CodeVerification(ok=bool(max_coh <= alpha + 1e-10), max_coherence=max_coh)


def _planar_fan(alpha: float, dim: int, dtype) -> np.ndarray:
    # n equiangular lines through the plane of the first two coordinates
    n = _exact_dim2(min(alpha, np.nextafter(1.0, 0.0)))
    angles = np.arange(n) * math.pi / n
    vecs = np.zeros((n, dim), dtype=dtype)
    vecs[:, 0] = np.cos(angles)
    vecs[:, 1] = np.sin(angles)
    return vecs


def greedy_code(
    alpha: float,
    dim: int,
    field: str = REAL,
    trials: int = 2000,
    rng_seed: int = 0,
) -> SphericalCode:
    """Randomized greedy packing witness for the lower bound.

    Rejection sampling alone cannot reach boundary-tight configurations
    (e.g. three planar vectors at exactly alpha = 1/2), so the greedy growth
    starts from the better of two deterministic seeds - the canonical basis
    (always a valid code) and, in the plane, the equiangular fan - and then
    tries ``trials`` random unit vectors, keeping each one that preserves
    the coherence constraint.  The result always passes
    :func:`verify_code`.
    """
    field = _check_field(field)
    if not 0 < alpha < 1:
        raise DomainError("greedy_code requires alpha in (0, 1)")
    dtype = np.complex128 if field == COMPLEX else np.float64

    seeds = [np.eye(dim, dtype=dtype)]
    if dim >= 2 and field == REAL and alpha >= 0.5:
        seeds.append(_planar_fan(alpha, dim, dtype))
    best = max(seeds, key=lambda s: (verify_code(SphericalCode(dim, field, s), alpha).ok, len(s)))
    accepted = [row for row in best]

    rng = np.random.default_rng(rng_seed)
    stacked = np.vstack(accepted)
    for _ in range(trials):
        raw = rng.normal(size=dim)
        if field == COMPLEX:
            raw = raw + 1j * rng.normal(size=dim)
        cand = raw / np.linalg.norm(raw)
        if np.max(np.abs(stacked @ np.conj(cand))) <= alpha:
            accepted.append(cand)
            stacked = np.vstack(accepted)

    code = SphericalCode(dim=dim, field=field, vectors=stacked)
    check = verify_code(code, alpha)
    if not check.ok:
        raise RuntimeError(
            f"greedy code violates its own constraint (coherence {check.max_coherence})"
        )
    return code
