import math

import numpy as np
import pytest

from tfbounds.hermite import (
    HermiteConstructionError,
    build_hermite_basis,
    concentration_summary,
    displayed_bound,
    heisenberg_product,
    hermite_form,
    hermite_form_matrix,
    hermite_function,
    hermite_operator_fd,
    hermite_values,
    rayleigh_ritz_trace,
    sharp_bound,
    sharp_mean_dispersion_check,
    trace_lower_bound,
)
from tfbounds.numerics import (
    DomainError,
    Grid,
    SampledFunction,
    combine,
    inner_product,
    l2_norm,
    normalized,
)

TWO_PI = 2.0 * math.pi


def test_ground_state_closed_form(grid):
    basis = build_hermite_basis(1, grid)
    t = grid.points()
    expected = 2.0**0.25 * np.exp(-math.pi * t**2)
    assert np.max(np.abs(basis.functions[0].values - expected)) < 1e-14


def test_gram_identity(grid):
    basis = build_hermite_basis(3, grid)
    for i in range(3):
        for j in range(3):
            target = 1.0 if i == j else 0.0
            assert inner_product(basis.functions[i], basis.functions[j]) == pytest.approx(
                target, abs=1e-8
            )


def test_fourier_eigenproperty(grid, hermite20):
    freq_rows = hermite_values(20, grid.fourier_grid().points())
    w = grid.fourier_grid().trapezoid_weights()
    from tfbounds.numerics import fourier_transform

    for k in (0, 3, 7, 13, 19):
        fhat = fourier_transform(hermite20.functions[k])
        expected = (1j) ** (-k) * freq_rows[k]
        resid = np.sqrt(np.sum(w * np.abs(fhat.values - expected) ** 2))
        assert resid < 1e-6


def test_construction_error_names_index():
    # far too coarse a grid for this many modes
    with pytest.raises(HermiteConstructionError, match="h_"):
        build_hermite_basis(24, Grid(3.0, 48))


def test_hermite_form_eigenvalues(grid, hermite20):
    assert hermite_form(hermite20.functions[0]) == pytest.approx(1.0 / TWO_PI, rel=1e-10)
    assert hermite_form(hermite20.functions[5]) == pytest.approx(11.0 / TWO_PI, rel=1e-6)


def test_hermite_form_eigen_expansion_oracle(grid, hermite20, rng):
    # random unit coefficient vector: form must equal sum (2k+1)/(2 pi) |c_k|^2
    c = rng.normal(size=6) + 1j * rng.normal(size=6)
    c = c / np.linalg.norm(c)
    f = combine(c, hermite20.functions[:6])
    expected = sum((2 * k + 1) / TWO_PI * abs(c[k]) ** 2 for k in range(6))
    assert hermite_form(f) == pytest.approx(expected, rel=1e-9)
    mix = combine([1 / math.sqrt(2), 1 / math.sqrt(2)], hermite20.functions[:2])
    assert hermite_form(mix) == pytest.approx(1.0 / math.pi, rel=1e-10)


def test_hermite_form_norm_gate(grid, hermite20):
    doubled = SampledFunction(grid, 2.0 * hermite20.functions[0].values)
    with pytest.raises(ValueError):
        hermite_form(doubled)
    assert hermite_form(doubled, raw=True) == pytest.approx(4.0 / TWO_PI, rel=1e-9)


def test_eigenrelation_finite_difference(grid, hermite20):
    for k in range(11):
        hf = hermite_operator_fd(hermite20.functions[k])
        lam = (2 * k + 1) / TWO_PI
        resid = l2_norm(SampledFunction(grid, hf.values - lam * hermite20.functions[k].values))
        assert resid < 1e-5


def test_rayleigh_ritz_hermite_block(hermite20):
    res = rayleigh_ritz_trace(hermite20.functions[:3])
    assert res.lhs == pytest.approx(9.0 / TWO_PI, rel=1e-12)
    assert res.rhs == pytest.approx(res.lhs, rel=1e-9)
    operator_eigs = np.array([1.0, 3.0, 5.0]) / TWO_PI
    assert np.all(res.matrix_eigenvalues >= operator_eigs - 1e-9)


def test_rayleigh_ritz_rotated_pair(hermite20):
    mix = [
        combine([1 / math.sqrt(2), 1 / math.sqrt(2)], hermite20.functions[:2]),
        combine([1 / math.sqrt(2), -1 / math.sqrt(2)], hermite20.functions[:2]),
    ]
    res = rayleigh_ritz_trace(mix)
    assert res.lhs == pytest.approx(4.0 / TWO_PI, rel=1e-12)
    assert res.rhs == pytest.approx(4.0 / TWO_PI, rel=1e-9)


def test_rayleigh_ritz_single_h3(hermite20):
    res = rayleigh_ritz_trace([hermite20.functions[3]])
    assert res.lhs == pytest.approx(1.0 / TWO_PI, rel=1e-12)
    assert res.rhs == pytest.approx(7.0 / TWO_PI, rel=1e-6)
    assert res.lhs <= res.rhs


def test_rayleigh_ritz_rejects_non_orthonormal(hermite20):
    family = [hermite20.functions[0], hermite20.functions[0]]
    with pytest.raises(DomainError, match="orthonormal"):
        rayleigh_ritz_trace(family)


def test_concentration_identity(grid, hermite20):
    f = normalized(
        combine([0.8, 0.6], [hermite_function(0, grid, shift=0.5, modulation=0.4),
                             hermite_function(1, grid, shift=0.5, modulation=0.4)])
    )
    summary = concentration_summary([f])
    r = summary.records[0]
    assert r.form == pytest.approx(r.total, abs=1e-6)


def test_sharp_check_hermite_equality(hermite20):
    res = sharp_mean_dispersion_check(hermite20.functions[:11])
    assert bool(np.all(res.equality_flags))
    assert res.equality_prefix == 11
    assert np.max(np.abs(res.sums - res.bounds) / res.bounds) < 1e-6
    assert np.max(np.abs(res.hermite_alignment - 1.0)) < 1e-4
    # n = 2 equality value: sum of the first three eigenvalues
    assert res.sums[2] == pytest.approx(9.0 / TWO_PI, rel=1e-9)


def test_sharp_check_heisenberg_floor_n0(hermite20):
    res = sharp_mean_dispersion_check([hermite20.functions[0]])
    assert res.sums[0] == pytest.approx(1.0 / TWO_PI, rel=1e-9)
    # the product form of the same statement
    assert heisenberg_product(hermite20.functions[0]) == pytest.approx(
        1.0 / (4 * math.pi), abs=1e-6
    )


def test_sharp_check_rotated_block(hermite20, rng):
    q, r = np.linalg.qr(rng.normal(size=(4, 4)))
    q = q * np.sign(np.diag(r))
    family = [combine(q[i], hermite20.functions[:4]) for i in range(4)]
    res = sharp_mean_dispersion_check(family)
    assert bool(np.all(res.sums >= res.bounds - 1e-8))
    # trace invariance: the full-block sum is exactly the bound
    assert res.sums[3] == pytest.approx(res.bounds[3], rel=1e-9)
    # generic rotations mix eigenvalues, so early partial sums sit strictly above
    assert res.sums[0] > res.bounds[0] + 1e-6


def test_sharp_bound_formulas():
    for n in range(12):
        assert sharp_bound(n) == pytest.approx((n + 1) ** 2 / TWO_PI, rel=1e-15)
        assert trace_lower_bound(n) == sharp_bound(n)
        assert displayed_bound(n) < sharp_bound(n)


def test_heisenberg_products(grid, hermite20):
    floor = 1.0 / (4 * math.pi)
    corpus = [
        hermite20.functions[0],
        hermite20.functions[4],
        hermite_function(0, grid, shift=1.0, modulation=-0.5),
        normalized(combine([1.0, 1.0j], hermite20.functions[:2])),
    ]
    for f in corpus:
        assert heisenberg_product(f) >= floor - 1e-8
    odd = [hermite20.functions[1], hermite20.functions[3],
           normalized(combine([0.6, 0.8], [hermite20.functions[1], hermite20.functions[3]]))]
    for f in odd:
        assert heisenberg_product(f) >= 3.0 * floor - 1e-8
    assert heisenberg_product(hermite20.functions[1]) == pytest.approx(3.0 * floor, abs=1e-6)


def test_orthogonality_shift_floor(grid, hermite20):
    # unit functions orthogonal to h_0 .. h_{n-1} have form at least (2n+1)/(2 pi)
    for n in (1, 3, 6):
        f = normalized(combine([0.5, -0.7, 0.5], hermite20.functions[n : n + 3]))
        assert hermite_form(f) >= (2 * n + 1) / TWO_PI - 1e-8


def test_form_matrix_hermitian(hermite20, rng):
    family = hermite20.functions[:4]
    m = hermite_form_matrix(family)
    assert np.allclose(m, m.conj().T)
    assert np.allclose(np.diag(m).real, [(2 * k + 1) / TWO_PI for k in range(4)], rtol=1e-8)


def test_concentration_summary_exports(hermite20):
    summary = concentration_summary(hermite20.functions[:3])
    payload = summary.to_json_dict()
    assert len(payload["records"]) == 3
    assert payload["running_sums"][-1] == pytest.approx(9.0 / TWO_PI, rel=1e-9)
    table = summary.format_table()
    assert table.splitlines()[0].strip().startswith("k")
    assert len(table.splitlines()) == 4
