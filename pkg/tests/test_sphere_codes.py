import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tfbounds.numerics import DomainError
from tfbounds.sphere_codes import (
    COMPLEX,
    REAL,
    CodeBoundQuery,
    MethodValue,
    SphericalCode,
    code_upper_bound,
    greedy_code,
    verify_code,
)


@pytest.mark.parametrize(
    "alpha,dim,expected",
    [
        (0.9, 1, 1),
        (0.3, 2, 2),
        (0.499, 2, 2),
        (math.cos(math.pi / 4.0), 2, 4),
        (0.5, 2, 3),
        (0.05, 10, 10),
        (0.0999, 10, 10),
    ],
)
def test_exact_and_lemma_values(alpha, dim, expected):
    assert code_upper_bound(CodeBoundQuery(alpha, dim)).best_upper == expected


def test_planar_fan_boundaries():
    for n in range(3, 12):
        alpha = math.cos(math.pi / n)
        assert code_upper_bound(CodeBoundQuery(alpha, 2)).best_upper == n
        just_below = alpha - 1e-9
        assert code_upper_bound(CodeBoundQuery(just_below, 2)).best_upper == n - 1


def test_delsarte_value_and_validity():
    report = code_upper_bound(CodeBoundQuery(0.2, 10))
    assert report.methods["delsarte"].value == 16
    assert report.best_method == "delsarte"
    # inapplicable at and beyond alpha = 1/sqrt(d)
    at_boundary = code_upper_bound(CodeBoundQuery(1.0 / math.sqrt(10.0), 10))
    assert at_boundary.methods["delsarte"] is None


def test_volume_bound():
    report = code_upper_bound(CodeBoundQuery(0.5, 3))
    assert report.methods["volume"].value == 27
    complex_report = code_upper_bound(CodeBoundQuery(0.5, 3, COMPLEX))
    assert complex_report.methods["volume"].value == 729


def test_degenerate_alpha():
    with pytest.raises(DomainError):
        code_upper_bound(CodeBoundQuery(1.0, 3))
    with pytest.raises(DomainError):
        CodeBoundQuery(0.0, 3)
    with pytest.raises(DomainError):
        CodeBoundQuery(1.2, 3)


def test_method_value_materialization():
    small = MethodValue.from_log10(3.0)
    assert small.value == 1000
    huge = MethodValue.from_log10(25.0)
    assert huge.value is None and huge.log10 == 25.0


def test_complexification_route():
    c_report = code_upper_bound(CodeBoundQuery(0.2, 5, COMPLEX))
    r_report = code_upper_bound(CodeBoundQuery(0.2, 10, REAL))
    assert c_report.methods["complexification"].value == r_report.best_upper
    assert c_report.best_upper_log10 <= r_report.best_upper_log10 + 1e-12
    # complex d = 1: any two distinct unit scalars have unit coherence
    assert code_upper_bound(CodeBoundQuery(0.5, 1, COMPLEX)).best_upper == 1


def test_verify_code_cases():
    assert verify_code(SphericalCode(4, REAL, np.eye(4)), 0.0).ok
    pair = SphericalCode(2, REAL, np.array(
        [[1.0, 0.0], [math.cos(math.pi / 3.0), math.sin(math.pi / 3.0)]]))
    res = verify_code(pair, 0.5)
    assert res.ok and res.max_coherence == pytest.approx(0.5, abs=1e-12)
    simplex = SphericalCode(3, REAL, np.array(
        [[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]]) / math.sqrt(3.0))
    assert not verify_code(simplex, 0.3).ok
    assert verify_code(simplex, 0.34).max_coherence == pytest.approx(1.0 / 3.0, abs=1e-12)
    with pytest.raises(DomainError):
        verify_code(SphericalCode(2, REAL, np.array([[2.0, 0.0]])), 0.5)


def test_greedy_orthonormal_seed():
    code = greedy_code(0.05, 5, trials=100, rng_seed=1)
    assert code.size == 5
    assert verify_code(code, 0.05).ok


def test_greedy_planar_fan():
    code = greedy_code(0.5, 2, trials=500, rng_seed=1)
    assert code.size >= 3
    # near alpha = 1: the fan supplies N >= floor(pi / arccos(alpha)) vectors
    alpha = math.cos(math.pi / 7.0) + 1e-9
    assert greedy_code(alpha, 2, trials=0, rng_seed=0).size >= 7


def test_greedy_reproducible():
    a = greedy_code(0.45, 3, trials=600, rng_seed=7)
    b = greedy_code(0.45, 3, trials=600, rng_seed=7)
    assert a.size == b.size
    assert np.allclose(a.vectors, b.vectors)


def test_greedy_complex_field():
    code = greedy_code(0.4, 3, field=COMPLEX, trials=300, rng_seed=3)
    assert code.field == COMPLEX
    assert verify_code(code, 0.4).ok


@settings(max_examples=40, deadline=None)
@given(
    alpha=st.floats(min_value=0.05, max_value=0.9),
    dim=st.integers(min_value=1, max_value=6),
    field=st.sampled_from([REAL, COMPLEX]),
)
def test_greedy_never_exceeds_upper(alpha, dim, field):
    upper = code_upper_bound(CodeBoundQuery(alpha, dim, field))
    witness = greedy_code(alpha, dim, field, trials=120, rng_seed=11)
    assert math.log10(witness.size) <= upper.best_upper_log10 + 1e-12


@settings(max_examples=40, deadline=None)
@given(
    alpha=st.floats(min_value=0.02, max_value=0.93),
    dim=st.integers(min_value=1, max_value=10),
    bump=st.floats(min_value=1e-4, max_value=0.05),
)
def test_upper_bound_monotonicity(alpha, dim, bump):
    base = code_upper_bound(CodeBoundQuery(alpha, dim)).best_upper_log10
    in_alpha = code_upper_bound(CodeBoundQuery(min(alpha + bump, 0.99), dim)).best_upper_log10
    in_dim = code_upper_bound(CodeBoundQuery(alpha, dim + 1)).best_upper_log10
    assert in_alpha >= base - 1e-12
    assert in_dim >= base - 1e-12


def test_linear_independence_tighter_than_delsarte():
    # below alpha = 1/d both apply and the exact value d wins
    report = code_upper_bound(CodeBoundQuery(0.08, 9))
    assert report.methods["linear_independence"].value == 9
    assert report.methods["delsarte"].value >= 9
    assert report.best_upper == 9
