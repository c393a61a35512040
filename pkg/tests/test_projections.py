import math

import numpy as np
import pytest

from tfbounds.hermite import build_hermite_basis, hermite_function
from tfbounds.numerics import DomainError, SampledFunction, combine, normalized
from tfbounds.projections import (
    approximable_family_bound,
    canonical_basis_example,
    onb_to_code,
)
from tfbounds.pswf import in_P_class, landau_pollak_check, residual_norm
from tfbounds.sphere_codes import verify_code


@pytest.mark.parametrize("n", [4, 9, 16])
def test_canonical_example_machine_exact(n):
    res = canonical_basis_example(n)
    assert np.max(np.abs(res.residuals - 1.0 / math.sqrt(n))) < 5e-15
    # the projected code attains the coherence bound with equality
    assert res.code.coherence == pytest.approx(1.0 / (n - 1.0), abs=1e-12)
    assert res.code.coherence <= res.code.alpha_bound + 1e-8
    assert verify_code(res.code.spherical_code(), res.code.alpha_bound).ok


def test_hermite_family_on_prolates(pswf22, hermite20):
    family = hermite20.functions[:3]
    eps = max(
        landau_pollak_check(f, 2.0, 2.0, in_P_class(f, 2.0, 2.0), pswf22).epsilon
        for f in family
    )
    code = onb_to_code(family, pswf22, 17, eps)
    assert code.coherence <= eps**2 / (1.0 - eps**2) + 1e-8
    for k, f in enumerate(family):
        direct = residual_norm(f, pswf22, 17)
        assert code.residuals[k] == pytest.approx(direct, abs=1e-8)


def test_exact_basis_members_zero_coherence(pswf22):
    code = onb_to_code([pswf22.functions[0], pswf22.functions[1]], pswf22, 4, 0.5)
    assert code.coherence < 1e-12
    assert code.residuals.max() < 1e-7


def test_hermite_reference_basis(grid, hermite20):
    family = hermite20.functions[:3]
    code = onb_to_code(family, build_hermite_basis(8, grid), 8, 1e-6)
    assert code.coherence < 1e-10
    # zero residual computes as sqrt(float rounding) ~ 1e-8
    assert code.residuals.max() < 5e-8


def test_eta_variant(grid, hermite20, pswf22, rng):
    mix = np.eye(3) + 0.03 * rng.normal(size=(3, 3))
    family = [normalized(combine(mix[i], hermite20.functions[:3])) for i in range(3)]
    eps = max(residual_norm(f, pswf22, 17) for f in family) * 2.0 + 1e-9
    code = onb_to_code(family, pswf22, 17, eps)
    assert code.eta > 0
    assert code.coherence <= (eps**2 + code.eta**2) / (1.0 - eps**2) + 1e-8


def test_eta_declared_too_small(grid, hermite20, pswf22, rng):
    mix = np.eye(3) + 0.05 * rng.normal(size=(3, 3))
    family = [normalized(combine(mix[i], hermite20.functions[:3])) for i in range(3)]
    with pytest.raises(DomainError, match="eta"):
        onb_to_code(family, pswf22, 17, 0.3, eta=1e-9)


def test_precondition_errors(grid, hermite20, pswf22):
    family = hermite20.functions[:2]
    with pytest.raises(DomainError, match="eps"):
        onb_to_code(family, pswf22, 17, 0.9)  # eps above 1/sqrt(2)
    bad_norm = [SampledFunction(grid, 2.0 * family[0].values)]
    with pytest.raises(DomainError, match="unit-norm"):
        onb_to_code(bad_norm, pswf22, 17, 0.1)
    # residual beyond eps is identified per index
    spread = [normalized(combine([1.0], [hermite_function(9, grid)]))]
    with pytest.raises(DomainError, match="residual"):
        onb_to_code(spread, pswf22, 5, 1e-8)


def test_approximable_family_bound_values():
    assert approximable_family_bound(0.1, 3) == 3
    # alpha < 1/d route gives exactly d
    eps = 0.05
    assert approximable_family_bound(eps, 7) == 7
    with pytest.raises(DomainError):
        approximable_family_bound(0.8, 3)
    with pytest.raises(DomainError):
        approximable_family_bound(0.0, 3)


def test_canonical_example_witnesses_lower_bound():
    # n unit vectors that are (1/sqrt(n) + delta, n-1)-approximable exist,
    # so the bound at that eps cannot fall below n
    n = 9
    res = canonical_basis_example(n)
    eps = float(res.residuals.max()) * (1.0 + 1e-9)
    bound = approximable_family_bound(eps, n - 1)
    assert bound >= n
