from __future__ import annotations

import math

import numpy as np
import pytest
from scipy import special

from spinbranch.fourier import (
    BATTERY,
    GridFn,
    KernelParams,
    compound,
    dft,
    f_lowest_ktype,
    f_lowest_ktype_matrix,
    ft_knapp_stein_kernel,
    ft_lowest_ktype,
    ft_lowest_ktype_reference,
    ft_poisson,
    gamma_fn,
    is_positive_multiplier,
    kbessel_tilde,
    kbessel_tilde_array,
    multiplier_eigenvalues,
    quad_ft_poisson,
    reflection_matrix,
    rgamma,
    riesz_d,
    run_battery,
    sample_grid,
    sphere_area,
    wedge,
)


def test_gamma_and_poles():
    assert gamma_fn(0.5) ** 2 == pytest.approx(math.pi)
    assert gamma_fn(5) == pytest.approx(24)
    with pytest.raises(ValueError):
        gamma_fn(-2)
    assert rgamma(-2) == 0


def test_kbessel_closed_form_and_underflow():
    for x in (0.1, 1.0, 7.5):
        assert kbessel_tilde(0.5, x) == pytest.approx(math.sqrt(math.pi) / 2 * math.exp(-x), rel=1e-13)
        assert kbessel_tilde_array(1.0, [x])[0] == pytest.approx((x / 2) * special.kv(1, x), rel=1e-12)
    with pytest.warns(RuntimeWarning):
        assert kbessel_tilde(0.0, 800.0) == 0.0
    with pytest.raises(ValueError):
        kbessel_tilde(1.0, 0.0)


def test_riesz_and_sphere():
    assert riesz_d(2, 3) == pytest.approx(2 ** -0.5 * math.sqrt(math.pi))
    assert sphere_area(3) == pytest.approx(4 * math.pi)
    assert sphere_area(1) == 2


def test_ft_poisson_against_quadrature():
    for lam in (-2, -3):
        for r in (0.5, 2.0):
            assert ft_poisson(lam, 3, r) == pytest.approx(quad_ft_poisson(lam, 3, r), rel=1e-6)


def test_kernel_params_validation_and_positivity():
    with pytest.raises(ValueError):
        KernelParams(3, 2, 0.5)
    p = KernelParams(3, 0, 0.5)
    assert multiplier_eigenvalues(p) == (1.0, 2.0)
    assert is_positive_multiplier(p)
    assert not is_positive_multiplier(KernelParams(3, 1, 0.75))
    assert KernelParams(5, 2, 0.1).fiber_dim == 10


def test_ft_kernel_is_symmetric():
    p = KernelParams(4, 2, 0.3)
    M = ft_knapp_stein_kernel(p, [0.2, -1.0, 0.5, 0.7])
    assert np.allclose(M, M.T)


def test_exterior_algebra():
    rng = np.random.default_rng(0)
    R = np.linalg.qr(rng.normal(size=(4, 4)))[0]
    S = np.linalg.qr(rng.normal(size=(4, 4)))[0]
    assert np.allclose(compound(R @ S, 2), compound(R, 2) @ compound(S, 2))
    x = rng.normal(size=4)
    sig = reflection_matrix(x, 2)
    assert np.allclose(sig @ sig, np.eye(6))
    a, b = rng.normal(size=4), rng.normal(size=4)
    assert np.allclose(wedge(a, 1, b, 1, 4), -wedge(b, 1, a, 1, 4))


def test_lowest_ktype_two_constructions_agree():
    rng = np.random.default_rng(1)
    for n in (2, 3):
        for _ in range(5):
            x = rng.normal(size=2 * n - 1)
            assert np.allclose(f_lowest_ktype(x, n), f_lowest_ktype_matrix(x, n), atol=1e-12)
            xi = rng.normal(size=2 * n - 1)
            assert np.allclose(ft_lowest_ktype(xi, n), ft_lowest_ktype_reference(xi, n), atol=1e-12)


def test_grid_and_dft_gaussian_fixed_point():
    g = sample_grid(lambda p: np.exp(-np.sum(p**2, axis=1) / 2), 2, side=64, half_width=10.0)
    G = dft(g)
    want = np.exp(-np.sum(G.points() ** 2, axis=-1) / 2)
    assert np.allclose(G.values[..., 0], want, atol=1e-10)
    with pytest.raises(ValueError):
        GridFn(2, 48, 0.1, np.zeros((48, 48, 1)))


def test_run_battery_names_and_tolerances():
    res = run_battery(("kbessel", "algebra"))
    assert [r.name for r in res] == ["kbessel", "algebra"] and all(r.passed for r in res)
    res = run_battery(("kbessel",), tolerances={"kbessel": 1e-12})
    assert not res[0].passed
    assert set(BATTERY) == {"poisson", "riesz", "f_formulas", "convolution", "dft", "kbessel", "algebra"}
    with pytest.raises(ValueError):
        run_battery(("nope",))
