import math

import numpy as np
import pytest

import iontomo


def test_static_trap_is_exponential():
    t, eps, deps = iontomo.solve_epsilon(0.0, 1.0, 20.0, n_steps=2000)
    assert t.shape == (2001,)
    assert np.max(np.abs(eps - np.exp(1j * t))) < 1e-8
    assert np.max(np.abs((np.conj(eps) * deps).imag - 1.0)) < 1e-9


def test_driven_endpoint_fixture():
    _, eps, _ = iontomo.solve_epsilon(0.4, 2.0, 10.0)
    assert abs(eps[-1] - (-5.705545107618455e-01 - 7.926747852267777e-01j)) < 1e-8


def test_gaussian_purity():
    _, eps, deps = iontomo.solve_epsilon(0.4, 2.0, 5.0, n_steps=50)
    for e, d in zip(eps, deps):
        m = iontomo.gaussian_moments(e, d, 0.5 + 0.5j)
        det = m["sigma_qq"] * m["sigma_pp"] - m["sigma_pq"] ** 2
        assert det == pytest.approx(0.25, abs=1e-10)


def test_cat_tomogram_normalized():
    x = np.linspace(-12, 12, 4001)
    for odd in (False, True):
        w = iontomo.tomogram_cat(2j, odd, x, mu=0.6, nu=0.8)
        assert np.trapz(w, x) == pytest.approx(1.0, abs=1e-8)
        assert w.min() > -1e-14


def test_fbp_round_trip():
    ref = iontomo.wigner_cat(2.0)
    rec = iontomo.radon_reconstruct(iontomo.cat_sinogram(2.0))
    err = np.linalg.norm(rec["W"] - ref["W"]) / np.linalg.norm(ref["W"])
    assert err < 0.05


def test_odd_cat_at_zero_amplitude_raises():
    with pytest.raises(iontomo.IontomoError):
        iontomo.wigner_cat(0.0, odd=True)
