"""Smoke tests for the python bindings."""

import math

import numpy as np
import pytest

import pstchain as pc


def test_version_and_rng_tag():
    assert pc.__version__
    assert pc.RNG_ALGORITHM == "splitmix64-streams-v1"


def test_couplings():
    spec = pc.ChainSpec(4)
    j = pc.pst_couplings(spec)
    assert j == pytest.approx([0.5 * math.sqrt(3), 1.0, 0.5 * math.sqrt(3)], abs=1e-15)
    assert pc.ChainSpec(3).j0 == pytest.approx(1 / math.sqrt(2), abs=1e-15)
    with pytest.raises(ValueError):
        pc.ChainSpec(1)


def test_hamiltonian_and_eigensystem():
    spec = pc.ChainSpec(8)
    h = pc.build_hamiltonian(spec)
    assert h.diagonal.tolist() == [0.0] * 8
    eig = pc.diagonalize(h)
    w, v = eig.eigenvalues, eig.eigenvectors
    assert np.all(np.diff(w) > 0)
    assert np.allclose(v.T @ v, np.eye(8), atol=1e-12)
    # Ladder spectrum with spacing 2 j0.
    assert np.allclose(np.diff(w), 2 * spec.j0, atol=1e-12)


def test_mirror_and_transfer():
    spec = pc.ChainSpec(12)
    eig = pc.diagonalize(pc.build_hamiltonian(spec))
    psi0 = pc.site_basis(12, 1)
    tm = pc.mirroring_time(spec)
    assert pc.mirror_fidelity_at(psi0, eig, tm) == pytest.approx(1.0, abs=1e-9)
    psi = pc.evolve(psi0, eig, tm)
    assert abs(psi[-1]) ** 2 == pytest.approx(1.0, abs=1e-9)
    assert pc.fidelity(pc.mirror(psi0), pc.site_basis(12, 12)) == pytest.approx(1.0)


def test_disorder_is_reproducible():
    ens = pc.EnsembleSpec(pc.ChainSpec(32), 1.0, 10, 99)
    a = pc.sample_disorder(ens, 4).energies
    b = pc.sample_disorder(ens, 4).energies
    assert np.array_equal(a, b)
    assert a.min() >= 0.0 and a.max() < 1.0
    with pytest.raises(IndexError):
        pc.sample_disorder(ens, 10)


def test_steady_state_profile_and_fit():
    spec = pc.ChainSpec(40)
    ens = pc.EnsembleSpec(spec, 1.0, 6, 7)
    p = pc.ensemble_steady_state_profile(ens, 1, workers=2)
    assert sum(p) == pytest.approx(1.0, abs=1e-9)
    assert p[0] > p[-1]  # weight stays near the release site under disorder

    line = pc.critical_line(100, "end")
    assert line[0] == pytest.approx(6 / math.pi**2, abs=1e-15)

    synthetic = 0.6 * np.arange(1, 201, dtype=float) ** -2.5
    verdict = pc.fit_delta(synthetic, 1, 10, 100)
    assert verdict["delta"] == pytest.approx(0.5, abs=1e-8)
    assert verdict["localised"]


def test_window_maximum_and_oracle():
    spec = pc.ChainSpec(10)
    h = pc.build_hamiltonian(spec)
    eig = pc.diagonalize(h)
    tm = pc.mirroring_time(spec)
    psi0 = pc.site_basis(10, 1)
    target = pc.site_basis(10, 10)
    f_max, t_at_max = pc.max_fidelity_over_window(psi0, target, eig, 0.0, 4.5 * tm, 2000)
    assert f_max == pytest.approx(1.0, abs=1e-6)
    assert t_at_max == pytest.approx(tm, rel=1e-2)

    stepped, drift = pc.evolve_stepped(psi0, h, tm, tm / 1e4)
    spectral = pc.evolve(psi0, eig, tm)
    assert np.allclose(stepped, spectral, atol=1e-5)
    assert drift < 1e-6


def test_eigenstate_diagnostics():
    spec = pc.ChainSpec(60)
    ens = pc.EnsembleSpec(spec, 1.0, 4, 11)
    rho = pc.rho_bar(ens, workers=2)
    assert rho.shape == (60,)
    assert np.all(rho >= 1 / 60) and np.all(rho <= 1.0 + 1e-12)

    eig = pc.diagonalize(pc.build_hamiltonian(spec, pc.sample_disorder(ens, 0).energies))
    report = pc.injected_state_report(eig, 1, k=3)
    assert len(report["top_modes"]) == 3
    weights = [m["weight"] for m in report["top_modes"]]
    assert weights == sorted(weights, reverse=True)
