"""Free-energy evaluators, parameter types, and scaling conventions."""

import math

import numpy as np
import pytest

from nqac.model import (DomainError, InputError, ModelParams, SectorConfig,
                        free_energy, free_energy_curve, free_energy_hybrid,
                        free_energy_hybrid_curve, free_energy_with_degeneracy,
                        log2cosh, normalized, scale_params, DegeneracyTerm)


def test_log2cosh_matches_naive_at_moderate_arguments():
    x = np.linspace(-20, 20, 101)
    assert np.allclose(log2cosh(x), np.log(2.0 * np.cosh(x)), atol=1e-13)


def test_log2cosh_is_finite_and_asymptotic_at_large_arguments():
    x = np.array([50.0, 500.0, 5000.0])
    out = log2cosh(x)
    assert np.all(np.isfinite(out))
    assert np.allclose(out, x, rtol=1e-15)


def test_params_validation():
    with pytest.raises(InputError):
        ModelParams(p=1, q=2)
    with pytest.raises(InputError):
        ModelParams(p=2, q=2, J=-1.0)
    with pytest.raises(InputError):
        ModelParams(p=2, q=2, coupling="diagonal")
    with pytest.raises(InputError):
        ModelParams(p=2, q=2, lam=-0.1)
    with pytest.raises(InputError):
        ModelParams(p=2, q=2, nesting=0.5)


def test_sector_fractions_must_sum_to_one():
    P = ModelParams(p=2, q=2, lam=0.5)
    with pytest.raises(InputError):
        free_energy(P, SectorConfig(((0.5, 1.0), (0.4, -1.0))))


def test_symmetric_config_matches_curve():
    P = ModelParams(p=4, q=2, J=1.0, lam=1.3, gamma=1.7, temperature=0.2)
    m = np.linspace(0.0, 1.0, 7)
    curve = free_energy_curve(P, m)
    direct = [free_energy(P, SectorConfig.symmetric(float(x))) for x in m]
    assert np.allclose(curve, direct, atol=1e-14)


def test_zero_temperature_closed_form():
    # at T = 0 the quantum term is -C * sum f * sqrt(h^2 + Gamma^2)
    P = ModelParams(p=3, q=2, J=1.0, lam=0.7, gamma=1.1, temperature=0.0,
                    nesting=2.0)
    m = 0.6
    C = P.nesting
    h = 3 * P.J * C ** 2 * m ** 2 + 2 * P.lam * C * m
    expect = (2 * P.J * C ** 3 * m ** 3 + P.lam * C ** 2 * m ** 2
              - C * math.hypot(h, P.gamma))
    assert free_energy(P, SectorConfig.symmetric(m)) == pytest.approx(expect, abs=1e-12)


def test_hybrid_reduces_to_plain_at_eta_zero():
    rng = np.random.default_rng(7)
    for _ in range(20):
        P = ModelParams(p=int(rng.integers(2, 6)), q=int(rng.integers(2, 5)),
                        J=float(rng.uniform(0.5, 2.0)),
                        lam=float(rng.uniform(0.0, 3.0)),
                        gamma=float(rng.uniform(0.0, 4.0)),
                        temperature=float(rng.choice([0.0, 0.3, 1.0])),
                        nesting=float(rng.integers(1, 4)))
        cfg = SectorConfig.symmetric(float(rng.uniform(-1, 1)))
        assert free_energy_hybrid(P, cfg) == pytest.approx(
            free_energy(P, cfg), abs=1e-12 * max(1.0, abs(free_energy(P, cfg))))


def test_hybrid_curve_matches_pointwise():
    P = ModelParams(p=4, q=2, J=1.0, lam=0.5, eta=0.8, gamma=1.2,
                    temperature=0.1)
    m = np.linspace(-1, 1, 9)
    curve = free_energy_hybrid_curve(P, m)
    direct = [free_energy_hybrid(P, SectorConfig.symmetric(float(x))) for x in m]
    assert np.allclose(curve, direct, atol=1e-12)


def test_degeneracy_entropy_term():
    # k = 0 contributes -(T/N) log 2; at T = 0 the term vanishes
    P = ModelParams(p=2, q=2, J=1.0, lam=0.5, gamma=0.3, temperature=0.4)
    N = 10
    base = free_energy(P, SectorConfig(((1.0, 0.7), (0.0, -0.7))))
    with_ent = free_energy_with_degeneracy(P, N, 0, 0.7, -0.7)
    assert with_ent == pytest.approx(base - P.temperature / N * math.log(2.0),
                                     abs=1e-12)
    P0 = P.with_(temperature=0.0)
    assert free_energy_with_degeneracy(P0, N, 3, 1.0, -1.0) == pytest.approx(
        free_energy(P0, SectorConfig(((0.7, 1.0), (0.3, -1.0)))), abs=1e-12)


def test_degeneracy_term_against_exact_binomial():
    assert DegeneracyTerm(100, 50).log_degeneracy == pytest.approx(
        math.log(2 * math.comb(100, 50)), rel=1e-12)
    with pytest.raises(InputError):
        DegeneracyTerm(10, 11)


def test_scale_params_exponent_arithmetic():
    P = ModelParams(p=4, q=2, J=1.0, lam=0.8, gamma=1.6, temperature=0.5,
                    nesting=1.0)
    s = scale_params(P.with_(nesting=1.0), 2.0, "lowT_partition")
    assert s.temperature == pytest.approx(0.5 / 16)
    assert s.lam == pytest.approx(0.8 / 4)
    assert s.gamma == pytest.approx(1.6 / 8)
    assert s.J == P.J
    for conv in ("saddle", "lowT_free_energy", "lowT_partition"):
        ident = scale_params(P, 1.0, conv)
        assert ident.with_(nesting=P.nesting) == P
    with pytest.raises(InputError):
        scale_params(P, 2.0, "diagonal")


def test_normalization_independent_of_C_at_fixed_scaled_arguments():
    # F / C^max(p,q) with Gamma/C^(max-1), lam/C^(max-2) held fixed
    rng = np.random.default_rng(3)
    for _ in range(10):
        p, q = 4, 2
        g_s, l_s, m = rng.uniform(0.5, 3.0), rng.uniform(0.1, 3.0), rng.uniform(0, 1)
        vals = []
        for C in (1.0, 2.0, 3.0):
            P = ModelParams(p=p, q=q, J=1.0, lam=l_s * C ** 2,
                            gamma=g_s * C ** 3, temperature=0.0, nesting=C)
            vals.append(normalized(P, free_energy(P, SectorConfig.symmetric(m))))
        assert np.ptp(vals) < 1e-10 * max(1.0, abs(vals[0]))


def test_antiferro_local_order_equals_ferro_with_zero_p_term():
    # at m = 0, q = 2 the antiferro free energy in the local order n matches
    # the ferro p = 2 one in m with the p-body coupling removed (J -> 0 limit)
    lam, gamma, T = 1.3, 0.9, 0.25
    Paf = ModelParams(p=2, q=2, J=1.0, coupling="antiferro", lam=lam,
                      gamma=gamma, temperature=T)
    Pf = ModelParams(p=2, q=2, J=1e-12, coupling="ferro", lam=lam,
                     gamma=gamma, temperature=T)
    for n in np.linspace(0, 1, 6):
        af = free_energy(Paf, SectorConfig(((0.5, float(n)), (0.5, -float(n)))))
        f = free_energy(Pf, SectorConfig.symmetric(float(n)))
        assert af == pytest.approx(f, abs=1e-9)
