import math

import numpy as np
import pytest

from gravcat_liv.dispersion import MdrParams, PhysicalConstants, sigma_n
from gravcat_liv.evolve import lindblad_rhs
from gravcat_liv.gravcat import (GravcatParams, attenuation_A_n, build_h0,
                                 build_kinetic, check_density_matrix,
                                 coupling_constants, entanglement_time,
                                 gap_shift, gravcat_decoherence_time,
                                 initial_state, kinetic_gap_power,
                                 make_generator, make_generator_from_scales,
                                 make_generic_generator, sigma_for_gap_shift)

SI = PhysicalConstants.si()
NAT = PhysicalConstants.natural()


def mesoscopic_params(**overrides):
    eps = SI.hbar * 1.0
    defaults = dict(M=1e-14, d=200e-6, d_prime=300e-6, L=100e-6,
                    epsilon=eps, E_ref=10.0 * eps, n=1, t_QG=SI.t_P,
                    theta=0.0, units="SI")
    defaults.update(overrides)
    return GravcatParams(**defaults)


def random_x_state(rng):
    """Random valid X-state (two PSD 2x2 blocks with unit total trace)."""
    def block():
        a = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        return a @ a.conj().T

    b14, b23 = block(), block()
    norm = np.trace(b14).real + np.trace(b23).real
    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0], rho[0, 3] = b14[0, 0] / norm, b14[0, 1] / norm
    rho[3, 0], rho[3, 3] = b14[1, 0] / norm, b14[1, 1] / norm
    rho[1, 1], rho[1, 2] = b23[0, 0] / norm, b23[0, 1] / norm
    rho[2, 1], rho[2, 2] = b23[1, 0] / norm, b23[1, 1] / norm
    return rho


class TestCouplingConstants:
    def test_symmetric_geometry(self):
        c = coupling_constants(2.0, 1.5, 1.5, NAT)
        assert c.Omega == 0.0
        assert c.Gamma == pytest.approx(c.alpha / 1.5, rel=1e-15)

    def test_mesoscopic_values(self):
        c = coupling_constants(1e-14, 200e-6, 300e-6, SI)
        assert c.alpha == pytest.approx(6.674e-39, rel=1e-3)
        assert abs(c.Omega) == pytest.approx(5.56e-36, rel=1e-2)
        # d' > d means the same-well term dominates: Omega > 0 as defined
        assert c.Omega > 0.0
        assert abs(c.Omega) <= c.Gamma

    def test_alpha_quadratic_in_mass(self):
        a1 = coupling_constants(1.0, 1.0, 2.0, NAT).alpha
        a2 = coupling_constants(math.sqrt(2.0), 1.0, 2.0, NAT).alpha
        assert a2 == pytest.approx(2.0 * a1, rel=1e-12)


class TestHamiltonians:
    def test_scalar_case(self):
        h = build_h0(E_ref=3.0, epsilon=0.0, Omega=0.0, Gamma=1.0)
        assert np.array_equal(h, 2.0 * np.eye(4))

    def test_pure_splitting(self):
        h = build_h0(E_ref=1.0, epsilon=2.0, Omega=0.0, Gamma=1.0)
        assert np.allclose(h, np.diag([2.0, 0.0, 0.0, -2.0]), atol=1e-15)

    def test_structure_and_block_eigenvalues(self):
        e_ref, eps, omega, gamma = 5.0, 1.2, 0.7, 0.4
        h = build_h0(e_ref, eps, omega, gamma)
        expected_diag = [e_ref - gamma + eps, e_ref - gamma, e_ref - gamma,
                         e_ref - gamma - eps]
        assert np.allclose(np.diag(h).real, expected_diag, atol=1e-14)
        assert h[0, 3] == h[3, 0] == h[1, 2] == h[2, 1] == -omega
        block = np.array([[h[0, 0], h[0, 3]], [h[3, 0], h[3, 3]]])
        eig = np.linalg.eigvalsh(block)
        center = e_ref - gamma
        split = math.hypot(eps, omega)
        assert np.allclose(eig, [center - split, center + split], atol=1e-12)

    def test_kinetic(self):
        assert np.allclose(build_kinetic(2.0, 1.0),
                           np.diag([3.0, 2.0, 2.0, 1.0]), atol=1e-15)
        assert np.allclose(build_kinetic(2.0, 0.0), 2.0 * np.eye(4),
                           atol=1e-15)

    def test_kinetic_not_positive_definite(self):
        with pytest.raises(ValueError, match="not positive-definite"):
            build_kinetic(1.0, 2.0)


class TestAttenuation:
    def test_zero_gap(self):
        assert attenuation_A_n(2.0, 0.0, 3, 1.5) == 0.0

    def test_n2_closed_form(self):
        sigma = 0.37
        eps = 0.9
        assert attenuation_A_n(4.0, eps, 2, sigma) == pytest.approx(
            2.0 * sigma * eps, rel=1e-12)

    def test_natural_unit_example(self):
        assert attenuation_A_n(2.0, 1.0, 2, 1.0) == pytest.approx(2.0,
                                                                  rel=1e-15)

    def test_nonnegative_and_monotone_in_eps(self):
        values = [attenuation_A_n(5.0, eps, 3, -0.8)
                  for eps in np.linspace(0.0, 4.9, 50)]
        assert all(v >= 0.0 for v in values)
        assert all(b >= a for a, b in zip(values, values[1:]))

    def test_gap_shift_sign(self):
        # positive sigma reduces the gap; negative sigma increases it
        assert gap_shift(2.0, 1.0, 2, 0.5) < 0.0
        assert gap_shift(2.0, 1.0, 2, -0.5) > 0.0
        assert gap_shift(2.0, 1.0, 2, 0.5) == -attenuation_A_n(2.0, 1.0, 2, 0.5)

    def test_sigma_for_gap_shift_roundtrip(self):
        for shift in (-0.3, 0.0, 1.7):
            sigma = sigma_for_gap_shift(3.0, 1.1, 3, shift)
            assert gap_shift(3.0, 1.1, 3, sigma) == pytest.approx(shift,
                                                                  abs=1e-14)


class TestInitialState:
    def test_theta_zero(self):
        rho = initial_state(0.0)
        assert rho[0, 0] == 1.0
        assert np.abs(rho).sum() == 1.0

    def test_bell_like(self):
        rho = initial_state(math.pi / 4.0)
        for idx in ((0, 0), (3, 3), (0, 3), (3, 0)):
            assert rho[idx] == pytest.approx(0.5, rel=1e-15)

    def test_purity_one_for_all_theta(self):
        for theta in np.linspace(0.0, math.pi / 2.0, 25):
            rho = initial_state(theta)
            check_density_matrix(rho)
            assert np.trace(rho @ rho).real == pytest.approx(1.0, abs=1e-14)

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            initial_state(-0.1)


class TestMakeGenerator:
    def test_zero_noise_timescale(self):
        p = mesoscopic_params(t_QG=0.0)
        gen = make_generator(p, SI)
        assert gen.rate == 0.0

    def test_no_deformation(self):
        k = PhysicalConstants.natural(ell=0.0)
        p = GravcatParams(M=1.0, d=0.5, d_prime=1.0, L=0.5, epsilon=1.0,
                          E_ref=2.0, n=2, t_QG=1.0, theta=0.0)
        gen = make_generator(p, k)
        c = coupling_constants(1.0, 0.5, 1.0, k)
        assert np.allclose(gen.h_eff, build_h0(2.0, 1.0, c.Omega, c.Gamma),
                           atol=1e-15)
        assert gen.rate == 0.0

    def test_rate_formula(self):
        k = PhysicalConstants.natural(ell=0.2)
        p = GravcatParams(M=1.0, d=0.5, d_prime=1.0, L=0.5, epsilon=1.0,
                          E_ref=2.0, n=2, t_QG=0.7, theta=0.0)
        gen = make_generator(p, k)
        sigma = sigma_n(p.mdr(), k)
        assert gen.rate == pytest.approx(sigma * sigma * 0.7, rel=1e-12)
        assert np.allclose(gen.lindblad_op, build_kinetic(2.0, 1.0),
                           atol=1e-15)

    def test_propagates_positivity_error(self):
        with pytest.raises(ValueError, match="not positive-definite"):
            mesoscopic_params(E_ref=0.5 * SI.hbar)


class TestGenericGenerator:
    def test_unitary_when_rate_zero(self):
        h0 = build_h0(2.0, 1.0, 0.5, 1.5)
        gen = make_generic_generator(h0, build_kinetic(2.0, 1.0), 0.0)
        rho = initial_state(0.3)
        rhs = lindblad_rhs(gen, rho)
        comm = h0 @ rho - rho @ h0
        assert np.allclose(rhs, -1j * comm, atol=1e-15)

    def test_identity_lindbladian_is_inert(self):
        h0 = build_h0(2.0, 1.0, 0.5, 1.5)
        gen = make_generic_generator(h0, np.eye(4, dtype=complex), 3.0)
        rng = np.random.default_rng(3)
        rho = random_x_state(rng)
        rhs_noisy = lindblad_rhs(gen, rho)
        rhs_unitary = lindblad_rhs(make_generic_generator(h0, np.eye(4), 0.0),
                                   rho)
        assert np.allclose(rhs_noisy, rhs_unitary, atol=1e-14)

    def test_h0_unmodified(self):
        h0 = build_h0(2.0, 1.0, 0.5, 1.5)
        k2 = build_kinetic(2.0, 1.0) @ build_kinetic(2.0, 1.0)
        gen = make_generic_generator(h0, k2, 4.278e-6)
        assert np.array_equal(gen.h_eff, h0)
        assert gen.rate == 4.278e-6

    def test_rejects_non_hermitian(self):
        bad = np.eye(4, dtype=complex)
        bad[0, 1] = 1.0
        with pytest.raises(ValueError, match="Hermitian"):
            make_generic_generator(bad, np.eye(4), 0.0)


class TestTimescales:
    def test_gravcat_decay_time_matches_rate_form(self):
        rng = np.random.default_rng(23)
        for _ in range(100):
            eps = 10.0 ** rng.uniform(-1, 1)
            p = GravcatParams(M=10.0 ** rng.uniform(-1, 1), d=0.5,
                              d_prime=1.0, L=0.5, epsilon=eps,
                              E_ref=eps * rng.uniform(1.5, 20.0),
                              n=int(rng.integers(1, 4)),
                              t_QG=10.0 ** rng.uniform(-1, 1), theta=0.0)
            k = PhysicalConstants.natural(E_P=10.0 ** rng.uniform(-1, 1))
            sigma = sigma_n(p.mdr(), k)
            a_n = attenuation_A_n(p.E_ref, p.epsilon, p.n, sigma)
            expected = k.hbar ** 2 / (a_n ** 2 * p.t_QG)
            got = gravcat_decoherence_time(p, k)
            assert abs(got - expected) <= 1e-12 * expected

    def test_infinite_when_gap_closes(self):
        p = mesoscopic_params()
        tiny = GravcatParams(M=p.M, d=p.d, d_prime=p.d_prime, L=p.L,
                             epsilon=1e-60, E_ref=p.E_ref, n=1, t_QG=p.t_QG,
                             theta=0.0, units="SI")
        assert gravcat_decoherence_time(p, SI) \
            < gravcat_decoherence_time(tiny, SI)
        assert gravcat_decoherence_time(mesoscopic_params(t_QG=0.0), SI) \
            == math.inf

    def test_near_degenerate_matches_free_particle(self):
        # with E_ref -> epsilon the kinetic spread collapses onto
        # (E + eps)^(n/2), within a factor 2 of the free-particle recipe
        from gravcat_liv.dispersion import free_decoherence_time
        eps = SI.hbar * 1.0
        p = mesoscopic_params(E_ref=eps * (1.0 + 1e-15))
        tau_cat = gravcat_decoherence_time(p, SI)
        tau_free = free_decoherence_time(MdrParams(n=1, M=p.M, t_QG=p.t_QG),
                                         eps, SI)
        assert tau_free / 2.0 < tau_cat < 2.0 * tau_free

    def test_entanglement_time(self):
        eps = SI.hbar * 1.0
        c = coupling_constants(1e-14, 200e-6, 300e-6, SI)
        tau = entanglement_time(c.Omega, eps, SI)
        assert 0.9 < tau < 1.1
        assert entanglement_time(0.0, 2.0, NAT) == pytest.approx(0.5)
        assert entanglement_time(2.0, 2.0, NAT) == pytest.approx(
            1.0 / (2.0 * math.sqrt(2.0)), rel=1e-12)

    def test_entanglement_time_degenerate(self):
        with pytest.raises(ValueError, match="degenerate"):
            entanglement_time(0.0, 0.0, NAT)


class TestComponentEquations:
    """The full 4x4 generator must reproduce the five scalar equations of
    motion for X-states, with decay rate A^2 t_QG / hbar^2 and phase rate
    (2 eps + shift) / hbar on the outer coherence."""

    @pytest.mark.parametrize("sigma_sign", [+1.0, -1.0])
    def test_rhs_matches_scalar_odes(self, sigma_sign):
        rng = np.random.default_rng(29)
        k = NAT
        for _ in range(100):
            eps = rng.uniform(0.2, 2.0)
            e_ref = eps * rng.uniform(1.2, 5.0)
            n = int(rng.integers(1, 4))
            sigma = sigma_sign * rng.uniform(0.01, 0.5)
            t_qg = rng.uniform(0.1, 2.0)
            omega = rng.uniform(-1.0, 1.0)
            gamma = rng.uniform(0.0, 2.0)
            gen = make_generator_from_scales(E_ref=e_ref, epsilon=eps, n=n,
                                             sigma=sigma, t_QG=t_qg,
                                             Omega=omega, Gamma=gamma, k=k)
            rho = random_x_state(rng)
            rhs = lindblad_rhs(gen, rho)

            shift = gap_shift(e_ref, eps, n, sigma)
            a_n = attenuation_A_n(e_ref, eps, n, sigma)
            decay = a_n * a_n * t_qg / k.hbar ** 2

            d11 = -1j * omega * (rho[0, 3] - rho[3, 0]) / k.hbar
            d23 = -1j * omega * (rho[1, 1] - rho[2, 2]) / k.hbar
            d14 = (-decay * rho[0, 3]
                   - 1j * shift * rho[0, 3] / k.hbar
                   - 1j * (omega * rho[0, 0] - omega * rho[3, 3]
                           + 2.0 * eps * rho[0, 3]) / k.hbar)
            assert abs(rhs[0, 0] - d11) <= 1e-12
            assert abs(rhs[3, 3] + d11) <= 1e-12
            assert abs(rhs[1, 1] - (-1j * omega * (rho[1, 2] - rho[2, 1])
                                    / k.hbar)) <= 1e-12
            assert abs(rhs[2, 2] + rhs[1, 1]) <= 1e-12
            assert abs(rhs[1, 2] - d23) <= 1e-12
            assert abs(rhs[0, 3] - d14) <= 1e-12
            # nothing leaks out of the X manifold
            for i, j in [(0, 1), (0, 2), (1, 3), (2, 3)]:
                assert abs(rhs[i, j]) <= 1e-14

    def test_undeformed_subspace(self):
        # the (|01>, |10>) block sees no deformation: with rho23 = 0 its
        # populations are frozen
        gen = make_generator_from_scales(E_ref=2.0, epsilon=1.0, n=2,
                                         sigma=0.3, t_QG=1.0, Omega=0.5,
                                         Gamma=1.5, k=NAT)
        rho = np.diag([0.4, 0.35, 0.15, 0.1]).astype(complex)
        rho[0, 3] = rho[3, 0] = 0.05
        rhs = lindblad_rhs(gen, rho)
        assert abs(rhs[1, 1]) <= 1e-15
        assert abs(rhs[2, 2]) <= 1e-15


class TestDensityMatrixChecks:
    def test_accepts_valid(self):
        check_density_matrix(np.eye(4, dtype=complex) / 4.0)

    def test_rejects_bad_trace(self):
        with pytest.raises(ValueError, match="trace"):
            check_density_matrix(np.eye(4, dtype=complex))

    def test_rejects_negative(self):
        rho = np.diag([1.1, 0.0, 0.0, -0.1]).astype(complex)
        with pytest.raises(ValueError, match="negative eigenvalue"):
            check_density_matrix(rho)

    def test_params_validation(self):
        with pytest.raises(ValueError, match="theta"):
            mesoscopic_params(theta=2.0)
        with pytest.raises(ValueError, match="nonnegative"):
            mesoscopic_params(t_QG=-1.0)
