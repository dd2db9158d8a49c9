import math

import numpy as np
import pytest

from gravcat_liv import evolve
from gravcat_liv.dispersion import PhysicalConstants
from gravcat_liv.gravcat import (entanglement_time, initial_state,
                                 make_generator_from_scales,
                                 make_generic_generator, sigma_for_gap_shift)
from gravcat_liv.observables import (concurrence_theta0, concurrence_wootters,
                                     concurrence_x, record,
                                     x_series_components)

NAT = PhysicalConstants.natural()


def random_x_state(rng):
    def block():
        a = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        return a @ a.conj().T

    b14, b23 = block(), block()
    norm = np.trace(b14).real + np.trace(b23).real
    rho = np.zeros((4, 4), dtype=complex)
    rho[np.ix_([0, 3], [0, 3])] = b14 / norm
    rho[np.ix_([1, 2], [1, 2])] = b23 / norm
    return rho


def random_product_state(rng):
    a = rng.normal(size=2) + 1j * rng.normal(size=2)
    b = rng.normal(size=2) + 1j * rng.normal(size=2)
    psi = np.kron(a / np.linalg.norm(a), b / np.linalg.norm(b))
    return np.outer(psi, psi.conj())


class TestConcurrenceX:
    def test_product_state(self):
        assert concurrence_x(initial_state(0.0)) == 0.0

    def test_bell_like(self):
        assert concurrence_x(initial_state(math.pi / 4.0)) \
            == pytest.approx(1.0, abs=1e-15)

    def test_evolved_state_matches_closed_form(self):
        omega, eps = 0.8, 1.1
        tau = entanglement_time(omega, eps, NAT)
        for t in np.linspace(0.0, 3.0 * tau, 40):
            r11, r14, r44 = evolve.closed_form_unitary(0.0, omega, eps, t,
                                                       NAT)
            rho = evolve.x_states_from_components(r11, r14, r44)[0]
            assert concurrence_x(rho) == pytest.approx(
                float(concurrence_theta0(t, omega, eps, NAT)), abs=1e-12)

    def test_rejects_non_x(self):
        rho = np.eye(4, dtype=complex) / 4.0
        rho[0, 1] = rho[1, 0] = 0.1
        with pytest.raises(ValueError, match="concurrence_wootters"):
            concurrence_x(rho)


class TestConcurrenceWootters:
    def test_maximally_mixed(self):
        assert concurrence_wootters(np.eye(4, dtype=complex) / 4.0) == 0.0

    def test_bell(self):
        assert concurrence_wootters(initial_state(math.pi / 4.0)) \
            == pytest.approx(1.0, abs=1e-10)

    def test_matches_fast_path_on_x_states(self):
        rng = np.random.default_rng(59)
        for _ in range(500):
            rho = random_x_state(rng)
            assert abs(concurrence_wootters(rho) - concurrence_x(rho)) \
                <= 1e-10

    def test_product_states_separable(self):
        rng = np.random.default_rng(61)
        for _ in range(200):
            assert concurrence_wootters(random_product_state(rng)) <= 1e-10

    def test_rejects_invalid_state(self):
        rho = np.diag([1.2, 0.0, 0.0, -0.2]).astype(complex)
        with pytest.raises(ValueError, match="invalid state"):
            concurrence_wootters(rho)


class TestConcurrenceTheta0:
    def test_zero_coupling(self):
        t = np.linspace(0.0, 20.0, 100)
        assert np.abs(concurrence_theta0(t, 0.0, 1.3, NAT)).max() == 0.0

    def test_zero_time(self):
        assert concurrence_theta0(0.0, 0.7, 1.0, NAT) == 0.0

    def test_half_period_value(self):
        omega, eps = 0.6, 1.4
        tau = entanglement_time(omega, eps, NAT)
        expected = 2.0 * omega * eps / (omega ** 2 + eps ** 2)
        assert concurrence_theta0(math.pi * tau / 2.0, omega, eps, NAT) \
            == pytest.approx(expected, rel=1e-12)

    def test_zeros_and_maxima_structure(self):
        omega, eps = 0.5, 1.0  # Omega <= eps
        tau = entanglement_time(omega, eps, NAT)
        for k in range(4):
            assert concurrence_theta0(k * math.pi * tau, omega, eps, NAT) \
                <= 1e-12
        t = np.linspace(0.0, 4.0 * math.pi * tau, 20001)
        c = concurrence_theta0(t, omega, eps, NAT)
        peak = t[np.argmax(c)] / (math.pi * tau)
        assert abs(peak - round(peak - 0.5) - 0.5) < 0.01

    def test_omega_sign_symmetry(self):
        t = np.linspace(0.0, 10.0, 50)
        assert np.abs(concurrence_theta0(t, 0.9, 1.0, NAT)
                      - concurrence_theta0(t, -0.9, 1.0, NAT)).max() <= 1e-15


class TestRecord:
    def test_initial_state(self):
        rec = record(initial_state(0.0), 0.0)
        assert rec.concurrence == 0.0
        assert rec.rho11 == 1.0
        assert rec.purity == pytest.approx(1.0, abs=1e-14)

    def test_maximally_mixed(self):
        rec = record(np.eye(4, dtype=complex) / 4.0, 1.0)
        assert rec.purity == pytest.approx(0.25, abs=1e-14)
        assert rec.concurrence == 0.0

    def test_double_entry_on_evolved_state(self):
        gen = make_generator_from_scales(E_ref=2.0, epsilon=1.0, n=2,
                                         sigma=0.1, t_QG=1.0, Omega=0.5,
                                         Gamma=0.0, k=NAT)
        series = evolve.integrate(gen, initial_state(0.0), 3.0, 1e-3)
        rho = series.states[-1]
        rec = record(rho, series.times[-1])
        assert rec.rho11 == pytest.approx(rho[0, 0].real, abs=1e-15)
        assert rec.purity == pytest.approx(
            np.trace(rho @ rho).real, abs=1e-13)
        assert rec.concurrence == pytest.approx(concurrence_wootters(rho),
                                                abs=1e-10)
        assert rec.abs_rho14 == abs(rho[0, 3])

    def test_series_components_consistent_with_record(self):
        gen = make_generator_from_scales(E_ref=2.0, epsilon=1.0, n=2,
                                         sigma=0.2, t_QG=0.5, Omega=0.7,
                                         Gamma=0.0, k=NAT)
        series = evolve.integrate(gen, initial_state(0.4), 1.0, 1e-3)
        comps = x_series_components(series.states)
        for idx in (0, 317, 1000):
            rec = record(series.states[idx], series.times[idx])
            assert comps["concurrence"][idx] == pytest.approx(
                rec.concurrence, abs=1e-12)
            assert comps["purity"][idx] == pytest.approx(rec.purity,
                                                         abs=1e-12)

    def test_series_components_rejects_non_x(self):
        states = np.tile(np.eye(4, dtype=complex) / 4.0, (3, 1, 1))
        states[1, 0, 1] = 0.05
        with pytest.raises(ValueError, match="X-state"):
            x_series_components(states)


class TestMonotoneAttenuation:
    def test_systematic_grid(self):
        eps, omega = 1.0, 0.5
        tau = entanglement_time(omega, eps, NAT)
        t = np.linspace(0.0, 4.0 * math.pi * tau, 5000)
        maxima = []
        for shift in (0.0, 0.5 * eps, eps, 2.0 * eps):
            r11, r14, r44 = evolve.systematic_liv_solution(
                0.0, omega, eps, shift, t, NAT)
            states = evolve.x_states_from_components(r11, r14, r44)
            maxima.append(x_series_components(states)["concurrence"].max())
        assert all(b <= a + 1e-12 for a, b in zip(maxima, maxima[1:]))

    def test_stochastic_rates(self):
        eps, omega = 1.0, 0.5
        tau = entanglement_time(omega, eps, NAT)
        base = make_generator_from_scales(E_ref=2.0, epsilon=eps, n=2,
                                          sigma=0.0, t_QG=0.0, Omega=omega,
                                          Gamma=0.0, k=NAT)
        maxima = []
        for rate in (0.0, 0.05, 0.2, 0.8):
            gen = make_generic_generator(base.h_eff, base.lindblad_op, rate)
            series = evolve.integrate(gen, initial_state(0.0),
                                      4.0 * math.pi * tau, tau / 500.0)
            maxima.append(
                x_series_components(series.states)["concurrence"].max())
        assert all(b <= a + 1e-12 for a, b in zip(maxima, maxima[1:]))

    def test_omega_sign_invariance_of_evolution(self):
        eps = 1.0
        results = []
        for omega in (0.7, -0.7):
            gen = make_generator_from_scales(E_ref=2.0, epsilon=eps, n=2,
                                             sigma=0.1, t_QG=1.0, Omega=omega,
                                             Gamma=0.0, k=NAT)
            series = evolve.integrate(gen, initial_state(0.0), 5.0, 1e-3)
            results.append(x_series_components(series.states)["concurrence"])
        assert np.abs(results[0] - results[1]).max() <= 1e-10
