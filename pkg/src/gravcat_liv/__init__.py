"""Planck-scale-noise decoherence of gravitationally entangled cat states.

Simulates the Lindblad evolution of a two-qubit "gravcat" system whose
kinetic operator is deformed by a (possibly fluctuating) modified
dispersion relation, cross-validated against closed-form solutions and a
Monte Carlo pure-state unraveling.
"""

__version__ = "0.1.0"

from .dispersion import (MdrParams, PhysicalConstants, critical_energy,
                         free_decoherence_time, mdr_energy,
                         pi_decoherence_time, pi_sigma,
                         relativistic_scaling_time, sigma_n)
from .engine import have_native
from .evolve import (TimeSeries, closed_form_unitary, free_offdiag,
                     integrate, rk4_step, systematic_liv_solution)
from .gravcat import (CouplingConstants, GravcatParams, LindbladGenerator,
                      attenuation_A_n, build_h0, build_kinetic,
                      coupling_constants, entanglement_time, gap_shift,
                      gravcat_decoherence_time, initial_state,
                      make_generator, make_generator_from_scales,
                      make_generic_generator, sigma_for_gap_shift)
from .observables import (ObservableRecord, concurrence_theta0,
                          concurrence_wootters, concurrence_x, record)
from .stochastic import (NoiseModel, TrajectoryEnsemble, ensemble_average,
                         sample_trajectory)

__all__ = [name for name in dir() if not name.startswith("_")]
