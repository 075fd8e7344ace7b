#pragma once
#include <optional>

#include "pulsedrf/pulse.hpp"

namespace prf {

// Exciton-phonon bath description: J(w) = alpha w^3 exp(-w^2 / 2 w_b^2) at
// temperature T. alpha carries time^2 units (inverse energy^2 internally).
struct PhononParams {
  double alpha = 0.0;
  double omega_b = 1.0;
  double temperature = 0.0;  // in units of energy (k_B T), not kelvin
};

// Rectangular two-time grid: t over [t_start, t_end] with n_t points, tau over
// [0, tau_max] with n_tau points. The t spacing must be an integer multiple of
// the tau spacing so that t_i + tau_j always lands on the stored lattice.
struct TimeGrid {
  double t_start = 0.0;
  double t_end = 1.0;
  int n_t = 2;
  double tau_max = 1.0;
  int n_tau = 2;

  double dt() const { return (t_end - t_start) / (n_t - 1); }
  double dtau() const { return tau_max / (n_tau - 1); }
};

// Full problem statement for one run. substep_scale multiplies the internal
// integration substep density (2.0 halves the step h); the step-halving
// convergence gate drives it, production leaves it at 1.
struct SimConfig {
  double delta = 0.0;
  double gamma = 0.0;
  double gamma_prime = 0.0;
  PulseSpec pulse;
  TimeGrid grid;
  std::optional<PhononParams> phonon;
  double substep_scale = 1.0;
};

}  // namespace prf
