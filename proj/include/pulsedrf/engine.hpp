#pragma once
#include <string>
#include <vector>

#include "pulsedrf/algebra.hpp"
#include "pulsedrf/simconfig.hpp"

namespace prf {

// Superoperator tabulated over envelope values omega in [0, omega_max] on
// uniform nodes, evaluated by Catmull-Rom interpolation. All-zero tables
// evaluate to exactly zero, so a vanishing coupling adds nothing.
struct SuperopTable {
  double omega_max = 1.0;
  std::vector<LMap> nodes;

  LMap eval(double omega) const;
};

// Checks SimConfig invariants: rates nonnegative, grids uniform with
// n >= 2, the integration step bound h <= min(1/(50 Omega0), 1/(50|Delta|),
// dtau), and dt an integer multiple of dtau (lattice alignment).
void validate(const SimConfig& config);

// Number of tau-lattice samples stored by evolve: the trajectory extends to
// t_end + tau_max so two-time products never leave the stored window.
int trajectory_samples(const SimConfig& config);

// Bare master-equation generator at time t (drive + radiative decay + pure
// dephasing); the phonon contribution is layered on internally by the
// propagators when config.phonon is set.
LMap liouvillian(const SimConfig& config, double t);

struct Trajectory {
  std::vector<double> times;  // uniform at dtau from t_start to t_end + tau_max
  std::vector<DensityMatrix> rho;
  std::vector<Complex> sigma_minus_exp;
  std::vector<double> population;
};

DensityMatrix ground_state();

// Fixed-step 4th-order propagation of vec(rho); stage evaluations at t, t+h/2,
// t+h. State validity (trace, Hermiticity, positivity, purity) is enforced at
// every stored sample; violations raise a propagation-diverged error naming
// the first bad time.
Trajectory evolve(const SimConfig& config, const DensityMatrix& rho0 = ground_state());

struct CorrelationGrid {
  std::vector<double> t;    // n_t rows
  std::vector<double> tau;  // n_tau columns
  std::vector<std::vector<Complex>> g;  // g[i][j] = <s+(t_i) s-(t_i + tau_j)>
};

// Quantum-regression two-time grid: row i propagates B(0) = rho(t_i) sigma+
// with the generator evaluated at absolute time t_i + tau and samples
// g = tr[sigma- B(tau)]. Rows distribute over a worker pool; output is
// bitwise independent of the worker count.
CorrelationGrid regression_grid(const SimConfig& config, const Trajectory& traj, int threads = 1);

// t-integrated correlation, accumulated row-by-row without materializing the
// full grid: a_total[j] = sum_i w_i dt g[i][j] (trapezoid weights w_i), plus
// the coherent counterpart from stored expectations and tail diagnostics for
// the tau-window warning.
struct WeightedCorrelation {
  std::vector<Complex> a_total;
  std::vector<Complex> a_coh;  // sum_i w_i dt conj(<s+(t_i)>) <s-(t_i+tau_j)>
  double tail_fraction = 0.0;  // |a_conn(tau_max)| / max_j |a_conn(tau_j)|
  bool tau_window_ok = true;   // tail_fraction <= 1e-4
};

WeightedCorrelation accumulate_correlation(const SimConfig& config, const Trajectory& traj,
                                           int threads = 1);

}  // namespace prf
