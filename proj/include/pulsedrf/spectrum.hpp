#pragma once

#include <vector>

#include "pulsedrf/algebra.hpp"
#include "pulsedrf/engine.hpp"

namespace prf {

// Emission spectra on a detuning axis delta = omega - omega_L.
// s_inc[k] = s_total[k] - s_coh[k] holds bitwise by construction.
struct SpectrumResult {
  std::vector<double> detunings;
  std::vector<double> s_total;
  std::vector<double> s_coh;
  std::vector<double> s_inc;
  double coh_fraction = 0.0;  // integral ratio s_coh / s_total over the axis
};

struct Peak {
  double position = 0.0;  // quadratically refined detuning of the maximum
  double height = 0.0;    // refined height
  double weight = 0.0;    // spectrum integrated over [position +- window_half_width]
  double window_half_width = 0.0;
};
using PeakSet = std::vector<Peak>;

// Uniform axis covering +-span*omega0.
std::vector<double> default_detunings(double omega0, int n = 2001, double span = 2.5);

// One-sided transform Re sum_j w_j dtau a[j] e^{i delta tau_j} with tau_j = j dtau
// and trapezoid end-weights w. The fast path is a chirp-z evaluation; when
// dual_check is set it is verified against the direct sum to 1e-9 relative and
// a numerical_error is thrown on disagreement. Non-uniform axes always use the
// direct sum.
std::vector<double> onesided_spectrum(const std::vector<Complex>& a, double dtau,
                                      const std::vector<double>& detunings,
                                      bool dual_check = true);
// Reference path: plain direct summation.
std::vector<double> onesided_spectrum_direct(const std::vector<Complex>& a, double dtau,
                                             const std::vector<double>& detunings);

// Collapse a materialized correlation grid over t (trapezoid weights, spacing dt)
// and transform over tau.
std::vector<double> total_spectrum(const CorrelationGrid& grid, const TimeGrid& tg,
                                   const std::vector<double>& detunings,
                                   bool dual_check = true);

// Transform of the factorized correlator conj(<sigma->(t)) <sigma->(t+tau); the
// trajectory must span t_end + tau_max on the dtau lattice.
std::vector<double> coherent_spectrum(const Trajectory& traj, const TimeGrid& tg,
                                      const std::vector<double>& detunings,
                                      bool dual_check = true);

// Total/coherent/incoherent spectra from pre-accumulated correlators.
SpectrumResult assemble_spectra(const WeightedCorrelation& w, double dtau,
                                const std::vector<double>& detunings,
                                bool dual_check = true);

// Strict local maxima above min_height_frac * max(spec), positions refined by a
// 3-point parabola; weight integrates spec over position +- window_half_width
// (trapezoid on the piecewise-linear interpolant, clipped to the axis).
// min_prominence_frac * max(spec) sets the minimum topographic prominence; the
// default suppresses the bin-scale ripple left by the hard tau cutoff without
// touching physical peaks, whose prominence is orders of magnitude larger.
PeakSet find_peaks(const std::vector<double>& spec, const std::vector<double>& detunings,
                   double min_height_frac, double window_half_width,
                   double min_prominence_frac = 1e-4);

// W+/W- with W+- integrating s_inc over windows centered at +-omega_r.
// window_half_width <= 0 selects the default omega_r/2. Windows must not touch
// delta = 0 and must lie inside the axis.
double sideband_weight_ratio(const SpectrumResult& spec, double omega_r,
                             double window_half_width = 0.0);

}  // namespace prf
