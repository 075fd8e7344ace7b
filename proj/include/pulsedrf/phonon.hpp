#pragma once
#include <vector>

#include "pulsedrf/algebra.hpp"
#include "pulsedrf/engine.hpp"
#include "pulsedrf/simconfig.hpp"

namespace prf {

// Bath correlation data sampled on uniform tau nodes over [0, tau_cutoff].
// phi is the phonon propagator phase integral; g_g / g_u are the polaron-frame
// kernels <B>^2 (cosh phi - 1) and <B>^2 sinh phi.
struct PhononKernels {
  std::vector<double> tau;
  std::vector<Complex> phi;
  std::vector<Complex> g_g;
  std::vector<Complex> g_u;
  double b_avg = 1.0;      // <B> = exp(-phi(0)/2) in (0, 1], 1 iff alpha = 0
  double tau_cutoff = 0.0;
};

// J(w) = alpha w^3 exp(-w^2 / 2 w_b^2); zero for w <= 0.
double spectral_function(const PhononParams& p, double omega);

// phi(tau) = integral dw J(w)/w^2 [coth(w/2T) cos(w tau) - i sin(w tau)],
// quadrature over (0, 8 w_b]; the integrand tends to 2 alpha T at w -> 0.
Complex phonon_correlation(const PhononParams& p, double tau);

// Kernels on a uniform grid with step min(0.01/w_b, dtau_hint); tau_cutoff is
// the first node beyond which both kernels stay below 1e-5 of their maxima.
// A node-doubling convergence check on phi(0) guards the frequency quadrature.
PhononKernels build_kernels(const PhononParams& p, double dtau_hint);

// Additional dissipator of the polaron master equation at time t (direct
// tau-quadrature reference path):
//   -sum_m [X_m, Theta_m rho - rho Theta_m^dag],
//   Theta_m = integral_0^cutoff G_m(tau) e^{-iH tau} X_m e^{+iH tau} dtau,
// with X_g = (Omega/2)(s+ + s-), X_u = i(Omega/2)(s+ - s-) and H frozen at
// time t. Returns the drho/dt contribution.
Operator2 polaron_dissipator(const SimConfig& config, const PhononKernels& kernels,
                             const DensityMatrix& rho, double t);

// The same contribution as a 4x4 superoperator for a given envelope value.
LMap phonon_superop(const SimConfig& config, const PhononKernels& kernels, double omega);

// Production path: superoperator tabulated over omega in [0, omega0] for
// Catmull-Rom evaluation inside the propagators; matches phonon_superop to
// interpolation accuracy (tested at 1e-9).
SuperopTable build_phonon_superop_table(const SimConfig& config, const PhononKernels& kernels,
                                        int n_nodes = 1025);

}  // namespace prf
