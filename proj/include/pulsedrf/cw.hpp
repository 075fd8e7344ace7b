#pragma once
#include <array>

#include "pulsedrf/algebra.hpp"

namespace prf {

// Stationary state of the driven, damped two-level system under constant drive.
struct CwSteadyState {
  Complex sigma_minus;  // <sigma-> = rho_eg
  double population;    // <sigma+ sigma->
  double gamma_p;       // (gamma + gamma')/2
};

// cw steady state of the master equation. Note the real part of <sigma->:
// the dispersive quadrature is -(Omega/2) Delta / D with
// D = gamma_p^2 + Delta^2 + Omega^2 gamma_p / gamma, which is what the
// time-dependent propagator converges to (the consistency gate pins this).
CwSteadyState cw_steady_state(double omega, double delta, double gamma, double gamma_prime);

// Dressed-state emission weights of the two sideband transitions, common
// radiative scale left symbolic (weights are reported in units of it).
struct TransitionWeights {
  double gamma_plus_minus;  // |+> -> |->, emission line at delta = +omega_r
  double gamma_minus_plus;  // |-> -> |+>, emission line at delta = -omega_r
  double ratio;             // gamma_plus_minus / gamma_minus_plus
};

// Weights from the dressed projector populations of the steady state and the
// sigma- matrix elements between dressed states; the ratio reduces to
// kappa+^2 (1+(kappa+^2-1)n+2 kappa+ Re<s->) / (1+(kappa-^2-1)n+2 kappa- Re<s->).
TransitionWeights transition_weights(double omega, double delta, const CwSteadyState& ss);

// Strong-field resonant triplet reference values (asymptotic in omega/gamma).
struct MollowReference {
  std::array<double, 3> positions;     // -omega, 0, +omega
  double height_center_over_side;      // 3
  double weight_center_over_side;      // 2
  double weight_side_over_side;        // 1
  bool asymptotic_valid;               // omega >= 10 gamma
};

MollowReference mollow_reference(double omega, double gamma);

}  // namespace prf
