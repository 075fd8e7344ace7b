#include "pulsedrf/cw.hpp"

#include <cmath>

#include "pulsedrf/errors.hpp"
#include "pulsedrf/pulse.hpp"

namespace prf {

CwSteadyState cw_steady_state(double omega, double delta, double gamma, double gamma_prime) {
  if (!(gamma > 0.0)) throw validation_error("cw_steady_state: gamma must be > 0 (formulas divide by gamma)");
  if (omega == 0.0) throw validation_error("cw_steady_state: omega must be nonzero");
  if (gamma_prime < 0.0) throw validation_error("cw_steady_state: gamma_prime must be >= 0");

  CwSteadyState ss;
  ss.gamma_p = 0.5 * (gamma + gamma_prime);
  const double d = ss.gamma_p * ss.gamma_p + delta * delta + omega * omega * ss.gamma_p / gamma;
  ss.sigma_minus = Complex(-0.5 * omega * delta / d, -0.5 * omega * ss.gamma_p / d);
  ss.population = 0.5 * omega * omega * ss.gamma_p / (gamma * d);
  return ss;
}

TransitionWeights transition_weights(double omega, double delta, const CwSteadyState& ss) {
  const DressedStates d = dressed_states(omega, delta);
  if (!(omega > 0.0)) throw validation_error("transition_weights: omega must be > 0");

  // steady density matrix in the bare basis; rho_eg = <sigma->
  Operator2 rho;
  rho(0, 0) = 1.0 - ss.population;
  rho(1, 1) = ss.population;
  rho(1, 0) = ss.sigma_minus;
  rho(0, 1) = std::conj(ss.sigma_minus);

  // columns of d.vectors: |-> = (v0g, v0e), |+> = (v1g, v1e)
  const Complex v0g = d.vectors[0], v1g = d.vectors[1];
  const Complex v0e = d.vectors[2], v1e = d.vectors[3];
  const auto population_in = [&](Complex g, Complex e) {
    const Complex p = std::conj(g) * (rho(0, 0) * g + rho(0, 1) * e) +
                      std::conj(e) * (rho(1, 0) * g + rho(1, 1) * e);
    return p.real();
  };
  const double p_minus = population_in(v0g, v0e);
  const double p_plus = population_in(v1g, v1e);

  // <-|sigma-|+> = conj(v-_g) v+_e and <+|sigma-|-> = conj(v+_g) v-_e
  const double me_pm = std::norm(std::conj(v0g) * v1e);
  const double me_mp = std::norm(std::conj(v1g) * v0e);

  TransitionWeights w;
  w.gamma_plus_minus = p_plus * me_pm;
  w.gamma_minus_plus = p_minus * me_mp;
  if (!(w.gamma_minus_plus > 0.0))
    throw validation_error("transition_weights: degenerate configuration (vanishing -> + weight)");

  // closed-form ratio; kappa+ kappa- = -1 collapses the matrix-element factor
  // to kappa+^2 exactly
  const double kp = d.kappa_plus, km = d.kappa_minus;
  const double n = ss.population, re = ss.sigma_minus.real();
  const double bracket_p = 1.0 + (kp * kp - 1.0) * n + 2.0 * kp * re;
  const double bracket_m = 1.0 + (km * km - 1.0) * n + 2.0 * km * re;
  if (bracket_m == 0.0)
    throw validation_error("transition_weights: degenerate configuration (zero denominator)");
  w.ratio = kp * kp * bracket_p / bracket_m;
  return w;
}

MollowReference mollow_reference(double omega, double gamma) {
  MollowReference m;
  m.positions = {-omega, 0.0, omega};
  m.height_center_over_side = 3.0;
  m.weight_center_over_side = 2.0;
  m.weight_side_over_side = 1.0;
  m.asymptotic_valid = omega >= 10.0 * gamma;
  return m;
}

}  // namespace prf
