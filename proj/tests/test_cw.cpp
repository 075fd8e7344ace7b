#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pulsedrf/cw.hpp"
#include "pulsedrf/errors.hpp"

using namespace prf;

TEST_CASE("steady state: frozen reference values") {
  // resonant, radiative damping only
  const CwSteadyState a = cw_steady_state(1.0, 0.0, 1.0 / 40, 0.0);
  CHECK(a.sigma_minus.real() == 0.0);
  CHECK(a.sigma_minus.imag() == doctest::Approx(-0.012496094970321775).epsilon(1e-13));
  CHECK(a.population == doctest::Approx(0.499843798812871).epsilon(1e-13));
  CHECK(a.gamma_p == doctest::Approx(0.0125));

  // detuned with pure dephasing
  const CwSteadyState b = cw_steady_state(1.0, 1.0, 1.0 / 40, 0.1);
  CHECK(b.sigma_minus.real() == doctest::Approx(-0.1426978818283166).epsilon(1e-13));
  CHECK(b.sigma_minus.imag() == doctest::Approx(-0.008918617614269788).epsilon(1e-13));
  CHECK(b.population == doctest::Approx(0.3567447045707915).epsilon(1e-13));
}

TEST_CASE("steady state: validity bounds over a parameter grid") {
  for (double omega : {0.05, 0.3, 1.0, 4.0, 40.0})
    for (double delta : {-2.0, -0.33, 0.0, 0.33, 2.0})
      for (double gp : {0.0, 0.025, 0.1}) {
        const CwSteadyState s = cw_steady_state(omega, delta, 0.025, gp);
        CHECK(s.population >= 0.0);
        CHECK(s.population <= 0.5);
        CHECK(std::norm(s.sigma_minus) <= s.population + 1e-15);
      }
  // saturation limit
  CHECK(cw_steady_state(1e6, 0.33, 0.025, 0.0).population == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("steady state: rejected parameters") {
  CHECK_THROWS_AS(cw_steady_state(1.0, 0.0, 0.0, 0.0), validation_error);
  CHECK_THROWS_AS(cw_steady_state(0.0, 0.0, 0.025, 0.0), validation_error);
  CHECK_THROWS_AS(cw_steady_state(1.0, 0.0, 0.025, -0.1), validation_error);
}

TEST_CASE("transition weights: exact symmetry facts") {
  // resonance: Re<sigma-> = 0 and kappa = +-1 force equal weights
  const CwSteadyState s0 = cw_steady_state(1.0, 0.0, 1.0 / 40, 0.1);
  const TransitionWeights w0 = transition_weights(1.0, 0.0, s0);
  CHECK(w0.ratio == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(w0.gamma_plus_minus == doctest::Approx(w0.gamma_minus_plus).epsilon(1e-13));

  // mirror: flipping the detuning inverts the ratio exactly
  for (double gp : {0.0, 0.1}) {
    const CwSteadyState sp = cw_steady_state(1.0, 0.7, 1.0 / 40, gp);
    const CwSteadyState sm = cw_steady_state(1.0, -0.7, 1.0 / 40, gp);
    const double rp = transition_weights(1.0, 0.7, sp).ratio;
    const double rm = transition_weights(1.0, -0.7, sm).ratio;
    CHECK(rp * rm == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("transition weights: frozen detuned values") {
  // without dephasing the ratio sits within (gamma/omega_r)^2 of unity
  const CwSteadyState s1 = cw_steady_state(1.0, 1.0, 1.0 / 40, 0.0);
  const TransitionWeights w1 = transition_weights(1.0, 1.0, s1);
  CHECK(w1.ratio == doctest::Approx(1.0004419012913996).epsilon(1e-12));

  // with dephasing the blue transition dominates strongly
  const CwSteadyState s2 = cw_steady_state(1.0, 1.0, 1.0 / 40, 0.1);
  const TransitionWeights w2 = transition_weights(1.0, 1.0, s2);
  CHECK(w2.ratio == doctest::Approx(14.406808780644106).epsilon(1e-12));
  CHECK(w2.ratio > 1.0);

  // weight quotient agrees with the closed-form ratio
  CHECK(w2.gamma_plus_minus / w2.gamma_minus_plus == doctest::Approx(w2.ratio).epsilon(1e-12));
  CHECK(w1.gamma_plus_minus / w1.gamma_minus_plus == doctest::Approx(w1.ratio).epsilon(1e-12));
}

TEST_CASE("transition weights: balance restored as gamma -> 0") {
  for (double delta : {-1.0, 0.4, 1.0}) {
    const CwSteadyState s = cw_steady_state(1.0, delta, 1e-6, 0.0);
    CHECK(transition_weights(1.0, delta, s).ratio == doctest::Approx(1.0).epsilon(1e-11));
  }
}

TEST_CASE("transition weights: dephasing with positive detuning favors the blue side") {
  for (double omega : {0.5, 1.0, 2.0})
    for (double delta : {0.2, 1.0, 2.0})
      for (double gp : {0.01, 0.1, 0.3}) {
        const CwSteadyState s = cw_steady_state(omega, delta, 0.025, gp);
        CHECK(transition_weights(omega, delta, s).ratio > 1.0);
      }
}

TEST_CASE("transition weights: nonnegative and finite on a broad grid") {
  for (double omega : {0.05, 1.0, 10.0})
    for (double delta : {-3.0, -0.1, 0.0, 0.1, 3.0})
      for (double gp : {0.0, 0.2}) {
        const CwSteadyState s = cw_steady_state(omega, delta, 0.025, gp);
        const TransitionWeights w = transition_weights(omega, delta, s);
        CHECK(w.gamma_plus_minus >= 0.0);
        CHECK(w.gamma_minus_plus > 0.0);
        CHECK(std::isfinite(w.ratio));
        CHECK(w.ratio > 0.0);
      }
}

TEST_CASE("mollow reference descriptors") {
  const MollowReference m = mollow_reference(1.0, 1.0 / 40);
  CHECK(m.positions[0] == -1.0);
  CHECK(m.positions[1] == 0.0);
  CHECK(m.positions[2] == 1.0);
  CHECK(m.height_center_over_side == 3.0);
  CHECK(m.weight_center_over_side == 2.0);
  CHECK(m.weight_side_over_side == 1.0);
  CHECK(m.asymptotic_valid);
  CHECK_FALSE(mollow_reference(0.2, 1.0 / 40).asymptotic_valid);
}
