#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "pulsedrf/cw.hpp"
#include "pulsedrf/engine.hpp"
#include "pulsedrf/errors.hpp"

using namespace prf;

namespace {
constexpr double kPi = 3.14159265358979323846;

SimConfig pulsed_config(double area, double delta, double gamma, double gamma_prime,
                        double t_lo, double t_hi, double dt_over_dtau = 1) {
  SimConfig c;
  c.pulse.shape = PulseShape::gaussian;
  c.pulse.omega0 = 1.0;
  c.pulse.area = area;
  c.pulse.t_center = 0.0;
  c.delta = delta;
  c.gamma = gamma;
  c.gamma_prime = gamma_prime;
  const double dtau = 0.1;
  c.grid.tau_max = dtau;
  c.grid.n_tau = 2;
  c.grid.t_start = t_lo;
  c.grid.t_end = t_hi;
  c.grid.n_t = static_cast<int>(std::llround((t_hi - t_lo) / (dtau * dt_over_dtau))) + 1;
  return c;
}

// drive-free config: gaussian support pushed far outside the window
SimConfig free_config(double delta, double gamma, double gamma_prime, double t_hi) {
  SimConfig c = pulsed_config(kPi, delta, gamma, gamma_prime, 0.0, t_hi);
  c.pulse.t_center = -1e5;
  return c;
}

double purity(const DensityMatrix& r) {
  return (matmul(r, r)(0, 0) + matmul(r, r)(1, 1)).real();
}
}  // namespace

TEST_CASE("liouvillian: pure decay rate and coherence decay") {
  SimConfig c = free_config(0.0, 0.4, 0.0, 10.0);
  const LMap l = liouvillian(c, 5.0);
  DensityMatrix e;
  e(1, 1) = 1.0;
  const LVec dv = apply(l, vec(e));
  CHECK(dv[3].real() == doctest::Approx(-0.4).epsilon(1e-14));
  CHECK(dv[0].real() == doctest::Approx(0.4).epsilon(1e-14));

  // coherence decay at gamma_p = (gamma + gamma')/2 plus -i delta rotation
  SimConfig c2 = free_config(0.7, 0.4, 0.3, 10.0);
  const LMap l2 = liouvillian(c2, 5.0);
  LVec coh;
  coh[1] = 1.0;  // rho_eg
  const LVec dcoh = apply(l2, coh);
  CHECK(dcoh[1].real() == doctest::Approx(-0.35).epsilon(1e-14));  // -gamma_p
  CHECK(dcoh[1].imag() == doctest::Approx(-0.7).epsilon(1e-14));   // -delta
}

TEST_CASE("liouvillian: traceless and hermiticity-preserving on random states") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  SimConfig c = pulsed_config(5 * kPi, -0.33, 0.1, 0.05, -10.0, 10.0);
  for (int it = 0; it < 200; ++it) {
    Operator2 a;
    for (auto& x : a.m) x = Complex(u(rng), u(rng));
    const Operator2 rho = a + adjoint(a);
    const LMap l = liouvillian(c, u(rng) * 8.0);
    const Operator2 d = unvec(apply(l, vec(rho)));
    CHECK(std::abs(trace(d)) <= 1e-12);
    CHECK(fro_norm(d - adjoint(d)) <= 1e-12);
  }
}

TEST_CASE("evolve: pi pulse inverts, 2 pi pulse returns, purity conserved") {
  SimConfig c = pulsed_config(kPi, 0.0, 0.0, 0.0, -9.0, 9.0);
  const Trajectory t1 = evolve(c);
  CHECK(t1.population.back() == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(purity(t1.rho.back()) == doctest::Approx(1.0).epsilon(1e-10));

  c.pulse.area = 2 * kPi;
  const Trajectory t2 = evolve(c);
  CHECK(std::abs(t2.population.back()) <= 1e-4);
  CHECK(purity(t2.rho.back()) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("evolve: cw long-time limit matches the steady-state formulas") {
  SimConfig c;
  c.pulse.shape = PulseShape::cw;
  c.pulse.omega0 = 1.0;
  c.gamma = 1.0 / 40;
  c.grid = {0.0, 1200.0, 3001, 0.1, 2};  // dt = 0.4 = 4 dtau
  for (double delta : {0.0, 1.0}) {
    for (double gp : {0.0, 0.1}) {
      c.delta = delta;
      c.gamma_prime = gp;
      const Trajectory t = evolve(c);
      const CwSteadyState ss = cw_steady_state(1.0, delta, c.gamma, gp);
      CHECK(t.population.back() == doctest::Approx(ss.population).epsilon(1e-6));
      CHECK(std::abs(t.sigma_minus_exp.back() - ss.sigma_minus) <= 1e-6);
    }
  }
}

TEST_CASE("evolve: step halving moves stored observables by less than 1e-7") {
  SimConfig c = pulsed_config(5 * kPi, 0.33, 1.0 / 40, 0.0, -45.0, 45.0);
  const Trajectory a = evolve(c);
  c.substep_scale = 2.0;
  const Trajectory b = evolve(c);
  REQUIRE(a.times.size() == b.times.size());
  double worst = 0.0;
  for (std::size_t k = 0; k < a.times.size(); ++k)
    worst = std::max(worst, std::abs(a.sigma_minus_exp[k] - b.sigma_minus_exp[k]));
  CHECK(worst <= 1e-7);
}

TEST_CASE("evolve: pure dephasing moves no population") {
  SimConfig c = free_config(0.4, 0.0, 0.2, 50.0);
  DensityMatrix rho0;
  rho0(0, 0) = 0.4;
  rho0(1, 1) = 0.6;
  rho0(0, 1) = 0.3;
  rho0(1, 0) = 0.3;
  const Trajectory t = evolve(c, rho0);
  for (double p : t.population) CHECK(std::abs(p - 0.6) <= 1e-10);
  // coherence decays at gamma_p = 0.1
  const std::size_t last = t.times.size() - 1;
  CHECK(std::abs(t.rho[last](1, 0)) ==
        doctest::Approx(0.3 * std::exp(-0.1 * t.times[last])).epsilon(1e-6));
}

TEST_CASE("evolve: state-validity failures name the first bad time") {
  SimConfig c = free_config(0.0, 0.1, 0.0, 10.0);
  c.grid.t_start = 4.0;
  c.grid.t_end = 10.0;
  c.grid.n_t = 61;
  DensityMatrix bad;
  bad(0, 0) = 1.5;
  bad(1, 1) = -0.5;
  try {
    evolve(c, bad);
    FAIL("expected numerical_error");
  } catch (const numerical_error& e) {
    CHECK(std::string(e.what()).find("t = 4") != std::string::npos);
  }
}

TEST_CASE("evolve: default initial state is the ground state") {
  SimConfig c = free_config(0.0, 0.1, 0.0, 1.0);
  const Trajectory t = evolve(c);
  CHECK(t.population.front() == 0.0);
  CHECK(t.rho.front()(0, 0) == Complex(1.0));
}

TEST_CASE("validate: rejects bad grids and rates") {
  SimConfig c = pulsed_config(kPi, 0.0, 0.1, 0.0, -9.0, 9.0);
  CHECK_NOTHROW(validate(c));
  SimConfig bad = c;
  bad.gamma = -0.1;
  CHECK_THROWS_AS(validate(bad), validation_error);
  bad = c;
  bad.grid.n_t = 1;
  CHECK_THROWS_AS(validate(bad), validation_error);
  bad = c;
  bad.grid.t_end = bad.grid.t_start;
  CHECK_THROWS_AS(validate(bad), validation_error);
  bad = c;
  bad.grid.n_t = 700;  // dt no longer an integer multiple of dtau
  CHECK_THROWS_AS(validate(bad), validation_error);
}

TEST_CASE("regression: tau = 0 column equals the population") {
  SimConfig c = pulsed_config(5 * kPi, 0.33, 1.0 / 40, 0.0, -15.0, 25.0, 4);
  c.grid.tau_max = 8.0;
  c.grid.n_tau = 81;
  const Trajectory t = evolve(c);
  const CorrelationGrid g = regression_grid(c, t);
  REQUIRE(g.t.size() == static_cast<std::size_t>(c.grid.n_t));
  for (std::size_t i = 0; i < g.t.size(); ++i) {
    const std::size_t k = i * 4;
    CHECK(std::abs(g.g[i][0] - Complex(t.population[k])) <= 1e-10);
  }
}

TEST_CASE("regression: free decay matches the closed form") {
  SimConfig c = free_config(0.7, 0.3, 0.0, 2.0);
  c.grid.tau_max = 20.0;
  c.grid.n_tau = 201;
  c.grid.n_t = 3;
  c.grid.t_end = 0.2;
  DensityMatrix e;
  e(1, 1) = 1.0;
  const Trajectory t = evolve(c, e);
  const CorrelationGrid g = regression_grid(c, t);
  for (int j = 0; j < c.grid.n_tau; ++j) {
    const double tau = g.tau[static_cast<std::size_t>(j)];
    // population decays before the row starts; factor e^{-gamma t_i} at t_0 = 0 is 1
    const Complex exact = std::exp(Complex(-0.15 * tau, -0.7 * tau));
    CHECK(std::abs(g.g[0][static_cast<std::size_t>(j)] - exact) <= 1e-9);
    CHECK(std::abs(std::abs(g.g[0][static_cast<std::size_t>(j)]) - std::exp(-0.15 * tau)) <= 1e-9);
  }
}

TEST_CASE("regression: cw correlations become stationary") {
  SimConfig c;
  c.pulse.shape = PulseShape::cw;
  c.pulse.omega0 = 1.0;
  c.delta = 0.0;
  c.gamma = 1.0 / 40;
  c.grid = {0.0, 1280.0, 201, 40.0, 401};  // dt = 6.4, dtau = 0.1
  const Trajectory t = evolve(c);
  const CorrelationGrid g = regression_grid(c, t);
  const std::size_t last = g.t.size() - 1;
  double worst = 0.0;
  for (std::size_t j = 0; j < g.tau.size(); ++j)
    worst = std::max(worst, std::abs(g.g[last - 2][j] - g.g[last][j]));
  CHECK(worst <= 1e-6);
  // and every sample respects |g| <= 1
  for (const auto& row : g.g)
    for (const Complex& x : row) CHECK(std::abs(x) <= 1.0 + 1e-8);
}

TEST_CASE("regression: trajectory/config mismatch is rejected") {
  SimConfig c = pulsed_config(kPi, 0.0, 0.1, 0.0, -9.0, 9.0);
  const Trajectory t = evolve(c);
  SimConfig other = c;
  other.grid.n_t = c.grid.n_t + 10;
  other.grid.t_end = c.grid.t_end + 1.0;
  CHECK_THROWS_AS(regression_grid(other, t), validation_error);
}

TEST_CASE("accumulated correlation equals the weighted materialized sum") {
  // pulsed case: rows cross the envelope, join the chain after it
  SimConfig c = pulsed_config(2 * kPi, -0.4, 0.05, 0.02, -12.0, 20.0, 2);
  c.grid.tau_max = 30.0;
  c.grid.n_tau = 301;
  const Trajectory t = evolve(c);
  const CorrelationGrid g = regression_grid(c, t);
  const WeightedCorrelation w = accumulate_correlation(c, t);

  const double dt = c.grid.dt();
  double scale = 0.0;
  for (std::size_t j = 0; j < w.a_total.size(); ++j) scale = std::max(scale, std::abs(w.a_total[j]));
  for (std::size_t j = 0; j < w.a_total.size(); ++j) {
    Complex ref = 0.0;
    for (int i = 0; i < c.grid.n_t; ++i) {
      const double wi = (i == 0 || i == c.grid.n_t - 1) ? 0.5 : 1.0;
      ref += wi * dt * g.g[static_cast<std::size_t>(i)][j];
    }
    CHECK(std::abs(ref - w.a_total[j]) <= 1e-10 * std::max(1.0, scale));
  }

  // coherent part against a direct trajectory product
  const int m = 2;
  for (std::size_t j = 0; j < w.a_coh.size(); j += 37) {
    Complex ref = 0.0;
    for (int i = 0; i < c.grid.n_t; ++i) {
      const double wi = (i == 0 || i == c.grid.n_t - 1) ? 0.5 : 1.0;
      ref += wi * dt * std::conj(t.sigma_minus_exp[static_cast<std::size_t>(i * m)]) *
             t.sigma_minus_exp[static_cast<std::size_t>(i * m) + j];
    }
    CHECK(std::abs(ref - w.a_coh[j]) <= 1e-12 * std::max(1.0, scale));
  }
}

TEST_CASE("accumulated correlation: cw chain path agrees with materialized rows") {
  SimConfig c;
  c.pulse.shape = PulseShape::cw;
  c.pulse.omega0 = 1.0;
  c.delta = 0.5;
  c.gamma = 1.0 / 40;
  c.gamma_prime = 0.05;
  c.grid = {0.0, 200.0, 101, 25.0, 251};  // dt = 2, dtau = 0.1
  const Trajectory t = evolve(c);
  const CorrelationGrid g = regression_grid(c, t);
  const WeightedCorrelation w = accumulate_correlation(c, t);
  for (std::size_t j = 0; j < w.a_total.size(); j += 11) {
    Complex ref = 0.0;
    for (int i = 0; i < c.grid.n_t; ++i)
      ref += ((i == 0 || i == c.grid.n_t - 1) ? 0.5 : 1.0) * c.grid.dt() *
             g.g[static_cast<std::size_t>(i)][j];
    CHECK(std::abs(ref - w.a_total[j]) <= 1e-10 * std::max(1.0, std::abs(ref)));
  }
}

TEST_CASE("worker count does not change results bitwise") {
  SimConfig c = pulsed_config(2 * kPi, 0.33, 0.05, 0.0, -12.0, 16.0, 2);
  c.grid.tau_max = 20.0;
  c.grid.n_tau = 201;
  const Trajectory t = evolve(c);
  const CorrelationGrid g1 = regression_grid(c, t, 1);
  const CorrelationGrid g3 = regression_grid(c, t, 3);
  for (std::size_t i = 0; i < g1.g.size(); ++i)
    for (std::size_t j = 0; j < g1.g[i].size(); ++j) {
      CHECK(g1.g[i][j].real() == g3.g[i][j].real());
      CHECK(g1.g[i][j].imag() == g3.g[i][j].imag());
    }
  const WeightedCorrelation w1 = accumulate_correlation(c, t, 1);
  const WeightedCorrelation w4 = accumulate_correlation(c, t, 4);
  for (std::size_t j = 0; j < w1.a_total.size(); ++j) {
    CHECK(w1.a_total[j].real() == w4.a_total[j].real());
    CHECK(w1.a_total[j].imag() == w4.a_total[j].imag());
  }
}

TEST_CASE("superoperator table: interpolation and exact zeros") {
  // table of F(omega) = omega^2 * pattern; Catmull-Rom reproduces smooth entries
  SuperopTable tab;
  tab.omega_max = 2.0;
  const int n = 101;
  tab.nodes.resize(n);
  for (int i = 0; i < n; ++i) {
    const double om = 2.0 * i / (n - 1);
    for (int k = 0; k < 16; ++k)
      tab.nodes[static_cast<std::size_t>(i)].a[static_cast<std::size_t>(k)] =
          Complex(om * om * (k + 1), -om * om);
  }
  for (double om : {0.0, 0.37, 1.0, 1.63, 2.0}) {
    const LMap l = tab.eval(om);
    CHECK(std::abs(l.a[0] - Complex(om * om, -om * om)) <= 2e-4);
    CHECK(std::abs(l.a[15] - Complex(16 * om * om, -om * om)) <= 2e-3);
  }
  // node values are exact
  const LMap l50 = tab.eval(2.0 * 50 / (n - 1));
  CHECK(l50.a[0] == tab.nodes[50].a[0]);

  SuperopTable zero;
  zero.omega_max = 1.0;
  zero.nodes.assign(5, LMap{});
  const LMap z = zero.eval(0.3);
  for (const auto& x : z.a) CHECK(x == Complex(0.0));
}
