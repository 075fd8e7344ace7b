// Scenario gate: twelve end-to-end criteria, one PASS/FAIL line each, pinned
// tolerances in the code. Exit status is the number of failed criteria, so a
// clean gate exits 0. Failing lines print the measured values next to the
// required ones; known-open items fail here honestly rather than being
// loosened to pass.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdarg>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "pulsedrf/cw.hpp"
#include "pulsedrf/engine.hpp"
#include "pulsedrf/pulse.hpp"
#include "pulsedrf/spectrum.hpp"
#include "pulsedrf/units.hpp"

using namespace prf;

namespace {

constexpr double kPi = 3.14159265358979323846;

int g_failed = 0;

std::string sfmt(const char* fmt, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, ap);
  va_end(ap);
  return buf;
}

void report(int id, bool pass, const std::string& detail) {
  std::printf("criterion %2d: %s - %s\n", id, pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failed;
}

DensityMatrix steady_rho(double omega, double delta, double gamma, double gp) {
  const CwSteadyState ss = cw_steady_state(omega, delta, gamma, gp);
  DensityMatrix r;
  r(0, 0) = 1.0 - ss.population;
  r(1, 1) = ss.population;
  r(1, 0) = ss.sigma_minus;
  r(0, 1) = std::conj(ss.sigma_minus);
  return r;
}

// cw spectrum started in the steady state; all t rows are identical, so a
// short t window carries the full weight and only the tau axis matters.
SpectrumResult run_cw(double delta, double gp, const std::vector<double>& ax) {
  SimConfig c;
  c.pulse.shape = PulseShape::cw;
  c.pulse.omega0 = 1.0;
  c.delta = delta;
  c.gamma = 1.0 / 40;
  c.gamma_prime = gp;
  const double gpd = 0.5 * (c.gamma + gp);
  c.grid.t_start = 0.0;
  c.grid.t_end = 0.6;
  c.grid.n_t = 3;
  c.grid.tau_max = std::ceil(10.0 / gpd);
  c.grid.n_tau = static_cast<int>(std::llround(c.grid.tau_max / 0.1)) + 1;
  const Trajectory t = evolve(c, steady_rho(1.0, delta, c.gamma, gp));
  const WeightedCorrelation w = accumulate_correlation(c, t);
  return assemble_spectra(w, c.grid.dtau(), ax);
}

// Pulsed run on the production lattice: dtau = 0.1, dt = 0.3, tau window ten
// polarization lifetimes, t window five pulse widths plus ten 1/gamma.
SimConfig pulsed_cfg(double area, double delta, double gamma,
                     std::optional<PhononParams> bath = std::nullopt) {
  SimConfig c;
  c.pulse.shape = PulseShape::gaussian;
  c.pulse.omega0 = 1.0;
  c.pulse.area = area;
  c.delta = delta;
  c.gamma = gamma;
  const double tg = gaussian_tau_g(c.pulse);
  const double gp = 0.5 * gamma;
  c.grid.t_start = -std::ceil(5.0 * tg);
  c.grid.t_end = std::ceil(5.0 * tg + 10.0 / gamma);
  c.grid.tau_max = std::ceil(10.0 / gp);
  c.grid.n_tau = static_cast<int>(std::llround(c.grid.tau_max / 0.1)) + 1;
  const double dt = 0.3;
  const int n_steps = static_cast<int>(std::ceil((c.grid.t_end - c.grid.t_start) / dt));
  c.grid.t_end = c.grid.t_start + n_steps * dt;
  c.grid.n_t = n_steps + 1;
  c.phonon = bath;
  return c;
}

SpectrumResult run_sim(const SimConfig& c, const std::vector<double>& ax) {
  const Trajectory t = evolve(c);
  const WeightedCorrelation w = accumulate_correlation(c, t);
  return assemble_spectra(w, c.grid.dtau(), ax);
}

PhononParams qd_bath() {
  return PhononParams{0.06 / (kHbarMeVPs * kHbarMeVPs), 1.0, temperature_from_kelvin(4.0)};
}

const Peak* nearest_peak(const PeakSet& ps, double x) {
  const Peak* best = nullptr;
  for (const Peak& p : ps)
    if (!best || std::abs(p.position - x) < std::abs(best->position - x)) best = &p;
  return best;
}

double max_component_rel(const std::vector<double>& a, const std::vector<double>& b) {
  double worst = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    worst = std::max(worst, std::abs(a[i] - b[i]));
    scale = std::max(scale, std::max(std::abs(a[i]), std::abs(b[i])));
  }
  return scale > 0.0 ? worst / scale : 0.0;
}

double mirror_rel(const std::vector<double>& a, const std::vector<double>& b) {
  double worst = 0.0, scale = 0.0;
  const std::size_t n = a.size();
  for (std::size_t i = 0; i < n; ++i) {
    worst = std::max(worst, std::abs(a[i] - b[n - 1 - i]));
    scale = std::max(scale, std::abs(a[i]));
  }
  return scale > 0.0 ? worst / scale : 0.0;
}

// ---------------------------------------------------------------- criteria

void criterion_1(const std::vector<double>& ax) {
  const auto t0 = std::chrono::steady_clock::now();
  const SpectrumResult s = run_cw(0.0, 0.0, ax);
  const PeakSet peaks = find_peaks(s.s_inc, ax, 0.02, 0.2);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const double bin = ax[1] - ax[0];
  const double postol = 2.0 * bin;
  const Peak* lo = nearest_peak(peaks, -1.0);
  const Peak* mid = nearest_peak(peaks, 0.0);
  const Peak* hi = nearest_peak(peaks, 1.0);
  bool pass = peaks.size() == 3 && lo && mid && hi;
  double wr = 0.0, hr = 0.0;
  if (pass) {
    pass = std::abs(lo->position + 1.0) <= postol && std::abs(mid->position) <= postol &&
           std::abs(hi->position - 1.0) <= postol;
    wr = sideband_weight_ratio(s, 1.0);
    hr = mid->height / (0.5 * (lo->height + hi->height));
    pass = pass && std::abs(wr - 1.0) <= 0.02 && std::abs(hr - 3.0) <= 0.45 && secs < 60.0;
  }
  report(1, pass,
         sfmt("triplet peaks %.4f / %.4f / %.4f (want 0, +-1 within %.4g); weight ratio "
              "%.5f (1 +- 0.02); height ratio %.3f (3 +- 0.45); %.1f s (< 60)",
              lo ? lo->position : NAN, mid ? mid->position : NAN, hi ? hi->position : NAN,
              postol, wr, hr, secs));
}

void criterion_2() {
  PulseSpec p;
  p.shape = PulseShape::gaussian;
  p.omega0 = 1.0;  // 1 meV peak Rabi energy
  p.area = 5.0 * kPi;
  const double tg = gaussian_tau_g(p);
  auto half_crossing = [&](double sign) {
    double a = p.t_center, b = p.t_center + sign * 5.0 * tg;
    for (int i = 0; i < 200; ++i) {
      const double m = 0.5 * (a + b);
      (rabi_envelope(p, m) > 0.5 * p.omega0 ? a : b) = m;
    }
    return 0.5 * (a + b);
  };
  const double fwhm_ps = time_to_ps(half_crossing(+1.0) - half_crossing(-1.0));
  const double analytic_ps = time_to_ps(2.0 * tg * std::sqrt(std::log(2.0)));
  const bool pass = std::abs(fwhm_ps - 9.7) <= 0.05;
  report(2, pass,
         sfmt("envelope FWHM %.4f ps numerically, %.4f ps closed form (want 9.7 +- 0.05)",
              fwhm_ps, analytic_ps));
}

void criterion_3() {
  const double gamma = 0.1;
  double worst_s = 0.0, worst_n = 0.0;
  for (double om : {0.2, 0.5, 1.0, 1.6, 2.5})
    for (double delta : {-2.0, -0.5, 0.0, 0.7, 2.0})
      for (double gp : {0.0, 0.1, 0.3}) {
        SimConfig c;
        c.pulse.shape = PulseShape::cw;
        c.pulse.omega0 = om;
        c.delta = delta;
        c.gamma = gamma;
        c.gamma_prime = gp;
        c.grid = {0.0, 400.0, 1001, 0.1, 2};  // dt = 0.4, relaxed to ~e^-20
        const Trajectory t = evolve(c);
        const CwSteadyState ss = cw_steady_state(om, delta, gamma, gp);
        worst_s = std::max(worst_s, std::abs(t.sigma_minus_exp.back() - ss.sigma_minus));
        worst_n = std::max(worst_n, std::abs(t.population.back() - ss.population));
      }
  const bool pass = worst_s <= 1e-6 && worst_n <= 1e-6;
  report(3, pass,
         sfmt("5x5x3 drive/detuning/dephasing grid: max |d<s->| %.2e, max |d<s+s->| %.2e "
              "(want <= 1e-6)",
              worst_s, worst_n));
}

void criterion_4(const std::vector<double>& ax) {
  // dressed-state emission weights, drive = detuning, no pure dephasing
  const double gamma = 1.0 / 40;
  const CwSteadyState ss = cw_steady_state(1.0, 1.0, gamma, 0.0);
  const TransitionWeights tw = transition_weights(1.0, 1.0, ss);
  const bool analytic_ok = std::abs(tw.ratio - 1.0) <= 1e-8;

  const SpectrumResult s = run_cw(1.0, 0.0, ax);
  const double rnum = sideband_weight_ratio(s, std::sqrt(2.0));
  const bool numeric_ok = std::abs(rnum - 1.0) <= 0.05;

  report(4, analytic_ok && numeric_ok,
         sfmt("weight ratio %.16f analytically (want 1 +- 1e-8: open, finite-damping "
              "offset ~4.4e-4); %.5f numerically (want 1 +- 0.05)",
              tw.ratio, rnum));
}

void criterion_5(const std::vector<double>& ax) {
  const double gamma = 1.0 / 40;
  const CwSteadyState ss = cw_steady_state(1.0, 1.0, gamma, 0.1);
  const TransitionWeights tw = transition_weights(1.0, 1.0, ss);

  const SpectrumResult s = run_cw(1.0, 0.1, ax);
  const double rnum = sideband_weight_ratio(s, std::sqrt(2.0));
  const double rel = std::abs(rnum - tw.ratio) / tw.ratio;
  const bool pass = rel <= 0.10 && rnum > 1.0;
  report(5, pass,
         sfmt("dephased weight ratio %.7f numerically vs %.7f closed form: %.1f%% apart "
              "(want <= 10%%: open, finite sideband windows); direction > 1 holds",
              rnum, tw.ratio, 100.0 * rel));
}

void criterion_6(const std::vector<double>& ax) {
  const SpectrumResult s0 = run_sim(pulsed_cfg(5.0 * kPi, 0.0, 1.0 / 40), ax);
  double sym = 0.0;
  sym = std::max(sym, mirror_rel(s0.s_total, s0.s_total));
  sym = std::max(sym, mirror_rel(s0.s_coh, s0.s_coh));
  sym = std::max(sym, mirror_rel(s0.s_inc, s0.s_inc));

  const SpectrumResult sp = run_sim(pulsed_cfg(5.0 * kPi, 0.5, 1.0 / 40), ax);
  const SpectrumResult sm = run_sim(pulsed_cfg(5.0 * kPi, -0.5, 1.0 / 40), ax);
  double mir = 0.0;
  mir = std::max(mir, mirror_rel(sp.s_total, sm.s_total));
  mir = std::max(mir, mirror_rel(sp.s_coh, sm.s_coh));
  mir = std::max(mir, mirror_rel(sp.s_inc, sm.s_inc));

  const bool pass = sym <= 1e-3 && mir <= 1e-6;
  report(6, pass,
         sfmt("resonant spectra symmetric to %.2e (want <= 1e-3); detuning sign flip "
              "mirrors to %.2e (want <= 1e-6)",
              sym, mir));
}

void criterion_7(const std::vector<double>& ax) {
  const SimConfig c = pulsed_cfg(2.0 * kPi, 0.0, 1.0 / 40);
  const std::vector<SidepeakRoot> roots = sidepeak_times(c.pulse);
  const SpectrumResult s = run_sim(c, ax);
  const PeakSet inc = find_peaks(s.s_inc, ax, 0.001, 0.2);
  const PeakSet coh = find_peaks(s.s_coh, ax, 0.001, 0.2);

  const double bin = ax[1] - ax[0];
  const double postol = 2.0 * bin;
  bool pass = !roots.empty();
  std::string where;
  for (const SidepeakRoot& r : roots) {
    for (double sign : {1.0, -1.0}) {
      const double target = sign * r.omega;
      const Peak* pi = nearest_peak(inc, target);
      const Peak* pc = nearest_peak(coh, target);
      const double di = pi ? std::abs(pi->position - target) : HUGE_VAL;
      pass = pass && di <= postol;
      if (sign > 0)
        where = sfmt("target +-%.4f; nearest incoherent max %.4f (off %.4f, tol %.4g), "
                     "nearest coherent max %.4f",
                     target, pi ? pi->position : NAN, di, postol, pc ? pc->position : NAN);
    }
  }
  report(7, pass,
         sfmt("area 2pi transient sidepeak: %s (open: the feature sits in the coherent "
              "part on this grid)",
              where.c_str()));
}

void criterion_8(const std::vector<double>& ax) {
  const double areas[3] = {8.0 * kPi, 16.0 * kPi, 32.0 * kPi};
  const double pins[3] = {0.1812, 0.1114, 0.0691};
  double err[3] = {0, 0, 0};
  double ratio[3] = {0, 0, 0};
  bool pass = true;
  for (int k = 0; k < 3; ++k) {
    const SimConfig c = pulsed_cfg(areas[k], 0.0, 1.0 / 40);
    const SpectrumResult s = run_sim(c, ax);
    // outer multiplet members reach ~1% of the center line, so the peak
    // threshold sits below that
    const PeakSet inc = find_peaks(s.s_inc, ax, 0.005, 0.2);
    double outer = 0.0;
    for (const Peak& p : inc)
      if (std::abs(p.position) > std::abs(outer)) outer = p.position;
    err[k] = std::abs(std::abs(outer) - 1.0);
    ratio[k] = areas[k] * c.gamma / c.pulse.omega0;
    pass = pass && std::abs(err[k] - pins[k]) <= 1e-3;
  }
  pass = pass && err[0] > err[1] && err[1] > err[2];
  report(8, pass,
         sfmt("outermost incoherent peak error vs the cw sidepeak: %.4f -> %.4f -> %.4f "
              "(monotone, pinned %.4f/%.4f/%.4f); lifetime ratio theta gamma / omega0 = "
              "%.2f/%.2f/%.2f (flagged at >= 0.5)",
              err[0], err[1], err[2], pins[0], pins[1], pins[2], ratio[0], ratio[1], ratio[2]));
}

void criterion_9(const std::vector<double>& ax) {
  const SpectrumResult off = run_sim(pulsed_cfg(5.0 * kPi, 0.0, 0.01), ax);
  const SpectrumResult on = run_sim(pulsed_cfg(5.0 * kPi, 0.0, 0.01, qd_bath()), ax);
  const double r_off = sideband_weight_ratio(off, 1.0);
  const double r_on = sideband_weight_ratio(on, 1.0);
  const double pin_on = 0.43018396;  // frozen after the first verified run
  const bool pass = std::abs(r_on - 1.0) > 0.05 && r_on < 1.0 &&
                    std::abs(r_off - 1.0) <= 1e-3 &&
                    std::abs(r_on - pin_on) <= 1e-3 * pin_on;
  report(9, pass,
         sfmt("resonant sideband weight ratio %.8f with phonons (|R-1| = %.1f%% > 5%%, "
              "direction < 1, pinned %.8f), %.8f without (within 0.1%% of 1)",
              r_on, 100.0 * std::abs(r_on - 1.0), pin_on, r_off));
}

void criterion_10(const std::vector<double>& ax) {
  auto exciton_amp = [&](const SpectrumResult& s, double delta) {
    double best = 0.0;
    for (std::size_t i = 0; i < ax.size(); ++i)
      if (std::abs(ax[i] - delta) < 0.1) best = std::max(best, s.s_inc[i]);
    return best;
  };
  double amp[2][2];  // [delta sign][bath]
  const double deltas[2] = {-0.33, 0.33};
  for (int d = 0; d < 2; ++d) {
    amp[d][0] = exciton_amp(run_sim(pulsed_cfg(5.0 * kPi, deltas[d], 0.01), ax), deltas[d]);
    amp[d][1] =
        exciton_amp(run_sim(pulsed_cfg(5.0 * kPi, deltas[d], 0.01, qd_bath()), ax), deltas[d]);
  }
  const double r_minus = amp[0][1] / amp[0][0];
  const double r_plus = amp[1][1] / amp[1][0];
  const double pin_minus = 20.7794, pin_plus = 2.4405;  // frozen regression values
  const bool pass = amp[0][1] > amp[0][0] &&
                    std::abs(r_minus - pin_minus) <= 0.02 * pin_minus &&
                    std::abs(r_plus - pin_plus) <= 0.02 * pin_plus;
  report(10, pass,
         sfmt("exciton-peak amplitude with/without phonons: %.4f at detuning -0.33 "
              "(phonons larger, pinned %.4f +- 2%%); %.4f recorded at +0.33 (pinned %.4f)",
              r_minus, pin_minus, r_plus, pin_plus));
}

void criterion_11(const std::vector<double>& ax) {
  SimConfig plain = pulsed_cfg(2.0 * kPi, 0.2, 0.1);
  SimConfig zero = plain;
  zero.phonon = PhononParams{0.0, 1.0, 0.3};
  const SpectrumResult a = run_sim(plain, ax);
  const SpectrumResult b = run_sim(zero, ax);
  double worst = 0.0;
  worst = std::max(worst, max_component_rel(a.s_total, b.s_total));
  worst = std::max(worst, max_component_rel(a.s_coh, b.s_coh));
  worst = std::max(worst, max_component_rel(a.s_inc, b.s_inc));
  report(11, worst <= 1e-10,
         sfmt("zero-coupling bath path vs bare path: max relative difference %.2e "
              "(want <= 1e-10)",
              worst));
}

void criterion_12(const std::vector<double>& ax) {
  // state validity along a hard pulsed trajectory
  SimConfig c = pulsed_cfg(5.0 * kPi, 0.33, 1.0 / 40);
  c.grid.tau_max = 0.1;
  c.grid.n_tau = 2;
  const Trajectory t = evolve(c);
  double tr = 0.0, herm = 0.0, neg = 0.0;
  for (const DensityMatrix& r : t.rho) {
    tr = std::max(tr, std::abs(trace(r).real() - 1.0) + std::abs(trace(r).imag()));
    herm = std::max(herm, fro_norm(r - adjoint(r)));
    const EigResult e = eig_hermitian_2x2(r);
    neg = std::max(neg, -std::min(0.0, e.values[0]));
  }
  const bool state_ok = tr <= 1e-8 && herm <= 1e-10 && neg <= 1e-8;

  // two-time rows must start from the one-time population
  SimConfig small = pulsed_cfg(2.0 * kPi, 0.2, 0.1);
  small.grid.tau_max = 5.0;
  small.grid.n_tau = 51;
  const Trajectory ts = evolve(small);
  const CorrelationGrid g = regression_grid(small, ts);
  double tau0 = 0.0;
  const int stride = static_cast<int>(std::llround(small.grid.dt() / small.grid.dtau()));
  for (std::size_t i = 0; i < g.t.size(); ++i)
    tau0 = std::max(tau0,
                    std::abs(g.g[i][0] - Complex(ts.population[i * stride], 0.0)));

  // transform cross-check and integration-step halving on the full pipeline
  const WeightedCorrelation w = accumulate_correlation(small, ts);
  const std::vector<double> fast = onesided_spectrum(w.a_total, small.grid.dtau(), ax, false);
  const std::vector<double> direct = onesided_spectrum_direct(w.a_total, small.grid.dtau(), ax);
  const double dual = max_component_rel(fast, direct);

  const SpectrumResult s1 = run_sim(small, ax);
  SimConfig halved = small;
  halved.substep_scale = 2.0;
  const SpectrumResult s2 = run_sim(halved, ax);
  double halving = 0.0;
  halving = std::max(halving, max_component_rel(s1.s_total, s2.s_total));
  halving = std::max(halving, max_component_rel(s1.s_coh, s2.s_coh));
  halving = std::max(halving, max_component_rel(s1.s_inc, s2.s_inc));

  const bool pass = state_ok && tau0 <= 1e-12 && dual <= 1e-9 && halving <= 1e-7;
  report(12, pass,
         sfmt("trace/hermiticity/positivity %.1e/%.1e/%.1e; tau = 0 regression identity "
              "%.1e (<= 1e-12); transform dual path %.1e (<= 1e-9); step halving %.1e "
              "(<= 1e-7)",
              tr, herm, neg, tau0, dual, halving));
}

}  // namespace

int main() {
  const std::vector<double> ax = default_detunings(1.0);  // 2001 points over +-2.5
  criterion_1(ax);
  criterion_2();
  criterion_3();
  criterion_4(ax);
  criterion_5(ax);
  criterion_6(ax);
  criterion_7(ax);
  criterion_8(ax);
  criterion_9(ax);
  criterion_10(ax);
  criterion_11(ax);
  criterion_12(ax);
  std::printf("%d of 12 criteria failed\n", g_failed);
  return g_failed;
}
