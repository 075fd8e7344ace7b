#include "pulsedrf/spectrum.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include "pulsedrf/errors.hpp"

namespace prf {
namespace {

constexpr double kDualPathTol = 1e-9;

// e^{ix} with the argument reduced in extended precision; the chirp phases
// j^2*theta/2 grow quadratically and would lose ~1e-9 of phase as plain doubles.
Complex unit_phase(long double x) {
  constexpr long double kTwoPi = 6.283185307179586476925286766559L;
  const long double r = std::fmod(x, kTwoPi);
  return {static_cast<double>(std::cos(r)), static_cast<double>(std::sin(r))};
}

bool uniform_spacing(const std::vector<double>& x, double& dx) {
  if (x.size() < 2) return false;
  dx = x[1] - x[0];
  if (dx == 0.0) return false;
  for (std::size_t k = 2; k < x.size(); ++k)
    if (std::abs((x[k] - x[k - 1]) - dx) > 1e-9 * std::abs(dx)) return false;
  return true;
}

// tau-weighted input: c_j = w_j * dtau * a_j with trapezoid end-weights.
std::vector<Complex> tau_weighted(const std::vector<Complex>& a, double dtau) {
  if (a.size() < 2) throw validation_error("spectrum needs at least two tau samples");
  if (!(dtau > 0.0)) throw validation_error("spectrum needs dtau > 0");
  std::vector<Complex> c(a);
  for (auto& x : c) x *= dtau;
  c.front() *= 0.5;
  c.back() *= 0.5;
  return c;
}

struct FftwBuffer {
  fftw_complex* p = nullptr;
  explicit FftwBuffer(std::size_t n) : p(fftw_alloc_complex(n)) {
    if (!p) throw std::bad_alloc();
  }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  ~FftwBuffer() { fftw_free(p); }
  Complex& operator[](std::size_t i) { return *reinterpret_cast<Complex*>(p + i); }
};

// X_k = sum_j y_j e^{i k j theta}, k = 0..n_out-1, via Bluestein's chirp-z:
// kj = (k^2 + j^2 - (k-j)^2)/2 turns the sum into a linear convolution with the
// chirp e^{-i n^2 theta / 2}, evaluated by power-of-two FFTs.
std::vector<Complex> chirp_eval(const std::vector<Complex>& y, long double theta, int n_out) {
  const int nj = static_cast<int>(y.size());
  std::size_t len = 1;
  while (len < static_cast<std::size_t>(nj + n_out - 1)) len <<= 1;

  FftwBuffer fa(len), fb(len);
  for (std::size_t i = 0; i < len; ++i) fa[i] = fb[i] = Complex(0.0);
  for (int j = 0; j < nj; ++j)
    fa[static_cast<std::size_t>(j)] =
        y[static_cast<std::size_t>(j)] *
        unit_phase(static_cast<long double>(j) * j * theta * 0.5L);
  for (int n = 0; n < std::max(nj, n_out); ++n) {
    const Complex chirp = unit_phase(-static_cast<long double>(n) * n * theta * 0.5L);
    if (n < n_out) fb[static_cast<std::size_t>(n)] = chirp;
    if (n > 0 && n < nj) fb[len - static_cast<std::size_t>(n)] = chirp;  // negative lags
  }

  fftw_plan pf_a = fftw_plan_dft_1d(static_cast<int>(len), fa.p, fa.p, FFTW_FORWARD, FFTW_ESTIMATE);
  fftw_plan pf_b = fftw_plan_dft_1d(static_cast<int>(len), fb.p, fb.p, FFTW_FORWARD, FFTW_ESTIMATE);
  fftw_execute(pf_a);
  fftw_execute(pf_b);
  for (std::size_t i = 0; i < len; ++i) fa[i] *= fb[i];
  fftw_plan pb = fftw_plan_dft_1d(static_cast<int>(len), fa.p, fa.p, FFTW_BACKWARD, FFTW_ESTIMATE);
  fftw_execute(pb);
  fftw_destroy_plan(pf_a);
  fftw_destroy_plan(pf_b);
  fftw_destroy_plan(pb);

  std::vector<Complex> out(static_cast<std::size_t>(n_out));
  const double scale = 1.0 / static_cast<double>(len);
  for (int k = 0; k < n_out; ++k)
    out[static_cast<std::size_t>(k)] =
        fa[static_cast<std::size_t>(k)] * scale *
        unit_phase(static_cast<long double>(k) * k * theta * 0.5L);
  return out;
}

std::vector<double> fast_path(const std::vector<Complex>& c, double dtau,
                              const std::vector<double>& detunings, double ddelta) {
  const long double theta = static_cast<long double>(ddelta) * dtau;
  std::vector<Complex> y(c.size());
  for (std::size_t j = 0; j < c.size(); ++j)
    y[j] = c[j] * unit_phase(static_cast<long double>(detunings[0]) * dtau * j);
  const std::vector<Complex> x = chirp_eval(y, theta, static_cast<int>(detunings.size()));
  std::vector<double> s(detunings.size());
  for (std::size_t k = 0; k < s.size(); ++k) s[k] = x[k].real();
  return s;
}

double interp_at(const std::vector<double>& x, const std::vector<double>& f, double xq) {
  const auto it = std::upper_bound(x.begin(), x.end(), xq);
  if (it == x.begin()) return f.front();
  if (it == x.end()) return f.back();
  const std::size_t hi = static_cast<std::size_t>(it - x.begin());
  const std::size_t lo = hi - 1;
  const double t = (xq - x[lo]) / (x[hi] - x[lo]);
  return f[lo] + t * (f[hi] - f[lo]);
}

// Exact integral of the piecewise-linear interpolant of f over [lo, hi] clipped
// to the axis.
double integrate_window(const std::vector<double>& x, const std::vector<double>& f,
                        double lo, double hi) {
  lo = std::max(lo, x.front());
  hi = std::min(hi, x.back());
  if (!(hi > lo)) return 0.0;
  double acc = 0.0;
  double xa = lo, fa = interp_at(x, f, lo);
  const auto first = std::upper_bound(x.begin(), x.end(), lo);
  for (auto it = first; it != x.end() && *it < hi; ++it) {
    const std::size_t i = static_cast<std::size_t>(it - x.begin());
    acc += 0.5 * (fa + f[i]) * (x[i] - xa);
    xa = x[i];
    fa = f[i];
  }
  acc += 0.5 * (fa + interp_at(x, f, hi)) * (hi - xa);
  return acc;
}

double trapz(const std::vector<double>& x, const std::vector<double>& f) {
  double acc = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) acc += 0.5 * (f[i - 1] + f[i]) * (x[i] - x[i - 1]);
  return acc;
}

int lattice_stride(const TimeGrid& g) {
  const double m = g.dt() / g.dtau();
  const long long mi = std::llround(m);
  if (mi < 1 || std::abs(m - static_cast<double>(mi)) > 1e-9)
    throw validation_error("dt must be a positive integer multiple of dtau");
  return static_cast<int>(mi);
}

}  // namespace

std::vector<double> default_detunings(double omega0, int n, double span) {
  if (!(omega0 > 0.0)) throw validation_error("default_detunings needs omega0 > 0");
  if (n < 2) throw validation_error("default_detunings needs at least two points");
  std::vector<double> d(static_cast<std::size_t>(n));
  const double lo = -span * omega0, step = 2.0 * span * omega0 / (n - 1);
  for (int k = 0; k < n; ++k) d[static_cast<std::size_t>(k)] = lo + step * k;
  return d;
}

std::vector<double> onesided_spectrum_direct(const std::vector<Complex>& a, double dtau,
                                             const std::vector<double>& detunings) {
  const std::vector<Complex> c = tau_weighted(a, dtau);
  std::vector<double> s(detunings.size());
  for (std::size_t k = 0; k < detunings.size(); ++k) {
    Complex acc = 0.0;
    for (std::size_t j = 0; j < c.size(); ++j)
      acc += c[j] * std::polar(1.0, detunings[k] * dtau * static_cast<double>(j));
    s[k] = acc.real();
  }
  return s;
}

std::vector<double> onesided_spectrum(const std::vector<Complex>& a, double dtau,
                                      const std::vector<double>& detunings, bool dual_check) {
  const std::vector<Complex> c = tau_weighted(a, dtau);
  double ddelta = 0.0;
  if (!uniform_spacing(detunings, ddelta)) return onesided_spectrum_direct(a, dtau, detunings);
  std::vector<double> fast = fast_path(c, dtau, detunings, ddelta);
  if (dual_check) {
    const std::vector<double> direct = onesided_spectrum_direct(a, dtau, detunings);
    double scale = 0.0, worst = 0.0;
    for (std::size_t k = 0; k < fast.size(); ++k) {
      scale = std::max(scale, std::abs(direct[k]));
      worst = std::max(worst, std::abs(fast[k] - direct[k]));
    }
    if (worst > kDualPathTol * std::max(scale, 1e-300)) {
      std::ostringstream os;
      os << "spectrum transform paths disagree: |fast - direct| = " << worst
         << " exceeds " << kDualPathTol << " * " << scale;
      throw numerical_error(os.str());
    }
  }
  return fast;
}

std::vector<double> total_spectrum(const CorrelationGrid& grid, const TimeGrid& tg,
                                   const std::vector<double>& detunings, bool dual_check) {
  const std::size_t nt = grid.t.size(), ntau = grid.tau.size();
  if (nt != static_cast<std::size_t>(tg.n_t) || ntau != static_cast<std::size_t>(tg.n_tau))
    throw validation_error("correlation grid does not match the time grid");
  const double dt = tg.dt();
  std::vector<Complex> a(ntau, Complex(0.0));
  for (std::size_t i = 0; i < nt; ++i) {
    const double w = ((i == 0 || i + 1 == nt) ? 0.5 : 1.0) * dt;
    for (std::size_t j = 0; j < ntau; ++j) a[j] += w * grid.g[i][j];
  }
  return onesided_spectrum(a, tg.dtau(), detunings, dual_check);
}

std::vector<double> coherent_spectrum(const Trajectory& traj, const TimeGrid& tg,
                                      const std::vector<double>& detunings, bool dual_check) {
  const int m = lattice_stride(tg);
  const std::size_t need =
      static_cast<std::size_t>(tg.n_t - 1) * static_cast<std::size_t>(m) +
      static_cast<std::size_t>(tg.n_tau - 1) + 1;
  if (traj.sigma_minus_exp.size() < need)
    throw validation_error("trajectory does not span t_end + tau_max; extend the evolve window");
  if (std::abs(traj.times.front() - tg.t_start) > 1e-9)
    throw validation_error("trajectory start does not match the time grid");
  const double dt = tg.dt();
  std::vector<Complex> a(static_cast<std::size_t>(tg.n_tau), Complex(0.0));
  for (int i = 0; i < tg.n_t; ++i) {
    const double w = ((i == 0 || i == tg.n_t - 1) ? 0.5 : 1.0) * dt;
    const Complex sp = std::conj(traj.sigma_minus_exp[static_cast<std::size_t>(i) * m]);
    const Complex* sm = traj.sigma_minus_exp.data() + static_cast<std::size_t>(i) * m;
    for (int j = 0; j < tg.n_tau; ++j)
      a[static_cast<std::size_t>(j)] += w * sp * sm[j];
  }
  return onesided_spectrum(a, tg.dtau(), detunings, dual_check);
}

SpectrumResult assemble_spectra(const WeightedCorrelation& w, double dtau,
                                const std::vector<double>& detunings, bool dual_check) {
  SpectrumResult r;
  r.detunings = detunings;
  r.s_total = onesided_spectrum(w.a_total, dtau, detunings, dual_check);
  r.s_coh = onesided_spectrum(w.a_coh, dtau, detunings, dual_check);
  r.s_inc.resize(r.s_total.size());
  for (std::size_t k = 0; k < r.s_total.size(); ++k) r.s_inc[k] = r.s_total[k] - r.s_coh[k];
  const double den = trapz(detunings, r.s_total);
  r.coh_fraction = den > 0.0 ? trapz(detunings, r.s_coh) / den : 0.0;
  return r;
}

namespace {

// Topographic prominence: drop to the lowest point on the way to the nearest
// higher terrain on each side; the larger of the two saddle floors bounds it.
double prominence(const std::vector<double>& s, std::size_t i) {
  double left = s[i];
  for (std::size_t k = i; k-- > 0;) {
    left = std::min(left, s[k]);
    if (s[k] > s[i]) break;
  }
  double right = s[i];
  for (std::size_t k = i + 1; k < s.size(); ++k) {
    right = std::min(right, s[k]);
    if (s[k] > s[i]) break;
  }
  return s[i] - std::max(left, right);
}

}  // namespace

PeakSet find_peaks(const std::vector<double>& spec, const std::vector<double>& detunings,
                   double min_height_frac, double window_half_width,
                   double min_prominence_frac) {
  if (spec.size() != detunings.size())
    throw validation_error("spectrum and detuning axis differ in length");
  if (!(min_height_frac > 0.0 && min_height_frac < 1.0))
    throw validation_error("min_height_frac must lie in (0, 1)");
  if (spec.size() < 3) return {};
  const double top = *std::max_element(spec.begin(), spec.end());
  const double floor_h = min_height_frac * top;
  PeakSet peaks;
  for (std::size_t i = 1; i + 1 < spec.size(); ++i) {
    if (!(spec[i] > spec[i - 1] && spec[i] > spec[i + 1] && spec[i] >= floor_h)) continue;
    if (prominence(spec, i) < min_prominence_frac * top) continue;
    Peak p;
    const double denom = spec[i - 1] - 2.0 * spec[i] + spec[i + 1];
    double shift = 0.0;
    if (denom < 0.0) shift = 0.5 * (spec[i - 1] - spec[i + 1]) / denom;
    const double dleft = detunings[i] - detunings[i - 1];
    const double dright = detunings[i + 1] - detunings[i];
    p.position = detunings[i] + shift * (shift < 0.0 ? dleft : dright);
    p.height = spec[i] - 0.25 * (spec[i - 1] - spec[i + 1]) * shift;
    p.window_half_width = window_half_width;
    if (window_half_width > 0.0)
      p.weight = integrate_window(detunings, spec, p.position - window_half_width,
                                  p.position + window_half_width);
    peaks.push_back(p);
  }
  return peaks;
}

double sideband_weight_ratio(const SpectrumResult& spec, double omega_r,
                             double window_half_width) {
  if (!(omega_r > 0.0)) throw validation_error("sideband ratio needs omega_r > 0");
  const double hw = window_half_width > 0.0 ? window_half_width : 0.5 * omega_r;
  if (!(omega_r - hw > 0.0))
    throw validation_error("sideband window overlaps zero detuning; shrink the half-width");
  if (spec.detunings.empty() || -omega_r - hw < spec.detunings.front() - 1e-12 ||
      omega_r + hw > spec.detunings.back() + 1e-12)
    throw validation_error("sideband window exceeds the detuning axis");
  const double w_plus = integrate_window(spec.detunings, spec.s_inc, omega_r - hw, omega_r + hw);
  const double w_minus =
      integrate_window(spec.detunings, spec.s_inc, -omega_r - hw, -omega_r + hw);
  if (!(w_minus > 0.0)) throw numerical_error("lower sideband weight is not positive");
  return w_plus / w_minus;
}

}  // namespace prf
