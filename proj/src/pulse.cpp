#include "pulsedrf/pulse.hpp"

#include <cmath>
#include <limits>

#include "pulsedrf/errors.hpp"

namespace prf {

namespace {
constexpr double kPi = 3.14159265358979323846;
// exp(-36) ~ 2.3e-16 and 1 - tanh(19) ~ 1.1e-17: beyond these the envelope is
// below double rounding of omega0, so it is clamped to exactly zero and the
// generator becomes time-independent there.
constexpr double kGaussSupportSigmas = 6.0;
constexpr double kSquareSupportRises = 19.0;
}  // namespace

void validate(const PulseSpec& spec) {
  if (!(spec.omega0 > 0.0)) throw validation_error("pulse: omega0 must be > 0");
  if (spec.shape != PulseShape::cw && !(spec.area > 0.0))
    throw validation_error("pulse: area must be > 0 for pulsed shapes");
  if (spec.shape == PulseShape::square) {
    const double duration = spec.area / spec.omega0;
    const double r = square_rise(spec);
    if (!(r > 0.0) || r > 0.25 * duration)
      throw validation_error("pulse: square rise must lie in (0, duration/4]");
  }
}

double gaussian_tau_g(const PulseSpec& spec) {
  if (spec.shape != PulseShape::gaussian)
    throw validation_error("pulse: tau_g is defined for the gaussian shape only");
  return spec.area / (std::sqrt(kPi) * spec.omega0);
}

double square_rise(const PulseSpec& spec) {
  if (spec.rise > 0.0) return spec.rise;
  return 0.01 * spec.area / spec.omega0;
}

double rabi_envelope(const PulseSpec& spec, double t) {
  switch (spec.shape) {
    case PulseShape::cw:
      return spec.omega0;
    case PulseShape::gaussian: {
      const double tau_g = gaussian_tau_g(spec);
      const double x = (t - spec.t_center) / tau_g;
      if (std::abs(x) > kGaussSupportSigmas) return 0.0;
      return spec.omega0 * std::exp(-x * x);
    }
    case PulseShape::square: {
      const double duration = spec.area / spec.omega0;
      const double r = square_rise(spec);
      const double t0 = spec.t_center - 0.5 * duration;
      const double t1 = spec.t_center + 0.5 * duration;
      if (t < t0 - kSquareSupportRises * r || t > t1 + kSquareSupportRises * r) return 0.0;
      return 0.5 * spec.omega0 * (std::tanh((t - t0) / r) + std::tanh((t1 - t) / r));
    }
  }
  return 0.0;
}

std::pair<double, double> pulse_support(const PulseSpec& spec) {
  switch (spec.shape) {
    case PulseShape::cw:
      return {-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    case PulseShape::gaussian: {
      const double tau_g = gaussian_tau_g(spec);
      return {spec.t_center - kGaussSupportSigmas * tau_g, spec.t_center + kGaussSupportSigmas * tau_g};
    }
    case PulseShape::square: {
      const double duration = spec.area / spec.omega0;
      const double r = square_rise(spec);
      return {spec.t_center - 0.5 * duration - kSquareSupportRises * r,
              spec.t_center + 0.5 * duration + kSquareSupportRises * r};
    }
  }
  return {0.0, 0.0};
}

Operator2 hamiltonian(const PulseSpec& spec, double delta, double t) {
  const double half = 0.5 * rabi_envelope(spec, t);
  Operator2 h;
  h(0, 1) = half;
  h(1, 0) = half;
  h(1, 1) = delta;
  return h;
}

DressedStates dressed_states(double omega, double delta) {
  if (omega < 0.0) throw validation_error("dressed_states: omega must be >= 0");
  if (omega == 0.0 && delta == 0.0)
    throw validation_error("dressed_states: (omega, delta) = (0, 0) is degenerate");
  const double wr = std::hypot(omega, delta);

  DressedStates d;
  d.omega_r = wr;
  d.eps_minus = 0.5 * (delta - wr);
  d.eps_plus = 0.5 * (delta + wr);
  // kappa+- = omega / (+-omega_r - delta); each is rewritten against the
  // non-cancelling denominator, so kappa+ kappa- = -1 holds exactly.
  if (delta >= 0.0) {
    d.kappa_plus = (delta + wr) / omega;  // +inf at omega = 0
    d.kappa_minus = -omega / (delta + wr);
  } else {
    d.kappa_plus = omega / (wr - delta);
    d.kappa_minus = -(wr - delta) / omega;  // -inf at omega = 0
  }

  Operator2 h;
  h(0, 1) = 0.5 * omega;
  h(1, 0) = 0.5 * omega;
  h(1, 1) = delta;
  d.vectors = eig_hermitian_2x2(h).vectors;
  return d;
}

double adiabaticity_lhs(const PulseSpec& spec, double delta, double t) {
  if (spec.shape != PulseShape::gaussian)
    throw validation_error("adiabaticity_lhs: unsupported shape (gaussian only)");
  const double omega = rabi_envelope(spec, t);
  if (omega == 0.0) return 0.0;
  const double tau_g = gaussian_tau_g(spec);
  const double wr2 = omega * omega + delta * delta;
  const double dot_omega = -2.0 * (t - spec.t_center) / (tau_g * tau_g) * omega;
  return std::abs(dot_omega * delta) / (wr2 * std::sqrt(wr2));
}

std::vector<SidepeakRoot> sidepeak_times(const PulseSpec& spec) {
  if (spec.shape != PulseShape::gaussian)
    throw validation_error("sidepeak_times: unsupported shape (gaussian only)");
  validate(spec);
  const double tau_g = gaussian_tau_g(spec);
  const double area = spec.area;

  // F(t) = area erf(t/tau_g) - 2 t Omega(t), measured from the pulse center;
  // F' = 4 Omega(t) t^2 / tau_g^2 >= 0, F(0) = 0, F(inf) = area.
  const auto F = [&](double t) {
    const double x = t / tau_g;
    return area * std::erf(x) - 2.0 * t * spec.omega0 * std::exp(-x * x);
  };

  std::vector<SidepeakRoot> roots;
  const double scan_step = tau_g / 1000.0;
  const double t_max = (kGaussSupportSigmas + 1.0) * tau_g;
  int n = 0;
  double t_lo = 0.0;
  while (true) {
    const double target = (2.0 * n + 0.5) * kPi;
    if (target >= area) break;
    // bracket by forward scan, then bisect to 1e-12 absolute in t
    double a = t_lo, b = a;
    bool bracketed = false;
    while (b < t_max) {
      b = std::min(b + scan_step, t_max);
      if (F(b) >= target) {
        bracketed = true;
        break;
      }
      a = b;
    }
    if (!bracketed) break;  // target inside the truncation plateau; no further roots
    while (b - a > 1e-12) {
      const double mid = 0.5 * (a + b);
      (F(mid) < target ? a : b) = mid;
    }
    const double t_root = 0.5 * (a + b);
    roots.push_back({t_root, rabi_envelope(spec, spec.t_center + t_root)});
    t_lo = t_root;
    ++n;
  }
  return roots;
}

std::pair<double, double> default_window(const PulseSpec& spec, double gamma) {
  if (!(gamma > 0.0))
    throw validation_error("default_window: gamma must be > 0 (set the grid explicitly otherwise)");
  if (spec.shape == PulseShape::cw) return {0.0, 20.0 / gamma};
  const double half = (spec.shape == PulseShape::gaussian)
                          ? 5.0 * gaussian_tau_g(spec)
                          : 0.5 * spec.area / spec.omega0 + 5.0 * square_rise(spec);
  return {spec.t_center - half, spec.t_center + half + 10.0 / gamma};
}

}  // namespace prf
