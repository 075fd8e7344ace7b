#pragma once
#include <utility>
#include <vector>

#include "pulsedrf/algebra.hpp"

namespace prf {

enum class PulseShape { gaussian, square, cw };

// Drive envelope description. omega0 is the peak Rabi energy; area is the
// on-resonance pulse area (ignored for cw); t_center locates the envelope
// maximum; rise is the square-edge time constant (square only; <= 0 picks
// 1% of the flat-top duration).
struct PulseSpec {
  PulseShape shape = PulseShape::gaussian;
  double omega0 = 1.0;
  double area = 0.0;
  double t_center = 0.0;
  double rise = 0.0;
};

void validate(const PulseSpec& spec);

// Gaussian 1/e half-width: area = integral of omega0 exp(-((t-tc)/tau_g)^2).
double gaussian_tau_g(const PulseSpec& spec);

// Square-edge rise constant actually used (explicit value or the 1% default).
double square_rise(const PulseSpec& spec);

// Envelope value; exactly 0.0 outside the support returned by pulse_support
// (truncation error below 3e-16 relative so the generator is exactly
// time-independent in the tails).
double rabi_envelope(const PulseSpec& spec, double t);

// [t_lo, t_hi] outside which rabi_envelope is exactly zero; cw returns
// (-inf, +inf).
std::pair<double, double> pulse_support(const PulseSpec& spec);

// H(t) = [[0, Omega(t)/2], [Omega(t)/2, delta]] in the (g, e) basis.
Operator2 hamiltonian(const PulseSpec& spec, double delta, double t);

struct DressedStates {
  double eps_minus;    // delta/2 - omega_r/2
  double eps_plus;     // delta/2 + omega_r/2
  double omega_r;      // sqrt(omega^2 + delta^2)
  double kappa_minus;  // |-> = (|g> + k-|e>)/sqrt(1+k-^2); +-inf when omega = 0
  double kappa_plus;
  std::array<Complex, 4> vectors;  // columns: |->, |+>, via the stable eigensolver
};

// Instantaneous dressed states of H(omega, delta); (0, 0) input is degenerate
// and rejected.
DressedStates dressed_states(double omega, double delta);

// |d theta/dt| / omega_r for the Gaussian envelope:
// |2 delta omega(t) (t - tc) / tau_g^2| / (omega(t)^2 + delta^2)^(3/2).
// Other shapes are rejected as unsupported.
double adiabaticity_lhs(const PulseSpec& spec, double delta, double t);

struct SidepeakRoot {
  double t;      // time after pulse center
  double omega;  // envelope value at the root
};

// Roots t_n > 0 of  integral_{-t}^{t} Omega dt' - 2 Omega(t) t = (2n + 1/2) pi,
// n = 0, 1, ...; the left side grows monotonically from 0 to the pulse area, so
// exactly floor((area/pi - 1/2)/2) + 1 roots exist (Gaussian only). Bracketing
// scan at tau_g/1000 plus bisection to 1e-12; residual <= 1e-10.
std::vector<SidepeakRoot> sidepeak_times(const PulseSpec& spec);

// Default simulation window [tc - 5 tau_g, tc + 5 tau_g + 10/gamma] for pulsed
// shapes; cw picks [0, 20/gamma].
std::pair<double, double> default_window(const PulseSpec& spec, double gamma);

}  // namespace prf
