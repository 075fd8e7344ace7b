#pragma once
#include <string>

namespace prf {

// Internal unit system: hbar = 1 and the energy unit is the meV (qd mode) or
// the peak Rabi energy Omega0 (dimensionless mode). Times are inverse
// energies, temperatures are energies (k_B T).
inline constexpr double kHbarMeVPs = 0.6582119569;         // meV ps
inline constexpr double kBoltzmannMeVPerK = 0.08617333262;  // meV / K

double time_from_ps(double ps);           // ps -> 1/meV
double time_to_ps(double internal);       // 1/meV -> ps
double temperature_from_kelvin(double k);  // K -> meV
double temperature_to_kelvin(double mev);  // meV -> K
double coupling_from_ps2(double ps2);      // ps^2 -> 1/meV^2 (spectral density prefactor)
double coupling_to_ps2(double internal);

enum class UnitMode { dimensionless, qd_units };

// Physical dimension of a config value; drives which suffixes are accepted.
enum class Dim {
  bare,         // no suffix ever
  energy,       // qd: meV | ueV;           dimensionless: bare (units of Omega0)
  area,         // pi | bare radians        (both modes)
  temperature,  // qd: K | meV;             dimensionless: bare (k_B T / Omega0)
  coupling,     // qd: ps2;                 dimensionless: bare (1/Omega0^2)
  time,         // qd: ps;                  dimensionless: bare (1/Omega0)
};

// Numeric literal with an optional unit suffix glued on ("0.33meV", "10ueV",
// "5pi", "4K", "0.06ps2", "-3.5"). Suffix is returned lowercase.
struct Quantity {
  double value = 0.0;
  std::string unit;
};

// Throws validation_error on anything but <number><known-suffix>.
Quantity parse_quantity(const std::string& text);

// Quantity -> internal units under the dimension/mode rules above; rejects
// mismatched suffixes with a message listing the accepted ones.
double to_internal(const Quantity& q, Dim dim, UnitMode mode);

// Shortest decimal form that parses back to the same double ('.' decimal,
// locale-free); the one number formatter used by every emitted file.
std::string format_double(double value);

// Inverse of to_internal: formats an internal value with the canonical suffix
// for the dimension/mode, so configs round-trip exactly.
std::string format_internal(double value, Dim dim, UnitMode mode);

}  // namespace prf
