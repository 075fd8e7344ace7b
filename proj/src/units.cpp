#include "pulsedrf/units.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>

#include "pulsedrf/errors.hpp"

namespace prf {

double time_from_ps(double ps) { return ps / kHbarMeVPs; }
double time_to_ps(double internal) { return internal * kHbarMeVPs; }
double temperature_from_kelvin(double k) { return k * kBoltzmannMeVPerK; }
double temperature_to_kelvin(double mev) { return mev / kBoltzmannMeVPerK; }
double coupling_from_ps2(double ps2) { return ps2 / (kHbarMeVPs * kHbarMeVPs); }
double coupling_to_ps2(double internal) { return internal * kHbarMeVPs * kHbarMeVPs; }

Quantity parse_quantity(const std::string& text) {
  std::size_t lo = 0, hi = text.size();
  while (lo < hi && std::isspace(static_cast<unsigned char>(text[lo]))) ++lo;
  while (hi > lo && std::isspace(static_cast<unsigned char>(text[hi - 1]))) --hi;
  if (lo == hi) throw validation_error("empty value where a number was expected");

  const char* first = text.data() + lo;
  const char* last = text.data() + hi;
  Quantity q;
  auto [ptr, ec] = std::from_chars(first, last, q.value);
  if (ec != std::errc() || ptr == first)
    throw validation_error("malformed numeric value \"" + text.substr(lo, hi - lo) + "\"");
  q.unit.assign(ptr, last);
  std::transform(q.unit.begin(), q.unit.end(), q.unit.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  static const char* known[] = {"", "mev", "uev", "pi", "k", "ps", "ps2"};
  if (std::find(std::begin(known), std::end(known), q.unit) == std::end(known))
    throw validation_error("unknown unit suffix \"" + q.unit + "\" in \"" +
                           text.substr(lo, hi - lo) + "\"");
  return q;
}

namespace {

[[noreturn]] void mismatch(const Quantity& q, const char* accepted, UnitMode mode) {
  const char* m = mode == UnitMode::qd_units ? "qd-units" : "dimensionless";
  throw validation_error("unit mismatch: suffix \"" + q.unit + "\" is not valid here in " + m +
                         " mode (accepted: " + accepted + ")");
}

}  // namespace

double to_internal(const Quantity& q, Dim dim, UnitMode mode) {
  const bool qd = mode == UnitMode::qd_units;
  switch (dim) {
    case Dim::bare:
      if (!q.unit.empty()) mismatch(q, "bare number", mode);
      return q.value;
    case Dim::area:
      if (q.unit == "pi") return q.value * M_PI;
      if (q.unit.empty()) return q.value;
      mismatch(q, "pi or bare radians", mode);
    case Dim::energy:
      if (qd) {
        if (q.unit == "mev") return q.value;
        if (q.unit == "uev") return q.value * 1e-3;
        mismatch(q, "meV or ueV", mode);
      }
      if (q.unit.empty()) return q.value;
      mismatch(q, "bare number (units of omega0)", mode);
    case Dim::temperature:
      if (qd) {
        if (q.unit == "k") return temperature_from_kelvin(q.value);
        if (q.unit == "mev") return q.value;
        mismatch(q, "K or meV", mode);
      }
      if (q.unit.empty()) return q.value;
      mismatch(q, "bare number (k_B T in units of omega0)", mode);
    case Dim::coupling:
      if (qd) {
        if (q.unit == "ps2") return coupling_from_ps2(q.value);
        mismatch(q, "ps2", mode);
      }
      if (q.unit.empty()) return q.value;
      mismatch(q, "bare number (inverse omega0 squared)", mode);
    case Dim::time:
      if (qd) {
        if (q.unit == "ps") return time_from_ps(q.value);
        mismatch(q, "ps", mode);
      }
      if (q.unit.empty()) return q.value;
      mismatch(q, "bare number (inverse omega0)", mode);
  }
  throw validation_error("unhandled dimension");
}

std::string format_double(double value) {
  char buf[40];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, p);
}

std::string format_internal(double value, Dim dim, UnitMode mode) {
  const bool qd = mode == UnitMode::qd_units;
  double shown = value;
  const char* suffix = "";
  switch (dim) {
    case Dim::bare:
      break;
    case Dim::area:
      shown = value / M_PI;
      suffix = "pi";
      break;
    case Dim::energy:
      if (qd) suffix = "meV";
      break;
    case Dim::temperature:
      if (qd) {
        shown = temperature_to_kelvin(value);
        suffix = "K";
      }
      break;
    case Dim::coupling:
      if (qd) {
        shown = coupling_to_ps2(value);
        suffix = "ps2";
      }
      break;
    case Dim::time:
      if (qd) {
        shown = time_to_ps(value);
        suffix = "ps";
      }
      break;
  }
  return format_double(shown) + suffix;
}

}  // namespace prf
