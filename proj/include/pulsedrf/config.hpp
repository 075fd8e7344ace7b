#pragma once
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pulsedrf/simconfig.hpp"
#include "pulsedrf/units.hpp"

namespace prf {

// A full run description in internal units (hbar = 1; energy unit meV in
// qd-units mode, Omega0 in dimensionless mode). Scalars give the base point;
// the sweep lists, when non-empty, replace the matching scalar axis during
// sweep expansion. Optional grid fields default from the physics per point.
struct RunConfig {
  int schema_version = 1;
  UnitMode mode = UnitMode::dimensionless;
  std::string preset = "custom";

  PulseShape shape = PulseShape::gaussian;
  double omega0 = 1.0;
  double theta = 0.0;  // pulse area (radians); ignored for cw
  double t_center = 0.0;
  double rise = 0.0;  // square-edge time constant; <= 0 picks the shape default

  double detuning = 0.0;
  double gamma = 0.0;
  double gamma_prime = 0.0;

  enum class PhononSel { off, on, pair };
  PhononSel phonons = PhononSel::off;
  double alpha = 0.0;
  double omega_b = 0.0;
  double temperature = 0.0;  // k_B T, energy units

  std::vector<double> sweep_theta;
  std::vector<double> sweep_detuning;
  std::vector<double> sweep_gamma_prime;
  std::vector<double> sweep_temperature;

  std::optional<double> opt_dt, opt_dtau, opt_tau_max, opt_t_start, opt_t_end;
  int axis_points = 2001;
  double axis_span = 2.5;  // half-width of the detuning axis in units of omega0

  std::string out_dir = "runs";
  std::string normalization = "none";  // none | row-left-total | no-phonon-max
  bool semilog = false;
  int threads = 1;
  double substep_scale = 1.0;

  std::set<std::string> keys_set;  // keys assigned so far (required-key checks)
};

// Paper parameter sets: fig1 (dimensionless pulsed triplet grid), fig2 (fig1
// plus a pure-dephasing overlay on a semilog scale), fig3 (quantum-dot units
// with the phonon on/off pair). Unknown names are rejected.
RunConfig preset_config(const std::string& name);

// Flat "key = value" document: '#' comments, one key per line, lists
// comma-separated, unit suffixes per the mode. "preset" must come before any
// other key except schema_version; "mode" before any dimensioned value.
// Errors carry "<source>:<line>: " context. The result is finalized.
RunConfig load_config_text(const std::string& text, const std::string& source_name);
RunConfig load_config(const std::string& path);

// Applies one "key = value" line on top of an existing config (CLI overrides).
// Unlike in-file keys, repeated assignment is allowed. Not finalized; call
// finalize_config before use.
void apply_override(RunConfig& cfg, const std::string& line,
                    const std::string& source_name = "<override>");

// Required keys present, enum values known, ranges sane. Throws
// validation_error naming the offending key.
void finalize_config(const RunConfig& cfg);

// Fully explicit flat document that load_config_text maps back to an
// equivalent RunConfig (fields agree to formatting precision). Deterministic
// bytes for a given config.
std::string resolved_config_text(const RunConfig& cfg);

// Rescales every stored value to the target unit system; physical predictions
// are unchanged. omega0_mev names the Rabi energy when leaving dimensionless
// mode (ignored otherwise). Same-mode conversion returns the input.
RunConfig convert_mode(const RunConfig& cfg, UnitMode target, double omega0_mev = 1.0);

}  // namespace prf
