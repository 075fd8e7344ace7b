#pragma once
#include <optional>
#include <string>
#include <vector>

#include "pulsedrf/config.hpp"
#include "pulsedrf/spectrum.hpp"

namespace prf {

inline constexpr const char* kVersion = "1.0.0";

// One fully resolved simulation: internal-unit SimConfig with concrete grids
// plus the axis values that produced it (for labels and metadata).
struct SweepPoint {
  std::string label;
  SimConfig sim;
  bool phonons_on = false;
  double theta = 0.0;
  double detuning = 0.0;
  double gamma_prime = 0.0;
  double temperature = 0.0;
};

// Default grids, derived per point: dtau = 0.1/omega0; tau_max = ceil(10 of
// the polarization lifetimes 1/gamma_p); dt the multiple of dtau nearest
// 0.25/max(omega0, |delta|); t window = the pulse-shape default with integer
// bounds, extended so the span is an exact dt multiple. Explicit RunConfig
// grid fields override the matching derivation (tau_max and the window snap
// up to the lattice; dt must already be a dtau multiple).
TimeGrid resolve_grid(const RunConfig& cfg, const PulseSpec& pulse, double delta, double gamma,
                      double gamma_prime);

// Cross product of the sweep axes in fixed order (theta, detuning,
// gamma_prime, temperature, phonon variant), each axis falling back to its
// scalar when the list is empty or use_sweep_lists is false. phonons = pair
// always expands to an off/on pair. Labels are unique, filesystem-safe, and
// name only the axes that vary.
std::vector<SweepPoint> expand_points(const RunConfig& cfg, bool use_sweep_lists);

struct PointMetrics {
  double coh_fraction = 0.0;
  PeakSet inc_peaks;                      // incoherent-spectrum peak table
  std::optional<double> sideband_ratio;   // W+/W- about the dressed splitting
  std::optional<double> adiabaticity_max; // Gaussian pulses only
  std::vector<SidepeakRoot> sidepeaks;    // Gaussian pulses only
  double lifetime_ratio = 0.0;            // theta * gamma / omega0
  bool lifetime_flag = false;             // ratio >= 0.5: dressed features mix with decay
  double tail_fraction = 0.0;
  bool tau_window_ok = true;
  double wall_time_s = 0.0;
};

struct PointResult {
  SpectrumResult spec;
  PointMetrics metrics;
};

// The metrics as a standalone JSON document (the results block of meta.json).
std::string metrics_json(const PointMetrics& m);

// Evolve, accumulate the two-time correlator, transform, and analyze one
// point on the detuning axis implied by the RunConfig.
PointResult run_point(const RunConfig& cfg, const SweepPoint& point, int threads);

struct RunOutcome {
  std::string manifest_path;
  int points_total = 0;
  int points_failed = 0;
};

// Executes every point into out_dir: <label>/spectrum.csv + <label>/meta.json
// per point, then aggregate.csv, manifest.json (failures marked per point),
// resolved.cfg, and timing.txt at the root. All bytes are deterministic for a
// given config and version except timing.txt, which holds the wall times.
// Points run on a worker pool; per-point failures are recorded, not thrown.
RunOutcome run_to_directory(const RunConfig& cfg, const std::string& out_dir,
                            bool use_sweep_lists, int threads);

// Reload a spectrum written by run_to_directory.
SpectrumResult read_spectrum_csv(const std::string& path);

// Peak table, coherent fraction, and (when omega_r > 0) the sideband weight
// ratio of an emitted spectrum file, as a JSON document.
std::string analyze_spectrum_file(const std::string& path, double omega_r);

// Writes <results_dir>/plot.py, a matplotlib script that renders the emitted
// CSVs (grid layout over the swept axes, phonon on/off overlays, the
// manifest's normalization policy and the semilog flag). References only
// files inside results_dir; requires a manifest.
std::string emit_plot_script(const std::string& results_dir);

}  // namespace prf
