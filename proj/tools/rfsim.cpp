// Command-line front end: configuration ingestion, single runs and sweeps,
// result analysis, and plot-script emission, all through the C API.
#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "pulsedrf.h"

namespace {

// 0 success, 2 rejected configuration, 3 runtime (numerical or I/O) failure.
int exit_code(int prf_code) {
  switch (prf_code) {
    case PRF_OK: return 0;
    case PRF_ERR_VALIDATION: return 2;
    default: return 3;
  }
}

int fail(int prf_code) {
  std::fprintf(stderr, "rfsim: error: %s\n", prf_last_error());
  return exit_code(prf_code);
}

using RunHandle = std::unique_ptr<prf_run, decltype(&prf_run_free)>;

// Shared run/sweep options: source selection plus overrides, each override a
// config-file line applied in order.
struct RunArgs {
  std::string preset;
  std::string config_path;
  std::vector<std::string> sets;
  std::string out_dir;
  int threads = 0;  // 0: config value (RFSIM_THREADS seeds the CLI default)
  bool semilog = false;
  bool no_phonons = false;
};

void add_run_options(CLI::App* cmd, RunArgs& args) {
  cmd->add_option("--preset", args.preset, "Start from a named parameter set (fig1|fig2|fig3)");
  cmd->add_option("--config", args.config_path, "Start from a flat key = value config file");
  cmd->add_option("--set", args.sets, "Override one key, config-file syntax (repeatable)");
  cmd->add_option("--out", args.out_dir,
                  "Output directory (default: the config's out_dir; relative paths land under "
                  "RFSIM_OUT_ROOT when set)");
  cmd->add_option("--threads", args.threads, "Worker threads")->envname("RFSIM_THREADS");
  cmd->add_flag("--semilog", args.semilog, "Mark the run for log-scale plots");
  cmd->add_flag("--no-phonons", args.no_phonons, "Force the phonon coupling off");
}

int make_run(const RunArgs& args, RunHandle& run) {
  if (args.preset.empty() == args.config_path.empty()) {
    std::fprintf(stderr, "rfsim: error: give exactly one of --preset or --config\n");
    return 2;
  }
  prf_run* raw = args.preset.empty() ? prf_run_from_file(args.config_path.c_str())
                                     : prf_run_from_preset(args.preset.c_str());
  if (!raw) return fail(PRF_ERR_VALIDATION);
  run.reset(raw);
  for (const std::string& line : args.sets)
    if (int rc = prf_run_set(run.get(), line.c_str())) return fail(rc);
  if (args.semilog)
    if (int rc = prf_run_set(run.get(), "semilog = on")) return fail(rc);
  if (args.no_phonons)
    if (int rc = prf_run_set(run.get(), "phonons = off")) return fail(rc);
  return 0;
}

std::string resolve_out_dir(const RunArgs& args, prf_run* run) {
  std::string dir = args.out_dir;
  if (dir.empty()) {
    char* configured = nullptr;
    if (prf_run_out_dir(run, &configured) == PRF_OK) {
      dir = configured;
      prf_string_free(configured);
    } else {
      dir = "runs";
    }
  }
  const char* root = std::getenv("RFSIM_OUT_ROOT");
  if (root && *root && std::filesystem::path(dir).is_relative())
    dir = (std::filesystem::path(root) / dir).string();
  return dir;
}

int execute(const RunArgs& args, bool sweep) {
  RunHandle run(nullptr, &prf_run_free);
  if (int rc = make_run(args, run)) return rc;

  int count = 0;
  if (int rc = prf_run_point_count(run.get(), sweep ? 1 : 0, &count)) return fail(rc);
  const std::string out_dir = resolve_out_dir(args, run.get());
  std::printf("%d point%s -> %s\n", count, count == 1 ? "" : "s", out_dir.c_str());

  int failed = 0;
  const int rc =
      prf_run_execute(run.get(), out_dir.c_str(), sweep ? 1 : 0, args.threads, &failed);
  // capture before any further API call clears the thread's message
  const std::string error = rc != PRF_OK ? prf_last_error() : "";
  if (rc != PRF_OK && failed == 0) {
    // rejected outright (validation or filesystem): nothing was written
    std::fprintf(stderr, "rfsim: error: %s\n", error.c_str());
    return exit_code(rc);
  }
  for (int i = 0; i < count; ++i) {
    char* label = nullptr;
    if (prf_run_point_label(run.get(), sweep ? 1 : 0, i, &label) == PRF_OK) {
      std::printf("  %s/%s/spectrum.csv\n", out_dir.c_str(), label);
      prf_string_free(label);
    }
  }
  std::printf("manifest: %s/manifest.json\n", out_dir.c_str());
  if (rc != PRF_OK) {
    std::fprintf(stderr, "rfsim: error: %s\n", error.c_str());
    std::fprintf(stderr, "rfsim: %d of %d point%s failed (the manifest marks them)\n", failed,
                 count, count == 1 ? "" : "s");
    return exit_code(rc);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pulsed resonance-fluorescence spectra: runs, sweeps, analysis, plots"};
  app.set_version_flag("--version", prf_version());
  app.require_subcommand(1);

  RunArgs run_args;
  CLI::App* run_cmd = app.add_subcommand("run", "Simulate the base point of a configuration");
  add_run_options(run_cmd, run_args);

  RunArgs sweep_args;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Simulate every point of the sweep axes");
  add_run_options(sweep_cmd, sweep_args);

  std::string analyze_path;
  double omega_r = 0.0;
  CLI::App* analyze_cmd = app.add_subcommand("analyze", "Peak table and metrics of a spectrum file");
  analyze_cmd->add_option("spectrum", analyze_path, "Path to a spectrum.csv")->required();
  analyze_cmd->add_option("--omega-r", omega_r,
                          "Dressed splitting for the sideband weight ratio (0 skips it)");

  std::string results_dir;
  CLI::App* plot_cmd = app.add_subcommand("plot-script", "Write plot.py next to emitted results");
  plot_cmd->add_option("results", results_dir, "Results directory holding manifest.json")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;  // bad usage is a validation failure
  }

  if (run_cmd->parsed()) return execute(run_args, false);
  if (sweep_cmd->parsed()) return execute(sweep_args, true);
  if (analyze_cmd->parsed()) {
    char* json = nullptr;
    if (int rc = prf_analyze_file(analyze_path.c_str(), omega_r, &json)) return fail(rc);
    std::fputs(json, stdout);
    prf_string_free(json);
    return 0;
  }
  if (plot_cmd->parsed()) {
    char* path = nullptr;
    if (int rc = prf_emit_plot_script(results_dir.c_str(), &path)) return fail(rc);
    std::printf("%s\n", path);
    prf_string_free(path);
    return 0;
  }
  return 2;
}
