#include "pulsedrf.h"

#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

#include "pulsedrf/config.hpp"
#include "pulsedrf/errors.hpp"
#include "pulsedrf/simulate.hpp"

struct prf_run {
  prf::RunConfig cfg;
};

struct prf_spectrum {
  prf::SpectrumResult spec;
  prf::PointMetrics metrics;
};

namespace {

thread_local std::string g_error;

template <class F>
int guarded(F&& body) noexcept {
  try {
    body();
    g_error.clear();
    return PRF_OK;
  } catch (const prf::validation_error& e) {
    g_error = e.what();
    return PRF_ERR_VALIDATION;
  } catch (const prf::numerical_error& e) {
    g_error = e.what();
    return PRF_ERR_NUMERICAL;
  } catch (const prf::io_error& e) {
    g_error = e.what();
    return PRF_ERR_IO;
  } catch (const std::exception& e) {
    g_error = e.what();
    return PRF_ERR_INTERNAL;
  } catch (...) {
    g_error = "unknown failure";
    return PRF_ERR_INTERNAL;
  }
}

char* alloc_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

int require(bool ok, const char* msg) {
  if (ok) return PRF_OK;
  g_error = msg;
  return PRF_ERR_VALIDATION;
}

}  // namespace

extern "C" {

const char* prf_version(void) { return prf::kVersion; }

const char* prf_last_error(void) { return g_error.c_str(); }

void prf_string_free(char* s) { std::free(s); }

prf_run* prf_run_from_preset(const char* name) {
  prf_run* run = nullptr;
  guarded([&] {
    if (!name) throw prf::validation_error("preset name is null");
    run = new prf_run{prf::preset_config(name)};
  });
  return run;
}

prf_run* prf_run_from_file(const char* path) {
  prf_run* run = nullptr;
  guarded([&] {
    if (!path) throw prf::validation_error("config path is null");
    run = new prf_run{prf::load_config(path)};
  });
  return run;
}

int prf_run_set(prf_run* run, const char* line) {
  if (int rc = require(run && line, "null handle or line")) return rc;
  return guarded([&] { prf::apply_override(run->cfg, line); });
}

int prf_run_out_dir(prf_run* run, char** dir) {
  if (int rc = require(run && dir, "null handle or output pointer")) return rc;
  return guarded([&] {
    *dir = alloc_string(run->cfg.out_dir);
    if (!*dir) throw std::bad_alloc();
  });
}

int prf_run_point_count(prf_run* run, int sweep, int* count) {
  if (int rc = require(run && count, "null handle or output pointer")) return rc;
  return guarded([&] {
    *count = static_cast<int>(prf::expand_points(run->cfg, sweep != 0).size());
  });
}

int prf_run_point_label(prf_run* run, int sweep, int index, char** label) {
  if (int rc = require(run && label, "null handle or output pointer")) return rc;
  return guarded([&] {
    const auto points = prf::expand_points(run->cfg, sweep != 0);
    if (index < 0 || index >= static_cast<int>(points.size()))
      throw prf::validation_error("point index out of range");
    *label = alloc_string(points[index].label);
    if (!*label) throw std::bad_alloc();
  });
}

int prf_run_execute(prf_run* run, const char* out_dir, int sweep, int threads,
                    int* failed_points) {
  if (int rc = require(run && out_dir, "null handle or output directory")) return rc;
  int failed = 0;
  const int rc = guarded([&] {
    const prf::RunOutcome outcome = prf::run_to_directory(
        run->cfg, out_dir, sweep != 0, threads < 1 ? run->cfg.threads : threads);
    failed = outcome.points_failed;
    if (failed > 0)
      throw prf::numerical_error(std::to_string(failed) + " of " +
                                 std::to_string(outcome.points_total) +
                                 " points failed; see " + outcome.manifest_path);
  });
  if (failed_points) *failed_points = failed;
  return rc;
}

void prf_run_free(prf_run* run) { delete run; }

prf_spectrum* prf_spectrum_compute(prf_run* run, int sweep, int index, int threads) {
  prf_spectrum* s = nullptr;
  guarded([&] {
    if (!run) throw prf::validation_error("null handle");
    const auto points = prf::expand_points(run->cfg, sweep != 0);
    if (index < 0 || index >= static_cast<int>(points.size()))
      throw prf::validation_error("point index out of range");
    const prf::PointResult res =
        prf::run_point(run->cfg, points[index], threads < 1 ? run->cfg.threads : threads);
    s = new prf_spectrum{res.spec, res.metrics};
  });
  return s;
}

int prf_spectrum_size(const prf_spectrum* s) {
  if (!s) {
    g_error = "null handle";
    return -PRF_ERR_VALIDATION;
  }
  return static_cast<int>(s->spec.detunings.size());
}

int prf_spectrum_column(const prf_spectrum* s, const char* name, double* out, int cap) {
  if (int rc = require(s && name && out, "null handle, name, or buffer")) return rc;
  return guarded([&] {
    const std::vector<double>* col = nullptr;
    const std::string key(name);
    if (key == "delta") col = &s->spec.detunings;
    else if (key == "s_total") col = &s->spec.s_total;
    else if (key == "s_coh") col = &s->spec.s_coh;
    else if (key == "s_inc") col = &s->spec.s_inc;
    else throw prf::validation_error("unknown column \"" + key + "\"");
    if (cap < static_cast<int>(col->size()))
      throw prf::validation_error("buffer too small for " + std::to_string(col->size()) +
                                  " samples");
    std::memcpy(out, col->data(), col->size() * sizeof(double));
  });
}

int prf_spectrum_coh_fraction(const prf_spectrum* s, double* out) {
  if (int rc = require(s && out, "null handle or output pointer")) return rc;
  *out = s->spec.coh_fraction;
  g_error.clear();
  return PRF_OK;
}

int prf_spectrum_metrics_json(const prf_spectrum* s, char** json) {
  if (int rc = require(s && json, "null handle or output pointer")) return rc;
  return guarded([&] {
    *json = alloc_string(prf::metrics_json(s->metrics));
    if (!*json) throw std::bad_alloc();
  });
}

void prf_spectrum_free(prf_spectrum* s) { delete s; }

int prf_analyze_file(const char* spectrum_csv, double omega_r, char** json) {
  if (int rc = require(spectrum_csv && json, "null path or output pointer")) return rc;
  return guarded([&] {
    *json = alloc_string(prf::analyze_spectrum_file(spectrum_csv, omega_r));
    if (!*json) throw std::bad_alloc();
  });
}

int prf_emit_plot_script(const char* results_dir, char** path) {
  if (int rc = require(results_dir != nullptr, "null results directory")) return rc;
  return guarded([&] {
    const std::string written = prf::emit_plot_script(results_dir);
    if (path) {
      *path = alloc_string(written);
      if (!*path) throw std::bad_alloc();
    }
  });
}

}  // extern "C"
