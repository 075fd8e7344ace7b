#include "pulsedrf/simulate.hpp"

#include <json.hpp>

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "pulsedrf/engine.hpp"
#include "pulsedrf/errors.hpp"
#include "pulsedrf/pulse.hpp"

namespace prf {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

TimeGrid resolve_grid(const RunConfig& cfg, const PulseSpec& pulse, double delta, double gamma,
                      double gamma_prime) {
  const double omega0 = pulse.omega0;
  const double dtau = cfg.opt_dtau.value_or(0.1 / omega0);
  const double gamma_p = 0.5 * (gamma + gamma_prime);

  double tau_raw;
  if (cfg.opt_tau_max) {
    tau_raw = *cfg.opt_tau_max;
  } else {
    if (gamma_p <= 0.0)
      throw validation_error(
          "tau window underdetermined: gamma and gamma_prime are both zero, give tau_max");
    tau_raw = std::ceil(10.0 / gamma_p);
  }
  TimeGrid g;
  g.n_tau = std::max(2, static_cast<int>(std::ceil(tau_raw / dtau - 1e-9)) + 1);
  g.tau_max = dtau * (g.n_tau - 1);

  long k;
  if (cfg.opt_dt) {
    k = std::lround(*cfg.opt_dt / dtau);
    if (k < 1 || std::abs(k * dtau - *cfg.opt_dt) > 1e-9 * *cfg.opt_dt)
      throw validation_error("dt must be a positive integer multiple of dtau");
  } else {
    // multiple of dtau nearest the 0.25/max(omega0, |delta|) phase bound
    const double target = 0.25 / (std::max(omega0, std::abs(delta)) * dtau);
    k = std::max(1L, static_cast<long>(std::floor(target + 0.5 + 1e-9)));
  }
  const double dt = k * dtau;

  double t0, t1_raw;
  if (cfg.opt_t_start) {
    t0 = *cfg.opt_t_start;
    t1_raw = *cfg.opt_t_end;
  } else {
    const auto w = default_window(pulse, gamma);
    if (!std::isfinite(w.first) || !std::isfinite(w.second))
      throw validation_error(
          "time window underdetermined with gamma = 0: give t_start and t_end");
    t0 = std::floor(w.first);
    t1_raw = std::ceil(w.second);
  }
  const int n_steps = std::max(1, static_cast<int>(std::ceil((t1_raw - t0) / dt - 1e-9)));
  g.t_start = t0;
  g.t_end = t0 + n_steps * dt;
  g.n_t = n_steps + 1;
  return g;
}

namespace {

std::string fmt_axis(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  for (char& c : buf) {
    if (c == '\0') break;
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '.' && c != '-' && c != '+')
      c = '-';
  }
  return buf;
}

double trapezoid(const std::vector<double>& x, const std::vector<double>& y) {
  double sum = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) sum += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
  return sum;
}

}  // namespace

std::vector<SweepPoint> expand_points(const RunConfig& cfg, bool use_sweep_lists) {
  finalize_config(cfg);
  auto axis = [use_sweep_lists](const std::vector<double>& lst,
                                double scalar) -> std::vector<double> {
    return (use_sweep_lists && !lst.empty()) ? lst : std::vector<double>{scalar};
  };
  const std::vector<double> thetas = axis(cfg.sweep_theta, cfg.theta);
  const std::vector<double> deltas = axis(cfg.sweep_detuning, cfg.detuning);
  const std::vector<double> gps = axis(cfg.sweep_gamma_prime, cfg.gamma_prime);
  const std::vector<double> temps = axis(cfg.sweep_temperature, cfg.temperature);
  std::vector<bool> phonon_variants;
  switch (cfg.phonons) {
    case RunConfig::PhononSel::off: phonon_variants = {false}; break;
    case RunConfig::PhononSel::on: phonon_variants = {true}; break;
    case RunConfig::PhononSel::pair: phonon_variants = {false, true}; break;
  }

  std::vector<SweepPoint> points;
  std::set<std::string> used;
  for (double th : thetas)
    for (double d : deltas)
      for (double gp : gps)
        for (double temp : temps)
          for (bool ph : phonon_variants) {
            SweepPoint p;
            p.theta = th;
            p.detuning = d;
            p.gamma_prime = gp;
            p.temperature = temp;
            p.phonons_on = ph;
            p.sim.pulse.shape = cfg.shape;
            p.sim.pulse.omega0 = cfg.omega0;
            p.sim.pulse.area = th;
            p.sim.pulse.t_center = cfg.t_center;
            p.sim.pulse.rise = cfg.rise;
            p.sim.delta = d;
            p.sim.gamma = cfg.gamma;
            p.sim.gamma_prime = gp;
            p.sim.substep_scale = cfg.substep_scale;
            if (ph) p.sim.phonon = PhononParams{cfg.alpha, cfg.omega_b, temp};
            p.sim.grid = resolve_grid(cfg, p.sim.pulse, d, cfg.gamma, gp);

            std::string label;
            auto part = [&label](const std::string& s) {
              if (!label.empty()) label += '_';
              label += s;
            };
            if (thetas.size() > 1) part("th" + fmt_axis(th / M_PI) + "pi");
            if (deltas.size() > 1) part("d" + fmt_axis(d));
            if (gps.size() > 1) part("gp" + fmt_axis(gp));
            if (temps.size() > 1)
              part("T" + fmt_axis(cfg.mode == UnitMode::qd_units ? temperature_to_kelvin(temp)
                                                                 : temp));
            if (phonon_variants.size() > 1) part(ph ? "ph-on" : "ph-off");
            if (label.empty()) label = "point";
            if (used.count(label)) label += "_" + std::to_string(points.size());
            used.insert(label);
            p.label = label;
            points.push_back(std::move(p));
          }
  return points;
}

PointResult run_point(const RunConfig& cfg, const SweepPoint& point, int threads) {
  const auto clock0 = std::chrono::steady_clock::now();
  validate(point.sim);
  const std::vector<double> ax =
      default_detunings(point.sim.pulse.omega0, cfg.axis_points, cfg.axis_span);
  const Trajectory traj = evolve(point.sim);
  const WeightedCorrelation w = accumulate_correlation(point.sim, traj, threads);

  PointResult out;
  out.spec = assemble_spectra(w, point.sim.grid.dtau(), ax);

  PointMetrics& m = out.metrics;
  m.coh_fraction = out.spec.coh_fraction;
  double inc_max = 0.0;
  for (double v : out.spec.s_inc) inc_max = std::max(inc_max, v);
  if (inc_max > 0.0)
    m.inc_peaks = find_peaks(out.spec.s_inc, ax, 0.02, 0.2 * point.sim.pulse.omega0);
  try {
    m.sideband_ratio =
        sideband_weight_ratio(out.spec, std::hypot(point.sim.pulse.omega0, point.sim.delta));
  } catch (const validation_error&) {
    m.sideband_ratio.reset();  // splitting windows do not fit this axis
  }
  if (point.sim.pulse.shape == PulseShape::gaussian) {
    double worst = 0.0;
    const TimeGrid& g = point.sim.grid;
    for (int i = 0; i < g.n_t; ++i)
      worst = std::max(worst,
                       adiabaticity_lhs(point.sim.pulse, point.sim.delta, g.t_start + i * g.dt()));
    m.adiabaticity_max = worst;
    m.sidepeaks = sidepeak_times(point.sim.pulse);
  }
  m.lifetime_ratio = point.theta * point.sim.gamma / point.sim.pulse.omega0;
  m.lifetime_flag = m.lifetime_ratio >= 0.5;
  m.tail_fraction = w.tail_fraction;
  m.tau_window_ok = w.tau_window_ok;
  m.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - clock0).count();
  return out;
}

namespace {

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot write \"" + path.string() + "\"");
  out << content;
  if (!out) throw io_error("short write to \"" + path.string() + "\"");
}

std::string spectrum_csv_text(const SpectrumResult& s) {
  std::string text = "delta,s_total,s_coh,s_inc\n";
  for (std::size_t i = 0; i < s.detunings.size(); ++i) {
    text += format_double(s.detunings[i]);
    text += ',';
    text += format_double(s.s_total[i]);
    text += ',';
    text += format_double(s.s_coh[i]);
    text += ',';
    text += format_double(s.s_inc[i]);
    text += '\n';
  }
  return text;
}

ordered_json results_json(const PointMetrics& m) {
  ordered_json r;
  r["coh_fraction"] = m.coh_fraction;
  if (m.sideband_ratio) r["sideband_ratio"] = *m.sideband_ratio;
  else r["sideband_ratio"] = nullptr;
  if (m.adiabaticity_max) r["adiabaticity_max"] = *m.adiabaticity_max;
  else r["adiabaticity_max"] = nullptr;
  ordered_json roots = ordered_json::array();
  for (const SidepeakRoot& root : m.sidepeaks)
    roots.push_back(ordered_json{{"t", root.t}, {"omega", root.omega}});
  r["sidepeak_predictions"] = roots;
  ordered_json peaks = ordered_json::array();
  for (const Peak& pk : m.inc_peaks)
    peaks.push_back(
        ordered_json{{"position", pk.position}, {"height", pk.height}, {"weight", pk.weight}});
  r["inc_peaks"] = peaks;
  r["lifetime_ratio"] = m.lifetime_ratio;  // theta / (omega0 / gamma)
  r["lifetime_flag"] = m.lifetime_flag;    // set when dressed features mix with decay
  r["tail_fraction"] = m.tail_fraction;
  r["tau_window_ok"] = m.tau_window_ok;
  return r;
}

ordered_json meta_json(const RunConfig& cfg, const SweepPoint& pt, const PointMetrics& m) {
  const UnitMode mode = cfg.mode;
  ordered_json j;
  j["schema_version"] = cfg.schema_version;
  j["version"] = kVersion;
  j["label"] = pt.label;
  j["mode"] = mode == UnitMode::qd_units ? "qd-units" : "dimensionless";

  ordered_json p;
  p["shape"] = cfg.shape == PulseShape::gaussian ? "gaussian"
               : cfg.shape == PulseShape::square ? "square"
                                                 : "cw";
  p["omega0"] = pt.sim.pulse.omega0;
  p["theta"] = pt.theta;
  p["theta_pi"] = pt.theta / M_PI;
  p["t_center"] = pt.sim.pulse.t_center;
  p["detuning"] = pt.detuning;
  p["gamma"] = pt.sim.gamma;
  p["gamma_prime"] = pt.gamma_prime;
  p["phonons"] = pt.phonons_on;
  if (pt.phonons_on) {
    p["alpha"] = cfg.alpha;
    p["omega_b"] = cfg.omega_b;
    p["temperature"] = pt.temperature;
  }
  if (cfg.shape == PulseShape::gaussian) {
    const double fwhm = 2.0 * std::sqrt(std::log(2.0)) * gaussian_tau_g(pt.sim.pulse);
    p["fwhm"] = fwhm;
    if (mode == UnitMode::qd_units) p["fwhm_ps"] = time_to_ps(fwhm);
  }
  ordered_json disp;
  disp["omega0"] = format_internal(pt.sim.pulse.omega0, Dim::energy, mode);
  if (cfg.shape != PulseShape::cw) disp["theta"] = format_internal(pt.theta, Dim::area, mode);
  disp["detuning"] = format_internal(pt.detuning, Dim::energy, mode);
  disp["gamma"] = format_internal(pt.sim.gamma, Dim::energy, mode);
  disp["gamma_prime"] = format_internal(pt.gamma_prime, Dim::energy, mode);
  if (pt.phonons_on) {
    disp["alpha"] = format_internal(cfg.alpha, Dim::coupling, mode);
    disp["omega_b"] = format_internal(cfg.omega_b, Dim::energy, mode);
    disp["temperature"] = format_internal(pt.temperature, Dim::temperature, mode);
  }
  p["display"] = disp;
  j["params"] = p;

  const TimeGrid& g = pt.sim.grid;
  ordered_json grid;
  grid["t_start"] = g.t_start;
  grid["t_end"] = g.t_end;
  grid["n_t"] = g.n_t;
  grid["dt"] = g.dt();
  grid["tau_max"] = g.tau_max;
  grid["n_tau"] = g.n_tau;
  grid["dtau"] = g.dtau();
  grid["axis_points"] = cfg.axis_points;
  grid["axis_span"] = cfg.axis_span;
  grid["substep_scale"] = cfg.substep_scale;
  j["grid"] = grid;

  // the numerical gates this build enforces, echoed for the record
  ordered_json tol;
  tol["dual_path_spectrum_rel"] = 1e-9;
  tol["state_trace"] = 1e-8;
  tol["state_hermiticity"] = 1e-10;
  tol["state_positivity_phonon"] = 1e-6;
  tol["kernel_decay_frac"] = 1e-5;
  tol["memory_integral_rel"] = 1e-6;
  tol["tau_tail_warn"] = 1e-4;
  j["tolerances"] = tol;

  j["results"] = results_json(m);
  return j;
}

struct PointRow {
  std::string status = "failed";
  std::string error;
  PointMetrics metrics;
};

std::string error_kind(const std::exception& e) {
  if (dynamic_cast<const validation_error*>(&e)) return "validation";
  if (dynamic_cast<const numerical_error*>(&e)) return "numerical";
  if (dynamic_cast<const io_error*>(&e)) return "io";
  return "internal";
}

}  // namespace

std::string metrics_json(const PointMetrics& m) { return results_json(m).dump(2) + "\n"; }

RunOutcome run_to_directory(const RunConfig& cfg, const std::string& out_dir,
                            bool use_sweep_lists, int threads) {
  const std::vector<SweepPoint> points = expand_points(cfg, use_sweep_lists);
  const fs::path root(out_dir);
  std::error_code ec;
  fs::create_directories(root, ec);
  if (ec) throw io_error("cannot create output directory \"" + out_dir + "\": " + ec.message());

  std::vector<PointRow> rows(points.size());
  const int workers = std::clamp<int>(threads, 1, static_cast<int>(points.size()));
  const int point_threads = workers > 1 ? 1 : std::max(1, threads);

  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= points.size()) return;
      PointRow& row = rows[i];
      try {
        const PointResult res = run_point(cfg, points[i], point_threads);
        const fs::path dir = root / points[i].label;
        fs::create_directories(dir);
        write_file(dir / "spectrum.csv", spectrum_csv_text(res.spec));
        write_file(dir / "meta.json", meta_json(cfg, points[i], res.metrics).dump(2) + "\n");
        row.status = "ok";
        row.metrics = res.metrics;
      } catch (const std::exception& e) {
        row.error = error_kind(e) + ": " + e.what();
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < workers; ++i) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
  }

  // root artifacts (point order fixed by the expansion, independent of timing)
  std::string agg =
      "label,theta_pi,detuning,gamma,gamma_prime,temperature,phonons,status,coh_fraction,"
      "sideband_ratio,adiabaticity_max,n_inc_peaks,lifetime_flag,tau_window_ok,spectrum_path\n";
  std::string timing;
  ordered_json manifest;
  manifest["schema_version"] = cfg.schema_version;
  manifest["version"] = kVersion;
  manifest["preset"] = cfg.preset;
  manifest["mode"] = cfg.mode == UnitMode::qd_units ? "qd-units" : "dimensionless";
  manifest["normalization"] = cfg.normalization;
  manifest["semilog"] = cfg.semilog;
  ordered_json mpoints = ordered_json::array();
  int failed = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const SweepPoint& pt = points[i];
    const PointRow& row = rows[i];
    const bool ok = row.status == "ok";
    if (!ok) ++failed;

    const std::string rel = pt.label + "/spectrum.csv";
    agg += pt.label + ',' + format_double(pt.theta / M_PI) + ',' + format_double(pt.detuning) +
           ',' + format_double(cfg.gamma) + ',' + format_double(pt.gamma_prime) + ',' +
           format_double(pt.temperature) + ',' + (pt.phonons_on ? "on" : "off") + ',' +
           row.status + ',';
    if (ok) {
      const PointMetrics& m = row.metrics;
      agg += format_double(m.coh_fraction);
      agg += ',';
      if (m.sideband_ratio) agg += format_double(*m.sideband_ratio);
      agg += ',';
      if (m.adiabaticity_max) agg += format_double(*m.adiabaticity_max);
      agg += ',';
      agg += std::to_string(m.inc_peaks.size()) + ',' + (m.lifetime_flag ? "1" : "0") + ',' +
             (m.tau_window_ok ? "1" : "0") + ',' + rel + '\n';
      timing += pt.label + '\t' + format_double(m.wall_time_s) + "\n";
    } else {
      agg += ",,,,,," + rel + '\n';
    }

    ordered_json mp;
    mp["label"] = pt.label;
    mp["status"] = row.status;
    if (!ok) mp["error"] = row.error;
    mp["theta_pi"] = pt.theta / M_PI;
    mp["detuning"] = pt.detuning;
    mp["gamma_prime"] = pt.gamma_prime;
    mp["temperature"] = pt.temperature;
    mp["phonons"] = pt.phonons_on;
    mp["spectrum"] = rel;
    mp["meta"] = pt.label + "/meta.json";
    mpoints.push_back(mp);
  }
  manifest["points"] = mpoints;

  write_file(root / "aggregate.csv", agg);
  write_file(root / "manifest.json", manifest.dump(2) + "\n");
  write_file(root / "resolved.cfg", resolved_config_text(cfg));
  write_file(root / "timing.txt", timing);

  RunOutcome outcome;
  outcome.manifest_path = (root / "manifest.json").string();
  outcome.points_total = static_cast<int>(points.size());
  outcome.points_failed = failed;
  return outcome;
}

SpectrumResult read_spectrum_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open spectrum file \"" + path + "\"");
  std::string line;
  if (!std::getline(in, line) || line != "delta,s_total,s_coh,s_inc")
    throw validation_error("\"" + path + "\" is not a spectrum file (bad header)");
  SpectrumResult s;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    double v[4];
    int consumed = 0;
    if (std::sscanf(line.c_str(), "%lg,%lg,%lg,%lg%n", &v[0], &v[1], &v[2], &v[3], &consumed) !=
            4 ||
        consumed != static_cast<int>(line.size()))
      throw validation_error(path + ":" + std::to_string(line_no) + ": malformed spectrum row");
    s.detunings.push_back(v[0]);
    s.s_total.push_back(v[1]);
    s.s_coh.push_back(v[2]);
    s.s_inc.push_back(v[3]);
  }
  if (s.detunings.size() < 2)
    throw validation_error("\"" + path + "\" holds fewer than two spectrum rows");
  const double tot = trapezoid(s.detunings, s.s_total);
  s.coh_fraction = tot > 0.0 ? trapezoid(s.detunings, s.s_coh) / tot : 0.0;
  return s;
}

std::string analyze_spectrum_file(const std::string& path, double omega_r) {
  const SpectrumResult s = read_spectrum_csv(path);
  const double span = s.detunings.back() - s.detunings.front();
  ordered_json j;
  j["file"] = path;
  j["points"] = s.detunings.size();
  j["coh_fraction"] = s.coh_fraction;
  double inc_max = 0.0, tot_max = 0.0;
  for (double v : s.s_inc) inc_max = std::max(inc_max, v);
  for (double v : s.s_total) tot_max = std::max(tot_max, v);
  j["total_max"] = tot_max;
  ordered_json peaks = ordered_json::array();
  if (inc_max > 0.0) {
    for (const Peak& p : find_peaks(s.s_inc, s.detunings, 0.02, 0.04 * span))
      peaks.push_back(
          ordered_json{{"position", p.position}, {"height", p.height}, {"weight", p.weight}});
  }
  j["inc_peaks"] = peaks;
  if (omega_r > 0.0) {
    try {
      j["sideband_ratio"] = sideband_weight_ratio(s, omega_r);
    } catch (const validation_error& e) {
      j["sideband_ratio"] = nullptr;
      j["sideband_ratio_error"] = e.what();
    }
  }
  return j.dump(2) + "\n";
}

std::string emit_plot_script(const std::string& results_dir) {
  const fs::path root(results_dir);
  if (!fs::exists(root / "manifest.json"))
    throw io_error("no manifest.json under \"" + results_dir + "\"; run a simulation first");

  // Self-contained renderer: reads the manifest next to itself, so the emitted
  // text never embeds absolute paths or data.
  static const char* script = R"PY(#!/usr/bin/env python3
"""Render the spectra in this directory: one panel per swept point, phonon
on/off pairs overlaid, normalization and axis scale from manifest.json."""
import csv
import json
import os

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

ROOT = os.path.dirname(os.path.abspath(__file__))
with open(os.path.join(ROOT, "manifest.json")) as f:
    MAN = json.load(f)
POINTS = [p for p in MAN["points"] if p["status"] == "ok"]
if not POINTS:
    raise SystemExit("manifest lists no successful points")


def load(rel):
    with open(os.path.join(ROOT, rel)) as f:
        reader = csv.reader(f)
        next(reader)
        rows = [[float(x) for x in row] for row in reader]
    return list(zip(*rows))  # delta, s_total, s_coh, s_inc


panels = {}
for p in POINTS:
    key = (p["theta_pi"], p["detuning"], p["gamma_prime"], p["temperature"])
    panels.setdefault(key, {})[bool(p["phonons"])] = p

rows = sorted({k[0] for k in panels})
cols = sorted({k[1:] for k in panels}, key=lambda c: (abs(c[0]), c[0] < 0, c[1], c[2]))
fig, axes = plt.subplots(len(rows), len(cols),
                         figsize=(4.4 * len(cols), 2.8 * len(rows)),
                         squeeze=False, sharex=True)

norm = MAN.get("normalization", "none")
for i, theta_pi in enumerate(rows):
    row_scale = 1.0
    if norm == "row-left-total":
        left = panels.get((theta_pi,) + cols[0], {})
        base = left.get(False) or left.get(True)
        if base:
            m = max(load(base["spectrum"])[1])
            row_scale = m if m > 0 else 1.0
    for j, rest in enumerate(cols):
        ax = axes[i][j]
        pair = panels.get((theta_pi,) + rest)
        if not pair:
            ax.axis("off")
            continue
        scale = {"s_total": row_scale, "s_coh": row_scale, "s_inc": row_scale}
        if norm == "no-phonon-max" and False in pair:
            d = load(pair[False]["spectrum"])
            scale = {"s_total": max(d[1]) or 1.0,
                     "s_coh": max(d[2]) or 1.0,
                     "s_inc": max(d[3]) or 1.0}
        for phonons, ls in ((False, "-"), (True, "-.")):
            p = pair.get(phonons)
            if p is None:
                continue
            tag = " (phonons)" if phonons and len(pair) > 1 else ""
            delta, total, coh, inc = load(p["spectrum"])
            ax.plot(delta, [v / scale["s_total"] for v in total], ls, color="black",
                    lw=1.0, label="total" + tag)
            ax.plot(delta, [v / scale["s_inc"] for v in inc], ls, color="tab:orange",
                    lw=1.0, label="incoherent" + tag)
            ax.plot(delta, [v / scale["s_coh"] for v in coh], ls, color="tab:blue",
                    lw=1.0, label="coherent" + tag)
        if MAN.get("semilog"):
            ax.set_yscale("log")
        title = f"theta = {theta_pi:g} pi, delta = {rest[0]:g}"
        if rest[1]:
            title += f", gamma' = {rest[1]:g}"
        ax.set_title(title, fontsize=9)
        if i == len(rows) - 1:
            ax.set_xlabel("delta (omega - omega_L)")
        if j == 0:
            ax.set_ylabel("S (norm.)" if norm != "none" else "S")
axes[0][0].legend(fontsize=7, loc="upper right")
fig.tight_layout()
out = os.path.join(ROOT, "spectra.png")
fig.savefig(out, dpi=160)
print(out)
)PY";

  const fs::path path = root / "plot.py";
  write_file(path, script);
  return path.string();
}

}  // namespace prf
