#include "pulsedrf/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <thread>

#include "pulsedrf/errors.hpp"
#include "pulsedrf/phonon.hpp"

namespace prf {

namespace {

constexpr double kTraceTol = 1e-8;
constexpr double kHermTol = 1e-10;
constexpr double kPurityTol = 1e-8;
// Phonon runs tolerate a larger transient negativity (time-dependent weak
// coupling theory is not guaranteed CP at finite coupling).
constexpr double kPosTolBare = 1e-8;
constexpr double kPosTolPhonon = 1e-6;

// Substep densities per unit (dominant rate x interval). 128 for the main
// trajectory keeps the step-halving drift of <sigma-> below 1e-7 over
// acceptance-sized windows; tau legs use 64 (they only feed an integral).
constexpr double kTrajSubstepRate = 128.0;
constexpr double kTauSubstepRate = 64.0;

double dominant_rate(const SimConfig& c) {
  double s = std::max({c.pulse.omega0, std::abs(c.delta), c.gamma, c.gamma_prime});
  if (c.phonon) s = std::max(s, c.phonon->omega_b);
  return std::max(s, 1e-12);
}

int substeps(const SimConfig& c, double interval, double rate) {
  return std::max(1, static_cast<int>(std::ceil(interval * rate * c.substep_scale * dominant_rate(c))));
}

int lattice_stride(const TimeGrid& g) {
  const double m = g.dt() / g.dtau();
  return static_cast<int>(std::llround(m));
}

LMap dissipator(const Operator2& a, double rate) {
  // (rate/2) (2 A rho A^dag - A^dag A rho - rho A^dag A)
  const Operator2 ad = adjoint(a);
  const Operator2 ada = matmul(ad, a);
  LMap l = matmul(spre(a), spost(ad));
  l *= Complex(rate);
  LMap n = spre(ada) + spost(ada);
  n *= Complex(-0.5 * rate);
  return l + n;
}

LMap hamiltonian_part(const Operator2& h) {
  LMap l = spre(h);
  LMap r = spost(h);
  r *= Complex(-1.0);
  LMap c = l + r;
  c *= Complex(0.0, -1.0);
  return c;
}

struct Generator {
  LMap l0;  // detuning + decay + dephasing
  LMap l1;  // envelope-linear drive part
  const SuperopTable* phonon = nullptr;
  PulseSpec pulse;

  LMap matrix(double t) const {
    const double omega = rabi_envelope(pulse, t);
    LMap l = l0;
    for (int i = 0; i < 16; ++i) l.a[static_cast<std::size_t>(i)] += omega * l1.a[static_cast<std::size_t>(i)];
    if (phonon) l += phonon->eval(omega);
    return l;
  }
};

Generator make_generator(const SimConfig& c, const SuperopTable* tab) {
  Generator g;
  Operator2 hd;
  hd(1, 1) = c.delta;
  g.l0 = hamiltonian_part(hd) + dissipator(sigma_minus(), c.gamma) +
         dissipator(sigma_pp(), c.gamma_prime);
  Operator2 hx;
  hx(0, 1) = 0.5;
  hx(1, 0) = 0.5;
  g.l1 = hamiltonian_part(hx);
  g.phonon = tab;
  g.pulse = c.pulse;
  return g;
}

inline void axpy(LVec& y, double a, const LVec& x) {
  for (int i = 0; i < 4; ++i) y[static_cast<std::size_t>(i)] += a * x[static_cast<std::size_t>(i)];
}

void rk4_interval(const Generator& gen, double t0, double dt, int nsub, LVec& v) {
  const double h = dt / nsub;
  for (int s = 0; s < nsub; ++s) {
    const double t = t0 + s * h;
    const LMap m1 = gen.matrix(t);
    const LMap m2 = gen.matrix(t + 0.5 * h);
    const LMap m4 = gen.matrix(t + h);
    const LVec k1 = apply(m1, v);
    LVec u = v;
    axpy(u, 0.5 * h, k1);
    const LVec k2 = apply(m2, u);
    u = v;
    axpy(u, 0.5 * h, k2);
    const LVec k3 = apply(m2, u);
    u = v;
    axpy(u, h, k3);
    const LVec k4 = apply(m4, u);
    axpy(v, h / 6.0, k1);
    axpy(v, h / 3.0, k2);
    axpy(v, h / 3.0, k3);
    axpy(v, h / 6.0, k4);
  }
}

// One-interval map for a frozen generator: RK4 on a linear autonomous system
// is the 4th-order Taylor polynomial, composed nsub times.
LMap stride_map(const LMap& l, double dt, int nsub) {
  const double h = dt / nsub;
  LMap id;
  for (int i = 0; i < 4; ++i) id(i, i) = 1.0;
  LMap s = id;
  for (int k = 4; k >= 1; --k) {
    LMap t = matmul(l, s);
    t *= Complex(h / k);
    s = id + t;
  }
  LMap m = s;
  for (int k = 1; k < nsub; ++k) m = matmul(s, m);
  return m;
}

struct Context {
  const SimConfig* cfg;
  SuperopTable table;  // phonon superoperator over envelope values (optional)
  Generator gen;
  bool always_const;     // cw: the generator never varies
  double support_lo, support_hi;
  int nsub_traj, nsub_tau;
  LMap stride_traj, stride_tau;  // per-dtau maps in the envelope-free zone
  double pos_tol;

  explicit Context(const SimConfig& c) : cfg(&c) {
    validate(c);
    const SuperopTable* tab = nullptr;
    if (c.phonon && c.phonon->alpha > 0.0) {
      const PhononKernels kernels =
          build_kernels(*c.phonon, c.grid.dtau() / substeps(c, c.grid.dtau(), kTrajSubstepRate));
      table = build_phonon_superop_table(c, kernels);
      tab = &table;
    }
    gen = make_generator(c, tab);
    always_const = c.pulse.shape == PulseShape::cw;
    const auto sup = pulse_support(c.pulse);
    support_lo = sup.first;
    support_hi = sup.second;
    const double dtau = c.grid.dtau();
    nsub_traj = substeps(c, dtau, kTrajSubstepRate);
    nsub_tau = substeps(c, dtau, kTauSubstepRate);
    const double t_free = always_const ? c.grid.t_start : support_hi + dtau;
    const LMap l_free = gen.matrix(t_free);
    stride_traj = stride_map(l_free, dtau, nsub_traj);
    stride_tau = stride_map(l_free, dtau, nsub_tau);
    pos_tol = (c.phonon && c.phonon->alpha > 0.0) ? kPosTolPhonon : kPosTolBare;
  }

  // true when the generator is frozen on [a, b] (envelope identically zero or cw)
  bool frozen(double a, double b) const {
    if (always_const) return true;
    return b <= support_lo || a >= support_hi;
  }

  void advance_traj(double t0, LVec& v) const {
    if (frozen(t0, t0 + cfg->grid.dtau()))
      v = apply(stride_traj, v);
    else
      rk4_interval(gen, t0, cfg->grid.dtau(), nsub_traj, v);
  }

  void advance_tau(double t0, LVec& v) const {
    if (frozen(t0, t0 + cfg->grid.dtau()))
      v = apply(stride_tau, v);
    else
      rk4_interval(gen, t0, cfg->grid.dtau(), nsub_tau, v);
  }
};

void check_state(const LVec& v, double t, double pos_tol) {
  for (int i = 0; i < 4; ++i) {
    const Complex x = v[static_cast<std::size_t>(i)];
    if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) {
      std::ostringstream os;
      os << "propagation diverged at t = " << t << ": non-finite state";
      throw numerical_error(os.str());
    }
  }
  const double tr_dev = std::abs(v[0] + v[3] - Complex(1.0));
  if (tr_dev > kTraceTol) {
    std::ostringstream os;
    os << "propagation diverged at t = " << t << ": trace deviation " << tr_dev;
    throw numerical_error(os.str());
  }
  const double herm = std::max({std::abs(v[1] - std::conj(v[2])), std::abs(v[0].imag()),
                                std::abs(v[3].imag())});
  if (herm > kHermTol) {
    std::ostringstream os;
    os << "propagation diverged at t = " << t << ": hermiticity deviation " << herm;
    throw numerical_error(os.str());
  }
  // min eigenvalue of the hermitized state
  const double p = v[0].real(), r = v[3].real();
  const Complex q = 0.5 * (v[1] + std::conj(v[2]));
  const double w = std::hypot(0.5 * (r - p), std::abs(q));
  const double lam_min = 0.5 * (p + r) - w;
  if (lam_min < -pos_tol) {
    std::ostringstream os;
    os << "propagation diverged at t = " << t << ": negative eigenvalue " << lam_min;
    throw numerical_error(os.str());
  }
  const double purity = p * p + r * r + 2.0 * std::norm(q);
  if (purity > 1.0 + kPurityTol) {
    std::ostringstream os;
    os << "propagation diverged at t = " << t << ": purity " << purity;
    throw numerical_error(os.str());
  }
}

void run_rows(int n, int threads, const std::function<void(int)>& work) {
  threads = std::min(threads, n);
  if (threads <= 1) {
    for (int i = 0; i < n; ++i) work(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int w = 0; w < threads; ++w)
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) work(i);
    });
  for (auto& th : pool) th.join();
}

}  // namespace

LMap SuperopTable::eval(double omega) const {
  const int n = static_cast<int>(nodes.size());
  if (n == 1) return nodes[0];
  double x = omega / omega_max * (n - 1);
  x = std::clamp(x, 0.0, static_cast<double>(n - 1));
  const int i1 = std::min(static_cast<int>(x), n - 2);
  const double s = x - i1;
  const int i0 = std::max(i1 - 1, 0);
  const int i2 = i1 + 1;
  const int i3 = std::min(i1 + 2, n - 1);
  const double c0 = ((2.0 - s) * s - 1.0) * s * 0.5;
  const double c1 = ((3.0 * s - 5.0) * s * s + 2.0) * 0.5;
  const double c2 = ((4.0 - 3.0 * s) * s + 1.0) * s * 0.5;
  const double c3 = (s - 1.0) * s * s * 0.5;
  // end segments use cubic-extrapolated ghost nodes (q(-1) = 4q0 - 6q1 + 4q2 - q3)
  // so the interpolant stays fourth order up to both range edges
  const bool ghost_lo = (i1 == 0 && n >= 4);
  const bool ghost_hi = (i1 == n - 2 && n >= 4);
  LMap out;
  const auto& n1v = nodes[static_cast<std::size_t>(i1)].a;
  const auto& n2v = nodes[static_cast<std::size_t>(i2)].a;
  const auto& n0v = nodes[static_cast<std::size_t>(i0)].a;
  const auto& n3v = nodes[static_cast<std::size_t>(i3)].a;
  for (int k = 0; k < 16; ++k) {
    const auto u = static_cast<std::size_t>(k);
    const Complex v0 =
        ghost_lo ? 4.0 * nodes[0].a[u] - 6.0 * nodes[1].a[u] + 4.0 * nodes[2].a[u] - nodes[3].a[u]
                 : n0v[u];
    const Complex v3 =
        ghost_hi ? 4.0 * nodes[static_cast<std::size_t>(n - 1)].a[u] -
                       6.0 * nodes[static_cast<std::size_t>(n - 2)].a[u] +
                       4.0 * nodes[static_cast<std::size_t>(n - 3)].a[u] -
                       nodes[static_cast<std::size_t>(n - 4)].a[u]
                 : n3v[u];
    out.a[u] = c0 * v0 + c1 * n1v[u] + c2 * n2v[u] + c3 * v3;
  }
  return out;
}

void validate(const SimConfig& config) {
  validate(config.pulse);
  if (config.gamma < 0.0) throw validation_error("config: gamma must be >= 0");
  if (config.gamma_prime < 0.0) throw validation_error("config: gamma_prime must be >= 0");
  const TimeGrid& g = config.grid;
  if (g.n_t < 2 || g.n_tau < 2) throw validation_error("config: n_t and n_tau must be >= 2");
  if (!(g.t_end > g.t_start)) throw validation_error("config: t_end must exceed t_start");
  if (!(g.tau_max > 0.0)) throw validation_error("config: tau_max must be > 0");
  const double m = g.dt() / g.dtau();
  if (std::abs(m - std::llround(m)) > 1e-9 * std::max(1.0, m) || std::llround(m) < 1)
    throw validation_error(
        "config: dt must be a positive integer multiple of dtau (lattice alignment)");
  if (config.phonon) {
    if (config.phonon->alpha < 0.0) throw validation_error("config: phonon alpha must be >= 0");
    if (!(config.phonon->omega_b > 0.0)) throw validation_error("config: phonon omega_b must be > 0");
    if (config.phonon->temperature < 0.0)
      throw validation_error("config: phonon temperature must be >= 0");
  }
}

int trajectory_samples(const SimConfig& config) {
  const TimeGrid& g = config.grid;
  return (g.n_t - 1) * lattice_stride(g) + (g.n_tau - 1) + 1;
}

LMap liouvillian(const SimConfig& config, double t) {
  const Generator g = make_generator(config, nullptr);
  return g.matrix(t);
}

DensityMatrix ground_state() {
  DensityMatrix rho;
  rho(0, 0) = 1.0;
  return rho;
}

Trajectory evolve(const SimConfig& config, const DensityMatrix& rho0) {
  const Context ctx(config);
  const TimeGrid& g = config.grid;
  const double dtau = g.dtau();
  const int n = trajectory_samples(config);

  Trajectory traj;
  traj.times.resize(static_cast<std::size_t>(n));
  traj.rho.resize(static_cast<std::size_t>(n));
  traj.sigma_minus_exp.resize(static_cast<std::size_t>(n));
  traj.population.resize(static_cast<std::size_t>(n));

  LVec v = vec(rho0);
  for (int k = 0; k < n; ++k) {
    const double t = g.t_start + k * dtau;
    if (k > 0) ctx.advance_traj(g.t_start + (k - 1) * dtau, v);
    check_state(v, t, ctx.pos_tol);
    traj.times[static_cast<std::size_t>(k)] = t;
    traj.rho[static_cast<std::size_t>(k)] = unvec(v);
    traj.sigma_minus_exp[static_cast<std::size_t>(k)] = v[1];
    traj.population[static_cast<std::size_t>(k)] = v[3].real();
  }
  return traj;
}

namespace {

void check_sample(const Complex& gval, double t, double tau) {
  if (!std::isfinite(gval.real()) || !std::isfinite(gval.imag()) || std::abs(gval) > 1.0 + 1e-8) {
    std::ostringstream os;
    os << "regression diverged at t = " << t << ", tau = " << tau << ": |g| = " << std::abs(gval);
    throw numerical_error(os.str());
  }
}

LVec seed_vec(const DensityMatrix& rho) {
  // B(0) = rho sigma+ has columns ((rho_ge, rho_ee), (0, 0)).
  LVec b;
  b[0] = rho(0, 1);
  b[1] = rho(1, 1);
  return b;
}

void require_match(const SimConfig& config, const Trajectory& traj) {
  if (static_cast<int>(traj.times.size()) != trajectory_samples(config) ||
      std::abs(traj.times.front() - config.grid.t_start) > 1e-9)
    throw validation_error("regression: trajectory does not match the config grid");
}

}  // namespace

CorrelationGrid regression_grid(const SimConfig& config, const Trajectory& traj, int threads) {
  const Context ctx(config);
  require_match(config, traj);
  const TimeGrid& g = config.grid;
  const int m = lattice_stride(g);
  const double dtau = g.dtau();

  CorrelationGrid out;
  out.t.resize(static_cast<std::size_t>(g.n_t));
  out.tau.resize(static_cast<std::size_t>(g.n_tau));
  for (int j = 0; j < g.n_tau; ++j) out.tau[static_cast<std::size_t>(j)] = j * dtau;
  out.g.assign(static_cast<std::size_t>(g.n_t), {});

  run_rows(g.n_t, threads, [&](int i) {
    const double ti = g.t_start + i * g.dt();
    out.t[static_cast<std::size_t>(i)] = ti;
    auto& row = out.g[static_cast<std::size_t>(i)];
    row.resize(static_cast<std::size_t>(g.n_tau));
    LVec b = seed_vec(traj.rho[static_cast<std::size_t>(i * m)]);
    for (int j = 0; j < g.n_tau; ++j) {
      if (j > 0) ctx.advance_tau(ti + (j - 1) * dtau, b);
      row[static_cast<std::size_t>(j)] = b[1];
      check_sample(b[1], ti, j * dtau);
    }
  });
  return out;
}

WeightedCorrelation accumulate_correlation(const SimConfig& config, const Trajectory& traj,
                                           int threads) {
  const Context ctx(config);
  require_match(config, traj);
  const TimeGrid& g = config.grid;
  const int m = lattice_stride(g);
  const int nt = g.n_t, ntau = g.n_tau;
  const double dtau = g.dtau();
  const double dt = g.dt();

  // Quiet-entry index: first tau sample from which the generator stays frozen,
  // letting the row join the shared stride chain.
  const double t_free = ctx.always_const ? g.t_start : ctx.support_hi;
  std::vector<int> jq(static_cast<std::size_t>(nt));
  for (int i = 0; i < nt; ++i) {
    const double ti = g.t_start + i * dt;
    int j = 0;
    if (!ctx.always_const && ti < t_free)
      j = static_cast<int>(std::ceil((t_free - ti) / dtau - 1e-12));
    jq[static_cast<std::size_t>(i)] = std::min(j, ntau);  // ntau means: never joins
  }

  // Phase A: per-row leg up to the chain entry; record unweighted samples and
  // the injection vector. Rows are independent; slots keep determinism.
  std::vector<std::vector<Complex>> head(static_cast<std::size_t>(nt));
  std::vector<LVec> inject(static_cast<std::size_t>(nt));
  run_rows(nt, threads, [&](int i) {
    const double ti = g.t_start + i * dt;
    const int jqi = jq[static_cast<std::size_t>(i)];
    auto& row = head[static_cast<std::size_t>(i)];
    row.resize(static_cast<std::size_t>(std::min(jqi, ntau)));
    LVec b = seed_vec(traj.rho[static_cast<std::size_t>(i * m)]);
    for (int j = 0; j < jqi && j < ntau; ++j) {
      if (j > 0) ctx.advance_tau(ti + (j - 1) * dtau, b);
      row[static_cast<std::size_t>(j)] = b[1];
      check_sample(b[1], ti, j * dtau);
    }
    if (jqi < ntau) {
      if (jqi > 0) ctx.advance_tau(ti + (jqi - 1) * dtau, b);  // step onto the entry sample
      inject[static_cast<std::size_t>(i)] = b;
    }
  });

  // Phase B: ordered merge. Head samples first (ascending row), then the
  // single stride chain carrying the weighted sum of all joined rows.
  WeightedCorrelation out;
  out.a_total.assign(static_cast<std::size_t>(ntau), Complex{});
  out.a_coh.assign(static_cast<std::size_t>(ntau), Complex{});
  const auto weight = [&](int i) { return ((i == 0 || i == nt - 1) ? 0.5 : 1.0) * dt; };

  for (int i = 0; i < nt; ++i) {
    const auto& row = head[static_cast<std::size_t>(i)];
    const double w = weight(i);
    for (std::size_t j = 0; j < row.size(); ++j) out.a_total[j] += w * row[j];
  }
  // chain: V(j) = M V(j-1) + sum of injections entering at j (ascending rows)
  std::vector<std::vector<int>> entering(static_cast<std::size_t>(ntau));
  for (int i = 0; i < nt; ++i)
    if (jq[static_cast<std::size_t>(i)] < ntau)
      entering[static_cast<std::size_t>(jq[static_cast<std::size_t>(i)])].push_back(i);
  LVec v;
  for (int j = 0; j < ntau; ++j) {
    if (j > 0) v = apply(ctx.stride_tau, v);
    for (int i : entering[static_cast<std::size_t>(j)]) axpy(v, weight(i), inject[static_cast<std::size_t>(i)]);
    out.a_total[static_cast<std::size_t>(j)] += v[1];
  }

  for (int i = 0; i < nt; ++i) {
    const double w = weight(i);
    const Complex sp = std::conj(traj.sigma_minus_exp[static_cast<std::size_t>(i * m)]);
    const Complex* sm = traj.sigma_minus_exp.data() + i * m;
    for (int j = 0; j < ntau; ++j) out.a_coh[static_cast<std::size_t>(j)] += w * sp * sm[j];
  }

  double tail_max = 0.0;
  for (int j = 0; j < ntau; ++j)
    tail_max = std::max(tail_max, std::abs(out.a_total[static_cast<std::size_t>(j)] -
                                           out.a_coh[static_cast<std::size_t>(j)]));
  const double tail_last = std::abs(out.a_total[static_cast<std::size_t>(ntau - 1)] -
                                    out.a_coh[static_cast<std::size_t>(ntau - 1)]);
  out.tail_fraction = tail_max > 0.0 ? tail_last / tail_max : 0.0;
  // warn when the connected correlator is visibly truncated; the default
  // tau_max policy of 10/gamma_p keeps e^{-gamma_p tau_max} just under this
  out.tau_window_ok = out.tail_fraction <= 1e-4;
  return out;
}

}  // namespace prf
