#include "sch/diagnostics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iomanip>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace sch {

namespace {

std::pair<double, double> mean_se(const std::vector<double>& xs) {
  const int n = static_cast<int>(xs.size());
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= n;
  if (n < 2) return {mean, 0.0};
  double var = 0.0;
  for (double x : xs) var += (x - mean) * (x - mean);
  var /= (n - 1);
  return {mean, std::sqrt(var / n)};
}

// records share their layout across paths; locate once by time
int find_record(const std::vector<StateRecord>& recs, double t, double tol) {
  for (int i = 0; i < static_cast<int>(recs.size()); ++i)
    if (std::abs(recs[i].t - t) <= tol) return i;
  throw std::logic_error("mc: no record at a requested checkpoint");
}

bool has_noise(const SolverConfig& c) {
  return c.noise.sigma0 > 0.0 && c.noise.K > 0;
}

std::string num(double x) {
  std::ostringstream os;
  os << std::setprecision(6) << std::scientific << x;
  return os.str();
}

}  // namespace

std::vector<PathResult> run_paths(const SolverConfig& c, int paths,
                                  int threads, double base_dt) {
  if (paths < 1) throw std::invalid_argument("mc: paths must be >= 1");
  validate(c);
  std::vector<PathResult> out(paths);
  const int nt = std::max(1, std::min(threads, paths));
  if (nt == 1) {
    for (int p = 0; p < paths; ++p)
      out[p] = simulate_path(c, static_cast<uint64_t>(p), base_dt);
    return out;
  }
  std::atomic<int> next{0};
  std::mutex mtx;
  std::exception_ptr err;
  auto work = [&] {
    for (;;) {
      const int p = next.fetch_add(1);
      if (p >= paths) return;
      try {
        out[p] = simulate_path(c, static_cast<uint64_t>(p), base_dt);
      } catch (...) {
        std::lock_guard<std::mutex> lk(mtx);
        if (!err) err = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(nt);
  for (int i = 0; i < nt; ++i) pool.emplace_back(work);
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
  return out;
}

McReport mc_energy_inequality(const SolverConfig& c, int paths,
                              const std::vector<double>& t_checkpoints,
                              int threads) {
  if (paths < 32)
    throw std::invalid_argument("mc: energy check needs at least 32 paths");
  if (t_checkpoints.empty())
    throw std::invalid_argument("mc: energy check needs a checkpoint");
  const long steps = std::llround(c.T / c.dt);
  std::vector<long> kc;
  for (double t : t_checkpoints) {
    if (t < -1e-12 || t > c.T * (1.0 + 1e-9))
      throw std::invalid_argument("mc: checkpoint outside [0, T]");
    const long k = std::llround(t / c.dt);
    if (std::abs(k * c.dt - t) > 1e-9 * std::max(1.0, c.T))
      throw std::invalid_argument("mc: checkpoints must sit on the dt grid");
    kc.push_back(std::min(k, steps));
  }

  long g = 0;
  for (long k : kc) g = std::gcd(g, k);
  if (g == 0) g = steps;

  // level A at dt, level B at dt/2, both consuming the same base
  // increments; their residual drift calibrates the scheme allowance
  SolverConfig ca = c;
  ca.record_every = static_cast<int>(g);
  ca.keep_fields = false;
  SolverConfig cb = c;
  cb.dt = 0.5 * c.dt;
  cb.record_every = static_cast<int>(2 * g);
  cb.keep_fields = false;
  const double base_dt = 0.5 * c.dt;
  const auto runs_a = run_paths(ca, paths, threads, base_dt);
  const auto runs_b = run_paths(cb, paths, threads, base_dt);

  const double cg = has_noise(c) ? c.noise.C_G() : 0.0;
  const auto& rec0 = runs_a[0].records[0];
  const double e0 = 0.5 * rec0.grad_norm_sq + rec0.F_l1;

  // per-path statistic: everything the checkpoint inequality moves to one
  // side, so across-path mean and standard error come from one sample
  auto statistic = [cg](const StateRecord& r) {
    return 0.5 * r.grad_norm_sq + r.F_l1 + r.dissipation_acc -
           0.5 * cg * r.grad_int_acc - 0.5 * r.ito_F_acc;
  };

  McReport rep;
  rep.paths = paths;
  rep.t_checkpoints = t_checkpoints;
  rep.pass = true;
  std::ostringstream det;
  det << "energy inequality: paths=" << paths << " C_G=" << num(cg)
      << " E(0) terms=" << num(e0) << "\n";

  double sup_grad = 0.0, sup_fl1 = 0.0;
  std::vector<double> xs(paths);
  for (size_t ci = 0; ci < t_checkpoints.size(); ++ci) {
    const double t = t_checkpoints[ci];
    const int ia = find_record(runs_a[0].records, t, 0.25 * c.dt);
    const int ib = find_record(runs_b[0].records, t, 0.25 * cb.dt);
    double mg = 0.0, mf = 0.0;
    for (int p = 0; p < paths; ++p) {
      const auto& r = runs_a[p].records[ia];
      xs[p] = statistic(r);
      mg += r.grad_norm_sq;
      mf += r.F_l1;
    }
    const auto [ma, se] = mean_se(xs);
    for (int p = 0; p < paths; ++p) xs[p] = statistic(runs_b[p].records[ib]);
    const double mb = mean_se(xs).first;
    const double res_a = ma - e0;
    const double res_b = mb - e0;
    const double allow = 4.0 * std::abs(res_a - res_b) + 1e-12;
    const bool ok = res_a <= 3.0 * se + allow;
    rep.residual.push_back(res_a);
    rep.residual_se.push_back(se);
    rep.allowance.push_back(allow);
    rep.pass = rep.pass && ok;
    sup_grad = std::max(sup_grad, mg / paths);
    sup_fl1 = std::max(sup_fl1, mf / paths);
    det << "  t=" << t << " residual=" << num(res_a) << " se=" << num(se)
        << " allowance=" << num(allow) << (ok ? "  ok" : "  VIOLATED")
        << "\n";
  }

  // named estimates at the last checkpoint
  const int last = find_record(runs_a[0].records, t_checkpoints.back(),
                               0.25 * c.dt);
  auto add_q = [&](const std::string& name, auto field) {
    for (int p = 0; p < paths; ++p) xs[p] = field(runs_a[p].records[last]);
    const auto [m, s] = mean_se(xs);
    rep.quantities.push_back({name, m, s});
  };
  add_q("grad_sq_half", [](const StateRecord& r) {
    return 0.5 * r.grad_norm_sq;
  });
  add_q("F_l1", [](const StateRecord& r) { return r.F_l1; });
  add_q("dissipation", [](const StateRecord& r) {
    return r.dissipation_acc;
  });
  add_q("grad_int", [](const StateRecord& r) { return r.grad_int_acc; });
  add_q("ito_F", [](const StateRecord& r) { return r.ito_F_acc; });

  // the running-sup variant of the left side, for the record
  const double sup_form = 0.5 * sup_grad + sup_fl1 +
                          rep.quantities[2].mean -
                          0.5 * cg * rep.quantities[3].mean -
                          0.5 * rep.quantities[4].mean - e0;
  det << "  sup-form residual over checkpoints (diagnostic): "
      << num(sup_form) << "\n";
  rep.detail = det.str();
  return rep;
}

McReport mass_moment_check(const SolverConfig& c, int paths, int ell,
                           int threads) {
  if (ell != 2 && ell != 4 && ell != 8)
    throw std::invalid_argument("mass moment: ell must be 2, 4 or 8");
  const auto runs = run_paths(c, paths, threads);

  std::vector<double> xs(paths);
  for (int p = 0; p < paths; ++p)
    xs[p] = std::pow(runs[p].final_state.sup_abs_mass, ell);
  const auto [mean, se] = mean_se(xs);

  // Budget for E sup_t |(phi)_O|^ell. The mean value is its initial value
  // plus a martingale: testing the update against the constant function
  // leaves only the noise term, whose variance per unit time is
  //   sum_k sigma_k^2 (int P g_k(phi))^2 / |O|^2 <= C_G / |O|
  // by Cauchy-Schwarz, (int g)^2 <= |O| int g^2 <= |O|^2 sup g^2, and
  // sup_s^2 sum sigma_k^2 <= C_G. Time-change the martingale to a Brownian
  // motion run for V = C_G T / |O|; the reflection principle gives
  //   E sup |B|^ell <= 2 E |B_V|^ell = 2 (ell-1)!! V^{ell/2},
  // and (a+b)^ell <= 2^{ell-1} (a^ell + b^ell) assembles the two parts.
  const double vol = c.grid->volume();
  const double m0 = std::abs(runs[0].records[0].mass);
  const double cg = has_noise(c) ? c.noise.C_G() : 0.0;
  const double dfact = ell == 2 ? 1.0 : ell == 4 ? 3.0 : 105.0;
  const double v = cg * c.T / vol;
  const double budget = std::pow(2.0, ell - 1) *
                        (std::pow(m0, ell) +
                         2.0 * dfact * std::pow(v, 0.5 * ell));

  McReport rep;
  rep.paths = paths;
  rep.t_checkpoints = {c.T};
  rep.residual = {mean - budget};
  rep.residual_se = {se};
  rep.allowance = {0.0};
  rep.pass = mean <= budget + 3.0 * se;
  rep.quantities.push_back({"sup_mass_moment", mean, se});
  rep.quantities.push_back({"budget", budget, 0.0});
  rep.quantities.push_back({"margin", budget - mean, se});
  std::ostringstream det;
  det << "mass moments: ell=" << ell << " estimate=" << num(mean)
      << " se=" << num(se) << " budget=" << num(budget)
      << (rep.pass ? "  ok" : "  VIOLATED") << "\n";
  rep.detail = det.str();
  return rep;
}

RateTable confinement_scaling(const SolverConfig& base,
                              const std::vector<double>& eps_list, int paths,
                              int threads) {
  if (eps_list.size() < 3)
    throw std::invalid_argument(
        "confinement: need at least 3 epsilon values");
  for (size_t i = 0; i + 1 < eps_list.size(); ++i)
    if (!(eps_list[i + 1] < eps_list[i]))
      throw std::invalid_argument(
          "confinement: epsilon values must decrease");
  if (base.reg.mode != RegularizedPotential::Mode::Eps)
    throw std::invalid_argument(
        "confinement: base config must use the truncation pipeline");

  RateTable rt;
  rt.levels = eps_list;
  std::ostringstream det;
  for (double e : eps_list) {
    SolverConfig c = base;
    c.reg = build_eps_reg(base.reg.origin, e);
    c.tmob = build_m_eps(base.mob, e);
    c.noise = truncate_eps(base.noise, e);
    const auto runs = run_paths(c, paths, threads);
    double metric = 0.0;
    const size_t nrec = runs[0].records.size();
    for (size_t r = 0; r < nrec; ++r) {
      double s = 0.0;
      for (int p = 0; p < paths; ++p) {
        const double cl = runs[p].records[r].confinement_l2;
        s += cl * cl;
      }
      metric = std::max(metric, std::sqrt(s / paths));
    }
    rt.errors.push_back(metric);
    det << "  eps=" << e << " metric=" << num(metric) << "\n";
  }

  rt.vacuous = std::all_of(rt.errors.begin(), rt.errors.end(),
                           [](double m) { return m <= 1e-8; });
  rt.monotone = true;
  for (size_t i = 0; i + 1 < rt.errors.size(); ++i)
    rt.monotone = rt.monotone && rt.errors[i + 1] <= rt.errors[i];
  if (rt.vacuous) {
    rt.slope = 0.0;
    rt.pass = true;
    det << "  vacuously confined\n";
  } else {
    rt.slope = fit_loglog_slope(eps_list, rt.errors);
    rt.pass = rt.slope >= 0.35;
    det << "  slope=" << rt.slope << (rt.pass ? "  ok" : "  TOO FLAT")
        << "\n";
  }
  rt.detail = det.str();
  return rt;
}

FormResidual degenerate_form_residual(const SolverConfig& c,
                                      const PathResult& run,
                                      uint64_t path_index,
                                      const SpectralField& v) {
  const auto& recs = run.records;
  const long steps = std::llround(c.T / c.dt);
  if (static_cast<long>(recs.size()) != steps + 1 || recs[0].phi.size() == 0)
    throw std::invalid_argument(
        "form residual: needs a run stored with keep_fields and "
        "record_every = 1");
  const auto& g = *c.grid;
  if (!v.grid || v.grid->n != g.n || v.grid->dim != g.dim ||
      v.grid->length != g.length)
    throw std::invalid_argument(
        "form residual: test field lives on a different grid");

  const bool noisy = has_noise(c);
  const NoiseDraws draws{c.seed, path_index, c.dt, c.noise.K};
  const double kap = c.effective_kappa();

  const auto gv = grad_values(v);
  const Eigen::ArrayXd lv = to_values(laplacian(v));
  const int npts = g.num_points();

  double acc_nd = 0.0, acc_d = 0.0, acc_stab = 0.0, acc_noise = 0.0;
  for (long i = 0; i < steps; ++i) {
    const SpectralField phi{c.grid, recs[i].phi};
    const Eigen::ArrayXd pv = to_values(phi);
    const SpectralField mu = chemical_potential(phi, c.reg);
    const auto gmu = grad_values(mu);
    const auto gphi = grad_values(phi);
    const Eigen::ArrayXd lphi = to_values(laplacian(phi));

    double bnd = 0.0, bd = 0.0;
    for (int x = 0; x < npts; ++x) {
      const double r = pv[x];
      const double m = c.mob_at(r);
      const double dm = c.tmob ? c.tmob->dm(r) : c.mob.dm(r);
      double mu_v = gmu[0][x] * gv[0][x];
      double phi_v = gphi[0][x] * gv[0][x];
      if (g.dim == 2) {
        mu_v += gmu[1][x] * gv[1][x];
        phi_v += gphi[1][x] * gv[1][x];
      }
      bnd += m * mu_v;
      bd += lphi[x] * (dm * phi_v + m * lv[x]) + m * c.reg.d2f(r) * phi_v;
    }
    acc_nd += c.dt * g.w * bnd;
    acc_d += c.dt * g.w * bd;

    // the biharmonic stabilizer acts on the step increment: the update is
    // (a' - a)(1 + dt kap alpha^2) = dt drift + noise, mode by mode
    const Eigen::VectorXd& anext = recs[i + 1].phi;
    double stab = 0.0;
    for (int m2 = 0; m2 < g.num_modes(); ++m2)
      stab += g.alpha[m2] * g.alpha[m2] * (anext[m2] - recs[i].phi[m2]) *
              v.a[m2];
    acc_stab += c.dt * kap * stab;

    if (noisy) {
      const Eigen::VectorXd dw = draws.increment(i);
      const SpectralField eta =
          to_coeffs(c.grid, apply_G_brownian(c.noise, pv, dw));
      acc_noise += eta.a.dot(v.a);
    }
  }

  const double inc = (recs[steps].phi - recs[0].phi).dot(v.a);
  FormResidual fr;
  fr.res_nd = inc + acc_nd + acc_stab - acc_noise;
  fr.res_d = inc + acc_d + acc_stab - acc_noise;
  fr.gap = std::abs(fr.res_d - fr.res_nd);
  return fr;
}

StudyAxis study_axis_of(const std::string& name) {
  if (name == "n") return StudyAxis::N;
  if (name == "dt") return StudyAxis::Dt;
  if (name == "lambda") return StudyAxis::Lambda;
  if (name == "eps") return StudyAxis::Eps;
  throw std::invalid_argument("study: unknown axis '" + name +
                              "', expected n, dt, lambda or eps");
}

SolverConfig config_at_level(const SolverConfig& base, StudyAxis axis,
                             double value) {
  SolverConfig c = base;
  switch (axis) {
    case StudyAxis::N: {
      const int n = static_cast<int>(std::llround(value));
      if (n < 1 || std::abs(value - n) > 1e-9)
        throw std::invalid_argument(
            "study: n levels must be positive integers");
      const double over =
          static_cast<double>(base.grid->ncol) / base.grid->n;
      c.grid = build_grid(base.grid->dim, base.grid->length, n, over);
      break;
    }
    case StudyAxis::Dt: {
      if (!(value > 0.0))
        throw std::invalid_argument("study: dt levels must be positive");
      c.dt = value;
      break;
    }
    case StudyAxis::Lambda: {
      if (base.reg.mode != RegularizedPotential::Mode::Lambda)
        throw std::invalid_argument(
            "study: lambda axis needs the smoothed-potential pipeline");
      c.reg = build_lambda_reg(base.reg.origin, value);
      break;
    }
    case StudyAxis::Eps: {
      if (base.reg.mode != RegularizedPotential::Mode::Eps)
        throw std::invalid_argument(
            "study: eps axis needs the truncation pipeline");
      c.reg = build_eps_reg(base.reg.origin, value);
      c.tmob = build_m_eps(base.mob, value);
      c.noise = truncate_eps(base.noise, value);
      break;
    }
  }
  return c;
}

RateTable convergence_study(StudyAxis axis, const std::vector<double>& levels,
                            const SolverConfig& base, int paths,
                            int threads) {
  if (levels.size() < 3)
    throw std::invalid_argument("study: need at least 3 levels");

  double base_dt = 0.0;
  if (axis == StudyAxis::Dt)
    base_dt = *std::min_element(levels.begin(), levels.end());

  std::vector<std::vector<PathResult>> runs;
  runs.reserve(levels.size());
  for (double v : levels) {
    SolverConfig c = config_at_level(base, axis, v);
    const long steps = std::llround(c.T / c.dt);
    c.record_every = static_cast<int>(std::max<long>(1, steps));
    c.keep_fields = false;
    runs.push_back(run_paths(c, paths, threads, base_dt));
  }

  RateTable rt;
  rt.levels = levels;
  std::ostringstream det;
  for (size_t i = 0; i + 1 < levels.size(); ++i) {
    double err = 0.0;
    for (int p = 0; p < paths; ++p) {
      const auto& fa = runs[i][p].final_state.phi;
      const auto& fb = runs[i + 1][p].final_state.phi;
      if (fa.grid->n == fb.grid->n)
        err += (fa.a - fb.a).norm();
      else if (fa.grid->n < fb.grid->n)
        err += nested_l2_diff(fb, fa);
      else
        err += nested_l2_diff(fa, fb);
    }
    rt.errors.push_back(err / paths);
    det << "  level " << levels[i] << " -> " << levels[i + 1] << ": error="
        << num(rt.errors.back()) << "\n";
  }

  std::vector<double> xs(levels.begin(), levels.end() - 1);
  rt.slope = fit_loglog_slope(xs, rt.errors);
  rt.monotone = true;
  for (size_t i = 0; i + 1 < rt.errors.size(); ++i)
    rt.monotone = rt.monotone && rt.errors[i + 1] <= rt.errors[i];
  rt.pass = true;
  det << "  slope=" << rt.slope
      << (rt.monotone ? "" : "  (non-monotone, inspect)") << "\n";
  rt.detail = det.str();
  return rt;
}

double fit_loglog_slope(const std::vector<double>& x,
                        const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("slope fit: need matching lists, length 2+");
  const int n = static_cast<int>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (int i = 0; i < n; ++i) {
    if (!(x[i] > 0.0))
      throw std::invalid_argument("slope fit: abscissae must be positive");
    const double lx = std::log(x[i]);
    const double ly = std::log(std::max(y[i], 1e-300));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double denom = n * sxx - sx * sx;
  if (std::abs(denom) < 1e-30)
    throw std::invalid_argument("slope fit: degenerate abscissae");
  return (n * sxy - sx * sy) / denom;
}

}  // namespace sch
