#include "sch/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sch/rng.hpp"

namespace sch {

InitSpec InitSpec::constant(double value) {
  InitSpec s;
  s.kind = InitKind::Constant;
  s.value = value;
  return s;
}

InitSpec InitSpec::cosine(double amplitude, int mode) {
  InitSpec s;
  s.kind = InitKind::Cosine;
  s.amplitude = amplitude;
  s.mode = mode;
  return s;
}

InitSpec InitSpec::uniform_random(double amplitude) {
  InitSpec s;
  s.kind = InitKind::UniformRandom;
  s.amplitude = amplitude;
  return s;
}

SpectralField initial_field(const GridPtr& g, const InitSpec& init,
                            uint64_t seed) {
  SpectralField f = zero_field(g);
  switch (init.kind) {
    case InitKind::Constant:
      f.a[0] = init.value * std::sqrt(g->volume());
      break;
    case InitKind::Cosine: {
      if (init.mode < 0 || init.mode >= g->n)
        throw std::invalid_argument("init: cosine mode outside the retained range");
      f.a[g->sorted_of_tensor[init.mode]] =
          init.amplitude / g->norm[0][init.mode];
      break;
    }
    case InitKind::UniformRandom: {
      const int n1 = g->dim == 2 ? g->n : 1;
      for (int j1 = 0; j1 < n1; ++j1)
        for (int j0 = 0; j0 < g->n; ++j0) {
          const double u = philox_uniform_sym(seed, kStreamInit, j0, j1, 2);
          const double al =
              g->axis_alpha[0][j0] + (g->dim == 2 ? g->axis_alpha[1][j1] : 0.0);
          f.a[g->sorted_of_tensor[j0 + g->n * j1]] =
              init.amplitude * u * std::pow(1.0 + al, -1.5);
        }
      break;
    }
  }
  return f;
}

double SolverConfig::effective_kappa() const {
  return kappa >= 0.0 ? kappa : mob.sup_m();
}

double SolverConfig::mob_at(double r) const {
  return tmob ? tmob->m(r) : mob.m(r);
}

void validate(const SolverConfig& c) {
  if (!c.grid) throw std::invalid_argument("config: grid missing");
  if (!(c.T > 0.0) || !(c.dt > 0.0))
    throw std::invalid_argument("config: T and dt must be positive");
  const double ratio = c.T / c.dt;
  if (std::abs(ratio - std::llround(ratio)) > 1e-6 * std::max(1.0, ratio))
    throw std::invalid_argument(
        "config: T must be an integer number of dt steps");
  if (c.record_every < 1)
    throw std::invalid_argument("config: record_every must be >= 1");
  if (c.reg.mode == RegularizedPotential::Mode::Lambda) {
    if (c.tmob)
      throw std::invalid_argument(
          "pipeline: the lambda-smoothed potential pairs with an untruncated "
          "mobility");
    if (c.mob.degenerate())
      throw std::invalid_argument(
          "pipeline: the lambda-smoothed potential requires a mobility "
          "bounded away from zero");
    if (c.noise.eps > 0.0)
      throw std::invalid_argument(
          "pipeline: the lambda-smoothed potential pairs with the untruncated "
          "noise shape");
  } else {
    if (!c.tmob)
      throw std::invalid_argument(
          "pipeline: the eps-truncated potential requires the matching "
          "truncated mobility");
    if (c.tmob->eps != c.reg.param)
      throw std::invalid_argument(
          "pipeline: mobility and potential must share the truncation eps");
    if (c.noise.eps != c.reg.param)
      throw std::invalid_argument(
          "pipeline: noise and potential must share the truncation eps");
    const SpectralField phi0 = initial_field(c.grid, c.init, c.seed);
    const double sup = to_values(phi0).abs().maxCoeff();
    if (!(sup < 1.0 - c.reg.param))
      throw std::invalid_argument(
          "pipeline: initial datum needs sup|phi0| < 1 - eps, got sup = " +
          std::to_string(sup));
  }
}

SpectralField chemical_potential(const SpectralField& phi,
                                 const RegularizedPotential& reg) {
  const Eigen::ArrayXd vals = to_values(phi);
  Eigen::ArrayXd fp(vals.size());
  for (Eigen::Index i = 0; i < vals.size(); ++i) fp[i] = reg.df(vals[i]);
  SpectralField mu = to_coeffs(phi.grid, fp);
  mu.a += phi.grid->alpha.cwiseProduct(phi.a);
  return mu;
}

SpectralField drift(const SpectralField& phi, const RegularizedPotential& reg,
                    const std::function<double(double)>& m_of_r) {
  return degenerate_flux(phi, chemical_potential(phi, reg), m_of_r);
}

double energy(const SpectralField& phi, const RegularizedPotential& reg) {
  const Eigen::ArrayXd vals = to_values(phi);
  double pot = 0.0;
  for (Eigen::Index i = 0; i < vals.size(); ++i) pot += reg.f(vals[i]);
  return 0.5 * phi.h1_seminorm_sq() + phi.grid->w * pot;
}

Eigen::VectorXd NoiseDraws::increment(long i) const {
  Eigen::VectorXd dW(K);
  const double rt = std::sqrt(base_dt);
  for (int k = 0; k < K; ++k)
    dW[k] = rt * philox_normal(seed, path, static_cast<uint64_t>(i),
                               static_cast<uint64_t>(k), 0);
  return dW;
}

Eigen::VectorXd NoiseDraws::increment_sum(long i0, long i1) const {
  if (i1 - i0 <= 1) return increment(i0);
  const long mid = i0 + (i1 - i0) / 2;
  return increment_sum(i0, mid) + increment_sum(mid, i1);
}

void step(PathState& st, const SolverConfig& c, double dt,
          const Eigen::VectorXd& dW) {
  const SpectralGrid& g = *c.grid;
  const Eigen::ArrayXd vals = to_values(st.phi);
  const double sup = vals.abs().maxCoeff();
  if (!std::isfinite(sup) || sup > 1e6)
    throw std::runtime_error("blow-up guard: sup|phi| = " +
                             std::to_string(sup) +
                             " at t = " + std::to_string(st.t));

  Eigen::ArrayXd fp(vals.size());
  for (Eigen::Index i = 0; i < vals.size(); ++i) fp[i] = c.reg.df(vals[i]);
  SpectralField mu = to_coeffs(st.phi.grid, fp);
  mu.a += g.alpha.cwiseProduct(st.phi.a);

  const auto gmu = grad_values(mu);
  Eigen::ArrayXd mvals(vals.size());
  for (Eigen::Index i = 0; i < vals.size(); ++i) mvals[i] = c.mob_at(vals[i]);

  std::array<Eigen::ArrayXd, 2> p;
  p[0] = mvals * gmu[0];
  Eigen::ArrayXd gmu_sq = gmu[0].square();
  if (g.dim == 2) {
    p[1] = mvals * gmu[1];
    gmu_sq += gmu[1].square();
  }
  const SpectralField dr = flux_divergence(st.phi.grid, p);

  // left-endpoint ledger tallies
  st.dissipation_acc += dt * g.w * (mvals * gmu_sq).sum();
  st.grad_int_acc += dt * st.phi.h1_seminorm_sq();

  const bool noisy = c.noise.sigma0 > 0.0 && c.noise.K > 0;
  Eigen::VectorXd eta;
  if (noisy) {
    st.ito_F_acc += dt * ito_correction_F(c.noise, c.reg, vals, g.w);
    if (c.tmob)
      st.ito_M_acc += dt * ito_correction_M(c.noise, *c.tmob, vals, g.w);
    Eigen::ArrayXd svals(vals.size());
    for (Eigen::Index i = 0; i < vals.size(); ++i)
      svals[i] = c.noise.shape(vals[i]);
    const SpectralField sproj = to_coeffs(st.phi.grid, svals);
    st.noise_grad_acc += dt * c.noise.sum_sigma_sq() * sproj.h1_seminorm_sq();

    const SpectralField gdw =
        to_coeffs(st.phi.grid, apply_G_brownian(c.noise, vals, dW));
    st.stoch_acc += mu.a.dot(gdw.a);
    eta = gdw.a;
  } else {
    eta = Eigen::VectorXd::Zero(g.num_modes());
  }

  const double kap = c.effective_kappa();
  for (int m2 = 0; m2 < g.num_modes(); ++m2) {
    const double inc = (dt * dr.a[m2] + eta[m2]) /
                       (1.0 + dt * kap * g.alpha[m2] * g.alpha[m2]);
    st.phi.a[m2] += inc;
    // the drift and the stabilizer leave mode 0 alone, so this is the
    // noise contribution verbatim; the shadow stays bitwise in sync
    if (m2 == 0) st.mass_ledger += inc;
  }
  if (!st.phi.a.allFinite())
    throw std::runtime_error("blow-up guard: non-finite coefficients at t = " +
                             std::to_string(st.t));
}

namespace {

StateRecord make_record(const PathState& st, const SolverConfig& c) {
  const SpectralGrid& g = *c.grid;
  StateRecord r;
  r.t = st.t;
  r.mass = st.phi.mean();
  r.dissipation_acc = st.dissipation_acc;
  r.grad_int_acc = st.grad_int_acc;
  r.ito_F_acc = st.ito_F_acc;
  r.ito_M_acc = st.ito_M_acc;
  r.noise_grad_acc = st.noise_grad_acc;
  r.stoch_acc = st.stoch_acc;
  r.grad_norm_sq = st.phi.h1_seminorm_sq();

  const Eigen::ArrayXd vals = to_values(st.phi);
  r.sup_abs_phi = vals.abs().maxCoeff();
  double conf = 0.0, ent = 0.0, fsum = 0.0, fabs_sum = 0.0;
  for (Eigen::Index i = 0; i < vals.size(); ++i) {
    const double v = vals[i];
    const double ex = std::max(std::abs(v) - 1.0, 0.0);
    conf += ex * ex;
    if (c.tmob) ent += c.tmob->M(v);
    const double fv = c.reg.f(v);
    fsum += fv;
    fabs_sum += std::abs(fv);
  }
  r.confinement_l2 = std::sqrt(g.w * conf);
  r.entropy = c.tmob ? g.w * ent : 0.0;
  r.energy = 0.5 * r.grad_norm_sq + g.w * fsum;
  r.F_l1 = g.w * fabs_sum;
  if (c.keep_fields) r.phi = st.phi.a;
  return r;
}

}  // namespace

PathResult simulate_path(const SolverConfig& c, uint64_t path_index,
                         double base_dt) {
  validate(c);
  if (base_dt <= 0.0) base_dt = c.dt;
  const double q_real = c.dt / base_dt;
  const long q = std::llround(q_real);
  if (q < 1 || std::abs(q_real - q) > 1e-9 * std::max<double>(1, q))
    throw std::invalid_argument(
        "simulate: dt must be an integer multiple of the base step");
  const long steps = std::llround(c.T / c.dt);

  PathState st;
  st.phi = initial_field(c.grid, c.init, c.seed);
  st.mass_ledger = st.phi.a[0];
  st.sup_abs_mass = std::abs(st.phi.mean());

  const NoiseDraws nd{c.seed, path_index, base_dt, c.noise.K};
  const bool noisy = c.noise.sigma0 > 0.0 && c.noise.K > 0;

  PathResult out;
  out.records.reserve(static_cast<size_t>(steps / c.record_every) + 2);
  out.records.push_back(make_record(st, c));

  Eigen::VectorXd dW = Eigen::VectorXd::Zero(std::max(c.noise.K, 1));
  for (long i = 0; i < steps; ++i) {
    if (noisy)
      dW = q == 1 ? nd.increment(i) : nd.increment_sum(i * q, (i + 1) * q);
    step(st, c, c.dt, dW);
    st.t = (i + 1) * c.dt;
    st.step_index = i + 1;
    st.sup_abs_mass = std::max(st.sup_abs_mass, std::abs(st.phi.mean()));
    if ((i + 1) % c.record_every == 0 || i + 1 == steps)
      out.records.push_back(make_record(st, c));
  }
  out.final_state = std::move(st);
  return out;
}

}  // namespace sch
