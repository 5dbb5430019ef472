#include "sch/noise.hpp"

#include <cmath>
#include <stdexcept>

#include "sch/mobility.hpp"
#include "sch/potential.hpp"

namespace sch {

namespace {

double default_shape(double r) {
  return std::abs(r) >= 1.0 ? 0.0 : 1.0 - r * r;
}
double default_dshape(double r) { return std::abs(r) >= 1.0 ? 0.0 : -2.0 * r; }

void validate(const NoiseSpec& n) {
  if (!(n.sigma0 >= 0.0))
    throw std::invalid_argument("noise: sigma0 must be >= 0");
  if (!(n.p > 0.5))
    throw std::invalid_argument("noise: decay exponent p must exceed 1/2");
  if (n.K < 0) throw std::invalid_argument("noise: K must be >= 0");
}

}  // namespace

NoiseSpec NoiseSpec::standard(double sigma0, double p, int K) {
  NoiseSpec n;
  n.sigma0 = sigma0;
  n.p = p;
  n.K = K;
  validate(n);
  return n;
}

NoiseSpec NoiseSpec::custom_shape(std::function<double(double)> s,
                                  std::function<double(double)> ds,
                                  double sup_s, double lip_s, double sigma0,
                                  double p, int K) {
  NoiseSpec n;
  n.s_fn = std::move(s);
  n.ds_fn = std::move(ds);
  n.sup_s = sup_s;
  n.lip_s = lip_s;
  n.sigma0 = sigma0;
  n.p = p;
  n.K = K;
  validate(n);
  return n;
}

double NoiseSpec::shape(double r) const {
  if (eps > 0.0) r = std::clamp(r, -(1.0 - eps), 1.0 - eps);
  return s_fn ? s_fn(r) : default_shape(r);
}

double NoiseSpec::sum_sigma_sq() const {
  double t = 0.0;
  for (int k = 0; k < K; ++k) t += sigma(k) * sigma(k);
  return t;
}

double NoiseSpec::tail_sigma_sq() const {
  // sum_{k>=K} (k+1)^{-2p} <= int_K^inf x^{-2p} dx = K^{1-2p}/(2p-1)
  // K=0 keeps the leading term explicit: 1 + int_1^inf x^{-2p} dx
  const double inv = 1.0 / (2.0 * p - 1.0);
  if (K == 0) return sigma0 * sigma0 * (1.0 + inv);
  return sigma0 * sigma0 * std::pow(double(K), 1.0 - 2.0 * p) * inv;
}

double NoiseSpec::sup_shape() const {
  if (eps == 0.0) return sup_s;
  const double a = 1.0 - eps;
  double m = 0.0;
  for (int i = 0; i <= 20000; ++i) {
    const double r = -a + 2.0 * a * i / 20000.0;
    m = std::max(m, std::abs(s_fn ? s_fn(r) : default_shape(r)));
  }
  return m;
}

double NoiseSpec::lip_shape() const {
  if (eps == 0.0) return lip_s;
  const double a = 1.0 - eps;
  double m = 0.0;
  for (int i = 0; i <= 20000; ++i) {
    const double r = -a + 2.0 * a * i / 20000.0;
    m = std::max(m, std::abs(ds_fn ? ds_fn(r) : default_dshape(r)));
  }
  return m;
}

double NoiseSpec::C_G() const {
  const double w1 = std::max(sup_shape(), lip_shape());
  return w1 * w1 * sum_sigma_sq() +
         std::max(1.0, lip_s) * std::max(1.0, lip_s) * tail_sigma_sq();
}

NoiseSpec truncate_eps(const NoiseSpec& n, double eps) {
  if (!(eps > 0.0) || !(eps < 0.25))
    throw std::invalid_argument("eps must lie in (0, 1/4)");
  NoiseSpec t = n;
  t.eps = eps;
  return t;
}

Eigen::ArrayXd apply_G_brownian(const NoiseSpec& n,
                                const Eigen::ArrayXd& phi_vals,
                                const Eigen::VectorXd& dW) {
  if (dW.size() != n.K)
    throw std::invalid_argument("apply_G: expected one increment per mode");
  Eigen::ArrayXd shp(phi_vals.size());
  for (Eigen::Index i = 0; i < phi_vals.size(); ++i)
    shp[i] = n.shape(phi_vals[i]);
  double amp = 0.0;
  for (int k = 0; k < n.K; ++k) amp += n.sigma(k) * dW[k];
  return shp * amp;
}

Eigen::ArrayXd apply_G_increment(const NoiseSpec& n,
                                 const Eigen::ArrayXd& phi_vals, double dt,
                                 const Eigen::VectorXd& xi) {
  return apply_G_brownian(n, phi_vals, std::sqrt(dt) * xi);
}

NoiseCompat compat_constants(const NoiseSpec& n, const PotentialSpec& pot,
                             const MobilitySpec& mob, int grid_n) {
  if (!mob.degenerate())
    throw std::invalid_argument(
        "compat_constants: requires a degenerate mobility (M'' = 1/m is "
        "integrable against the shape only when m vanishes at +-1)");

  // endpoint-clustered sampling of the open interval
  double unit_F = 0.0, unit_M = 0.0;
  double near_F = 0.0, near_M = 0.0;  // values at the innermost probes
  for (int i = 0; i < grid_n; ++i) {
    const double r = -std::cos(M_PI * (i + 0.5) / grid_n);
    const double s = n.shape(r);
    const double s2 = s * s;
    unit_F = std::max(unit_F, s2 * std::abs(eval_d2F(pot, r)));
    unit_M = std::max(unit_M, s2 / mob.m(r));
  }
  // divergence probes: the sups must have stabilised strictly inside
  for (int j = 6; j <= 12; ++j) {
    const double r = 1.0 - std::pow(10.0, -j);
    const double s2 = n.shape(r) * n.shape(r);
    near_F = std::max(near_F, s2 * std::abs(eval_d2F(pot, r)));
    near_M = std::max(near_M, s2 / mob.m(r));
  }
  if (near_F > 10.0 * unit_F + 1.0 || near_M > 10.0 * unit_M + 1.0)
    throw std::domain_error(
        "compat_constants: shape-potential or shape-mobility product "
        "unbounded near +-1");

  const double w1 = std::max(n.sup_shape(), n.lip_shape());
  NoiseCompat c;
  c.unit_F = unit_F;
  c.unit_M = unit_M;
  c.supW1k.resize(n.K);
  c.supFk.resize(n.K);
  c.supMk.resize(n.K);
  for (int k = 0; k < n.K; ++k) {
    const double s2 = n.sigma(k) * n.sigma(k);
    c.supW1k[k] = s2 * w1 * w1;
    c.supFk[k] = s2 * unit_F;
    c.supMk[k] = s2 * unit_M;
  }
  c.L_G = (w1 * w1 + unit_F + unit_M) * (n.sum_sigma_sq() + n.tail_sigma_sq());
  return c;
}

double ito_correction_F(const NoiseSpec& n, const RegularizedPotential& reg,
                        const Eigen::ArrayXd& phi_vals, double weight) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < phi_vals.size(); ++i) {
    const double s = n.shape(phi_vals[i]);
    acc += reg.d2f(phi_vals[i]) * s * s;
  }
  return acc * weight * n.sum_sigma_sq();
}

double ito_correction_M(const NoiseSpec& n, const TruncatedMobility& tm,
                        const Eigen::ArrayXd& phi_vals, double weight) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < phi_vals.size(); ++i) {
    const double s = n.shape(phi_vals[i]);
    acc += s * s / tm.m(phi_vals[i]);
  }
  return acc * weight * n.sum_sigma_sq();
}

}  // namespace sch
