#pragma once
// Superposition noise: countably many independent Brownian modes, the k-th
// acting through g_k(r) = sigma_k * s(r) with a shared Lipschitz shape s
// and summable amplitudes sigma_k = sigma0 (k+1)^(-p), p > 1/2. Only the
// first K modes are simulated; the discarded tail enters the constants
// through an analytic bound.

#include <Eigen/Dense>
#include <functional>

namespace sch {

struct PotentialSpec;
struct MobilitySpec;
struct RegularizedPotential;
struct TruncatedMobility;

struct NoiseSpec {
  double sigma0 = 0.0;
  double p = 1.0;  // amplitude decay exponent, > 1/2
  int K = 16;      // simulated modes
  double eps = 0.0;  // > 0: shape frozen at +-(1-eps)

  // shape on [-1,1] with s(+-1) = 0, extended by its endpoint values;
  // defaults to 1 - r^2
  std::function<double(double)> s_fn, ds_fn;
  double sup_s = 1.0;  // sup |s|
  double lip_s = 2.0;  // sup |s'|

  static NoiseSpec standard(double sigma0, double p = 1.0, int K = 16);
  static NoiseSpec custom_shape(std::function<double(double)> s,
                                std::function<double(double)> ds, double sup_s,
                                double lip_s, double sigma0, double p, int K);

  double sigma(int k) const { return sigma0 * std::pow(k + 1.0, -p); }
  double shape(double r) const;  // eps-clamped when eps > 0
  double sum_sigma_sq() const;   // over the simulated modes
  double tail_sigma_sq() const;  // bound on the discarded amplitude tail
  // sum of squared W^{1,inf} norms of the whole family (tail included)
  double C_G() const;
  // effective sup/lip of the (possibly clamped) shape
  double sup_shape() const;
  double lip_shape() const;
};

// same family with the shape frozen at +-(1-eps)
NoiseSpec truncate_eps(const NoiseSpec& n, double eps);

// sum_k g_k(phi(x)) * dW_k pointwise on grid values
Eigen::ArrayXd apply_G_brownian(const NoiseSpec& n,
                                const Eigen::ArrayXd& phi_vals,
                                const Eigen::VectorXd& dW);
// dW_k = sqrt(dt) * xi_k
Eigen::ArrayXd apply_G_increment(const NoiseSpec& n,
                                 const Eigen::ArrayXd& phi_vals, double dt,
                                 const Eigen::VectorXd& xi);

// per-mode compatibility constants against the singular potential and the
// degenerate mobility: sup over (-1,1) of |g_k|^2 |F''| and |g_k|^2 M''
// (endpoint-clustered sampling grid). L_G adds the W^{1,inf} part and the
// amplitude tail. Unbounded products throw std::domain_error.
struct NoiseCompat {
  Eigen::VectorXd supW1k, supFk, supMk;
  double L_G = 0.0;
  double unit_F = 0.0, unit_M = 0.0;  // sup of s^2 |F''| and s^2 M''
};
NoiseCompat compat_constants(const NoiseSpec& n, const PotentialSpec& pot,
                             const MobilitySpec& mob, int grid_n = 100001);

// sum_k int F_reg''(phi) |g_k(phi)|^2 dx by collocation quadrature
double ito_correction_F(const NoiseSpec& n, const RegularizedPotential& reg,
                        const Eigen::ArrayXd& phi_vals, double weight);
// same with M_eps'' = 1/m_eps in place of F''
double ito_correction_M(const NoiseSpec& n, const TruncatedMobility& tm,
                        const Eigen::ArrayXd& phi_vals, double weight);

}  // namespace sch
