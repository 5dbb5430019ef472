#include "sch/potential.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sch {

namespace {

// u log u with the continuous value 0 at u = 0
inline double xlogx(double u) { return u > 0.0 ? u * std::log(u) : 0.0; }

void require_domain(const PotentialSpec& p, double r, bool strict) {
  if (!p.singular) return;
  if (strict ? std::abs(r) >= 1.0 : std::abs(r) > 1.0)
    throw std::domain_error("potential: argument outside [-1,1]");
}

}  // namespace

PotentialSpec PotentialSpec::logarithmic(double theta, double theta0) {
  if (!(theta > 0.0) || !(theta < theta0))
    throw std::invalid_argument(
        "logarithmic potential requires 0 < theta < theta0");
  PotentialSpec p;
  p.kind = PotentialKind::Logarithmic;
  p.theta = theta;
  p.theta0 = theta0;
  p.c_f = theta0 - theta;  // F'' = theta/(1-r^2) - theta0 >= theta - theta0
  p.singular = true;
  return p;
}

PotentialSpec PotentialSpec::double_obstacle() {
  PotentialSpec p;
  p.kind = PotentialKind::DoubleObstacle;
  p.c_f = 2.0;
  p.singular = true;
  return p;
}

PotentialSpec PotentialSpec::polynomial(double c_f) {
  if (!(c_f >= 1.0))
    throw std::invalid_argument("polynomial potential requires c_f >= 1");
  PotentialSpec p;
  p.kind = PotentialKind::Polynomial;
  p.c_f = c_f;
  p.singular = false;
  return p;
}

PotentialSpec PotentialSpec::custom(std::function<double(double)> f1,
                                    std::function<double(double)> d_f1,
                                    std::function<double(double)> d2_f1,
                                    std::function<double(double)> f2,
                                    std::function<double(double)> d_f2,
                                    std::function<double(double)> d2_f2,
                                    double c_f, bool singular) {
  PotentialSpec p;
  p.kind = PotentialKind::Custom;
  p.c_f = c_f;
  p.singular = singular;
  p.f1 = std::move(f1);
  p.d_f1 = std::move(d_f1);
  p.d2_f1 = std::move(d2_f1);
  p.f2 = std::move(f2);
  p.d_f2 = std::move(d_f2);
  p.d2_f2 = std::move(d2_f2);
  return p;
}

double eval_F1(const PotentialSpec& p, double r) {
  switch (p.kind) {
    case PotentialKind::Logarithmic:
      return 0.5 * p.theta * (xlogx(1.0 + r) + xlogx(1.0 - r));
    case PotentialKind::DoubleObstacle:
      return 0.0;
    case PotentialKind::Polynomial: {
      const double s = r * r - 1.0;
      return 0.25 * s * s;
    }
    case PotentialKind::Custom:
      return p.f1(r);
  }
  return 0.0;
}

double eval_dF1(const PotentialSpec& p, double r) {
  switch (p.kind) {
    case PotentialKind::Logarithmic:
      return 0.5 * p.theta * (std::log(1.0 + r) - std::log(1.0 - r));
    case PotentialKind::DoubleObstacle:
      return 0.0;
    case PotentialKind::Polynomial:
      return r * r * r - r;
    case PotentialKind::Custom:
      return p.d_f1(r);
  }
  return 0.0;
}

double eval_d2F1(const PotentialSpec& p, double r) {
  switch (p.kind) {
    case PotentialKind::Logarithmic:
      return p.theta / (1.0 - r * r);
    case PotentialKind::DoubleObstacle:
      return 0.0;
    case PotentialKind::Polynomial:
      return 3.0 * r * r - 1.0;
    case PotentialKind::Custom:
      return p.d2_f1(r);
  }
  return 0.0;
}

double eval_F2(const PotentialSpec& p, double r) {
  switch (p.kind) {
    case PotentialKind::Logarithmic:
      return 0.5 * p.theta0 * (1.0 - r * r);
    case PotentialKind::DoubleObstacle:
      return 1.0 - r * r;
    case PotentialKind::Polynomial:
      return 0.0;
    case PotentialKind::Custom:
      return p.f2(r);
  }
  return 0.0;
}

double eval_dF2(const PotentialSpec& p, double r) {
  switch (p.kind) {
    case PotentialKind::Logarithmic:
      return -p.theta0 * r;
    case PotentialKind::DoubleObstacle:
      return -2.0 * r;
    case PotentialKind::Polynomial:
      return 0.0;
    case PotentialKind::Custom:
      return p.d_f2(r);
  }
  return 0.0;
}

double eval_d2F2(const PotentialSpec& p, double r) {
  switch (p.kind) {
    case PotentialKind::Logarithmic:
      return -p.theta0;
    case PotentialKind::DoubleObstacle:
      return -2.0;
    case PotentialKind::Polynomial:
      return 0.0;
    case PotentialKind::Custom:
      return p.d2_f2(r);
  }
  return 0.0;
}

double eval_F(const PotentialSpec& p, double r) {
  require_domain(p, r, /*strict=*/false);
  return eval_F1(p, r) + eval_F2(p, r);
}

double eval_dF(const PotentialSpec& p, double r) {
  require_domain(p, r, /*strict=*/true);
  return eval_dF1(p, r) + eval_dF2(p, r);
}

double eval_d2F(const PotentialSpec& p, double r) {
  require_domain(p, r, /*strict=*/true);
  return eval_d2F1(p, r) + eval_d2F2(p, r);
}

double eval_gamma(const PotentialSpec& p, double r) {
  return eval_dF(p, r) + p.c_f * r;
}

double eval_dgamma(const PotentialSpec& p, double r) {
  return eval_d2F(p, r) + p.c_f;
}

double resolvent(const PotentialSpec& p, double lambda, double y) {
  if (!(lambda > 0.0))
    throw std::invalid_argument("resolvent: lambda must be positive");
  // bracket with g(lo) <= 0 <= g(hi) for g(r) = r + lambda*gamma(r) - y;
  // gamma is monotone with gamma(0) = 0, so [min(0,y), max(0,y)] works,
  // clipped to the open domain for singular potentials
  const double edge = 1.0 - 1e-15;
  double lo = std::min(0.0, y), hi = std::max(0.0, y);
  if (p.singular) {
    lo = std::max(lo, -edge);
    hi = std::min(hi, edge);
  }
  const auto g = [&](double r) { return r + lambda * eval_gamma(p, r) - y; };
  if (g(hi) <= 0.0) return hi;  // root beyond double resolution of the edge
  if (g(lo) >= 0.0) return lo;

  double x = std::clamp(y, lo, hi);
  for (int it = 0; it < 200; ++it) {
    const double gx = g(x);
    if (gx > 0.0)
      hi = x;
    else
      lo = x;
    const double slope = 1.0 + lambda * eval_dgamma(p, x);
    double xn = x - gx / slope;
    if (!(xn > lo) || !(xn < hi)) xn = 0.5 * (lo + hi);
    if (std::abs(xn - x) <= 1e-12) return xn;
    x = xn;
  }
  throw std::runtime_error("resolvent: Newton iteration did not converge");
}

double yosida(const PotentialSpec& p, double lambda, double r) {
  return (r - resolvent(p, lambda, r)) / lambda;
}

RegularizedPotential build_lambda_reg(const PotentialSpec& p, double lambda) {
  if (p.singular)
    throw std::invalid_argument(
        "lambda regularization requires a potential that is C^2 on all of R");
  if (!(lambda > 0.0) || !(lambda <= 1.0))
    throw std::invalid_argument("lambda must lie in (0, 1]");
  // gamma must be nondecreasing, i.e. F'' + c_f >= 0
  for (int i = 0; i <= 2000; ++i) {
    const double r = -20.0 + 0.02 * i;
    if (eval_d2F(p, r) + p.c_f < -1e-9)
      throw std::invalid_argument(
          "lambda regularization requires F'' >= -c_f");
  }

  RegularizedPotential reg;
  reg.mode = RegularizedPotential::Mode::Lambda;
  reg.param = lambda;
  reg.origin = p;
  const double f0 = eval_F(p, 0.0);
  const double c_f = p.c_f;
  const PotentialSpec spec = p;

  // F_lambda(r) = F(0) + ghat_lambda(r) - c_f r^2/2 where ghat_lambda is the
  // antiderivative of the 1/lambda-Lipschitz slope gamma_lambda. With
  // J = J_lambda(r) the antiderivative collapses to
  //   ghat_lambda(r) = ghat(J) + lambda/2 * gamma_lambda(r)^2,
  // ghat(s) = F(s) - F(0) + c_f s^2/2, so one resolvent solve per call.
  reg.f = [spec, lambda, c_f, f0](double r) {
    const double J = resolvent(spec, lambda, r);
    const double gl = (r - J) / lambda;
    return eval_F(spec, J) + 0.5 * lambda * gl * gl +
           0.5 * c_f * (J * J - r * r);
  };
  reg.df = [spec, lambda, c_f](double r) {
    const double J = resolvent(spec, lambda, r);
    return (r - J) / lambda - c_f * r;
  };
  reg.d2f = [spec, lambda, c_f](double r) {
    const double J = resolvent(spec, lambda, r);
    const double dg = eval_dgamma(spec, J);
    return dg / (1.0 + lambda * dg) - c_f;
  };
  reg.sup_d2 = 1.0 / lambda + c_f;
  reg.quad_c = std::max({f0, 0.5 / lambda, 0.5 * c_f});
  return reg;
}

RegularizedPotential build_eps_reg(const PotentialSpec& p, double eps) {
  if (!p.singular)
    throw std::invalid_argument(
        "eps regularization applies to singular potentials only");
  if (!(eps > 0.0) || !(eps < 0.25))
    throw std::invalid_argument("eps must lie in (0, 1/4)");

  const double a = 1.0 - eps;
  // frozen convex-part data at +-(1-eps)
  const double f1p = eval_F1(p, a), df1p = eval_dF1(p, a),
               d2f1p = eval_d2F1(p, a);
  const double f1m = eval_F1(p, -a), df1m = eval_dF1(p, -a),
               d2f1m = eval_d2F1(p, -a);
  // quadratic continuation data for the smooth part at +-1
  const double f2p = eval_F2(p, 1.0), df2p = eval_dF2(p, 1.0),
               d2f2p = eval_d2F2(p, 1.0);
  const double f2m = eval_F2(p, -1.0), df2m = eval_dF2(p, -1.0),
               d2f2m = eval_d2F2(p, -1.0);

  RegularizedPotential reg;
  reg.mode = RegularizedPotential::Mode::Eps;
  reg.param = eps;
  reg.origin = p;
  const PotentialSpec spec = p;

  reg.f = [=](double r) {
    double v1;
    if (r > a)
      v1 = f1p + df1p * (r - a) + 0.5 * d2f1p * (r - a) * (r - a);
    else if (r < -a)
      v1 = f1m + df1m * (r + a) + 0.5 * d2f1m * (r + a) * (r + a);
    else
      v1 = eval_F1(spec, r);
    double v2;
    if (r > 1.0)
      v2 = f2p + df2p * (r - 1.0) + 0.5 * d2f2p * (r - 1.0) * (r - 1.0);
    else if (r < -1.0)
      v2 = f2m + df2m * (r + 1.0) + 0.5 * d2f2m * (r + 1.0) * (r + 1.0);
    else
      v2 = eval_F2(spec, r);
    return v1 + v2;
  };
  reg.df = [=](double r) {
    double v1;
    if (r > a)
      v1 = df1p + d2f1p * (r - a);
    else if (r < -a)
      v1 = df1m + d2f1m * (r + a);
    else
      v1 = eval_dF1(spec, r);
    double v2;
    if (r > 1.0)
      v2 = df2p + d2f2p * (r - 1.0);
    else if (r < -1.0)
      v2 = df2m + d2f2m * (r + 1.0);
    else
      v2 = eval_dF2(spec, r);
    return v1 + v2;
  };
  reg.d2f = [=](double r) {
    const double v1 = r > a ? d2f1p : (r < -a ? d2f1m : eval_d2F1(spec, r));
    const double v2 =
        r > 1.0 ? d2f2p : (r < -1.0 ? d2f2m : eval_d2F2(spec, r));
    return v1 + v2;
  };

  double sup_d2f2 = 0.0;
  for (int i = 0; i <= 10000; ++i)
    sup_d2f2 =
        std::max(sup_d2f2, std::abs(eval_d2F2(p, -1.0 + 2e-4 * i)));
  reg.sup_d2 = std::abs(d2f1p) + std::abs(d2f1m) + sup_d2f2;
  reg.quad_c = 0.0;  // not used in this mode
  return reg;
}

}  // namespace sch
