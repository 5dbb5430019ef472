#pragma once
// Potential catalog and the two ways of taming a singular potential:
// a Yosida-type smoothing with parameter lambda (for potentials that are
// C^2 on all of R) and an epsilon-truncation that freezes the singular
// curvature outside [-1+eps, 1-eps] (for potentials singular at +-1).

#include <functional>
#include <memory>

namespace sch {

enum class PotentialKind { Logarithmic, DoubleObstacle, Polynomial, Custom };

// A potential F = F1 + F2 with F1 the (possibly singular) convex part and
// F2 a smooth quadratic-type part. c_f is a lower curvature bound:
// F'' >= -c_f wherever F is twice differentiable.
struct PotentialSpec {
  PotentialKind kind = PotentialKind::Polynomial;
  double theta = 1.0;   // logarithmic: mixing temperature
  double theta0 = 2.0;  // logarithmic: critical temperature, theta0 > theta
  double c_f = 1.0;
  bool singular = false;  // domain restricted to [-1,1]

  // Custom kind only: user supplies the split. f1 must be convex with
  // f1(0) = f1'(0) = 0 on the declared domain.
  std::function<double(double)> f1, d_f1, d2_f1;
  std::function<double(double)> f2, d_f2, d2_f2;

  static PotentialSpec logarithmic(double theta, double theta0);
  static PotentialSpec double_obstacle();
  static PotentialSpec polynomial(double c_f = 1.0);
  static PotentialSpec custom(std::function<double(double)> f1,
                              std::function<double(double)> d_f1,
                              std::function<double(double)> d2_f1,
                              std::function<double(double)> f2,
                              std::function<double(double)> d_f2,
                              std::function<double(double)> d2_f2, double c_f,
                              bool singular);
};

// split evaluators; domain errors are raised by the combined forms below
double eval_F1(const PotentialSpec& p, double r);
double eval_dF1(const PotentialSpec& p, double r);
double eval_d2F1(const PotentialSpec& p, double r);
double eval_F2(const PotentialSpec& p, double r);
double eval_dF2(const PotentialSpec& p, double r);
double eval_d2F2(const PotentialSpec& p, double r);

// F, F', F''. For singular kinds eval_F accepts |r| <= 1 (the logarithmic
// value at +-1 is the continuous extension theta*log 2) while the
// derivatives require |r| < 1. Out-of-domain arguments throw
// std::domain_error.
double eval_F(const PotentialSpec& p, double r);
double eval_dF(const PotentialSpec& p, double r);
double eval_d2F(const PotentialSpec& p, double r);

// gamma(r) = F'(r) + c_f * r, the monotone shift of F'
double eval_gamma(const PotentialSpec& p, double r);
double eval_dgamma(const PotentialSpec& p, double r);

// J_lambda(y): the unique r with r + lambda * gamma(r) = y, found by
// safeguarded Newton iteration (absolute tolerance 1e-12, at most 200
// steps, bisection fallback on the bracket [min(0,y), max(0,y)]).
double resolvent(const PotentialSpec& p, double lambda, double y);

// gamma_lambda(r) = (r - J_lambda(r)) / lambda
double yosida(const PotentialSpec& p, double lambda, double r);

// A C^2 substitute for F defined on all of R.
struct RegularizedPotential {
  enum class Mode { Lambda, Eps };
  Mode mode = Mode::Lambda;
  double param = 0.0;  // lambda in (0,1] or eps in (0,1/4)
  double sup_d2 = 0.0;  // global bound on |value''|
  double quad_c = 0.0;  // Lambda mode: |value(r)| <= quad_c * (1 + r^2)
  PotentialSpec origin;
  std::function<double(double)> f, df, d2f;

  double operator()(double r) const { return f(r); }
};

// F_lambda(r) = F(0) + int_0^r gamma_lambda - c_f r^2 / 2. Requires a spec
// whose F is C^2 on all of R (polynomial or non-singular custom).
RegularizedPotential build_lambda_reg(const PotentialSpec& p, double lambda);

// F_eps = F_{1,eps} + F2~ where F_{1,eps} freezes F1'' outside
// [-1+eps, 1-eps] and F2~ continues F2 quadratically beyond +-1.
// Requires a singular spec and eps in (0, 1/4).
RegularizedPotential build_eps_reg(const PotentialSpec& p, double eps);

}  // namespace sch
