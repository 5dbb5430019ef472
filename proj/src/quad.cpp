#include "sch/quad.hpp"

#include <cmath>
#include <stdexcept>

namespace sch {

namespace {

double simpson(double h, double fa, double fm, double fb) {
  return h / 6.0 * (fa + 4.0 * fm + fb);
}

double adapt(const std::function<double(double)>& f, double a, double b,
             double fa, double fm, double fb, double whole, double tol,
             int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson(m - a, fa, flm, fm);
  const double right = simpson(b - m, fm, frm, fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return adapt(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adapt(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol, int max_depth) {
  if (a == b) return 0.0;
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  if (!std::isfinite(fa) || !std::isfinite(fb) || !std::isfinite(fm))
    throw std::domain_error("integrate: non-finite integrand value");
  const double whole = simpson(b - a, fa, fm, fb);
  return adapt(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

ChebInterp::ChebInterp(const std::function<double(double)>& f, double a,
                       double b, double tol, int max_nodes)
    : a_(a), b_(b) {
  int n = 65;
  build(f, n);
  while (true) {
    // probe halfway between nodes; these are never interpolation nodes
    double err = 0.0;
    for (size_t i = 0; i + 1 < xs_.size(); i += 7) {
      const double x = 0.5 * (xs_[i] + xs_[i + 1]);
      err = std::max(err, std::abs((*this)(x)-f(x)));
    }
    if (err <= tol || n >= max_nodes) break;
    n = 2 * (n - 1) + 1;
    build(f, n);
  }
}

void ChebInterp::build(const std::function<double(double)>& f, int n) {
  xs_.resize(n);
  fx_.resize(n);
  w_.resize(n);
  const double c = 0.5 * (a_ + b_), h = 0.5 * (b_ - a_);
  for (int j = 0; j < n; ++j) {
    xs_[j] = c - h * std::cos(M_PI * j / (n - 1));
    fx_[j] = f(xs_[j]);
    w_[j] = (j % 2 == 0 ? 1.0 : -1.0);
  }
  w_.front() *= 0.5;
  w_.back() *= 0.5;
}

double ChebInterp::operator()(double x) const {
  double num = 0.0, den = 0.0;
  for (size_t j = 0; j < xs_.size(); ++j) {
    const double d = x - xs_[j];
    if (d == 0.0) return fx_[j];
    const double t = w_[j] / d;
    num += t * fx_[j];
    den += t;
  }
  return num / den;
}

}  // namespace sch
