#pragma once
// Scalar quadrature helpers: adaptive Simpson rule and a barycentric
// Chebyshev interpolant used to cache expensive antiderivatives.

#include <functional>
#include <vector>

namespace sch {

// Adaptive Simpson quadrature of f over [a, b] to absolute tolerance tol.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol = 1e-10, int max_depth = 48);

// Interpolant on Chebyshev points of the second kind over [a, b]. The node
// count doubles until the interpolant matches f at off-node probes to tol.
// Evaluation uses the barycentric formula and is pure after construction.
class ChebInterp {
 public:
  ChebInterp() = default;
  ChebInterp(const std::function<double(double)>& f, double a, double b,
             double tol = 1e-10, int max_nodes = (1 << 14) + 1);
  double operator()(double x) const;
  int size() const { return static_cast<int>(fx_.size()); }

 private:
  void build(const std::function<double(double)>& f, int n);
  double a_ = 0.0, b_ = 1.0;
  std::vector<double> xs_, fx_, w_;
};

}  // namespace sch
