#pragma once
// Mobility catalog, the entropy function M with M'' = 1/m, and the
// eps-truncation that freezes a degenerate mobility near +-1.

#include <functional>
#include <memory>

#include "sch/quad.hpp"

namespace sch {

struct PotentialSpec;

enum class MobilityKind { Constant, PolyDegenerate, Custom };

struct MobilitySpec {
  MobilityKind kind = MobilityKind::Constant;
  double m0 = 1.0;     // Constant
  double alpha = 1.0;  // PolyDegenerate: m(r) = (1-r^2)^alpha, alpha >= 1
  std::function<double(double)> m_fn, dm_fn;
  double lip_custom = 0.0;
  bool degenerate_custom = false;

  static MobilitySpec constant(double m0);
  static MobilitySpec poly_degenerate(double alpha);
  static MobilitySpec custom(std::function<double(double)> m,
                             std::function<double(double)> dm, double lip,
                             bool degenerate);

  double m(double r) const;
  double dm(double r) const;
  bool degenerate() const;  // m(+-1) = 0
  double lip_m() const;     // sup |m'|
  double sup_m() const;     // max of m over the admissible range
};

// entropy M with M(0) = M'(0) = 0, M'' = 1/m; closed forms for the constant
// kind and for alpha = 1, 2, nested quadrature otherwise
double eval_M(const MobilitySpec& s, double r);
double eval_dM(const MobilitySpec& s, double r);

// mobility frozen at +-(1 - eps), with a C^2 entropy matched at the freeze
// points (quadratic with curvature 1/m(+-(1-eps)) outside)
struct TruncatedMobility {
  MobilitySpec origin;
  double eps = 0.0;
  double a = 0.0;        // freeze threshold 1 - eps
  double m_pos = 0.0;    // m(1-eps)
  double m_neg = 0.0;    // m(-1+eps)
  double m_floor = 0.0;  // min of the two plateaus
  double M_pos = 0.0, M_neg = 0.0, dM_pos = 0.0, dM_neg = 0.0;
  std::shared_ptr<const ChebInterp> M_cache, dM_cache;  // non-closed-form kinds

  double m(double r) const;
  double dm(double r) const;
  double M(double r) const;
  double dM(double r) const;
  double d2M(double r) const { return 1.0 / m(r); }
};

TruncatedMobility build_m_eps(const MobilitySpec& s, double eps);

// (lhs, rhs) of the pointwise confinement inequality
// (|r|-1)_+^2 <= 2 eps lip_m M_eps(r)
std::pair<double, double> confinement_gap(const TruncatedMobility& tm,
                                          double r);

// table of (m F'')(r) on a uniform grid over [-1,1], using the simplified
// product formula at the endpoints where one is available; throws
// std::domain_error when the product is detected to be unbounded
struct MFCompatTable {
  std::vector<double> r, mF;
  double max_jump = 0.0;  // largest neighbour gap, a continuity statistic
  double at_minus1 = 0.0, at_plus1 = 0.0;
};
MFCompatTable compat_mF(const MobilitySpec& s, const PotentialSpec& p,
                        int grid_n);

}  // namespace sch
