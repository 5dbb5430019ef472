#include "sch/mobility.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sch/potential.hpp"

namespace sch {

namespace {

inline double xlogx(double u) { return u > 0.0 ? u * std::log(u) : 0.0; }

void require_interval(double r, bool strict) {
  if (strict ? std::abs(r) >= 1.0 : std::abs(r) > 1.0)
    throw std::domain_error("mobility: argument outside [-1,1]");
}

}  // namespace

MobilitySpec MobilitySpec::constant(double m0) {
  if (!(m0 > 0.0))
    throw std::invalid_argument("constant mobility requires m0 > 0");
  MobilitySpec s;
  s.kind = MobilityKind::Constant;
  s.m0 = m0;
  return s;
}

MobilitySpec MobilitySpec::poly_degenerate(double alpha) {
  if (!(alpha >= 1.0))
    throw std::invalid_argument("degenerate mobility requires alpha >= 1");
  MobilitySpec s;
  s.kind = MobilityKind::PolyDegenerate;
  s.alpha = alpha;
  return s;
}

MobilitySpec MobilitySpec::custom(std::function<double(double)> m,
                                  std::function<double(double)> dm, double lip,
                                  bool degenerate) {
  MobilitySpec s;
  s.kind = MobilityKind::Custom;
  s.m_fn = std::move(m);
  s.dm_fn = std::move(dm);
  s.lip_custom = lip;
  s.degenerate_custom = degenerate;
  return s;
}

double MobilitySpec::m(double r) const {
  switch (kind) {
    case MobilityKind::Constant:
      return m0;
    case MobilityKind::PolyDegenerate:
      require_interval(r, false);
      return std::pow(1.0 - r * r, alpha);
    case MobilityKind::Custom:
      return m_fn(r);
  }
  return 0.0;
}

double MobilitySpec::dm(double r) const {
  switch (kind) {
    case MobilityKind::Constant:
      return 0.0;
    case MobilityKind::PolyDegenerate:
      require_interval(r, false);
      if (alpha == 1.0) return -2.0 * r;
      return -2.0 * alpha * r * std::pow(1.0 - r * r, alpha - 1.0);
    case MobilityKind::Custom:
      return dm_fn(r);
  }
  return 0.0;
}

bool MobilitySpec::degenerate() const {
  switch (kind) {
    case MobilityKind::Constant:
      return false;
    case MobilityKind::PolyDegenerate:
      return true;
    case MobilityKind::Custom:
      return degenerate_custom;
  }
  return false;
}

double MobilitySpec::lip_m() const {
  switch (kind) {
    case MobilityKind::Constant:
      return 0.0;
    case MobilityKind::PolyDegenerate: {
      // |m'| = 2 alpha |r| (1-r^2)^(alpha-1) peaks at r^2 = 1/(2 alpha - 1)
      if (alpha == 1.0) return 2.0;
      const double r2 = 1.0 / (2.0 * alpha - 1.0);
      return 2.0 * alpha * std::sqrt(r2) * std::pow(1.0 - r2, alpha - 1.0);
    }
    case MobilityKind::Custom:
      return lip_custom;
  }
  return 0.0;
}

double MobilitySpec::sup_m() const {
  switch (kind) {
    case MobilityKind::Constant:
      return m0;
    case MobilityKind::PolyDegenerate:
      return 1.0;
    case MobilityKind::Custom: {
      double s = 0.0;
      for (int i = 0; i <= 20000; ++i)
        s = std::max(s, m_fn(-1.0 + 1e-4 * i));
      return s;
    }
  }
  return 0.0;
}

double eval_M(const MobilitySpec& s, double r) {
  switch (s.kind) {
    case MobilityKind::Constant:
      return 0.5 * r * r / s.m0;
    case MobilityKind::PolyDegenerate:
      if (s.alpha == 1.0) {
        require_interval(r, false);
        return 0.5 * (xlogx(1.0 + r) + xlogx(1.0 - r));
      }
      if (s.alpha == 2.0) {
        require_interval(r, true);
        return 0.25 * (xlogx(1.0 + r) + xlogx(1.0 - r)) -
               0.25 * std::log(1.0 - r * r);
      }
      require_interval(r, true);
      break;
    case MobilityKind::Custom:
      break;
  }
  // double primitive of 1/m reduced to a single integral
  return integrate([&](double t) { return (r - t) / s.m(t); }, 0.0, r, 1e-10);
}

double eval_dM(const MobilitySpec& s, double r) {
  switch (s.kind) {
    case MobilityKind::Constant:
      return r / s.m0;
    case MobilityKind::PolyDegenerate:
      if (s.alpha == 1.0) {
        require_interval(r, true);
        return std::atanh(r);
      }
      if (s.alpha == 2.0) {
        require_interval(r, true);
        return 0.5 * std::atanh(r) + 0.5 * r / (1.0 - r * r);
      }
      require_interval(r, true);
      break;
    case MobilityKind::Custom:
      break;
  }
  return integrate([&](double t) { return 1.0 / s.m(t); }, 0.0, r, 1e-10);
}

TruncatedMobility build_m_eps(const MobilitySpec& s, double eps) {
  if (!(eps > 0.0) || !(eps < 0.25))
    throw std::invalid_argument("eps must lie in (0, 1/4)");
  TruncatedMobility tm;
  tm.origin = s;
  tm.eps = eps;
  tm.a = 1.0 - eps;
  tm.m_pos = s.m(tm.a);
  tm.m_neg = s.m(-tm.a);
  tm.m_floor = std::min(tm.m_pos, tm.m_neg);
  if (!(tm.m_floor > 0.0))
    throw std::invalid_argument("truncated mobility must be positive");

  const bool closed = s.kind == MobilityKind::Constant ||
                      (s.kind == MobilityKind::PolyDegenerate &&
                       (s.alpha == 1.0 || s.alpha == 2.0));
  if (!closed) {
    // cache M and M' over the untruncated range once, at construction
    tm.M_cache = std::make_shared<const ChebInterp>(
        [&](double r) { return eval_M(s, r); }, -tm.a, tm.a, 1e-10);
    tm.dM_cache = std::make_shared<const ChebInterp>(
        [&](double r) { return eval_dM(s, r); }, -tm.a, tm.a, 1e-10);
  }
  tm.M_pos = eval_M(s, tm.a);
  tm.M_neg = eval_M(s, -tm.a);
  tm.dM_pos = eval_dM(s, tm.a);
  tm.dM_neg = eval_dM(s, -tm.a);
  return tm;
}

double TruncatedMobility::m(double r) const {
  if (r > a) return m_pos;
  if (r < -a) return m_neg;
  return origin.m(r);
}

double TruncatedMobility::dm(double r) const {
  if (std::abs(r) > a) return 0.0;
  return origin.dm(r);
}

double TruncatedMobility::M(double r) const {
  if (r > a) return M_pos + dM_pos * (r - a) + 0.5 * (r - a) * (r - a) / m_pos;
  if (r < -a)
    return M_neg + dM_neg * (r + a) + 0.5 * (r + a) * (r + a) / m_neg;
  if (M_cache) return (*M_cache)(r);
  return eval_M(origin, r);
}

double TruncatedMobility::dM(double r) const {
  if (r > a) return dM_pos + (r - a) / m_pos;
  if (r < -a) return dM_neg + (r + a) / m_neg;
  if (dM_cache) return (*dM_cache)(r);
  return eval_dM(origin, r);
}

std::pair<double, double> confinement_gap(const TruncatedMobility& tm,
                                          double r) {
  const double ex = std::max(std::abs(r) - 1.0, 0.0);
  return {ex * ex, 2.0 * tm.eps * tm.origin.lip_m() * tm.M(r)};
}

MFCompatTable compat_mF(const MobilitySpec& s, const PotentialSpec& p,
                        int grid_n) {
  if (grid_n < 3) throw std::invalid_argument("compat_mF: grid too small");

  // simplified product for a degenerate polynomial mobility against the
  // logarithmic potential: m F'' = theta (1-r^2)^(alpha-1)
  //                                - theta0 (1-r^2)^alpha, finite at +-1
  const bool poly_log = s.kind == MobilityKind::PolyDegenerate &&
                        p.kind == PotentialKind::Logarithmic;
  const auto product = [&](double r) -> double {
    if (poly_log) {
      const double u = 1.0 - r * r;
      const double head =
          s.alpha == 1.0 ? p.theta : p.theta * std::pow(u, s.alpha - 1.0);
      return head - p.theta0 * std::pow(u, s.alpha);
    }
    if (p.kind == PotentialKind::DoubleObstacle) return -2.0 * s.m(r);
    return s.m(r) * eval_d2F(p, r);
  };

  const bool endpoint_ok =
      poly_log || !p.singular ||
      p.kind == PotentialKind::DoubleObstacle;  // F'' bounded on [-1,1]
  if (!endpoint_ok) {
    // probe near the endpoints; an unbounded product violates the
    // degeneracy compatibility between m and F
    double interior = std::abs(product(0.0)) + 1.0;
    double prev = interior;
    bool growing = true;
    for (int j = 4; j <= 12; ++j) {
      const double v = std::abs(product(1.0 - std::pow(10.0, -j)));
      if (v < prev) growing = false;
      prev = v;
    }
    if (growing && prev > 1e6 * interior)
      throw std::domain_error(
          "compat_mF: mobility-potential product unbounded near +-1");
  }

  MFCompatTable tab;
  tab.r.resize(grid_n);
  tab.mF.resize(grid_n);
  for (int i = 0; i < grid_n; ++i) {
    double r = -1.0 + 2.0 * i / (grid_n - 1);
    if (!endpoint_ok && std::abs(r) == 1.0) r = std::copysign(1.0 - 1e-12, r);
    tab.r[i] = r;
    tab.mF[i] = product(r);
  }
  for (int i = 0; i + 1 < grid_n; ++i)
    tab.max_jump = std::max(tab.max_jump, std::abs(tab.mF[i + 1] - tab.mF[i]));
  tab.at_minus1 = tab.mF.front();
  tab.at_plus1 = tab.mF.back();
  return tab;
}

}  // namespace sch
