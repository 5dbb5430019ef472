#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "sch/potential.hpp"
#include "sch/quad.hpp"
#include "sch/rng.hpp"

using sch::PotentialSpec;

TEST_CASE("polynomial double well values and derivatives") {
  auto p = PotentialSpec::polynomial();
  CHECK(sch::eval_F(p, 0.0) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(sch::eval_F(p, 1.0) == 0.0);
  CHECK(sch::eval_F(p, -1.0) == 0.0);
  CHECK(sch::eval_F(p, 1.5) == doctest::Approx(0.390625).epsilon(1e-15));
  CHECK(sch::eval_dF(p, 1.0) == 0.0);
  CHECK(sch::eval_d2F(p, 0.0) == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(sch::eval_d2F(p, 1.0) == doctest::Approx(2.0).epsilon(1e-15));
  // with the default shift the monotone part is exactly r^3
  CHECK(sch::eval_gamma(p, 0.7) == doctest::Approx(0.343).epsilon(1e-14));
}

TEST_CASE("logarithmic potential: frozen values, endpoint extension, domain") {
  auto p = PotentialSpec::logarithmic(1.0, 2.0);
  // hand value at r = 1/2: 0.5*(1.5 ln 1.5 + 0.5 ln 0.5) + 0.75
  CHECK(sch::eval_F(p, 0.5) == doctest::Approx(0.880812035941137).epsilon(1e-13));
  CHECK(sch::eval_F(p, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
  // continuous extension at the corners
  CHECK(sch::eval_F(p, 1.0) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
  CHECK(sch::eval_F(p, -1.0) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
  CHECK(sch::eval_dF(p, 0.5) ==
        doctest::Approx(0.5 * std::log(3.0) - 1.0).epsilon(1e-13));
  CHECK(sch::eval_d2F(p, 0.0) == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(sch::eval_d2F(p, 0.9) ==
        doctest::Approx(1.0 / 0.19 - 2.0).epsilon(1e-12));

  CHECK_THROWS_AS(sch::eval_F(p, 1.0001), std::domain_error);
  CHECK_THROWS_AS(sch::eval_dF(p, 1.0), std::domain_error);
  CHECK_THROWS_AS(sch::eval_d2F(p, -1.0), std::domain_error);
}

TEST_CASE("logarithmic factory rejects a bad temperature ordering") {
  CHECK_THROWS_AS(PotentialSpec::logarithmic(2.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(PotentialSpec::logarithmic(0.0, 1.0), std::invalid_argument);
}

TEST_CASE("double obstacle is the bare concave cap on [-1,1]") {
  auto p = PotentialSpec::double_obstacle();
  CHECK(sch::eval_F1(p, 0.5) == 0.0);
  CHECK(sch::eval_F(p, 0.5) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(sch::eval_F(p, 1.0) == 0.0);
  CHECK(sch::eval_d2F(p, 0.3) == doctest::Approx(-2.0).epsilon(1e-15));
  CHECK(p.c_f == doctest::Approx(2.0));
  CHECK_THROWS_AS(sch::eval_F(p, -1.5), std::domain_error);
}

TEST_CASE("resolvent solves the shifted equation and contracts") {
  auto p = PotentialSpec::polynomial();  // gamma(r) = r^3
  // r + r^3 = 2 has the exact root r = 1
  CHECK(sch::resolvent(p, 1.0, 2.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sch::resolvent(p, 1.0, 0.0) == 0.0);

  for (double lambda : {1.0, 0.1, 0.01}) {
    for (int i = 0; i < 2000; ++i) {
      const double y1 = 3.0 * sch::philox_uniform_sym(5, 1, i, 0);
      const double y2 = 3.0 * sch::philox_uniform_sym(5, 2, i, 0);
      const double j1 = sch::resolvent(p, lambda, y1);
      const double j2 = sch::resolvent(p, lambda, y2);
      // defining equation
      CHECK(j1 + lambda * j1 * j1 * j1 == doctest::Approx(y1).epsilon(1e-10));
      // 1-Lipschitz resolvent
      CHECK(std::abs(j1 - j2) <= std::abs(y1 - y2) + 1e-10);
      // (1/lambda)-Lipschitz regularized slope, zero at the origin
      const double g1 = sch::yosida(p, lambda, y1);
      const double g2 = sch::yosida(p, lambda, y2);
      CHECK(std::abs(g1 - g2) <= std::abs(y1 - y2) / lambda + 1e-10);
    }
    CHECK(sch::yosida(p, lambda, 0.0) == 0.0);
  }
}

TEST_CASE("resolvent collapses to the identity as lambda -> 0") {
  auto p = PotentialSpec::polynomial();
  for (double r : {-2.0, -0.7, 0.0, 0.3, 1.9}) {
    CHECK(std::abs(sch::resolvent(p, 1e-8, r) - r) < 1e-6);
  }
}

TEST_CASE("smoothed potential matches the antiderivative of its slope") {
  // independent oracle: integrate the regularized slope by adaptive Simpson.
  // the slope comes out of a Newton solve, so its pointwise noise floor is
  // around 1e-12; ask the quadrature for less than that
  auto p = PotentialSpec::polynomial();
  for (double lambda : {0.1, 0.01}) {
    auto reg = sch::build_lambda_reg(p, lambda);
    auto slope = [&](double s) { return sch::yosida(p, lambda, s); };
    for (double r = -1.5; r <= 1.5 + 1e-9; r += 0.25) {
      const double want = sch::eval_F(p, 0.0) +
                          sch::integrate(slope, 0.0, r, 1e-9) -
                          0.5 * p.c_f * r * r;
      CHECK(reg.f(r) == doctest::Approx(want).epsilon(1e-7));
    }
  }
}

TEST_CASE("smoothed potential satisfies the proximal value identity") {
  auto p = PotentialSpec::polynomial();
  const double lambda = 0.01;
  auto reg = sch::build_lambda_reg(p, lambda);
  for (double r = -2.0; r <= 2.0 + 1e-9; r += 0.125) {
    const double j = sch::resolvent(p, lambda, r);
    const double g = sch::yosida(p, lambda, r);
    const double want = sch::eval_F(p, j) + 0.5 * lambda * g * g +
                        0.5 * p.c_f * (j * j - r * r);
    CHECK(reg.f(r) == doctest::Approx(want).epsilon(1e-11));
  }
  // the smoothing dips below zero near the wells; that is expected
  CHECK(reg.f(1.0) < 0.0);
  CHECK(reg.f(1.0) > -0.01);
}

TEST_CASE("smoothed potential derivatives agree with finite differences") {
  auto p = PotentialSpec::polynomial();
  auto reg = sch::build_lambda_reg(p, 0.05);
  const double h = 1e-6;
  for (double r = -1.8; r <= 1.8 + 1e-9; r += 0.3) {
    const double fd1 = (reg.f(r + h) - reg.f(r - h)) / (2.0 * h);
    const double fd2 = (reg.df(r + h) - reg.df(r - h)) / (2.0 * h);
    CHECK(reg.df(r) == doctest::Approx(fd1).epsilon(1e-6));
    CHECK(reg.d2f(r) == doctest::Approx(fd2).epsilon(1e-5));
  }
  // curvature bound advertised by the builder holds on a sample
  for (double r = -3.0; r <= 3.0; r += 0.01) {
    CHECK(std::abs(reg.d2f(r)) <= reg.sup_d2 + 1e-12);
  }
  // quadratic growth certificate
  for (double r = -10.0; r <= 10.0; r += 0.5) {
    CHECK(std::abs(reg.f(r)) <= reg.quad_c * (1.0 + r * r) + 1e-12);
  }
}

TEST_CASE("smoothing builders reject the wrong potential class") {
  CHECK_THROWS_AS(sch::build_lambda_reg(PotentialSpec::logarithmic(1.0, 2.0), 0.01),
                  std::invalid_argument);
  CHECK_THROWS_AS(sch::build_eps_reg(PotentialSpec::polynomial(), 0.05),
                  std::invalid_argument);
  CHECK_THROWS_AS(sch::build_eps_reg(PotentialSpec::double_obstacle(), 0.3),
                  std::invalid_argument);
  CHECK_THROWS_AS(sch::build_lambda_reg(PotentialSpec::polynomial(), 0.0),
                  std::invalid_argument);
}

TEST_CASE("truncated potential equals the original strictly inside the seams") {
  auto p = PotentialSpec::logarithmic(1.0, 2.0);
  const double eps = 0.1;
  auto reg = sch::build_eps_reg(p, eps);
  for (int k = -17; k <= 17; ++k) {
    const double r = 0.05 * k;  // stays strictly inside +-(1-eps)
    CHECK(reg.f(r) == sch::eval_F(p, r));
    CHECK(reg.df(r) == sch::eval_dF(p, r));
    CHECK(reg.d2f(r) == sch::eval_d2F(p, r));
  }
}

TEST_CASE("truncated potential freezes curvature and keeps C2 seams") {
  auto p = PotentialSpec::logarithmic(1.0, 2.0);
  const double eps = 0.1;
  auto reg = sch::build_eps_reg(p, eps);
  // outside the seam the convex curvature is the frozen seam value
  const double frozen = 1.0 / (eps * (2.0 - eps)) - 2.0;
  CHECK(reg.d2f(1.5) == doctest::Approx(frozen).epsilon(1e-12));
  CHECK(reg.d2f(-2.5) == doctest::Approx(frozen).epsilon(1e-12));
  CHECK(reg.sup_d2 >= std::abs(frozen));

  // value and slope are continuous across both seams
  const double h = 1e-7;
  for (double seam : {0.9, -0.9}) {
    CHECK(reg.f(seam + h) - reg.f(seam - h) ==
          doctest::Approx(2.0 * h * reg.df(seam)).epsilon(1e-4));
    CHECK(reg.df(seam + h) - reg.df(seam - h) ==
          doctest::Approx(2.0 * h * reg.d2f(seam)).epsilon(1e-3));
  }
}

TEST_CASE("obstacle cap continues as the same parabola past the corners") {
  auto reg = sch::build_eps_reg(PotentialSpec::double_obstacle(), 0.05);
  CHECK(reg.f(2.0) == doctest::Approx(-3.0).epsilon(1e-13));
  CHECK(reg.f(-2.0) == doctest::Approx(-3.0).epsilon(1e-13));
  CHECK(reg.d2f(5.0) == doctest::Approx(-2.0).epsilon(1e-13));
}

TEST_CASE("custom spec with a zero split gives the zero potential") {
  auto z = [](double) { return 0.0; };
  auto p = PotentialSpec::custom(z, z, z, z, z, z, 0.0, false);
  auto reg = sch::build_lambda_reg(p, 0.01);
  for (double r = -2.0; r <= 2.0; r += 0.1) {
    CHECK(std::abs(reg.f(r)) < 1e-14);
    CHECK(std::abs(reg.df(r)) < 1e-14);
    CHECK(std::abs(reg.d2f(r)) < 1e-14);
  }
}
