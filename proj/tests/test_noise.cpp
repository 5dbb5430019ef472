#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "sch/mobility.hpp"
#include "sch/noise.hpp"
#include "sch/potential.hpp"

using sch::NoiseSpec;

// partial sum of 1/k^2 for k = 1..16, frozen once by long-hand addition
static const double kSum16 = 1.5843465334449872;

TEST_CASE("amplitude ladder and its simulated mass") {
  auto n = NoiseSpec::standard(0.1, 1.0, 16);
  CHECK(n.sigma(0) == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(n.sigma(1) == doctest::Approx(0.05).epsilon(1e-15));
  CHECK(n.sigma(15) == doctest::Approx(0.1 / 16.0).epsilon(1e-15));
  CHECK(n.sum_sigma_sq() == doctest::Approx(0.01 * kSum16).epsilon(1e-13));
}

TEST_CASE("tail bound integrates the discarded amplitudes") {
  auto n = NoiseSpec::standard(0.1, 1.0, 16);
  // K^{1-2p}/(2p-1) with K = 16, p = 1
  CHECK(n.tail_sigma_sq() == doctest::Approx(0.01 / 16.0).epsilon(1e-14));

  auto n2 = NoiseSpec::standard(0.2, 0.75, 8);
  CHECK(n2.tail_sigma_sq() ==
        doctest::Approx(0.04 * std::pow(8.0, -0.5) * 2.0).epsilon(1e-13));

  // no simulated modes: the bound covers the whole family and stays finite
  auto n0 = NoiseSpec::standard(0.1, 1.0, 0);
  CHECK(n0.sum_sigma_sq() == 0.0);
  CHECK(n0.tail_sigma_sq() == doctest::Approx(0.01 * 2.0).epsilon(1e-14));
}

TEST_CASE("family strength constant from frozen arithmetic") {
  auto n = NoiseSpec::standard(0.1, 1.0, 16);
  // shape 1 - r^2: sup 1, slope bound 2, so the W^{1,inf} factor is 4
  const double want = 4.0 * 0.01 * kSum16 + 4.0 * 0.000625;
  CHECK(n.C_G() == doctest::Approx(want).epsilon(1e-12));
  CHECK(n.C_G() == doctest::Approx(0.065873861337799488).epsilon(1e-12));

  // dead noise in either parameter gives a zero or tail-only constant
  CHECK(NoiseSpec::standard(0.0, 1.0, 16).C_G() == 0.0);
  CHECK(NoiseSpec::standard(0.5, 1.0, 0).C_G() ==
        doctest::Approx(4.0 * 0.25 * 2.0).epsilon(1e-13));
}

TEST_CASE("spec validation") {
  CHECK_THROWS_AS(NoiseSpec::standard(-0.1, 1.0, 4), std::invalid_argument);
  CHECK_THROWS_AS(NoiseSpec::standard(0.1, 0.5, 4), std::invalid_argument);
  CHECK_THROWS_AS(NoiseSpec::standard(0.1, 1.0, -1), std::invalid_argument);
  CHECK_NOTHROW(NoiseSpec::standard(0.1, 1.0, 0));
}

TEST_CASE("default shape vanishes at the contact values and clamps outside") {
  auto n = NoiseSpec::standard(0.1, 1.0, 4);
  CHECK(n.shape(0.0) == 1.0);
  CHECK(n.shape(0.5) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(n.shape(1.0) == 0.0);
  CHECK(n.shape(1.7) == 0.0);
  CHECK(n.sup_shape() == 1.0);
  CHECK(n.lip_shape() == 2.0);
}

TEST_CASE("frozen shape plateaus at the threshold values") {
  auto n = sch::truncate_eps(NoiseSpec::standard(0.1, 1.0, 4), 0.05);
  CHECK(n.shape(0.99) == n.shape(0.95));
  CHECK(n.shape(-2.0) == n.shape(-0.95));
  CHECK(n.shape(0.5) == doctest::Approx(0.75).epsilon(1e-15));
  // effective slope bound shrinks to the seam value
  CHECK(n.lip_shape() == doctest::Approx(1.9).epsilon(1e-6));
  CHECK_THROWS_AS(sch::truncate_eps(NoiseSpec::standard(0.1, 1.0, 4), 0.25),
                  std::invalid_argument);
}

TEST_CASE("pointwise superposition against a two-mode hand sum") {
  auto n = NoiseSpec::standard(0.2, 1.0, 2);
  Eigen::ArrayXd phi(3);
  phi << -0.5, 0.0, 0.3;
  Eigen::VectorXd dW(2);
  dW << 0.7, -1.1;
  const auto out = sch::apply_G_brownian(n, phi, dW);
  for (int i = 0; i < 3; ++i) {
    const double s = 1.0 - phi[i] * phi[i];
    const double want = s * (0.2 * 0.7 + 0.1 * -1.1);
    CHECK(out[i] == doctest::Approx(want).epsilon(1e-14));
  }
  // the sqrt(dt) wrapper is the same sum with scaled draws
  Eigen::VectorXd xi = dW;
  const auto out2 = sch::apply_G_increment(n, phi, 0.25, xi);
  CHECK(out2[1] == doctest::Approx(0.5 * out[1]).epsilon(1e-14));
}

TEST_CASE("compatibility table for the matched singular pair") {
  auto n = NoiseSpec::standard(0.1, 1.0, 8);
  auto pot = sch::PotentialSpec::logarithmic(1.0, 2.0);
  auto mob = sch::MobilitySpec::poly_degenerate(1.0);
  auto c = sch::compat_constants(n, pot, mob, 50001);

  // s^2 |F''| = |(1-r^2) theta - theta0 (1-r^2)^2| peaks at r = 0 with value 1
  CHECK(c.unit_F == doctest::Approx(1.0).epsilon(1e-6));
  // s^2 M'' = (1-r^2)^2 / (1-r^2) peaks at r = 0 with value 1
  CHECK(c.unit_M == doctest::Approx(1.0).epsilon(1e-6));

  for (int k = 0; k < 8; ++k) {
    const double s2 = n.sigma(k) * n.sigma(k);
    CHECK(c.supFk[k] == doctest::Approx(s2 * c.unit_F).epsilon(1e-12));
    CHECK(c.supMk[k] == doctest::Approx(s2 * c.unit_M).epsilon(1e-12));
    CHECK(c.supFk[k] <= 72.0 * s2);
    CHECK(c.supW1k[k] == doctest::Approx(4.0 * s2).epsilon(1e-12));
  }

  const double strength = n.sum_sigma_sq() + n.tail_sigma_sq();
  CHECK(c.L_G ==
        doctest::Approx((4.0 + c.unit_F + c.unit_M) * strength).epsilon(1e-10));
}

TEST_CASE("compatibility check rejects an unbounded pairing") {
  auto n = NoiseSpec::standard(0.1, 1.0, 4);
  auto pot = sch::PotentialSpec::logarithmic(1.0, 2.0);
  // a non-degenerate mobility is a usage error, reported as such
  auto mob = sch::MobilitySpec::constant(1.0);
  CHECK_THROWS_AS(sch::compat_constants(n, pot, mob, 50001),
                  std::invalid_argument);

  // a shape that does not vanish at +-1 fails against the singular curvature
  auto flat = NoiseSpec::custom_shape([](double) { return 1.0; },
                                      [](double) { return 0.0; }, 1.0, 0.0,
                                      0.1, 1.0, 4);
  auto mdeg = sch::MobilitySpec::poly_degenerate(1.0);
  CHECK_THROWS_AS(sch::compat_constants(flat, pot, mdeg, 50001),
                  std::domain_error);
}

TEST_CASE("quadratic variation corrections at a flat state") {
  auto n = NoiseSpec::standard(0.1, 1.0, 16);
  auto reg = sch::build_lambda_reg(sch::PotentialSpec::polynomial(), 0.01);
  const int N = 48;
  Eigen::ArrayXd vals = Eigen::ArrayXd::Zero(N);
  const double w = 1.0 / N;  // unit box collocation weight
  // F'' at 0 is exactly -1 for this smoothing, shape is 1
  const double itoF = sch::ito_correction_F(n, reg, vals, w);
  CHECK(itoF == doctest::Approx(-0.01 * kSum16).epsilon(1e-12));

  auto tm = sch::build_m_eps(sch::MobilitySpec::poly_degenerate(1.0), 0.1);
  const double itoM = sch::ito_correction_M(n, tm, vals, w);
  CHECK(itoM == doctest::Approx(0.01 * kSum16).epsilon(1e-12));
}
