#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "sch/integrator.hpp"
#include "sch/rng.hpp"

namespace {

sch::PotentialSpec zero_potential() {
  auto z = [](double) { return 0.0; };
  return sch::PotentialSpec::custom(z, z, z, z, z, z, 0.0, false);
}

sch::SolverConfig plain_config(int n, double dt, double T) {
  sch::SolverConfig c;
  c.grid = sch::build_grid(1, {1.0, 1.0}, n);
  c.reg = sch::build_lambda_reg(sch::PotentialSpec::polynomial(), 0.01);
  c.mob = sch::MobilitySpec::constant(1.0);
  c.noise = sch::NoiseSpec::standard(0.0);
  c.init = sch::InitSpec::cosine(0.1, 1);
  c.dt = dt;
  c.T = T;
  return c;
}

}  // namespace

TEST_CASE("initial data presets") {
  auto g = sch::build_grid(1, {2.0, 1.0}, 8);

  auto fc = sch::initial_field(g, sch::InitSpec::constant(0.3), 1);
  CHECK(fc.mean() == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(fc.h1_seminorm_sq() == 0.0);

  auto fw = sch::initial_field(g, sch::InitSpec::cosine(0.2, 2), 1);
  const auto vals = sch::to_values(fw);
  for (int i = 0; i < g->ncol; ++i) {
    const double want = 0.2 * std::cos(2.0 * M_PI * g->xcol[0][i] / 2.0);
    CHECK(vals[i] == doctest::Approx(want).epsilon(1e-13));
  }
  CHECK_THROWS_AS(sch::initial_field(g, sch::InitSpec::cosine(0.2, 8), 1),
                  std::invalid_argument);
}

TEST_CASE("random initial data refines instead of redrawing") {
  auto g8 = sch::build_grid(1, {1.0, 1.0}, 8);
  auto g16 = sch::build_grid(1, {1.0, 1.0}, 16);
  auto f8 = sch::initial_field(g8, sch::InitSpec::uniform_random(0.4), 99);
  auto f16 = sch::initial_field(g16, sch::InitSpec::uniform_random(0.4), 99);
  for (int j = 0; j < 8; ++j) {
    CHECK(f16.a[g16->sorted_of_tensor[j]] == f8.a[g8->sorted_of_tensor[j]]);
  }
  // a different seed gives a different field
  auto fo = sch::initial_field(g8, sch::InitSpec::uniform_random(0.4), 100);
  CHECK(f8.a != fo.a);
}

TEST_CASE("chemical potential of a pure mode under a zero potential") {
  auto g = sch::build_grid(1, {1.0, 1.0}, 8);
  auto reg = sch::build_lambda_reg(zero_potential(), 0.01);
  sch::SpectralField phi = sch::zero_field(g);
  const int p1 = g->sorted_of_tensor[1];
  phi.a[p1] = 0.5;
  auto mu = sch::chemical_potential(phi, reg);
  CHECK(mu.a[p1] == doctest::Approx(0.5 * M_PI * M_PI).epsilon(1e-13));
  for (int m = 0; m < g->num_modes(); ++m) {
    if (m != p1) CHECK(std::abs(mu.a[m]) < 1e-13);
  }
}

TEST_CASE("one explicit step of the linearized flow is the euler formula") {
  auto c = plain_config(16, 1e-5, 1e-4);
  c.reg = sch::build_lambda_reg(zero_potential(), 0.01);
  c.kappa = 0.0;

  sch::PathState st;
  st.phi = sch::zero_field(c.grid);
  const int p1 = c.grid->sorted_of_tensor[1];
  st.phi.a[p1] = 1.0;
  st.mass_ledger = 0.0;
  Eigen::VectorXd dW;  // noise is off

  sch::step(st, c, c.dt, dW);
  const double a1 = M_PI * M_PI;
  CHECK(st.phi.a[p1] == doctest::Approx(1.0 - c.dt * a1 * a1).epsilon(1e-12));
  // left-endpoint dissipation tally: dt * int |grad mu|^2 = dt * alpha^3
  CHECK(st.dissipation_acc ==
        doctest::Approx(c.dt * a1 * a1 * a1).epsilon(1e-10));
}

TEST_CASE("implicit stabilizer divides exactly by the biharmonic factor") {
  auto c = plain_config(16, 1e-3, 1e-2);
  c.reg = sch::build_lambda_reg(zero_potential(), 0.01);
  c.kappa = 2.0;

  sch::PathState st;
  st.phi = sch::zero_field(c.grid);
  const int p2 = c.grid->sorted_of_tensor[2];
  st.phi.a[p2] = 0.7;
  Eigen::VectorXd dW;
  sch::step(st, c, c.dt, dW);

  const double al = 4.0 * M_PI * M_PI;
  const double want = 0.7 + (c.dt * (-al * al * 0.7)) /
                                (1.0 + c.dt * 2.0 * al * al);
  CHECK(st.phi.a[p2] == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("a flat state barely moves and its mass never does") {
  auto c = plain_config(16, 1e-4, 5e-3);
  c.init = sch::InitSpec::constant(0.4);
  auto run = sch::simulate_path(c, 0);
  const auto& fin = run.final_state;
  CHECK(fin.phi.a[0] == 0.4);  // drift leaves mode 0 alone, bitwise
  for (int m = 1; m < c.grid->num_modes(); ++m) {
    CHECK(std::abs(fin.phi.a[m]) < 1e-12);
  }
}

TEST_CASE("mass ledger shadows the zero coefficient bitwise") {
  auto c = plain_config(16, 1e-4, 2e-2);
  c.noise = sch::NoiseSpec::standard(0.3, 1.0, 8);
  c.init = sch::InitSpec::constant(0.1);
  auto run = sch::simulate_path(c, 3);
  CHECK(run.final_state.phi.a[0] == run.final_state.mass_ledger);
  // with the noise off the mass is frozen exactly
  c.noise = sch::NoiseSpec::standard(0.0);
  auto quiet = sch::simulate_path(c, 3);
  CHECK(quiet.final_state.phi.a[0] == 0.1);
  CHECK(quiet.final_state.sup_abs_mass == 0.1);
}

TEST_CASE("deterministic runs dissipate the free energy") {
  auto c = plain_config(32, 1e-5, 2e-3);
  c.init = sch::InitSpec::cosine(0.3, 1);
  c.record_every = 20;
  auto run = sch::simulate_path(c, 0);
  REQUIRE(run.records.size() > 3);
  const double e0 = run.records[0].energy;
  for (size_t i = 1; i < run.records.size(); ++i) {
    CHECK(run.records[i].energy <= run.records[i - 1].energy + 1e-9 * e0);
  }
  CHECK(run.records.back().dissipation_acc > 0.0);
}

TEST_CASE("drift matches a brute-force quadrature of the weak form") {
  // oracle: assemble -sum_x w m(phi) grad(mu_h) . grad(e_m) from explicit
  // cosine evaluations, first on the solver's own midpoint grid (must agree
  // to roundoff), then on a 64x finer one (bounds the collocation error)
  auto g = sch::build_grid(1, {1.0, 1.0}, 12);
  auto reg = sch::build_lambda_reg(sch::PotentialSpec::polynomial(), 0.05);
  auto m_of_r = [](double r) { return 0.6 + 0.3 * std::sin(r); };

  sch::SpectralField phi = sch::zero_field(g);
  for (int m = 0; m < g->num_modes(); ++m) {
    phi.a[m] = 0.5 * sch::philox_uniform_sym(17, 0, m, 0) /
               std::pow(1.0 + g->alpha[m], 1.2);
  }
  auto mu = sch::chemical_potential(phi, reg);
  auto out = sch::drift(phi, reg, m_of_r);

  auto mode_norm = [&](int j) { return j == 0 ? 1.0 : std::sqrt(2.0); };
  auto brute = [&](int fine) {
    const double h = 1.0 / fine;
    Eigen::VectorXd b = Eigen::VectorXd::Zero(g->num_modes());
    for (int q = 0; q < fine; ++q) {
      const double x = (q + 0.5) * h;
      double phx = 0.0, dmu = 0.0;
      for (int j = 0; j < g->n; ++j) {
        const int pos = g->sorted_of_tensor[j];
        phx += phi.a[pos] * mode_norm(j) * std::cos(j * M_PI * x);
        dmu += mu.a[pos] * -mode_norm(j) * j * M_PI * std::sin(j * M_PI * x);
      }
      for (int j = 1; j < g->n; ++j) {
        const int pos = g->sorted_of_tensor[j];
        const double d = -mode_norm(j) * j * M_PI * std::sin(j * M_PI * x);
        b[pos] -= h * m_of_r(phx) * dmu * d;
      }
    }
    return b;
  };
  CHECK((out.a - brute(g->ncol)).lpNorm<Eigen::Infinity>() < 1e-12);
  CHECK((out.a - brute(64 * g->ncol)).lpNorm<Eigen::Infinity>() < 5e-6);
}

TEST_CASE("brownian increments are addressable and nest dyadically") {
  sch::NoiseDraws d{2024, 5, 1e-3, 6};
  auto i0 = d.increment(0);
  CHECK(i0.size() == 6);
  CHECK(d.increment(0) == i0);  // pure
  CHECK(d.increment(1) != i0);

  Eigen::VectorXd manual = (d.increment(0) + d.increment(1)) +
                           (d.increment(2) + d.increment(3));
  CHECK(d.increment_sum(0, 4) == manual);  // same tree, bitwise

  // increments scale like sqrt(dt) in distribution: crude variance check
  double var = 0.0;
  const int trials = 4000;
  for (int i = 0; i < trials; ++i) var += d.increment(i)[0] * d.increment(i)[0];
  CHECK(var / trials == doctest::Approx(1e-3).epsilon(0.1));
}

TEST_CASE("repeated runs are bitwise identical, across refinement too") {
  auto c = plain_config(8, 2e-4, 2e-3);
  c.noise = sch::NoiseSpec::standard(0.2, 1.0, 4);
  auto r1 = sch::simulate_path(c, 7);
  auto r2 = sch::simulate_path(c, 7);
  CHECK(r1.final_state.phi.a == r2.final_state.phi.a);

  // the same coarse run driven off the half-step clock is still deterministic
  auto r3 = sch::simulate_path(c, 7, 1e-4);
  auto r4 = sch::simulate_path(c, 7, 1e-4);
  CHECK(r3.final_state.phi.a == r4.final_state.phi.a);

  // refinement coupling: the fine run and the rebased coarse run share the
  // same underlying draws, so their gap is the scheme error, not O(1) noise
  auto cf = c;
  cf.dt = 1e-4;
  auto rf = sch::simulate_path(cf, 7);
  const double coupled =
      (rf.final_state.phi.a - r3.final_state.phi.a).norm();
  const double uncoupled =
      (rf.final_state.phi.a - r1.final_state.phi.a).norm();
  CHECK(coupled < 0.5 * uncoupled);
}

TEST_CASE("record cadence covers start, stride and final time") {
  auto c = plain_config(8, 1e-3, 1e-2);
  c.record_every = 3;
  auto run = sch::simulate_path(c, 0);
  REQUIRE(run.records.size() == 5);
  CHECK(run.records[0].t == 0.0);
  CHECK(run.records[1].t == doctest::Approx(3e-3).epsilon(1e-12));
  CHECK(run.records.back().t == doctest::Approx(1e-2).epsilon(1e-12));
  CHECK(run.records[0].phi.size() == 0);

  c.keep_fields = true;
  auto kept = sch::simulate_path(c, 0);
  CHECK(kept.records[0].phi.size() == c.grid->num_modes());
}

TEST_CASE("pipeline invariants are enforced") {
  // smoothed potential with a degenerate mobility is rejected
  auto c = plain_config(8, 1e-4, 1e-3);
  c.mob = sch::MobilitySpec::poly_degenerate(1.0);
  CHECK_THROWS_AS(sch::validate(c), std::invalid_argument);

  // truncation pipeline wants initial data inside the seams
  sch::SolverConfig e;
  e.grid = sch::build_grid(1, {1.0, 1.0}, 16);
  e.reg = sch::build_eps_reg(sch::PotentialSpec::logarithmic(1.0, 2.0), 0.1);
  e.mob = sch::MobilitySpec::poly_degenerate(1.0);
  e.tmob = sch::build_m_eps(e.mob, 0.1);
  e.noise = sch::truncate_eps(sch::NoiseSpec::standard(0.1), 0.1);
  e.init = sch::InitSpec::constant(0.95);
  e.T = 1e-3;
  e.dt = 1e-4;
  CHECK_THROWS_AS(sch::validate(e), std::invalid_argument);
  e.init = sch::InitSpec::constant(0.5);
  CHECK_NOTHROW(sch::validate(e));

  // horizon must sit on the step grid
  auto c2 = plain_config(8, 3e-4, 1e-3);
  CHECK_THROWS_AS(sch::validate(c2), std::invalid_argument);
}

TEST_CASE("blow-up guard halts a wildly unstable explicit run") {
  auto c = plain_config(32, 1e-2, 1.0);
  c.kappa = 0.0;  // no stabilizer, explicit biharmonic at CFL >> 1
  c.init = sch::InitSpec::cosine(0.5, 31);
  CHECK_THROWS_AS(sch::simulate_path(c, 0), std::runtime_error);
}

TEST_CASE("energy bookkeeping matches a hand value at time zero") {
  auto c = plain_config(16, 1e-4, 1e-3);
  c.reg = sch::build_lambda_reg(zero_potential(), 0.01);
  c.init = sch::InitSpec::cosine(0.3, 1);
  auto run = sch::simulate_path(c, 0);
  // 1/2 |grad phi|^2 with phi = 0.3 cos(pi x): 0.5 * 0.09/2 * pi^2
  CHECK(run.records[0].energy ==
        doctest::Approx(0.25 * 0.09 * M_PI * M_PI).epsilon(1e-12));
  CHECK(run.records[0].grad_norm_sq ==
        doctest::Approx(0.5 * 0.09 * M_PI * M_PI).epsilon(1e-12));
  CHECK(run.records[0].F_l1 == 0.0);
  // collocation midpoints never hit the crest exactly
  CHECK(run.records[0].sup_abs_phi == doctest::Approx(0.3).epsilon(5e-3));
}
