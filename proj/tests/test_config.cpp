#include "doctest.h"

#include <stdexcept>
#include <string>

#include "sch/config.hpp"

namespace {

std::string error_of(const std::string& text) {
  try {
    sch::parse_config(text);
  } catch (const std::exception& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("an empty file resolves to the smooth default run") {
  auto pc = sch::parse_config("# nothing but a comment\n");
  CHECK(pc.solver.grid->n == 32);
  CHECK(pc.solver.grid->dim == 1);
  CHECK(pc.solver.grid->ncol == 48);
  CHECK(pc.solver.reg.mode == sch::RegularizedPotential::Mode::Lambda);
  CHECK(pc.solver.reg.param == 0.01);
  CHECK(pc.solver.mob.kind == sch::MobilityKind::Constant);
  CHECK(pc.solver.T == 0.1);
  CHECK(pc.solver.dt == 1e-4);
  CHECK(pc.solver.effective_kappa() == 1.0);  // defaults to sup m
  CHECK(pc.solver.noise.sigma0 == 0.0);
  CHECK(pc.solver.seed == 12345);
  CHECK(pc.paths == 1);
  CHECK(pc.threads == 1);
  CHECK_FALSE(pc.has_study);
}

TEST_CASE("a singular potential pulls in the whole truncation pipeline") {
  auto pc = sch::parse_config(
      "potential.kind = logarithmic\n"
      "potential.theta = 1.0\n"
      "potential.theta0 = 2.0\n"
      "mobility.kind = polynomial\n"
      "noise.sigma0 = 0.1\n");
  CHECK(pc.solver.reg.mode == sch::RegularizedPotential::Mode::Eps);
  CHECK(pc.solver.reg.param == 0.05);  // singular default
  REQUIRE(pc.solver.tmob.has_value());
  CHECK(pc.solver.tmob->eps == 0.05);
  CHECK(pc.solver.noise.eps == 0.05);
  CHECK_NOTHROW(sch::validate(pc.solver));
}

TEST_CASE("explicit smoothing and truncation knobs are exclusive") {
  CHECK(error_of("potential.lambda = 0.01\npotential.epsilon = 0.05\n") ==
        "potential: set exactly one of lambda and epsilon");
  // a singular potential cannot take the smoothing branch
  CHECK(error_of("potential.kind = logarithmic\npotential.lambda = 0.01\n") !=
        "");
}

TEST_CASE("kind-specific keys are rejected for the wrong kind") {
  CHECK(error_of("potential.theta = 1.5\n").find("logarithmic") !=
        std::string::npos);
  CHECK(error_of("potential.kind = logarithmic\npotential.c_f = 3\n")
            .find("polynomial") != std::string::npos);
  CHECK(error_of("mobility.kind = polynomial\nmobility.m0 = 2\n")
            .find("constant") != std::string::npos);
  CHECK(error_of("init.kind = cosine\ninit.value = 0.5\n")
            .find("constant") != std::string::npos);
  CHECK(error_of("domain.length1 = 2.0\n").find("dim = 2") !=
        std::string::npos);
}

TEST_CASE("temperatures must be ordered") {
  const std::string bad =
      "potential.kind = logarithmic\n"
      "potential.theta = 2.0\n"
      "potential.theta0 = 1.0\n"
      "mobility.kind = polynomial\n";
  CHECK(error_of(bad).find("theta") != std::string::npos);
}

TEST_CASE("parser reports the offending line") {
  CHECK(error_of("domain.n = 16\nwhat is this\n").find("line 2") !=
        std::string::npos);
  CHECK(error_of("domain.n = 16\ndomain.n = 8\n").find("duplicate") !=
        std::string::npos);
  const std::string unknown = error_of("domain.modes = 16\n");
  CHECK(unknown.find("unknown key") != std::string::npos);
  CHECK(unknown.find("domain.modes") != std::string::npos);
  CHECK(error_of("domain.n = sixteen\n").find("expects") != std::string::npos);
}

TEST_CASE("mismatched truncation parameters are rejected") {
  const std::string bad =
      "potential.kind = logarithmic\n"
      "potential.epsilon = 0.1\n"
      "mobility.kind = polynomial\n"
      "mobility.epsilon = 0.05\n";
  CHECK(error_of(bad).find("mobility.epsilon") != std::string::npos);
}

TEST_CASE("study block needs both halves") {
  CHECK(error_of("study.axis = dt\n") == "config: study.levels missing");
  CHECK(error_of("study.levels = 1e-4, 5e-5, 2.5e-5\n") ==
        "config: study.axis missing");
  auto pc = sch::parse_config(
      "study.axis = dt\nstudy.levels = 4e-4, 2e-4, 1e-4\n");
  CHECK(pc.has_study);
  CHECK(pc.study_axis == sch::StudyAxis::Dt);
  REQUIRE(pc.study_levels.size() == 3);
  CHECK(pc.study_levels[0] == 4e-4);
}

TEST_CASE("canonical echo is a parser fixed point") {
  const std::string rich =
      "domain.dim = 2\n"
      "domain.length = 1.5\n"
      "domain.length1 = 0.75\n"
      "domain.n = 12\n"
      "potential.kind = logarithmic\n"
      "potential.theta = 0.8\n"
      "potential.theta0 = 1.9\n"
      "potential.epsilon = 0.1\n"
      "mobility.kind = polynomial\n"
      "mobility.exponent = 2\n"
      "noise.sigma0 = 0.25\n"
      "noise.p = 0.8\n"
      "noise.K = 9\n"
      "time.T = 0.02\n"
      "time.dt = 2e-4\n"
      "init.kind = uniform\n"
      "init.amplitude = 0.3\n"
      "run.paths = 7\n"
      "run.seed = 99\n"
      "study.axis = eps\n"
      "study.levels = 0.1, 0.05, 0.025\n";
  auto pc = sch::parse_config(rich);
  CHECK(!pc.canonical.empty());
  auto again = sch::parse_config(pc.canonical);
  CHECK(again.canonical == pc.canonical);
  CHECK(again.solver.grid->n == 12);
  CHECK(again.solver.noise.K == 9);
  CHECK(again.paths == 7);
  CHECK(again.study_levels == pc.study_levels);
}

TEST_CASE("overridden state re-echoes consistently") {
  auto pc = sch::parse_config("run.paths = 2\n");
  pc.paths = 5;
  pc.solver.seed = 777;
  const std::string echo = sch::canonical_of(pc);
  auto back = sch::parse_config(echo);
  CHECK(back.paths == 5);
  CHECK(back.solver.seed == 777);
}

TEST_CASE("validation failures surface through the parser") {
  // the truncation pipeline inspects the initial field while validating,
  // so a cosine mode outside the retained range is caught here
  const std::string bad_mode =
      "domain.n = 4\n"
      "potential.kind = logarithmic\n"
      "mobility.kind = polynomial\n"
      "init.kind = cosine\n"
      "init.mode = 9\n";
  CHECK(error_of(bad_mode).find("mode") != std::string::npos);
  // initial datum too close to the contact set for the truncation
  const std::string hot =
      "potential.kind = logarithmic\n"
      "potential.epsilon = 0.1\n"
      "mobility.kind = polynomial\n"
      "init.kind = constant\n"
      "init.value = 0.95\n";
  CHECK(error_of(hot).find("sup") != std::string::npos);
  // non-integer step count over the horizon
  CHECK(error_of("time.T = 0.1\ntime.dt = 3e-4\n") != "");
}
