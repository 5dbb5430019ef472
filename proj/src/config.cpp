#include "sch/config.hpp"

#include <cstdio>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace sch {

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string fmtg(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

struct KeyTable {
  std::map<std::string, std::pair<std::string, int>> kv;  // key -> (value, line)

  std::optional<std::string> take(const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    std::string v = it->second.first;
    kv.erase(it);
    return v;
  }
};

double to_double(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return x;
  } catch (...) {
    throw std::invalid_argument("config: key '" + key +
                                "' expects a number, got '" + v + "'");
  }
}

long long to_int(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    long long x = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return x;
  } catch (...) {
    throw std::invalid_argument("config: key '" + key +
                                "' expects an integer, got '" + v + "'");
  }
}

uint64_t to_u64(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    unsigned long long x = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return x;
  } catch (...) {
    throw std::invalid_argument("config: key '" + key +
                                "' expects an unsigned integer, got '" + v +
                                "'");
  }
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty())
      throw std::invalid_argument("config: key '" + key +
                                  "' has an empty list entry");
    out.push_back(to_double(key, item));
  }
  if (out.empty())
    throw std::invalid_argument("config: key '" + key + "' expects a list");
  return out;
}

}  // namespace

ParsedConfig parse_config(const std::string& text) {
  KeyTable tab;
  {
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
      ++lineno;
      const size_t hash = line.find('#');
      if (hash != std::string::npos) line = line.substr(0, hash);
      line = trim(line);
      if (line.empty()) continue;
      const size_t eq = line.find('=');
      if (eq == std::string::npos)
        throw std::invalid_argument(
            "config line " + std::to_string(lineno) +
            ": expected 'section.key = value'");
      const std::string key = trim(line.substr(0, eq));
      const std::string val = trim(line.substr(eq + 1));
      if (key.find('.') == std::string::npos || key.empty() || val.empty())
        throw std::invalid_argument(
            "config line " + std::to_string(lineno) +
            ": expected 'section.key = value'");
      if (tab.kv.count(key))
        throw std::invalid_argument("config line " + std::to_string(lineno) +
                                    ": duplicate key '" + key + "'");
      tab.kv[key] = {val, lineno};
    }
  }

  ParsedConfig pc;

  // domain
  int dim = 1, n = 32;
  double length0 = 1.0, length1 = -1.0, oversample = 1.5;
  if (auto v = tab.take("domain.dim")) dim = int(to_int("domain.dim", *v));
  if (auto v = tab.take("domain.length"))
    length0 = to_double("domain.length", *v);
  if (auto v = tab.take("domain.length1")) {
    if (dim != 2)
      throw std::invalid_argument("config: domain.length1 needs dim = 2");
    length1 = to_double("domain.length1", *v);
  }
  if (length1 < 0.0) length1 = length0;
  if (auto v = tab.take("domain.n")) n = int(to_int("domain.n", *v));
  if (auto v = tab.take("domain.oversample"))
    oversample = to_double("domain.oversample", *v);
  pc.solver.grid = build_grid(dim, {length0, length1}, n, oversample);

  // potential
  std::string pkind = "polynomial";
  if (auto v = tab.take("potential.kind")) pkind = *v;
  PotentialSpec pot;
  if (pkind == "polynomial") {
    double c_f = 1.0;
    if (auto v = tab.take("potential.c_f"))
      c_f = to_double("potential.c_f", *v);
    pot = PotentialSpec::polynomial(c_f);
  } else if (pkind == "logarithmic") {
    double theta = 1.0, theta0 = 2.0;
    if (auto v = tab.take("potential.theta"))
      theta = to_double("potential.theta", *v);
    if (auto v = tab.take("potential.theta0"))
      theta0 = to_double("potential.theta0", *v);
    pot = PotentialSpec::logarithmic(theta, theta0);
  } else if (pkind == "double_obstacle") {
    pot = PotentialSpec::double_obstacle();
  } else {
    throw std::invalid_argument(
        "config: potential.kind must be polynomial, logarithmic or "
        "double_obstacle");
  }
  if (tab.kv.count("potential.theta") || tab.kv.count("potential.theta0"))
    throw std::invalid_argument(
        "config: potential.theta and potential.theta0 apply to the "
        "logarithmic kind");
  if (tab.kv.count("potential.c_f"))
    throw std::invalid_argument(
        "config: potential.c_f is only adjustable for the polynomial kind");

  std::optional<double> lambda, epsilon;
  if (auto v = tab.take("potential.lambda"))
    lambda = to_double("potential.lambda", *v);
  if (auto v = tab.take("potential.epsilon"))
    epsilon = to_double("potential.epsilon", *v);
  if (lambda && epsilon)
    throw std::invalid_argument(
        "potential: set exactly one of lambda and epsilon");
  if (!lambda && !epsilon) {
    if (pot.singular)
      epsilon = 0.05;
    else
      lambda = 0.01;
  }

  // mobility
  std::string mkind = "constant";
  if (auto v = tab.take("mobility.kind")) mkind = *v;
  if (mkind == "constant") {
    double m0 = 1.0;
    if (auto v = tab.take("mobility.m0")) m0 = to_double("mobility.m0", *v);
    pc.solver.mob = MobilitySpec::constant(m0);
  } else if (mkind == "polynomial") {
    double expo = 1.0;
    if (auto v = tab.take("mobility.exponent"))
      expo = to_double("mobility.exponent", *v);
    pc.solver.mob = MobilitySpec::poly_degenerate(expo);
  } else {
    throw std::invalid_argument(
        "config: mobility.kind must be constant or polynomial");
  }
  if (tab.kv.count("mobility.m0"))
    throw std::invalid_argument(
        "config: mobility.m0 applies to the constant kind");
  if (tab.kv.count("mobility.exponent"))
    throw std::invalid_argument(
        "config: mobility.exponent applies to the polynomial kind");
  if (auto v = tab.take("mobility.epsilon")) {
    const double me = to_double("mobility.epsilon", *v);
    if (!epsilon || me != *epsilon)
      throw std::invalid_argument(
          "config: mobility.epsilon must equal potential.epsilon");
  }

  // noise
  double sigma0 = 0.0, pdecay = 1.0;
  int K = 16;
  if (auto v = tab.take("noise.sigma0"))
    sigma0 = to_double("noise.sigma0", *v);
  if (auto v = tab.take("noise.p")) pdecay = to_double("noise.p", *v);
  if (auto v = tab.take("noise.K")) K = int(to_int("noise.K", *v));
  pc.solver.noise = NoiseSpec::standard(sigma0, pdecay, K);

  // time
  if (auto v = tab.take("time.T")) pc.solver.T = to_double("time.T", *v);
  if (auto v = tab.take("time.dt")) pc.solver.dt = to_double("time.dt", *v);
  if (auto v = tab.take("time.kappa"))
    pc.solver.kappa = to_double("time.kappa", *v);

  // init
  std::string ikind = "constant";
  if (auto v = tab.take("init.kind")) ikind = *v;
  if (ikind == "constant") {
    double value = 0.0;
    if (auto v = tab.take("init.value")) value = to_double("init.value", *v);
    pc.solver.init = InitSpec::constant(value);
  } else if (ikind == "cosine") {
    double amp = 0.1;
    int mode = 1;
    if (auto v = tab.take("init.amplitude"))
      amp = to_double("init.amplitude", *v);
    if (auto v = tab.take("init.mode")) mode = int(to_int("init.mode", *v));
    pc.solver.init = InitSpec::cosine(amp, mode);
  } else if (ikind == "uniform") {
    double amp = 0.1;
    if (auto v = tab.take("init.amplitude"))
      amp = to_double("init.amplitude", *v);
    pc.solver.init = InitSpec::uniform_random(amp);
  } else {
    throw std::invalid_argument(
        "config: init.kind must be constant, cosine or uniform");
  }
  if (tab.kv.count("init.value"))
    throw std::invalid_argument(
        "config: init.value applies to the constant kind");
  if (tab.kv.count("init.amplitude") || tab.kv.count("init.mode"))
    throw std::invalid_argument(
        "config: init.amplitude and init.mode apply to the cosine and "
        "uniform kinds");

  // run
  if (auto v = tab.take("run.paths"))
    pc.paths = int(to_int("run.paths", *v));
  if (auto v = tab.take("run.seed")) pc.solver.seed = to_u64("run.seed", *v);
  if (auto v = tab.take("run.record_every"))
    pc.solver.record_every = int(to_int("run.record_every", *v));
  if (auto v = tab.take("run.threads"))
    pc.threads = int(to_int("run.threads", *v));
  if (pc.paths < 1)
    throw std::invalid_argument("config: run.paths must be >= 1");
  if (pc.threads < 1)
    throw std::invalid_argument("config: run.threads must be >= 1");

  // study
  auto axis = tab.take("study.axis");
  auto levels = tab.take("study.levels");
  if (axis && !levels)
    throw std::invalid_argument("config: study.levels missing");
  if (levels && !axis)
    throw std::invalid_argument("config: study.axis missing");
  if (axis) {
    pc.has_study = true;
    pc.study_axis = study_axis_of(*axis);
    pc.study_levels = to_list("study.levels", *levels);
  }

  if (!tab.kv.empty()) {
    const auto& it = *tab.kv.begin();
    throw std::invalid_argument("config line " +
                                std::to_string(it.second.second) +
                                ": unknown key '" + it.first + "'");
  }

  // regularization and the truncation pipeline
  if (lambda) {
    pc.solver.reg = build_lambda_reg(pot, *lambda);
  } else {
    pc.solver.reg = build_eps_reg(pot, *epsilon);
    pc.solver.tmob = build_m_eps(pc.solver.mob, *epsilon);
    pc.solver.noise = truncate_eps(pc.solver.noise, *epsilon);
  }
  validate(pc.solver);
  pc.canonical = canonical_of(pc);
  return pc;
}

std::string canonical_of(const ParsedConfig& pc) {
  const auto& s = pc.solver;
  const auto& g = *s.grid;
  const PotentialSpec& pot = s.reg.origin;

  std::ostringstream os;
  os << "domain.dim = " << g.dim << "\n";
  os << "domain.length = " << fmtg(g.length[0]) << "\n";
  if (g.dim == 2) os << "domain.length1 = " << fmtg(g.length[1]) << "\n";
  os << "domain.n = " << g.n << "\n";
  os << "domain.oversample = " << fmtg(double(g.ncol) / g.n) << "\n";

  switch (pot.kind) {
    case PotentialKind::Polynomial:
      os << "potential.kind = polynomial\n";
      os << "potential.c_f = " << fmtg(pot.c_f) << "\n";
      break;
    case PotentialKind::Logarithmic:
      os << "potential.kind = logarithmic\n";
      os << "potential.theta = " << fmtg(pot.theta) << "\n";
      os << "potential.theta0 = " << fmtg(pot.theta0) << "\n";
      break;
    case PotentialKind::DoubleObstacle:
      os << "potential.kind = double_obstacle\n";
      break;
    default:
      throw std::logic_error("config echo: custom kinds have no file form");
  }
  if (s.reg.mode == RegularizedPotential::Mode::Lambda)
    os << "potential.lambda = " << fmtg(s.reg.param) << "\n";
  else
    os << "potential.epsilon = " << fmtg(s.reg.param) << "\n";

  switch (s.mob.kind) {
    case MobilityKind::Constant:
      os << "mobility.kind = constant\n";
      os << "mobility.m0 = " << fmtg(s.mob.m0) << "\n";
      break;
    case MobilityKind::PolyDegenerate:
      os << "mobility.kind = polynomial\n";
      os << "mobility.exponent = " << fmtg(s.mob.alpha) << "\n";
      break;
    default:
      throw std::logic_error("config echo: custom kinds have no file form");
  }

  os << "noise.sigma0 = " << fmtg(s.noise.sigma0) << "\n";
  os << "noise.p = " << fmtg(s.noise.p) << "\n";
  os << "noise.K = " << s.noise.K << "\n";
  os << "time.T = " << fmtg(s.T) << "\n";
  os << "time.dt = " << fmtg(s.dt) << "\n";
  os << "time.kappa = " << fmtg(s.kappa) << "\n";
  switch (s.init.kind) {
    case InitKind::Constant:
      os << "init.kind = constant\n";
      os << "init.value = " << fmtg(s.init.value) << "\n";
      break;
    case InitKind::Cosine:
      os << "init.kind = cosine\n";
      os << "init.amplitude = " << fmtg(s.init.amplitude) << "\n";
      os << "init.mode = " << s.init.mode << "\n";
      break;
    case InitKind::UniformRandom:
      os << "init.kind = uniform\n";
      os << "init.amplitude = " << fmtg(s.init.amplitude) << "\n";
      break;
  }
  os << "run.paths = " << pc.paths << "\n";
  os << "run.seed = " << s.seed << "\n";
  os << "run.record_every = " << s.record_every << "\n";
  os << "run.threads = " << pc.threads << "\n";
  if (pc.has_study) {
    const char* an = pc.study_axis == StudyAxis::N        ? "n"
                     : pc.study_axis == StudyAxis::Dt     ? "dt"
                     : pc.study_axis == StudyAxis::Lambda ? "lambda"
                                                          : "eps";
    os << "study.axis = " << an << "\n";
    os << "study.levels = ";
    for (size_t i = 0; i < pc.study_levels.size(); ++i)
      os << (i ? "," : "") << fmtg(pc.study_levels[i]);
    os << "\n";
  }
  return os.str();
}

}  // namespace sch
