#include "sch/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "sch/config.hpp"
#include "sch/diagnostics.hpp"
#include "sch/io.hpp"
#include "sch/version.hpp"

namespace sch {

namespace {

namespace fs = std::filesystem;

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cli: cannot open '" + path + "'");
  return std::string((std::istreambuf_iterator<char>(f)),
                     std::istreambuf_iterator<char>());
}

ParsedConfig load(const CommandOptions& opts) {
  ParsedConfig pc = parse_config(slurp(opts.config_path));
  if (opts.paths) pc.paths = *opts.paths;
  if (opts.seed) pc.solver.seed = *opts.seed;
  if (opts.serial) pc.threads = 1;
  if (pc.paths < 1)
    throw std::invalid_argument("cli: --paths must be >= 1");
  pc.canonical = canonical_of(pc);
  return pc;
}

std::string fmtg(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

struct CmdOutcome {
  std::vector<std::string> outputs;  // names relative to the out dir
  std::map<std::string, std::string> verdicts;
  bool pass = true;
  std::string detail;  // extra context, printed before the verdicts
};

const char* axis_name(StudyAxis a) {
  switch (a) {
    case StudyAxis::N: return "n";
    case StudyAxis::Dt: return "dt";
    case StudyAxis::Lambda: return "lambda";
    case StudyAxis::Eps: return "eps";
  }
  return "?";
}

CmdOutcome do_simulate(const ParsedConfig& pc, const fs::path& out) {
  CmdOutcome o;
  const auto runs = run_paths(pc.solver, pc.paths, pc.threads);
  for (int p = 0; p < pc.paths; ++p) {
    const std::string csv = "path_" + std::to_string(p) + ".csv";
    write_timeseries(runs[p].records, (out / csv).string());
    o.outputs.push_back(csv);
    const std::string snap = "final_" + std::to_string(p) + ".snap";
    write_snapshot(runs[p].final_state.phi, (out / snap).string());
    o.outputs.push_back(snap);
  }
  o.verdicts["simulate"] = "PASS (" + std::to_string(pc.paths) + " paths)";
  return o;
}

CmdOutcome do_study(const ParsedConfig& pc, StudyAxis axis,
                    const fs::path& out) {
  if (!pc.has_study)
    throw std::invalid_argument("study: config has no study.levels");
  if (pc.study_axis != axis)
    throw std::invalid_argument(
        "study: config study.axis disagrees with the command axis");
  const auto& levels = pc.study_levels;

  CmdOutcome o;
  const std::string an = axis_name(axis);
  double base_dt = 0.0;
  if (axis == StudyAxis::Dt)
    base_dt = *std::min_element(levels.begin(), levels.end());

  // one recorded path per level, then the across-level error table
  for (size_t i = 0; i < levels.size(); ++i) {
    SolverConfig c = config_at_level(pc.solver, axis, levels[i]);
    const auto pr = simulate_path(c, 0, base_dt);
    const std::string csv =
        "study_" + an + "_level_" + std::to_string(i) + ".csv";
    write_timeseries(pr.records, (out / csv).string());
    o.outputs.push_back(csv);
  }

  const RateTable rt =
      convergence_study(axis, levels, pc.solver, pc.paths, pc.threads);
  std::string table = "level,next_level,error\n";
  for (size_t i = 0; i + 1 < levels.size(); ++i)
    table += fmtg(levels[i]) + "," + fmtg(levels[i + 1]) + "," +
             fmtg(rt.errors[i]) + "\n";
  const std::string merged = "study_" + an + ".csv";
  {
    std::ofstream f(out / merged, std::ios::binary | std::ios::trunc);
    if (!f)
      throw std::runtime_error("io: cannot open '" +
                               (out / merged).string() + "'");
    f << table;
  }
  o.outputs.push_back(merged);
  o.detail = rt.detail;
  o.pass = rt.pass;
  o.verdicts["study_" + an] =
      std::string(rt.pass ? "PASS" : "FAIL") + " slope=" + fmtg(rt.slope) +
      (rt.monotone ? "" : " non-monotone");
  return o;
}

CmdOutcome do_check_compat(const ParsedConfig& pc, const fs::path& out) {
  CmdOutcome o;
  NoiseCompat nc;
  // the constants pair the untruncated shape with the origin coefficients
  NoiseSpec n0 = pc.solver.noise;
  n0.eps = 0.0;
  try {
    nc = compat_constants(n0, pc.solver.reg.origin, pc.solver.mob);
  } catch (const std::domain_error& e) {
    o.pass = false;
    o.verdicts["compat"] = std::string("FAIL ") + e.what();
    return o;
  }
  std::string table = "k,sigma,supW1k,supFk,supMk\n";
  for (int k = 0; k < pc.solver.noise.K; ++k)
    table += std::to_string(k) + "," + fmtg(pc.solver.noise.sigma(k)) + "," +
             fmtg(nc.supW1k[k]) + "," + fmtg(nc.supFk[k]) + "," +
             fmtg(nc.supMk[k]) + "\n";
  {
    std::ofstream f(out / "compat.csv", std::ios::binary | std::ios::trunc);
    if (!f)
      throw std::runtime_error("io: cannot open '" +
                               (out / "compat.csv").string() + "'");
    f << table;
  }
  o.outputs.push_back("compat.csv");
  o.verdicts["compat"] = "PASS L_G=" + fmtg(nc.L_G) +
                         " unit_F=" + fmtg(nc.unit_F) +
                         " unit_M=" + fmtg(nc.unit_M);
  return o;
}

CmdOutcome do_check_energy(const ParsedConfig& pc, const fs::path& out) {
  const long steps = std::llround(pc.solver.T / pc.solver.dt);
  std::vector<double> ts;
  for (long k : {steps / 4, steps / 2, (3 * steps) / 4, steps})
    if (k > 0 && (ts.empty() ||
                  std::llround(ts.back() / pc.solver.dt) != k))
      ts.push_back(double(k) * pc.solver.dt);
  const McReport rep =
      mc_energy_inequality(pc.solver, pc.paths, ts, pc.threads);

  std::string table = "t,residual,se,allowance\n";
  for (size_t i = 0; i < rep.t_checkpoints.size(); ++i)
    table += fmtg(rep.t_checkpoints[i]) + "," + fmtg(rep.residual[i]) + "," +
             fmtg(rep.residual_se[i]) + "," + fmtg(rep.allowance[i]) + "\n";
  CmdOutcome o;
  {
    std::ofstream f(out / "energy.csv", std::ios::binary | std::ios::trunc);
    if (!f)
      throw std::runtime_error("io: cannot open '" +
                               (out / "energy.csv").string() + "'");
    f << table;
  }
  o.outputs.push_back("energy.csv");
  o.detail = rep.detail;
  o.pass = rep.pass;
  o.verdicts["energy"] = rep.pass ? "PASS" : "FAIL";
  return o;
}

CmdOutcome do_check_confinement(const ParsedConfig& pc, const fs::path& out) {
  std::vector<double> eps;
  if (pc.has_study && pc.study_axis == StudyAxis::Eps)
    eps = pc.study_levels;
  else
    eps = {0.2, 0.1, 0.05, 0.025};
  const RateTable rt =
      confinement_scaling(pc.solver, eps, pc.paths, pc.threads);

  std::string table = "eps,metric\n";
  for (size_t i = 0; i < eps.size(); ++i)
    table += fmtg(eps[i]) + "," + fmtg(rt.errors[i]) + "\n";
  CmdOutcome o;
  {
    std::ofstream f(out / "confinement.csv",
                    std::ios::binary | std::ios::trunc);
    if (!f)
      throw std::runtime_error(
          "io: cannot open '" + (out / "confinement.csv").string() + "'");
    f << table;
  }
  o.outputs.push_back("confinement.csv");
  o.detail = rt.detail;
  o.pass = rt.pass;
  o.verdicts["confinement"] =
      std::string(rt.pass ? "PASS" : "FAIL") +
      (rt.vacuous ? " vacuously confined" : " slope=" + fmtg(rt.slope));
  return o;
}

CmdOutcome dispatch(const std::string& command, const ParsedConfig& pc,
                    const fs::path& out) {
  std::istringstream ss(command);
  std::string head, arg;
  ss >> head >> arg;
  if (head == "simulate") return do_simulate(pc, out);
  if (head == "study") return do_study(pc, study_axis_of(arg), out);
  if (head == "check") {
    if (arg == "compat") return do_check_compat(pc, out);
    if (arg == "energy") return do_check_energy(pc, out);
    if (arg == "confinement") return do_check_confinement(pc, out);
  }
  throw std::invalid_argument("cli: unknown recorded command '" + command +
                              "'");
}

int finish(const ParsedConfig& pc, const std::string& command,
           const fs::path& out, const CmdOutcome& o, double wall) {
  RunManifest m;
  m.config_text = pc.canonical;
  m.seed = pc.solver.seed;
  m.paths = pc.paths;
  m.serial = pc.threads == 1;
  m.version = kVersion;
  m.command = command;
  m.wall_seconds = wall;
  m.outputs = o.outputs;
  m.verdicts = o.verdicts;
  write_manifest(m, (out / "manifest.json").string());
  if (!o.detail.empty()) std::cout << o.detail;
  for (const auto& [name, verdict] : o.verdicts)
    std::cout << name << ": " << verdict << "\n";
  return o.pass ? 0 : 1;
}

int run_command(const std::string& command, const CommandOptions& opts) {
  const ParsedConfig pc = load(opts);
  const fs::path out(opts.out_dir);
  fs::create_directories(out);
  const auto t0 = std::chrono::steady_clock::now();
  const CmdOutcome o = dispatch(command, pc, out);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return finish(pc, command, out, o, wall);
}

}  // namespace

int run_simulate(const CommandOptions& opts) {
  return run_command("simulate", opts);
}

int run_study(const std::string& axis, const CommandOptions& opts) {
  study_axis_of(axis);  // reject bad names before any work
  return run_command("study " + axis, opts);
}

int run_check_compat(const CommandOptions& opts) {
  return run_command("check compat", opts);
}

int run_check_energy(const CommandOptions& opts) {
  return run_command("check energy", opts);
}

int run_check_confinement(const CommandOptions& opts) {
  return run_command("check confinement", opts);
}

int run_replay(const std::string& manifest_path) {
  const RunManifest m = read_manifest(manifest_path);
  ParsedConfig pc = parse_config(m.config_text);
  pc.paths = m.paths;
  pc.solver.seed = m.seed;
  pc.threads = 1;

  const fs::path dir = fs::path(manifest_path).parent_path();
  const fs::path scratch = dir / "replay_check";
  fs::remove_all(scratch);
  fs::create_directories(scratch);

  const CmdOutcome o = dispatch(m.command, pc, scratch);
  (void)o;

  bool all_match = true;
  for (const auto& name : m.outputs) {
    std::string a, b;
    try {
      a = slurp((dir / name).string());
      b = slurp((scratch / name).string());
    } catch (const std::exception& e) {
      std::cout << "replay: " << name << " MISSING (" << e.what() << ")\n";
      all_match = false;
      continue;
    }
    const bool eq = a == b;
    all_match = all_match && eq;
    std::cout << "replay: " << name << (eq ? " MATCH" : " MISMATCH") << "\n";
  }
  if (all_match) {
    fs::remove_all(scratch);
    std::cout << "replay: PASS\n";
    return 0;
  }
  std::cout << "replay: FAIL (scratch kept at " << scratch.string() << ")\n";
  return 1;
}

}  // namespace sch
