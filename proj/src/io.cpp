#include "sch/io.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace sch {

namespace {

constexpr char kMagic[9] = "SCHFLD01";

void put_f64(std::string& out, double x) {
  uint64_t u;
  std::memcpy(&u, &x, 8);
  for (int i = 0; i < 8; ++i) out.push_back(char((u >> (8 * i)) & 0xff));
}

double get_f64(const std::string& in, size_t& pos) {
  if (pos + 8 > in.size())
    throw std::runtime_error("io: snapshot truncated");
  uint64_t u = 0;
  for (int i = 0; i < 8; ++i)
    u |= uint64_t(uint8_t(in[pos + i])) << (8 * i);
  pos += 8;
  double x;
  std::memcpy(&x, &u, 8);
  return x;
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("io: cannot open '" + path + "'");
  f.write(bytes.data(), std::streamsize(bytes.size()));
  f.flush();
  if (!f) throw std::runtime_error("io: write failed for '" + path + "'");
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("io: cannot open '" + path + "'");
  std::string out((std::istreambuf_iterator<char>(f)),
                  std::istreambuf_iterator<char>());
  if (f.bad()) throw std::runtime_error("io: read failed for '" + path + "'");
  return out;
}

}  // namespace

void write_timeseries(const std::vector<StateRecord>& records,
                      const std::string& path) {
  std::string out =
      "t,mass,energy,dissipation_acc,ito_F_acc,ito_M_acc,entropy,"
      "sup_abs_phi,confinement_l2\n";
  char buf[352];
  for (const auto& r : records) {
    std::snprintf(buf, sizeof buf,
                  "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                  r.t, r.mass, r.energy, r.dissipation_acc, r.ito_F_acc,
                  r.ito_M_acc, r.entropy, r.sup_abs_phi, r.confinement_l2);
    out += buf;
  }
  write_file(path, out);
}

void write_snapshot(const SpectralField& f, const std::string& path) {
  const auto& g = *f.grid;
  std::string out(kMagic, 8);
  put_f64(out, double(g.dim));
  put_f64(out, double(g.n));
  for (int d = 0; d < g.dim; ++d) put_f64(out, g.length[d]);
  // tensor order is independent of the eigenvalue sort
  for (int j1 = 0; j1 < (g.dim == 2 ? g.n : 1); ++j1)
    for (int j0 = 0; j0 < g.n; ++j0)
      put_f64(out, f.a[g.sorted_of_tensor[j0 + g.n * j1]]);
  write_file(path, out);
}

SpectralField read_snapshot(const std::string& path) {
  const std::string in = read_file(path);
  if (in.size() < 8 || std::memcmp(in.data(), kMagic, 8) != 0)
    throw std::runtime_error("io: '" + path + "' is not a field snapshot");
  size_t pos = 8;
  const int dim = int(get_f64(in, pos));
  const int n = int(get_f64(in, pos));
  if (dim < 1 || dim > 2 || n < 1)
    throw std::runtime_error("io: '" + path + "' has a corrupt header");
  std::array<double, 2> length{1.0, 1.0};
  for (int d = 0; d < dim; ++d) length[d] = get_f64(in, pos);
  auto grid = build_grid(dim, length, n);
  SpectralField f = zero_field(grid);
  for (int j1 = 0; j1 < (dim == 2 ? n : 1); ++j1)
    for (int j0 = 0; j0 < n; ++j0)
      f.a[grid->sorted_of_tensor[j0 + n * j1]] = get_f64(in, pos);
  if (pos != in.size())
    throw std::runtime_error("io: '" + path + "' has trailing bytes");
  return f;
}

void write_manifest(const RunManifest& m, const std::string& path) {
  nlohmann::json j;
  j["config"] = m.config_text;
  j["seed"] = m.seed;
  j["paths"] = m.paths;
  j["serial"] = m.serial;
  j["version"] = m.version;
  j["command"] = m.command;
  j["wall_seconds"] = m.wall_seconds;
  j["outputs"] = m.outputs;
  j["verdicts"] = m.verdicts;
  const std::string tmp = path + ".tmp";
  write_file(tmp, j.dump(2) + "\n");
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("io: cannot move '" + tmp + "' to '" + path +
                             "'");
}

RunManifest read_manifest(const std::string& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception&) {
    throw std::runtime_error("io: '" + path + "' is not a manifest");
  }
  RunManifest m;
  try {
    m.config_text = j.at("config").get<std::string>();
    m.seed = j.at("seed").get<uint64_t>();
    m.paths = j.at("paths").get<int>();
    m.serial = j.at("serial").get<bool>();
    m.version = j.at("version").get<std::string>();
    m.command = j.at("command").get<std::string>();
    m.wall_seconds = j.at("wall_seconds").get<double>();
    m.outputs = j.at("outputs").get<std::vector<std::string>>();
    m.verdicts = j.at("verdicts").get<std::map<std::string, std::string>>();
  } catch (const nlohmann::json::exception&) {
    throw std::runtime_error("io: '" + path + "' is missing manifest fields");
  }
  return m;
}

}  // namespace sch
