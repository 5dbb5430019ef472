#pragma once
// Persistence: time-series CSV, binary field snapshots, and the run
// manifest that makes any run replayable.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sch/integrator.hpp"

namespace sch {

// columns: t,mass,energy,dissipation_acc,ito_F_acc,ito_M_acc,entropy,
// sup_abs_phi,confinement_l2; values printed with %.17g
void write_timeseries(const std::vector<StateRecord>& records,
                      const std::string& path);

// 8-byte magic "SCHFLD01", then dim, modes per axis, the dim box lengths
// and the n^dim coefficients (tensor order j0 + n*j1), all as 64-bit
// little-endian floats
void write_snapshot(const SpectralField& f, const std::string& path);
SpectralField read_snapshot(const std::string& path);

struct RunManifest {
  std::string config_text;  // canonical echo, parses to the same run
  uint64_t seed = 0;
  int paths = 1;
  bool serial = true;
  std::string version;
  std::string command;  // subcommand that produced the outputs
  double wall_seconds = 0.0;
  std::vector<std::string> outputs;  // file names relative to the manifest
  std::map<std::string, std::string> verdicts;
};

// written atomically (temp file + rename)
void write_manifest(const RunManifest& m, const std::string& path);
RunManifest read_manifest(const std::string& path);

}  // namespace sch
