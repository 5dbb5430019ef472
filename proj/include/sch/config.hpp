#pragma once
// Line-oriented run configuration: `section.key = value`, one per line,
// `#` comments. Sections: domain, potential, mobility, noise, time, init,
// run, study. Unknown keys are hard errors; the resolved config is echoed
// back in a canonical form that parses to the same run.

#include <string>
#include <vector>

#include "sch/diagnostics.hpp"
#include "sch/integrator.hpp"

namespace sch {

struct ParsedConfig {
  SolverConfig solver;
  int paths = 1;
  int threads = 1;
  bool has_study = false;
  StudyAxis study_axis = StudyAxis::Dt;
  std::vector<double> study_levels;
  std::string canonical;  // resolved echo, byte-stable
};

ParsedConfig parse_config(const std::string& text);

// the canonical echo, regenerated from the resolved state (used after
// command-line overrides); parse_config(canonical_of(pc)) reproduces pc
std::string canonical_of(const ParsedConfig& pc);

}  // namespace sch
