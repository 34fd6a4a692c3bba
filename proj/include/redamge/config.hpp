#pragma once

// Run configuration. The file is INI with the sections [mesh], [hierarchy],
// [sampler], [mlmc], [plan] and [run]; unknown sections or keys are rejected.

#include "redamge/meshtopo.hpp"
#include "redamge/mlmc_driver.hpp"
#include "redamge/plan.hpp"
#include "redamge/sampler.hpp"

#include <cstdint>
#include <filesystem>
#include <string>

namespace redamge {

struct RunConfig {
  int dim = 2;
  index_t n = 16;
  BoundarySpec boundary;
  HierarchyConfig hierarchy;
  /// Element count for `plan`; 0 uses the mesh size n^dim.
  std::int64_t plan_global_elements = 0;
  SamplerParams sampler;
  MlmcOptions mlmc;
  /// Plain Monte Carlo samples on level 0 for comparison; 0 disables.
  std::int64_t reference_samples = 0;
  /// Also run without redistribution and report the cost ratio.
  bool compare = false;
  std::uint64_t seed = 1;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);
/// key is "section.name"; the value is parsed as in the file.
void set_config_value(RunConfig& cfg, const std::string& key, const std::string& value);
void validate(const RunConfig& cfg);
/// Canonical INI text; parse_config(to_ini(c)) reproduces c.
std::string to_ini(const RunConfig& cfg);

}  // namespace redamge
