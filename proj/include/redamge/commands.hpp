#pragma once

// The three entry points behind the CLI. Failures surface as Error with codes
// config (bad configuration), build (hierarchy construction) or estimator.

#include "redamge/config.hpp"

#include <filesystem>
#include <iosfwd>

namespace redamge {

/// Writes plan.json (with and without redistribution) and prints both tables.
void cmd_plan(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log);
/// Builds the hierarchy and dumps mesh, per-level matrices, ledger.csv and timing.json.
void cmd_build(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log);
/// Pilot, allocation and main run; writes levels.csv, summary.json, ledger.csv and timing.json.
MlmcReport cmd_mlmc(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log);

}  // namespace redamge
