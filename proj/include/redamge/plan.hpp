#pragma once

// Hierarchy planning (element counts and active cores per level) and the
// multilevel hierarchy builder that follows the same rules on a real mesh.

#include "redamge/amge.hpp"
#include "redamge/redistribute.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace redamge {

struct PlanLevel {
  std::int64_t global_elements = 0;
  std::int64_t local_elements = 0;
  std::int64_t active_cores = 0;
  /// The level was reached through a redistribution step.
  bool redistributed = false;
  friend bool operator==(const PlanLevel&, const PlanLevel&) = default;
};

struct HierarchyPlan {
  std::vector<PlanLevel> levels;
  friend bool operator==(const HierarchyPlan&, const HierarchyPlan&) = default;
};

struct PlanInput {
  std::int64_t global_elements = 0;
  std::int64_t n_cores = 1;
  double factor = 8.0;
  std::int64_t beta_c = 8;
  std::int64_t min_local = 64;
  bool redistribution = true;
  /// 0 means no cap.
  int max_levels = 0;
};

/// Next level: global' = ceil(global / factor). When redistribution is on, more than
/// one core is active and ceil(global' / nc) < min_local, the core count drops once
/// to ceil(nc / beta_c). Coarsening stops when global' < max(nc', 2).
HierarchyPlan plan_hierarchy(const PlanInput& in);

std::string plan_to_json(const HierarchyPlan& plan);
HierarchyPlan plan_from_json(const std::string& text);

struct HierarchyConfig {
  int max_levels = 0;
  double factor = 8.0;
  index_t beta_c = 8;
  index_t min_local = 64;
  index_t n_cores = 1;
  bool redistribution = true;
  std::uint64_t seed = 0;
};

struct Level {
  LevelData data;
  /// This level's elements x the next finer level's elements (empty on level 0).
  Relation AE_element;
  /// Next finer truedofs x this level's truedofs (empty on level 0).
  SparseMatrix P;
  bool redistributed = false;
  std::optional<RedistributionMaps> maps;
  /// The finer level in the redistributed numbering, kept for verification.
  std::optional<LevelData> finer_redistributed;
  /// Interpolation from the redistributed finer level (P = Pi^T P_work).
  SparseMatrix P_work;
};

struct Hierarchy {
  std::vector<Level> levels;
  /// ledgers[l] holds the products performed on level l's data.
  std::vector<CommLedger> ledgers;
  double build_seconds = 0.0;

  HierarchyPlan realized_plan() const;
};

Hierarchy build_hierarchy(const Mesh& mesh, const HierarchyConfig& config);

/// Per level: relations, A_diag, P and (when present) redistribution maps, plus plan.json.
void dump_hierarchy(const Hierarchy& h, const std::filesystem::path& dir);

}  // namespace redamge
