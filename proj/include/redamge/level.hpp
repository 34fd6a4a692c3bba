#pragma once

// Everything a hierarchy level carries: topology, dof space, element matrices
// (assembled with k = 1) and the core layout. Level 0 is built from a mesh;
// coarser levels come from amge::coarsen_level.

#include "redamge/meshtopo.hpp"
#include "redamge/simcores.hpp"

#include <filesystem>
#include <vector>

namespace redamge {

struct LevelData {
  DofSpace dofs;
  std::vector<double> element_measure;
  std::vector<double> truedof_measure;
  std::vector<BoundaryAttr> truedof_attr;
  /// Outward sign of a boundary velocity truedof's reference normal; 0 elsewhere.
  std::vector<std::int8_t> truedof_boundary_sign;
  /// Fine-mesh vertices touched by each velocity truedof; pressure rows are empty.
  Relation truedof_vertex;
  ElementMatrices matrices;
  Relation element_element;
  CoreLayout layout;

  index_t num_elements() const { return dofs.element_dof.rows(); }
  index_t num_truedofs() const { return dofs.num_truedofs(); }
  index_t num_velocity_truedofs() const;
};

LevelData fine_level(const Mesh& mesh, index_t n_cores, std::uint64_t seed = 0);

/// Owner core of every dof and truedof under the level's layout.
std::vector<index_t> dof_owner(const LevelData& level);
std::vector<index_t> truedof_owner(const LevelData& level);

/// Level relations and A_diag as Matrix Market files.
void dump_level(const LevelData& level, const std::filesystem::path& dir);

}  // namespace redamge
