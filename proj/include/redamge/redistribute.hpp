#pragma once

// Agglomeration with redistribution and the matching dof / element-matrix
// redistribution, written as relation and matrix products.

#include "redamge/level.hpp"
#include "redamge/relmat.hpp"
#include "redamge/simcores.hpp"

#include <cstdint>

namespace redamge {

struct RedistributionMaps {
  index_t beta_c = 1;
  Relation core_core;
  /// n_cores_total x n_cores_total; each group is stored in the row of its lowest core id.
  Relation Core_core;
  Relation Core_element;
  Relation newelement_element;
  Relation AE_newelement;
  Relation AE_element;
  Relation newdof_dof;
  Relation newelement_newdof;
  Relation newtruedof_newdof;
  Relation newtruedof_truedof;
};

/// core_core = core_element x element_element x element_core.
Relation build_core_core(const Relation& core_element, const Relation& element_element);

/// Groups the active cores (nonempty rows) into ceil(n_active / beta_c) connected groups.
Relation coarsen_cores(const Relation& core_core, index_t beta_c, std::uint64_t seed = 0);

struct ElementRedistribution {
  Relation Core_element;
  /// Newelements are ordered by (Core, element).
  Relation newelement_element;
};
ElementRedistribution redistribute_elements(const Relation& Core_core, const Relation& core_element);

struct Agglomeration {
  Relation AE_newelement;
  Relation AE_element;
};
/// Partitions each Core's newelements into ceil(count / factor) connected AEs.
Agglomeration agglomerate_after_redistribution(const Relation& Core_element, const Relation& newelement_element,
                                               const Relation& element_element, double factor,
                                               std::uint64_t seed = 0);

struct DofRedistribution {
  Relation newdof_dof;
  Relation newelement_newdof;
};
/// Newdofs are numbered by walking AE_dof = AE_element x element_dof row by row.
DofRedistribution build_newdof_dof(const Relation& AE_element, const Relation& element_dof,
                                   const Relation& newelement_element);

/// newdof_dof x A_diag x dof_newdof.
SparseMatrix redistribute_element_matrices(const SparseMatrix& A_diag, const Relation& newdof_dof);

struct TruedofSelection {
  Relation newtruedof_newdof;
  Relation newtruedof_truedof;
  /// The redistributed dof_truedof.
  Relation newdof_newtruedof;
};
/// One representative per class of newdof_newdof, the lowest newdof index.
/// Newtruedofs are numbered in the order of their representatives.
TruedofSelection select_newtruedofs(const Relation& newdof_dof, const Relation& dof_truedof);

/// transpose(new_old) x P_new: moves an interpolation back to the old numbering.
SparseMatrix compose_interpolation(const Relation& new_old, const SparseMatrix& P_new);

struct RedistributedLevel {
  /// The level in the new numbering (newelements, newdofs, newtruedofs) on the new layout.
  LevelData data;
  RedistributionMaps maps;
};

/// Agglomeration with redistribution, then dof and matrix redistribution, on one level. Every product is logged in the ledger.
RedistributedLevel redistribute_level(const LevelData& level, index_t beta_c, double factor,
                                      std::uint64_t seed, CommLedger& ledger, int level_index);

/// Permutation relation as a 0/1 matrix.
SparseMatrix permutation_matrix(const Relation& perm);

}  // namespace redamge
