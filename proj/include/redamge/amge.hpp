#pragma once

// AE-local conforming interpolation by multiscale-mixed local solves, global P
// assembly and Galerkin coarse element matrices.

#include "redamge/level.hpp"

#include <Eigen/Dense>

#include <vector>

namespace redamge {

/// Coarse facets: maximal vertex-connected sets of fine velocity truedofs shared by
/// the same AE pair (or the same AE and boundary attribute), ordered by their lowest
/// fine truedof.
struct CoarseFacets {
  std::vector<std::vector<index_t>> fine;
  /// Fine flux weights sigma_f |f| / |F|, aligned with `fine`.
  std::vector<std::vector<double>> weight;
  std::vector<index_t> ae_a;
  /// -1 for boundary coarse facets.
  std::vector<index_t> ae_b;
  std::vector<BoundaryAttr> attr;
  /// +1 when the coarse reference normal points out of ae_a.
  std::vector<std::int8_t> orientation;
  std::vector<double> measure;
  /// Fine truedof -> coarse facet, -1 for AE-interior and pressure truedofs.
  std::vector<index_t> of_fine;

  index_t size() const { return static_cast<index_t>(fine.size()); }
  /// Sign of the coarse facet's reference normal relative to AE `ae` (outward = +1).
  int sign_in(index_t facet, index_t ae) const;
};

CoarseFacets build_coarse_facets(const LevelData& level, const Relation& AE_element);

struct LocalInterp {
  index_t ae = 0;
  /// Local rows: the fine truedofs touched by the AE, ascending.
  std::vector<index_t> fine_truedofs;
  /// Local columns: the AE's coarse facets ascending, then its pressure.
  std::vector<index_t> coarse_truedofs;
  Eigen::MatrixXd P;
  /// Local assembly of the AE's fine element matrices over fine_truedofs.
  Eigen::MatrixXd A;
};

/// Coarse truedof numbering: coarse facets first, then one pressure per AE.
std::vector<LocalInterp> build_local_interpolation(const LevelData& level, const Relation& AE_element,
                                                   const CoarseFacets& facets);

/// Merges the local interpolants; shared entries must agree to 1e-13.
SparseMatrix assemble_global_P(const std::vector<LocalInterp>& local, index_t n_fine_truedofs,
                               index_t n_coarse_truedofs);

/// A^c_T = P_T^T A_T P_T, symmetrized.
ElementMatrices coarse_element_matrices(const std::vector<LocalInterp>& local);

struct CoarseLevel {
  LevelData data;
  SparseMatrix P;
  CoarseFacets facets;
  std::vector<LocalInterp> local;
};

/// Coarse level on the AEs of `level`. The AEs must not straddle cores.
CoarseLevel coarsen_level(const LevelData& level, const Relation& AE_element);

}  // namespace redamge
