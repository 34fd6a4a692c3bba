#pragma once

// Mixed RT0/P0 Darcy on any hierarchy level: assembly A = P^T A_diag P,
// Neumann elimination, sparse direct solve and the outflow flux.

#include "redamge/level.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace redamge {

/// dof_truedof^T A_diag dof_truedof.
SparseMatrix assemble(const SparseMatrix& A_diag, const Relation& dof_truedof);

/// Assembled level operator; when k is given, each element's velocity block is divided by k.
SparseMatrix assemble_level(const LevelData& level, std::span<const double> k = {});

struct Solution {
  /// Velocity truedofs hold normal fluxes, pressure truedofs the pressure.
  std::vector<double> x;
  double relative_residual = 0.0;
  /// max over elements of |net outward flux|.
  double max_divergence = 0.0;
  /// nnz(L) + nnz(U) of the factorization.
  std::int64_t factor_nnz = 0;
};

class DarcySystem {
public:
  DarcySystem(const LevelData& level, const BoundarySpec& bc);

  Solution solve(std::span<const double> k) const;
  /// Unreduced size and kept unknowns after Neumann elimination.
  index_t num_truedofs() const { return static_cast<index_t>(reduced_of_.size()); }
  index_t num_unknowns() const { return n_reduced_; }

private:
  struct Entry {
    index_t i, j;
    double value;
    bool velocity_block;
  };

  const LevelData* level_;
  BoundarySpec bc_;
  std::vector<index_t> reduced_of_;
  std::vector<index_t> truedof_of_;
  index_t n_reduced_ = 0;
  std::vector<double> rhs_;
  /// Per element, the block entries in reduced numbering (dropped rows omitted).
  std::vector<std::vector<Entry>> entries_;
};

/// Total outward flux through the boundary facets carrying `attr`.
double boundary_flux(const LevelData& level, const Solution& sol, BoundaryAttr attr);
/// Mean normal outflow: flux through the outflow boundary over its measure.
double qoi_flux(const LevelData& level, const Solution& sol);

}  // namespace redamge
