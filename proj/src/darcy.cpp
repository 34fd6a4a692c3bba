#include "redamge/darcy.hpp"

#include "redamge/error.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <cmath>

namespace redamge {

SparseMatrix assemble(const SparseMatrix& A_diag, const Relation& dof_truedof) {
  require(A_diag.rows() == dof_truedof.rows() && A_diag.cols() == dof_truedof.rows(), ErrorCode::dimension_mismatch,
          "assemble: A_diag does not match dof_truedof");
  const auto P = SparseMatrix::from_relation(dof_truedof);
  return num_triple_product(transpose(P), A_diag, P);
}

SparseMatrix assemble_level(const LevelData& level, std::span<const double> k) {
  if (k.empty()) return assemble(block_diagonal(level.matrices, level.dofs.element_dof), level.dofs.dof_truedof);
  require(static_cast<index_t>(k.size()) == level.num_elements(), ErrorCode::dimension_mismatch,
          "assemble_level: one permeability value per element expected");
  ElementMatrices em = level.matrices;
  for (index_t e = 0; e < level.num_elements(); ++e) {
    require(k[e] > 0.0, ErrorCode::invalid_argument, "assemble_level: permeability must be positive");
    auto row = level.dofs.element_dof.row(e);
    for (std::size_t i = 0; i < row.size(); ++i)
      for (std::size_t j = 0; j < row.size(); ++j)
        if (level.dofs.dof_kind[row[i]] == DofKind::velocity && level.dofs.dof_kind[row[j]] == DofKind::velocity)
          em.blocks[e](i, j) /= k[e];
    em.k[e] = k[e];
  }
  return assemble(block_diagonal(em, level.dofs.element_dof), level.dofs.dof_truedof);
}

DarcySystem::DarcySystem(const LevelData& level, const BoundarySpec& bc) : level_(&level), bc_(bc) {
  const index_t nt = level.num_truedofs();
  reduced_of_.assign(nt, -1);
  bool has_dirichlet = false;
  index_t pinned = -1;
  for (index_t t = 0; t < nt; ++t) {
    const auto a = level.truedof_attr[t];
    if (a == BoundaryAttr::dirichlet_in || a == BoundaryAttr::dirichlet_out) has_dirichlet = true;
  }
  if (!has_dirichlet)
    for (index_t t = 0; t < nt && pinned < 0; ++t)
      if (level.dofs.truedof_kind[t] == DofKind::pressure) pinned = t;
  for (index_t t = 0; t < nt; ++t) {
    if (level.truedof_attr[t] == BoundaryAttr::neumann || t == pinned) continue;
    reduced_of_[t] = n_reduced_++;
    truedof_of_.push_back(t);
  }
  rhs_.assign(n_reduced_, 0.0);
  for (index_t t = 0; t < nt; ++t) {
    const auto a = level.truedof_attr[t];
    if (a == BoundaryAttr::dirichlet_in || a == BoundaryAttr::dirichlet_out)
      rhs_[reduced_of_[t]] = -bc.pressure(a) * level.truedof_boundary_sign[t];
  }
  const auto& ed = level.dofs.element_dof;
  const auto& dt = level.dofs.dof_truedof;
  entries_.resize(level.num_elements());
  for (index_t e = 0; e < level.num_elements(); ++e) {
    auto row = ed.row(e);
    const auto& b = level.matrices.blocks[e];
    for (std::size_t i = 0; i < row.size(); ++i) {
      const index_t ri = reduced_of_[dt.row(row[i])[0]];
      if (ri < 0) continue;
      for (std::size_t j = 0; j < row.size(); ++j) {
        const index_t rj = reduced_of_[dt.row(row[j])[0]];
        if (rj < 0 || b(i, j) == 0.0) continue;
        const bool vv = level.dofs.dof_kind[row[i]] == DofKind::velocity &&
                        level.dofs.dof_kind[row[j]] == DofKind::velocity;
        entries_[e].push_back({ri, rj, b(i, j), vv});
      }
    }
  }
}

Solution DarcySystem::solve(std::span<const double> k) const {
  const auto& level = *level_;
  require(static_cast<index_t>(k.size()) == level.num_elements(), ErrorCode::dimension_mismatch,
          "DarcySystem::solve: one permeability value per element expected");
  std::vector<Eigen::Triplet<double>> trip;
  for (index_t e = 0; e < level.num_elements(); ++e) {
    require(k[e] > 0.0, ErrorCode::invalid_argument, "DarcySystem::solve: permeability must be positive");
    const double inv = 1.0 / k[e];
    for (const auto& en : entries_[e]) trip.emplace_back(en.i, en.j, en.velocity_block ? en.value * inv : en.value);
  }
  Eigen::SparseMatrix<double> A(n_reduced_, n_reduced_);
  A.setFromTriplets(trip.begin(), trip.end());
  A.makeCompressed();
  Eigen::Map<const Eigen::VectorXd> b(rhs_.data(), n_reduced_);

  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.analyzePattern(A);
  lu.factorize(A);
  if (lu.info() != Eigen::Success) fail(ErrorCode::solver, "DarcySystem::solve: factorization failed: " + lu.lastErrorMessage());
  Eigen::VectorXd x = lu.solve(b);
  if (lu.info() != Eigen::Success) fail(ErrorCode::solver, "DarcySystem::solve: back substitution failed");

  Solution s;
  const double bnorm = b.norm();
  const double rnorm = (A * x - b).norm();
  s.relative_residual = bnorm > 0.0 ? rnorm / bnorm : rnorm;
  if (!(s.relative_residual <= 1e-10))
    fail(ErrorCode::solver, "DarcySystem::solve: relative residual " + std::to_string(s.relative_residual));
  s.factor_nnz = static_cast<std::int64_t>(lu.nnzL()) + static_cast<std::int64_t>(lu.nnzU());

  s.x.assign(level.num_truedofs(), 0.0);
  for (index_t r = 0; r < n_reduced_; ++r) {
    const index_t t = truedof_of_[r];
    // The pressure unknown of the symmetric form is the negated physical pressure.
    s.x[t] = level.dofs.truedof_kind[t] == DofKind::pressure ? -x[r] : x[r];
  }
  const auto& ed = level.dofs.element_dof;
  const auto& dt = level.dofs.dof_truedof;
  for (index_t e = 0; e < level.num_elements(); ++e) {
    double div = 0.0;
    for (index_t d : ed.row(e))
      if (level.dofs.dof_kind[d] == DofKind::velocity) div += level.dofs.dof_sign[d] * s.x[dt.row(d)[0]];
    s.max_divergence = std::max(s.max_divergence, std::abs(div));
  }
  return s;
}

double boundary_flux(const LevelData& level, const Solution& sol, BoundaryAttr attr) {
  double flux = 0.0;
  for (index_t t = 0; t < level.num_truedofs(); ++t)
    if (level.truedof_attr[t] == attr) flux += level.truedof_boundary_sign[t] * sol.x[t];
  return flux;
}

double qoi_flux(const LevelData& level, const Solution& sol) {
  double meas = 0.0;
  for (index_t t = 0; t < level.num_truedofs(); ++t)
    if (level.truedof_attr[t] == BoundaryAttr::dirichlet_out) meas += level.truedof_measure[t];
  require(meas > 0.0, ErrorCode::invalid_argument, "qoi_flux: empty outflow boundary");
  return boundary_flux(level, sol, BoundaryAttr::dirichlet_out) / meas;
}

}  // namespace redamge
