#include "redamge/redistribute.hpp"

#include "redamge/error.hpp"
#include "redamge/partitioner.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace redamge {

namespace {

bool is_bijection(const Relation& r) {
  if (r.rows() != r.cols() || !is_partition(r)) return false;
  for (index_t i = 0; i < r.rows(); ++i)
    if (r.row_size(i) != 1) return false;
  return true;
}

std::vector<index_t> identity_owner(index_t n) {
  std::vector<index_t> o(n);
  std::iota(o.begin(), o.end(), 0);
  return o;
}

}  // namespace

Relation build_core_core(const Relation& core_element, const Relation& element_element) {
  return bool_multiply(bool_multiply(core_element, element_element), transpose(core_element));
}

Relation coarsen_cores(const Relation& core_core, index_t beta_c, std::uint64_t seed) {
  require(beta_c >= 1, ErrorCode::invalid_argument, "coarsen_cores: beta_c must be >= 1");
  require(core_core.rows() == core_core.cols(), ErrorCode::invalid_argument, "coarsen_cores: core_core must be square");
  std::vector<index_t> active;
  for (index_t c = 0; c < core_core.rows(); ++c)
    if (core_core.row_size(c) > 0) active.push_back(c);
  require(!active.empty(), ErrorCode::invalid_argument, "coarsen_cores: no active cores");
  const auto n_groups = static_cast<index_t>((active.size() + beta_c - 1) / beta_c);
  auto groups = partition_subset(core_core, active, n_groups, seed);
  std::vector<std::vector<index_t>> rows(core_core.rows());
  for (auto& g : groups) rows[g.front()] = std::move(g);
  return Relation::from_rows("Core", "core", core_core.rows(), rows);
}

ElementRedistribution redistribute_elements(const Relation& Core_core, const Relation& core_element) {
  ElementRedistribution r;
  r.Core_element = bool_multiply(Core_core, core_element);
  require(is_partition(r.Core_element), ErrorCode::invalid_argument,
          "redistribute_elements: Core_element is not a partition of the elements");
  std::vector<index_t> order;
  order.reserve(core_element.cols());
  for (index_t g = 0; g < r.Core_element.rows(); ++g)
    for (index_t e : r.Core_element.row(g)) order.push_back(e);
  r.newelement_element = Relation::from_map("newelement", core_element.col_kind(), core_element.cols(), order);
  return r;
}

Agglomeration agglomerate_after_redistribution(const Relation& Core_element, const Relation& newelement_element,
                                               const Relation& element_element, double factor,
                                               std::uint64_t seed) {
  const auto ne_e = newelement_element;
  const auto newelement_newelement = bool_multiply(bool_multiply(ne_e, element_element), transpose(ne_e));
  const auto Core_newelement = bool_multiply(Core_element, transpose(ne_e));
  Agglomeration a;
  a.AE_newelement = partition_groups(Core_newelement, newelement_newelement, factor, seed, "AE");
  a.AE_element = bool_multiply(a.AE_newelement, ne_e);
  return a;
}

DofRedistribution build_newdof_dof(const Relation& AE_element, const Relation& element_dof,
                                   const Relation& newelement_element) {
  require(is_partition(element_dof), ErrorCode::invalid_argument, "build_newdof_dof: element_dof is not decoupled");
  require(is_partition(AE_element), ErrorCode::invalid_argument, "build_newdof_dof: AE_element is not a partition");
  const auto AE_dof = bool_multiply(AE_element, element_dof);
  std::vector<index_t> order;
  order.reserve(element_dof.cols());
  for (index_t a = 0; a < AE_dof.rows(); ++a)
    for (index_t d : AE_dof.row(a)) order.push_back(d);
  DofRedistribution r;
  r.newdof_dof = Relation::from_map("newdof", element_dof.col_kind(), element_dof.cols(), order);
  require(is_bijection(r.newdof_dof), ErrorCode::invalid_argument, "build_newdof_dof: newdof_dof is not a bijection");
  r.newelement_newdof = bool_multiply(bool_multiply(newelement_element, element_dof), transpose(r.newdof_dof));
  return r;
}

SparseMatrix redistribute_element_matrices(const SparseMatrix& A_diag, const Relation& newdof_dof) {
  require(A_diag.rows() == newdof_dof.cols() && A_diag.cols() == newdof_dof.cols(), ErrorCode::dimension_mismatch,
          "redistribute_element_matrices: A_diag does not match newdof_dof");
  const auto R = SparseMatrix::from_relation(newdof_dof);
  return num_triple_product(R, A_diag, transpose(R));
}

TruedofSelection select_newtruedofs(const Relation& newdof_dof, const Relation& dof_truedof) {
  const auto newdof_truedof = bool_multiply(newdof_dof, dof_truedof);
  const auto newdof_newdof = bool_multiply(newdof_truedof, transpose(newdof_truedof));
  std::vector<index_t> reps;
  for (index_t d = 0; d < newdof_newdof.rows(); ++d) {
    auto cls = newdof_newdof.row(d);
    require(!cls.empty(), ErrorCode::invalid_argument, "select_newtruedofs: empty equivalence class");
    if (cls.front() == d) reps.push_back(d);
  }
  TruedofSelection s;
  s.newtruedof_newdof = Relation::from_map("newtruedof", "newdof", newdof_dof.rows(), reps);
  s.newtruedof_truedof = bool_multiply(s.newtruedof_newdof, newdof_truedof);
  require(is_bijection(s.newtruedof_truedof), ErrorCode::invalid_argument,
          "select_newtruedofs: newtruedof_truedof is not a permutation");
  s.newdof_newtruedof = bool_multiply(newdof_newdof, transpose(s.newtruedof_newdof));
  return s;
}

SparseMatrix compose_interpolation(const Relation& new_old, const SparseMatrix& P_new) {
  require(new_old.rows() == P_new.rows(), ErrorCode::dimension_mismatch,
          "compose_interpolation: P_new rows differ from the new numbering");
  return multiply(transpose(SparseMatrix::from_relation(new_old)), P_new);
}

SparseMatrix permutation_matrix(const Relation& perm) { return SparseMatrix::from_relation(perm); }

RedistributedLevel redistribute_level(const LevelData& level, index_t beta_c, double factor,
                                      std::uint64_t seed, CommLedger& ledger, int li) {
  const auto& core_element = level.layout.core_element;
  const index_t n_total = core_element.rows();
  const auto elem_owner = level.layout.element_owner();
  const auto core_id = identity_owner(n_total);
  const auto d_owner = dof_owner(level);

  RedistributedLevel out;
  auto& m = out.maps;
  m.beta_c = beta_c;

  // Agglomeration with redistribution
  const auto ce_ee = dist_bool_multiply(core_element, level.element_element, core_id, elem_owner, ledger, li,
                                        "redistribute:core_core");
  m.core_core = dist_bool_multiply(ce_ee, transpose(core_element), core_id, elem_owner, ledger, li,
                                   "redistribute:core_core");
  m.Core_core = coarsen_cores(m.core_core, beta_c, seed);
  auto er = redistribute_elements(m.Core_core, core_element);
  dist_bool_multiply(m.Core_core, core_element, core_id, core_id, ledger, li, "redistribute:Core_element");
  m.Core_element = er.Core_element;
  m.newelement_element = er.newelement_element;
  auto ag = agglomerate_after_redistribution(m.Core_element, m.newelement_element, level.element_element, factor, seed);
  m.AE_newelement = ag.AE_newelement;
  m.AE_element = ag.AE_element;

  const auto new_elem_owner = derive_owner(m.newelement_element, partition_owner(m.Core_element));
  const auto AE_owner = derive_owner(m.AE_newelement, new_elem_owner);

  // Dof and matrix redistribution
  const auto& element_dof = level.dofs.element_dof;
  dist_bool_multiply(m.AE_element, element_dof, AE_owner, elem_owner, ledger, li, "redistribute:AE_dof");
  auto dr = build_newdof_dof(m.AE_element, element_dof, m.newelement_element);
  m.newdof_dof = dr.newdof_dof;
  m.newelement_newdof = dr.newelement_newdof;
  const auto newdof_owner = derive_owner(transpose(m.newelement_newdof), new_elem_owner);

  const auto A_diag = block_diagonal(level.matrices, element_dof);
  const auto R = SparseMatrix::from_relation(m.newdof_dof);
  const auto RA = dist_multiply(R, A_diag, newdof_owner, d_owner, ledger, li, "redistribute:A_diag");
  const auto A_new = multiply(RA, transpose(R));
  dist_bool_multiply(m.newdof_dof, level.dofs.dof_truedof, newdof_owner, d_owner, ledger, li,
                     "redistribute:newdof_truedof");
  auto ts = select_newtruedofs(m.newdof_dof, level.dofs.dof_truedof);
  {
    const auto newdof_truedof = bool_multiply(m.newdof_dof, level.dofs.dof_truedof);
    const auto truedof_newdof = transpose(newdof_truedof);
    dist_bool_multiply(newdof_truedof, truedof_newdof, newdof_owner, derive_owner(truedof_newdof, newdof_owner),
                       ledger, li, "redistribute:newdof_newdof");
  }
  m.newtruedof_newdof = ts.newtruedof_newdof;
  m.newtruedof_truedof = ts.newtruedof_truedof;

  // The level in the new numbering.
  auto& d = out.data;
  const auto ne_map = partition_owner(transpose(m.newelement_element));  // newelement -> element
  const auto nd_map = partition_owner(transpose(m.newdof_dof));          // newdof -> dof
  const auto nt_map = partition_owner(transpose(m.newtruedof_truedof));  // newtruedof -> truedof
  const index_t ne = level.num_elements();
  const index_t nd = level.dofs.num_dofs();
  const index_t nt = level.num_truedofs();

  d.dofs.element_dof = m.newelement_newdof.relabeled("element", "dof");
  d.dofs.dof_truedof = ts.newdof_newtruedof.relabeled("dof", "truedof");
  d.dofs.dof_sign.resize(nd);
  d.dofs.dof_kind.resize(nd);
  for (index_t i = 0; i < nd; ++i) {
    d.dofs.dof_sign[i] = level.dofs.dof_sign[nd_map[i]];
    d.dofs.dof_kind[i] = level.dofs.dof_kind[nd_map[i]];
  }
  d.dofs.truedof_kind.resize(nt);
  d.truedof_measure.resize(nt);
  d.truedof_attr.resize(nt);
  d.truedof_boundary_sign.resize(nt);
  for (index_t t = 0; t < nt; ++t) {
    const index_t o = nt_map[t];
    d.dofs.truedof_kind[t] = level.dofs.truedof_kind[o];
    d.truedof_measure[t] = level.truedof_measure[o];
    d.truedof_attr[t] = level.truedof_attr[o];
    d.truedof_boundary_sign[t] = level.truedof_boundary_sign[o];
  }
  d.truedof_vertex = bool_multiply(m.newtruedof_truedof.relabeled("truedof", "truedof"), level.truedof_vertex);
  d.element_measure.resize(ne);
  d.matrices.k.resize(ne);
  d.matrices.blocks.resize(ne);
  for (index_t e = 0; e < ne; ++e) {
    d.element_measure[e] = level.element_measure[ne_map[e]];
    d.matrices.k[e] = level.matrices.k[ne_map[e]];
  }
  // Element blocks of A_diag_new; every stored entry must stay inside one newelement.
  const auto nd_elem = partition_owner(d.dofs.element_dof);
  for (index_t i = 0; i < A_new.rows(); ++i)
    for (index_t j : A_new.row_cols(i))
      require(nd_elem[i] == nd_elem[j], ErrorCode::build, "redistribute_level: A_diag_new is not block diagonal");
  for (index_t e = 0; e < ne; ++e) {
    auto row = d.dofs.element_dof.row(e);
    const auto n = static_cast<Eigen::Index>(row.size());
    Eigen::MatrixXd b(n, n);
    for (Eigen::Index a = 0; a < n; ++a)
      for (Eigen::Index c = 0; c < n; ++c) b(a, c) = A_new.at(row[a], row[c]);
    d.matrices.blocks[e] = std::move(b);
  }
  d.element_element = bool_multiply(bool_multiply(m.newelement_element, level.element_element),
                                    transpose(m.newelement_element))
                          .relabeled("element", "element");
  d.layout.n_cores_total = n_total;
  d.layout.core_element =
      bool_multiply(m.Core_element, transpose(m.newelement_element)).relabeled("core", "element");
  return out;
}

}  // namespace redamge
