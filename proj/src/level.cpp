#include "redamge/level.hpp"

#include "redamge/error.hpp"
#include "redamge/matrix_market.hpp"

#include <algorithm>

namespace redamge {

index_t LevelData::num_velocity_truedofs() const {
  return static_cast<index_t>(
      std::count(dofs.truedof_kind.begin(), dofs.truedof_kind.end(), DofKind::velocity));
}

LevelData fine_level(const Mesh& mesh, index_t n_cores, std::uint64_t seed) {
  LevelData l;
  l.dofs = build_dofs(mesh);
  l.element_measure = mesh.element_measure;
  const index_t nt = l.dofs.num_truedofs();
  l.truedof_measure.resize(nt);
  l.truedof_attr.assign(nt, BoundaryAttr::interior);
  l.truedof_boundary_sign.assign(nt, 0);
  std::vector<std::vector<index_t>> tv(nt);
  for (index_t f = 0; f < mesh.num_facets; ++f) {
    l.truedof_measure[f] = mesh.facet_measure[f];
    l.truedof_attr[f] = mesh.facet_attr[f];
    auto v = mesh.facet_vertex.row(f);
    tv[f].assign(v.begin(), v.end());
  }
  for (index_t e = 0; e < mesh.num_elements; ++e) l.truedof_measure[mesh.num_facets + e] = mesh.element_measure[e];
  const auto dof_true = l.dofs.dof_truedof;
  for (index_t d = 0; d < l.dofs.num_dofs(); ++d) {
    const index_t t = dof_true.row(d)[0];
    if (l.truedof_attr[t] != BoundaryAttr::interior) l.truedof_boundary_sign[t] = l.dofs.dof_sign[d];
  }
  l.truedof_vertex = Relation::from_rows("truedof", "vertex", mesh.num_vertices, tv);
  std::vector<double> ones(mesh.num_elements, 1.0);
  l.matrices = element_matrices(mesh, l.dofs, ones);
  l.element_element = element_element(mesh);
  l.layout = initial_layout(l.element_element, n_cores, {n_cores, 0.1, seed});
  return l;
}

std::vector<index_t> dof_owner(const LevelData& level) {
  return derive_owner(transpose(level.dofs.element_dof), level.layout.element_owner());
}

std::vector<index_t> truedof_owner(const LevelData& level) {
  const auto truedof_element = bool_multiply(transpose(level.dofs.dof_truedof), transpose(level.dofs.element_dof));
  return derive_owner(truedof_element, level.layout.element_owner());
}

void dump_level(const LevelData& level, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  mm::write(dir / "element_dof.mtx", level.dofs.element_dof);
  mm::write(dir / "dof_truedof.mtx", level.dofs.dof_truedof);
  mm::write(dir / "element_element.mtx", level.element_element);
  mm::write(dir / "core_element.mtx", level.layout.core_element);
  mm::write(dir / "A_diag.mtx", block_diagonal(level.matrices, level.dofs.element_dof));
}

}  // namespace redamge
