#pragma once

// Structured quad/hex meshes on the unit square/cube with decoupled RT0/P0 dofs.
//
// Numbering (all x-slowest, lexicographic):
//   element  e = (ix*ny + iy)*nz + iz
//   facets   x-facets first, then y-facets, then z-facets
//   vertices v = (ix*(ny+1) + iy)*(nz+1) + iz   (nz+1 -> 1 in 2D)
// Local element dofs are [x-, x+, y-, y+, (z-, z+), pressure], contiguous per element.

#include "redamge/relmat.hpp"

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace redamge {

enum class BoundaryAttr : std::int8_t { interior = 0, dirichlet_in = 1, dirichlet_out = 2, neumann = 3 };
const char* to_string(BoundaryAttr a);

enum class DofKind : std::int8_t { velocity = 0, pressure = 1 };

/// Attribute per domain side, ordered [x-, x+, y-, y+, z-, z+].
struct BoundarySpec {
  std::array<BoundaryAttr, 6> side{BoundaryAttr::dirichlet_in, BoundaryAttr::dirichlet_out,
                                   BoundaryAttr::neumann,      BoundaryAttr::neumann,
                                   BoundaryAttr::neumann,      BoundaryAttr::neumann};
  double p_in = 1.0;
  double p_out = 0.0;

  double pressure(BoundaryAttr a) const;
};

struct Mesh {
  int dim = 2;
  std::array<index_t, 3> cells{1, 1, 1};
  std::array<double, 3> h{1.0, 1.0, 1.0};
  index_t num_elements = 0;
  index_t num_facets = 0;
  index_t num_vertices = 0;
  std::vector<double> element_measure;
  std::vector<double> facet_measure;
  std::vector<std::array<double, 3>> centroid;
  std::vector<int> facet_axis;
  std::vector<BoundaryAttr> facet_attr;
  Relation element_facet;
  Relation facet_vertex;
  BoundarySpec boundary;

  double mesh_size() const;
};

Mesh build_mesh(int dim, index_t n_per_axis, const BoundarySpec& boundary = {});
/// Unequal cell counts per axis; unused axes are ignored in 2D.
Mesh build_mesh(int dim, std::array<index_t, 3> cells, const BoundarySpec& boundary = {});

/// element_element = element_facet x facet_element. Self-loops are kept.
Relation element_element(const Mesh& mesh);

struct DofSpace {
  Relation element_dof;
  Relation dof_truedof;
  /// +1 when the truedof's reference normal points out of the owning element.
  std::vector<std::int8_t> dof_sign;
  std::vector<DofKind> dof_kind;
  std::vector<DofKind> truedof_kind;

  index_t num_dofs() const { return element_dof.cols(); }
  index_t num_truedofs() const { return dof_truedof.cols(); }
};

/// Velocity truedof = facet index; pressure truedof = num_facets + element.
DofSpace build_dofs(const Mesh& mesh);

/// One dense block per element over its dofs in local order, plus the permeability used.
struct ElementMatrices {
  std::vector<Eigen::MatrixXd> blocks;
  std::vector<double> k;
};

/// Reference-normal RT0 mass matrix of one cell (velocity dofs only, local order).
Eigen::MatrixXd rt0_mass(int dim, const std::array<double, 3>& h);

ElementMatrices element_matrices(const Mesh& mesh, const DofSpace& dofs, std::span<const double> k);

/// Block-diagonal A_diag over the decoupled dofs.
SparseMatrix block_diagonal(const ElementMatrices& em, const Relation& element_dof);

/// Relations as Matrix Market plus a metadata text file.
void dump_mesh(const Mesh& mesh, const std::filesystem::path& dir);

}  // namespace redamge
