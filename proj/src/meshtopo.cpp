#include "redamge/meshtopo.hpp"

#include "redamge/error.hpp"
#include "redamge/matrix_market.hpp"

#include <fstream>

namespace redamge {

const char* to_string(BoundaryAttr a) {
  switch (a) {
    case BoundaryAttr::interior: return "interior";
    case BoundaryAttr::dirichlet_in: return "dirichlet_in";
    case BoundaryAttr::dirichlet_out: return "dirichlet_out";
    case BoundaryAttr::neumann: return "neumann";
  }
  return "?";
}

double BoundarySpec::pressure(BoundaryAttr a) const {
  if (a == BoundaryAttr::dirichlet_in) return p_in;
  if (a == BoundaryAttr::dirichlet_out) return p_out;
  return 0.0;
}

double Mesh::mesh_size() const {
  double m = 0.0;
  for (int a = 0; a < dim; ++a) m = std::max(m, h[a]);
  return m;
}

namespace {

struct Grid {
  int dim;
  index_t nx, ny, nz;
  index_t nzv;  // vertex layers along z (1 in 2D)

  index_t element(index_t i, index_t j, index_t k) const { return (i * ny + j) * nz + k; }
  index_t vertex(index_t i, index_t j, index_t k) const { return (i * (ny + 1) + j) * nzv + k; }
  index_t nfx() const { return (nx + 1) * ny * nz; }
  index_t nfy() const { return nx * (ny + 1) * nz; }
  index_t nfz() const { return dim == 3 ? nx * ny * (nz + 1) : 0; }
  index_t xfacet(index_t i, index_t j, index_t k) const { return (i * ny + j) * nz + k; }
  index_t yfacet(index_t i, index_t j, index_t k) const { return nfx() + (i * (ny + 1) + j) * nz + k; }
  index_t zfacet(index_t i, index_t j, index_t k) const {
    return nfx() + nfy() + (i * ny + j) * (nz + 1) + k;
  }
};

}  // namespace

Mesh build_mesh(int dim, index_t n_per_axis, const BoundarySpec& boundary) {
  return build_mesh(dim, {n_per_axis, n_per_axis, n_per_axis}, boundary);
}

Mesh build_mesh(int dim, std::array<index_t, 3> cells, const BoundarySpec& boundary) {
  require(dim == 2 || dim == 3, ErrorCode::invalid_argument, "build_mesh: dim must be 2 or 3");
  if (dim == 2) cells[2] = 1;
  for (int a = 0; a < dim; ++a)
    require(cells[a] >= 1, ErrorCode::invalid_argument, "build_mesh: need at least one cell per axis");

  Mesh m;
  m.dim = dim;
  m.cells = cells;
  m.boundary = boundary;
  Grid g{dim, cells[0], cells[1], cells[2], dim == 3 ? cells[2] + 1 : 1};
  for (int a = 0; a < 3; ++a) m.h[a] = a < dim ? 1.0 / cells[a] : 1.0;
  const double vol = m.h[0] * m.h[1] * m.h[2];

  m.num_elements = g.nx * g.ny * g.nz;
  m.num_facets = g.nfx() + g.nfy() + g.nfz();
  m.num_vertices = (g.nx + 1) * (g.ny + 1) * g.nzv;
  m.element_measure.assign(m.num_elements, vol);
  m.centroid.resize(m.num_elements);
  m.facet_measure.resize(m.num_facets);
  m.facet_axis.resize(m.num_facets);
  m.facet_attr.assign(m.num_facets, BoundaryAttr::interior);

  std::vector<std::vector<index_t>> ef(m.num_elements);
  std::vector<std::vector<index_t>> fv(m.num_facets);
  for (index_t i = 0; i < g.nx; ++i)
    for (index_t j = 0; j < g.ny; ++j)
      for (index_t k = 0; k < g.nz; ++k) {
        const index_t e = g.element(i, j, k);
        m.centroid[e] = {(i + 0.5) * m.h[0], (j + 0.5) * m.h[1], dim == 3 ? (k + 0.5) * m.h[2] : 0.0};
        auto& row = ef[e];
        row = {g.xfacet(i, j, k), g.xfacet(i + 1, j, k), g.yfacet(i, j, k), g.yfacet(i, j + 1, k)};
        if (dim == 3) {
          row.push_back(g.zfacet(i, j, k));
          row.push_back(g.zfacet(i, j, k + 1));
        }
      }

  auto set_facet = [&](index_t f, int axis, index_t coord, index_t ncoord, int side_lo,
                       std::vector<index_t> verts) {
    m.facet_axis[f] = axis;
    double meas = 1.0;
    for (int a = 0; a < dim; ++a)
      if (a != axis) meas *= m.h[a];
    m.facet_measure[f] = meas;
    if (coord == 0) m.facet_attr[f] = boundary.side[side_lo];
    if (coord == ncoord) m.facet_attr[f] = boundary.side[side_lo + 1];
    fv[f] = std::move(verts);
  };

  for (index_t i = 0; i <= g.nx; ++i)
    for (index_t j = 0; j < g.ny; ++j)
      for (index_t k = 0; k < g.nz; ++k) {
        std::vector<index_t> v{g.vertex(i, j, k), g.vertex(i, j + 1, k)};
        if (dim == 3) v = {g.vertex(i, j, k), g.vertex(i, j + 1, k), g.vertex(i, j, k + 1), g.vertex(i, j + 1, k + 1)};
        set_facet(g.xfacet(i, j, k), 0, i, g.nx, 0, std::move(v));
      }
  for (index_t i = 0; i < g.nx; ++i)
    for (index_t j = 0; j <= g.ny; ++j)
      for (index_t k = 0; k < g.nz; ++k) {
        std::vector<index_t> v{g.vertex(i, j, k), g.vertex(i + 1, j, k)};
        if (dim == 3) v = {g.vertex(i, j, k), g.vertex(i + 1, j, k), g.vertex(i, j, k + 1), g.vertex(i + 1, j, k + 1)};
        set_facet(g.yfacet(i, j, k), 1, j, g.ny, 2, std::move(v));
      }
  if (dim == 3)
    for (index_t i = 0; i < g.nx; ++i)
      for (index_t j = 0; j < g.ny; ++j)
        for (index_t k = 0; k <= g.nz; ++k)
          set_facet(g.zfacet(i, j, k), 2, k, g.nz, 4,
                    {g.vertex(i, j, k), g.vertex(i + 1, j, k), g.vertex(i, j + 1, k), g.vertex(i + 1, j + 1, k)});

  m.element_facet = Relation::from_rows("element", "facet", m.num_facets, ef);
  m.facet_vertex = Relation::from_rows("facet", "vertex", m.num_vertices, fv);
  return m;
}

Relation element_element(const Mesh& mesh) {
  return bool_multiply(mesh.element_facet, transpose(mesh.element_facet));
}

DofSpace build_dofs(const Mesh& mesh) {
  const int nlocal = 2 * mesh.dim + 1;
  const index_t ndofs = mesh.num_elements * nlocal;
  DofSpace d;
  std::vector<std::vector<index_t>> ed(mesh.num_elements);
  std::vector<index_t> dt(ndofs);
  d.dof_sign.resize(ndofs);
  d.dof_kind.resize(ndofs);
  for (index_t e = 0; e < mesh.num_elements; ++e) {
    // element_facet rows are sorted, which for a structured cell is exactly the local order.
    auto facets = mesh.element_facet.row(e);
    for (int l = 0; l < nlocal; ++l) {
      const index_t dof = e * nlocal + l;
      ed[e].push_back(dof);
      if (l < 2 * mesh.dim) {
        dt[dof] = facets[l];
        d.dof_sign[dof] = (l % 2 == 1) ? 1 : -1;
        d.dof_kind[dof] = DofKind::velocity;
      } else {
        dt[dof] = mesh.num_facets + e;
        d.dof_sign[dof] = 1;
        d.dof_kind[dof] = DofKind::pressure;
      }
    }
  }
  const index_t ntrue = mesh.num_facets + mesh.num_elements;
  d.element_dof = Relation::from_rows("element", "dof", ndofs, ed);
  d.dof_truedof = Relation::from_map("dof", "truedof", ntrue, dt);
  d.truedof_kind.assign(ntrue, DofKind::velocity);
  for (index_t e = 0; e < mesh.num_elements; ++e) d.truedof_kind[mesh.num_facets + e] = DofKind::pressure;
  return d;
}

Eigen::MatrixXd rt0_mass(int dim, const std::array<double, 3>& h) {
  const int nv = 2 * dim;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(nv, nv);
  for (int a = 0; a < dim; ++a) {
    double other = 1.0;
    for (int b = 0; b < dim; ++b)
      if (b != a) other *= h[b];
    const double diag = h[a] / (3.0 * other);
    const double off = h[a] / (6.0 * other);
    m(2 * a, 2 * a) = diag;
    m(2 * a + 1, 2 * a + 1) = diag;
    m(2 * a, 2 * a + 1) = off;
    m(2 * a + 1, 2 * a) = off;
  }
  return m;
}

ElementMatrices element_matrices(const Mesh& mesh, const DofSpace& dofs, std::span<const double> k) {
  require(static_cast<index_t>(k.size()) == mesh.num_elements, ErrorCode::dimension_mismatch,
          "element_matrices: one permeability value per element expected");
  const int nv = 2 * mesh.dim;
  const Eigen::MatrixXd mass = rt0_mass(mesh.dim, mesh.h);
  ElementMatrices em;
  em.blocks.reserve(mesh.num_elements);
  em.k.assign(k.begin(), k.end());
  for (index_t e = 0; e < mesh.num_elements; ++e) {
    require(k[e] > 0.0, ErrorCode::invalid_argument, "element_matrices: permeability must be positive");
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(nv + 1, nv + 1);
    a.topLeftCorner(nv, nv) = mass / k[e];
    auto row = dofs.element_dof.row(e);
    for (int l = 0; l < nv; ++l) {
      a(nv, l) = dofs.dof_sign[row[l]];
      a(l, nv) = dofs.dof_sign[row[l]];
    }
    em.blocks.push_back(std::move(a));
  }
  return em;
}

SparseMatrix block_diagonal(const ElementMatrices& em, const Relation& element_dof) {
  require(static_cast<index_t>(em.blocks.size()) == element_dof.rows(), ErrorCode::dimension_mismatch,
          "block_diagonal: block count differs from element count");
  std::vector<Triplet> t;
  for (index_t e = 0; e < element_dof.rows(); ++e) {
    auto row = element_dof.row(e);
    const auto& b = em.blocks[e];
    require(b.rows() == static_cast<Eigen::Index>(row.size()), ErrorCode::dimension_mismatch,
            "block_diagonal: block size differs from element dof count");
    for (std::size_t i = 0; i < row.size(); ++i)
      for (std::size_t j = 0; j < row.size(); ++j) t.push_back({row[i], row[j], b(i, j)});
  }
  auto a = SparseMatrix::from_triplets(element_dof.cols(), element_dof.cols(), std::move(t));
  a.set_kinds(element_dof.col_kind(), element_dof.col_kind());
  return a;
}

void dump_mesh(const Mesh& mesh, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  mm::write(dir / "element_facet.mtx", mesh.element_facet);
  mm::write(dir / "facet_vertex.mtx", mesh.facet_vertex);
  std::ofstream os(dir / "mesh.txt");
  require(static_cast<bool>(os), ErrorCode::io, "cannot write mesh metadata");
  os << "dim " << mesh.dim << "\n";
  os << "cells";
  for (int a = 0; a < mesh.dim; ++a) os << ' ' << mesh.cells[a];
  os << "\nelements " << mesh.num_elements << "\nfacets " << mesh.num_facets << "\nvertices "
     << mesh.num_vertices << "\n";
  for (index_t f = 0; f < mesh.num_facets; ++f)
    if (mesh.facet_attr[f] != BoundaryAttr::interior)
      os << "facet " << f << ' ' << to_string(mesh.facet_attr[f]) << "\n";
}

}  // namespace redamge
