#include "redamge/amge.hpp"

#include "redamge/error.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <tuple>
#include <unordered_map>

namespace redamge {

int CoarseFacets::sign_in(index_t facet, index_t ae) const {
  return ae == ae_a[facet] ? orientation[facet] : -orientation[facet];
}

namespace {

index_t find_root(std::vector<index_t>& parent, index_t x) {
  while (parent[x] != x) x = parent[x] = parent[parent[x]];
  return x;
}

}  // namespace

CoarseFacets build_coarse_facets(const LevelData& level, const Relation& AE_element) {
  require(is_partition(AE_element), ErrorCode::build, "build_coarse_facets: AE_element is not a partition");
  const auto elem_ae = partition_owner(AE_element);
  const auto dof_elem = partition_owner(level.dofs.element_dof);
  const auto truedof_dof = transpose(level.dofs.dof_truedof);
  const index_t nt = level.num_truedofs();

  std::map<std::tuple<index_t, index_t, int>, std::vector<index_t>> groups;
  for (index_t t = 0; t < nt; ++t) {
    if (level.dofs.truedof_kind[t] != DofKind::velocity) continue;
    auto dofs = truedof_dof.row(t);
    if (dofs.size() == 2) {
      const index_t a = elem_ae[dof_elem[dofs[0]]];
      const index_t b = elem_ae[dof_elem[dofs[1]]];
      if (a == b) continue;
      groups[{std::min(a, b), std::max(a, b), static_cast<int>(BoundaryAttr::interior)}].push_back(t);
    } else {
      require(dofs.size() == 1, ErrorCode::build, "build_coarse_facets: velocity truedof with more than two dofs");
      require(level.truedof_attr[t] != BoundaryAttr::interior, ErrorCode::build,
              "build_coarse_facets: single-dof truedof without boundary attribute");
      groups[{elem_ae[dof_elem[dofs[0]]], -1, static_cast<int>(level.truedof_attr[t])}].push_back(t);
    }
  }

  // Split each group into vertex-connected pieces.
  struct Piece {
    std::vector<index_t> fine;
    index_t a, b;
    BoundaryAttr attr;
  };
  std::vector<Piece> pieces;
  for (const auto& [key, members] : groups) {
    const auto n = static_cast<index_t>(members.size());
    std::vector<index_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::unordered_map<index_t, index_t> first_at_vertex;
    for (index_t i = 0; i < n; ++i)
      for (index_t v : level.truedof_vertex.row(members[i])) {
        auto [it, inserted] = first_at_vertex.emplace(v, i);
        if (!inserted) parent[find_root(parent, i)] = find_root(parent, it->second);
      }
    std::map<index_t, std::vector<index_t>> by_root;
    for (index_t i = 0; i < n; ++i) by_root[find_root(parent, i)].push_back(members[i]);
    for (auto& [root, fine] : by_root)
      pieces.push_back({std::move(fine), std::get<0>(key), std::get<1>(key), static_cast<BoundaryAttr>(std::get<2>(key))});
  }
  std::sort(pieces.begin(), pieces.end(), [](const Piece& x, const Piece& y) { return x.fine.front() < y.fine.front(); });

  // Sign of the fine truedof's reference normal relative to AE a.
  std::vector<std::int8_t> sign_in_a(nt, 0);
  const auto nF = static_cast<index_t>(pieces.size());
  CoarseFacets cf;
  cf.of_fine.assign(nt, -1);
  for (index_t F = 0; F < nF; ++F) {
    auto& p = pieces[F];
    for (index_t t : p.fine) {
      cf.of_fine[t] = F;
      for (index_t d : truedof_dof.row(t))
        if (elem_ae[dof_elem[d]] == p.a) sign_in_a[t] = level.dofs.dof_sign[d];
    }
    double meas = 0.0;
    for (index_t t : p.fine) meas += level.truedof_measure[t];
    const std::int8_t o = sign_in_a[p.fine.front()];
    std::vector<double> w;
    w.reserve(p.fine.size());
    for (index_t t : p.fine) w.push_back(o * sign_in_a[t] * level.truedof_measure[t] / meas);
    cf.weight.push_back(std::move(w));
    cf.ae_a.push_back(p.a);
    cf.ae_b.push_back(p.b);
    cf.attr.push_back(p.attr);
    cf.orientation.push_back(o);
    cf.measure.push_back(meas);
    cf.fine.push_back(std::move(p.fine));
  }
  return cf;
}

std::vector<LocalInterp> build_local_interpolation(const LevelData& level, const Relation& AE_element,
                                                   const CoarseFacets& facets) {
  const index_t nt = level.num_truedofs();
  const index_t nCF = facets.size();
  const auto& dt = level.dofs.dof_truedof;

  std::vector<double> fine_weight(nt, 0.0);
  for (index_t F = 0; F < nCF; ++F)
    for (std::size_t i = 0; i < facets.fine[F].size(); ++i) fine_weight[facets.fine[F][i]] = facets.weight[F][i];

  std::vector<index_t> local_of(nt, -1);
  std::vector<LocalInterp> out;
  out.reserve(AE_element.rows());
  for (index_t T = 0; T < AE_element.rows(); ++T) {
    LocalInterp li;
    li.ae = T;
    auto elems = AE_element.row(T);
    for (index_t e : elems)
      for (index_t d : level.dofs.element_dof.row(e)) li.fine_truedofs.push_back(dt.row(d)[0]);
    std::sort(li.fine_truedofs.begin(), li.fine_truedofs.end());
    li.fine_truedofs.erase(std::unique(li.fine_truedofs.begin(), li.fine_truedofs.end()), li.fine_truedofs.end());
    const auto n = static_cast<index_t>(li.fine_truedofs.size());
    for (index_t i = 0; i < n; ++i) local_of[li.fine_truedofs[i]] = i;

    li.A = Eigen::MatrixXd::Zero(n, n);
    double ae_measure = 0.0;
    for (index_t e : elems) {
      ae_measure += level.element_measure[e];
      auto row = level.dofs.element_dof.row(e);
      const auto& b = level.matrices.blocks[e];
      for (std::size_t i = 0; i < row.size(); ++i)
        for (std::size_t j = 0; j < row.size(); ++j)
          li.A(local_of[dt.row(row[i])[0]], local_of[dt.row(row[j])[0]]) += b(i, j);
    }

    std::vector<index_t> I, G, Pp, my_facets;
    for (index_t i = 0; i < n; ++i) {
      const index_t t = li.fine_truedofs[i];
      if (level.dofs.truedof_kind[t] == DofKind::pressure) {
        Pp.push_back(i);
      } else if (facets.of_fine[t] >= 0) {
        G.push_back(i);
        my_facets.push_back(facets.of_fine[t]);
      } else {
        I.push_back(i);
      }
    }
    std::sort(my_facets.begin(), my_facets.end());
    my_facets.erase(std::unique(my_facets.begin(), my_facets.end()), my_facets.end());
    li.coarse_truedofs = my_facets;
    li.coarse_truedofs.push_back(nCF + T);

    const auto nI = static_cast<Eigen::Index>(I.size());
    const auto nP = static_cast<Eigen::Index>(Pp.size());
    const Eigen::Index nK = nI + nP + 1;
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(nK, nK);
    for (Eigen::Index a = 0; a < nI; ++a) {
      for (Eigen::Index b = 0; b < nI; ++b) K(a, b) = li.A(I[a], I[b]);
      for (Eigen::Index b = 0; b < nP; ++b) {
        K(a, nI + b) = li.A(I[a], Pp[b]);
        K(nI + b, a) = li.A(Pp[b], I[a]);
      }
    }
    for (Eigen::Index b = 0; b < nP; ++b) {
      K(nI + b, nK - 1) = 1.0;
      K(nK - 1, nI + b) = 1.0;
    }

    const auto nc = static_cast<Eigen::Index>(my_facets.size());
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(nK, nc);
    Eigen::MatrixXd qG = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(G.size()), nc);
    for (Eigen::Index c = 0; c < nc; ++c) {
      const index_t F = my_facets[c];
      for (std::size_t g = 0; g < G.size(); ++g)
        if (facets.of_fine[li.fine_truedofs[G[g]]] == F) qG(g, c) = fine_weight[li.fine_truedofs[G[g]]];
      const double s = facets.sign_in(F, T);
      for (Eigen::Index b = 0; b < nP; ++b)
        rhs(nI + b, c) = s * level.truedof_measure[li.fine_truedofs[Pp[b]]] / ae_measure;
    }
    for (Eigen::Index c = 0; c < nc; ++c)
      for (std::size_t g = 0; g < G.size(); ++g) {
        const double q = qG(g, c);
        if (q == 0.0) continue;
        for (Eigen::Index a = 0; a < nI; ++a) rhs(a, c) -= li.A(I[a], G[g]) * q;
        for (Eigen::Index b = 0; b < nP; ++b) rhs(nI + b, c) -= li.A(Pp[b], G[g]) * q;
      }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(K);
    if (!lu.isInvertible())
      fail(ErrorCode::build, "build_local_interpolation: singular local solve on AE " + std::to_string(T));
    const Eigen::MatrixXd sol = lu.solve(rhs);

    li.P = Eigen::MatrixXd::Zero(n, nc + 1);
    for (Eigen::Index c = 0; c < nc; ++c) {
      for (std::size_t g = 0; g < G.size(); ++g) li.P(G[g], c) = qG(g, c);
      for (Eigen::Index a = 0; a < nI; ++a) li.P(I[a], c) = sol(a, c);
    }
    for (Eigen::Index b = 0; b < nP; ++b) li.P(Pp[b], nc) = 1.0;

    for (index_t t : li.fine_truedofs) local_of[t] = -1;
    out.push_back(std::move(li));
  }
  return out;
}

SparseMatrix assemble_global_P(const std::vector<LocalInterp>& local, index_t n_fine_truedofs,
                               index_t n_coarse_truedofs) {
  std::unordered_map<std::int64_t, double> seen;
  std::vector<Triplet> t;
  for (const auto& li : local)
    for (Eigen::Index i = 0; i < li.P.rows(); ++i)
      for (Eigen::Index j = 0; j < li.P.cols(); ++j) {
        const double v = li.P(i, j);
        if (v == 0.0) continue;
        const index_t r = li.fine_truedofs[i];
        const index_t c = li.coarse_truedofs[j];
        const std::int64_t key = static_cast<std::int64_t>(r) * n_coarse_truedofs + c;
        auto [it, inserted] = seen.emplace(key, v);
        if (!inserted) {
          if (std::abs(it->second - v) > 1e-13)
            fail(ErrorCode::conformity, "assemble_global_P: local interpolants disagree at (" + std::to_string(r) +
                                            ", " + std::to_string(c) + ")");
          continue;
        }
        t.push_back({r, c, v});
      }
  return SparseMatrix::from_triplets(n_fine_truedofs, n_coarse_truedofs, std::move(t));
}

ElementMatrices coarse_element_matrices(const std::vector<LocalInterp>& local) {
  ElementMatrices em;
  em.blocks.reserve(local.size());
  for (const auto& li : local) {
    Eigen::MatrixXd ac = li.P.transpose() * li.A * li.P;
    em.blocks.push_back(0.5 * (ac + ac.transpose()));
  }
  em.k.assign(local.size(), 1.0);
  return em;
}

CoarseLevel coarsen_level(const LevelData& level, const Relation& AE_element) {
  CoarseLevel out;
  out.facets = build_coarse_facets(level, AE_element);
  out.local = build_local_interpolation(level, AE_element, out.facets);
  const auto& cf = out.facets;
  const index_t nCF = cf.size();
  const index_t nAE = AE_element.rows();
  const index_t nct = nCF + nAE;
  out.P = assemble_global_P(out.local, level.num_truedofs(), nct);

  auto& d = out.data;
  std::vector<std::vector<index_t>> ed(nAE);
  std::vector<index_t> dt;
  index_t next = 0;
  for (index_t T = 0; T < nAE; ++T)
    for (index_t c : out.local[T].coarse_truedofs) {
      ed[T].push_back(next++);
      dt.push_back(c);
      if (c < nCF) {
        d.dofs.dof_sign.push_back(static_cast<std::int8_t>(cf.sign_in(c, T)));
        d.dofs.dof_kind.push_back(DofKind::velocity);
      } else {
        d.dofs.dof_sign.push_back(1);
        d.dofs.dof_kind.push_back(DofKind::pressure);
      }
    }
  d.dofs.element_dof = Relation::from_rows("element", "dof", next, ed);
  d.dofs.dof_truedof = Relation::from_map("dof", "truedof", nct, dt);
  d.dofs.truedof_kind.assign(nct, DofKind::velocity);
  d.truedof_measure.resize(nct);
  d.truedof_attr.assign(nct, BoundaryAttr::interior);
  d.truedof_boundary_sign.assign(nct, 0);
  d.element_measure.assign(nAE, 0.0);
  for (index_t T = 0; T < nAE; ++T) {
    for (index_t e : AE_element.row(T)) d.element_measure[T] += level.element_measure[e];
    d.dofs.truedof_kind[nCF + T] = DofKind::pressure;
    d.truedof_measure[nCF + T] = d.element_measure[T];
  }
  std::vector<std::vector<index_t>> tv(nct);
  for (index_t F = 0; F < nCF; ++F) {
    d.truedof_measure[F] = cf.measure[F];
    d.truedof_attr[F] = cf.attr[F];
    if (cf.ae_b[F] < 0) d.truedof_boundary_sign[F] = cf.orientation[F];
    for (index_t t : cf.fine[F]) {
      auto v = level.truedof_vertex.row(t);
      tv[F].insert(tv[F].end(), v.begin(), v.end());
    }
  }
  d.truedof_vertex = Relation::from_rows("truedof", "vertex", level.truedof_vertex.cols(), tv);
  d.matrices = coarse_element_matrices(out.local);
  const auto AE_el = AE_element.relabeled("AE", "element");
  d.element_element =
      bool_multiply(bool_multiply(AE_el, level.element_element), transpose(AE_el)).relabeled("element", "element");
  d.layout.n_cores_total = level.layout.n_cores_total;
  d.layout.core_element = bool_multiply(level.layout.core_element, transpose(AE_el)).relabeled("core", "element");
  require(is_partition(d.layout.core_element), ErrorCode::build, "coarsen_level: an AE straddles several cores");
  return out;
}

}  // namespace redamge
