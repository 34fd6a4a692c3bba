#include "oracles.hpp"

#include "redamge/darcy.hpp"
#include "redamge/level.hpp"
#include "redamge/redistribute.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

using namespace redamge;

namespace {

bool is_bijection(const Relation& r) {
  if (r.rows() != r.cols()) return false;
  for (index_t i = 0; i < r.rows(); ++i)
    if (r.row_size(i) != 1) return false;
  for (auto c : column_counts(r))
    if (c != 1) return false;
  return true;
}

struct Example {
  Relation element_dof = Relation::from_rows("element", "dof", 14, oracle::six::element_dof);
  Relation dof_truedof = transpose(Relation::from_rows("truedof", "dof", 14, oracle::six::truedof_dof));
  Relation core_element = Relation::from_rows("core", "element", 6, oracle::six::core_element);
  Relation element_element = redamge::element_element(build_mesh(2, {3, 2, 1}));
};

}  // namespace

TEST(CoreCore, ExampleAdjacency) {
  Example ex;
  auto cc = build_core_core(ex.core_element, ex.element_element);
  EXPECT_TRUE(cc.contains(0, 1) && cc.contains(1, 0) && cc.contains(1, 2) && cc.contains(2, 1));
  EXPECT_FALSE(cc.contains(0, 2));
  EXPECT_FALSE(cc.contains(2, 0));
  EXPECT_EQ(transpose(cc).indices(), cc.indices());
}

TEST(CoreCore, SingleCore) {
  auto ee = element_element(build_mesh(2, 3));
  auto ce = Relation::from_rows("core", "element", 9, {{0, 1, 2, 3, 4, 5, 6, 7, 8}});
  auto cc = build_core_core(ce, ee);
  EXPECT_EQ(cc, Relation::identity("core", 1));
}

TEST(CoreCore, DisconnectedGraphIsBlockDiagonal) {
  auto ee = Relation::from_rows("element", "element", 4, {{0, 1}, {0, 1}, {2, 3}, {2, 3}});
  auto ce = Relation::from_rows("core", "element", 4, {{0}, {1}, {2}, {3}});
  auto cc = build_core_core(ce, ee);
  EXPECT_EQ(oracle::pairs(cc), (std::set<std::pair<index_t, index_t>>{{0, 0}, {0, 1}, {1, 0}, {1, 1}, {2, 2}, {2, 3}, {3, 2}, {3, 3}}));
}

TEST(CoarsenCores, CeilLaw) {
  auto ee = element_element(build_mesh(3, 8));  // 512 elements, one per core
  auto ce = Relation::identity("element", 512).relabeled("core", "element");
  auto Cc = coarsen_cores(build_core_core(ce, ee), 8);
  index_t groups = 0;
  for (index_t g = 0; g < Cc.rows(); ++g) groups += Cc.row_size(g) > 0;
  EXPECT_EQ(groups, 64);
  EXPECT_TRUE(is_partition(Cc));

  auto one = coarsen_cores(Relation::identity("core", 1), 5);
  EXPECT_EQ(one.row_size(0), 1);
}

TEST(CoarsenCores, ExampleGrouping) {
  Example ex;
  auto Cc = coarsen_cores(build_core_core(ex.core_element, ex.element_element), 2);
  EXPECT_EQ(Cc, Relation::from_rows("Core", "core", 3, oracle::six::Core_core));
}

TEST(RedistributeElements, ExampleProduct) {
  Example ex;
  auto r = redistribute_elements(Relation::from_rows("Core", "core", 3, oracle::six::Core_core), ex.core_element);
  EXPECT_EQ(r.Core_element, Relation::from_rows("Core", "element", 6, oracle::six::Core_element));
  EXPECT_TRUE(is_bijection(r.newelement_element));
}

TEST(RedistributeElements, IdentityGrouping) {
  Example ex;
  auto r = redistribute_elements(Relation::identity("core", 3).relabeled("Core", "core"), ex.core_element);
  EXPECT_EQ(r.newelement_element, Relation::identity("element", 6).relabeled("newelement", "element"));
}

TEST(Agglomerate, ExampleOneAEPerCore) {
  Example ex;
  auto Ce = Relation::from_rows("Core", "element", 6, oracle::six::Core_element);
  auto r = redistribute_elements(Relation::from_rows("Core", "core", 3, oracle::six::Core_core), ex.core_element);
  auto ag = agglomerate_after_redistribution(Ce, r.newelement_element, ex.element_element, 8.0);
  EXPECT_EQ(ag.AE_element, Relation::from_rows("AE", "element", 6, oracle::six::AE_element));
  EXPECT_EQ(ag.AE_element, bool_multiply(ag.AE_newelement, r.newelement_element));
}

TEST(Agglomerate, UnitFactorGivesPermutation) {
  auto m = build_mesh(2, 4);
  auto l = fine_level(m, 4);
  auto cc = build_core_core(l.layout.core_element, l.element_element);
  auto r = redistribute_elements(coarsen_cores(cc, 2), l.layout.core_element);
  auto ag = agglomerate_after_redistribution(r.Core_element, r.newelement_element, l.element_element, 1.0);
  EXPECT_TRUE(is_bijection(ag.AE_element));
}

TEST(Agglomerate, ConnectedOnRandomLayouts) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    auto m = build_mesh(2, 8);
    std::uniform_int_distribution<index_t> nc(2, 8), bc(2, 4);
    auto l = fine_level(m, nc(rng), trial);
    auto Cc = coarsen_cores(build_core_core(l.layout.core_element, l.element_element), bc(rng), trial);
    auto r = redistribute_elements(Cc, l.layout.core_element);
    auto ag = agglomerate_after_redistribution(r.Core_element, r.newelement_element, l.element_element, 4.0, trial);
    EXPECT_TRUE(is_partition(ag.AE_element));
    const auto core_of = partition_owner(r.Core_element);
    for (index_t a = 0; a < ag.AE_element.rows(); ++a) {
      std::vector<index_t> els(ag.AE_element.row(a).begin(), ag.AE_element.row(a).end());
      EXPECT_TRUE(oracle::connected(l.element_element, els));
      for (index_t e : els) EXPECT_EQ(core_of[e], core_of[els.front()]);
    }
  }
}

TEST(NewDofs, ExampleCounts) {
  Example ex;
  auto AE = Relation::from_rows("AE", "element", 6, oracle::six::AE_element);
  auto r = redistribute_elements(Relation::from_rows("Core", "core", 3, oracle::six::Core_core), ex.core_element);
  auto dr = build_newdof_dof(AE, ex.element_dof, r.newelement_element);
  EXPECT_EQ(dr.newdof_dof.rows(), 14);
  EXPECT_TRUE(is_bijection(dr.newdof_dof));
  auto Core_newdof = bool_multiply(bool_multiply(r.Core_element, transpose(r.newelement_element)), dr.newelement_newdof);
  EXPECT_EQ(Core_newdof.row_size(0), 4);
  EXPECT_EQ(Core_newdof.row_size(1), 10);

  auto ts = select_newtruedofs(dr.newdof_dof, ex.dof_truedof);
  EXPECT_EQ(ts.newtruedof_truedof.rows(), 7);
  EXPECT_TRUE(is_bijection(ts.newtruedof_truedof));
}

TEST(NewDofs, TrivialRedistributionIsIdentity) {
  auto m = build_mesh(2, 3);
  auto l = fine_level(m, 1);
  auto ne = Relation::identity("element", 9).relabeled("newelement", "element");
  auto AE = Relation::identity("element", 9).relabeled("AE", "element");
  auto dr = build_newdof_dof(AE, l.dofs.element_dof, ne);
  EXPECT_EQ(dr.newdof_dof, Relation::identity("dof", l.dofs.num_dofs()).relabeled("newdof", "dof"));
  auto ts = select_newtruedofs(dr.newdof_dof, l.dofs.dof_truedof);
  // Newtruedofs follow their lowest dof, so pressures interleave with facets.
  auto td = transpose(l.dofs.dof_truedof);
  std::vector<index_t> order(l.num_truedofs());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](index_t a, index_t b) { return td.row(a)[0] < td.row(b)[0]; });
  std::vector<std::vector<index_t>> rows;
  for (index_t t : order) rows.push_back({t});
  EXPECT_EQ(ts.newtruedof_truedof, Relation::from_rows("newtruedof", "truedof", l.num_truedofs(), rows));
  auto A = block_diagonal(l.matrices, l.dofs.element_dof);
  EXPECT_EQ(max_abs_diff(redistribute_element_matrices(A, dr.newdof_dof), A), 0.0);
}

TEST(NewDofs, FrobeniusNormPreserved) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    auto m = build_mesh(2, 6);
    auto l = fine_level(m, 3, trial);
    std::lognormal_distribution<double> ln;
    std::vector<double> k(m.num_elements);
    for (auto& v : k) v = ln(rng);
    auto A = block_diagonal(element_matrices(m, l.dofs, k), l.dofs.element_dof);
    auto Cc = coarsen_cores(build_core_core(l.layout.core_element, l.element_element), 2);
    auto r = redistribute_elements(Cc, l.layout.core_element);
    auto ag = agglomerate_after_redistribution(r.Core_element, r.newelement_element, l.element_element, 4.0);
    auto dr = build_newdof_dof(ag.AE_element, l.dofs.element_dof, r.newelement_element);
    auto An = redistribute_element_matrices(A, dr.newdof_dof);
    double fa = 0, fb = 0;
    for (double v : A.values()) fa += v * v;
    for (double v : An.values()) fb += v * v;
    EXPECT_NEAR(fa, fb, 1e-12 * fa);
    // Permutation similarity: entry (i, j) of A appears at the images of i and j.
    const auto img = partition_owner(dr.newdof_dof);
    for (index_t i = 0; i < A.rows(); ++i) {
      auto c = A.row_cols(i);
      auto v = A.row_values(i);
      for (std::size_t q = 0; q < c.size(); ++q) EXPECT_EQ(An.at(img[i], img[c[q]]), v[q]);
    }
  }
}

TEST(ComposeInterpolation, TrivialCases) {
  std::mt19937_64 rng(3);
  auto P = oracle::random_matrix(rng, 10, 4, 0.4);
  auto I = Relation::identity("x", 10);
  EXPECT_EQ(max_abs_diff(compose_interpolation(I, P), P), 0.0);

  std::vector<index_t> perm{3, 1, 4, 0, 2};
  auto R = Relation::from_map("new", "old", 5, perm);
  auto P2 = compose_interpolation(R, SparseMatrix::identity(5));
  EXPECT_EQ(oracle::dense(P2), oracle::dense(R).transpose());
}

TEST(ComposeInterpolation, CoarseOperatorSameThroughBothPaths) {
  // Coarse operator from the old numbering via composed P equals the one from the
  // redistributed operator via P_new.
  std::mt19937_64 rng(12);
  auto m = build_mesh(2, 6);
  auto l = fine_level(m, 4);
  CommLedger ledger;
  auto rl = redistribute_level(l, 2, 4.0, 0, ledger, 0);
  const auto& Pi = rl.maps.newtruedof_truedof;
  auto A_old = assemble_level(l);
  auto A_new = assemble_level(rl.data);
  auto P_new = oracle::random_matrix(rng, A_new.rows(), 7, 0.3);
  auto P = compose_interpolation(Pi, P_new);
  auto Ac1 = oracle::dense(num_triple_product(transpose(P), A_old, P));
  auto Ac2 = oracle::dense(num_triple_product(transpose(P_new), A_new, P_new));
  EXPECT_LE(oracle::rel_diff(Ac1, Ac2), 1e-12);
}

TEST(RedistributeLevel, PermutationEquivalence) {
  for (index_t nc : {2, 3, 5}) {
    auto m = build_mesh(2, 7);
    auto l = fine_level(m, nc);
    CommLedger ledger;
    auto rl = redistribute_level(l, 2, 4.0, 0, ledger, 1);
    EXPECT_TRUE(is_bijection(rl.maps.newelement_element));
    EXPECT_TRUE(is_bijection(rl.maps.newdof_dof));
    EXPECT_TRUE(is_bijection(rl.maps.newtruedof_truedof));
    EXPECT_EQ(rl.maps.AE_element, bool_multiply(rl.maps.AE_newelement, rl.maps.newelement_element));
    auto Pi = SparseMatrix::from_relation(rl.maps.newtruedof_truedof);
    auto A = assemble_level(l);
    auto ref = num_triple_product(Pi, A, transpose(Pi));
    auto got = assemble_level(rl.data);
    EXPECT_TRUE(same_pattern(got, ref));
    Eigen::MatrixXd Pd = oracle::dense(Pi);
    EXPECT_LE(oracle::rel_diff(oracle::dense(got), Pd * oracle::dense(A) * Pd.transpose()), 1e-12);
    EXPECT_EQ(rl.data.layout.num_active(), (l.layout.num_active() + 1) / 2);
    for (const auto& rec : ledger.records) EXPECT_EQ(rec.op.rfind("redistribute:", 0), 0u);
  }
}

TEST(RedistributeLevel, UnitBetaChangesNothing) {
  // Only the numbering may change: same cores, same element sets, permutation-similar operator.
  auto m = build_mesh(2, 5);
  auto l = fine_level(m, 3);
  CommLedger ledger;
  auto rl = redistribute_level(l, 1, 4.0, 0, ledger, 0);
  EXPECT_EQ(rl.maps.Core_core, Relation::identity("core", 3).relabeled("Core", "core"));
  EXPECT_EQ(bool_multiply(rl.data.layout.core_element, rl.maps.newelement_element.relabeled("element", "element")),
            l.layout.core_element);
  auto Pi = SparseMatrix::from_relation(rl.maps.newtruedof_truedof);
  EXPECT_EQ(max_abs_diff(assemble_level(rl.data), num_triple_product(Pi, assemble_level(l), transpose(Pi))), 0.0);
}
