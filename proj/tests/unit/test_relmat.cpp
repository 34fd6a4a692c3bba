#include "oracles.hpp"

#include "redamge/error.hpp"
#include "redamge/matrix_market.hpp"
#include "redamge/relmat.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace redamge;

TEST(Relation, TransposeOfExampleElementDof) {
  auto ed = Relation::from_rows("element", "dof", 14, oracle::six::element_dof);
  auto de = transpose(ed);
  EXPECT_EQ(de.row_kind(), "dof");
  EXPECT_EQ(de.col_kind(), "element");
  ASSERT_EQ(de.rows(), 14);
  EXPECT_EQ(std::vector<index_t>(de.row(0).begin(), de.row(0).end()), std::vector<index_t>{0});
  EXPECT_EQ(std::vector<index_t>(de.row(2).begin(), de.row(2).end()), std::vector<index_t>{1});
  EXPECT_EQ(std::vector<index_t>(de.row(13).begin(), de.row(13).end()), std::vector<index_t>{5});
}

TEST(Relation, EmptyTransposeSwapsShape) {
  Relation r("a", "b", 3, 7);
  auto t = transpose(r);
  EXPECT_EQ(t.rows(), 7);
  EXPECT_EQ(t.cols(), 3);
  EXPECT_EQ(t.nnz(), 0);
}

TEST(Relation, DoubleTransposeRandom) {
  std::mt19937_64 rng(7);
  auto r = oracle::random_relation(rng, 50, 30, 0.15);
  EXPECT_EQ(transpose(transpose(r)), r);
  EXPECT_EQ(oracle::pairs(transpose(r)).size(), oracle::pairs(r).size());
  for (auto [i, j] : oracle::pairs(r)) EXPECT_TRUE(transpose(r).contains(j, i));
}

TEST(Relation, FromRowsSortsAndDeduplicates) {
  auto r = Relation::from_rows("a", "b", 5, {{3, 1, 3}, {}, {4, 0}});
  EXPECT_EQ(r.nnz(), 4);
  EXPECT_EQ(r.row(0)[0], 1);
  EXPECT_EQ(r.row(0)[1], 3);
  EXPECT_THROW(Relation::from_rows("a", "b", 2, {{2}}), Error);
}

TEST(BoolMultiply, ExampleCoreProduct) {
  auto Cc = Relation::from_rows("Core", "core", 3, oracle::six::Core_core);
  auto ce = Relation::from_rows("core", "element", 6, oracle::six::core_element);
  auto Ce = bool_multiply(Cc, ce);
  EXPECT_EQ(Ce, Relation::from_rows("Core", "element", 6, oracle::six::Core_element));
}

TEST(BoolMultiply, IdentityIsNeutral) {
  std::mt19937_64 rng(3);
  auto r = oracle::random_relation(rng, 12, 9, 0.3);
  EXPECT_EQ(bool_multiply(Relation::identity("a", 12), r), r);
  EXPECT_EQ(bool_multiply(r, Relation::identity("b", 9)), r);
}

TEST(BoolMultiply, KindMismatchIsLabeled) {
  Relation a("x", "y", 2, 2), b("z", "w", 2, 2);
  try {
    bool_multiply(a, b);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kind_mismatch);
    EXPECT_NE(std::string(e.what()).find("y"), std::string::npos);
  }
}

TEST(BoolMultiply, DropsMultiplicities) {
  auto a = Relation::from_rows("a", "b", 2, {{0, 1}});
  auto b = Relation::from_rows("b", "c", 1, {{0}, {0}});
  auto c = bool_multiply(a, b);
  EXPECT_EQ(c.nnz(), 1);
  auto n = multiply(SparseMatrix::from_relation(a), SparseMatrix::from_relation(b));
  EXPECT_DOUBLE_EQ(n.at(0, 0), 2.0);
}

TEST(BoolMultiply, MatchesPairEnumerationRandom) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    std::uniform_int_distribution<index_t> sz(1, 40);
    index_t n1 = sz(rng), n2 = sz(rng), n3 = sz(rng);
    auto a = oracle::random_relation(rng, n1, n2, 0.1, "a", "b");
    auto b = oracle::random_relation(rng, n2, n3, 0.1, "b", "c");
    EXPECT_EQ(oracle::pairs(bool_multiply(a, b)), oracle::pair_product(a, b));
  }
}

TEST(BoolMultiply, AssociativeRandom) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    std::uniform_int_distribution<index_t> sz(1, 100);
    index_t n1 = sz(rng), n2 = sz(rng), n3 = sz(rng), n4 = sz(rng);
    auto a = oracle::random_relation(rng, n1, n2, 0.05, "a", "b");
    auto b = oracle::random_relation(rng, n2, n3, 0.05, "b", "c");
    auto c = oracle::random_relation(rng, n3, n4, 0.05, "c", "d");
    EXPECT_EQ(bool_multiply(bool_multiply(a, b), c), bool_multiply(a, bool_multiply(b, c)));
  }
}

TEST(BoolMultiply, TransposeReversesOrder) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    auto a = oracle::random_relation(rng, 30, 40, 0.08, "a", "b");
    auto b = oracle::random_relation(rng, 40, 25, 0.08, "b", "c");
    EXPECT_EQ(transpose(bool_multiply(a, b)), bool_multiply(transpose(b), transpose(a)));
  }
}

TEST(IsPartition, Cases) {
  EXPECT_TRUE(is_partition(Relation::from_rows("AE", "element", 6, oracle::six::AE_element)));
  EXPECT_FALSE(is_partition(Relation::from_rows("AE", "element", 6, {{0, 1}, {2, 3, 4}})));
  EXPECT_FALSE(is_partition(Relation::from_rows("AE", "element", 6, {{0, 1, 2}, {2, 3, 4, 5}})));
  auto owner = partition_owner(Relation::from_rows("AE", "element", 6, oracle::six::AE_element));
  EXPECT_EQ(owner, (std::vector<index_t>{0, 0, 1, 1, 1, 1}));
}

TEST(TripleProduct, IdentityLeavesMatrix) {
  std::mt19937_64 rng(1);
  auto A = oracle::random_matrix(rng, 15, 15, 0.2);
  auto I = SparseMatrix::identity(15);
  EXPECT_EQ(max_abs_diff(num_triple_product(I, A, I), A), 0.0);
}

TEST(TripleProduct, SharedDofToy) {
  auto A_diag = SparseMatrix::from_dense(2, 2, std::vector<double>{2, 0, 0, 3});
  auto P = SparseMatrix::from_relation(Relation::from_rows("dof", "truedof", 1, {{0}, {0}}));
  auto A = num_triple_product(transpose(P), A_diag, P);
  ASSERT_EQ(A.rows(), 1);
  EXPECT_DOUBLE_EQ(A.at(0, 0), 5.0);
}

TEST(TripleProduct, DenseOracleRandom) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    std::uniform_int_distribution<index_t> sz(1, 32);
    index_t n = sz(rng), m = sz(rng);
    auto A = oracle::random_matrix(rng, n, n, 0.3);
    auto P = SparseMatrix::from_relation(oracle::random_relation(rng, n, m, 0.2));
    auto got = oracle::dense(num_triple_product(transpose(P), A, P));
    Eigen::MatrixXd ref = oracle::dense(P).transpose() * oracle::dense(A) * oracle::dense(P);
    EXPECT_LE((got - ref).cwiseAbs().maxCoeff(), 1e-13);
  }
}

TEST(TripleProduct, DimensionMismatchThrows) {
  SparseMatrix a(3, 4), b(5, 2);
  try {
    multiply(a, b);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::dimension_mismatch);
  }
}

TEST(SparseMatrix, MultiplyIsBitwiseReproducible) {
  std::mt19937_64 rng(4);
  auto a = oracle::random_matrix(rng, 40, 40, 0.1);
  auto b = oracle::random_matrix(rng, 40, 40, 0.1);
  auto c1 = multiply(a, b), c2 = multiply(a, b);
  EXPECT_EQ(c1.indices(), c2.indices());
  EXPECT_EQ(c1.values(), c2.values());
  EXPECT_EQ(pattern(c1), bool_multiply(pattern(a), pattern(b)));
}

TEST(MatrixMarket, RoundTripMatrixAndRelation) {
  std::mt19937_64 rng(2);
  auto a = oracle::random_matrix(rng, 9, 13, 0.3);
  a.set_kinds("dof", "truedof");
  std::stringstream ss;
  mm::write(ss, a);
  EXPECT_EQ(ss.str().rfind("%%MatrixMarket matrix coordinate real general", 0), 0u);
  auto b = mm::read_matrix(ss);
  EXPECT_EQ(max_abs_diff(a, b), 0.0);
  EXPECT_EQ(b.row_kind(), "dof");

  auto r = oracle::random_relation(rng, 11, 6, 0.3, "AE", "element");
  std::stringstream sr;
  mm::write(sr, r);
  EXPECT_EQ(mm::read_relation(sr), r);

  std::vector<double> v{1.5, -2.0, 1e-300, 3.0};
  std::stringstream sv;
  mm::write_array(sv, v);
  EXPECT_EQ(mm::read_array(sv), v);
}
