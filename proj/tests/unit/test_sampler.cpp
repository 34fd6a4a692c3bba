#include "oracles.hpp"

#include "redamge/mlmc_driver.hpp"
#include "redamge/sampler.hpp"

#include <gtest/gtest.h>

#include <numeric>

using namespace redamge;

TEST(Sampler, ZeroSigmaGivesUnitPermeability) {
  auto m = build_mesh(2, 8);
  FieldSampler s(m, {0.0, 0.1, 1.0, 64});
  auto f = s.sample_fine_field({1, 0, 0, StreamPurpose::field});
  for (double v : f.u[0]) EXPECT_EQ(v, 0.0);
  for (double k : f.k(0)) EXPECT_EQ(k, 1.0);
}

TEST(Sampler, ConstantModeOnlyIsConstant) {
  auto m = build_mesh(2, 8);
  FieldSampler s(m, {1.0, 0.1, 1.0, 1});
  EXPECT_EQ(s.num_modes(), 1);
  auto f = s.sample_fine_field({3, 0, 7, StreamPurpose::field});
  for (double v : f.u[0]) EXPECT_EQ(v, f.u[0][0]);
  EXPECT_EQ(f.u[0][0], f.xi[0]);
}

TEST(Sampler, WeightsNormalizedAndDecreasing) {
  auto m = build_mesh(2, 16);
  FieldSampler s(m, {});
  EXPECT_EQ(s.num_modes(), 256);
  EXPECT_NEAR(std::accumulate(s.weights().begin(), s.weights().end(), 0.0), 1.0, 1e-14);
  // (1 + lc^2 |j|^2)^-(nu + d/2) for j = (0,0), (0,1), (1,1)
  const double w0 = 1.0, w1 = std::pow(1.01, -2.0), w2 = std::pow(1.02, -2.0);
  EXPECT_NEAR(s.weights()[1] / s.weights()[0], w1 / w0, 1e-14);
  EXPECT_NEAR(s.weights()[17] / s.weights()[0], w2 / w0, 1e-14);
}

TEST(Sampler, VarianceMatchesSigmaSquared) {
  // Cosine modes average cos^2 to 1/2 over the cell midpoints, so the domain-averaged
  // pointwise variance is sigma^2.
  auto m = build_mesh(2, 16);
  const double sigma = 0.8;
  FieldSampler s(m, {sigma, 0.1, 1.0, 64});
  const int N = 2000;
  std::vector<double> sum(m.num_elements, 0.0), sum2(m.num_elements, 0.0);
  for (int i = 0; i < N; ++i) {
    auto u = s.sample_fine_field({11, 0, static_cast<std::uint64_t>(i), StreamPurpose::field}).u[0];
    for (index_t e = 0; e < m.num_elements; ++e) {
      sum[e] += u[e];
      sum2[e] += u[e] * u[e];
    }
  }
  double avg_var = 0.0;
  for (index_t e = 0; e < m.num_elements; ++e) avg_var += (sum2[e] - sum[e] * sum[e] / N) / (N - 1);
  avg_var /= m.num_elements;
  EXPECT_NEAR(avg_var, sigma * sigma, 0.05 * sigma * sigma);

  // Model variance per centroid from the basis itself, averaged over the mesh: exactly one.
  std::vector<double> model(m.num_elements, 0.0), unit(s.num_modes(), 0.0);
  for (index_t q = 0; q < s.num_modes(); ++q) {
    unit[q] = 1.0;
    auto phi = s.fine_field(unit);
    for (index_t e = 0; e < m.num_elements; ++e) model[e] += phi[e] * phi[e] / (sigma * sigma);
    unit[q] = 0.0;
  }
  EXPECT_NEAR(std::accumulate(model.begin(), model.end(), 0.0) / m.num_elements, 1.0, 1e-12);
}

TEST(Sampler, DeterministicPerKey) {
  auto m = build_mesh(2, 8);
  FieldSampler s(m, {});
  StreamKey k{5, 1, 42, StreamPurpose::main};
  EXPECT_EQ(s.sample_fine_field(k).u[0], s.sample_fine_field(k).u[0]);
  StreamKey other = k;
  other.index = 43;
  EXPECT_NE(s.sample_xi(k), s.sample_xi(other));
  other = k;
  other.purpose = StreamPurpose::pilot;
  EXPECT_NE(s.sample_xi(k), s.sample_xi(other));
}

TEST(Projection, ConstantStaysConstant) {
  auto m = build_mesh(2, 6);
  auto ee = element_element(m);
  auto AE = coarsen_by_factor(ee, 5.0);
  std::vector<double> u(36, 0.7);
  for (double v : project_field(u, m.element_measure, AE)) EXPECT_NEAR(v, 0.7, 1e-15);
}

TEST(Projection, TwoElementAverage) {
  auto AE = Relation::from_rows("AE", "element", 2, {{0, 1}});
  auto u = project_field({0.0, 2.0}, {0.5, 0.5}, AE);
  EXPECT_EQ(u[0], 1.0);
  EXPECT_DOUBLE_EQ(std::exp(u[0]), std::exp(1.0));
}

TEST(Projection, WeightedSumConservedOverHierarchy) {
  auto m = build_mesh(2, 16);
  HierarchyConfig cfg{4, 4.0, 2, 16, 4, true, 0};
  auto h = build_hierarchy(m, cfg);
  MlmcRunner runner(m, h, {}, m.boundary, 9);
  auto u = runner.fields({9, 0, 0, StreamPurpose::field}, runner.num_levels() - 1);
  auto weighted = [&](int l) {
    double s = 0.0;
    for (std::size_t e = 0; e < u[l].size(); ++e) s += h.levels[l].data.element_measure[e] * u[l][e];
    return s;
  };
  for (int l = 1; l < runner.num_levels(); ++l) EXPECT_NEAR(weighted(l), weighted(0), 1e-12);
}

TEST(Projection, LevelLawIndependentOfPairRole) {
  auto m = build_mesh(2, 16);
  auto h = build_hierarchy(m, {3, 4.0, 2, 8, 4, true, 0});
  MlmcRunner runner(m, h, {0.5, 0.1, 1.0, 64}, m.boundary, 4);
  for (std::uint64_t i = 0; i < 10; ++i) {
    StreamKey key{4, 0, i, StreamPurpose::main};
    auto as_coarse = runner.pair_sample(0, key).second;
    auto as_fine = runner.pair_sample(1, key).first;
    EXPECT_EQ(as_coarse, as_fine);
    // Per-seed telescoping: sum of differences equals the finest value.
    const auto u = runner.fields(key, 2);
    const double q0 = runner.qoi(0, u[0]), q1 = runner.qoi(1, u[1]), q2 = runner.qoi(2, u[2]);
    EXPECT_NEAR((q0 - q1) + (q1 - q2) + q2, q0, 1e-14);
  }
}
