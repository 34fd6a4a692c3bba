#include "redamge/error.hpp"
#include "redamge/mlmc.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace redamge;

TEST(McEstimate, SmallCases) {
  auto a = mc_estimate(std::vector<double>{1, 1, 1});
  EXPECT_EQ(a.mean, 1.0);
  EXPECT_EQ(a.variance, 0.0);
  auto b = mc_estimate(std::vector<double>{0, 2});
  EXPECT_EQ(b.mean, 1.0);
  EXPECT_EQ(b.variance, 2.0);
  EXPECT_EQ(b.std_error, 1.0);
  EXPECT_THROW(mc_estimate(std::vector<double>{1.0}), Error);
}

TEST(McEstimate, StandardNormalMean) {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> g;
  std::vector<double> x(10000);
  for (auto& v : x) v = g(rng);
  auto e = mc_estimate(x);
  EXPECT_LE(std::abs(e.mean), 4.0 / std::sqrt(10000.0));
  EXPECT_NEAR(e.variance, 1.0, 0.05);
}

TEST(McRequirement, Cases) {
  EXPECT_EQ(mc_sample_requirement(0.0, 0.1), 1);
  EXPECT_EQ(mc_sample_requirement(2.0, 0.1), 400);
  EXPECT_THROW(mc_sample_requirement(1.0, 0.0), Error);
  // Plug back: the requirement meets the sampling-error bound V / N <= eps^2 / 2.
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(1e-6, 1.0);
  for (int i = 0; i < 100; ++i) {
    const double V = u(rng) * 1e-3, eps = u(rng) * 0.1;
    const auto N = mc_sample_requirement(V, eps);
    EXPECT_LE(V / N, eps * eps / 2 * (1 + 1e-12));
    if (N > 1) EXPECT_GT(V / (N - 1), eps * eps / 2 * (1 - 1e-12));
  }
}

TEST(OptimalSamples, WorkedTwoLevelCase) {
  const std::vector<double> V{4, 1}, C{1, 4};
  const double eps = 0.1;
  auto p = optimal_samples(V, C, eps);
  EXPECT_NEAR(p.N_real[0], 16 / (eps * eps), 1e-9);
  EXPECT_NEAR(p.N_real[1], 4 / (eps * eps), 1e-9);
  EXPECT_NEAR(V[0] / p.N_real[0] + V[1] / p.N_real[1], eps * eps / 2, 1e-15);
  EXPECT_NEAR(total_cost(std::span<const double>(p.N_real), C), 32 / (eps * eps), 1e-9);
  EXPECT_LE(p.sampling_error, eps * eps / 2);
}

TEST(OptimalSamples, SingleLevelMatchesPlainRequirement) {
  for (double V : {0.3, 2.0, 17.0}) {
    auto p = optimal_samples(std::vector<double>{V}, std::vector<double>{5.0}, 0.05);
    EXPECT_EQ(p.N[0], mc_sample_requirement(V, 0.05));
  }
}

TEST(OptimalSamples, SymmetricLevelsGetEqualCounts) {
  auto p = optimal_samples(std::vector<double>{2, 2, 2}, std::vector<double>{3, 3, 3}, 0.01);
  EXPECT_EQ(p.N[0], p.N[1]);
  EXPECT_EQ(p.N[1], p.N[2]);
}

TEST(OptimalSamples, RejectsNonPositive) {
  EXPECT_THROW(optimal_samples(std::vector<double>{0, 1}, std::vector<double>{1, 1}, 0.1), Error);
  EXPECT_THROW(optimal_samples(std::vector<double>{1, 1}, std::vector<double>{1, -1}, 0.1), Error);
  auto p = optimal_samples_floor(std::vector<double>{0, 1}, std::vector<double>{1, 1}, 0.1, 2);
  EXPECT_EQ(p.N[0], 2);
}

TEST(TotalCost, Cases) {
  EXPECT_EQ(total_cost(std::vector<std::int64_t>{10}, std::vector<double>{2}), 20.0);
  std::vector<std::int64_t> N{3, 5, 7, 11};
  std::vector<double> C{1.5, 2, 0.5, 4};
  EXPECT_EQ(total_cost(N, C), total_cost(std::span(N).first(2), std::span(C).first(2)) +
                                  total_cost(std::span(N).last(2), std::span(C).last(2)));
}

TEST(Fits, NoiselessPowerLaws) {
  std::vector<double> M{4096, 512, 64, 8};
  std::vector<double> E, V, C;
  for (double m : M) {
    E.push_back(std::pow(m, -1.0 / 3));
    V.push_back(5 * std::pow(m, -2.0 / 3));
    C.push_back(0.5 * m);
  }
  auto f = fit_rates(M, E, V, C);
  EXPECT_NEAR(f.alpha, 1.0 / 3, 1e-12);
  EXPECT_NEAR(f.beta, 2.0 / 3, 1e-12);
  EXPECT_NEAR(f.c2, 5.0, 1e-10);
  EXPECT_NEAR(f.gamma, 1.0, 1e-12);
  EXPECT_NEAR(f.c3, 0.5, 1e-12);
  EXPECT_NEAR(f.r2_beta, 1.0, 1e-12);
  EXPECT_THROW(fit_rates(std::span(M).first(2), std::span(E).first(2), std::span(V).first(2), std::span(C).first(2)),
               Error);
}

TEST(Fits, CoarsestLevelIsExcludedFromDifferenceFits) {
  std::vector<double> M{512, 64, 8}, E{std::pow(512.0, -0.5), std::pow(64.0, -0.5), 100.0},
      V{std::pow(512.0, -1.0), std::pow(64.0, -1.0), 100.0}, C{512, 64, 8};
  auto f = fit_rates(M, E, V, C);
  EXPECT_NEAR(f.alpha, 0.5, 1e-12);
  EXPECT_NEAR(f.beta, 1.0, 1e-12);
}

TEST(Regime, Cases) {
  RateFit f;
  f.alpha = 1;
  f.beta = 1;
  f.gamma = 0.5;
  EXPECT_EQ(classify_regime(f).regime, Regime::eps2);
  f.gamma = 1;
  EXPECT_EQ(classify_regime(f).regime, Regime::eps2_log2);
  f.gamma = 1 + 5e-7;
  EXPECT_EQ(classify_regime(f).regime, Regime::eps2_log2);
  f.alpha = 1.0 / 3;
  f.beta = 2.0 / 3;
  f.gamma = 1;
  auto r = classify_regime(f);
  EXPECT_EQ(r.regime, Regime::eps_rate);
  EXPECT_NEAR(r.exponent, -3.0, 1e-12);
  EXPECT_FALSE(r.alpha_warning);
  f.alpha = 0.1;
  EXPECT_TRUE(classify_regime(f).alpha_warning);
}

TEST(ScaledRootCost, EmptySumAtSingleLevel) {
  RateFit f;
  f.c2 = 3;
  f.beta = 1;
  EXPECT_DOUBLE_EQ(scaled_root_cost(4.0, std::vector<double>{9.0}, std::vector<double>{100.0}, f), 6.0);
}

TEST(ScaledRootCost, GeometricDecayDecreases) {
  RateFit f;
  f.c2 = 1;
  f.beta = 2.0 / 3;
  std::vector<double> M, C;
  double prev = INFINITY;
  for (int L = 0; L < 6; ++L) {
    M.push_back(std::pow(8.0, 6 - L));
    C.push_back(M.back());
    const double R = scaled_root_cost(1.0, C, M, f);
    EXPECT_LT(R, prev);
    if (L > 0) EXPECT_TRUE(extend_hierarchy(prev, R));
    prev = R;
  }
}

TEST(ScaledRootCost, NoDecayNeverImproves) {
  RateFit f;
  f.c2 = 1;
  f.beta = 0;
  std::vector<double> M, C;
  double prev = 0;
  for (int L = 0; L < 6; ++L) {
    M.push_back(std::pow(8.0, 6 - L));
    C.push_back(1.0);
    const double R = scaled_root_cost(1.0, C, M, f);
    EXPECT_GE(R, prev);
    if (L > 0) EXPECT_FALSE(extend_hierarchy(prev, R));
    prev = R;
  }
}

TEST(ScaledRootCost, CostIdentityWithMeasuredCoarsestTerm) {
  // With V_l = c2 M_l^-beta on the differences and V(Q_L) on the coarsest level, the optimal
  // cost is 2 eps^-2 R_L^2.
  RateFit f;
  f.c2 = 2;
  f.beta = 0.7;
  std::vector<double> M{4096, 512, 64}, C{40, 6, 1};
  const double varQL = 0.3, eps = 0.01;
  std::vector<double> V{f.c2 * std::pow(M[0], -f.beta), f.c2 * std::pow(M[1], -f.beta), varQL};
  auto p = optimal_samples(V, C, eps);
  const double R = scaled_root_cost(varQL, C, M, f);
  EXPECT_NEAR(total_cost(std::span<const double>(p.N_real), C), 2 / (eps * eps) * R * R, 1e-9 * R * R / (eps * eps));
}
