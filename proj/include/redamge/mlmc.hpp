#pragma once

// Monte Carlo and multilevel Monte Carlo estimator arithmetic: sample
// statistics, optimal allocation, cost, rate fits and complexity regimes.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace redamge {

struct McEstimate {
  double mean = 0.0;
  /// Unbiased sample variance.
  double variance = 0.0;
  double std_error = 0.0;
  std::int64_t n = 0;
};

McEstimate mc_estimate(std::span<const double> samples);

/// ceil(2 V / eps^2), at least one sample.
std::int64_t mc_sample_requirement(double V, double eps);

struct MlmcPlan {
  double epsilon = 0.0;
  std::vector<double> N_real;
  std::vector<std::int64_t> N;
  /// sum V_l / N_l with the rounded counts.
  double sampling_error = 0.0;
  double predicted_cost = 0.0;
};

/// N_l = ceil(2 eps^-2 sqrt(V_l / C_l) sum_k sqrt(C_k V_k)). V and C must be positive.
MlmcPlan optimal_samples(std::span<const double> V, std::span<const double> C, double eps);

/// As optimal_samples, but levels with V_l = 0 are allowed and every count is at least min_samples.
MlmcPlan optimal_samples_floor(std::span<const double> V, std::span<const double> C, double eps,
                               std::int64_t min_samples);

/// sum N_l C_l.
double total_cost(std::span<const std::int64_t> N, std::span<const double> C);
double total_cost(std::span<const double> N, std::span<const double> C);

struct LogLinearFit {
  /// y ~ c x^slope
  double slope = 0.0;
  double c = 0.0;
  double r2 = 0.0;
  int points = 0;
};

/// Least squares in log-log space; needs at least two points with x, y > 0.
LogLinearFit log_linear_fit(std::span<const double> x, std::span<const double> y);

struct RateFit {
  double alpha = 0.0, beta = 0.0, gamma = 0.0;
  double c1 = 0.0, c2 = 0.0, c3 = 0.0;
  double r2_alpha = 0.0, r2_beta = 0.0, r2_gamma = 0.0;
};

/// |E[Y_l]| ~ c1 M^-alpha and V(Y_l) ~ c2 M^-beta over the non-coarsest levels;
/// C_l ~ c3 M^gamma over all levels. Level 0 is the finest.
RateFit fit_rates(std::span<const double> M, std::span<const double> mean_Y, std::span<const double> var_Y,
                  std::span<const double> cost);

/// R_L = sqrt(V(Q_L) C_L) + sum_{l<L} sqrt(c2 M_l^-beta C_l); C and M have L+1 entries.
double scaled_root_cost(double var_QL, std::span<const double> C, std::span<const double> M, const RateFit& fit);

/// Adding the coarser level pays off iff R_{L+1}^2 < R_L^2.
bool extend_hierarchy(double R_L, double R_next);

enum class Regime { eps2, eps2_log2, eps_rate };

struct RegimeResult {
  Regime regime = Regime::eps2;
  std::string label;
  /// Cost ~ eps^exponent (times (log eps)^2 in the middle case).
  double exponent = -2.0;
  /// alpha < min(beta, gamma) / 2: the cost theorem does not apply.
  bool alpha_warning = false;
};

RegimeResult classify_regime(const RateFit& fit, double tol = 1e-6);

}  // namespace redamge
