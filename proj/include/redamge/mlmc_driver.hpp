#pragma once

// Runs the multilevel estimator on a built hierarchy: pilot phase, optimal
// allocation, main run, rate fits and report files.

#include "redamge/darcy.hpp"
#include "redamge/mlmc.hpp"
#include "redamge/plan.hpp"
#include "redamge/sampler.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace redamge {

/// Worker count from AMGE_REDIST_THREADS; 0 or unset means sequential.
int threads_from_env();

class MlmcRunner {
public:
  MlmcRunner(const Mesh& mesh, const Hierarchy& hierarchy, const SamplerParams& params, const BoundarySpec& bc,
             std::uint64_t seed, int threads = 0);

  int num_levels() const { return static_cast<int>(systems_.size()); }
  std::int64_t elements(int level) const;
  std::int64_t active_cores(int level) const;

  /// Log-fields of levels 0..upto, all derived from one fine sample.
  std::vector<std::vector<double>> fields(const StreamKey& key, int upto) const;
  double qoi(int level, const std::vector<double>& u) const;
  /// (Q_l, Q_{l+1}) from one shared fine field; the second entry is 0 on the coarsest level.
  std::pair<double, double> pair_sample(int level, const StreamKey& key) const;

  struct LevelSamples {
    std::vector<double> Q;
    std::vector<double> Y;
    /// Mean wall time of one level-l solve.
    double mean_seconds = 0.0;
  };
  LevelSamples run_level(int level, std::int64_t n, StreamPurpose purpose) const;
  /// Q_l only, for plain Monte Carlo at one level.
  std::vector<double> run_qoi(int level, std::int64_t n, StreamPurpose purpose) const;

  /// nnz(L) + nnz(U) of the level's k = 1 factorization.
  double opcount(int level) const { return opcount_.at(level); }

private:
  const Hierarchy* h_;
  FieldSampler sampler_;
  std::vector<DarcySystem> systems_;
  std::vector<double> opcount_;
  std::uint64_t seed_;
  int threads_;
};

struct MlmcOptions {
  double epsilon = 0.01;
  /// When positive, epsilon is chosen so that the finest level gets about this many samples.
  std::int64_t target_n0 = 0;
  std::int64_t pilot_samples = 50;
  std::int64_t min_samples = 2;
  /// "opcount" or "walltime".
  std::string cost_model = "opcount";
  /// false stops after the pilot phase and the allocation.
  bool main_run = true;
};

struct LevelReport {
  int level = 0;
  std::int64_t M = 0;
  std::int64_t nc = 0;
  /// Main-run means.
  double mean_Q = 0.0;
  double mean_Y = 0.0;
  /// Pilot variances (the ones used for planning).
  double var_Q = 0.0;
  double var_Y = 0.0;
  double pilot_mean_Y = 0.0;
  double main_var_Y = 0.0;
  /// Cost of one level-l solve and of one Y_l sample.
  double cost_Q = 0.0;
  double cost_Y = 0.0;
  std::int64_t N = 0;
};

struct MlmcReport {
  double epsilon = 0.0;
  double Q_hat = 0.0;
  double std_error = 0.0;
  /// sum V_l / N_l with pilot variances; bounded by eps^2 / 2.
  double sampling_error = 0.0;
  double total_cost = 0.0;
  std::string cost_model;
  std::vector<LevelReport> levels;
  MlmcPlan plan;
  std::optional<RateFit> fit;
  std::optional<RegimeResult> regime;
  std::string fit_note;
  std::vector<double> scaled_root_costs;
  int recommended_levels = 0;
  std::optional<double> speedup;
  std::optional<McEstimate> reference;
};

MlmcReport run_mlmc(const MlmcRunner& runner, const MlmcOptions& opt);

/// Plain Monte Carlo at one level with its own stream purpose.
McEstimate run_plain_mc(const MlmcRunner& runner, int level, std::int64_t n);

/// Predicted cost with per-level solve costs C (one per level) under the report's sample counts.
double predicted_cost(const MlmcReport& report, const std::vector<double>& cost_Q);

void write_levels_csv(const std::filesystem::path& path, const MlmcReport& r);
std::string summary_json(const MlmcReport& r);

}  // namespace redamge
