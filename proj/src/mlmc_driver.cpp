#include "redamge/mlmc_driver.hpp"

#include "redamge/error.hpp"

#include "json.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <thread>

namespace redamge {

int threads_from_env() {
  const char* v = std::getenv("AMGE_REDIST_THREADS");
  if (!v || !*v) return 0;
  char* end = nullptr;
  const long n = std::strtol(v, &end, 10);
  if (end == v || n < 0) return 0;
  return static_cast<int>(std::min<long>(n, 256));
}

namespace {

// Each index is handled by exactly one worker; results land at their index.
template <class Fn>
void parallel_for(std::int64_t n, int threads, Fn fn) {
  if (threads <= 1 || n < 2) {
    for (std::int64_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&, t] {
      try {
        for (std::int64_t i = t; i < n; i += threads) fn(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace

MlmcRunner::MlmcRunner(const Mesh& mesh, const Hierarchy& hierarchy, const SamplerParams& params,
                       const BoundarySpec& bc, std::uint64_t seed, int threads)
    : h_(&hierarchy), sampler_(mesh, params), seed_(seed), threads_(threads) {
  for (const auto& l : hierarchy.levels) {
    systems_.emplace_back(l.data, bc);
    std::vector<double> ones(l.data.num_elements(), 1.0);
    opcount_.push_back(static_cast<double>(systems_.back().solve(ones).factor_nnz));
  }
}

std::int64_t MlmcRunner::elements(int level) const { return h_->levels.at(level).data.num_elements(); }

std::int64_t MlmcRunner::active_cores(int level) const { return h_->levels.at(level).data.layout.num_active(); }

std::vector<std::vector<double>> MlmcRunner::fields(const StreamKey& key, int upto) const {
  std::vector<std::vector<double>> u;
  u.push_back(sampler_.sample_fine_field(key).u[0]);
  for (int l = 1; l <= upto; ++l)
    u.push_back(project_field(u.back(), h_->levels[l - 1].data.element_measure, h_->levels[l].AE_element));
  return u;
}

double MlmcRunner::qoi(int level, const std::vector<double>& u) const {
  std::vector<double> k(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) k[i] = std::exp(u[i]);
  const auto sol = systems_.at(level).solve(k);
  return qoi_flux(h_->levels[level].data, sol);
}

std::pair<double, double> MlmcRunner::pair_sample(int level, const StreamKey& key) const {
  const bool coarsest = level + 1 >= num_levels();
  const auto u = fields(key, coarsest ? level : level + 1);
  const double qf = qoi(level, u[level]);
  return {qf, coarsest ? 0.0 : qoi(level + 1, u[level + 1])};
}

MlmcRunner::LevelSamples MlmcRunner::run_level(int level, std::int64_t n, StreamPurpose purpose) const {
  LevelSamples s;
  s.Q.resize(n);
  s.Y.resize(n);
  std::vector<double> secs(n, 0.0);
  const bool coarsest = level + 1 >= num_levels();
  parallel_for(n, threads_, [&](std::int64_t i) {
    const StreamKey key{seed_, static_cast<std::uint64_t>(level), static_cast<std::uint64_t>(i), purpose};
    const auto u = fields(key, coarsest ? level : level + 1);
    const auto t0 = std::chrono::steady_clock::now();
    const double qf = qoi(level, u[level]);
    secs[i] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    s.Q[i] = qf;
    s.Y[i] = coarsest ? qf : qf - qoi(level + 1, u[level + 1]);
  });
  double total = 0.0;
  for (double t : secs) total += t;
  s.mean_seconds = n > 0 ? total / n : 0.0;
  return s;
}

std::vector<double> MlmcRunner::run_qoi(int level, std::int64_t n, StreamPurpose purpose) const {
  std::vector<double> q(n);
  parallel_for(n, threads_, [&](std::int64_t i) {
    const StreamKey key{seed_, static_cast<std::uint64_t>(level), static_cast<std::uint64_t>(i), purpose};
    q[i] = qoi(level, fields(key, level)[level]);
  });
  return q;
}

McEstimate run_plain_mc(const MlmcRunner& runner, int level, std::int64_t n) {
  return mc_estimate(runner.run_qoi(level, n, StreamPurpose::reference));
}

MlmcReport run_mlmc(const MlmcRunner& runner, const MlmcOptions& opt) {
  require(opt.pilot_samples >= 2, ErrorCode::estimator, "run_mlmc: need at least two pilot samples per level");
  require(opt.cost_model == "opcount" || opt.cost_model == "walltime", ErrorCode::estimator,
          "run_mlmc: cost model must be opcount or walltime");
  const int L = runner.num_levels();
  MlmcReport r;
  r.cost_model = opt.cost_model;
  r.levels.resize(L);

  std::vector<McEstimate> pilot_Q(L), pilot_Y(L);
  for (int l = 0; l < L; ++l) {
    const auto s = runner.run_level(l, opt.pilot_samples, StreamPurpose::pilot);
    pilot_Q[l] = mc_estimate(s.Q);
    pilot_Y[l] = mc_estimate(s.Y);
    auto& lr = r.levels[l];
    lr.level = l;
    lr.M = runner.elements(l);
    lr.nc = runner.active_cores(l);
    lr.var_Q = pilot_Q[l].variance;
    lr.var_Y = pilot_Y[l].variance;
    lr.pilot_mean_Y = pilot_Y[l].mean;
    lr.cost_Q = opt.cost_model == "opcount" ? runner.opcount(l) : static_cast<double>(lr.nc) * s.mean_seconds;
  }
  std::vector<double> V(L), C(L), M(L), costQ(L), meanY(L);
  for (int l = 0; l < L; ++l) {
    auto& lr = r.levels[l];
    lr.cost_Y = lr.cost_Q + (l + 1 < L ? r.levels[l + 1].cost_Q : 0.0);
    V[l] = lr.var_Y;
    C[l] = lr.cost_Y;
    M[l] = static_cast<double>(lr.M);
    costQ[l] = lr.cost_Q;
    meanY[l] = lr.pilot_mean_Y;
  }

  double eps = opt.epsilon;
  if (opt.target_n0 > 0) {
    require(V[0] > 0.0, ErrorCode::estimator, "run_mlmc: target_n0 needs a positive finest-level variance");
    double S = 0.0;
    for (int l = 0; l < L; ++l) S += std::sqrt(C[l] * V[l]);
    eps = std::sqrt(2.0 * std::sqrt(V[0] / C[0]) * S / static_cast<double>(opt.target_n0));
  }
  require(eps > 0.0, ErrorCode::estimator, "run_mlmc: epsilon must be positive");
  r.epsilon = eps;
  r.plan = optimal_samples_floor(V, C, eps, opt.min_samples);
  r.sampling_error = r.plan.sampling_error;

  double var_sum = 0.0;
  for (int l = 0; l < L && opt.main_run; ++l) {
    const auto s = runner.run_level(l, r.plan.N[l], StreamPurpose::main);
    auto& lr = r.levels[l];
    lr.N = r.plan.N[l];
    const auto eq = mc_estimate(s.Q);
    const auto ey = mc_estimate(s.Y);
    lr.mean_Q = eq.mean;
    lr.mean_Y = ey.mean;
    lr.main_var_Y = ey.variance;
    r.Q_hat += ey.mean;
    var_sum += ey.variance / static_cast<double>(lr.N);
  }
  r.std_error = std::sqrt(var_sum);
  r.total_cost = total_cost(r.plan.N, C);

  if (L >= 3) {
    try {
      r.fit = fit_rates(M, meanY, V, costQ);
      r.regime = classify_regime(*r.fit);
      for (int cand = 0; cand < L; ++cand) {
        std::vector<double> Ct(cand + 1), Mt(M.begin(), M.begin() + cand + 1);
        for (int l = 0; l < cand; ++l) Ct[l] = costQ[l] + costQ[l + 1];
        Ct[cand] = costQ[cand];
        r.scaled_root_costs.push_back(scaled_root_cost(r.levels[cand].var_Q, Ct, Mt, *r.fit));
      }
      r.recommended_levels = 1;
      for (int cand = 0; cand + 1 < L; ++cand) {
        if (!extend_hierarchy(r.scaled_root_costs[cand], r.scaled_root_costs[cand + 1])) break;
        r.recommended_levels = cand + 2;
      }
    } catch (const Error& e) {
      r.fit.reset();
      r.regime.reset();
      r.scaled_root_costs.clear();
      r.fit_note = e.what();
    }
  } else {
    r.fit_note = "rate fits need at least three levels";
  }
  return r;
}

double predicted_cost(const MlmcReport& report, const std::vector<double>& cost_Q) {
  const auto L = report.levels.size();
  require(cost_Q.size() == L, ErrorCode::estimator, "predicted_cost: one cost per level expected");
  double s = 0.0;
  for (std::size_t l = 0; l < L; ++l)
    s += static_cast<double>(report.plan.N[l]) * (cost_Q[l] + (l + 1 < L ? cost_Q[l + 1] : 0.0));
  return s;
}

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_levels_csv(const std::filesystem::path& path, const MlmcReport& r) {
  std::ofstream os(path);
  require(static_cast<bool>(os), ErrorCode::io, "cannot write " + path.string());
  os << "level,M,nc,E_Q,E_Y,V_Q,V_Y,C,N\n";
  for (const auto& l : r.levels)
    os << l.level << ',' << l.M << ',' << l.nc << ',' << num(l.mean_Q) << ',' << num(l.mean_Y) << ',' << num(l.var_Q)
       << ',' << num(l.var_Y) << ',' << num(l.cost_Y) << ',' << l.N << '\n';
}

std::string summary_json(const MlmcReport& r) {
  using nlohmann::json;
  json j;
  j["Q_hat"] = r.Q_hat;
  j["epsilon"] = r.epsilon;
  j["std_error"] = r.std_error;
  j["sampling_error"] = r.sampling_error;
  j["sampling_error_bound"] = 0.5 * r.epsilon * r.epsilon;
  j["total_cost"] = r.total_cost;
  j["cost_model"] = r.cost_model;
  j["N"] = r.plan.N;
  j["N_real"] = r.plan.N_real;
  if (r.fit) {
    const auto& f = *r.fit;
    j["rates"] = {{"alpha", f.alpha}, {"beta", f.beta},         {"gamma", f.gamma},
                  {"c1", f.c1},       {"c2", f.c2},             {"c3", f.c3},
                  {"r2_alpha", f.r2_alpha}, {"r2_beta", f.r2_beta}, {"r2_gamma", f.r2_gamma}};
  } else {
    j["rates"] = nullptr;
  }
  if (r.regime)
    j["regime"] = {{"label", r.regime->label}, {"exponent", r.regime->exponent},
                   {"alpha_warning", r.regime->alpha_warning}};
  else
    j["regime"] = nullptr;
  if (!r.fit_note.empty()) j["fit_note"] = r.fit_note;
  j["scaled_root_costs"] = r.scaled_root_costs;
  j["recommended_levels"] = r.recommended_levels;
  j["scaled_root_cost_note"] = "finer terms use the fitted variance model; coarsest term uses the pilot V(Q_L)";
  if (r.speedup) j["speedup_vs_no_redistribution"] = *r.speedup;
  if (r.reference)
    j["reference_mc"] = {{"mean", r.reference->mean}, {"std_error", r.reference->std_error}, {"n", r.reference->n}};
  return j.dump(2);
}

}  // namespace redamge
