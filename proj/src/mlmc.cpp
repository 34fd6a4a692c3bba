#include "redamge/mlmc.hpp"

#include "redamge/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace redamge {

McEstimate mc_estimate(std::span<const double> samples) {
  require(samples.size() >= 2, ErrorCode::estimator, "mc_estimate: need at least two samples");
  McEstimate e;
  e.n = static_cast<std::int64_t>(samples.size());
  double s = 0.0;
  for (double x : samples) s += x;
  e.mean = s / e.n;
  double ss = 0.0;
  for (double x : samples) ss += (x - e.mean) * (x - e.mean);
  e.variance = ss / (e.n - 1);
  e.std_error = std::sqrt(e.variance / e.n);
  return e;
}

std::int64_t mc_sample_requirement(double V, double eps) {
  require(eps > 0.0, ErrorCode::estimator, "mc_sample_requirement: eps must be positive");
  require(V >= 0.0, ErrorCode::estimator, "mc_sample_requirement: negative variance");
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(2.0 * V / (eps * eps))));
}

namespace {

MlmcPlan allocate(std::span<const double> V, std::span<const double> C, double eps, std::int64_t min_samples) {
  require(V.size() == C.size() && !V.empty(), ErrorCode::estimator, "optimal_samples: V and C sizes differ");
  require(eps > 0.0, ErrorCode::estimator, "optimal_samples: eps must be positive");
  double S = 0.0;
  for (std::size_t l = 0; l < V.size(); ++l) S += std::sqrt(C[l] * V[l]);
  MlmcPlan p;
  p.epsilon = eps;
  for (std::size_t l = 0; l < V.size(); ++l) {
    const double n = 2.0 / (eps * eps) * std::sqrt(V[l] / C[l]) * S;
    p.N_real.push_back(n);
    p.N.push_back(std::max(min_samples, static_cast<std::int64_t>(std::ceil(n))));
    p.sampling_error += V[l] / p.N.back();
  }
  p.predicted_cost = total_cost(p.N, C);
  return p;
}

}  // namespace

MlmcPlan optimal_samples(std::span<const double> V, std::span<const double> C, double eps) {
  for (std::size_t l = 0; l < V.size(); ++l)
    require(V[l] > 0.0 && l < C.size() && C[l] > 0.0, ErrorCode::estimator,
            "optimal_samples: variances and costs must be positive");
  return allocate(V, C, eps, 1);
}

MlmcPlan optimal_samples_floor(std::span<const double> V, std::span<const double> C, double eps,
                               std::int64_t min_samples) {
  for (std::size_t l = 0; l < V.size(); ++l)
    require(V[l] >= 0.0 && l < C.size() && C[l] > 0.0, ErrorCode::estimator,
            "optimal_samples: variances must be nonnegative and costs positive");
  return allocate(V, C, eps, std::max<std::int64_t>(1, min_samples));
}

double total_cost(std::span<const std::int64_t> N, std::span<const double> C) {
  require(N.size() == C.size(), ErrorCode::estimator, "total_cost: size mismatch");
  double s = 0.0;
  for (std::size_t l = 0; l < N.size(); ++l) s += static_cast<double>(N[l]) * C[l];
  return s;
}

double total_cost(std::span<const double> N, std::span<const double> C) {
  require(N.size() == C.size(), ErrorCode::estimator, "total_cost: size mismatch");
  double s = 0.0;
  for (std::size_t l = 0; l < N.size(); ++l) s += N[l] * C[l];
  return s;
}

LogLinearFit log_linear_fit(std::span<const double> x, std::span<const double> y) {
  require(x.size() == y.size(), ErrorCode::estimator, "log_linear_fit: size mismatch");
  require(x.size() >= 2, ErrorCode::estimator, "log_linear_fit: need at least two points");
  const auto n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    require(x[i] > 0.0 && y[i] > 0.0, ErrorCode::estimator, "log_linear_fit: data must be positive");
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
    sx += lx.back();
    sy += ly.back();
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  require(sxx > 0.0, ErrorCode::estimator, "log_linear_fit: degenerate abscissae");
  LogLinearFit f;
  f.slope = sxy / sxx;
  f.c = std::exp(my - f.slope * mx);
  f.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  f.points = static_cast<int>(x.size());
  return f;
}

RateFit fit_rates(std::span<const double> M, std::span<const double> mean_Y, std::span<const double> var_Y,
                  std::span<const double> cost) {
  const std::size_t L = M.size();
  require(mean_Y.size() == L && var_Y.size() == L && cost.size() == L, ErrorCode::estimator,
          "fit_rates: size mismatch");
  require(L >= 3, ErrorCode::estimator, "fit_rates: need at least two difference levels");
  std::vector<double> m(M.begin(), M.end() - 1), e, v;
  for (std::size_t l = 0; l + 1 < L; ++l) {
    e.push_back(std::abs(mean_Y[l]));
    v.push_back(var_Y[l]);
  }
  RateFit r;
  const auto fa = log_linear_fit(m, e);
  const auto fb = log_linear_fit(m, v);
  const auto fg = log_linear_fit(M, cost);
  r.alpha = -fa.slope;
  r.c1 = fa.c;
  r.r2_alpha = fa.r2;
  r.beta = -fb.slope;
  r.c2 = fb.c;
  r.r2_beta = fb.r2;
  r.gamma = fg.slope;
  r.c3 = fg.c;
  r.r2_gamma = fg.r2;
  return r;
}

double scaled_root_cost(double var_QL, std::span<const double> C, std::span<const double> M, const RateFit& fit) {
  require(!C.empty() && C.size() == M.size(), ErrorCode::estimator, "scaled_root_cost: missing predictions");
  require(var_QL >= 0.0, ErrorCode::estimator, "scaled_root_cost: negative variance");
  const std::size_t L = C.size() - 1;
  double r = std::sqrt(var_QL * C[L]);
  for (std::size_t l = 0; l < L; ++l) r += std::sqrt(fit.c2 * std::pow(M[l], -fit.beta) * C[l]);
  return r;
}

bool extend_hierarchy(double R_L, double R_next) { return R_next * R_next < R_L * R_L; }

RegimeResult classify_regime(const RateFit& fit, double tol) {
  RegimeResult r;
  r.alpha_warning = fit.alpha < 0.5 * std::min(fit.beta, fit.gamma);
  if (std::abs(fit.beta - fit.gamma) <= tol) {
    r.regime = Regime::eps2_log2;
    r.label = "eps^-2 (log eps)^2";
    r.exponent = -2.0;
  } else if (fit.beta > fit.gamma) {
    r.regime = Regime::eps2;
    r.label = "eps^-2";
    r.exponent = -2.0;
  } else {
    r.regime = Regime::eps_rate;
    r.label = "eps^-(2+(gamma-beta)/alpha)";
    r.exponent = -2.0 - (fit.gamma - fit.beta) / fit.alpha;
  }
  return r;
}

}  // namespace redamge
