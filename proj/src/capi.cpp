#include "redamge/redamge.h"

#include "redamge/commands.hpp"
#include "redamge/error.hpp"

#include <iostream>
#include <string>

struct redamge_config {
  redamge::RunConfig cfg;
};

struct redamge_plan {
  redamge::HierarchyPlan plan;
};

namespace {

thread_local std::string last_error;

template <class Fn>
int guarded(Fn fn) {
  try {
    last_error.clear();
    fn();
    return REDAMGE_OK;
  } catch (const redamge::Error& e) {
    last_error = e.what();
    return static_cast<int>(e.code());
  } catch (const std::exception& e) {
    last_error = e.what();
    return REDAMGE_E_INTERNAL;
  } catch (...) {
    last_error = "unknown error";
    return REDAMGE_E_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  if (!p) redamge::fail(redamge::ErrorCode::invalid_argument, std::string(what) + " is null");
}

}  // namespace

extern "C" {

const char* redamge_last_error(void) { return last_error.c_str(); }

int redamge_config_default(redamge_config** out) {
  return guarded([&] {
    need(out, "out");
    *out = new redamge_config{};
  });
}

int redamge_config_load(const char* path, redamge_config** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = new redamge_config{redamge::load_config(path)};
  });
}

int redamge_config_set(redamge_config* cfg, const char* key, const char* value) {
  return guarded([&] {
    need(cfg, "cfg");
    need(key, "key");
    need(value, "value");
    auto copy = cfg->cfg;
    redamge::set_config_value(copy, key, value);
    redamge::validate(copy);
    cfg->cfg = std::move(copy);
  });
}

void redamge_config_free(redamge_config* cfg) { delete cfg; }

int redamge_cmd_plan(const redamge_config* cfg, const char* outdir) {
  return guarded([&] {
    need(cfg, "cfg");
    need(outdir, "outdir");
    redamge::cmd_plan(cfg->cfg, outdir, std::cout);
  });
}

int redamge_cmd_build(const redamge_config* cfg, const char* outdir) {
  return guarded([&] {
    need(cfg, "cfg");
    need(outdir, "outdir");
    redamge::cmd_build(cfg->cfg, outdir, std::cout);
  });
}

int redamge_cmd_mlmc(const redamge_config* cfg, const char* outdir) {
  return guarded([&] {
    need(cfg, "cfg");
    need(outdir, "outdir");
    redamge::cmd_mlmc(cfg->cfg, outdir, std::cout);
  });
}

int redamge_plan_create(int64_t global_elements, int64_t n_cores, double factor, int64_t beta_c, int64_t min_local,
                        int redistribution, redamge_plan** out) {
  return guarded([&] {
    need(out, "out");
    redamge::PlanInput in;
    in.global_elements = global_elements;
    in.n_cores = n_cores;
    in.factor = factor;
    in.beta_c = beta_c;
    in.min_local = min_local;
    in.redistribution = redistribution != 0;
    *out = new redamge_plan{redamge::plan_hierarchy(in)};
  });
}

int redamge_plan_num_levels(const redamge_plan* plan, int* n) {
  return guarded([&] {
    need(plan, "plan");
    need(n, "n");
    *n = static_cast<int>(plan->plan.levels.size());
  });
}

int redamge_plan_level(const redamge_plan* plan, int level, int64_t* global_elements, int64_t* local_elements,
                       int64_t* active_cores, int* redistributed) {
  return guarded([&] {
    need(plan, "plan");
    if (level < 0 || level >= static_cast<int>(plan->plan.levels.size()))
      redamge::fail(redamge::ErrorCode::invalid_argument, "level out of range");
    const auto& l = plan->plan.levels[level];
    if (global_elements) *global_elements = l.global_elements;
    if (local_elements) *local_elements = l.local_elements;
    if (active_cores) *active_cores = l.active_cores;
    if (redistributed) *redistributed = l.redistributed ? 1 : 0;
  });
}

void redamge_plan_free(redamge_plan* plan) { delete plan; }

int redamge_optimal_samples(size_t n_levels, const double* V, const double* C, double epsilon, double* N_real,
                            int64_t* N) {
  return guarded([&] {
    need(V, "V");
    need(C, "C");
    need(N, "N");
    const auto p = redamge::optimal_samples({V, n_levels}, {C, n_levels}, epsilon);
    for (size_t l = 0; l < n_levels; ++l) {
      N[l] = p.N[l];
      if (N_real) N_real[l] = p.N_real[l];
    }
  });
}

}  // extern "C"
