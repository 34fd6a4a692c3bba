#include "redamge/commands.hpp"

#include "redamge/error.hpp"

#include "json.hpp"

#include <fstream>
#include <ostream>

namespace redamge {

namespace {

template <class Fn>
auto classify(ErrorCode as, Fn fn) {
  try {
    return fn();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::config) throw;
    throw Error(as, e.what());
  } catch (const std::exception& e) {
    throw Error(as, e.what());
  }
}

void ensure_dir(const std::filesystem::path& out) {
  std::error_code ec;
  std::filesystem::create_directories(out, ec);
  if (ec) fail(ErrorCode::io, "cannot create " + out.string() + ": " + ec.message());
}

void print_plan(std::ostream& log, const char* title, const HierarchyPlan& p) {
  log << title << "\n  level  global  local  cores  redistributed\n";
  for (std::size_t l = 0; l < p.levels.size(); ++l) {
    const auto& r = p.levels[l];
    log << "  " << l << "  " << r.global_elements << "  " << r.local_elements << "  " << r.active_cores << "  "
        << (r.redistributed ? "yes" : "no") << "\n";
  }
}

Mesh make_mesh(const RunConfig& cfg) { return build_mesh(cfg.dim, cfg.n, cfg.boundary); }

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  std::ofstream os(path);
  if (!os) fail(ErrorCode::io, "cannot write " + path.string());
  os << j.dump(2) << '\n';
}

}  // namespace

void cmd_plan(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log) {
  validate(cfg);
  classify(ErrorCode::build, [&] {
    ensure_dir(out);
    PlanInput in;
    in.global_elements = cfg.plan_global_elements > 0 ? cfg.plan_global_elements : [&] {
      std::int64_t g = 1;
      for (int a = 0; a < cfg.dim; ++a) g *= cfg.n;
      return g;
    }();
    in.n_cores = cfg.hierarchy.n_cores;
    in.factor = cfg.hierarchy.factor;
    in.beta_c = cfg.hierarchy.beta_c;
    in.min_local = cfg.hierarchy.min_local;
    in.max_levels = cfg.hierarchy.max_levels;
    in.redistribution = cfg.hierarchy.redistribution;
    const auto with = plan_hierarchy(in);
    in.redistribution = false;
    const auto without = plan_hierarchy(in);
    nlohmann::json j{{"global_elements", in.global_elements}, {"n_cores", in.n_cores},
                     {"factor", in.factor},                   {"beta_c", in.beta_c},
                     {"min_local", in.min_local},             {"redistribution_enabled", cfg.hierarchy.redistribution},
                     {"plan", nlohmann::json::parse(plan_to_json(with))},
                     {"no_redistribution", nlohmann::json::parse(plan_to_json(without))}};
    write_json(out / "plan.json", j);
    print_plan(log, cfg.hierarchy.redistribution ? "with redistribution" : "redistribution disabled", with);
    print_plan(log, "without redistribution", without);
    return 0;
  });
}

void cmd_build(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log) {
  validate(cfg);
  classify(ErrorCode::build, [&] {
    ensure_dir(out);
    const auto mesh = make_mesh(cfg);
    const auto h = build_hierarchy(mesh, cfg.hierarchy);
    dump_mesh(mesh, out / "mesh");
    dump_hierarchy(h, out / "hierarchy");
    write_ledger_csv(out / "ledger.csv", h.ledgers);
    nlohmann::json comm = nlohmann::json::array();
    for (const auto& [level, t] : comm_summary(h.ledgers))
      comm.push_back({{"level", level}, {"messages", t.messages}, {"volume", t.volume}});
    write_json(out / "comm_summary.json", comm);
    write_json(out / "timing.json", {{"build_seconds", h.build_seconds}});
    print_plan(log, "realized hierarchy", h.realized_plan());
    return 0;
  });
}

MlmcReport cmd_mlmc(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log) {
  validate(cfg);
  classify(ErrorCode::estimator, [&] {
    ensure_dir(out);
    return 0;
  });
  const auto mesh = classify(ErrorCode::build, [&] { return make_mesh(cfg); });
  const auto h = classify(ErrorCode::build, [&] { return build_hierarchy(mesh, cfg.hierarchy); });
  return classify(ErrorCode::estimator, [&] {
    const int threads = threads_from_env();
    MlmcRunner runner(mesh, h, cfg.sampler, cfg.boundary, cfg.seed, threads);
    auto report = run_mlmc(runner, cfg.mlmc);
    nlohmann::json timing{{"build_seconds", h.build_seconds}};
    if (cfg.reference_samples > 0) report.reference = run_plain_mc(runner, 0, cfg.reference_samples);
    if (cfg.compare) {
      auto hc = cfg.hierarchy;
      hc.redistribution = !hc.redistribution;
      const auto h2 = classify(ErrorCode::build, [&] { return build_hierarchy(mesh, hc); });
      timing["other_build_seconds"] = h2.build_seconds;
      MlmcRunner runner2(mesh, h2, cfg.sampler, cfg.boundary, cfg.seed, threads);
      auto opt = cfg.mlmc;
      opt.target_n0 = 0;
      opt.epsilon = report.epsilon;
      opt.main_run = false;
      const auto other = run_mlmc(runner2, opt);
      // Ratio of predicted total cost without redistribution to the cost with it.
      report.speedup = cfg.hierarchy.redistribution ? other.total_cost / report.total_cost
                                                    : report.total_cost / other.total_cost;
    }
    write_levels_csv(out / "levels.csv", report);
    {
      std::ofstream os(out / "summary.json");
      if (!os) fail(ErrorCode::io, "cannot write summary.json");
      os << summary_json(report) << '\n';
    }
    write_ledger_csv(out / "ledger.csv", h.ledgers);
    write_json(out / "timing.json", timing);
    log << "Q_hat = " << report.Q_hat << "  std_error = " << report.std_error << "  epsilon = " << report.epsilon
        << "\n";
    for (const auto& l : report.levels)
      log << "  level " << l.level << ": M=" << l.M << " nc=" << l.nc << " N=" << l.N << " E[Y]=" << l.mean_Y
          << " V[Y]=" << l.var_Y << "\n";
    return report;
  });
}

}  // namespace redamge
