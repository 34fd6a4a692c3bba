#include "redamge/plan.hpp"

#include "redamge/darcy.hpp"
#include "redamge/error.hpp"
#include "redamge/matrix_market.hpp"

#include "json.hpp"

#include <chrono>
#include <cmath>
#include <fstream>

namespace redamge {

namespace {

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return (a + b - 1) / b; }

std::int64_t ceil_div(std::int64_t a, double f) { return static_cast<std::int64_t>(std::ceil(a / f - 1e-12)); }

struct Step {
  std::int64_t next_global;
  std::int64_t next_nc;
  bool redistribute;
  bool stop;
};

Step next_step(std::int64_t global, std::int64_t nc, double factor, std::int64_t beta_c, std::int64_t min_local,
               bool redistribution) {
  Step s{0, nc, false, false};
  if (factor <= 1.0) {
    s.stop = true;
    return s;
  }
  s.next_global = ceil_div(global, factor);
  if (redistribution && nc > 1 && ceil_div(s.next_global, nc) < min_local) {
    s.next_nc = ceil_div(nc, beta_c);
    s.redistribute = true;
  }
  s.stop = s.next_global < std::max<std::int64_t>(s.next_nc, 2);
  return s;
}

}  // namespace

HierarchyPlan plan_hierarchy(const PlanInput& in) {
  require(in.global_elements >= 1 && in.n_cores >= 1 && in.beta_c >= 1 && in.min_local >= 1 && in.factor > 0.0,
          ErrorCode::invalid_argument, "plan_hierarchy: inputs must be positive");
  HierarchyPlan p;
  std::int64_t global = in.global_elements, nc = in.n_cores;
  p.levels.push_back({global, ceil_div(global, nc), nc, false});
  while (in.max_levels <= 0 || static_cast<int>(p.levels.size()) < in.max_levels) {
    const auto s = next_step(global, nc, in.factor, in.beta_c, in.min_local, in.redistribution);
    if (s.stop) break;
    global = s.next_global;
    nc = s.next_nc;
    p.levels.push_back({global, ceil_div(global, nc), nc, s.redistribute});
  }
  return p;
}

std::string plan_to_json(const HierarchyPlan& plan) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& l : plan.levels)
    j.push_back({{"global_elements", l.global_elements},
                 {"local_elements", l.local_elements},
                 {"active_cores", l.active_cores},
                 {"redistributed", l.redistributed}});
  return j.dump(2);
}

HierarchyPlan plan_from_json(const std::string& text) {
  HierarchyPlan p;
  try {
    for (const auto& l : nlohmann::json::parse(text))
      p.levels.push_back({l.at("global_elements").get<std::int64_t>(), l.at("local_elements").get<std::int64_t>(),
                          l.at("active_cores").get<std::int64_t>(), l.at("redistributed").get<bool>()});
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::io, std::string("plan_from_json: ") + e.what());
  }
  return p;
}

HierarchyPlan Hierarchy::realized_plan() const {
  HierarchyPlan p;
  for (const auto& l : levels) {
    const std::int64_t g = l.data.num_elements();
    const std::int64_t nc = l.data.layout.num_active();
    p.levels.push_back({g, ceil_div(g, nc), nc, l.redistributed});
  }
  return p;
}

namespace {

// Products every level performs on its own layout.
void log_level_products(const LevelData& d, CommLedger& ledger, int li) {
  const auto elem_owner = d.layout.element_owner();
  const auto d_owner = dof_owner(d);
  const auto t_owner = truedof_owner(d);
  const auto element_truedof =
      dist_bool_multiply(d.dofs.element_dof, d.dofs.dof_truedof, elem_owner, d_owner, ledger, li, "element_truedof");
  dist_bool_multiply(element_truedof, transpose(element_truedof), elem_owner, t_owner, ledger, li, "element_element");
  dist_bool_multiply(transpose(d.dofs.dof_truedof), d.dofs.dof_truedof, t_owner, d_owner, ledger, li,
                     "truedof_truedof");
}

}  // namespace

Hierarchy build_hierarchy(const Mesh& mesh, const HierarchyConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  Hierarchy h;
  Level l0;
  l0.data = fine_level(mesh, cfg.n_cores, cfg.seed);
  h.levels.push_back(std::move(l0));

  for (;;) {
    const int li = static_cast<int>(h.levels.size()) - 1;
    h.ledgers.emplace_back();
    auto& ledger = h.ledgers.back();
    const LevelData& fine = h.levels.back().data;
    log_level_products(fine, ledger, li);

    if (cfg.max_levels > 0 && li + 1 >= cfg.max_levels) break;
    const std::int64_t M = fine.num_elements();
    const std::int64_t nc = fine.layout.num_active();
    const auto s = next_step(M, nc, cfg.factor, cfg.beta_c, cfg.min_local, cfg.redistribution);
    if (s.stop) break;

    Level next;
    const LevelData* work = &fine;
    Relation AE_work;
    if (s.redistribute) {
      auto rl = redistribute_level(fine, cfg.beta_c, cfg.factor, cfg.seed, ledger, li);
      next.redistributed = true;
      AE_work = rl.maps.AE_newelement.relabeled("AE", "element");
      next.AE_element = rl.maps.AE_element;
      next.maps = std::move(rl.maps);
      next.finer_redistributed = std::move(rl.data);
      work = &*next.finer_redistributed;
    } else {
      AE_work = partition_groups(fine.layout.core_element, fine.element_element, cfg.factor, cfg.seed, "AE");
      next.AE_element = AE_work;
    }
    {
      const auto w_owner = work->layout.element_owner();
      dist_bool_multiply(AE_work, work->dofs.element_dof, derive_owner(AE_work, w_owner), w_owner, ledger, li,
                         "AE_dof");
    }
    auto coarse = coarsen_level(*work, AE_work);
    if (next.redistributed) {
      next.P_work = coarse.P;
      next.P = compose_interpolation(next.maps->newtruedof_truedof, coarse.P);
    } else {
      next.P = coarse.P;
    }
    next.data = std::move(coarse.data);
    h.levels.push_back(std::move(next));
  }
  h.build_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return h;
}

void dump_hierarchy(const Hierarchy& h, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (std::size_t l = 0; l < h.levels.size(); ++l) {
    const auto& lev = h.levels[l];
    const auto ldir = dir / ("level_" + std::to_string(l));
    dump_level(lev.data, ldir);
    mm::write(ldir / "A.mtx", assemble_level(lev.data));
    if (l > 0) {
      mm::write(ldir / "P.mtx", lev.P);
      mm::write(ldir / "AE_element.mtx", lev.AE_element);
    }
    if (lev.maps) {
      const auto& m = *lev.maps;
      const auto rdir = ldir / "redistribution";
      std::filesystem::create_directories(rdir);
      mm::write(rdir / "core_core.mtx", m.core_core);
      mm::write(rdir / "Core_core.mtx", m.Core_core);
      mm::write(rdir / "Core_element.mtx", m.Core_element);
      mm::write(rdir / "newelement_element.mtx", m.newelement_element);
      mm::write(rdir / "AE_newelement.mtx", m.AE_newelement);
      mm::write(rdir / "newdof_dof.mtx", m.newdof_dof);
      mm::write(rdir / "newtruedof_truedof.mtx", m.newtruedof_truedof);
      nlohmann::json js{{"beta_c", m.beta_c},
                        {"active_cores_before", h.levels[l - 1].data.layout.num_active()},
                        {"active_cores_after", lev.data.layout.num_active()},
                        {"elements", h.levels[l - 1].data.num_elements()}};
      std::ofstream(rdir / "summary.json") << js.dump(2) << '\n';
    }
  }
  std::ofstream os(dir / "plan.json");
  require(static_cast<bool>(os), ErrorCode::io, "cannot write plan.json");
  os << plan_to_json(h.realized_plan()) << '\n';
}

}  // namespace redamge
