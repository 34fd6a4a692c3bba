#include "redamge/commands.hpp"
#include "redamge/config.hpp"
#include "redamge/error.hpp"
#include "redamge/mlmc.hpp"
#include "redamge/redamge.h"

#include "json.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>

using namespace redamge;

namespace {

std::optional<ErrorCode> code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

std::filesystem::path scratch(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("redamge_test_" + name);
  std::filesystem::remove_all(p);
  return p;
}

}  // namespace

TEST(Config, UnknownKeyRejected) {
  EXPECT_EQ(code_of([] { parse_config("[mesh]\ncells = 4\n"); }), ErrorCode::config);
  EXPECT_EQ(code_of([] { parse_config("[meshes]\nn = 4\n"); }), ErrorCode::config);
  RunConfig c;
  EXPECT_EQ(code_of([&] { set_config_value(c, "hierarchy.beta", "4"); }), ErrorCode::config);
}

TEST(Config, BadValuesRejected) {
  EXPECT_EQ(code_of([] { parse_config("[mesh]\ndim = 4\n"); }), ErrorCode::config);
  EXPECT_EQ(code_of([] { parse_config("[mesh]\nn = four\n"); }), ErrorCode::config);
  EXPECT_EQ(code_of([] { parse_config("[hierarchy]\nredistribution = maybe\n"); }), ErrorCode::config);
  EXPECT_EQ(code_of([] { parse_config("[mlmc]\ncost_model = flops\n"); }), ErrorCode::config);
  EXPECT_EQ(code_of([] { parse_config("[mlmc]\npilot_samples = 1\n"); }), ErrorCode::config);
}

TEST(Config, ParsesValues) {
  auto c = parse_config(
      "[mesh]\ndim = 3\nn = 8\nx_lo = neumann\ny_lo = dirichlet_in\n[hierarchy]\nbeta_c = 2\nredistribution = false\n"
      "[mlmc]\nepsilon = 0.003\n[run]\nseed = 77\n");
  EXPECT_EQ(c.dim, 3);
  EXPECT_EQ(c.n, 8);
  EXPECT_EQ(c.boundary.side[0], BoundaryAttr::neumann);
  EXPECT_EQ(c.boundary.side[2], BoundaryAttr::dirichlet_in);
  EXPECT_EQ(c.hierarchy.beta_c, 2);
  EXPECT_FALSE(c.hierarchy.redistribution);
  EXPECT_EQ(c.mlmc.epsilon, 0.003);
  EXPECT_EQ(c.seed, 77u);
}

TEST(Config, IniRoundTrip) {
  RunConfig c;
  c.dim = 3;
  c.n = 12;
  c.boundary.p_in = 0.1 + 0.2;
  c.hierarchy.factor = 6.5;
  c.hierarchy.redistribution = false;
  c.sampler.corr_len = 1.0 / 3;
  c.mlmc.cost_model = "walltime";
  c.compare = true;
  c.seed = 123456789;
  const auto back = parse_config(to_ini(c));
  EXPECT_EQ(to_ini(back), to_ini(c));
  EXPECT_EQ(back.boundary.p_in, c.boundary.p_in);
  EXPECT_EQ(back.sampler.corr_len, c.sampler.corr_len);
  EXPECT_EQ(to_ini(parse_config(to_ini(RunConfig{}))), to_ini(RunConfig{}));
}

TEST(CApi, ConfigStatusCodes) {
  redamge_config* cfg = nullptr;
  ASSERT_EQ(redamge_config_default(&cfg), REDAMGE_OK);
  EXPECT_EQ(redamge_config_set(cfg, "mesh.n", "8"), REDAMGE_OK);
  EXPECT_EQ(redamge_config_set(cfg, "mesh.bogus", "8"), REDAMGE_E_CONFIG);
  EXPECT_NE(std::string(redamge_last_error()).find("bogus"), std::string::npos);
  EXPECT_EQ(redamge_config_set(nullptr, "mesh.n", "8"), REDAMGE_E_INVALID);
  redamge_config_free(cfg);
  redamge_config* missing = nullptr;
  EXPECT_EQ(redamge_config_load("/nonexistent/x.ini", &missing), REDAMGE_E_CONFIG);
}

TEST(CApi, PlanMatchesTable) {
  redamge_plan* plan = nullptr;
  ASSERT_EQ(redamge_plan_create(32768 * 512, 512, 8.0, 8, 64, 0, &plan), REDAMGE_OK);
  int n = 0;
  ASSERT_EQ(redamge_plan_num_levels(plan, &n), REDAMGE_OK);
  const std::int64_t local[] = {32768, 4096, 512, 64, 8, 1};
  ASSERT_EQ(n, 6);
  for (int l = 0; l < n; ++l) {
    int64_t g = 0, loc = 0, nc = 0;
    int red = 0;
    ASSERT_EQ(redamge_plan_level(plan, l, &g, &loc, &nc, &red), REDAMGE_OK);
    EXPECT_EQ(loc, local[l]);
    EXPECT_EQ(nc, 512);
  }
  int64_t g = 0, loc = 0, nc = 0;
  int red = 0;
  EXPECT_EQ(redamge_plan_level(plan, 6, &g, &loc, &nc, &red), REDAMGE_E_INVALID);
  redamge_plan_free(plan);
  EXPECT_EQ(redamge_plan_create(0, 1, 8.0, 8, 64, 1, &plan), REDAMGE_E_INVALID);
}

TEST(CApi, OptimalSamples) {
  const double V[] = {4, 1}, C[] = {1, 4};
  double Nr[2];
  int64_t N[2];
  ASSERT_EQ(redamge_optimal_samples(2, V, C, 0.1, Nr, N), REDAMGE_OK);
  EXPECT_NEAR(Nr[0], 1600, 1e-9);
  EXPECT_NEAR(Nr[1], 400, 1e-9);
  EXPECT_EQ(N[0], 1600);
  EXPECT_EQ(redamge_optimal_samples(2, V, C, 0.1, nullptr, N), REDAMGE_OK);
  const double bad[] = {0, 1};
  EXPECT_EQ(redamge_optimal_samples(2, bad, C, 0.1, Nr, N), REDAMGE_E_ESTIMATOR);
}

TEST(Commands, PlanWritesJson) {
  RunConfig c;
  c.dim = 3;
  c.n = 32;
  c.hierarchy.n_cores = 512;
  c.plan_global_elements = 32768 * 512;
  const auto out = scratch("plan");
  std::ostringstream log;
  cmd_plan(c, out, log);
  std::ifstream is(out / "plan.json");
  ASSERT_TRUE(is);
  auto j = nlohmann::json::parse(is);
  EXPECT_EQ(j["global_elements"], 32768 * 512);
  EXPECT_EQ(j["plan"].size(), 8u);
  EXPECT_EQ(j["no_redistribution"].size(), 6u);
  EXPECT_EQ(j["plan"][7]["local_elements"], 8);
  EXPECT_EQ(j["plan"][7]["active_cores"], 1);
  std::filesystem::remove_all(out);
}

TEST(Commands, BuildWritesLedgerAndLevels) {
  RunConfig c;
  c.n = 8;
  c.hierarchy = {3, 4.0, 2, 4, 4, true, 0};
  const auto out = scratch("build");
  std::ostringstream log;
  cmd_build(c, out, log);
  EXPECT_TRUE(std::filesystem::exists(out / "ledger.csv"));
  EXPECT_TRUE(std::filesystem::exists(out / "timing.json"));
  EXPECT_TRUE(std::filesystem::exists(out / "hierarchy"));
  std::filesystem::remove_all(out);
}
