// Command-line front end. Links only against the C interface.

#include "redamge/redamge.h"

#include "CLI11.hpp"

#include <cstdio>
#include <string>

namespace {

int report(int status) {
  if (status != REDAMGE_OK) std::fprintf(stderr, "error: %s\n", redamge_last_error());
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Element-agglomeration AMG hierarchies with coarse-level redistribution, driving MLMC for Darcy flow"};
  app.require_subcommand(1, 1);

  std::string config_path, out_dir;
  bool no_redistribution = false;
  long long seed = -1;
  for (const char* name : {"plan", "build", "mlmc"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "INI configuration file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory")->required();
    sub->add_flag("--no-redistribution", no_redistribution, "disable coarse-level redistribution");
    sub->add_option("--seed", seed, "random seed")->check(CLI::NonNegativeNumber);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : REDAMGE_E_CONFIG;
  }

  redamge_config* cfg = nullptr;
  if (int s = redamge_config_load(config_path.c_str(), &cfg); s != REDAMGE_OK) return report(s);
  int status = REDAMGE_OK;
  if (no_redistribution) status = redamge_config_set(cfg, "hierarchy.redistribution", "false");
  if (status == REDAMGE_OK && seed >= 0) status = redamge_config_set(cfg, "run.seed", std::to_string(seed).c_str());
  if (status == REDAMGE_OK) {
    const std::string cmd = app.get_subcommands().front()->get_name();
    if (cmd == "plan") status = redamge_cmd_plan(cfg, out_dir.c_str());
    else if (cmd == "build") status = redamge_cmd_build(cfg, out_dir.c_str());
    else status = redamge_cmd_mlmc(cfg, out_dir.c_str());
  }
  redamge_config_free(cfg);
  return report(status);
}
