#include "redamge/config.hpp"

#include "redamge/error.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace redamge {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::int64_t to_int(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  long long x = 0;
  try {
    x = std::stoll(v, &pos);
  } catch (...) {
    pos = 0;
  }
  if (pos == 0 || pos != v.size()) fail(ErrorCode::config, "config: " + key + " expects an integer, got '" + v + "'");
  return x;
}

double to_double(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  double x = 0;
  try {
    x = std::stod(v, &pos);
  } catch (...) {
    pos = 0;
  }
  if (pos == 0 || pos != v.size()) fail(ErrorCode::config, "config: " + key + " expects a number, got '" + v + "'");
  return x;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  fail(ErrorCode::config, "config: " + key + " expects a boolean, got '" + v + "'");
}

BoundaryAttr to_attr(const std::string& key, const std::string& v) {
  if (v == "dirichlet_in") return BoundaryAttr::dirichlet_in;
  if (v == "dirichlet_out") return BoundaryAttr::dirichlet_out;
  if (v == "neumann") return BoundaryAttr::neumann;
  fail(ErrorCode::config, "config: " + key + " expects dirichlet_in, dirichlet_out or neumann");
}

using Setter = std::function<void(RunConfig&, const std::string& key, const std::string& value)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> t;
    t["mesh.dim"] = [](RunConfig& c, auto& k, auto& v) { c.dim = static_cast<int>(to_int(k, v)); };
    t["mesh.n"] = [](RunConfig& c, auto& k, auto& v) { c.n = static_cast<index_t>(to_int(k, v)); };
    t["mesh.p_in"] = [](RunConfig& c, auto& k, auto& v) { c.boundary.p_in = to_double(k, v); };
    t["mesh.p_out"] = [](RunConfig& c, auto& k, auto& v) { c.boundary.p_out = to_double(k, v); };
    const char* sides[] = {"x_lo", "x_hi", "y_lo", "y_hi", "z_lo", "z_hi"};
    for (int s = 0; s < 6; ++s)
      t[std::string("mesh.") + sides[s]] = [s](RunConfig& c, auto& k, auto& v) { c.boundary.side[s] = to_attr(k, v); };
    t["hierarchy.levels"] = [](RunConfig& c, auto& k, auto& v) { c.hierarchy.max_levels = static_cast<int>(to_int(k, v)); };
    t["hierarchy.factor"] = [](RunConfig& c, auto& k, auto& v) { c.hierarchy.factor = to_double(k, v); };
    t["hierarchy.beta_c"] = [](RunConfig& c, auto& k, auto& v) { c.hierarchy.beta_c = static_cast<index_t>(to_int(k, v)); };
    t["hierarchy.min_local"] = [](RunConfig& c, auto& k, auto& v) { c.hierarchy.min_local = static_cast<index_t>(to_int(k, v)); };
    t["hierarchy.n_cores"] = [](RunConfig& c, auto& k, auto& v) { c.hierarchy.n_cores = static_cast<index_t>(to_int(k, v)); };
    t["hierarchy.redistribution"] = [](RunConfig& c, auto& k, auto& v) { c.hierarchy.redistribution = to_bool(k, v); };
    t["plan.global_elements"] = [](RunConfig& c, auto& k, auto& v) { c.plan_global_elements = to_int(k, v); };
    t["sampler.sigma"] = [](RunConfig& c, auto& k, auto& v) { c.sampler.sigma = to_double(k, v); };
    t["sampler.corr_len"] = [](RunConfig& c, auto& k, auto& v) { c.sampler.corr_len = to_double(k, v); };
    t["sampler.nu"] = [](RunConfig& c, auto& k, auto& v) { c.sampler.nu = to_double(k, v); };
    t["sampler.n_modes"] = [](RunConfig& c, auto& k, auto& v) { c.sampler.n_modes = static_cast<index_t>(to_int(k, v)); };
    t["mlmc.epsilon"] = [](RunConfig& c, auto& k, auto& v) { c.mlmc.epsilon = to_double(k, v); };
    t["mlmc.target_n0"] = [](RunConfig& c, auto& k, auto& v) { c.mlmc.target_n0 = to_int(k, v); };
    t["mlmc.pilot_samples"] = [](RunConfig& c, auto& k, auto& v) { c.mlmc.pilot_samples = to_int(k, v); };
    t["mlmc.min_samples"] = [](RunConfig& c, auto& k, auto& v) { c.mlmc.min_samples = to_int(k, v); };
    t["mlmc.cost_model"] = [](RunConfig& c, auto&, auto& v) { c.mlmc.cost_model = v; };
    t["mlmc.reference_samples"] = [](RunConfig& c, auto& k, auto& v) { c.reference_samples = to_int(k, v); };
    t["mlmc.compare"] = [](RunConfig& c, auto& k, auto& v) { c.compare = to_bool(k, v); };
    t["run.seed"] = [](RunConfig& c, auto& k, auto& v) {
      const auto s = to_int(k, v);
      if (s < 0) fail(ErrorCode::config, "config: run.seed must be nonnegative");
      c.seed = static_cast<std::uint64_t>(s);
    };
    return t;
  }();
  return table;
}

}  // namespace

void set_config_value(RunConfig& cfg, const std::string& key, const std::string& value) {
  const auto it = setters().find(key);
  if (it == setters().end()) fail(ErrorCode::config, "config: unknown key '" + key + "'");
  it->second(cfg, key, trim(value));
}

RunConfig parse_config(const std::string& text) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream is(text);
  try {
    pt::read_ini(is, tree);
  } catch (const pt::ini_parser_error& e) {
    fail(ErrorCode::config, std::string("config: ") + e.what());
  }
  RunConfig cfg;
  for (const auto& [section, body] : tree) {
    if (body.empty()) fail(ErrorCode::config, "config: key '" + section + "' outside a section");
    for (const auto& [name, value] : body) set_config_value(cfg, section + "." + name, value.data());
  }
  validate(cfg);
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) fail(ErrorCode::config, "config: cannot open " + path.string());
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str());
}

void validate(const RunConfig& c) {
  auto check = [](bool ok, const std::string& what) {
    if (!ok) fail(ErrorCode::config, "config: " + what);
  };
  check(c.dim == 2 || c.dim == 3, "mesh.dim must be 2 or 3");
  check(c.n >= 1, "mesh.n must be >= 1");
  check(c.hierarchy.max_levels >= 0, "hierarchy.levels must be >= 0 (0 = no cap)");
  check(c.hierarchy.factor >= 1.0, "hierarchy.factor must be >= 1");
  check(c.hierarchy.beta_c >= 1, "hierarchy.beta_c must be >= 1");
  check(c.hierarchy.min_local >= 1, "hierarchy.min_local must be >= 1");
  check(c.hierarchy.n_cores >= 1, "hierarchy.n_cores must be >= 1");
  check(c.plan_global_elements >= 0, "plan.global_elements must be >= 0");
  check(c.sampler.sigma >= 0.0, "sampler.sigma must be >= 0");
  check(c.sampler.corr_len >= 0.0, "sampler.corr_len must be >= 0");
  check(c.sampler.nu > 0.0, "sampler.nu must be > 0");
  check(c.sampler.n_modes >= 1, "sampler.n_modes must be >= 1");
  check(c.mlmc.epsilon > 0.0, "mlmc.epsilon must be > 0");
  check(c.mlmc.target_n0 >= 0, "mlmc.target_n0 must be >= 0");
  check(c.mlmc.pilot_samples >= 2, "mlmc.pilot_samples must be >= 2");
  check(c.mlmc.min_samples >= 1, "mlmc.min_samples must be >= 1");
  check(c.mlmc.cost_model == "opcount" || c.mlmc.cost_model == "walltime",
        "mlmc.cost_model must be opcount or walltime");
  check(c.reference_samples == 0 || c.reference_samples >= 2, "mlmc.reference_samples must be 0 or >= 2");
}

std::string to_ini(const RunConfig& c) {
  auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  const char* sides[] = {"x_lo", "x_hi", "y_lo", "y_hi", "z_lo", "z_hi"};
  std::ostringstream os;
  os << "[mesh]\ndim = " << c.dim << "\nn = " << c.n << "\np_in = " << num(c.boundary.p_in)
     << "\np_out = " << num(c.boundary.p_out) << "\n";
  for (int s = 0; s < 6; ++s) os << sides[s] << " = " << to_string(c.boundary.side[s]) << "\n";
  os << "\n[hierarchy]\nlevels = " << c.hierarchy.max_levels << "\nfactor = " << num(c.hierarchy.factor)
     << "\nbeta_c = " << c.hierarchy.beta_c << "\nmin_local = " << c.hierarchy.min_local
     << "\nn_cores = " << c.hierarchy.n_cores << "\nredistribution = " << (c.hierarchy.redistribution ? "true" : "false")
     << "\n\n[plan]\nglobal_elements = " << c.plan_global_elements << "\n\n[sampler]\nsigma = " << num(c.sampler.sigma)
     << "\ncorr_len = " << num(c.sampler.corr_len) << "\nnu = " << num(c.sampler.nu) << "\nn_modes = " << c.sampler.n_modes
     << "\n\n[mlmc]\nepsilon = " << num(c.mlmc.epsilon) << "\ntarget_n0 = " << c.mlmc.target_n0
     << "\npilot_samples = " << c.mlmc.pilot_samples << "\nmin_samples = " << c.mlmc.min_samples
     << "\ncost_model = " << c.mlmc.cost_model << "\nreference_samples = " << c.reference_samples
     << "\ncompare = " << (c.compare ? "true" : "false") << "\n\n[run]\nseed = " << c.seed << "\n";
  return os.str();
}

}  // namespace redamge
