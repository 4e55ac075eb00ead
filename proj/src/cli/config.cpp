#include "qbus/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "qbus/error.hpp"

namespace qbus::cli {

using nlohmann::json;

namespace {

struct CommandInfo {
  std::vector<std::string> engines;  // first entry is the default
  int cutoff;
  json params;
};

const std::map<std::string, CommandInfo>& registry() {
  static const std::map<std::string, CommandInfo> reg = [] {
    std::map<std::string, CommandInfo> r;
    r["two-qubit"] = {{"full", "analytic", "effective"},
                      1,
                      {{"chi1", 1.0}, {"ratio", std::sqrt(2.0) - 1.0}, {"samples", 201}}};
    r["w-state"] = {{"full", "analytic", "effective"},
                    1,
                    {{"n_values", {2, 3, 4, 5, 6, 7, 8}}, {"boosted_qubit", 0}, {"chi_ref", 1.0}, {"samples", 101}}};
    r["fig1"] = {{"lindblad"},
                 1,
                 {{"n_values", {2, 3, 4, 5, 6}},
                  {"chi_max_mhz", 54.0},
                  {"kappa_mhz", 3.2},
                  {"gamma_mhz", 0.6},
                  {"gamma_phi_mhz", 0.0},
                  {"variants", {"photon", "qubit"}},
                  {"samples", 51}}};
    r["fig3"] = {{"effective", "full"},
                 2,
                 {{"M", 6},
                  {"q", 3},
                  {"g2", 1.0},
                  {"g1_over_g2", 0.02},
                  {"delta1_over_g2", 100.0},
                  {"delta2_over_delta1", 1.002},
                  {"solve", "delta2"},
                  {"amplitudes", {0.1, 0.2, 0.3, 0.4, 0.5}},
                  {"tau_span", 2.0},
                  {"samples", 401},
                  {"margin_threshold", 10.0}}};
    r["dicke-seq"] = {{"effective", "full"},
                      2,
                      {{"M0", 3}, {"q_target", 2}, {"g1", 1.0}, {"g2", 1.0}, {"delta1", 100.0}}};
    r["noon"] = {{"effective", "full", "lindblad"},
                 2,
                 {{"N", 3},
                  {"source", "solve"},
                  {"g2", 1.0},
                  {"g1_over_g2", 150.0},
                  {"delta1_over_g1", 20.0},
                  {"margin_threshold", 10.0},
                  {"kappa", 0.0},
                  {"gamma", 0.0}}};
    r["selectivity"] = {{"effective"},
                        1,
                        {{"source", "table1"},
                         {"N", 3},
                         {"M", 3},
                         {"g1", 70.621},
                         {"g2", 1.0},
                         {"delta1", 1412.42},
                         {"delta2", 1416.0},
                         {"k", 2},
                         {"q", 1},
                         {"branch", "-"},
                         {"free", "delta2"},
                         {"margin_threshold", 10.0},
                         {"populated_totals", json::array()}}};
    return r;
  }();
  return reg;
}

const CommandInfo& info(const std::string& command) {
  const auto it = registry().find(command);
  if (it == registry().end()) throw ConfigError("unknown command '" + command + "'");
  return it->second;
}

std::string type_name(const json& v) {
  if (v.is_number_integer()) return "integer";
  if (v.is_number()) return "number";
  return v.type_name();
}

bool compatible(const json& def, const json& v) {
  if (def.is_number_integer()) return v.is_number_integer();
  if (def.is_number()) return v.is_number();
  if (def.is_string()) return v.is_string();
  if (def.is_boolean()) return v.is_boolean();
  if (def.is_array()) {
    if (!v.is_array()) return false;
    if (def.empty()) return true;
    for (const auto& e : v) {
      if (!compatible(def.front(), e)) return false;
    }
    return true;
  }
  if (def.is_null()) return v.is_null() || v.is_number();
  return false;
}

void merge_strict(json& base, const json& user, const std::string& path) {
  if (!user.is_object()) throw ConfigError(path + " must be a JSON object");
  for (const auto& [key, value] : user.items()) {
    const std::string where = path.empty() ? key : path + "." + key;
    if (!base.contains(key)) throw ConfigError("unknown config key '" + where + "'");
    json& slot = base[key];
    if (slot.is_object()) {
      merge_strict(slot, value, where);
    } else if (!compatible(slot, value)) {
      throw ConfigError("config key '" + where + "' expects " + type_name(slot) + ", got " + type_name(value));
    } else {
      // Keep floating defaults floating so the resolved config keeps its types.
      slot = (slot.is_number_float() && value.is_number()) ? json(value.get<double>()) : value;
    }
  }
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"two-qubit", "w-state", "fig1", "fig3", "dicke-seq", "noon",
                                                 "selectivity"};
  return names;
}

json default_config(const std::string& command) {
  const auto& ci = info(command);
  return json{{"experiment", command},
              {"engine", ci.engines.front()},
              {"cutoff", ci.cutoff},
              {"seed", 0},
              {"tolerance", 1e-10},
              {"workers", 0},
              {"output", "out"},
              {"params", ci.params}};
}

RunConfig resolve_config(const std::string& command, const json& document, const Overrides& ov) {
  const auto& ci = info(command);
  json merged = default_config(command);
  if (!document.is_null()) {
    if (document.contains("experiment") && document["experiment"] != command) {
      throw ConfigError("config is for experiment '" + document["experiment"].dump() + "', not '" + command + "'");
    }
    merge_strict(merged, document, "");
  }
  if (ov.output) merged["output"] = *ov.output;
  if (ov.engine) merged["engine"] = *ov.engine;
  if (ov.seed) merged["seed"] = *ov.seed;
  if (ov.cutoff) merged["cutoff"] = *ov.cutoff;

  RunConfig cfg;
  cfg.command = command;
  cfg.engine = merged["engine"].get<std::string>();
  bool known = false;
  for (const auto& e : ci.engines) known = known || e == cfg.engine;
  if (!known) {
    std::string list;
    for (const auto& e : ci.engines) list += (list.empty() ? "" : ", ") + e;
    throw ConfigError("command '" + command + "' supports engines {" + list + "}, got '" + cfg.engine + "'");
  }
  if (merged["seed"].is_number_integer() && merged["seed"].get<long long>() < 0 && !merged["seed"].is_number_unsigned()) {
    throw ConfigError("seed must be a non-negative integer");
  }
  cfg.seed = merged["seed"].get<std::uint64_t>();
  cfg.cutoff = merged["cutoff"].get<int>();
  cfg.tolerance = merged["tolerance"].get<double>();
  cfg.workers = merged["workers"].get<int>();
  cfg.output = merged["output"].get<std::string>();
  cfg.params = merged["params"];
  if (cfg.cutoff < 1) throw ConfigError("cutoff must be >= 1");
  if (!(cfg.tolerance > 0.0) || cfg.tolerance > 1e-3) throw ConfigError("tolerance must lie in (0, 1e-3]");
  if (cfg.workers < 0) throw ConfigError("workers must be >= 0");
  if (cfg.output.empty()) throw ConfigError("output directory must not be empty");
  return cfg;
}

json RunConfig::to_json() const {
  return json{{"experiment", command}, {"engine", engine},   {"cutoff", cutoff}, {"seed", seed},
              {"tolerance", tolerance}, {"workers", workers}, {"output", output}, {"params", params}};
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
}

}  // namespace qbus::cli
