// Copyright 2026 The cssw Authors
// SPDX-License-Identifier: Apache-2.0

#include "cssw/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace cssw {
namespace {

using nlohmann::json;

RunConfig base_gbm() {
  RunConfig c;
  c.kind = PriceKind::gbm;
  c.grid = {"equidistant", 0.0, 20.0, 4001, 1000, 0.4};
  c.sample_size = 20000;
  c.num_paths = 1000;
  c.num_subsims = 1000;
  c.z0 = {0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  return c;
}

RunConfig base_ar1() {
  RunConfig c;
  c.kind = PriceKind::ar1;
  c.grid = {"equidistant", -5.0, 5.0, 2000, 1000, 0.4};
  c.sample_size = 10000;
  c.num_paths = 500;
  c.num_subsims = 500;
  c.z0 = {0.3, 0.4, 0.5};
  return c;
}

void collect_unknown(const json& obj, const std::string& prefix,
                     std::initializer_list<const char*> allowed,
                     std::vector<std::string>* bad) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* name : allowed)
      if (it.key() == name) ok = true;
    if (!ok) bad->push_back(prefix + it.key());
  }
}

template <typename T>
void read(const json& obj, const char* key, T* out) {
  if (obj.contains(key)) obj.at(key).get_to(*out);
}

void read_kind(const json& obj, const char* key, PriceKind* out) {
  if (!obj.contains(key)) return;
  const std::string s = obj.at(key).get<std::string>();
  if (s == "gbm")
    *out = PriceKind::gbm;
  else if (s == "ar1")
    *out = PriceKind::ar1;
  else if (s == "garch")
    *out = PriceKind::garch;
  else
    throw std::invalid_argument("config: unknown model kind '" + s + "'");
}

Mode parse_mode(const std::string& s) {
  if (s == "opened") return Mode::opened;
  if (s == "closed") return Mode::closed;
  throw std::invalid_argument("config: unknown mode '" + s + "'");
}

std::vector<double> parse_levels(const json& node) {
  if (node.is_array()) return node.get<std::vector<double>>();
  return {node.get<double>()};
}

RunConfig parse_document(const json& doc) {
  RunConfig cfg;
  if (doc.contains("preset"))
    cfg = preset_config(doc.at("preset").get<std::string>());

  std::vector<std::string> bad;
  collect_unknown(doc, "",
                  {"preset", "seed", "model", "economics", "grid", "sampling",
                   "solver", "diagnostics", "output"},
                  &bad);
  read(doc, "seed", &cfg.seed);

  if (doc.contains("model")) {
    const json& m = doc.at("model");
    collect_unknown(m, "model.",
                    {"kind", "mu", "sigma2", "phi", "kappa", "beta1", "beta2",
                     "sigma0_sq", "y0_sq", "z0", "modes"},
                    &bad);
    read_kind(m, "kind", &cfg.kind);
    read(m, "mu", &cfg.mu);
    read(m, "sigma2", &cfg.sigma2);
    read(m, "phi", &cfg.phi);
    read(m, "kappa", &cfg.kappa);
    read(m, "beta1", &cfg.beta1);
    read(m, "beta2", &cfg.beta2);
    read(m, "sigma0_sq", &cfg.sigma0_sq);
    read(m, "y0_sq", &cfg.y0_sq);
    if (m.contains("z0")) cfg.z0 = parse_levels(m.at("z0"));
    if (m.contains("modes")) {
      cfg.modes.clear();
      const json& node = m.at("modes");
      if (node.is_array())
        for (const json& entry : node)
          cfg.modes.push_back(parse_mode(entry.get<std::string>()));
      else
        cfg.modes.push_back(parse_mode(node.get<std::string>()));
    }
  }

  if (doc.contains("economics")) {
    const json& e = doc.at("economics");
    collect_unknown(e, "economics.",
                    {"dt", "years", "rate", "inflation", "tax", "maintenance0",
                     "switching0", "revenue_slope", "revenue_intercept",
                     "max_reserve", "wastage", "penalty_scale",
                     "contract_reserve", "delivery_schedule"},
                    &bad);
    read(e, "dt", &cfg.econ.dt);
    read(e, "years", &cfg.econ.years);
    read(e, "rate", &cfg.econ.rate);
    read(e, "inflation", &cfg.econ.inflation);
    read(e, "tax", &cfg.econ.tax);
    read(e, "maintenance0", &cfg.econ.maintenance0);
    read(e, "switching0", &cfg.econ.switching0);
    read(e, "revenue_slope", &cfg.econ.revenue_slope);
    read(e, "revenue_intercept", &cfg.econ.revenue_intercept);
    read(e, "max_reserve", &cfg.econ.max_reserve);
    read(e, "wastage", &cfg.econ.wastage);
    read(e, "penalty_scale", &cfg.econ.penalty_scale);
    read(e, "contract_reserve", &cfg.econ.contract_reserve);
    if (e.contains("delivery_schedule")) {
      cfg.econ.delivery_schedule.clear();
      for (auto it = e.at("delivery_schedule").begin();
           it != e.at("delivery_schedule").end(); ++it)
        cfg.econ.delivery_schedule[std::stoi(it.key())] = it.value().get<int>();
    }
  }

  if (doc.contains("grid")) {
    const json& g = doc.at("grid");
    collect_unknown(
        g, "grid.", {"kind", "lo", "hi", "size", "cloud_paths", "cloud_start"},
        &bad);
    read(g, "kind", &cfg.grid.kind);
    if (cfg.grid.kind != "equidistant" && cfg.grid.kind != "stochastic")
      throw std::invalid_argument("config: unknown grid kind '" +
                                  cfg.grid.kind + "'");
    read(g, "lo", &cfg.grid.lo);
    read(g, "hi", &cfg.grid.hi);
    read(g, "size", &cfg.grid.size);
    read(g, "cloud_paths", &cfg.grid.cloud_paths);
    read(g, "cloud_start", &cfg.grid.cloud_start);
  }

  if (doc.contains("sampling")) {
    const json& s = doc.at("sampling");
    collect_unknown(s, "sampling.", {"size"}, &bad);
    read(s, "size", &cfg.sample_size);
  }

  if (doc.contains("solver")) {
    const json& s = doc.at("solver");
    collect_unknown(s, "solver.", {"fast", "neighbors"}, &bad);
    read(s, "fast", &cfg.fast);
    read(s, "neighbors", &cfg.neighbors);
  }

  if (doc.contains("diagnostics")) {
    const json& d = doc.at("diagnostics");
    collect_unknown(d, "diagnostics.", {"paths", "subsims", "policy_epoch"},
                    &bad);
    read(d, "paths", &cfg.num_paths);
    read(d, "subsims", &cfg.num_subsims);
    read(d, "policy_epoch", &cfg.policy_epoch);
  }

  if (doc.contains("output")) {
    const json& o = doc.at("output");
    collect_unknown(o, "output.", {"dir"}, &bad);
    read(o, "dir", &cfg.out_dir);
  }

  if (!bad.empty()) {
    std::string msg = "config: unknown keys:";
    for (const std::string& k : bad) msg += " " + k;
    throw std::invalid_argument(msg);
  }
  return cfg;
}

}  // namespace

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {
      "gbm-bs", "gbm-desk", "ar1", "wastage", "delivery", "garch"};
  return names;
}

RunConfig preset_config(const std::string& name) {
  RunConfig c;
  if (name == "gbm-bs") {
    c = base_gbm();
  } else if (name == "gbm-desk") {
    c = base_gbm();
    c.grid.hi = 10.0;
    c.grid.size = 1001;
    c.sample_size = 500;
    c.num_paths = 200;
    c.num_subsims = 200;
  } else if (name == "ar1") {
    c = base_ar1();
  } else if (name == "wastage") {
    c = base_ar1();
    c.econ.wastage = 0.5;
  } else if (name == "delivery") {
    c = base_ar1();
    c.econ.penalty_scale = 1.0;
  } else if (name == "garch") {
    c = base_ar1();
    c.kind = PriceKind::garch;
    c.grid = {"stochastic", 0.0, 0.0, 2000, 1000, 0.4};
  } else {
    throw std::invalid_argument("config: unknown preset '" + name + "'");
  }
  c.preset = name;
  return c;
}

RunConfig parse_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
    if (doc.contains("config")) doc = doc.at("config");
    if (!doc.is_object())
      throw std::invalid_argument("config: document must be a JSON object");
    return parse_document(doc);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string config_json(const RunConfig& c) {
  json m{{"kind", kind_name(c.kind)}, {"mu", c.mu},
         {"sigma2", c.sigma2},        {"phi", c.phi},
         {"kappa", c.kappa},          {"beta1", c.beta1},
         {"beta2", c.beta2},          {"sigma0_sq", c.sigma0_sq},
         {"y0_sq", c.y0_sq},          {"z0", c.z0}};
  json modes = json::array();
  for (const Mode mode : c.modes) modes.push_back(mode_name(mode));
  m["modes"] = modes;

  json e{{"dt", c.econ.dt},
         {"years", c.econ.years},
         {"rate", c.econ.rate},
         {"inflation", c.econ.inflation},
         {"tax", c.econ.tax},
         {"maintenance0", c.econ.maintenance0},
         {"switching0", c.econ.switching0},
         {"revenue_slope", c.econ.revenue_slope},
         {"revenue_intercept", c.econ.revenue_intercept},
         {"max_reserve", c.econ.max_reserve},
         {"wastage", c.econ.wastage},
         {"penalty_scale", c.econ.penalty_scale},
         {"contract_reserve", c.econ.contract_reserve}};
  if (!c.econ.delivery_schedule.empty()) {
    json sched = json::object();
    for (const auto& [t, target] : c.econ.delivery_schedule)
      sched[std::to_string(t)] = target;
    e["delivery_schedule"] = sched;
  }

  json doc{{"model", m},
           {"economics", e},
           {"grid",
            {{"kind", c.grid.kind},
             {"lo", c.grid.lo},
             {"hi", c.grid.hi},
             {"size", c.grid.size},
             {"cloud_paths", c.grid.cloud_paths},
             {"cloud_start", c.grid.cloud_start}}},
           {"sampling", {{"size", c.sample_size}}},
           {"solver", {{"fast", c.fast}, {"neighbors", c.neighbors}}},
           {"diagnostics",
            {{"paths", c.num_paths},
             {"subsims", c.num_subsims},
             {"policy_epoch", c.policy_epoch}}},
           {"output", {{"dir", c.out_dir}}},
           {"seed", c.seed}};
  if (!c.preset.empty()) doc["preset"] = c.preset;
  return doc.dump(2);
}

std::uint64_t config_hash(const RunConfig& config) {
  const std::string text = config_json(config);
  std::uint64_t h = 1469598103934665603ull;
  for (const char ch : text) {
    h ^= static_cast<unsigned char>(ch);
    h *= 1099511628211ull;
  }
  return h;
}

const char* kind_name(PriceKind kind) {
  switch (kind) {
    case PriceKind::gbm:
      return "gbm";
    case PriceKind::ar1:
      return "ar1";
    case PriceKind::garch:
      return "garch";
  }
  return "?";
}

const char* mode_name(Mode mode) {
  return mode == Mode::opened ? "opened" : "closed";
}

const char* action_name(Action action) {
  switch (action) {
    case Action::abandon:
      return "abandon";
    case Action::close:
      return "close";
    case Action::open:
      return "open";
  }
  return "?";
}

std::vector<double> initial_state(const RunConfig& config, double z0) {
  switch (config.kind) {
    case PriceKind::gbm:
      return {1.0, z0};
    case PriceKind::ar1:
      return {1.0, std::log(z0)};
    case PriceKind::garch:
      return {1.0, config.sigma0_sq, config.y0_sq, std::log(z0)};
  }
  throw std::logic_error("initial_state: bad kind");
}

}  // namespace cssw
