// Copyright 2026 The cssw Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "cssw/config.hpp"
#include "cssw/run.hpp"

using namespace cssw;

TEST_SUITE("config") {

TEST_CASE("presets cover the published experiment settings") {
  const std::vector<std::string>& names = preset_names();
  REQUIRE(names.size() == 6);
  for (const std::string& name : names) {
    const RunConfig c = preset_config(name);
    CHECK(c.preset == name);
  }

  const RunConfig bs = preset_config("gbm-bs");
  CHECK(bs.kind == PriceKind::gbm);
  CHECK(bs.grid.hi == 20.0);
  CHECK(bs.grid.size == 4001);
  CHECK(bs.sample_size == 20000);
  CHECK(bs.num_paths == 1000);
  CHECK(bs.num_subsims == 1000);
  CHECK(bs.z0.size() == 8);
  CHECK(bs.z0.back() == 1.0);
  CHECK(bs.econ.max_reserve == 60);

  const RunConfig desk = preset_config("gbm-desk");
  CHECK(desk.grid.hi == 10.0);
  CHECK(desk.grid.size == 1001);
  CHECK(desk.sample_size == 500);
  CHECK(desk.num_paths == 200);

  const RunConfig ar1 = preset_config("ar1");
  CHECK(ar1.kind == PriceKind::ar1);
  CHECK(ar1.grid.lo == -5.0);
  CHECK(ar1.grid.hi == 5.0);
  CHECK(ar1.grid.size == 2000);
  CHECK(ar1.sample_size == 10000);
  CHECK(ar1.z0 == std::vector<double>{0.3, 0.4, 0.5});

  CHECK(preset_config("wastage").econ.wastage == 0.5);
  CHECK(preset_config("delivery").econ.penalty_scale == 1.0);

  const RunConfig garch = preset_config("garch");
  CHECK(garch.kind == PriceKind::garch);
  CHECK(garch.grid.kind == "stochastic");
  CHECK(garch.grid.size == 2000);

  CHECK_THROWS_AS(preset_config("nope"), std::invalid_argument);
}

TEST_CASE("documents overlay presets field by field") {
  const RunConfig c = parse_config(R"({
    "preset": "ar1",
    "seed": 17,
    "model": {"phi": 0.6, "z0": [0.4]},
    "economics": {"wastage": 0.25},
    "solver": {"fast": true, "neighbors": 3},
    "diagnostics": {"paths": 7, "subsims": 9, "policy_epoch": 2},
    "output": {"dir": "elsewhere"}
  })");
  CHECK(c.preset == "ar1");
  CHECK(c.kind == PriceKind::ar1);
  CHECK(c.seed == 17);
  CHECK(c.phi == 0.6);
  CHECK(c.z0 == std::vector<double>{0.4});
  CHECK(c.econ.wastage == 0.25);
  CHECK(c.sample_size == 10000);  // preset value survives the overlay
  CHECK(c.fast);
  CHECK(c.neighbors == 3);
  CHECK(c.num_paths == 7);
  CHECK(c.num_subsims == 9);
  CHECK(c.policy_epoch == 2);
  CHECK(c.out_dir == "elsewhere");
}

TEST_CASE("scalar shorthands expand to one-element lists") {
  const RunConfig c = parse_config(
      R"({"model": {"z0": 0.7, "modes": "opened"}})");
  CHECK(c.z0 == std::vector<double>{0.7});
  REQUIRE(c.modes.size() == 1);
  CHECK(c.modes[0] == Mode::opened);
}

TEST_CASE("delivery schedules parse epoch keys") {
  const RunConfig c = parse_config(
      R"({"economics": {"delivery_schedule": {"3": 50, "11": 20}}})");
  REQUIRE(c.econ.delivery_schedule.size() == 2);
  CHECK(c.econ.delivery_schedule.at(3) == 50);
  CHECK(c.econ.delivery_schedule.at(11) == 20);
}

TEST_CASE("unknown keys are rejected with their full paths") {
  try {
    parse_config(R"({"model": {"nu": 1}, "grid": {"hit": 3}, "extra": {}})");
    FAIL("expected an exception");
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    CHECK(msg.find("model.nu") != std::string::npos);
    CHECK(msg.find("grid.hit") != std::string::npos);
    CHECK(msg.find("extra") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_config(R"({"model": {"kind": "heston"}})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(parse_config(R"({"grid": {"kind": "random"}})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(parse_config(R"({"model": {"modes": ["ajar"]}})"),
                  std::invalid_argument);
}

TEST_CASE("malformed documents raise invalid_argument") {
  CHECK_THROWS_AS(parse_config("{"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config("[1, 2]"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config(R"({"seed": "abc"})"), std::invalid_argument);
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"),
                  std::invalid_argument);
}

TEST_CASE("serialization round-trips through the manifest form") {
  RunConfig c = preset_config("garch");
  c.seed = 99;
  c.phi = 0.6;
  c.z0 = {0.4};
  c.econ.delivery_schedule = {{4, 44}};
  const std::string body = config_json(c);
  // A manifest embeds the config under a "config" key.
  const RunConfig back = parse_config("{\"config\": " + body + "}");
  CHECK(config_json(back) == body);
  CHECK(config_hash(back) == config_hash(c));
  CHECK(back.kind == PriceKind::garch);
  CHECK(back.seed == 99);
  CHECK(back.econ.delivery_schedule.at(4) == 44);
}

TEST_CASE("config hashes respond to any field change") {
  const RunConfig base = preset_config("gbm-desk");
  RunConfig tweaked = base;
  CHECK(config_hash(tweaked) == config_hash(base));
  tweaked.seed = 1;
  CHECK(config_hash(tweaked) != config_hash(base));
  tweaked = base;
  tweaked.econ.wastage = 0.01;
  CHECK(config_hash(tweaked) != config_hash(base));
  tweaked = base;
  tweaked.z0.push_back(1.1);
  CHECK(config_hash(tweaked) != config_hash(base));
}

TEST_CASE("initial states embed the price per model kind") {
  RunConfig c = preset_config("gbm-bs");
  CHECK(initial_state(c, 0.7) == std::vector<double>{1.0, 0.7});
  c = preset_config("ar1");
  const std::vector<double> a = initial_state(c, 0.4);
  REQUIRE(a.size() == 2);
  CHECK(a[1] == std::log(0.4));
  c = preset_config("garch");
  const std::vector<double> g = initial_state(c, 0.4);
  REQUIRE(g.size() == 4);
  CHECK(g[1] == c.sigma0_sq);
  CHECK(g[2] == c.y0_sq);
  CHECK(g[3] == std::log(0.4));
}

TEST_CASE("names map enum values to their wire form") {
  CHECK(std::string(kind_name(PriceKind::gbm)) == "gbm");
  CHECK(std::string(kind_name(PriceKind::ar1)) == "ar1");
  CHECK(std::string(kind_name(PriceKind::garch)) == "garch");
  CHECK(std::string(mode_name(Mode::opened)) == "opened");
  CHECK(std::string(mode_name(Mode::closed)) == "closed");
  CHECK(std::string(action_name(Action::abandon)) == "abandon");
  CHECK(std::string(action_name(Action::close)) == "close");
  CHECK(std::string(action_name(Action::open)) == "open");
}

TEST_CASE("experiments assemble consistent components") {
  RunConfig c = preset_config("gbm-desk");
  c.grid.size = 101;  // keep the fixture light
  c.sample_size = 50;
  const Experiment ex = make_experiment(c);
  CHECK(ex.grid.size() == 101);
  CHECK(ex.grid.dim() == 2);
  CHECK(ex.sampling.size() == 50);
  CHECK(ex.law.dim == 2);
  const ValueDims dims = experiment_dims(ex);
  CHECK(dims.horizon == ex.model.num_epochs());
  CHECK(dims.positions == ex.model.num_positions());
  CHECK(dims.grid_size == 101);
  CHECK(dims.dim == 2);
}

TEST_CASE("experiment assembly rejects inconsistent settings") {
  RunConfig c = preset_config("gbm-desk");
  c.z0.clear();
  CHECK_THROWS_AS(make_experiment(c), std::invalid_argument);
  c = preset_config("gbm-desk");
  c.modes.clear();
  CHECK_THROWS_AS(make_experiment(c), std::invalid_argument);
  c = preset_config("gbm-desk");
  c.sample_size = 0;
  CHECK_THROWS_AS(make_experiment(c), std::invalid_argument);
  c = preset_config("gbm-desk");
  c.grid.size = 1;
  CHECK_THROWS_AS(make_experiment(c), std::invalid_argument);
  c = preset_config("ar1");
  c.z0 = {0.0};  // log price undefined
  CHECK_THROWS_AS(make_experiment(c), std::invalid_argument);
}

}  // TEST_SUITE
