#include "cda/config/config.hpp"

#include <doctest.h>

using namespace cda;
using namespace cda::config;

#ifndef CDA_SOURCE_DIR
#define CDA_SOURCE_DIR "."
#endif

TEST_CASE("defaults") {
  const auto c = load_config(std::nullopt);
  CHECK(c.market == "M1");
  CHECK(c.n_days == 20);
  CHECK(c.polls_per_second == 8);
  const auto s = c.session_config();
  CHECK(s.per_side() > 0);
}

TEST_CASE("roster strings and lists") {
  const auto a = parse_roster(YAML::Load("GDX:8,ZIC:8"));
  REQUIRE(a.size() == 2);
  CHECK(a[0].ticker == "GDX");
  CHECK(a[0].count == 8);
  const auto b = parse_roster(YAML::Load("[{ticker: AA, count: 3}, 'ZIP:2']"));
  REQUIRE(b.size() == 2);
  CHECK(b[0].ticker == "AA");
  CHECK(b[1].count == 2);
  CHECK_THROWS_AS(parse_roster(YAML::Load("GDX")), ConfigError);
  CHECK_THROWS_AS(parse_roster(YAML::Load("FOO:3")), ConfigError);
}

TEST_CASE("overrides reach the resolved document") {
  const std::string text = "seed: 1\nenvironment: {market: M1, n_days: 2}\nroster: {buyers: 'ZIC:4', sellers: 'ZIC:4'}\n";
  const auto c = load_config_text(text, {"roster.buyers=GDX:2,ZIC:2", "seed=9", "environment.market=M4"});
  CHECK(c.seed == 9);
  CHECK(c.market == "M4");
  REQUIRE(c.buyers.size() == 2);
  CHECK(c.buyers[0].ticker == "GDX");
  CHECK(c.resolved["roster"]["buyers"].as<std::string>() == "GDX:2,ZIC:2");
  CHECK(c.overrides.size() == 3);
  CHECK_THROWS_AS(load_config_text(text, {"novalue"}), ConfigError);
  CHECK_THROWS_AS(load_config_text(text, {"seed.x=1"}), ConfigError);
}

TEST_CASE("unbound M5 is a config error") {
  const auto c = load_config_text("environment: {market: M5}\n");
  try {
    (void)c.session_config();
    FAIL("expected an error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("M5 undefined; bind explicitly") != std::string::npos);
  }
  const auto bound = load_config_text(
      "environment:\n  market: M5\n  schedules:\n    M5:\n      demand: {first: 50, last: 20}\n"
      "      supply: {first: 20, last: 50}\n");
  CHECK_NOTHROW((void)bound.session_config());
}

TEST_CASE("the shipped schedules file matches the built-in catalog") {
  const auto file = load_schedules(std::string(CDA_SOURCE_DIR) + "/data/schedules.yaml");
  const auto builtin = market::ScheduleCatalog::builtin();
  for (const char* m : {"M1", "M2", "M3", "M4"})
    for (int n : {1, 5, 8, 16}) {
      const auto a = file.resolve(m, n);
      const auto b = builtin.resolve(m, n);
      CHECK(a.buyer_limits == b.buyer_limits);
      CHECK(a.seller_limits == b.seller_limits);
    }
  CHECK_FALSE(file.contains("M5"));
}

TEST_CASE("sweep section") {
  const auto c = load_config_text(
      "seed: 3\nenvironment: {market: M6}\nsweep: {strategies: [AA, GDX], per_side: 4, trials: 2, workers: 2}\n");
  const auto s = c.sweep_spec();
  CHECK(s.strategies == std::vector<std::string>{"AA", "GDX"});
  CHECK(s.markets == std::vector<std::string>{"M6"});
  CHECK(s.per_side == 4);
  CHECK(s.base_seed == 3);
  CHECK_THROWS_AS((void)load_config_text("sweep: {strategies: [AA, BOGUS]}\n").sweep_spec(), ConfigError);
}

TEST_CASE("shipped configs load") {
  for (const char* f : {"session_m1", "scaled_dominance", "scaled_static", "latency", "full_static_zip",
                        "full_complex_zic"}) {
    const auto c = load_config(std::string(CDA_SOURCE_DIR) + "/configs/" + f + ".yaml");
    CHECK_NOTHROW((void)c.session_config());
    CHECK_NOTHROW((void)c.sweep_spec());
  }
}
