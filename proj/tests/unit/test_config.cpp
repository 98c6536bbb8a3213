#include <doctest.h>

#include "tempdir.hpp"

#include "crisisflow/config.hpp"

using namespace crisisflow;
using testing::TempDir;

TEST_CASE("empty path or empty file gives the defaults") {
  TempDir dir;
  for (const auto& path : {std::string(), dir.write("empty.json", ""), dir.write("blank.json", "  \n\t\n")}) {
    const auto cfg = load_config(path);
    CHECK(cfg.segment.crisis_floor == 0.00025);
    CHECK(cfg.segment.window_w == 3);
    CHECK(cfg.segment.recent_peak_year == 2015);
    CHECK(cfg.segment.growth_fraction == 0.8);
    CHECK(cfg.filter.min_years == 10);
    CHECK(cfg.filter.min_prop == 0.01);
    CHECK(cfg.filter.min_count == 1000);
    CHECK(cfg.projection.delta_max == 15);
    CHECK(cfg.projection.floor_value == 0.001);
    CHECK(cfg.validation.horizons == std::vector<int>{1, 5, 10});
    CHECK(cfg.hash() == PipelineConfig{}.hash());
  }
}

TEST_CASE("file values overlay the defaults") {
  TempDir dir;
  const auto cfg = load_config(dir.write("c.json", R"({"delta_max": 12, "seed": 7, "horizons": [2, 4],
                                                       "excluded_codes": ["XXX"]})"));
  CHECK(cfg.projection.delta_max == 12);
  CHECK(cfg.sampler.seed == 7);
  CHECK(cfg.projection.seed == 7);
  CHECK(cfg.seed() == 7);
  CHECK(cfg.validation.horizons == std::vector<int>{2, 4});
  CHECK(cfg.excluded_codes == std::set<std::string>{"XXX"});
  CHECK(cfg.hash() != PipelineConfig{}.hash());
}

TEST_CASE("later overlays take precedence") {
  PipelineConfig cfg;
  apply_config(cfg, nlohmann::json{{"delta_max", 15}});
  apply_config(cfg, nlohmann::json{{"delta_max", 10}});
  CHECK(cfg.projection.delta_max == 10);
}

TEST_CASE("unknown keys and type mismatches name the key") {
  TempDir dir;
  CHECK_THROWS_WITH_AS(load_config(dir.write("a.json", R"({"delta_maxx": 3})")), doctest::Contains("delta_maxx"),
                       ConfigError);
  CHECK_THROWS_WITH_AS(load_config(dir.write("b.json", R"({"window_w": "three"})")), doctest::Contains("window_w"),
                       ConfigError);
  CHECK_THROWS_WITH_AS(load_config(dir.write("c.json", R"({"window_w": 2.5})")), doctest::Contains("window_w"),
                       ConfigError);
  CHECK_THROWS_WITH_AS(load_config(dir.write("d.json", R"({"horizons": 5})")), doctest::Contains("horizons"),
                       ConfigError);
  CHECK_THROWS_AS(load_config(dir.write("e.json", "{not json")), ConfigError);
  CHECK_THROWS_AS(load_config(dir.write("f.json", "[1, 2]")), ConfigError);
  CHECK_THROWS_AS(load_config(dir.file("missing.json")), ConfigError);
}

TEST_CASE("out-of-range values fail validation") {
  TempDir dir;
  for (const char* text : {R"({"crisis_floor": 1.5})", R"({"thin": 0})", R"({"horizons": [0]})",
                           R"({"coverage_levels": [0.5]})", R"({"min_years": 0})"}) {
    CAPTURE(text);
    CHECK_THROWS_AS(load_config(dir.write("x.json", text)), ConfigError);
  }
}

TEST_CASE("to_json round-trips through apply_config") {
  PipelineConfig a;
  a.segment.window_w = 4;
  a.sampler.chains = 3;
  a.validation.coverage_levels = {0.8, 0.95};
  PipelineConfig b;
  apply_config(b, a.to_json());
  CHECK(b.to_json() == a.to_json());
  CHECK(b.hash() == a.hash());
}
