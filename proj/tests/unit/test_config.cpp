#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "bregman/harness/config.hpp"

using namespace bregman;
using namespace bregman::harness;
using nlohmann::json;

TEST(FunctionChoice, ParsesCatalogMembers) {
  const auto energy = parse_function(json{{"kind", "energy"}, {"dimension", 3}});
  EXPECT_EQ(energy.make().dimension(), 3u);
  EXPECT_EQ(energy.label(), "energy");
  const auto pp = parse_function(json{{"kind", "ppower"}, {"p", 1.5}});
  EXPECT_EQ(pp.make(2).kind(), LegendreKind::PPower);
  EXPECT_EQ(pp.label(), "ppower(1.5)");
  EXPECT_THROW(pp.make(), ConfigError);
}

TEST(FunctionChoice, RejectsMalformedSpecs) {
  EXPECT_THROW(parse_function(json{{"kind", "logdet"}}), ConfigError);
  EXPECT_THROW(parse_function(json{{"kind", "ppower"}}), ConfigError);
  EXPECT_THROW(parse_function(json{{"kind", "ppower"}, {"p", 1.0}}), ConfigError);
  EXPECT_THROW(parse_function(json{{"kind", "energy"}, {"dimension", 0}}), ConfigError);
  EXPECT_THROW(parse_function(json{{"kind", "energy"}, {"dimension", 1.5}}), ConfigError);
  EXPECT_THROW(parse_function(json::array()), ConfigError);
}

TEST(FunctionChoice, JsonRoundTrip) {
  FunctionChoice choice;
  choice.kind = "ppower";
  choice.p = 4;
  choice.dimension = 5;
  const auto back = parse_function(to_json(choice));
  EXPECT_EQ(back.kind, "ppower");
  EXPECT_EQ(back.p, 4);
  EXPECT_EQ(back.dimension, 5u);
}

TEST(Config, DefaultsMatchStatedTolerances) {
  const HarnessConfig config = parse_config(json::object());
  EXPECT_FALSE(config.function.has_value());
  EXPECT_EQ(config.tolerances.tie, 1e-9);
  EXPECT_EQ(config.tolerances.identity, 1e-9);
  EXPECT_EQ(config.tolerances.finite_difference, 1e-5);
  EXPECT_EQ(config.tolerances.dini, 1e-4);
  EXPECT_EQ(config.tolerances.tie_gap, 1e-10);
  EXPECT_EQ(config.sizes.characterization_queries, 500u);
  EXPECT_EQ(config.sizes.klee_grid, 101u);
  EXPECT_EQ(config.sizes.theta_trials, 10000u);
}

TEST(Config, ParsesAllSections) {
  const json root = json::parse(R"({
    "function": {"kind": "shannon", "dimension": 2},
    "seed": 42,
    "tolerances": {"tie": 1e-6, "dini": 1e-3},
    "sizes": {"characterization_queries": 10, "set_dimensions": [2, 3]}
  })");
  const HarnessConfig config = parse_config(root);
  EXPECT_EQ(config.function->kind, "shannon");
  EXPECT_EQ(config.seed, 42u);
  EXPECT_EQ(config.tolerances.tie, 1e-6);
  EXPECT_EQ(config.tolerances.dini, 1e-3);
  EXPECT_EQ(config.tolerances.identity, 1e-9);
  EXPECT_EQ(config.sizes.characterization_queries, 10u);
  EXPECT_EQ(config.sizes.set_dimensions, (std::vector<std::size_t>{2, 3}));
}

TEST(Config, RejectsBadValues) {
  EXPECT_THROW(parse_config(json::parse(R"({"seed": -1})")), ConfigError);
  EXPECT_THROW(parse_config(json::parse(R"({"tolerances": {"tie": "x"}})")), ConfigError);
  EXPECT_THROW(parse_config(json::parse(R"({"sizes": {"bogus": 1}})")), ConfigError);
  EXPECT_THROW(parse_config(json::parse("[1]")), ConfigError);
}

TEST(Config, LoadFromFile) {
  const auto path = std::filesystem::temp_directory_path() / "bregman_config.json";
  std::ofstream(path) << R"({"seed": 7})";
  EXPECT_EQ(load_config(path).seed, 7u);
  std::ofstream(path) << "{not json";
  EXPECT_THROW(load_config(path), ConfigError);
  EXPECT_THROW(load_config("/nonexistent/config.json"), ConfigError);
}

TEST(SizeOverrides, KeyValueList) {
  VerifySizes sizes;
  apply_size_overrides(sizes, "klee_sets=3,round_trip_dimensions=1:4");
  EXPECT_EQ(sizes.klee_sets, 3u);
  EXPECT_EQ(sizes.round_trip_dimensions, (std::vector<std::size_t>{1, 4}));
  EXPECT_THROW(apply_size_overrides(sizes, "klee_sets"), ConfigError);
  EXPECT_THROW(apply_size_overrides(sizes, "klee_sets=-2"), ConfigError);
  EXPECT_THROW(apply_size_overrides(sizes, "max_set_size=1"), ConfigError);
  EXPECT_THROW(apply_size_overrides(sizes, "set_dimensions=0"), ConfigError);
}
