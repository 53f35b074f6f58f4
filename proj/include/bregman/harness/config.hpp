#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "bregman/legendre.hpp"

namespace bregman::harness {

/// Environment variable naming the default config file.
inline constexpr const char* kConfigEnvVar = "BREGMAN_CONFIG";

/// Malformed config file or flag.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// {"kind": "energy" | "shannon" | "ppower", "p": number, "dimension": int}
struct FunctionChoice {
  std::string kind = "energy";
  double p = 2.0;
  std::optional<std::size_t> dimension;

  LegendreSpec make(std::size_t dim) const;
  LegendreSpec make() const;
  std::string label() const;
};

FunctionChoice parse_function(const nlohmann::json& node);
nlohmann::json to_json(const FunctionChoice& choice);

struct Tolerances {
  double tie = 1e-9;
  double identity = 1e-9;
  double round_trip = 1e-9;
  double finite_difference = 1e-5;
  double hessian = 1e-4;
  double dini = 1e-4;
  double tie_gap = 1e-10;
  double monotonicity = 1e-10;
  double convexity = 1e-10;
};

/// Instance counts for the verification suites.
struct VerifySizes {
  std::vector<std::size_t> round_trip_dimensions{1, 2, 5};
  std::vector<std::size_t> set_dimensions{1, 2, 5};
  std::size_t round_trip_points = 1000;
  std::size_t max_set_size = 50;
  std::size_t queries_per_set = 20;
  std::size_t characterization_queries = 500;
  std::size_t ray_instances = 200;
  std::size_t monotone_pairs = 1000;
  std::size_t identity_points = 1000;
  std::size_t dual_queries = 1000;
  std::size_t inverse_pairs = 1000;
  std::size_t convexity_pairs = 1000;
  std::size_t clarke_generic = 50;
  std::size_t clarke_ties = 20;
  std::size_t clarke_directions = 8;
  std::size_t gradient_points = 200;
  std::size_t gradient_ties = 20;
  std::size_t usc_ties = 20;
  std::size_t usc_perturbations = 20;
  std::size_t klee_sets = 50;
  std::size_t klee_singleton_sets = 5;
  std::size_t klee_grid = 101;
  std::size_t theta_trials = 10000;
};

/// Applies "key=value,key=value" overrides; list-valued keys take
/// colon-separated values (e.g. set_dimensions=2:3).
void apply_size_overrides(VerifySizes& sizes, std::string_view overrides);

struct HarnessConfig {
  std::optional<FunctionChoice> function;
  Tolerances tolerances;
  std::uint64_t seed = 1;
  VerifySizes sizes;
};

HarnessConfig parse_config(const nlohmann::json& root);
HarnessConfig load_config(const std::filesystem::path& path);

}  // namespace bregman::harness
