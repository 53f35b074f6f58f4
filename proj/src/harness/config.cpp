#include "bregman/harness/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace bregman::harness {

namespace {

std::size_t parse_count(std::string_view text, std::string_view key) {
  std::size_t value = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError("size '" + std::string(key) +
                      "' needs a non-negative integer, got '" +
                      std::string(text) + "'");
  }
  return value;
}

std::vector<std::size_t> parse_dimension_list(std::string_view text,
                                              std::string_view key) {
  std::vector<std::size_t> dims;
  while (!text.empty()) {
    const auto colon = text.find(':');
    const std::size_t dim = parse_count(text.substr(0, colon), key);
    if (dim == 0) throw ConfigError("dimensions must be positive");
    dims.push_back(dim);
    if (colon == std::string_view::npos) break;
    text.remove_prefix(colon + 1);
  }
  return dims;
}

void set_size(VerifySizes& sizes, std::string_view key,
              std::string_view value) {
  if (key == "round_trip_dimensions") {
    sizes.round_trip_dimensions = parse_dimension_list(value, key);
    return;
  }
  if (key == "set_dimensions") {
    sizes.set_dimensions = parse_dimension_list(value, key);
    return;
  }
  struct Field {
    std::string_view name;
    std::size_t VerifySizes::*member;
  };
  static constexpr Field kFields[] = {
      {"round_trip_points", &VerifySizes::round_trip_points},
      {"max_set_size", &VerifySizes::max_set_size},
      {"queries_per_set", &VerifySizes::queries_per_set},
      {"characterization_queries", &VerifySizes::characterization_queries},
      {"ray_instances", &VerifySizes::ray_instances},
      {"monotone_pairs", &VerifySizes::monotone_pairs},
      {"identity_points", &VerifySizes::identity_points},
      {"dual_queries", &VerifySizes::dual_queries},
      {"inverse_pairs", &VerifySizes::inverse_pairs},
      {"convexity_pairs", &VerifySizes::convexity_pairs},
      {"clarke_generic", &VerifySizes::clarke_generic},
      {"clarke_ties", &VerifySizes::clarke_ties},
      {"clarke_directions", &VerifySizes::clarke_directions},
      {"gradient_points", &VerifySizes::gradient_points},
      {"gradient_ties", &VerifySizes::gradient_ties},
      {"usc_ties", &VerifySizes::usc_ties},
      {"usc_perturbations", &VerifySizes::usc_perturbations},
      {"klee_sets", &VerifySizes::klee_sets},
      {"klee_singleton_sets", &VerifySizes::klee_singleton_sets},
      {"klee_grid", &VerifySizes::klee_grid},
      {"theta_trials", &VerifySizes::theta_trials},
  };
  for (const auto& field : kFields) {
    if (field.name == key) {
      sizes.*field.member = parse_count(value, key);
      if (key == "max_set_size" && sizes.max_set_size < 2) {
        throw ConfigError("max_set_size must be at least 2");
      }
      if (key == "queries_per_set" && sizes.queries_per_set == 0) {
        throw ConfigError("queries_per_set must be positive");
      }
      return;
    }
  }
  throw ConfigError("unknown size key '" + std::string(key) + "'");
}

double read_number(const nlohmann::json& node, const char* key) {
  if (!node.at(key).is_number()) {
    throw ConfigError(std::string("'") + key + "' must be a number");
  }
  return node.at(key).get<double>();
}

}  // namespace

LegendreSpec FunctionChoice::make(std::size_t dim) const {
  if (kind == "energy") return LegendreSpec::energy(dim);
  if (kind == "shannon") return LegendreSpec::shannon(dim);
  if (kind == "ppower") return LegendreSpec::ppower(p, dim);
  throw ConfigError("unknown function kind '" + kind +
                    "' (expected energy, shannon or ppower)");
}

LegendreSpec FunctionChoice::make() const {
  if (!dimension) throw ConfigError("function spec has no dimension");
  return make(*dimension);
}

std::string FunctionChoice::label() const {
  if (kind != "ppower") return kind;
  std::ostringstream out;
  out << "ppower(" << p << ")";
  return out.str();
}

FunctionChoice parse_function(const nlohmann::json& node) {
  if (!node.is_object()) throw ConfigError("function spec must be an object");
  FunctionChoice choice;
  if (!node.contains("kind") || !node.at("kind").is_string()) {
    throw ConfigError("function spec needs a string 'kind'");
  }
  choice.kind = node.at("kind").get<std::string>();
  if (choice.kind == "ppower") {
    if (!node.contains("p")) throw ConfigError("ppower needs 'p'");
    choice.p = read_number(node, "p");
    if (!(choice.p > 1.0)) throw ConfigError("ppower needs p > 1");
  } else if (choice.kind != "energy" && choice.kind != "shannon") {
    throw ConfigError("unknown function kind '" + choice.kind +
                      "' (expected energy, shannon or ppower)");
  }
  if (node.contains("dimension")) {
    const auto& dim = node.at("dimension");
    if (!dim.is_number_integer() || dim.get<long long>() <= 0) {
      throw ConfigError("'dimension' must be a positive integer");
    }
    choice.dimension = dim.get<std::size_t>();
  }
  return choice;
}

nlohmann::json to_json(const FunctionChoice& choice) {
  nlohmann::json node{{"kind", choice.kind}};
  if (choice.kind == "ppower") node["p"] = choice.p;
  if (choice.dimension) node["dimension"] = *choice.dimension;
  return node;
}

void apply_size_overrides(VerifySizes& sizes, std::string_view overrides) {
  while (!overrides.empty()) {
    const auto comma = overrides.find(',');
    const std::string_view item = overrides.substr(0, comma);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("size override '" + std::string(item) +
                        "' is not key=value");
    }
    set_size(sizes, item.substr(0, eq), item.substr(eq + 1));
    if (comma == std::string_view::npos) break;
    overrides.remove_prefix(comma + 1);
  }
}

HarnessConfig parse_config(const nlohmann::json& root) {
  if (!root.is_object()) throw ConfigError("config must be a JSON object");
  HarnessConfig config;
  try {
    if (root.contains("function")) {
      config.function = parse_function(root.at("function"));
    }
    if (root.contains("seed")) {
      if (!root.at("seed").is_number_unsigned()) {
        throw ConfigError("'seed' must be a non-negative integer");
      }
      config.seed = root.at("seed").get<std::uint64_t>();
    }
    if (root.contains("tolerances")) {
      const auto& tol = root.at("tolerances");
      auto read = [&](const char* key, double& target) {
        if (tol.contains(key)) target = read_number(tol, key);
      };
      read("tie", config.tolerances.tie);
      read("identity", config.tolerances.identity);
      read("round_trip", config.tolerances.round_trip);
      read("finite_difference", config.tolerances.finite_difference);
      read("hessian", config.tolerances.hessian);
      read("dini", config.tolerances.dini);
      read("tie_gap", config.tolerances.tie_gap);
      read("monotonicity", config.tolerances.monotonicity);
      read("convexity", config.tolerances.convexity);
    }
    if (root.contains("sizes")) {
      for (const auto& [key, value] : root.at("sizes").items()) {
        if (value.is_array()) {
          std::string joined;
          for (const auto& dim : value) {
            if (!joined.empty()) joined += ':';
            joined += std::to_string(dim.get<std::size_t>());
          }
          set_size(config.sizes, key, joined);
        } else {
          set_size(config.sizes, key,
                   std::to_string(value.get<std::size_t>()));
        }
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid config: ") + e.what());
  }
  return config;
}

HarnessConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config " + path.string() + " is not valid JSON: " +
                      e.what());
  }
  return parse_config(root);
}

}  // namespace bregman::harness
