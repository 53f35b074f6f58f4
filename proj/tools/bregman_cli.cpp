#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "bregman/farthest.hpp"
#include "bregman/harness/config.hpp"
#include "bregman/harness/field.hpp"
#include "bregman/harness/io.hpp"
#include "bregman/harness/verify.hpp"

namespace {

using namespace bregman;
using namespace bregman::harness;
using ordered_json = nlohmann::ordered_json;

enum ExitCode : int {
  kOk = 0,
  kVerifyFailed = 1,
  kBadInput = 2,
  kBadOutput = 3,
  kNoTie = 4,
};

struct GlobalOptions {
  std::string config_path;
  std::optional<std::string> kind;
  std::optional<double> p;
  std::optional<std::size_t> dimension;
  std::optional<double> tie_tolerance;
  std::optional<std::uint64_t> seed;
};

/// Config file first, then flags on top.
HarnessConfig resolve_config(const GlobalOptions& opts) {
  HarnessConfig config;
  std::string path = opts.config_path;
  if (path.empty()) {
    if (const char* env = std::getenv(kConfigEnvVar)) path = env;
  }
  if (!path.empty()) config = load_config(path);
  if (opts.kind || opts.p || opts.dimension) {
    FunctionChoice choice = config.function.value_or(FunctionChoice{});
    if (opts.kind) choice.kind = *opts.kind;
    if (opts.p) choice.p = *opts.p;
    if (opts.dimension) choice.dimension = *opts.dimension;
    // Re-parse so flag values get the same validation as config values.
    config.function = parse_function(to_json(choice));
  }
  if (opts.tie_tolerance) config.tolerances.tie = *opts.tie_tolerance;
  if (opts.seed) config.seed = *opts.seed;
  return config;
}

LegendreSpec make_function(const HarnessConfig& config,
                           std::size_t inferred_dimension) {
  const FunctionChoice choice = config.function.value_or(FunctionChoice{});
  const std::size_t dim = choice.dimension.value_or(inferred_dimension);
  if (dim != inferred_dimension) {
    throw DimensionError(dim, inferred_dimension);
  }
  return choice.make(dim);
}

ordered_json vector_json(const Vector& v) {
  ordered_json out = ordered_json::array();
  for (Eigen::Index j = 0; j < v.size(); ++j) out.push_back(v[j]);
  return out;
}

ordered_json real_json(double v) {
  if (std::isfinite(v)) return v;
  return format_real(v);
}

ordered_json farthest_json(const FarthestResult& r) {
  ordered_json out;
  out["value"] = real_json(r.value);
  out["argmax"] = r.argmax_indices;
  out["witness"] = r.witness;
  out["top_gap"] = real_json(r.top_gap);
  return out;
}

int cmd_eval(const HarnessConfig& config, const std::string& x_text,
             const std::string& y_text) {
  const Vector x = parse_vector(x_text);
  const Vector y = parse_vector(y_text);
  if (x.size() != y.size()) throw DimensionError(x.size(), y.size());
  const LegendreSpec f = make_function(config, x.size());
  require_interior(f, x, "x");
  require_interior(f, y, "y");
  const double forward = bregman_distance(f, x, y);
  const double backward = bregman_distance(f, y, x);
  ordered_json out;
  out["function"] = f.name();
  out["x"] = vector_json(x);
  out["y"] = vector_json(y);
  out["forward"] = forward;
  out["backward"] = backward;
  out["asymmetry"] = std::abs(forward - backward);
  std::cout << out.dump(2) << "\n";
  return kOk;
}

int cmd_farthest(const HarnessConfig& config, const std::string& points_path,
                 const std::string& y_text, const std::string& side) {
  const auto points = load_points(points_path);
  const Vector y = parse_vector(y_text);
  const LegendreSpec f = make_function(config, y.size());
  const PointSet C(points, f);
  const double eps = config.tolerances.tie;
  ordered_json out;
  out["function"] = f.name();
  out["y"] = vector_json(y);
  if (side == "left" || side == "both") {
    out["left"] = farthest_json(left_farthest(f, C, y, eps));
  }
  if (side == "right" || side == "both") {
    out["right"] = farthest_json(right_farthest_direct(f, C, y, eps));
  }
  std::cout << out.dump(2) << "\n";
  return kOk;
}

int cmd_field(const HarnessConfig& config, const std::string& points_path,
              const std::string& lower, const std::string& upper,
              const std::string& resolution, double margin,
              const std::string& prefix) {
  GridSpec grid;
  grid.lower = parse_vector(lower);
  grid.upper = parse_vector(upper);
  grid.margin = margin;
  const Vector res = parse_vector(resolution);
  const auto dim = static_cast<std::size_t>(grid.lower.size());
  if (res.size() != 1 && static_cast<std::size_t>(res.size()) != dim) {
    throw InputError("resolution needs 1 or " + std::to_string(dim) + " entries");
  }
  for (std::size_t j = 0; j < dim; ++j) {
    const double r = res.size() == 1 ? res[0] : res[static_cast<Eigen::Index>(j)];
    if (!(r >= 1.0) || r != std::floor(r)) {
      throw InputError("resolution entries must be positive integers");
    }
    grid.resolution.push_back(static_cast<std::size_t>(r));
  }
  if (grid.upper.size() != grid.lower.size()) {
    throw DimensionError(grid.lower.size(), grid.upper.size());
  }
  const LegendreSpec f = make_function(config, dim);
  const PointSet C(load_points(points_path), f);
  grid.validate(f);
  const auto nodes = rasterize_field(f, C, grid, config.tolerances.tie);

  std::ostringstream csv;
  write_field_csv(csv, nodes, dim);
  write_file(prefix + ".csv", csv.str());
  ordered_json out;
  out["csv"] = prefix + ".csv";
  if (dim == 2) {
    std::ostringstream pgm;
    write_pgm(pgm, grid.resolution[0], grid.resolution[1],
              label_image(grid, nodes, C.size()));
    write_file(prefix + ".pgm", pgm.str());
    out["pgm"] = prefix + ".pgm";
  }
  std::size_t ties = 0;
  for (const auto& node : nodes) ties += node.tie() ? 1 : 0;
  out["nodes"] = nodes.size();
  out["tie_nodes"] = ties;
  std::cout << out.dump(2) << "\n";
  return kOk;
}

int cmd_tiefind(const HarnessConfig& config, const std::string& points_path,
                const std::string& a_text, const std::string& b_text) {
  const Vector a = parse_vector(a_text);
  const Vector b = parse_vector(b_text);
  if (a.size() != b.size()) throw DimensionError(a.size(), b.size());
  const LegendreSpec f = make_function(config, a.size());
  const PointSet C(load_points(points_path), f);
  std::optional<TieWitness> tie;
  try {
    tie = find_tie(f, C, a, b);
  } catch (const PreconditionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNoTie;
  }
  if (!tie) {
    std::cerr << "error: tie search did not reach the required gap\n";
    return kNoTie;
  }
  ordered_json out;
  out["function"] = f.name();
  out["location"] = vector_json(tie->location);
  out["value"] = tie->value;
  out["top_gap"] = tie->top_gap;
  out["pair"] = {tie->pair.first, tie->pair.second};
  std::cout << out.dump(2) << "\n";
  return kOk;
}

int cmd_verify(const HarnessConfig& config, const std::string& report_path,
               const std::string& sizes, const std::string& points_path) {
  VerifyContext ctx;
  ctx.seed = config.seed;
  ctx.tolerances = config.tolerances;
  ctx.sizes = config.sizes;
  if (!sizes.empty()) apply_size_overrides(ctx.sizes, sizes);
  if (!points_path.empty()) {
    auto points = load_points(points_path);
    // Same validation as any other point set, before any suite runs.
    PointSet check(points);
    ctx.fixed_points = std::move(points);
  }
  const std::vector<FunctionChoice> functions =
      config.function ? std::vector<FunctionChoice>{*config.function}
                      : default_catalog();
  const VerificationReport report = run_verification(functions, ctx);
  const std::string text = report.serialize();
  if (report_path.empty() || report_path == "-") {
    std::cout << text;
  } else {
    write_file(report_path, text);
  }
  std::size_t failed = 0;
  for (const auto& e : report.suites) {
    if (e.passed()) continue;
    ++failed;
    std::cerr << "FAIL " << e.check_name << " [" << e.function << ", J="
              << e.dimension << "]: " << e.first_failure << "\n";
  }
  std::cerr << report.suites.size() - failed << "/" << report.suites.size()
            << " suite entries passed\n";
  return report.passed() ? kOk : kVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bregman distances, farthest-point maps and their verification"};
  app.require_subcommand(1);
  GlobalOptions opts;
  app.add_option("--config", opts.config_path,
                 std::string("JSON config file (default: $") + kConfigEnvVar + ")");
  app.add_option("--kind", opts.kind, "energy | shannon | ppower");
  app.add_option("--p", opts.p, "exponent for ppower (p > 1)");
  app.add_option("--dim", opts.dimension, "dimension J");
  app.add_option("--tie-tol", opts.tie_tolerance, "tie tolerance");
  app.add_option("--seed", opts.seed, "seed for randomized suites");

  std::string x, y, points, side = "left", a, b, lower, upper, resolution,
                           prefix, report, sizes;
  double margin = 1e-3;

  auto* eval = app.add_subcommand("eval", "D(x,y), D(y,x) and their gap");
  eval->add_option("--x", x)->required();
  eval->add_option("--y", y)->required();

  auto* far = app.add_subcommand("farthest", "farthest points of a set");
  far->add_option("--points", points, "JSON or CSV point set")->required();
  far->add_option("--y", y)->required();
  far->add_option("--side", side)->check(CLI::IsMember({"left", "right", "both"}));

  auto* field = app.add_subcommand("field", "rasterize the farthest-label field");
  field->add_option("--points", points)->required();
  field->add_option("--lower", lower)->required();
  field->add_option("--upper", upper)->required();
  field->add_option("--resolution", resolution, "one count or one per axis")
      ->required();
  field->add_option("--margin", margin);
  field->add_option("--out", prefix, "output prefix")->required();

  auto* tiefind = app.add_subcommand("tiefind", "locate a tie on a segment");
  tiefind->add_option("--points", points)->required();
  tiefind->add_option("--a", a)->required();
  tiefind->add_option("--b", b)->required();

  auto* verify = app.add_subcommand("verify", "run the verification suites");
  verify->add_option("--report", report, "report path (default stdout)");
  verify->add_option("--sizes", sizes, "key=value,... instance overrides");
  verify->add_option("--points", points, "point set used where sizes allow");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kBadInput;
  }

  try {
    const HarnessConfig config = resolve_config(opts);
    if (*eval) return cmd_eval(config, x, y);
    if (*far) return cmd_farthest(config, points, y, side);
    if (*field) {
      return cmd_field(config, points, lower, upper, resolution, margin, prefix);
    }
    if (*tiefind) return cmd_tiefind(config, points, a, b);
    if (*verify) return cmd_verify(config, report, sizes, points);
  } catch (const OutputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBadOutput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBadInput;
  }
  return kBadInput;
}
