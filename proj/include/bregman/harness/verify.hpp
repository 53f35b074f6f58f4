#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "bregman/harness/config.hpp"

namespace bregman::harness {

/// Outcome of one suite for one function and dimension.
struct SuiteEntry {
  std::string check_name;
  std::string function;
  std::size_t dimension = 0;
  std::size_t instances_run = 0;
  std::size_t pass_count = 0;
  std::size_t inconclusive = 0;
  /// Recorded on pass as well as on failure.
  double worst_residual = 0.0;
  double tolerance = 0.0;
  std::uint64_t seed = 0;
  /// Inconclusive instances tolerated, as a fraction of instances_run.
  double max_inconclusive_fraction = 0.0;
  std::string first_failure;

  void record(bool ok, double residual, std::string_view detail);
  void record_inconclusive(std::string_view detail);
  std::size_t failures() const {
    return instances_run - pass_count - inconclusive;
  }
  bool passed() const;
};

enum class Suite {
  RoundTrip,
  FenchelYoung,
  GradientConsistency,
  HessianConsistency,
  Convexity,
  FarthestCharacterization,
  RayInvariance,
  DualAgreement,
  Monotonicity,
  UpperSemicontinuity,
  NegConjugateIdentity,
  ThetaConjugateIdentity,
  DualConvexity,
  SubdifferentialInverse,
  ClarkeRegularity,
  GradientFormula,
  DifferentiabilityDichotomy,
  DualGradientSingleton,
  ThetaFalsifier,
  ThetaSingletonConvexity,
  KleeForward,
  KleeContrapositive,
  RightKleeDual,
};

std::string_view suite_name(Suite suite);
const std::vector<Suite>& all_suites();
/// Suites that only exercise the Legendre function itself run over
/// round_trip_dimensions; the rest over set_dimensions.
bool is_function_suite(Suite suite);

struct VerifyContext {
  std::uint64_t seed = 1;
  Tolerances tolerances;
  VerifySizes sizes;
  /// User point set substituted for random draws of a compatible size.
  std::optional<std::vector<Vector>> fixed_points;
};

SuiteEntry run_suite(Suite suite, const FunctionChoice& function,
                     std::size_t dimension, const VerifyContext& context);

/// energy, shannon, ppower(1.5), ppower(2), ppower(4).
std::vector<FunctionChoice> default_catalog();

struct VerificationReport {
  std::uint64_t seed = 0;
  double tie_tolerance = 0.0;
  std::vector<SuiteEntry> suites;

  bool passed() const;
  nlohmann::ordered_json to_json() const;
  /// Stable text form; identical inputs give identical bytes.
  std::string serialize() const;
};

/// Runs every suite for every function. A function with a fixed dimension
/// is checked in that dimension only.
VerificationReport run_verification(
    const std::vector<FunctionChoice>& functions,
    const VerifyContext& context);

}  // namespace bregman::harness
