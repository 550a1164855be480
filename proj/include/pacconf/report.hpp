#pragma once

// JSON / CSV emission for bound computations and validation campaigns.
//
// Every report carries `schema_version` and the run manifest. Matrices are
// row-major nested arrays tagged `orientation: "true-class-rows"`.

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "pacconf/bounds.hpp"
#include "pacconf/io.hpp"
#include "pacconf/validation.hpp"

namespace pacconf {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolVersion = "1.0.0";

struct RunManifest {
  std::string command;
  std::vector<std::pair<std::string, std::string>> inputs;  // role -> path
  std::optional<std::size_t> num_classes;
  std::optional<double> delta;
  std::optional<std::uint64_t> seed;
  std::string tool_version = kToolVersion;
  std::string timestamp;  // ISO-8601 UTC
};

std::string utc_timestamp();

/// Everything `bound` reports for one (sample, family, prior, posterior).
struct BoundAnalysis {
  std::size_t num_classes;
  std::size_t sample_size;
  std::vector<std::size_t> class_counts;
  std::size_t m_minus;
  double kl;
  SigmaSquared sigma_sq;
  ConfusionMatrix empirical_gibbs;
  double empirical_norm;
  BoundReport deviation;
  BoundReport norm;
  BoundReport bayes;  // Q times the norm bound
};

BoundAnalysis analyze_bound(const BoundProblem& problem, double delta);

/// What `binary-bound` reports. Throws DomainError unless Q = 2.
struct BinaryAnalysis {
  std::size_t sample_size;
  double empirical_risk;
  double kl;
  double xi;
  std::optional<double> kl_budget;
  BoundReport gibbs;
  std::optional<double> bayes_bound;  // 2 x the Gibbs risk bound
};

BinaryAnalysis analyze_binary_bound(const BoundProblem& problem, double delta);

Json to_json(const SquareMatrix& m);
SquareMatrix matrix_from_json(const Json& j);
Json to_json(const BoundReport& r);
Json to_json(const RunManifest& m);
Json to_json(const SimulationConfig& c);

Json bound_report_json(const BoundAnalysis& a, const RunManifest& manifest);
Json binary_report_json(const BinaryAnalysis& a, const RunManifest& manifest);
Json validation_report_json(const ValidationReport& r, const SimulationConfig& config,
                            const RunManifest& manifest);

/// Flat `key,value` rendering of a JSON object (nested keys joined by '.').
void write_flat_csv(std::ostream& out, const Json& j);

/// One line per trial: `trial,violated,<field>...`.
void write_trials_csv(std::ostream& out, const ValidationReport& r);

/// 17 significant digits.
std::string format_real(double v);

}  // namespace pacconf
