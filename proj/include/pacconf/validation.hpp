#pragma once

// Seeded Monte-Carlo and exact-enumeration harnesses that check the bounds
// and inequalities on synthetic, exactly enumerable problems.
//
// Stream layout for a run seeded with `seed`: stream 0 builds the data
// distribution and classifier family, stream 1 draws the prior, and trial t
// uses stream t + 2 for everything it samples. Trials never share state, so
// records do not depend on the order or the number of worker threads.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pacconf/confusion.hpp"
#include "pacconf/ensemble.hpp"
#include "pacconf/rng.hpp"

namespace pacconf {

enum class Harness { theorem2, theorem1_binary, concentration, prop1 };
/// uniform and dirichlet ignore the sample; data_dependent tilts Dirichlet
/// weights by exp(-temperature * error) of each classifier on S; point_mass
/// puts all mass on the classifier with the lowest error on S.
enum class PosteriorMode { uniform, dirichlet, data_dependent, point_mass };
enum class PriorMode { uniform, dirichlet };
/// stratified: m_y i.i.d. draws from D(x | y) for each class.
/// joint: m i.i.d. draws from D, redrawn until every class is present.
enum class SamplingModel { stratified, joint };

const char* to_string(Harness h);
const char* to_string(PosteriorMode m);
const char* to_string(PriorMode m);
const char* to_string(SamplingModel m);
Harness parse_harness(const std::string& s);
PosteriorMode parse_posterior_mode(const std::string& s);
PriorMode parse_prior_mode(const std::string& s);
SamplingModel parse_sampling_model(const std::string& s);

inline constexpr const char* kRngName = "splitmix64";

struct SimulationConfig {
  Harness harness = Harness::theorem2;
  std::size_t num_classes = 3;
  std::size_t support_size = 60;
  std::size_t num_classifiers = 10;
  /// One entry per class, or a single entry used for every class.
  std::vector<std::size_t> per_class_sizes{100};
  /// Sample size m for the joint sampling model.
  std::size_t sample_size = 200;
  std::size_t trials = 2000;
  double delta = 0.05;
  std::uint64_t seed = 1;
  PosteriorMode posterior_mode = PosteriorMode::data_dependent;
  PriorMode prior_mode = PriorMode::uniform;
  SamplingModel sampling = SamplingModel::stratified;
  double class_floor = 0.05;
  double error_rate = 0.3;
  double posterior_temperature = 10.0;
  std::size_t classifier_index = 0;
  double epsilon_min = 0.05;
  double epsilon_max = 1.5;
  std::size_t epsilon_count = 15;
  unsigned threads = 1;

  /// Throws ConfigError on inconsistent or infeasible settings.
  void validate() const;
  std::vector<std::size_t> class_sizes() const;
  std::vector<double> epsilon_grid() const;
};

struct Environment {
  DiscreteDistribution dist;
  PredictionTable table;  // the family evaluated on every support point
};

/// Random finite distribution with each class marginal >= class_floor and a
/// family whose members err on each support point with probability
/// `error_rate` (uniformly among the wrong labels).
Environment make_discrete_distribution(const SimulationConfig& config, SplitMix64& rng);

struct DrawnSample {
  LabeledSample sample;
  std::vector<std::size_t> support_index;  // support point behind each example
};

DrawnSample sample_training_set(const DiscreteDistribution& dist,
                                const std::vector<std::size_t>& per_class_sizes,
                                SplitMix64& rng);

DrawnSample sample_joint(const DiscreteDistribution& dist, std::size_t m, SplitMix64& rng);

WeightDistribution draw_prior(const SimulationConfig& config, SplitMix64& rng);

/// Posterior for one trial; data-dependent modes look at `table_on_sample`.
WeightDistribution choose_posterior(const SimulationConfig& config,
                                    const PredictionTable& table_on_sample,
                                    const LabeledSample& sample, SplitMix64& rng);

struct Field {
  std::string name;
  std::optional<double> value;  // empty prints as null
};

struct TrialRecord {
  std::size_t trial = 0;
  bool violated = false;
  std::vector<Field> fields;

  std::optional<double> get(const std::string& name) const;
};

struct TailCheck {
  double epsilon;
  double tail_frequency;
  double bound;
  double slack;
  bool satisfied;
};

enum class Verdict { pass, fail, vacuous_pass };
const char* to_string(Verdict v);

struct ValidationReport {
  Harness harness = Harness::theorem2;
  std::size_t trials = 0;
  /// Violated trials; for the concentration harness, failed grid points.
  std::size_t violations = 0;
  double violation_rate = 0.0;  // violations / trials
  Verdict verdict = Verdict::pass;
  std::vector<std::string> warnings;
  std::vector<Field> summary;
  std::vector<TrialRecord> records;
  std::vector<TailCheck> tail_checks;
};

ValidationReport validate_theorem2(const SimulationConfig& config);
ValidationReport validate_binary_theorem1(const SimulationConfig& config);
ValidationReport validate_concentration(const SimulationConfig& config);
ValidationReport validate_prop1(const SimulationConfig& config);

/// Dispatches on config.harness.
ValidationReport run_validation(const SimulationConfig& config);

}  // namespace pacconf
