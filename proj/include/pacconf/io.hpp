#pragma once

// Text inputs: sample / prediction / weight CSV files and the key-value
// simulation config. External class labels are 1-based.

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pacconf/confusion.hpp"
#include "pacconf/ensemble.hpp"
#include "pacconf/validation.hpp"

namespace pacconf {

/// Rows `example_id,label`; an optional header line is skipped.
struct SampleRows {
  std::vector<std::string> ids;
  std::vector<long> labels;  // 1-based
};

/// Header `example_id,f1,...,fn`, then one row per example.
struct PredictionRows {
  std::vector<std::string> classifier_names;
  std::vector<std::string> ids;
  std::vector<std::vector<long>> labels;  // [example][classifier], 1-based
};

/// Rows `classifier_id,weight`; an optional header line is skipped.
struct WeightRows {
  std::vector<std::string> names;
  std::vector<double> weights;
};

SampleRows parse_sample_csv(std::istream& in, const std::string& source);
PredictionRows parse_predictions_csv(std::istream& in, const std::string& source);
WeightRows parse_weights_csv(std::istream& in, const std::string& source);

SampleRows read_sample_csv(const std::string& path);
PredictionRows read_predictions_csv(const std::string& path);
WeightRows read_weights_csv(const std::string& path);

/// Sample, family and distributions aligned to each other.
struct BoundProblem {
  LabeledSample sample;
  PredictionTable table;  // rows in sample order
  WeightDistribution prior;
  WeightDistribution posterior;
  std::vector<std::string> classifier_names;
};

/// Aligns predictions to the sample by example id and weights to the
/// prediction columns by classifier id. Q is `num_classes` when given,
/// otherwise the largest label in the sample. Throws DimensionError on
/// missing or duplicate ids, InvalidSampleError on an empty class and
/// DataError on labels outside 1..Q or invalid weights.
BoundProblem assemble_bound_problem(const SampleRows& sample, const PredictionRows& preds,
                                    const WeightRows& prior, const WeightRows& posterior,
                                    std::optional<std::size_t> num_classes = std::nullopt);

/// `key = value` lines; `#` starts a comment. Unknown keys and bad values
/// raise ParseError with the offending location.
SimulationConfig parse_config(std::istream& in, const std::string& source);
SimulationConfig read_config(const std::string& path);

}  // namespace pacconf
