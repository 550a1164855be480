#include "pacconf/confusion.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include "pacconf/error.hpp"

namespace pacconf {

namespace {

// Slack for entries produced by averaging with weights summing to 1 +- 1e-12.
constexpr double kProbabilitySlack = 1e-10;

void require_label(Label y, std::size_t num_classes, const char* what) {
  if (y >= num_classes) {
    throw DataError(std::string(what) + " label " + std::to_string(y + 1) +
                    " outside 1.." + std::to_string(num_classes));
  }
}

void require_aligned(const LabeledSample& sample, const PredictionVector& preds) {
  if (preds.size() != sample.size()) {
    throw DimensionError("predictions cover " + std::to_string(preds.size()) +
                         " examples, sample has " + std::to_string(sample.size()));
  }
  if (preds.num_classes() != sample.num_classes()) {
    throw DimensionError("prediction and sample class counts differ");
  }
}

// Integer tallies (p, q) -> #{i : y_i = p, f(x_i) = q}.
std::vector<std::uint64_t> tally_pairs(const LabeledSample& sample, const PredictionVector& preds) {
  const std::size_t q = sample.num_classes();
  std::vector<std::uint64_t> t(q * q, 0);
  for (std::size_t i = 0; i < sample.size(); ++i) ++t[sample.labels()[i] * q + preds[i]];
  return t;
}

}  // namespace

ClassCounts ClassCounts::tally(std::span<const Label> labels, std::size_t num_classes) {
  std::vector<std::size_t> counts(num_classes, 0);
  for (Label y : labels) {
    require_label(y, num_classes, "sample");
    ++counts[y];
  }
  return ClassCounts(std::move(counts));
}

ClassCounts::ClassCounts(std::vector<std::size_t> counts) : counts_(std::move(counts)) {
  if (counts_.empty()) throw InvalidSampleError("no classes");
  for (std::size_t y = 0; y < counts_.size(); ++y) {
    if (counts_[y] == 0) {
      throw InvalidSampleError("class " + std::to_string(y + 1) + " has no example");
    }
    total_ += counts_[y];
  }
  m_minus_ = *std::min_element(counts_.begin(), counts_.end());
}

LabeledSample::LabeledSample(std::size_t num_classes, std::vector<Example> examples)
    : num_classes_(num_classes),
      examples_(std::move(examples)),
      labels_([&] {
        std::vector<Label> l;
        l.reserve(examples_.size());
        for (const auto& e : examples_) l.push_back(e.label);
        return l;
      }()),
      counts_(ClassCounts::tally(labels_, num_classes)) {}

PredictionVector::PredictionVector(std::size_t num_classes, std::vector<Label> predictions)
    : num_classes_(num_classes), predictions_(std::move(predictions)) {
  for (Label y : predictions_) require_label(y, num_classes_, "prediction");
}

ConfusionMatrix::ConfusionMatrix(SquareMatrix m, bool diagonal_zeroed)
    : m_(std::move(m)), diagonal_zeroed_(diagonal_zeroed) {
  const std::size_t q = m_.order();
  for (std::size_t p = 0; p < q; ++p) {
    double row_sum = 0.0;
    for (std::size_t c = 0; c < q; ++c) {
      const double v = m_(p, c);
      if (v < 0.0 || v > 1.0 + kProbabilitySlack) {
        throw DataError("confusion entry (" + std::to_string(p + 1) + ", " +
                        std::to_string(c + 1) + ") = " + std::to_string(v) + " outside [0, 1]");
      }
      row_sum += v;
    }
    if (diagonal_zeroed_ && m_(p, p) != 0.0) {
      throw DataError("diagonal-zeroed confusion matrix has nonzero diagonal at row " +
                      std::to_string(p + 1));
    }
    if (row_sum > 1.0 + kProbabilitySlack) {
      throw DataError("confusion row " + std::to_string(p + 1) + " sums to " +
                      std::to_string(row_sum));
    }
  }
}

ConfusionMatrix ConfusionMatrix::without_diagonal() const {
  const std::size_t q = m_.order();
  std::vector<double> e(m_.entries().begin(), m_.entries().end());
  for (std::size_t p = 0; p < q; ++p) e[p * q + p] = 0.0;
  return ConfusionMatrix(SquareMatrix(q, std::move(e)), true);
}

DiscreteDistribution::DiscreteDistribution(std::size_t num_classes,
                                           std::vector<SupportPoint> support)
    : num_classes_(num_classes), support_(std::move(support)), marginals_(num_classes, 0.0) {
  if (num_classes_ == 0) throw InvalidDistributionError("no classes");
  double total = 0.0;
  for (const auto& pt : support_) {
    if (pt.label >= num_classes_) {
      throw InvalidDistributionError("support point '" + pt.id + "' has label outside 1.." +
                                     std::to_string(num_classes_));
    }
    if (!(pt.probability >= 0.0) || !std::isfinite(pt.probability)) {
      throw InvalidDistributionError("support point '" + pt.id + "' has invalid probability");
    }
    marginals_[pt.label] += pt.probability;
    total += pt.probability;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw InvalidDistributionError("probabilities sum to " + std::to_string(total));
  }
  for (std::size_t y = 0; y < num_classes_; ++y) {
    if (marginals_[y] <= 0.0) {
      throw InvalidDistributionError("class " + std::to_string(y + 1) +
                                     " has zero marginal probability");
    }
  }
}

ClassCounts class_counts(const LabeledSample& sample) { return sample.counts(); }

ConfusionMatrix example_confusion(std::size_t index, const LabeledSample& sample,
                                  Label prediction, const ClassCounts& counts) {
  if (index >= sample.size()) throw DimensionError("example index out of range");
  require_label(prediction, sample.num_classes(), "prediction");
  const std::size_t q = sample.num_classes();
  SquareMatrix m(q);
  const Label y = sample.labels()[index];
  if (prediction == y) return ConfusionMatrix(std::move(m), true);
  std::vector<double> e(q * q, 0.0);
  e[y * q + prediction] = 1.0 / static_cast<double>(counts[y]);
  return ConfusionMatrix(SquareMatrix(q, std::move(e)), true);
}

ConfusionMatrix empirical_conditional_matrix(const LabeledSample& sample,
                                             const PredictionVector& preds) {
  require_aligned(sample, preds);
  const std::size_t q = sample.num_classes();
  const auto tally = tally_pairs(sample, preds);
  std::vector<double> e(q * q);
  for (std::size_t p = 0; p < q; ++p) {
    const double m_p = static_cast<double>(sample.counts()[p]);
    for (std::size_t c = 0; c < q; ++c) e[p * q + c] = static_cast<double>(tally[p * q + c]) / m_p;
  }
  return ConfusionMatrix(SquareMatrix(q, std::move(e)), false);
}

ConfusionMatrix empirical_confusion(const LabeledSample& sample, const PredictionVector& preds) {
  return empirical_conditional_matrix(sample, preds).without_diagonal();
}

ConfusionMatrix true_conditional_matrix(const DiscreteDistribution& dist,
                                        const PredictionVector& preds_on_support) {
  if (preds_on_support.size() != dist.size()) {
    throw DimensionError("predictions cover " + std::to_string(preds_on_support.size()) +
                         " support points, distribution has " + std::to_string(dist.size()));
  }
  if (preds_on_support.num_classes() != dist.num_classes()) {
    throw DimensionError("prediction and distribution class counts differ");
  }
  const std::size_t q = dist.num_classes();
  std::vector<double> joint(q * q, 0.0);
  for (std::size_t i = 0; i < dist.size(); ++i) {
    joint[dist[i].label * q + preds_on_support[i]] += dist[i].probability;
  }
  const auto marg = dist.class_marginals();
  for (std::size_t p = 0; p < q; ++p)
    for (std::size_t c = 0; c < q; ++c) joint[p * q + c] /= marg[p];
  return ConfusionMatrix(SquareMatrix(q, std::move(joint)), false);
}

ConfusionMatrix true_confusion(const DiscreteDistribution& dist,
                               const PredictionVector& preds_on_support) {
  return true_conditional_matrix(dist, preds_on_support).without_diagonal();
}

}  // namespace pacconf
