#pragma once

// Labeled samples, predictions and the confusion matrices built from them.
//
// Orientation everywhere: row = true class p, column = predicted class q.
// Class labels are 0-based inside the library; file formats use 1-based labels.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "pacconf/matrix.hpp"

namespace pacconf {

using Label = std::size_t;

/// Per-class example tallies of a sample, all >= 1.
class ClassCounts {
 public:
  /// Throws InvalidSampleError if some class in [0, num_classes) has no
  /// example, DataError if a label is out of range.
  static ClassCounts tally(std::span<const Label> labels, std::size_t num_classes);

  /// Throws InvalidSampleError on a zero count.
  explicit ClassCounts(std::vector<std::size_t> counts);

  std::size_t num_classes() const noexcept { return counts_.size(); }
  std::size_t operator[](Label y) const noexcept { return counts_[y]; }
  std::span<const std::size_t> counts() const noexcept { return counts_; }
  std::size_t m_minus() const noexcept { return m_minus_; }
  std::size_t total() const noexcept { return total_; }

 private:
  std::vector<std::size_t> counts_;
  std::size_t m_minus_ = 0;
  std::size_t total_ = 0;
};

struct Example {
  std::string id;
  Label label;
};

class LabeledSample {
 public:
  LabeledSample(std::size_t num_classes, std::vector<Example> examples);

  std::size_t num_classes() const noexcept { return num_classes_; }
  std::size_t size() const noexcept { return examples_.size(); }
  const Example& operator[](std::size_t i) const noexcept { return examples_[i]; }
  std::span<const Example> examples() const noexcept { return examples_; }
  std::span<const Label> labels() const noexcept { return labels_; }
  const ClassCounts& counts() const noexcept { return counts_; }

 private:
  std::size_t num_classes_;
  std::vector<Example> examples_;
  std::vector<Label> labels_;
  ClassCounts counts_;
};

/// One classifier's labels on an ordered example set.
class PredictionVector {
 public:
  PredictionVector(std::size_t num_classes, std::vector<Label> predictions);

  std::size_t num_classes() const noexcept { return num_classes_; }
  std::size_t size() const noexcept { return predictions_.size(); }
  Label operator[](std::size_t i) const noexcept { return predictions_[i]; }
  std::span<const Label> values() const noexcept { return predictions_; }

 private:
  std::size_t num_classes_;
  std::vector<Label> predictions_;
};

/// Nonnegative matrix of conditional prediction frequencies with rows
/// summing to at most 1. With `diagonal_zeroed` it only records errors.
class ConfusionMatrix {
 public:
  ConfusionMatrix(SquareMatrix m, bool diagonal_zeroed);

  const SquareMatrix& matrix() const noexcept { return m_; }
  bool diagonal_zeroed() const noexcept { return diagonal_zeroed_; }
  std::size_t num_classes() const noexcept { return m_.order(); }
  double operator()(Label p, Label q) const noexcept { return m_(p, q); }
  ConfusionMatrix without_diagonal() const;

 private:
  SquareMatrix m_;
  bool diagonal_zeroed_;
};

struct SupportPoint {
  std::string id;
  Label label;
  double probability;
};

/// Finite joint law over (x, y), so that true conditional quantities can be
/// enumerated exactly.
class DiscreteDistribution {
 public:
  /// Throws InvalidDistributionError unless probabilities are nonnegative,
  /// sum to 1 within 1e-12 and give every class positive mass.
  DiscreteDistribution(std::size_t num_classes, std::vector<SupportPoint> support);

  std::size_t num_classes() const noexcept { return num_classes_; }
  std::size_t size() const noexcept { return support_.size(); }
  const SupportPoint& operator[](std::size_t i) const noexcept { return support_[i]; }
  std::span<const SupportPoint> support() const noexcept { return support_; }
  std::span<const double> class_marginals() const noexcept { return marginals_; }

 private:
  std::size_t num_classes_;
  std::vector<SupportPoint> support_;
  std::vector<double> marginals_;
};

ClassCounts class_counts(const LabeledSample& sample);

/// Single-example matrix: 1/m_y at (y_i, prediction) when the prediction is
/// wrong, zero otherwise.
ConfusionMatrix example_confusion(std::size_t index, const LabeledSample& sample,
                                  Label prediction, const ClassCounts& counts);

/// Diagonal-zeroed empirical confusion matrix.
ConfusionMatrix empirical_confusion(const LabeledSample& sample, const PredictionVector& preds);

/// Empirical conditional matrix with the diagonal kept; rows sum to 1.
ConfusionMatrix empirical_conditional_matrix(const LabeledSample& sample,
                                             const PredictionVector& preds);

/// Exact conditional matrix P(f(x) = q | y = p), diagonal kept.
ConfusionMatrix true_conditional_matrix(const DiscreteDistribution& dist,
                                        const PredictionVector& preds_on_support);

/// Exact diagonal-zeroed confusion matrix.
ConfusionMatrix true_confusion(const DiscreteDistribution& dist,
                               const PredictionVector& preds_on_support);

}  // namespace pacconf
