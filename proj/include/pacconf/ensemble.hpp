#pragma once

// Finite classifier families, distributions over them, and the Gibbs and
// Bayes (majority vote) confusion matrices and risks they induce.

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "pacconf/confusion.hpp"

namespace pacconf {

/// Predictions of n classifiers on a common ordered example set.
class PredictionTable {
 public:
  explicit PredictionTable(std::vector<PredictionVector> classifiers);

  std::size_t num_classifiers() const noexcept { return classifiers_.size(); }
  std::size_t num_examples() const noexcept { return classifiers_.front().size(); }
  std::size_t num_classes() const noexcept { return classifiers_.front().num_classes(); }
  const PredictionVector& classifier(std::size_t j) const noexcept { return classifiers_[j]; }
  Label operator()(std::size_t j, std::size_t i) const noexcept { return classifiers_[j][i]; }

  /// Same family evaluated on the examples at `indices` (in that order).
  PredictionTable restrict_to(std::span<const std::size_t> indices) const;

 private:
  std::vector<PredictionVector> classifiers_;
};

/// Probability vector over a classifier family (prior or posterior).
class WeightDistribution {
 public:
  /// Throws DataError unless weights are nonnegative and sum to 1 within 1e-12.
  explicit WeightDistribution(std::vector<double> weights);

  static WeightDistribution uniform(std::size_t n);
  static WeightDistribution point_mass(std::size_t n, std::size_t j);
  /// Rescales positive-sum nonnegative masses to a distribution.
  static WeightDistribution normalized(std::vector<double> masses);

  std::size_t size() const noexcept { return weights_.size(); }
  double operator[](std::size_t j) const noexcept { return weights_[j]; }
  std::span<const double> weights() const noexcept { return weights_; }

 private:
  std::vector<double> weights_;
};

/// Posterior vote mass gamma_q(x) of every class for one example.
class VoteProfile {
 public:
  explicit VoteProfile(std::vector<double> gamma);

  std::size_t num_classes() const noexcept { return gamma_.size(); }
  double operator[](Label q) const noexcept { return gamma_[q]; }
  std::span<const double> gamma() const noexcept { return gamma_; }

 private:
  std::vector<double> gamma_;
};

/// Returned by kl_divergence when the posterior is not absolutely continuous
/// with respect to the prior; bound routines turn it into a vacuous report.
inline constexpr double kInfiniteKl = std::numeric_limits<double>::infinity();

double kl_divergence(const WeightDistribution& posterior, const WeightDistribution& prior);

VoteProfile vote_profile(const PredictionTable& table, const WeightDistribution& posterior,
                         std::size_t example);

/// Majority class. Ties go to the smallest class index.
Label bayes_predict(const VoteProfile& profile);

/// Majority-vote labels on every example of the table.
PredictionVector bayes_predictions(const PredictionTable& table,
                                   const WeightDistribution& posterior);

ConfusionMatrix gibbs_empirical_confusion(const PredictionTable& table,
                                          const WeightDistribution& posterior,
                                          const LabeledSample& sample);

ConfusionMatrix gibbs_true_confusion(const PredictionTable& table_on_support,
                                     const WeightDistribution& posterior,
                                     const DiscreteDistribution& dist);

ConfusionMatrix bayes_true_confusion(const PredictionTable& table_on_support,
                                     const WeightDistribution& posterior,
                                     const DiscreteDistribution& dist);

/// Full matrix of R(G, p, q) = E_{x|y=p} gamma_q(x), diagonal kept.
ConfusionMatrix gibbs_conditional_risks(const PredictionTable& table_on_support,
                                        const WeightDistribution& posterior,
                                        const DiscreteDistribution& dist);

/// Full matrix of R(B, p, q) = P(bayes(x) = q | y = p), diagonal kept.
ConfusionMatrix bayes_conditional_risks(const PredictionTable& table_on_support,
                                        const WeightDistribution& posterior,
                                        const DiscreteDistribution& dist);

double conditional_gibbs_risk(const PredictionTable& table_on_support,
                              const WeightDistribution& posterior,
                              const DiscreteDistribution& dist, Label p, Label q);

double conditional_bayes_risk(const PredictionTable& table_on_support,
                              const WeightDistribution& posterior,
                              const DiscreteDistribution& dist, Label p, Label q);

/// Error rate sum_p priors_p sum_{q != p} c_pq, evaluated as || C^T priors ||_1.
double misclassification_rate(const ConfusionMatrix& c, std::span<const double> class_priors);

/// Plain 0-1 risk of the Gibbs classifier on a sample, (1/m) sum_i E_f I(f(x_i) != y_i).
double gibbs_empirical_risk(const PredictionTable& table, const WeightDistribution& posterior,
                            const LabeledSample& sample);

double gibbs_true_risk(const PredictionTable& table_on_support,
                       const WeightDistribution& posterior, const DiscreteDistribution& dist);

double bayes_true_risk(const PredictionTable& table_on_support,
                       const WeightDistribution& posterior, const DiscreteDistribution& dist);

}  // namespace pacconf
