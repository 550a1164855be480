#include "pacconf/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pacconf/error.hpp"

namespace pacconf {

namespace {

void require_posterior_size(const PredictionTable& table, const WeightDistribution& w) {
  if (w.size() != table.num_classifiers()) {
    throw DimensionError("weight vector has " + std::to_string(w.size()) + " entries, family has " +
                         std::to_string(table.num_classifiers()) + " classifiers");
  }
}

void require_table_on(const PredictionTable& table, std::size_t examples, std::size_t classes) {
  if (table.num_examples() != examples) {
    throw DimensionError("prediction table covers " + std::to_string(table.num_examples()) +
                         " examples, expected " + std::to_string(examples));
  }
  if (table.num_classes() != classes) throw DimensionError("class counts differ");
}

SquareMatrix weighted_average(std::span<const double> w, std::span<const SquareMatrix> ms) {
  const std::size_t q = ms.front().order();
  std::vector<double> acc(q * q, 0.0);
  for (std::size_t j = 0; j < ms.size(); ++j) {
    if (w[j] == 0.0) continue;
    const auto e = ms[j].entries();
    for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += w[j] * e[k];
  }
  return SquareMatrix(q, std::move(acc));
}

}  // namespace

PredictionTable::PredictionTable(std::vector<PredictionVector> classifiers)
    : classifiers_(std::move(classifiers)) {
  if (classifiers_.empty()) throw DataError("prediction table needs at least one classifier");
  for (const auto& c : classifiers_) {
    if (c.size() != classifiers_.front().size()) {
      throw DimensionError("classifiers cover different numbers of examples");
    }
    if (c.num_classes() != classifiers_.front().num_classes()) {
      throw DimensionError("classifiers disagree on the number of classes");
    }
  }
}

PredictionTable PredictionTable::restrict_to(std::span<const std::size_t> indices) const {
  std::vector<PredictionVector> out;
  out.reserve(classifiers_.size());
  for (const auto& c : classifiers_) {
    std::vector<Label> v;
    v.reserve(indices.size());
    for (std::size_t i : indices) {
      if (i >= c.size()) throw DimensionError("example index out of range");
      v.push_back(c[i]);
    }
    out.emplace_back(c.num_classes(), std::move(v));
  }
  return PredictionTable(std::move(out));
}

WeightDistribution::WeightDistribution(std::vector<double> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) throw DataError("weight vector is empty");
  double total = 0.0;
  for (double w : weights_) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw DataError("weights must be finite and >= 0");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw DataError("weights sum to " + std::to_string(total) + ", expected 1");
  }
}

WeightDistribution WeightDistribution::uniform(std::size_t n) {
  return WeightDistribution::normalized(std::vector<double>(n, 1.0));
}

WeightDistribution WeightDistribution::point_mass(std::size_t n, std::size_t j) {
  if (j >= n) throw DataError("point mass index out of range");
  std::vector<double> w(n, 0.0);
  w[j] = 1.0;
  return WeightDistribution(std::move(w));
}

WeightDistribution WeightDistribution::normalized(std::vector<double> masses) {
  double total = 0.0;
  for (double v : masses) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw DataError("masses must be finite and >= 0");
    total += v;
  }
  if (!(total > 0.0)) throw DataError("masses sum to zero");
  for (double& v : masses) v /= total;
  return WeightDistribution(std::move(masses));
}

VoteProfile::VoteProfile(std::vector<double> gamma) : gamma_(std::move(gamma)) {
  double total = 0.0;
  for (double g : gamma_) {
    if (!(g >= 0.0)) throw DataError("vote mass must be >= 0");
    total += g;
  }
  if (std::abs(total - 1.0) > 1e-11) {
    throw DataError("vote profile sums to " + std::to_string(total));
  }
}

double kl_divergence(const WeightDistribution& posterior, const WeightDistribution& prior) {
  if (posterior.size() != prior.size()) {
    throw DimensionError("posterior and prior have different lengths");
  }
  double kl = 0.0;
  for (std::size_t j = 0; j < posterior.size(); ++j) {
    const double q = posterior[j];
    if (q == 0.0) continue;
    if (prior[j] == 0.0) return kInfiniteKl;
    kl += q * std::log(q / prior[j]);
  }
  // Rounding can leave a tiny negative value when posterior == prior.
  return std::max(0.0, kl);
}

VoteProfile vote_profile(const PredictionTable& table, const WeightDistribution& posterior,
                         std::size_t example) {
  require_posterior_size(table, posterior);
  if (example >= table.num_examples()) throw DimensionError("example index out of range");
  std::vector<double> gamma(table.num_classes(), 0.0);
  for (std::size_t j = 0; j < table.num_classifiers(); ++j) gamma[table(j, example)] += posterior[j];
  return VoteProfile(std::move(gamma));
}

Label bayes_predict(const VoteProfile& profile) {
  Label best = 0;
  for (Label q = 1; q < profile.num_classes(); ++q)
    if (profile[q] > profile[best]) best = q;
  return best;
}

PredictionVector bayes_predictions(const PredictionTable& table,
                                   const WeightDistribution& posterior) {
  std::vector<Label> out(table.num_examples());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = bayes_predict(vote_profile(table, posterior, i));
  return PredictionVector(table.num_classes(), std::move(out));
}

ConfusionMatrix gibbs_empirical_confusion(const PredictionTable& table,
                                          const WeightDistribution& posterior,
                                          const LabeledSample& sample) {
  require_posterior_size(table, posterior);
  require_table_on(table, sample.size(), sample.num_classes());
  std::vector<SquareMatrix> per;
  per.reserve(table.num_classifiers());
  for (std::size_t j = 0; j < table.num_classifiers(); ++j)
    per.push_back(empirical_confusion(sample, table.classifier(j)).matrix());
  return ConfusionMatrix(weighted_average(posterior.weights(), per), true);
}

ConfusionMatrix gibbs_conditional_risks(const PredictionTable& table_on_support,
                                        const WeightDistribution& posterior,
                                        const DiscreteDistribution& dist) {
  require_posterior_size(table_on_support, posterior);
  require_table_on(table_on_support, dist.size(), dist.num_classes());
  std::vector<SquareMatrix> per;
  per.reserve(table_on_support.num_classifiers());
  for (std::size_t j = 0; j < table_on_support.num_classifiers(); ++j)
    per.push_back(true_conditional_matrix(dist, table_on_support.classifier(j)).matrix());
  return ConfusionMatrix(weighted_average(posterior.weights(), per), false);
}

ConfusionMatrix gibbs_true_confusion(const PredictionTable& table_on_support,
                                     const WeightDistribution& posterior,
                                     const DiscreteDistribution& dist) {
  require_posterior_size(table_on_support, posterior);
  require_table_on(table_on_support, dist.size(), dist.num_classes());
  std::vector<SquareMatrix> per;
  per.reserve(table_on_support.num_classifiers());
  for (std::size_t j = 0; j < table_on_support.num_classifiers(); ++j)
    per.push_back(true_confusion(dist, table_on_support.classifier(j)).matrix());
  return ConfusionMatrix(weighted_average(posterior.weights(), per), true);
}

ConfusionMatrix bayes_conditional_risks(const PredictionTable& table_on_support,
                                        const WeightDistribution& posterior,
                                        const DiscreteDistribution& dist) {
  require_table_on(table_on_support, dist.size(), dist.num_classes());
  return true_conditional_matrix(dist, bayes_predictions(table_on_support, posterior));
}

ConfusionMatrix bayes_true_confusion(const PredictionTable& table_on_support,
                                     const WeightDistribution& posterior,
                                     const DiscreteDistribution& dist) {
  return bayes_conditional_risks(table_on_support, posterior, dist).without_diagonal();
}

double conditional_gibbs_risk(const PredictionTable& table_on_support,
                              const WeightDistribution& posterior,
                              const DiscreteDistribution& dist, Label p, Label q) {
  if (p >= dist.num_classes() || q >= dist.num_classes()) throw DataError("class out of range");
  require_posterior_size(table_on_support, posterior);
  require_table_on(table_on_support, dist.size(), dist.num_classes());
  double mass = 0.0;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    if (dist[i].label != p) continue;
    mass += dist[i].probability * vote_profile(table_on_support, posterior, i)[q];
  }
  return mass / dist.class_marginals()[p];
}

double conditional_bayes_risk(const PredictionTable& table_on_support,
                              const WeightDistribution& posterior,
                              const DiscreteDistribution& dist, Label p, Label q) {
  if (p >= dist.num_classes() || q >= dist.num_classes()) throw DataError("class out of range");
  return bayes_conditional_risks(table_on_support, posterior, dist)(p, q);
}

double misclassification_rate(const ConfusionMatrix& c, std::span<const double> class_priors) {
  const std::size_t q = c.num_classes();
  if (!c.diagonal_zeroed()) throw DataError("misclassification rate needs a diagonal-zeroed matrix");
  if (class_priors.size() != q) throw DimensionError("class prior vector has the wrong length");
  double total = 0.0;
  for (double p : class_priors) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw DataError("class priors must be >= 0");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12) throw DataError("class priors must sum to 1");

  // u = C^T p, then ||u||_1.
  double norm1 = 0.0;
  for (std::size_t col = 0; col < q; ++col) {
    double u = 0.0;
    for (std::size_t row = 0; row < q; ++row) u += c(row, col) * class_priors[row];
    norm1 += std::abs(u);
  }
  return norm1;
}

double gibbs_empirical_risk(const PredictionTable& table, const WeightDistribution& posterior,
                            const LabeledSample& sample) {
  require_posterior_size(table, posterior);
  require_table_on(table, sample.size(), sample.num_classes());
  double risk = 0.0;
  for (std::size_t j = 0; j < table.num_classifiers(); ++j) {
    if (posterior[j] == 0.0) continue;
    std::size_t errors = 0;
    for (std::size_t i = 0; i < sample.size(); ++i) errors += table(j, i) != sample.labels()[i];
    risk += posterior[j] * static_cast<double>(errors) / static_cast<double>(sample.size());
  }
  return risk;
}

namespace {

double true_error_rate(const PredictionVector& preds, const DiscreteDistribution& dist) {
  double r = 0.0;
  for (std::size_t i = 0; i < dist.size(); ++i)
    if (preds[i] != dist[i].label) r += dist[i].probability;
  return r;
}

}  // namespace

double gibbs_true_risk(const PredictionTable& table_on_support,
                       const WeightDistribution& posterior, const DiscreteDistribution& dist) {
  require_posterior_size(table_on_support, posterior);
  require_table_on(table_on_support, dist.size(), dist.num_classes());
  double risk = 0.0;
  for (std::size_t j = 0; j < table_on_support.num_classifiers(); ++j)
    risk += posterior[j] * true_error_rate(table_on_support.classifier(j), dist);
  return risk;
}

double bayes_true_risk(const PredictionTable& table_on_support,
                       const WeightDistribution& posterior, const DiscreteDistribution& dist) {
  require_table_on(table_on_support, dist.size(), dist.num_classes());
  return true_error_rate(bayes_predictions(table_on_support, posterior), dist);
}

}  // namespace pacconf
