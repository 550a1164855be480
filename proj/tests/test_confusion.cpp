#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "pacconf/confusion.hpp"
#include "pacconf/error.hpp"
#include "pacconf/matrix.hpp"
#include "pacconf/validation.hpp"

using namespace pacconf;

namespace {

// External 1-based labels to a sample.
LabeledSample make_sample(std::size_t q, const std::vector<int>& labels) {
  std::vector<Example> ex;
  for (std::size_t i = 0; i < labels.size(); ++i)
    ex.push_back({"e" + std::to_string(i), static_cast<Label>(labels[i] - 1)});
  return LabeledSample(q, std::move(ex));
}

PredictionVector make_preds(std::size_t q, const std::vector<int>& labels) {
  std::vector<Label> v;
  for (int l : labels) v.push_back(static_cast<Label>(l - 1));
  return PredictionVector(q, std::move(v));
}

// Entry-by-entry definition: d_pq = sum_i (1/m_{y_i}) I(f(x_i) = q) I(y_i = p).
std::vector<double> tally_oracle(const LabeledSample& s, const PredictionVector& f, bool keep_diag) {
  const std::size_t q = s.num_classes();
  std::vector<double> d(q * q, 0.0);
  for (std::size_t p = 0; p < q; ++p)
    for (std::size_t c = 0; c < q; ++c) {
      if (!keep_diag && p == c) continue;
      for (std::size_t i = 0; i < s.size(); ++i) {
        std::size_t m_yi = 0;
        for (std::size_t k = 0; k < s.size(); ++k) m_yi += s[k].label == s[i].label;
        if (s[i].label == p && f[i] == c) d[p * q + c] += 1.0 / static_cast<double>(m_yi);
      }
    }
  return d;
}

}  // namespace

TEST_CASE("class counts") {
  const auto c = class_counts(make_sample(3, {1, 1, 2, 3, 3, 3}));
  CHECK(c[0] == 2);
  CHECK(c[1] == 1);
  CHECK(c[2] == 3);
  CHECK(c.m_minus() == 1);
  CHECK(c.total() == 6);

  std::vector<int> balanced;
  for (int y = 1; y <= 4; ++y) balanced.insert(balanced.end(), 10, y);
  const auto b = class_counts(make_sample(4, balanced));
  for (Label y = 0; y < 4; ++y) CHECK(b[y] == 10);
  CHECK(b.m_minus() == 10);

  CHECK_THROWS_AS(make_sample(3, {1, 1, 2}), InvalidSampleError);
  CHECK_THROWS_AS(make_sample(2, {1, 3}), DataError);
}

TEST_CASE("example confusion") {
  const auto s = make_sample(3, {1, 2, 2, 2, 2, 3});
  const auto m = example_confusion(1, s, 2, s.counts());
  CHECK(m(1, 2) == 0.25);
  double total = 0.0;
  for (double v : m.matrix().entries()) total += v;
  CHECK(total == 0.25);

  const auto correct = example_confusion(0, s, 0, s.counts());
  for (double v : correct.matrix().entries()) CHECK(v == 0.0);

  const auto single = example_confusion(0, s, 1, s.counts());
  CHECK(single(0, 1) == 1.0);
  CHECK(single.diagonal_zeroed());
}

TEST_CASE("empirical confusion examples") {
  SUBCASE("all correct") {
    const auto s = make_sample(3, {1, 2, 3, 3});
    const auto c = empirical_confusion(s, make_preds(3, {1, 2, 3, 3}));
    for (double v : c.matrix().entries()) CHECK(v == 0.0);
    CHECK(empirical_conditional_matrix(s, make_preds(3, {1, 2, 3, 3})).matrix() ==
          SquareMatrix::identity(3));
  }
  SUBCASE("two classes") {
    const auto s = make_sample(2, {1, 1, 2, 2});
    const auto f = make_preds(2, {1, 2, 2, 2});
    CHECK(empirical_confusion(s, f).matrix() == SquareMatrix::from_rows({{0, 0.5}, {0, 0}}));
    CHECK(empirical_conditional_matrix(s, f).matrix() == SquareMatrix::from_rows({{0.5, 0.5}, {0, 1}}));
  }
  SUBCASE("three classes, cross-checked by the tally oracle") {
    const auto s = make_sample(3, {1, 1, 1, 2, 3});
    const auto f = make_preds(3, {2, 3, 1, 2, 1});
    const auto c = empirical_confusion(s, f);
    const std::vector<double> hand{0, 1.0 / 3, 1.0 / 3, 0, 0, 0, 1, 0, 0};
    const auto oracle = tally_oracle(s, f, false);
    for (std::size_t k = 0; k < 9; ++k) {
      CHECK(c.matrix().entries()[k] == doctest::Approx(hand[k]).epsilon(1e-15));
      CHECK(oracle[k] == doctest::Approx(hand[k]).epsilon(1e-15));
    }
  }
  SUBCASE("misaligned predictions") {
    const auto s = make_sample(2, {1, 2});
    CHECK_THROWS_AS(empirical_confusion(s, make_preds(2, {1})), DimensionError);
  }
}

TEST_CASE("decomposition, diagonal discipline and row normalization on random inputs") {
  std::mt19937_64 gen(3);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t q = 2 + trial % 5;
    const std::size_t m = q + gen() % 40;
    std::vector<int> labels(m), preds(m);
    for (std::size_t i = 0; i < m; ++i) {
      labels[i] = static_cast<int>(i < q ? i + 1 : 1 + gen() % q);
      preds[i] = static_cast<int>(1 + gen() % q);
    }
    const auto s = make_sample(q, labels);
    const auto f = make_preds(q, preds);
    const auto c = empirical_confusion(s, f);
    const auto d = empirical_conditional_matrix(s, f);

    SquareMatrix sum(q);
    for (std::size_t i = 0; i < m; ++i) sum = sum + example_confusion(i, s, f[i], s.counts()).matrix();
    const auto oracle = tally_oracle(s, f, true);
    for (std::size_t p = 0; p < q; ++p) {
      double row_c = 0.0, row_d = 0.0;
      for (std::size_t k = 0; k < q; ++k) {
        CHECK(std::abs(c(p, k) - sum(p, k)) <= 1e-12);
        CHECK(std::abs(d(p, k) - oracle[p * q + k]) <= 1e-12);
        CHECK(c(p, k) == (p == k ? 0.0 : d(p, k)));
        row_c += c(p, k);
        row_d += d(p, k);
      }
      CHECK(std::abs(row_d - 1.0) <= 1e-12);
      CHECK(row_c >= 0.0);
      CHECK(row_c <= 1.0 + 1e-12);
    }
    CHECK(d.without_diagonal().matrix() == c.matrix());
  }
}

TEST_CASE("confusion matrix invariants") {
  CHECK_THROWS_AS(ConfusionMatrix(SquareMatrix::from_rows({{0.5, 0}, {0, 0}}), true), DataError);
  CHECK_THROWS_AS(ConfusionMatrix(SquareMatrix::from_rows({{0, -0.1}, {0, 0}}), true), DataError);
  CHECK_THROWS_AS(ConfusionMatrix(SquareMatrix::from_rows({{0.6, 0.6}, {0, 1}}), false), DataError);
  CHECK_NOTHROW(ConfusionMatrix(SquareMatrix::from_rows({{0.5, 0.5}, {0, 1}}), false));
}

TEST_CASE("discrete distribution validation") {
  CHECK_THROWS_AS(DiscreteDistribution(2, {{"a", 0, 0.5}, {"b", 0, 0.5}}), InvalidDistributionError);
  CHECK_THROWS_AS(DiscreteDistribution(2, {{"a", 0, 0.5}, {"b", 1, 0.4}}), InvalidDistributionError);
  CHECK_THROWS_AS(DiscreteDistribution(2, {{"a", 0, 1.5}, {"b", 1, -0.5}}), InvalidDistributionError);
  const DiscreteDistribution d(2, {{"a", 0, 0.25}, {"b", 1, 0.75}});
  CHECK(d.class_marginals()[1] == 0.75);
}

TEST_CASE("true confusion by enumeration") {
  const DiscreteDistribution d(2, {{"a", 0, 0.5}, {"b", 0, 0.25}, {"c", 1, 0.25}});
  SUBCASE("perfect classifier") {
    const auto c = true_confusion(d, make_preds(2, {1, 1, 2}));
    for (double v : c.matrix().entries()) CHECK(v == 0.0);
  }
  SUBCASE("one support point wrong") {
    const auto c = true_confusion(d, make_preds(2, {1, 2, 2}));
    CHECK(c(0, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(c(1, 0) == 0.0);
    CHECK(c(0, 0) == 0.0);
  }
  SUBCASE("constant classifier on a uniform two-class law") {
    const DiscreteDistribution u(2, {{"a", 0, 0.5}, {"b", 1, 0.5}});
    const auto c = true_confusion(u, make_preds(2, {1, 1}));
    CHECK(c(1, 0) == 1.0);
    CHECK(c(0, 1) == 0.0);
  }
  CHECK_THROWS_AS(true_confusion(d, make_preds(2, {1, 1})), DimensionError);
}

TEST_CASE("empirical confusion converges to the true matrix") {
  SimulationConfig cfg;
  cfg.num_classes = 3;
  cfg.support_size = 30;
  cfg.num_classifiers = 1;
  cfg.error_rate = 0.4;
  auto env_rng = SplitMix64::stream(99, 0);
  const Environment env = make_discrete_distribution(cfg, env_rng);
  const auto truth = true_confusion(env.dist, env.table.classifier(0)).matrix();

  std::vector<double> medians;
  for (std::size_t per_class : {100u, 1000u, 10000u}) {
    std::vector<double> dev;
    for (std::uint64_t r = 0; r < 100; ++r) {
      auto rng = SplitMix64::stream(per_class, r);
      const auto drawn = sample_training_set(env.dist, {per_class, per_class, per_class}, rng);
      const auto on_sample = env.table.restrict_to(drawn.support_index);
      dev.push_back(operator_norm(empirical_confusion(drawn.sample, on_sample.classifier(0)).matrix() - truth));
    }
    std::nth_element(dev.begin(), dev.begin() + 50, dev.end());
    medians.push_back(dev[50]);
  }
  CHECK(medians[0] > medians[1]);
  CHECK(medians[1] > medians[2]);
}
