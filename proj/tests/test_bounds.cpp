#include <cmath>
#include <limits>

#include "doctest.h"
#include "oracles.hpp"
#include "pacconf/bounds.hpp"
#include "pacconf/ensemble.hpp"
#include "pacconf/error.hpp"

using namespace pacconf;

namespace {

// Reference values computed once at 40 significant digits.
constexpr double kDev100 = 1.400895363884960659976;
constexpr double kDev1e9 = 0.000732109898067749078;
constexpr double kTropp = 2.117196488753093400176;
constexpr double kKl = 0.368064207168497069911;
constexpr double kXi10 = 4.66021568;
constexpr double kXi50 = 9.543127039343949374619;
constexpr double kXi100 = 13.20996063021598030025;
constexpr double kXi200 = 18.39844385537915051351;
constexpr double kBinary100 = 0.05424056009001337998;
constexpr double kInvKl = 0.4999998705196683748634;
constexpr double kRatio1e4 = 0.5305879058239949360;
constexpr double kRatio1e5 = 0.5257006329642284351;

bool close_rel(double a, double b, double rel) { return std::abs(a - b) <= rel * std::abs(b); }

BoundInputs inputs(double kl, std::size_t m, std::size_t q = 3, double delta = 0.05) {
  BoundInputs in;
  in.kl_div = kl;
  in.m_minus = m;
  in.num_classes = q;
  in.delta = delta;
  return in;
}

double dev(double kl, std::size_t m, std::size_t q = 3, double delta = 0.05) {
  return *confusion_deviation_bound(inputs(kl, m, q, delta)).value;
}

}  // namespace

TEST_CASE("deviation bound spot values") {
  CHECK(close_rel(dev(0.0, 100), kDev100, 1e-12));
  CHECK(close_rel(dev(0.0, 1000000000), kDev1e9, 1e-10));
  const auto r = confusion_deviation_bound(inputs(0.0, 100));
  CHECK(r.kind == BoundKind::deviation);
  CHECK(r.exceeds_norm_scale == false);
  CHECK(r.sigma_sq_bound == doctest::Approx(0.03));
  // 2 classes, small sample: value above sqrt(2) gets flagged.
  CHECK(confusion_deviation_bound(inputs(5.0, 40, 2)).exceeds_norm_scale);
}

TEST_CASE("deviation bound vacuous regimes") {
  const auto small = confusion_deviation_bound(inputs(0.0, 24));
  CHECK(small.vacuous());
  CHECK_FALSE(small.vacuous_reason.empty());
  CHECK(confusion_deviation_bound(inputs(0.0, 20)).vacuous());
  CHECK_FALSE(confusion_deviation_bound(inputs(0.0, 25)).vacuous());
  const auto inf = confusion_deviation_bound(inputs(kInfiniteKl, 1000));
  CHECK(inf.vacuous());
  CHECK_FALSE(inf.vacuous_reason.empty());
}

TEST_CASE("bound input validation") {
  CHECK_THROWS_AS(confusion_deviation_bound(inputs(0.0, 100, 3, 0.0)), DeltaRangeError);
  CHECK_THROWS_AS(confusion_deviation_bound(inputs(0.0, 100, 3, 1.5)), DeltaRangeError);
  CHECK_THROWS_AS(confusion_deviation_bound(inputs(0.0, 100, 3, -0.1)), DeltaRangeError);
  CHECK_NOTHROW(confusion_deviation_bound(inputs(0.0, 100, 3, 1.0)));
  CHECK_THROWS_AS(confusion_deviation_bound(inputs(-1.0, 100)), DomainError);
  CHECK_THROWS_AS(confusion_deviation_bound(inputs(std::nan(""), 100)), DomainError);
  CHECK_THROWS_AS(confusion_deviation_bound(inputs(0.0, 0)), DomainError);
  CHECK_THROWS_AS(confusion_deviation_bound(inputs(0.0, 100, 1)), DomainError);
  CHECK_THROWS_AS(confusion_norm_bound(inputs(0.0, 100)), DomainError);
}

TEST_CASE("norm bound adds the empirical norm") {
  auto in = inputs(0.0, 100);
  in.empirical_norm = 0.2;
  const auto r = confusion_norm_bound(in);
  CHECK(r.kind == BoundKind::norm);
  CHECK(close_rel(*r.value, kDev100 + 0.2, 1e-12));
  in.empirical_norm = 0.0;
  CHECK(close_rel(*confusion_norm_bound(in).value, kDev100, 1e-12));
  CHECK(bayes_norm_from_gibbs(0.4, 3) == doctest::Approx(1.2));
}

TEST_CASE("deviation bound monotonicity") {
  for (std::size_t m : {30u, 50u, 100u, 1000u, 100000u}) {
    double prev = 0.0;
    for (double kl : {0.0, 0.1, 0.5, 1.0, 3.0, 10.0}) {
      const double v = dev(kl, m);
      CHECK(v > prev);
      prev = v;
    }
  }
  for (double kl : {0.0, 1.0, 5.0}) {
    double prev = std::numeric_limits<double>::infinity();
    for (std::size_t m = 25; m < 2000000; m = m * 3 / 2 + 1) {
      const double v = dev(kl, m);
      CHECK(v < prev);
      prev = v;
    }
  }
  double prev = std::numeric_limits<double>::infinity();
  for (double delta : {0.001, 0.01, 0.05, 0.1, 0.5, 1.0}) {
    const double v = dev(0.5, 500, 3, delta);
    CHECK(v < prev);
    prev = v;
  }
}

TEST_CASE("deviation bound decays at the sqrt(ln m / m) rate") {
  CHECK(close_rel(dev(0.0, 40000) / dev(0.0, 10000), kRatio1e4, 1e-9));
  CHECK(close_rel(dev(0.0, 400000) / dev(0.0, 100000), kRatio1e5, 1e-9));
}

TEST_CASE("variance proxy") {
  const auto s = sigma_squared(ClassCounts(std::vector<std::size_t>{10, 20, 40}));
  CHECK(s.exact == doctest::Approx(0.175).epsilon(1e-15));
  CHECK(s.upper == doctest::Approx(0.3).epsilon(1e-15));
  const auto b = sigma_squared(ClassCounts(std::vector<std::size_t>{50, 50, 50}));
  CHECK(b.exact == doctest::Approx(0.06).epsilon(1e-15));
  CHECK(b.upper == doctest::Approx(0.06).epsilon(1e-15));
  const auto one = sigma_squared(ClassCounts(std::vector<std::size_t>{1, 1}));
  CHECK(one.exact == 2.0);
  CHECK(one.upper == 2.0);
}

TEST_CASE("matrix concentration tail") {
  CHECK(close_rel(tropp_tail_bound(0.5, 0.03, 3), kTropp, 1e-13));
  double prev = std::numeric_limits<double>::infinity();
  for (double eps = 0.05; eps < 2.0; eps += 0.05) {
    const double v = tropp_tail_bound(eps, 0.03, 3);
    CHECK(v < prev);
    prev = v;
  }
  CHECK(tropp_tail_bound(0.0, 0.03, 3) == 6.0);
  CHECK(tropp_tail_bound(0.3, 0.01, 3) < tropp_tail_bound(0.3, 0.02, 3));
}

TEST_CASE("binary relative entropy") {
  CHECK(close_rel(small_kl(0.1, 0.5), kKl, 1e-14));
  CHECK(small_kl(0.3, 0.3) == 0.0);
  CHECK(small_kl(0.0, 0.0) == 0.0);
  CHECK(small_kl(1.0, 1.0) == 0.0);
  CHECK(std::isinf(small_kl(0.1, 0.0)));
  CHECK(std::isinf(small_kl(0.1, 1.0)));
  CHECK(small_kl(0.0, 0.5) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  // Convex in b on a grid.
  for (double a : {0.0, 0.1, 0.4, 0.9}) {
    for (double b = 0.02; b < 0.97; b += 0.01) {
      const double mid = small_kl(a, b);
      const double avg = 0.5 * (small_kl(a, b - 0.01) + small_kl(a, b + 0.01));
      CHECK(mid <= avg + 1e-14);
    }
  }
}

TEST_CASE("inverse of the binary relative entropy") {
  CHECK(close_rel(small_kl_inverse(0.1, 0.368064), kInvKl, 1e-12));
  CHECK(small_kl_inverse(0.3, 0.0) == doctest::Approx(0.3).epsilon(1e-14));
  // For a = 0 the inverse is 1 - exp(-B).
  for (double budget : {0.001, 0.01, 0.1, 0.5, 2.0}) {
    CHECK(close_rel(small_kl_inverse(0.0, budget), -std::expm1(-budget), 1e-12));
  }
  for (double a : {0.0, 0.05, 0.2, 0.5, 0.7}) {
    for (double budget : {0.001, 0.01, 0.05, 0.1, 0.3}) {
      const double b = small_kl_inverse(a, budget);
      CHECK(b >= a);
      CHECK(b < 1.0);
      CHECK(std::abs(small_kl(a, b) - budget) <= 1e-10);
    }
  }
  CHECK_THROWS_AS(small_kl_inverse(-0.1, 0.1), DomainError);
  CHECK_THROWS_AS(small_kl_inverse(0.1, -0.1), DomainError);
}

TEST_CASE("xi(m)") {
  CHECK(xi(1) == 2.0);
  CHECK(xi(2) == 2.5);
  CHECK(xi(3) == doctest::Approx(26.0 / 9.0).epsilon(1e-14));
  CHECK(close_rel(xi(10), kXi10, 1e-12));
  CHECK(close_rel(xi(50), kXi50, 1e-12));
  CHECK(close_rel(xi(100), kXi100, 1e-12));
  CHECK(close_rel(xi(200), kXi200, 1e-12));
  for (std::size_t m = 1; m <= 50; ++m) {
    CHECK(close_rel(xi(m), oracle::xi_direct(m), 1e-9));
    CHECK(xi(m) >= 2.0 - 1e-12);
  }
  // Grows like sqrt(pi m / 2).
  CHECK(xi(100000) / std::sqrt(3.14159265358979 * 100000 / 2.0) == doctest::Approx(1.0).epsilon(1e-2));
  CHECK_THROWS_AS(xi(0), DomainError);
}

TEST_CASE("binary kl bound") {
  const auto r = binary_pacbayes_bound(0.0, 0.0, 100, 0.05);
  CHECK(r.kind == BoundKind::binary);
  CHECK(close_rel(*r.value, kBinary100, 1e-10));
  // Zero empirical risk closed form: 1 - exp(-ln(xi/delta)/m).
  CHECK(close_rel(*r.value, -std::expm1(-std::log(kXi100 / 0.05) / 100.0), 1e-12));

  const auto big = binary_pacbayes_bound(0.2, 0.0, 1000000, 0.05);
  CHECK(*big.value > 0.2);
  CHECK(*big.value - 0.2 < 0.01);

  double prev = 0.0;
  for (double risk : {0.0, 0.05, 0.1, 0.2, 0.4}) {
    const double v = *binary_pacbayes_bound(risk, 0.5, 500, 0.05).value;
    CHECK(v >= risk);
    CHECK(v > prev);
    prev = v;
  }
  CHECK(*binary_pacbayes_bound(0.1, 2.0, 500, 0.05).value >
        *binary_pacbayes_bound(0.1, 0.5, 500, 0.05).value);
  CHECK(binary_pacbayes_bound(0.1, kInfiniteKl, 500, 0.05).vacuous());
  CHECK_THROWS_AS(binary_pacbayes_bound(0.1, 0.0, 500, 0.0), DeltaRangeError);
  CHECK_THROWS_AS(binary_pacbayes_bound(1.2, 0.0, 500, 0.05), DomainError);
}
