#pragma once

// Closed-form generalization bounds: the multiclass confusion-matrix bound
// and its norm form, the matrix concentration tail, the variance proxy, and
// the binary kl route (kl, its inverse, xi(m)).

#include <cstddef>
#include <optional>
#include <string>

#include "pacconf/confusion.hpp"

namespace pacconf {

struct BoundInputs {
  double kl_div = 0.0;  // may be kInfiniteKl
  std::size_t m_minus = 1;
  std::size_t num_classes = 2;
  double delta = 0.05;
  std::optional<double> empirical_norm;

  /// Throws DomainError when delta is outside (0, 1], m_minus < 1, Q < 2,
  /// KL is negative/NaN or the empirical norm is negative.
  void validate() const;
};

enum class BoundKind { deviation, norm, binary, bayes_factor };

const char* to_string(BoundKind kind);

struct BoundReport {
  BoundKind kind = BoundKind::deviation;
  /// Empty when the bound is vacuous; `vacuous_reason` then says why.
  std::optional<double> value;
  std::string vacuous_reason;
  /// Set when the value exceeds sqrt(Q), beyond which it says nothing about
  /// a confusion matrix (heuristic flag, the value is still reported).
  bool exceeds_norm_scale = false;

  double kl_div = 0.0;
  std::size_t m_minus = 0;
  std::size_t num_classes = 0;
  double delta = 0.0;
  double sigma_sq_bound = 0.0;

  bool vacuous() const noexcept { return !value.has_value(); }
};

/// sqrt(8Q / (m_- - 8Q) * [KL + ln(m_- / (4 delta))]); vacuous when
/// m_- <= 8Q or KL is infinite.
BoundReport confusion_deviation_bound(const BoundInputs& in);

/// empirical_norm + the deviation term. Throws DomainError without an
/// empirical norm.
BoundReport confusion_norm_bound(const BoundInputs& in);

struct SigmaSquared {
  double exact;  // sum_y 1/m_y
  double upper;  // Q / m_-
};

SigmaSquared sigma_squared(const ClassCounts& counts);

/// 2Q exp(-eps^2 / (8 sigma^2)).
double tropp_tail_bound(double epsilon, double sigma_sq, std::size_t num_classes);

/// Binary relative entropy kl(a, b), with 0 ln 0 = 0; +infinity when b is 0
/// or 1 and a differs from it.
double small_kl(double a, double b);

/// Largest b in [a, 1) with kl(a, b) <= budget, by bisection.
double small_kl_inverse(double a, double budget);

double log_xi(std::size_t m);
/// sum_{i=0}^m C(m, i) (i/m)^i (1 - i/m)^(m-i), evaluated in log space.
double xi(std::size_t m);

/// Upper bound on the true Gibbs risk: kl^{-1}(R_S, (KL + ln(xi(m)/delta)) / m).
BoundReport binary_pacbayes_bound(double empirical_risk, double kl_div, std::size_t m,
                                  double delta);

/// Q * ||C^G||, the majority-vote confusion norm bound.
double bayes_norm_from_gibbs(double gibbs_norm, std::size_t num_classes);

}  // namespace pacconf
