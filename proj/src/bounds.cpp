#include "pacconf/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "pacconf/error.hpp"

namespace pacconf {

void BoundInputs::validate() const {
  if (!(delta > 0.0 && delta <= 1.0)) {
    throw DeltaRangeError("delta must lie in (0, 1], got " + std::to_string(delta));
  }
  if (m_minus < 1) throw DomainError("m_minus must be at least 1");
  if (num_classes < 2) throw DomainError("the number of classes must be at least 2");
  if (std::isnan(kl_div) || kl_div < 0.0) throw DomainError("KL divergence must be >= 0");
  if (empirical_norm && !(*empirical_norm >= 0.0 && std::isfinite(*empirical_norm))) {
    throw DomainError("empirical norm must be finite and >= 0");
  }
}

const char* to_string(BoundKind kind) {
  switch (kind) {
    case BoundKind::deviation: return "deviation";
    case BoundKind::norm: return "norm";
    case BoundKind::binary: return "binary";
    case BoundKind::bayes_factor: return "bayes-factor";
  }
  return "unknown";
}

namespace {

BoundReport report_skeleton(BoundKind kind, const BoundInputs& in) {
  BoundReport r;
  r.kind = kind;
  r.kl_div = in.kl_div;
  r.m_minus = in.m_minus;
  r.num_classes = in.num_classes;
  r.delta = in.delta;
  r.sigma_sq_bound = static_cast<double>(in.num_classes) / static_cast<double>(in.m_minus);
  return r;
}

void finish(BoundReport& r, double value) {
  r.value = value;
  r.exceeds_norm_scale = value > std::sqrt(static_cast<double>(r.num_classes));
}

}  // namespace

BoundReport confusion_deviation_bound(const BoundInputs& in) {
  in.validate();
  BoundReport r = report_skeleton(BoundKind::deviation, in);
  const double m = static_cast<double>(in.m_minus);
  const double q8 = 8.0 * static_cast<double>(in.num_classes);
  if (in.m_minus <= 8 * in.num_classes) {
    r.vacuous_reason = "m_minus = " + std::to_string(in.m_minus) + " does not exceed 8Q = " +
                       std::to_string(8 * in.num_classes);
    return r;
  }
  if (std::isinf(in.kl_div)) {
    r.vacuous_reason = "posterior is not absolutely continuous w.r.t. the prior (KL = inf)";
    return r;
  }
  finish(r, std::sqrt(q8 / (m - q8) * (in.kl_div + std::log(m / (4.0 * in.delta)))));
  return r;
}

BoundReport confusion_norm_bound(const BoundInputs& in) {
  if (!in.empirical_norm) throw DomainError("norm bound needs the empirical confusion norm");
  BoundReport r = confusion_deviation_bound(in);
  r.kind = BoundKind::norm;
  if (r.value) finish(r, *in.empirical_norm + *r.value);
  return r;
}

SigmaSquared sigma_squared(const ClassCounts& counts) {
  double exact = 0.0;
  for (std::size_t c : counts.counts()) exact += 1.0 / static_cast<double>(c);
  return {exact, static_cast<double>(counts.num_classes()) / static_cast<double>(counts.m_minus())};
}

double tropp_tail_bound(double epsilon, double sigma_sq, std::size_t num_classes) {
  if (!(epsilon >= 0.0)) throw DomainError("epsilon must be >= 0");
  if (!(sigma_sq > 0.0)) throw DomainError("sigma^2 must be > 0");
  return 2.0 * static_cast<double>(num_classes) * std::exp(-epsilon * epsilon / (8.0 * sigma_sq));
}

double small_kl(double a, double b) {
  if (!(a >= 0.0 && a <= 1.0)) throw DomainError("kl: a must lie in [0, 1]");
  if (!(b >= 0.0 && b <= 1.0)) throw DomainError("kl: b must lie in [0, 1]");
  if (b == 0.0 || b == 1.0) {
    return a == b ? 0.0 : std::numeric_limits<double>::infinity();
  }
  double v = 0.0;
  if (a > 0.0) v += a * std::log(a / b);
  if (a < 1.0) v += (1.0 - a) * (std::log1p(-a) - std::log1p(-b));
  return std::max(0.0, v);
}

double small_kl_inverse(double a, double budget) {
  if (!(a >= 0.0 && a <= 1.0)) throw DomainError("kl inverse: a must lie in [0, 1]");
  if (!(budget >= 0.0)) throw DomainError("kl inverse: budget must be >= 0");
  constexpr double kUpper = 1.0 - 1e-15;
  if (a >= kUpper) return a;
  if (budget == 0.0) return a;
  if (small_kl(a, kUpper) <= budget) return kUpper;

  // kl(a, .) increases strictly on [a, 1); keep kl(a, lo) <= budget < kl(a, hi).
  double lo = a;
  double hi = kUpper;
  for (int it = 0; it < 200; ++it) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    if (small_kl(a, mid) <= budget) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

double log_xi(std::size_t m) {
  if (m < 1) throw DomainError("xi(m) needs m >= 1");
  const double md = static_cast<double>(m);
  const double log_m_fact = std::lgamma(md + 1.0);
  std::vector<double> terms(m + 1);
  for (std::size_t i = 0; i <= m; ++i) {
    const double id = static_cast<double>(i);
    const double k = md - id;
    double t = log_m_fact - std::lgamma(id + 1.0) - std::lgamma(k + 1.0);
    if (i > 0) t += id * std::log(id / md);  // 0^0 = 1
    if (i < m) t += k * std::log(k / md);
    terms[i] = t;
  }
  const double top = *std::max_element(terms.begin(), terms.end());
  double s = 0.0;
  for (double t : terms) s += std::exp(t - top);
  return top + std::log(s);
}

double xi(std::size_t m) { return std::exp(log_xi(m)); }

BoundReport binary_pacbayes_bound(double empirical_risk, double kl_div, std::size_t m,
                                  double delta) {
  if (m < 1) throw DomainError("binary bound needs m >= 1");
  if (!(delta > 0.0 && delta <= 1.0)) {
    throw DeltaRangeError("delta must lie in (0, 1], got " + std::to_string(delta));
  }
  if (!(empirical_risk >= 0.0 && empirical_risk <= 1.0)) {
    throw DomainError("empirical risk must lie in [0, 1]");
  }
  if (std::isnan(kl_div) || kl_div < 0.0) throw DomainError("KL divergence must be >= 0");

  BoundReport r;
  r.kind = BoundKind::binary;
  r.kl_div = kl_div;
  r.m_minus = m;
  r.num_classes = 2;
  r.delta = delta;
  if (std::isinf(kl_div)) {
    r.vacuous_reason = "posterior is not absolutely continuous w.r.t. the prior (KL = inf)";
    return r;
  }
  const double budget = (kl_div + log_xi(m) - std::log(delta)) / static_cast<double>(m);
  r.value = small_kl_inverse(empirical_risk, budget);
  return r;
}

double bayes_norm_from_gibbs(double gibbs_norm, std::size_t num_classes) {
  if (!(gibbs_norm >= 0.0)) throw DomainError("Gibbs norm must be >= 0");
  if (num_classes < 2) throw DomainError("the number of classes must be at least 2");
  return static_cast<double>(num_classes) * gibbs_norm;
}

}  // namespace pacconf
