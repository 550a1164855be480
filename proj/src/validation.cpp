#include "pacconf/validation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <thread>

#include "pacconf/bounds.hpp"
#include "pacconf/error.hpp"
#include "pacconf/matrix.hpp"

namespace pacconf {

namespace {

constexpr std::uint64_t kEnvironmentStream = 0;
constexpr std::uint64_t kPriorStream = 1;
constexpr std::uint64_t kFirstTrialStream = 2;

constexpr double kEntrywiseTolerance = 1e-12;
constexpr double kNormTolerance = 1e-9;

template <typename E>
E parse_enum(const std::string& s, std::initializer_list<E> values, const char* what) {
  for (E v : values)
    if (s == to_string(v)) return v;
  throw ConfigError(std::string("unknown ") + what + " '" + s + "'");
}

std::vector<double> dirichlet_ones(std::size_t n, SplitMix64& rng) {
  std::vector<double> g(n);
  for (double& v : g) v = rng.exponential();
  const auto d = WeightDistribution::normalized(std::move(g));
  return {d.weights().begin(), d.weights().end()};
}

// Runs body(t) for every trial; records land at their own index.
void for_each_trial(std::size_t trials, unsigned threads,
                    const std::function<void(std::size_t)>& body) {
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(trials)));
  if (workers == 1) {
    for (std::size_t t = 0; t < trials; ++t) body(t);
    return;
  }
  std::vector<std::exception_ptr> errors(trials);
  std::atomic<std::size_t> next{0};
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t t = next++; t < trials; t = next++) {
          try {
            body(t);
          } catch (...) {
            errors[t] = std::current_exception();
          }
        }
      });
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

// Adds the trial index to errors escaping a trial.
void run_trial(std::size_t t, const std::function<void()>& fn) {
  try {
    fn();
  } catch (const NumericalError& e) {
    throw NumericalError("trial " + std::to_string(t) + ": " + e.what(), e.residual());
  }
}

// Class-balanced error of each classifier on a sample.
std::vector<double> balanced_errors(const PredictionTable& table, const LabeledSample& sample) {
  std::vector<double> r(table.num_classifiers());
  for (std::size_t j = 0; j < r.size(); ++j) {
    const auto c = empirical_confusion(sample, table.classifier(j));
    double s = 0.0;
    for (double v : c.matrix().entries()) s += v;
    r[j] = s / static_cast<double>(sample.num_classes());
  }
  return r;
}

void finish_rate(ValidationReport& rep) {
  rep.violation_rate = static_cast<double>(rep.violations) / static_cast<double>(rep.trials);
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  double m = *mid;
  if (v.size() % 2 == 0) m = 0.5 * (m + *std::max_element(v.begin(), mid));
  return m;
}

std::vector<double> column(const std::vector<TrialRecord>& records, const std::string& name) {
  std::vector<double> out;
  for (const auto& r : records)
    if (auto v = r.get(name)) out.push_back(*v);
  return out;
}

DrawnSample draw_for(const SimulationConfig& config, const DiscreteDistribution& dist,
                     SplitMix64& rng) {
  if (config.sampling == SamplingModel::joint) return sample_joint(dist, config.sample_size, rng);
  return sample_training_set(dist, config.class_sizes(), rng);
}

}  // namespace

const char* to_string(Harness h) {
  switch (h) {
    case Harness::theorem2: return "theorem2";
    case Harness::theorem1_binary: return "theorem1-binary";
    case Harness::concentration: return "concentration";
    case Harness::prop1: return "prop1";
  }
  return "unknown";
}

const char* to_string(PosteriorMode m) {
  switch (m) {
    case PosteriorMode::uniform: return "uniform";
    case PosteriorMode::dirichlet: return "random-dirichlet";
    case PosteriorMode::data_dependent: return "data-dependent";
    case PosteriorMode::point_mass: return "point-mass";
  }
  return "unknown";
}

const char* to_string(PriorMode m) {
  return m == PriorMode::uniform ? "uniform" : "random-dirichlet";
}

const char* to_string(SamplingModel m) {
  return m == SamplingModel::stratified ? "stratified" : "joint";
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::vacuous_pass: return "vacuous-pass";
  }
  return "unknown";
}

Harness parse_harness(const std::string& s) {
  return parse_enum(s, {Harness::theorem2, Harness::theorem1_binary, Harness::concentration,
                        Harness::prop1},
                    "harness");
}

PosteriorMode parse_posterior_mode(const std::string& s) {
  return parse_enum(s, {PosteriorMode::uniform, PosteriorMode::dirichlet,
                        PosteriorMode::data_dependent, PosteriorMode::point_mass},
                    "posterior mode");
}

PriorMode parse_prior_mode(const std::string& s) {
  return parse_enum(s, {PriorMode::uniform, PriorMode::dirichlet}, "prior mode");
}

SamplingModel parse_sampling_model(const std::string& s) {
  return parse_enum(s, {SamplingModel::stratified, SamplingModel::joint}, "sampling model");
}

void SimulationConfig::validate() const {
  if (num_classes < 2) throw ConfigError("num_classes must be at least 2");
  if (support_size < num_classes) throw ConfigError("support_size must be at least num_classes");
  if (num_classifiers < 1) throw ConfigError("num_classifiers must be at least 1");
  if (trials < 1) throw ConfigError("trials must be at least 1");
  if (!(delta > 0.0 && delta <= 1.0)) throw ConfigError("delta must lie in (0, 1]");
  if (!(class_floor >= 0.0) || class_floor * static_cast<double>(num_classes) > 1.0) {
    throw ConfigError("class_floor * num_classes exceeds 1");
  }
  if (!(error_rate >= 0.0 && error_rate <= 1.0)) throw ConfigError("error_rate must lie in [0, 1]");
  if (!(posterior_temperature >= 0.0) || !std::isfinite(posterior_temperature)) {
    throw ConfigError("posterior_temperature must be finite and >= 0");
  }
  if (per_class_sizes.size() != 1 && per_class_sizes.size() != num_classes) {
    throw ConfigError("per_class_size needs 1 or num_classes entries");
  }
  for (std::size_t s : per_class_sizes)
    if (s < 1) throw ConfigError("per-class sizes must be at least 1");
  if (sampling == SamplingModel::joint && sample_size < num_classes) {
    throw ConfigError("sample_size must be at least num_classes");
  }
  if (harness == Harness::theorem1_binary && sample_size < num_classes) {
    throw ConfigError("sample_size must be at least num_classes");
  }
  if (classifier_index >= num_classifiers) throw ConfigError("classifier_index out of range");
  if (epsilon_count < 1 || !(epsilon_min >= 0.0) || !(epsilon_max >= epsilon_min)) {
    throw ConfigError("epsilon grid needs 0 <= epsilon_min <= epsilon_max and count >= 1");
  }
  if (harness == Harness::theorem1_binary && num_classes != 2) {
    throw ConfigError("the theorem1-binary harness needs num_classes = 2");
  }
  if (harness == Harness::concentration && sampling != SamplingModel::stratified) {
    throw ConfigError("the concentration harness needs fixed class sizes (stratified sampling)");
  }
}

std::vector<std::size_t> SimulationConfig::class_sizes() const {
  if (per_class_sizes.size() == 1) return std::vector<std::size_t>(num_classes, per_class_sizes[0]);
  return per_class_sizes;
}

std::vector<double> SimulationConfig::epsilon_grid() const {
  std::vector<double> g(epsilon_count);
  for (std::size_t k = 0; k < epsilon_count; ++k) {
    g[k] = epsilon_count == 1 ? epsilon_min
                              : epsilon_min + (epsilon_max - epsilon_min) * static_cast<double>(k) /
                                                  static_cast<double>(epsilon_count - 1);
  }
  return g;
}

std::optional<double> TrialRecord::get(const std::string& name) const {
  for (const auto& f : fields)
    if (f.name == name) return f.value;
  return std::nullopt;
}

Environment make_discrete_distribution(const SimulationConfig& config, SplitMix64& rng) {
  const std::size_t q = config.num_classes;
  const std::size_t n = config.support_size;
  if (n < q) throw ConfigError("support_size must be at least num_classes");
  if (config.class_floor * static_cast<double>(q) > 1.0) {
    throw ConfigError("class_floor * num_classes exceeds 1");
  }

  std::vector<Label> labels(n);
  for (std::size_t k = 0; k < n; ++k) labels[k] = k < q ? k : rng.below(q);

  const auto share = dirichlet_ones(q, rng);
  const double free_mass = 1.0 - config.class_floor * static_cast<double>(q);
  std::vector<SupportPoint> support(n);
  for (Label y = 0; y < q; ++y) {
    std::vector<std::size_t> members;
    for (std::size_t k = 0; k < n; ++k)
      if (labels[k] == y) members.push_back(k);
    const double marginal = config.class_floor + free_mass * share[y];
    const auto split = dirichlet_ones(members.size(), rng);
    for (std::size_t a = 0; a < members.size(); ++a) {
      const std::size_t k = members[a];
      support[k] = SupportPoint{"x" + std::to_string(k + 1), y, marginal * split[a]};
    }
  }

  std::vector<PredictionVector> family;
  family.reserve(config.num_classifiers);
  for (std::size_t j = 0; j < config.num_classifiers; ++j) {
    std::vector<Label> preds(n);
    for (std::size_t k = 0; k < n; ++k) {
      preds[k] = labels[k];
      if (rng.bernoulli(config.error_rate)) {
        const Label wrong = rng.below(q - 1);
        preds[k] = wrong >= labels[k] ? wrong + 1 : wrong;
      }
    }
    family.emplace_back(q, std::move(preds));
  }
  return Environment{DiscreteDistribution(q, std::move(support)), PredictionTable(std::move(family))};
}

DrawnSample sample_training_set(const DiscreteDistribution& dist,
                                const std::vector<std::size_t>& per_class_sizes,
                                SplitMix64& rng) {
  const std::size_t q = dist.num_classes();
  if (per_class_sizes.size() != q) throw ConfigError("need one sample size per class");
  std::vector<Example> examples;
  std::vector<std::size_t> index;
  for (Label y = 0; y < q; ++y) {
    if (per_class_sizes[y] < 1) throw ConfigError("per-class sizes must be at least 1");
    std::vector<std::size_t> members;
    std::vector<double> cdf;
    double acc = 0.0;
    for (std::size_t k = 0; k < dist.size(); ++k) {
      if (dist[k].label != y || dist[k].probability <= 0.0) continue;
      acc += dist[k].probability;
      members.push_back(k);
      cdf.push_back(acc);
    }
    if (members.empty()) {
      throw ConfigError("class " + std::to_string(y + 1) + " has no support to sample from");
    }
    for (std::size_t s = 0; s < per_class_sizes[y]; ++s) {
      const double u = rng.uniform() * acc;
      auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
      if (it == cdf.end()) --it;
      const std::size_t k = members[static_cast<std::size_t>(it - cdf.begin())];
      examples.push_back(Example{dist[k].id, y});
      index.push_back(k);
    }
  }
  return DrawnSample{LabeledSample(q, std::move(examples)), std::move(index)};
}

DrawnSample sample_joint(const DiscreteDistribution& dist, std::size_t m, SplitMix64& rng) {
  std::vector<double> cdf(dist.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < dist.size(); ++k) cdf[k] = acc += dist[k].probability;
  constexpr int kMaxAttempts = 1000;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    std::vector<std::size_t> index(m);
    std::vector<std::size_t> seen(dist.num_classes(), 0);
    for (auto& k : index) {
      auto it = std::upper_bound(cdf.begin(), cdf.end(), rng.uniform() * acc);
      if (it == cdf.end()) --it;
      k = static_cast<std::size_t>(it - cdf.begin());
      ++seen[dist[k].label];
    }
    if (std::ranges::find(seen, std::size_t{0}) != seen.end()) continue;
    std::vector<Example> examples;
    examples.reserve(m);
    for (std::size_t k : index) examples.push_back(Example{dist[k].id, dist[k].label});
    return DrawnSample{LabeledSample(dist.num_classes(), std::move(examples)), std::move(index)};
  }
  throw ConfigError("joint sampling left a class empty in " + std::to_string(kMaxAttempts) +
                    " attempts; increase sample_size");
}

WeightDistribution draw_prior(const SimulationConfig& config, SplitMix64& rng) {
  if (config.prior_mode == PriorMode::uniform) return WeightDistribution::uniform(config.num_classifiers);
  return WeightDistribution(dirichlet_ones(config.num_classifiers, rng));
}

WeightDistribution choose_posterior(const SimulationConfig& config,
                                    const PredictionTable& table_on_sample,
                                    const LabeledSample& sample, SplitMix64& rng) {
  const std::size_t n = table_on_sample.num_classifiers();
  switch (config.posterior_mode) {
    case PosteriorMode::uniform:
      return WeightDistribution::uniform(n);
    case PosteriorMode::dirichlet:
      return WeightDistribution(dirichlet_ones(n, rng));
    case PosteriorMode::data_dependent: {
      const auto err = balanced_errors(table_on_sample, sample);
      const double best = *std::ranges::min_element(err);
      std::vector<double> mass(n);
      for (std::size_t j = 0; j < n; ++j)
        mass[j] = rng.exponential() * std::exp(-config.posterior_temperature * (err[j] - best));
      return WeightDistribution::normalized(std::move(mass));
    }
    case PosteriorMode::point_mass: {
      const auto err = balanced_errors(table_on_sample, sample);
      const auto best = std::ranges::min_element(err) - err.begin();
      return WeightDistribution::point_mass(n, static_cast<std::size_t>(best));
    }
  }
  throw ConfigError("unknown posterior mode");
}

ValidationReport validate_theorem2(const SimulationConfig& config) {
  config.validate();
  auto env_rng = SplitMix64::stream(config.seed, kEnvironmentStream);
  const Environment env = make_discrete_distribution(config, env_rng);
  auto prior_rng = SplitMix64::stream(config.seed, kPriorStream);
  const WeightDistribution prior = draw_prior(config, prior_rng);

  ValidationReport rep;
  rep.harness = Harness::theorem2;
  rep.trials = config.trials;
  rep.records.resize(config.trials);
  std::vector<char> vacuous(config.trials, 0);

  for_each_trial(config.trials, config.threads, [&](std::size_t t) {
    run_trial(t, [&] {
      auto rng = SplitMix64::stream(config.seed, kFirstTrialStream + t);
      const DrawnSample drawn = draw_for(config, env.dist, rng);
      const PredictionTable on_sample = env.table.restrict_to(drawn.support_index);
      const WeightDistribution post = choose_posterior(config, on_sample, drawn.sample, rng);

      const auto emp = gibbs_empirical_confusion(on_sample, post, drawn.sample);
      const auto tru = gibbs_true_confusion(env.table, post, env.dist);
      const double deviation = operator_norm(emp.matrix() - tru.matrix());
      const double kl = kl_divergence(post, prior);
      const std::size_t m_minus = drawn.sample.counts().m_minus();
      const BoundReport bound = confusion_deviation_bound(
          BoundInputs{kl, m_minus, config.num_classes, config.delta, std::nullopt});

      TrialRecord& rec = rep.records[t];
      rec.trial = t;
      rec.violated = bound.value && deviation > *bound.value;
      vacuous[t] = bound.vacuous();
      rec.fields = {{"deviation", deviation},
                    {"bound", bound.value},
                    {"kl", kl},
                    {"m_minus", static_cast<double>(m_minus)},
                    {"empirical_norm", operator_norm(emp.matrix())},
                    {"true_norm", operator_norm(tru.matrix())}};
    });
  });

  for (const auto& r : rep.records) rep.violations += r.violated;
  finish_rate(rep);
  const auto n_vacuous = static_cast<std::size_t>(std::ranges::count(vacuous, 1));
  if (n_vacuous == config.trials) {
    rep.verdict = Verdict::vacuous_pass;
    rep.warnings.push_back("bound vacuous in every trial (m_minus <= 8Q or infinite KL)");
  } else {
    rep.verdict = rep.violation_rate <= config.delta ? Verdict::pass : Verdict::fail;
    if (n_vacuous > 0) {
      rep.warnings.push_back(std::to_string(n_vacuous) + " trials had a vacuous bound");
    }
  }
  const auto dev = column(rep.records, "deviation");
  const auto bnd = column(rep.records, "bound");
  rep.summary = {{"max_deviation", dev.empty() ? 0.0 : *std::ranges::max_element(dev)},
                 {"median_deviation", median(dev)},
                 {"min_bound", bnd.empty() ? std::nullopt
                                           : std::optional<double>(*std::ranges::min_element(bnd))},
                 {"vacuous_trials", static_cast<double>(n_vacuous)}};
  return rep;
}

ValidationReport validate_binary_theorem1(const SimulationConfig& config) {
  config.validate();
  auto env_rng = SplitMix64::stream(config.seed, kEnvironmentStream);
  const Environment env = make_discrete_distribution(config, env_rng);
  auto prior_rng = SplitMix64::stream(config.seed, kPriorStream);
  const WeightDistribution prior = draw_prior(config, prior_rng);
  const double log_xi_m = log_xi(config.sample_size);

  ValidationReport rep;
  rep.harness = Harness::theorem1_binary;
  rep.trials = config.trials;
  rep.records.resize(config.trials);
  std::vector<char> factor_two_broken(config.trials, 0);

  for_each_trial(config.trials, config.threads, [&](std::size_t t) {
    run_trial(t, [&] {
      auto rng = SplitMix64::stream(config.seed, kFirstTrialStream + t);
      // The kl inequality concerns the plain risk over an i.i.d. m-sample.
      const DrawnSample drawn = sample_joint(env.dist, config.sample_size, rng);
      const PredictionTable on_sample = env.table.restrict_to(drawn.support_index);
      const WeightDistribution post = choose_posterior(config, on_sample, drawn.sample, rng);

      const double emp = std::min(1.0, gibbs_empirical_risk(on_sample, post, drawn.sample));
      const double tru = std::min(1.0, gibbs_true_risk(env.table, post, env.dist));
      const double bayes = bayes_true_risk(env.table, post, env.dist);
      const double kl = kl_divergence(post, prior);
      const double lhs = small_kl(emp, tru);
      const double budget = (kl + log_xi_m - std::log(config.delta)) /
                            static_cast<double>(config.sample_size);
      const BoundReport risk_bound = binary_pacbayes_bound(emp, kl, config.sample_size, config.delta);

      TrialRecord& rec = rep.records[t];
      rec.trial = t;
      rec.violated = lhs > budget;
      factor_two_broken[t] = bayes > 2.0 * tru + kEntrywiseTolerance;
      rec.fields = {{"empirical_risk", emp},   {"true_risk", tru},
                    {"kl_small", lhs},         {"budget", std::isinf(budget) ? std::nullopt : std::optional<double>(budget)},
                    {"risk_bound", risk_bound.value}, {"kl", kl},
                    {"bayes_true_risk", bayes}};
    });
  });

  for (const auto& r : rep.records) rep.violations += r.violated;
  finish_rate(rep);
  const auto broken = static_cast<std::size_t>(std::ranges::count(factor_two_broken, 1));
  rep.verdict = rep.violation_rate <= config.delta && broken == 0 ? Verdict::pass : Verdict::fail;
  if (broken > 0) {
    rep.warnings.push_back(std::to_string(broken) + " trials broke R(B) <= 2 R(G)");
  }
  const auto kl_small = column(rep.records, "kl_small");
  rep.summary = {{"xi", std::exp(log_xi_m)},
                 {"max_kl_small", *std::ranges::max_element(kl_small)},
                 {"factor_two_violations", static_cast<double>(broken)}};
  return rep;
}

ValidationReport validate_concentration(const SimulationConfig& config) {
  config.validate();
  auto env_rng = SplitMix64::stream(config.seed, kEnvironmentStream);
  const Environment env = make_discrete_distribution(config, env_rng);
  const PredictionVector& f = env.table.classifier(config.classifier_index);
  const SquareMatrix centre = true_confusion(env.dist, f).matrix();
  const auto sizes = config.class_sizes();
  const double sigma_sq = sigma_squared(ClassCounts(sizes)).exact;

  ValidationReport rep;
  rep.harness = Harness::concentration;
  rep.trials = config.trials;
  rep.records.resize(config.trials);

  for_each_trial(config.trials, config.threads, [&](std::size_t t) {
    run_trial(t, [&] {
      auto rng = SplitMix64::stream(config.seed, kFirstTrialStream + t);
      const DrawnSample drawn = sample_training_set(env.dist, sizes, rng);
      const PredictionVector preds(config.num_classes, [&] {
        std::vector<Label> v;
        v.reserve(drawn.support_index.size());
        for (std::size_t k : drawn.support_index) v.push_back(f[k]);
        return v;
      }());
      // sum_i (C_i - E C_i) collapses to C_S - C because every E C_i is the
      // true row of class y_i scaled by 1/m_{y_i}.
      const double norm = operator_norm(empirical_confusion(drawn.sample, preds).matrix() - centre);
      TrialRecord& rec = rep.records[t];
      rec.trial = t;
      rec.fields = {{"centered_norm", norm}};
    });
  });

  const auto norms = column(rep.records, "centered_norm");
  const double trials = static_cast<double>(config.trials);
  for (double eps : config.epsilon_grid()) {
    const auto hits = std::ranges::count_if(norms, [&](double v) { return v >= eps; });
    const double freq = static_cast<double>(hits) / trials;
    const double bound = tropp_tail_bound(eps, sigma_sq, config.num_classes);
    const double slack = 3.0 * std::sqrt(freq * (1.0 - freq) / trials);
    rep.tail_checks.push_back(TailCheck{eps, freq, bound, slack, freq <= bound + slack});
  }
  rep.violations = static_cast<std::size_t>(
      std::ranges::count_if(rep.tail_checks, [](const TailCheck& c) { return !c.satisfied; }));
  finish_rate(rep);
  rep.verdict = rep.violations == 0 ? Verdict::pass : Verdict::fail;
  rep.summary = {{"sigma_sq", sigma_sq},
                 {"max_centered_norm", *std::ranges::max_element(norms)},
                 {"median_centered_norm", median(norms)}};
  return rep;
}

ValidationReport validate_prop1(const SimulationConfig& config) {
  config.validate();
  const double q = static_cast<double>(config.num_classes);

  ValidationReport rep;
  rep.harness = Harness::prop1;
  rep.trials = config.trials;
  rep.records.resize(config.trials);

  for_each_trial(config.trials, config.threads, [&](std::size_t t) {
    run_trial(t, [&] {
      // Each triple (distribution, family, posterior) is drawn from its own stream.
      auto rng = SplitMix64::stream(config.seed, kFirstTrialStream + t);
      SimulationConfig local = config;
      local.error_rate = config.error_rate * rng.uniform();
      const Environment env = make_discrete_distribution(local, rng);
      WeightDistribution post = WeightDistribution::uniform(config.num_classifiers);
      switch (config.posterior_mode) {
        case PosteriorMode::uniform: break;
        case PosteriorMode::point_mass:
          post = WeightDistribution::point_mass(config.num_classifiers, rng.below(config.num_classifiers));
          break;
        default: post = WeightDistribution(dirichlet_ones(config.num_classifiers, rng)); break;
      }

      const auto gibbs = gibbs_conditional_risks(env.table, post, env.dist);
      const auto bayes = bayes_conditional_risks(env.table, post, env.dist);
      double worst_excess = -std::numeric_limits<double>::infinity();
      bool entry_violation = false;
      for (Label p = 0; p < config.num_classes; ++p) {
        for (Label c = 0; c < config.num_classes; ++c) {
          const double excess = bayes(p, c) - q * gibbs(p, c);
          worst_excess = std::max(worst_excess, excess);
          entry_violation |= excess > kEntrywiseTolerance;
        }
      }
      const double norm_bayes = operator_norm(bayes.without_diagonal().matrix());
      const double norm_gibbs = operator_norm(gibbs.without_diagonal().matrix());
      const bool norm_violation = norm_bayes > bayes_norm_from_gibbs(norm_gibbs, config.num_classes) + kNormTolerance;

      std::optional<double> factor_two_excess;
      bool factor_two_violation = false;
      if (config.num_classes == 2) {
        const double rb = bayes_true_risk(env.table, post, env.dist);
        const double rg = gibbs_true_risk(env.table, post, env.dist);
        factor_two_excess = rb - 2.0 * rg;
        factor_two_violation = *factor_two_excess > kEntrywiseTolerance;
      }

      TrialRecord& rec = rep.records[t];
      rec.trial = t;
      rec.violated = entry_violation || norm_violation || factor_two_violation;
      rec.fields = {{"max_entry_excess", worst_excess},
                    {"bayes_norm", norm_bayes},
                    {"gibbs_norm", norm_gibbs},
                    {"entry_violation", entry_violation ? 1.0 : 0.0},
                    {"norm_violation", norm_violation ? 1.0 : 0.0},
                    {"factor_two_excess", factor_two_excess}};
    });
  });

  for (const auto& r : rep.records) rep.violations += r.violated;
  finish_rate(rep);
  rep.verdict = rep.violations == 0 ? Verdict::pass : Verdict::fail;
  const auto excess = column(rep.records, "max_entry_excess");
  std::size_t bayes_errs = 0;
  for (const auto& r : rep.records) bayes_errs += r.get("bayes_norm").value_or(0.0) > 0.0;
  rep.summary = {{"max_entry_excess", *std::ranges::max_element(excess)},
                 {"triples_with_bayes_errors", static_cast<double>(bayes_errs)}};
  return rep;
}

ValidationReport run_validation(const SimulationConfig& config) {
  switch (config.harness) {
    case Harness::theorem2: return validate_theorem2(config);
    case Harness::theorem1_binary: return validate_binary_theorem1(config);
    case Harness::concentration: return validate_concentration(config);
    case Harness::prop1: return validate_prop1(config);
  }
  throw ConfigError("unknown harness");
}

}  // namespace pacconf
