#include "pacconf/report.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <ostream>

#include "pacconf/error.hpp"
#include "pacconf/matrix.hpp"

namespace pacconf {

namespace {

Json optional_real(std::optional<double> v) {
  if (!v || !std::isfinite(*v)) return nullptr;
  return *v;
}

Json kl_json(double kl) { return std::isinf(kl) ? Json(nullptr) : Json(kl); }

}  // namespace

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

BoundAnalysis analyze_bound(const BoundProblem& problem, double delta) {
  const auto& counts = problem.sample.counts();
  const std::size_t q = problem.sample.num_classes();
  const double kl = kl_divergence(problem.posterior, problem.prior);
  auto emp = gibbs_empirical_confusion(problem.table, problem.posterior, problem.sample);
  const double emp_norm = operator_norm(emp.matrix());

  BoundInputs in{kl, counts.m_minus(), q, delta, emp_norm};
  BoundReport dev = confusion_deviation_bound(in);
  BoundReport norm = confusion_norm_bound(in);
  BoundReport bayes = norm;
  bayes.kind = BoundKind::bayes_factor;
  if (norm.value) {
    bayes.value = bayes_norm_from_gibbs(*norm.value, q);
    bayes.exceeds_norm_scale = *bayes.value > std::sqrt(static_cast<double>(q));
  }
  return BoundAnalysis{q,
                       problem.sample.size(),
                       {counts.counts().begin(), counts.counts().end()},
                       counts.m_minus(),
                       kl,
                       sigma_squared(counts),
                       std::move(emp),
                       emp_norm,
                       std::move(dev),
                       std::move(norm),
                       std::move(bayes)};
}

BinaryAnalysis analyze_binary_bound(const BoundProblem& problem, double delta) {
  if (problem.sample.num_classes() != 2) {
    throw DomainError("binary-bound needs exactly 2 classes, found " +
                      std::to_string(problem.sample.num_classes()) + "; use 'bound' instead");
  }
  const std::size_t m = problem.sample.size();
  const double risk = std::min(1.0, gibbs_empirical_risk(problem.table, problem.posterior, problem.sample));
  const double kl = kl_divergence(problem.posterior, problem.prior);
  BinaryAnalysis a{m, risk, kl, xi(m), std::nullopt, binary_pacbayes_bound(risk, kl, m, delta),
                   std::nullopt};
  if (!std::isinf(kl)) a.kl_budget = (kl + log_xi(m) - std::log(delta)) / static_cast<double>(m);
  if (a.gibbs.value) a.bayes_bound = 2.0 * *a.gibbs.value;
  return a;
}

Json to_json(const SquareMatrix& m) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < m.order(); ++r) {
    Json row = Json::array();
    for (double v : m.row(r)) row.push_back(v);
    rows.push_back(std::move(row));
  }
  return rows;
}

SquareMatrix matrix_from_json(const Json& j) {
  if (!j.is_array()) throw DataError("matrix must be a JSON array of rows");
  std::vector<std::vector<double>> rows;
  for (const auto& r : j) {
    if (!r.is_array()) throw DataError("matrix row must be a JSON array");
    std::vector<double> row;
    for (const auto& v : r) {
      if (!v.is_number()) throw DataError("matrix entries must be numbers");
      row.push_back(v.get<double>());
    }
    rows.push_back(std::move(row));
  }
  return SquareMatrix::from_rows(rows);
}

Json to_json(const BoundReport& r) {
  Json j;
  j["kind"] = to_string(r.kind);
  j["value"] = optional_real(r.value);
  j["vacuous"] = r.vacuous();
  j["reason"] = r.vacuous_reason;
  j["exceeds_norm_scale"] = r.exceeds_norm_scale;
  j["components"] = Json{{"kl_div", kl_json(r.kl_div)},
                         {"m_minus", r.m_minus},
                         {"num_classes", r.num_classes},
                         {"delta", r.delta},
                         {"sigma_sq_bound", r.sigma_sq_bound}};
  return j;
}

Json to_json(const RunManifest& m) {
  Json inputs = Json::object();
  for (const auto& [role, path] : m.inputs) inputs[role] = path;
  Json params = Json::object();
  if (m.num_classes) params["num_classes"] = *m.num_classes;
  if (m.delta) params["delta"] = *m.delta;
  if (m.seed) params["seed"] = *m.seed;
  return Json{{"command", m.command},
              {"inputs", std::move(inputs)},
              {"parameters", std::move(params)},
              {"tool_version", m.tool_version},
              {"timestamp", m.timestamp}};
}

Json to_json(const SimulationConfig& c) {
  return Json{{"harness", to_string(c.harness)},
              {"num_classes", c.num_classes},
              {"support_size", c.support_size},
              {"num_classifiers", c.num_classifiers},
              {"per_class_size", c.class_sizes()},
              {"sample_size", c.sample_size},
              {"trials", c.trials},
              {"delta", c.delta},
              {"seed", c.seed},
              {"posterior_mode", to_string(c.posterior_mode)},
              {"prior_mode", to_string(c.prior_mode)},
              {"sampling_model", to_string(c.sampling)},
              {"class_floor", c.class_floor},
              {"error_rate", c.error_rate},
              {"posterior_temperature", c.posterior_temperature},
              {"classifier_index", c.classifier_index},
              {"epsilon_grid", c.epsilon_grid()},
              {"rng", kRngName}};
}

Json bound_report_json(const BoundAnalysis& a, const RunManifest& manifest) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["manifest"] = to_json(manifest);
  j["report"] = "confusion-bound";
  j["orientation"] = "true-class-rows";
  j["num_classes"] = a.num_classes;
  j["sample_size"] = a.sample_size;
  j["class_counts"] = a.class_counts;
  j["m_minus"] = a.m_minus;
  j["delta"] = a.deviation.delta;
  j["kl"] = kl_json(a.kl);
  j["kl_infinite"] = std::isinf(a.kl);
  j["sigma_sq"] = Json{{"exact", a.sigma_sq.exact}, {"upper", a.sigma_sq.upper}};
  j["empirical_gibbs_confusion"] = to_json(a.empirical_gibbs.matrix());
  j["empirical_norm"] = a.empirical_norm;
  j["deviation_bound"] = to_json(a.deviation);
  j["norm_bound"] = to_json(a.norm);
  j["bayes_norm_bound"] = to_json(a.bayes);
  j["bound"] = optional_real(a.norm.value);
  j["vacuous"] = a.norm.vacuous();
  j["reason"] = a.norm.vacuous_reason;
  return j;
}

Json binary_report_json(const BinaryAnalysis& a, const RunManifest& manifest) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["manifest"] = to_json(manifest);
  j["report"] = "binary-bound";
  j["sample_size"] = a.sample_size;
  j["delta"] = a.gibbs.delta;
  j["empirical_gibbs_risk"] = a.empirical_risk;
  j["kl"] = kl_json(a.kl);
  j["kl_infinite"] = std::isinf(a.kl);
  j["xi"] = a.xi;
  j["kl_budget"] = optional_real(a.kl_budget);
  j["gibbs_risk_bound"] = to_json(a.gibbs);
  j["bayes_risk_bound"] = optional_real(a.bayes_bound);
  j["bound"] = optional_real(a.gibbs.value);
  j["vacuous"] = a.gibbs.vacuous();
  j["reason"] = a.gibbs.vacuous_reason;
  return j;
}

Json validation_report_json(const ValidationReport& r, const SimulationConfig& config,
                            const RunManifest& manifest) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["manifest"] = to_json(manifest);
  j["report"] = "validation";
  j["harness"] = to_string(r.harness);
  j["config"] = to_json(config);
  j["trials"] = r.trials;
  j["violations"] = r.violations;
  j["violation_rate"] = r.violation_rate;
  j["verdict"] = to_string(r.verdict);
  j["warnings"] = r.warnings;
  Json summary = Json::object();
  for (const auto& f : r.summary) summary[f.name] = optional_real(f.value);
  j["summary"] = std::move(summary);
  if (r.harness == Harness::concentration) {
    j["monte_carlo_slack"] = "3 * sqrt(p_hat * (1 - p_hat) / trials)";
    Json grid = Json::array();
    for (const auto& c : r.tail_checks) {
      grid.push_back(Json{{"epsilon", c.epsilon},
                          {"tail_frequency", c.tail_frequency},
                          {"bound", c.bound},
                          {"slack", c.slack},
                          {"satisfied", c.satisfied}});
    }
    j["tail_checks"] = std::move(grid);
  }
  Json records = Json::array();
  for (const auto& rec : r.records) {
    Json row{{"trial", rec.trial}, {"violated", rec.violated}};
    for (const auto& f : rec.fields) row[f.name] = optional_real(f.value);
    records.push_back(std::move(row));
  }
  j["records"] = std::move(records);
  return j;
}

namespace {

void flatten(std::ostream& out, const std::string& prefix, const Json& j) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten(out, prefix.empty() ? k : prefix + "." + k, v);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(out, prefix + "." + std::to_string(i), j[i]);
  } else if (j.is_number_float()) {
    out << prefix << ',' << format_real(j.get<double>()) << '\n';
  } else if (j.is_string()) {
    out << prefix << ',' << j.get<std::string>() << '\n';
  } else {
    out << prefix << ',' << j.dump() << '\n';
  }
}

}  // namespace

void write_flat_csv(std::ostream& out, const Json& j) {
  out << "key,value\n";
  flatten(out, "", j);
}

void write_trials_csv(std::ostream& out, const ValidationReport& r) {
  out << "trial,violated";
  if (!r.records.empty())
    for (const auto& f : r.records.front().fields) out << ',' << f.name;
  out << '\n';
  for (const auto& rec : r.records) {
    out << rec.trial << ',' << (rec.violated ? 1 : 0);
    for (const auto& f : rec.fields) {
      out << ',';
      if (f.value && std::isfinite(*f.value)) out << format_real(*f.value);
    }
    out << '\n';
  }
}

}  // namespace pacconf
