#include "pacconf/cli.hpp"

#include <fstream>
#include <optional>
#include <ostream>
#include <string>

#include "CLI11.hpp"
#include "pacconf/error.hpp"
#include "pacconf/io.hpp"
#include "pacconf/report.hpp"

namespace pacconf {

namespace {

struct BoundArgs {
  std::string sample;
  std::string predictions;
  std::string prior;
  std::string posterior;
  double delta = 0.05;
  std::optional<std::size_t> classes;
  std::string out;
  std::string format = "json";
};

struct ValidateArgs {
  std::string config;
  std::optional<std::string> harness;
  std::optional<std::size_t> trials;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::string out;
  std::string csv;
  std::string format = "json";
};

class OutputError : public Error {
 public:
  using Error::Error;
};

void add_bound_options(CLI::App& cmd, BoundArgs& a) {
  cmd.add_option("--sample", a.sample, "CSV of example_id,label")->required();
  cmd.add_option("--predictions", a.predictions, "CSV with header example_id,f1,...,fn")->required();
  cmd.add_option("--prior", a.prior, "CSV of classifier_id,weight")->required();
  cmd.add_option("--posterior", a.posterior, "CSV of classifier_id,weight")->required();
  cmd.add_option("--delta", a.delta, "confidence parameter in (0, 1]");
  cmd.add_option("--classes", a.classes, "number of classes (default: largest sample label)");
  cmd.add_option("--out", a.out, "write the report here instead of stdout");
  cmd.add_option("--format", a.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
}

// Writes to `path`, or to `out` when the path is empty.
template <typename Fn>
void emit(const std::string& path, std::ostream& out, Fn&& write) {
  if (path.empty()) {
    write(out);
    return;
  }
  std::ofstream f(path);
  if (!f) throw OutputError("cannot open '" + path + "' for writing");
  write(f);
  if (!f) throw OutputError("failed writing '" + path + "'");
}

void emit_json(const std::string& path, const std::string& format, std::ostream& out,
               const Json& j) {
  emit(path, out, [&](std::ostream& os) {
    if (format == "csv") {
      write_flat_csv(os, j);
    } else {
      os << j.dump(2) << '\n';
    }
  });
}

RunManifest bound_manifest(const char* command, const BoundArgs& a, std::size_t q) {
  RunManifest m;
  m.command = command;
  m.inputs = {{"sample", a.sample}, {"predictions", a.predictions}, {"prior", a.prior},
              {"posterior", a.posterior}};
  m.num_classes = q;
  m.delta = a.delta;
  m.timestamp = utc_timestamp();
  return m;
}

BoundProblem load_problem(const BoundArgs& a) {
  if (!(a.delta > 0.0 && a.delta <= 1.0)) {
    throw DeltaRangeError("delta must lie in (0, 1], got " + std::to_string(a.delta));
  }
  return assemble_bound_problem(read_sample_csv(a.sample), read_predictions_csv(a.predictions),
                                read_weights_csv(a.prior), read_weights_csv(a.posterior), a.classes);
}

ExitCode cmd_bound(const BoundArgs& a, std::ostream& out) {
  const BoundProblem problem = load_problem(a);
  const BoundAnalysis analysis = analyze_bound(problem, a.delta);
  emit_json(a.out, a.format, out,
            bound_report_json(analysis, bound_manifest("bound", a, analysis.num_classes)));
  return ExitCode::ok;
}

ExitCode cmd_binary_bound(const BoundArgs& a, std::ostream& out) {
  const BoundProblem problem = load_problem(a);
  const BinaryAnalysis analysis = analyze_binary_bound(problem, a.delta);
  emit_json(a.out, a.format, out, binary_report_json(analysis, bound_manifest("binary-bound", a, 2)));
  return ExitCode::ok;
}

ExitCode cmd_validate(const ValidateArgs& a, std::ostream& out, std::ostream& err) {
  SimulationConfig config = read_config(a.config);
  if (a.harness) config.harness = parse_harness(*a.harness);
  if (a.trials) config.trials = *a.trials;
  if (a.seed) config.seed = *a.seed;
  if (a.threads) config.threads = *a.threads;

  const ValidationReport report = run_validation(config);

  RunManifest m;
  m.command = "validate";
  m.inputs = {{"config", a.config}};
  m.num_classes = config.num_classes;
  m.delta = config.delta;
  m.seed = config.seed;
  m.timestamp = utc_timestamp();
  const Json j = validation_report_json(report, config, m);

  if (a.format == "csv") {
    emit(a.out, out, [&](std::ostream& os) { write_trials_csv(os, report); });
  } else {
    emit_json(a.out, "json", out, j);
  }
  if (!a.csv.empty()) emit(a.csv, out, [&](std::ostream& os) { write_trials_csv(os, report); });

  for (const auto& w : report.warnings) err << "warning: " << w << '\n';
  err << to_string(report.harness) << ": " << to_string(report.verdict) << " ("
      << report.violations << " violations / " << report.trials << " trials)\n";
  return report.verdict == Verdict::fail ? ExitCode::validation_failed : ExitCode::ok;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"PAC-Bayes confusion-matrix bounds for classifier ensembles", "pacconf"};
  app.require_subcommand(1);

  BoundArgs bound_args;
  auto* bound = app.add_subcommand("bound", "confusion-matrix bound for the Gibbs and Bayes classifiers");
  add_bound_options(*bound, bound_args);

  BoundArgs binary_args;
  auto* binary = app.add_subcommand("binary-bound", "kl bound on the binary Gibbs risk");
  add_bound_options(*binary, binary_args);

  ValidateArgs val;
  auto* validate = app.add_subcommand("validate", "run a seeded validation harness");
  validate->add_option("config", val.config, "key = value config file")->required();
  validate->add_option("--harness", val.harness, "theorem2 | theorem1-binary | concentration | prop1");
  validate->add_option("--trials", val.trials, "override the number of trials");
  validate->add_option("--seed", val.seed, "override the seed");
  validate->add_option("--threads", val.threads, "worker threads");
  validate->add_option("--out", val.out, "write the report here instead of stdout");
  validate->add_option("--csv", val.csv, "also write per-trial records as CSV");
  validate->add_option("--format", val.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return static_cast<int>(ExitCode::ok);
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return static_cast<int>(ExitCode::ok);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::usage);
  }

  auto fail = [&](ExitCode code, const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return static_cast<int>(code);
  };
  try {
    ExitCode code = ExitCode::ok;
    if (*bound) code = cmd_bound(bound_args, out);
    if (*binary) code = cmd_binary_bound(binary_args, out);
    if (*validate) code = cmd_validate(val, out, err);
    return static_cast<int>(code);
  } catch (const ParseError& e) {
    return fail(ExitCode::parse, e);
  } catch (const InvalidSampleError& e) {
    return fail(ExitCode::empty_class, e);
  } catch (const DataError& e) {
    return fail(ExitCode::dimension, e);
  } catch (const ConfigError& e) {
    return fail(ExitCode::config, e);
  } catch (const DeltaRangeError& e) {
    return fail(ExitCode::delta_range, e);
  } catch (const DomainError& e) {
    return fail(ExitCode::domain, e);
  } catch (const NumericalError& e) {
    return fail(ExitCode::numerical, e);
  } catch (const OutputError& e) {
    return fail(ExitCode::io, e);
  }
}

}  // namespace pacconf
