#include <sstream>

#include "doctest.h"
#include "pacconf/error.hpp"
#include "pacconf/io.hpp"

using namespace pacconf;

namespace {

template <typename F>
ParseError parse_error_of(F&& f) {
  try {
    f();
  } catch (const ParseError& e) {
    return e;
  }
  FAIL("no ParseError thrown");
  return ParseError("", 0, 0, "");
}

SampleRows sample_of(const std::string& text) {
  std::istringstream in(text);
  return parse_sample_csv(in, "sample.csv");
}

PredictionRows preds_of(const std::string& text) {
  std::istringstream in(text);
  return parse_predictions_csv(in, "preds.csv");
}

WeightRows weights_of(const std::string& text) {
  std::istringstream in(text);
  return parse_weights_csv(in, "w.csv");
}

SimulationConfig config_of(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in, "run.cfg");
}

}  // namespace

TEST_CASE("sample csv") {
  const auto s = sample_of("example_id,label\n# comment\n\na,1\nb,2\nc,3\n");
  CHECK(s.ids == std::vector<std::string>{"a", "b", "c"});
  CHECK(s.labels == std::vector<long>{1, 2, 3});
  CHECK(sample_of("a,1\nb,2\n").ids.size() == 2);

  const auto bad = parse_error_of([] { sample_of("example_id,label\na,1\nb,x\n"); });
  CHECK(bad.line() == 3);
  CHECK(bad.column() == 3);
  CHECK(bad.file() == "sample.csv");
  CHECK(std::string(bad.what()).starts_with("sample.csv:3:3:"));

  const auto zero = parse_error_of([] { sample_of("a,1\nb,0\n"); });
  CHECK(zero.line() == 2);
  const auto fields = parse_error_of([] { sample_of("a,1\nb,2,3\n"); });
  CHECK(fields.line() == 2);
  CHECK_THROWS_AS(sample_of("example_id,label\n"), ParseError);
  CHECK_THROWS_AS(read_sample_csv("/nonexistent/sample.csv"), ParseError);
}

TEST_CASE("prediction csv") {
  const auto p = preds_of("example_id,f1,f2\na,1,2\nb,2,2\n");
  CHECK(p.classifier_names == std::vector<std::string>{"f1", "f2"});
  CHECK(p.ids.size() == 2);
  CHECK(p.labels[0] == std::vector<long>{1, 2});
  const auto short_row = parse_error_of([] { preds_of("example_id,f1,f2\na,1\n"); });
  CHECK(short_row.line() == 2);
  const auto bad = parse_error_of([] { preds_of("example_id,f1,f2\na,1,-2\n"); });
  CHECK(bad.line() == 2);
  CHECK(bad.column() == 5);
  CHECK_THROWS_AS(preds_of("example_id\na\n"), ParseError);
}

TEST_CASE("weight csv") {
  const auto w = weights_of("classifier_id,weight\nf1,0.25\nf2,0.75\n");
  CHECK(w.names == std::vector<std::string>{"f1", "f2"});
  CHECK(w.weights == std::vector<double>{0.25, 0.75});
  CHECK_THROWS_AS(weights_of("f1,abc\n"), ParseError);
  CHECK_THROWS_AS(weights_of("f1,-0.5\nf2,1.5\n"), ParseError);
  CHECK_THROWS_AS(weights_of("f1,nan\n"), ParseError);
}

TEST_CASE("bound problem assembly") {
  const auto s = sample_of("c,3\na,1\nb,2\nd,1\n");
  const auto p = preds_of("example_id,f1,f2\na,1,2\nb,2,2\nc,3,1\nd,1,1\n");
  const auto prior = weights_of("f2,0.5\nf1,0.5\n");
  const auto post = weights_of("f1,0.9\nf2,0.1\n");
  const auto prob = assemble_bound_problem(s, p, prior, post);
  CHECK(prob.sample.num_classes() == 3);
  CHECK(prob.sample.size() == 4);
  CHECK(prob.sample[0].id == "c");
  // Rows follow sample order; labels move to 0-based.
  CHECK(prob.table(0, 0) == 2);
  CHECK(prob.table(1, 0) == 0);
  CHECK(prob.table(1, 1) == 1);
  CHECK(prob.posterior[0] == 0.9);
  CHECK(prob.prior[1] == 0.5);
  // Declaring 4 classes leaves class 4 empty.
  CHECK_THROWS_AS(assemble_bound_problem(s, p, prior, post, 4), InvalidSampleError);

  const auto missing = sample_of("a,1\nz,2\nc,3\n");
  CHECK_THROWS_AS(assemble_bound_problem(missing, p, prior, post), DimensionError);
  const auto dup = preds_of("example_id,f1,f2\na,1,2\na,2,2\nb,2,2\nc,3,1\nd,1,1\n");
  CHECK_THROWS_AS(assemble_bound_problem(s, dup, prior, post), DimensionError);
  CHECK_THROWS_AS(assemble_bound_problem(s, p, weights_of("f1,1\n"), post), DimensionError);
  CHECK_THROWS_AS(assemble_bound_problem(s, p, weights_of("f1,0.5\nf3,0.5\n"), post), DimensionError);
  CHECK_THROWS_AS(assemble_bound_problem(s, p, weights_of("f1,0.6\nf2,0.6\n"), post), DataError);
  // A declared class with no examples.
  CHECK_THROWS_AS(assemble_bound_problem(sample_of("a,1\nb,3\n"),
                                         preds_of("example_id,f1,f2\na,1,1\nb,3,3\n"), prior, post),
                  InvalidSampleError);
  // Predicted label beyond Q.
  const auto big = preds_of("example_id,f1,f2\na,1,4\nb,2,2\nc,3,1\nd,1,1\n");
  CHECK_THROWS_AS(assemble_bound_problem(s, big, prior, post), DataError);
}

TEST_CASE("config parsing") {
  const auto c = config_of(
      "# run\n"
      "harness = concentration\n"
      "num_classes = 3   # classes\n"
      "per_class_size = 10, 20, 30\n"
      "trials=50\n"
      "delta = 0.1\n"
      "seed = 18446744073709551615\n"
      "posterior_mode = point-mass\n"
      "rng = splitmix64\n");
  CHECK(c.harness == Harness::concentration);
  CHECK(c.num_classes == 3);
  CHECK(c.per_class_sizes == std::vector<std::size_t>{10, 20, 30});
  CHECK(c.trials == 50);
  CHECK(c.delta == 0.1);
  CHECK(c.seed == 18446744073709551615ULL);
  CHECK(c.posterior_mode == PosteriorMode::point_mass);
  CHECK(c.support_size == SimulationConfig{}.support_size);

  const auto unknown = parse_error_of([] { config_of("trials = 5\nfoo = 1\n"); });
  CHECK(unknown.line() == 2);
  CHECK(unknown.column() == 1);
  const auto bad_value = parse_error_of([] { config_of("trials = many\n"); });
  CHECK(bad_value.line() == 1);
  CHECK(bad_value.column() == 10);
  CHECK_THROWS_AS(config_of("trials = 5\ntrials = 6\n"), ParseError);
  CHECK_THROWS_AS(config_of("harness = theorem9\n"), ParseError);
  CHECK_THROWS_AS(config_of("rng = mt19937\n"), ParseError);
  CHECK_THROWS_AS(config_of("just some text\n"), ParseError);
  CHECK_THROWS_AS(config_of("delta =\n"), ParseError);
  CHECK_THROWS_AS(config_of("seed = -1\n"), ParseError);
  CHECK_THROWS_AS(read_config("/nonexistent/run.cfg"), ParseError);
}
