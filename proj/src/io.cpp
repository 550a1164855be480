#include "pacconf/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <set>
#include <string_view>

#include "pacconf/error.hpp"

namespace pacconf {

namespace {

struct Cell {
  std::string text;
  std::size_t column;  // 1-based
};

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<Cell> split_csv_line(std::string_view line) {
  std::vector<Cell> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    const auto raw = line.substr(start, comma == std::string_view::npos ? line.npos : comma - start);
    const auto lead = raw.find_first_not_of(" \t");
    cells.push_back(Cell{std::string(trim(raw)), start + 1 + (lead == raw.npos ? 0 : lead)});
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

bool is_blank_or_comment(std::string_view line) {
  const auto t = trim(line);
  return t.empty() || t.front() == '#';
}

std::optional<long> to_long(const std::string& s) {
  long v = 0;
  const auto* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || p != end || s.empty()) return std::nullopt;
  return v;
}

std::optional<double> to_double(const std::string& s) {
  double v = 0;
  const auto* begin = s.data();
  const auto* end = s.data() + s.size();
  if (begin != end && *begin == '+') ++begin;
  auto [p, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || p != end || s.empty()) return std::nullopt;
  return v;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, 0, "cannot open file");
  return in;
}

// Reads data lines as (line number, cells); blank and comment lines skipped.
std::vector<std::pair<std::size_t, std::vector<Cell>>> read_rows(std::istream& in) {
  std::vector<std::pair<std::size_t, std::vector<Cell>>> rows;
  std::string line;
  std::size_t no = 0;
  while (std::getline(in, line)) {
    ++no;
    if (is_blank_or_comment(line)) continue;
    rows.emplace_back(no, split_csv_line(line));
  }
  return rows;
}

void require_cells(const std::string& source, std::size_t line, const std::vector<Cell>& cells,
                   std::size_t n) {
  if (cells.size() != n) {
    throw ParseError(source, line, 1,
                     "expected " + std::to_string(n) + " fields, found " + std::to_string(cells.size()));
  }
  for (const auto& c : cells)
    if (c.text.empty()) throw ParseError(source, line, c.column, "empty field");
}

long parse_label(const std::string& source, std::size_t line, const Cell& c) {
  const auto v = to_long(c.text);
  if (!v) throw ParseError(source, line, c.column, "expected an integer class label, got '" + c.text + "'");
  if (*v < 1) throw ParseError(source, line, c.column, "class labels start at 1, got " + c.text);
  return *v;
}

}  // namespace

SampleRows parse_sample_csv(std::istream& in, const std::string& source) {
  SampleRows out;
  auto rows = read_rows(in);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto& [line, cells] = rows[r];
    require_cells(source, line, cells, 2);
    if (r == 0 && !to_long(cells[1].text)) continue;  // header
    out.ids.push_back(cells[0].text);
    out.labels.push_back(parse_label(source, line, cells[1]));
  }
  if (out.ids.empty()) throw ParseError(source, 0, 0, "no sample rows");
  return out;
}

PredictionRows parse_predictions_csv(std::istream& in, const std::string& source) {
  PredictionRows out;
  auto rows = read_rows(in);
  if (rows.empty()) throw ParseError(source, 0, 0, "missing header line");
  const auto& [hline, header] = rows.front();
  if (header.size() < 2) {
    throw ParseError(source, hline, 1, "header needs example_id and at least one classifier column");
  }
  for (std::size_t k = 1; k < header.size(); ++k) {
    if (header[k].text.empty()) throw ParseError(source, hline, header[k].column, "empty classifier name");
    out.classifier_names.push_back(header[k].text);
  }
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& [line, cells] = rows[r];
    require_cells(source, line, cells, header.size());
    out.ids.push_back(cells[0].text);
    std::vector<long> labels;
    labels.reserve(cells.size() - 1);
    for (std::size_t k = 1; k < cells.size(); ++k) labels.push_back(parse_label(source, line, cells[k]));
    out.labels.push_back(std::move(labels));
  }
  if (out.ids.empty()) throw ParseError(source, 0, 0, "no prediction rows");
  return out;
}

WeightRows parse_weights_csv(std::istream& in, const std::string& source) {
  WeightRows out;
  auto rows = read_rows(in);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto& [line, cells] = rows[r];
    require_cells(source, line, cells, 2);
    const auto w = to_double(cells[1].text);
    if (!w) {
      if (r == 0) continue;  // header
      throw ParseError(source, line, cells[1].column, "expected a weight, got '" + cells[1].text + "'");
    }
    if (!(*w >= 0.0) || !std::isfinite(*w)) {
      throw ParseError(source, line, cells[1].column, "weights must be finite and >= 0");
    }
    out.names.push_back(cells[0].text);
    out.weights.push_back(*w);
  }
  if (out.names.empty()) throw ParseError(source, 0, 0, "no weight rows");
  return out;
}

SampleRows read_sample_csv(const std::string& path) {
  auto in = open_input(path);
  return parse_sample_csv(in, path);
}

PredictionRows read_predictions_csv(const std::string& path) {
  auto in = open_input(path);
  return parse_predictions_csv(in, path);
}

WeightRows read_weights_csv(const std::string& path) {
  auto in = open_input(path);
  return parse_weights_csv(in, path);
}

namespace {

WeightDistribution align_weights(const WeightRows& w, const std::vector<std::string>& names,
                                 const char* what) {
  if (w.names.size() != names.size()) {
    throw DimensionError(std::string(what) + " lists " + std::to_string(w.names.size()) +
                         " classifiers, predictions have " + std::to_string(names.size()));
  }
  std::map<std::string, double> by_name;
  for (std::size_t k = 0; k < w.names.size(); ++k) {
    if (!by_name.emplace(w.names[k], w.weights[k]).second) {
      throw DimensionError(std::string(what) + " lists classifier '" + w.names[k] + "' twice");
    }
  }
  std::vector<double> aligned;
  aligned.reserve(names.size());
  for (const auto& n : names) {
    auto it = by_name.find(n);
    if (it == by_name.end()) {
      throw DimensionError(std::string(what) + " has no weight for classifier '" + n + "'");
    }
    aligned.push_back(it->second);
  }
  try {
    return WeightDistribution(std::move(aligned));
  } catch (const DataError& e) {
    throw DataError(std::string(what) + ": " + e.what());
  }
}

}  // namespace

BoundProblem assemble_bound_problem(const SampleRows& sample, const PredictionRows& preds,
                                    const WeightRows& prior, const WeightRows& posterior,
                                    std::optional<std::size_t> num_classes) {
  const std::size_t q = num_classes.value_or(
      static_cast<std::size_t>(*std::max_element(sample.labels.begin(), sample.labels.end())));

  std::vector<Example> examples;
  examples.reserve(sample.ids.size());
  std::map<std::string, std::size_t> row_of;
  for (std::size_t i = 0; i < preds.ids.size(); ++i) {
    if (!row_of.emplace(preds.ids[i], i).second) {
      throw DimensionError("predictions list example '" + preds.ids[i] + "' twice");
    }
  }
  if (preds.ids.size() != sample.ids.size()) {
    throw DimensionError("sample has " + std::to_string(sample.ids.size()) +
                         " examples, predictions have " + std::to_string(preds.ids.size()));
  }
  std::set<std::string> seen;
  const std::size_t n = preds.classifier_names.size();
  std::vector<std::vector<Label>> columns(n);
  for (std::size_t i = 0; i < sample.ids.size(); ++i) {
    const auto& id = sample.ids[i];
    if (!seen.insert(id).second) throw DimensionError("sample lists example '" + id + "' twice");
    auto it = row_of.find(id);
    if (it == row_of.end()) throw DimensionError("no predictions for example '" + id + "'");
    if (static_cast<std::size_t>(sample.labels[i]) > q) {
      throw DataError("example '" + id + "' has label " + std::to_string(sample.labels[i]) +
                      " outside 1.." + std::to_string(q));
    }
    examples.push_back(Example{id, static_cast<Label>(sample.labels[i] - 1)});
    const auto& row = preds.labels[it->second];
    for (std::size_t j = 0; j < n; ++j) {
      if (static_cast<std::size_t>(row[j]) > q) {
        throw DataError("classifier '" + preds.classifier_names[j] + "' predicts " +
                        std::to_string(row[j]) + " for example '" + id + "', outside 1.." +
                        std::to_string(q));
      }
      columns[j].push_back(static_cast<Label>(row[j] - 1));
    }
  }

  std::vector<PredictionVector> family;
  family.reserve(n);
  for (auto& c : columns) family.emplace_back(q, std::move(c));

  return BoundProblem{LabeledSample(q, std::move(examples)), PredictionTable(std::move(family)),
                      align_weights(prior, preds.classifier_names, "prior"),
                      align_weights(posterior, preds.classifier_names, "posterior"),
                      preds.classifier_names};
}

namespace {

template <typename T>
T parse_unsigned(const std::string& source, std::size_t line, std::size_t col, const std::string& v) {
  const auto x = to_long(v);
  if (!x || *x < 0) throw ParseError(source, line, col, "expected a nonnegative integer, got '" + v + "'");
  return static_cast<T>(*x);
}

double parse_real(const std::string& source, std::size_t line, std::size_t col, const std::string& v) {
  const auto x = to_double(v);
  if (!x || !std::isfinite(*x)) throw ParseError(source, line, col, "expected a number, got '" + v + "'");
  return *x;
}

}  // namespace

SimulationConfig parse_config(std::istream& in, const std::string& source) {
  SimulationConfig c;
  std::string raw;
  std::size_t no = 0;
  std::set<std::string> seen;
  while (std::getline(in, raw)) {
    ++no;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != line.npos) line = line.substr(0, hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == line.npos) throw ParseError(source, no, 1, "expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    const std::size_t vcol = line.find_first_not_of(" \t", eq + 1) + 1;
    if (key.empty()) throw ParseError(source, no, 1, "missing key");
    if (value.empty()) throw ParseError(source, no, eq + 2, "missing value for '" + key + "'");
    if (!seen.insert(key).second) throw ParseError(source, no, 1, "duplicate key '" + key + "'");

    auto enum_value = [&](auto parse) {
      try {
        return parse(value);
      } catch (const ConfigError& e) {
        throw ParseError(source, no, vcol, e.what());
      }
    };

    if (key == "harness") {
      c.harness = enum_value(parse_harness);
    } else if (key == "num_classes") {
      c.num_classes = parse_unsigned<std::size_t>(source, no, vcol, value);
    } else if (key == "support_size") {
      c.support_size = parse_unsigned<std::size_t>(source, no, vcol, value);
    } else if (key == "num_classifiers") {
      c.num_classifiers = parse_unsigned<std::size_t>(source, no, vcol, value);
    } else if (key == "per_class_size") {
      c.per_class_sizes.clear();
      for (const auto& cell : split_csv_line(value)) {
        c.per_class_sizes.push_back(
            parse_unsigned<std::size_t>(source, no, vcol + cell.column - 1, cell.text));
      }
    } else if (key == "sample_size") {
      c.sample_size = parse_unsigned<std::size_t>(source, no, vcol, value);
    } else if (key == "trials") {
      c.trials = parse_unsigned<std::size_t>(source, no, vcol, value);
    } else if (key == "delta") {
      c.delta = parse_real(source, no, vcol, value);
    } else if (key == "seed") {
      std::uint64_t s = 0;
      auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), s);
      if (ec != std::errc() || p != value.data() + value.size()) {
        throw ParseError(source, no, vcol, "expected an unsigned 64-bit seed, got '" + value + "'");
      }
      c.seed = s;
    } else if (key == "posterior_mode") {
      c.posterior_mode = enum_value(parse_posterior_mode);
    } else if (key == "prior_mode") {
      c.prior_mode = enum_value(parse_prior_mode);
    } else if (key == "sampling_model") {
      c.sampling = enum_value(parse_sampling_model);
    } else if (key == "class_floor") {
      c.class_floor = parse_real(source, no, vcol, value);
    } else if (key == "error_rate") {
      c.error_rate = parse_real(source, no, vcol, value);
    } else if (key == "posterior_temperature") {
      c.posterior_temperature = parse_real(source, no, vcol, value);
    } else if (key == "classifier_index") {
      c.classifier_index = parse_unsigned<std::size_t>(source, no, vcol, value);
    } else if (key == "epsilon_min") {
      c.epsilon_min = parse_real(source, no, vcol, value);
    } else if (key == "epsilon_max") {
      c.epsilon_max = parse_real(source, no, vcol, value);
    } else if (key == "epsilon_count") {
      c.epsilon_count = parse_unsigned<std::size_t>(source, no, vcol, value);
    } else if (key == "threads") {
      c.threads = parse_unsigned<unsigned>(source, no, vcol, value);
    } else if (key == "rng") {
      if (value != kRngName) {
        throw ParseError(source, no, vcol, "unsupported rng '" + value + "' (only " + kRngName + ")");
      }
    } else {
      throw ParseError(source, no, 1, "unknown key '" + key + "'");
    }
  }
  return c;
}

SimulationConfig read_config(const std::string& path) {
  auto in = open_input(path);
  return parse_config(in, path);
}

}  // namespace pacconf
