/*
 * Copyright 2026 The WBA Toolkit Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "wba/analysis.hpp"
#include "wba/confusion.hpp"
#include "wba/error.hpp"
#include "wba/metrics.hpp"
#include "wba/weights.hpp"

namespace wba {

namespace detail {

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open '" + path.string() + "' for reading");
  std::ostringstream out;
  out << in.rdbuf();
  if (in.bad()) throw io_error("failed while reading '" + path.string() + "'");
  return std::move(out).str();
}

inline std::string trim(std::string_view s) {
  std::size_t begin = 0;
  std::size_t end = s.size();
  while (begin < end && (s[begin] == ' ' || s[begin] == '\t' || s[begin] == '\r')) ++begin;
  while (end > begin && (s[end - 1] == ' ' || s[end - 1] == '\t' || s[end - 1] == '\r')) --end;
  return std::string(s.substr(begin, end - begin));
}

struct CsvRow {
  std::size_t number = 0;  // 1-based, header included
  std::vector<std::string> fields;
};

/// Minimal CSV reader: comma separator, double-quote quoting with ""
/// escapes, LF or CRLF row ends, UTF-8 passed through. Fully empty rows
/// (e.g. a trailing newline) are dropped.
inline std::vector<CsvRow> parse_csv(std::string_view text) {
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
  std::vector<CsvRow> rows;
  std::vector<std::string> fields;
  std::string field;
  bool in_quotes = false;
  bool row_has_content = false;
  std::size_t row_number = 1;

  auto end_field = [&] {
    fields.push_back(std::move(field));
    field.clear();
  };
  auto end_row = [&] {
    end_field();
    if (row_has_content || fields.size() > 1) {
      rows.push_back({row_number, std::move(fields)});
    }
    fields.clear();
    row_has_content = false;
    ++row_number;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        in_quotes = true;
        row_has_content = true;
        break;
      case ',':
        end_field();
        row_has_content = true;
        break;
      case '\r':
        break;  // handled with the following '\n'; stray CRs are trimmed later
      case '\n':
        end_row();
        break;
      default:
        field += c;
        row_has_content = true;
        break;
    }
  }
  if (in_quotes) throw validation_error("row " + std::to_string(row_number) + ": unterminated quote");
  if (row_has_content || !field.empty() || !fields.empty()) end_row();
  return rows;
}

inline std::string csv_escape(const std::string& value) {
  if (value.find_first_of(",\"\r\n") == std::string::npos) return value;
  std::string out = "\"";
  for (char c : value) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

inline std::int64_t parse_count(const std::string& field, std::size_t row, std::size_t column) {
  const std::string text = trim(field);
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || value < 0) {
    throw validation_error("row " + std::to_string(row) + ", column " + std::to_string(column) +
                           ": '" + text + "' is not a non-negative integer");
  }
  return value;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Predictions files: CSV with header `true,predicted`, one labeled
// prediction per row. Labels are opaque strings, trimmed and case-preserved.
// ---------------------------------------------------------------------------

struct LabelPair {
  std::string truth;
  std::string predicted;

  bool operator==(const LabelPair&) const = default;
};

struct PredictionsData {
  std::vector<LabelPair> rows;
  ConfusionMatrix matrix;  // over the sorted distinct labels
};

namespace detail {

inline PredictionsData predictions_from_rows(const std::vector<CsvRow>& rows) {
  if (rows.empty()) throw validation_error("empty file: expected header 'true,predicted'");
  const auto& header = rows.front();
  if (header.fields.size() != 2 || trim(header.fields[0]) != "true" ||
      trim(header.fields[1]) != "predicted") {
    throw validation_error("row 1: expected header 'true,predicted'");
  }
  if (rows.size() == 1) throw validation_error("no data rows after the header");
  std::vector<LabelPair> pairs;
  pairs.reserve(rows.size() - 1);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.fields.size() != 2) {
      throw validation_error("row " + std::to_string(row.number) + ": expected 2 fields, found " +
                             std::to_string(row.fields.size()));
    }
    LabelPair pair{trim(row.fields[0]), trim(row.fields[1])};
    if (pair.truth.empty() || pair.predicted.empty()) {
      throw validation_error("row " + std::to_string(row.number) + ": empty label");
    }
    pairs.push_back(std::move(pair));
  }
  std::vector<std::pair<std::string, std::string>> raw;
  raw.reserve(pairs.size());
  for (const auto& pair : pairs) raw.emplace_back(pair.truth, pair.predicted);
  return PredictionsData{std::move(pairs), ConfusionMatrix::from_pairs(raw)};
}

inline ConfusionMatrix confusion_from_rows(const std::vector<CsvRow>& rows) {
  if (rows.empty()) throw validation_error("empty file: expected header 'label,<class>,...'");
  const auto& header = rows.front();
  if (header.fields.size() < 2 || trim(header.fields[0]) != "label") {
    throw validation_error("row 1: expected header 'label,<class>,...'");
  }
  std::vector<std::string> labels;
  labels.reserve(header.fields.size() - 1);
  for (std::size_t j = 1; j < header.fields.size(); ++j) {
    labels.push_back(trim(header.fields[j]));
  }
  const std::size_t classes = labels.size();
  if (rows.size() - 1 != classes) {
    throw validation_error("expected " + std::to_string(classes) + " data rows, found " +
                           std::to_string(rows.size() - 1));
  }
  std::vector<std::int64_t> counts(classes * classes, 0);
  for (std::size_t i = 0; i < classes; ++i) {
    const auto& row = rows[i + 1];
    if (row.fields.size() != classes + 1) {
      throw validation_error("row " + std::to_string(row.number) + ": expected " +
                             std::to_string(classes + 1) + " fields, found " +
                             std::to_string(row.fields.size()));
    }
    const std::string row_label = trim(row.fields[0]);
    if (row_label != labels[i]) {
      throw validation_error("row " + std::to_string(row.number) + ": row label '" + row_label +
                             "' does not match column order ('" + labels[i] + "' expected)");
    }
    for (std::size_t j = 0; j < classes; ++j) {
      counts[i * classes + j] = parse_count(row.fields[j + 1], row.number, j + 2);
    }
  }
  return ConfusionMatrix(std::move(labels), std::move(counts));
}

}  // namespace detail

inline PredictionsData read_predictions(const std::filesystem::path& path) {
  try {
    return detail::predictions_from_rows(detail::parse_csv(detail::read_file(path)));
  } catch (const validation_error& e) {
    throw validation_error(path.string() + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Confusion matrix files: CSV with header `label,<class1>,...,<classC>`,
// then one row per true class in the same label order.
// ---------------------------------------------------------------------------

inline ConfusionMatrix read_confusion(const std::filesystem::path& path) {
  try {
    return detail::confusion_from_rows(detail::parse_csv(detail::read_file(path)));
  } catch (const validation_error& e) {
    throw validation_error(path.string() + ": " + e.what());
  }
}

inline void write_confusion(const ConfusionMatrix& cm, std::ostream& out) {
  out << "label";
  for (const auto& label : cm.labels()) out << ',' << detail::csv_escape(label);
  out << '\n';
  for (std::size_t i = 0; i < cm.size(); ++i) {
    out << detail::csv_escape(cm.labels()[i]);
    for (std::size_t j = 0; j < cm.size(); ++j) out << ',' << cm.at(i, j);
    out << '\n';
  }
}

inline void write_confusion(const ConfusionMatrix& cm, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot open '" + path.string() + "' for writing");
  write_confusion(cm, out);
  if (!out) throw io_error("failed while writing '" + path.string() + "'");
}

/// Loads either file kind by sniffing the header: `true,predicted` for
/// labeled predictions, `label,...` for a confusion matrix.
inline ConfusionMatrix load_run_matrix(const std::filesystem::path& path) {
  try {
    const auto rows = detail::parse_csv(detail::read_file(path));
    if (!rows.empty() && !rows.front().fields.empty()) {
      const std::string first = detail::trim(rows.front().fields[0]);
      if (first == "label") return detail::confusion_from_rows(rows);
      if (first == "true") return detail::predictions_from_rows(rows).matrix;
    }
    throw validation_error("row 1: expected header 'true,predicted' or 'label,<class>,...'");
  } catch (const validation_error& e) {
    throw validation_error(path.string() + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Weight configuration files: JSON
//   {"scheme": "user"|"rarity"|"composite"|"partial",
//    "weights": {label: number},              user / partial
//    "fill": "even"|"rarity",                 partial
//    "criteria": [{"name": str, "weights": {label: number}}]}   composite
// ---------------------------------------------------------------------------

namespace detail {

inline std::map<std::string, double> parse_weight_map(const nlohmann::json& j, const std::string& path) {
  if (!j.is_object()) throw validation_error(path + ": expected an object of class weights");
  std::map<std::string, double> weights;
  for (const auto& [label, value] : j.items()) {
    if (!value.is_number()) {
      throw validation_error(path + "." + label + ": expected a number");
    }
    weights[label] = value.get<double>();
  }
  if (weights.empty()) throw validation_error(path + ": needs at least one class weight");
  return weights;
}

inline WeightCriterion parse_criterion(const nlohmann::json& j, const std::string& path) {
  if (!j.is_object()) throw validation_error(path + ": expected an object");
  WeightCriterion criterion;
  for (const auto& [key, value] : j.items()) {
    if (key == "name") {
      if (!value.is_string()) throw validation_error(path + ".name: expected a string");
      criterion.name = value.get<std::string>();
    } else if (key == "weights") {
      criterion.weights = parse_weight_map(value, path + ".weights");
    } else {
      throw validation_error(path + "." + key + ": unknown field");
    }
  }
  if (criterion.weights.empty()) throw validation_error(path + ".weights: missing");
  return criterion;
}

}  // namespace detail

inline WeightSpec parse_weight_config(const nlohmann::json& j) {
  if (!j.is_object()) throw validation_error("weight config: expected a JSON object");
  if (!j.contains("scheme")) throw validation_error("scheme: missing");
  if (!j["scheme"].is_string()) throw validation_error("scheme: expected a string");
  const std::string scheme = j["scheme"].get<std::string>();

  WeightSpec spec;
  if (scheme == "user") spec.scheme = WeightScheme::user;
  else if (scheme == "rarity") spec.scheme = WeightScheme::rarity;
  else if (scheme == "composite") spec.scheme = WeightScheme::composite;
  else if (scheme == "partial") spec.scheme = WeightScheme::partial;
  else throw validation_error("scheme: unknown value '" + scheme + "'");

  for (const auto& [key, value] : j.items()) {
    if (key == "scheme") continue;
    if (key == "weights") {
      if (spec.scheme != WeightScheme::user && spec.scheme != WeightScheme::partial) {
        throw validation_error("weights: not allowed for scheme '" + scheme + "'");
      }
      spec.user = detail::parse_weight_map(value, "weights");
    } else if (key == "fill") {
      if (spec.scheme != WeightScheme::partial) {
        throw validation_error("fill: not allowed for scheme '" + scheme + "'");
      }
      if (!value.is_string()) throw validation_error("fill: expected a string");
      const std::string fill = value.get<std::string>();
      if (fill == "even") spec.fill = FillPolicy::even;
      else if (fill == "rarity") spec.fill = FillPolicy::rarity;
      else throw validation_error("fill: unknown value '" + fill + "'");
    } else if (key == "criteria") {
      if (spec.scheme != WeightScheme::composite) {
        throw validation_error("criteria: not allowed for scheme '" + scheme + "'");
      }
      if (!value.is_array()) throw validation_error("criteria: expected an array");
      for (std::size_t i = 0; i < value.size(); ++i) {
        spec.criteria.push_back(
            detail::parse_criterion(value[i], "criteria[" + std::to_string(i) + "]"));
      }
    } else {
      throw validation_error(key + ": unknown field");
    }
  }

  if (spec.scheme == WeightScheme::user && spec.user.empty()) {
    throw validation_error("weights: required for scheme 'user'");
  }
  if (spec.scheme == WeightScheme::composite && spec.criteria.size() < 2) {
    throw validation_error("criteria: scheme 'composite' needs at least 2 criteria");
  }
  return spec;
}

inline WeightSpec read_weight_config(const std::filesystem::path& path) {
  const std::string text = detail::read_file(path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw validation_error(path.string() + ": " + e.what());
  }
  try {
    return parse_weight_config(j);
  } catch (const validation_error& e) {
    throw validation_error(path.string() + ": " + e.what());
  }
}

/// A single composite criterion from its own file:
/// {"name": str, "weights": {label: number}}.
inline WeightCriterion read_criterion_file(const std::filesystem::path& path) {
  const std::string text = detail::read_file(path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw validation_error(path.string() + ": " + e.what());
  }
  try {
    return detail::parse_criterion(j, "criterion");
  } catch (const validation_error& e) {
    throw validation_error(path.string() + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Report serialization: JSON (full precision, round-trips), CSV (score
// matrix, full precision), markdown (display table, 3 decimals).
// ---------------------------------------------------------------------------

enum class ReportFormat { json, csv, markdown };

inline std::optional<ReportFormat> report_format_from_name(std::string_view name) {
  if (name == "json") return ReportFormat::json;
  if (name == "csv") return ReportFormat::csv;
  if (name == "markdown") return ReportFormat::markdown;
  return std::nullopt;
}

namespace detail {

inline std::string format_fixed3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

inline nlohmann::ordered_json optional_to_json(const std::optional<double>& v) {
  if (v.has_value()) return *v;
  return nullptr;
}

inline std::optional<double> optional_from_json(const nlohmann::json& j, const std::string& path) {
  if (j.is_null()) return std::nullopt;
  if (!j.is_number()) throw validation_error(path + ": expected a number or null");
  return j.get<double>();
}

}  // namespace detail

inline nlohmann::ordered_json report_to_json(const MetricReport& report) {
  nlohmann::ordered_json j;
  j["schema"] = "wba-report/1";
  j["weight_scheme"] = report.weight_scheme;
  j["labels"] = report.labels;
  nlohmann::ordered_json metrics = nlohmann::ordered_json::array();
  for (MetricKind kind : report.metrics) metrics.push_back(metric_name(kind));
  j["metrics"] = std::move(metrics);

  nlohmann::ordered_json runs = nlohmann::ordered_json::array();
  for (std::size_t r = 0; r < report.runs.size(); ++r) {
    nlohmann::ordered_json run;
    run["name"] = report.runs[r];
    run["source"] = report.run_sources[r];
    if (report.run_weights[r].has_value()) {
      run["weights"] = *report.run_weights[r];
    } else {
      run["weights"] = nullptr;
    }
    nlohmann::ordered_json scores = nlohmann::ordered_json::array();
    for (const MetricValue& value : report.scores[r]) {
      nlohmann::ordered_json cell;
      cell["metric"] = metric_name(value.kind);
      cell["value"] = value.value;
      nlohmann::ordered_json notes = nlohmann::ordered_json::array();
      for (const DegenerateNote& note : value.notes) {
        notes.push_back({{"class", note.label}, {"detail", note.detail}});
      }
      cell["notes"] = std::move(notes);
      scores.push_back(std::move(cell));
    }
    run["scores"] = std::move(scores);
    nlohmann::ordered_json classes = nlohmann::ordered_json::array();
    for (const ClassStat& s : report.per_class[r]) {
      nlohmann::ordered_json c;
      c["label"] = s.label;
      c["count"] = s.count;
      c["correct"] = s.correct;
      c["frequency"] = s.frequency;
      c["accuracy"] = detail::optional_to_json(s.accuracy);
      c["precision"] = detail::optional_to_json(s.precision);
      c["recall"] = detail::optional_to_json(s.recall);
      c["f1"] = detail::optional_to_json(s.f1);
      classes.push_back(std::move(c));
    }
    run["classes"] = std::move(classes);
    runs.push_back(std::move(run));
  }
  j["runs"] = std::move(runs);

  nlohmann::ordered_json rankings = nlohmann::ordered_json::array();
  for (const Ranking& ranking : report.rankings) {
    rankings.push_back({{"metric", metric_name(ranking.metric)},
                        {"order", ranking.order},
                        {"ties", ranking.ties}});
  }
  j["rankings"] = std::move(rankings);

  nlohmann::ordered_json disagreements = nlohmann::ordered_json::array();
  for (const Disagreement& d : report.disagreements) {
    nlohmann::ordered_json pairs = nlohmann::ordered_json::array();
    for (const auto& [x, y] : d.discordant) pairs.push_back({x, y});
    disagreements.push_back({{"metric_a", metric_name(d.metric_a)},
                             {"metric_b", metric_name(d.metric_b)},
                             {"discordant", std::move(pairs)},
                             {"agree", d.agree}});
  }
  j["disagreements"] = std::move(disagreements);
  return j;
}

inline MetricReport report_from_json(const nlohmann::json& j) {
  auto metric_at = [](const nlohmann::json& node, const std::string& path) {
    if (!node.is_string()) throw validation_error(path + ": expected a metric name");
    const auto kind = metric_from_name(node.get<std::string>());
    if (!kind) throw validation_error(path + ": unknown metric '" + node.get<std::string>() + "'");
    return *kind;
  };
  if (!j.is_object()) throw validation_error("report: expected a JSON object");
  if (j.value("schema", std::string()) != "wba-report/1") {
    throw validation_error("schema: expected 'wba-report/1'");
  }
  MetricReport report;
  report.weight_scheme = j.at("weight_scheme").get<std::string>();
  report.labels = j.at("labels").get<std::vector<std::string>>();
  for (std::size_t m = 0; m < j.at("metrics").size(); ++m) {
    report.metrics.push_back(metric_at(j["metrics"][m], "metrics[" + std::to_string(m) + "]"));
  }
  for (std::size_t r = 0; r < j.at("runs").size(); ++r) {
    const auto& run = j["runs"][r];
    const std::string path = "runs[" + std::to_string(r) + "]";
    report.runs.push_back(run.at("name").get<std::string>());
    report.run_sources.push_back(run.at("source").get<std::string>());
    if (run.at("weights").is_null()) {
      report.run_weights.emplace_back(std::nullopt);
    } else {
      report.run_weights.emplace_back(run["weights"].get<std::vector<double>>());
    }
    std::vector<MetricValue> scores;
    for (std::size_t m = 0; m < run.at("scores").size(); ++m) {
      const auto& cell = run["scores"][m];
      MetricValue value;
      value.kind = metric_at(cell.at("metric"), path + ".scores[" + std::to_string(m) + "].metric");
      value.value = cell.at("value").get<double>();
      for (const auto& note : cell.at("notes")) {
        value.notes.push_back(
            {note.at("class").get<std::string>(), note.at("detail").get<std::string>()});
      }
      scores.push_back(std::move(value));
    }
    report.scores.push_back(std::move(scores));
    std::vector<ClassStat> stats;
    for (const auto& c : run.at("classes")) {
      ClassStat s;
      s.label = c.at("label").get<std::string>();
      s.count = c.at("count").get<std::int64_t>();
      s.correct = c.at("correct").get<std::int64_t>();
      s.frequency = c.at("frequency").get<double>();
      s.accuracy = detail::optional_from_json(c.at("accuracy"), path + ".accuracy");
      s.precision = detail::optional_from_json(c.at("precision"), path + ".precision");
      s.recall = detail::optional_from_json(c.at("recall"), path + ".recall");
      s.f1 = detail::optional_from_json(c.at("f1"), path + ".f1");
      stats.push_back(std::move(s));
    }
    report.per_class.push_back(std::move(stats));
  }
  for (const auto& node : j.at("rankings")) {
    Ranking ranking;
    ranking.metric = metric_at(node.at("metric"), "rankings.metric");
    ranking.order = node.at("order").get<std::vector<std::string>>();
    ranking.ties = node.at("ties").get<std::vector<std::vector<std::string>>>();
    report.rankings.push_back(std::move(ranking));
  }
  for (const auto& node : j.at("disagreements")) {
    Disagreement d;
    d.metric_a = metric_at(node.at("metric_a"), "disagreements.metric_a");
    d.metric_b = metric_at(node.at("metric_b"), "disagreements.metric_b");
    for (const auto& pair : node.at("discordant")) {
      d.discordant.emplace_back(pair.at(0).get<std::string>(), pair.at(1).get<std::string>());
    }
    d.agree = node.at("agree").get<bool>();
    report.disagreements.push_back(std::move(d));
  }
  return report;
}

inline MetricReport read_report(const std::filesystem::path& path) {
  const std::string text = detail::read_file(path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw validation_error(path.string() + ": " + e.what());
  }
  try {
    return report_from_json(j);
  } catch (const validation_error& e) {
    throw validation_error(path.string() + ": " + e.what());
  } catch (const nlohmann::json::exception& e) {
    throw validation_error(path.string() + ": " + e.what());
  }
}

namespace detail {

inline void write_report_csv(const MetricReport& report, std::ostream& out) {
  out << "run";
  for (MetricKind kind : report.metrics) out << ',' << metric_name(kind);
  out << '\n';
  for (std::size_t r = 0; r < report.runs.size(); ++r) {
    out << csv_escape(report.runs[r]);
    for (std::size_t m = 0; m < report.metrics.size(); ++m) {
      out << ',' << format_number(report.scores[r][m].value);
    }
    out << '\n';
  }
}

inline void write_report_markdown(const MetricReport& report, std::ostream& out) {
  out << "# Classification report\n\n";
  out << "- weights: " << report.weight_scheme << '\n';
  out << "- labels: ";
  for (std::size_t i = 0; i < report.labels.size(); ++i) {
    if (i > 0) out << ", ";
    out << report.labels[i];
  }
  out << "\n\n";

  out << "| run |";
  for (MetricKind kind : report.metrics) out << ' ' << metric_name(kind) << " |";
  out << "\n| --- |";
  for (std::size_t m = 0; m < report.metrics.size(); ++m) out << " --- |";
  out << '\n';
  for (std::size_t r = 0; r < report.runs.size(); ++r) {
    out << "| " << report.runs[r] << " |";
    for (std::size_t m = 0; m < report.metrics.size(); ++m) {
      out << ' ' << format_fixed3(report.scores[r][m].value) << " |";
    }
    out << '\n';
  }

  out << "\n## Rankings\n\n";
  for (const Ranking& ranking : report.rankings) {
    out << "- " << metric_name(ranking.metric) << ": ";
    std::map<std::string, std::size_t> tie_group;
    for (std::size_t g = 0; g < ranking.ties.size(); ++g) {
      for (const auto& name : ranking.ties[g]) tie_group[name] = g + 1;
    }
    for (std::size_t i = 0; i < ranking.order.size(); ++i) {
      if (i > 0) {
        const auto a = tie_group.find(ranking.order[i - 1]);
        const auto b = tie_group.find(ranking.order[i]);
        const bool tied = a != tie_group.end() && b != tie_group.end() && a->second == b->second;
        out << (tied ? " = " : " > ");
      }
      out << ranking.order[i];
    }
    out << '\n';
  }

  out << "\n## Disagreements\n\n";
  for (const Disagreement& d : report.disagreements) {
    out << "- " << metric_name(d.metric_a) << " vs " << metric_name(d.metric_b) << ": ";
    if (d.agree) {
      out << "agree";
    } else {
      for (std::size_t i = 0; i < d.discordant.size(); ++i) {
        if (i > 0) out << ", ";
        out << '{' << d.discordant[i].first << ", " << d.discordant[i].second << '}';
      }
    }
    out << '\n';
  }

  bool any_notes = false;
  for (const auto& row : report.scores) {
    for (const auto& value : row) any_notes = any_notes || !value.notes.empty();
  }
  if (any_notes) {
    out << "\n## Degenerate classes\n\n";
    for (std::size_t r = 0; r < report.runs.size(); ++r) {
      for (const MetricValue& value : report.scores[r]) {
        for (const DegenerateNote& note : value.notes) {
          out << "- " << report.runs[r] << " / " << metric_name(value.kind) << " / "
              << note.label << ": " << note.detail << '\n';
        }
      }
    }
  }
}

}  // namespace detail

inline void write_report(const MetricReport& report, ReportFormat format, std::ostream& out) {
  switch (format) {
    case ReportFormat::json:
      out << report_to_json(report).dump(2) << '\n';
      break;
    case ReportFormat::csv:
      detail::write_report_csv(report, out);
      break;
    case ReportFormat::markdown:
      detail::write_report_markdown(report, out);
      break;
  }
}

inline void write_report(const MetricReport& report, ReportFormat format,
                         const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot open '" + path.string() + "' for writing");
  write_report(report, format, out);
  if (!out) throw io_error("failed while writing '" + path.string() + "'");
}

}  // namespace wba
