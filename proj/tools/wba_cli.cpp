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

// Command-line front end: evaluate / compare / weights / profile.
// Exit codes: 0 success, 1 I/O failure, 2 validation or usage failure.

#include <CLI11.hpp>

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "wba/wba.hpp"

namespace {

constexpr const char* kVersion = "wba 0.1.0";

struct WeightFlags {
  std::string config_file;
  std::string scheme;
  std::vector<std::string> assignments;  // label=value
  std::string fill = "even";
  std::vector<std::string> criteria_files;
};

struct OutputFlags {
  std::string format = "markdown";
  std::string path;  // empty = stdout
};

void add_weight_flags(CLI::App* cmd, WeightFlags& flags) {
  auto* config = cmd->add_option("--weights", flags.config_file,
                                 "Weight configuration file (JSON)");
  auto* scheme = cmd->add_option("--scheme", flags.scheme,
                                 "Weight scheme: user, rarity, composite, partial");
  auto* sets = cmd->add_option("--set", flags.assignments,
                               "Class weight as LABEL=VALUE (user/partial schemes; repeatable)");
  auto* fill = cmd->add_option("--fill", flags.fill, "Fill policy for partial scheme")
                   ->check(CLI::IsMember({"even", "rarity"}));
  auto* criteria = cmd->add_option("--criteria", flags.criteria_files,
                                   "Criterion file for the composite scheme (repeatable)");
  config->excludes(scheme);
  config->excludes(sets);
  config->excludes(fill);
  config->excludes(criteria);
}

void add_output_flags(CLI::App* cmd, OutputFlags& flags) {
  cmd->add_option("--format", flags.format, "Report format")
      ->check(CLI::IsMember({"json", "csv", "markdown"}));
  cmd->add_option("--out", flags.path, "Write to this file instead of stdout");
}

std::pair<std::string, std::string> split_assignment(const std::string& text, const char* what) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw wba::validation_error(std::string(what) + " must look like NAME=VALUE, got '" + text + "'");
  }
  return {text.substr(0, eq), text.substr(eq + 1)};
}

double parse_weight_value(const std::string& label, const std::string& text) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw wba::validation_error("weight for class '" + label + "' is not a number: '" + text + "'");
  }
  return value;
}

std::map<std::string, double> parse_assignments(const std::vector<std::string>& assignments) {
  std::map<std::string, double> weights;
  for (const auto& text : assignments) {
    const auto [label, value] = split_assignment(text, "--set");
    if (weights.count(label) != 0) {
      throw wba::validation_error("class '" + label + "' was assigned a weight twice");
    }
    weights[label] = parse_weight_value(label, value);
  }
  return weights;
}

// Builds the weight spec from flags alone; no files are read except an
// explicit --weights config or --criteria files.
wba::WeightSpec build_weight_spec(const WeightFlags& flags) {
  if (!flags.config_file.empty()) {
    return wba::read_weight_config(flags.config_file);
  }
  wba::WeightSpec spec;
  std::string scheme = flags.scheme.empty() ? "rarity" : flags.scheme;
  if (scheme == "partial-user") scheme = "partial";  // accepted alias

  if (scheme == "rarity") {
    spec.scheme = wba::WeightScheme::rarity;
  } else if (scheme == "user") {
    spec.scheme = wba::WeightScheme::user;
    spec.user = parse_assignments(flags.assignments);
    if (spec.user.empty()) throw wba::validation_error("scheme 'user' needs --set LABEL=VALUE");
  } else if (scheme == "partial") {
    spec.scheme = wba::WeightScheme::partial;
    spec.user = parse_assignments(flags.assignments);
    spec.fill = flags.fill == "rarity" ? wba::FillPolicy::rarity : wba::FillPolicy::even;
  } else if (scheme == "composite") {
    spec.scheme = wba::WeightScheme::composite;
    for (const auto& path : flags.criteria_files) {
      spec.criteria.push_back(wba::read_criterion_file(path));
    }
    if (spec.criteria.size() < 2) {
      throw wba::validation_error("scheme 'composite' needs at least 2 --criteria files");
    }
  } else {
    throw wba::validation_error("unknown scheme '" + scheme +
                                "' (expected user, rarity, composite, or partial)");
  }
  return spec;
}

std::vector<wba::MetricKind> parse_metrics(const std::string& list) {
  std::vector<wba::MetricKind> kinds;
  std::stringstream stream(list);
  std::string name;
  while (std::getline(stream, name, ',')) {
    const auto begin = name.find_first_not_of(" \t");
    const auto end = name.find_last_not_of(" \t");
    if (begin == std::string::npos) continue;
    const std::string trimmed = name.substr(begin, end - begin + 1);
    const auto kind = wba::metric_from_name(trimmed);
    if (!kind) throw wba::validation_error("unknown metric '" + trimmed + "'");
    kinds.push_back(*kind);
  }
  if (kinds.empty()) throw wba::validation_error("no metrics requested");
  return kinds;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw wba::io_error("cannot open '" + out_path + "' for writing");
  out << text;
  if (!out) throw wba::io_error("failed while writing '" + out_path + "'");
}

void emit_report(const wba::MetricReport& report, const OutputFlags& output) {
  const auto format = wba::report_format_from_name(output.format);
  std::ostringstream text;
  wba::write_report(report, *format, text);
  emit(text.str(), output.path);
}

// --- subcommand drivers -----------------------------------------------------

struct EvaluateOptions {
  std::string predictions;
  std::string confusion;
  WeightFlags weights;
  std::string metrics = "accuracy,ba,wba,wf1";
  OutputFlags output;
};

int run_evaluate(const EvaluateOptions& options) {
  if (options.predictions.empty() == options.confusion.empty()) {
    throw wba::validation_error("evaluate needs exactly one of --predictions or --confusion");
  }
  const auto spec = build_weight_spec(options.weights);
  const auto kinds = parse_metrics(options.metrics);

  const std::string source = options.predictions.empty() ? options.confusion : options.predictions;
  const std::string name = std::filesystem::path(source).stem().string();
  wba::ConfusionMatrix matrix = options.predictions.empty()
                                    ? wba::read_confusion(options.confusion)
                                    : wba::read_predictions(options.predictions).matrix;
  const wba::RunResult run{name, std::move(matrix), source};
  emit_report(wba::evaluate_suite({run}, spec, kinds), options.output);
  return 0;
}

struct CompareOptions {
  std::vector<std::string> runs;  // NAME=PATH
  WeightFlags weights;
  std::string metrics = "accuracy,ba,wba,wf1";
  OutputFlags output;
};

int run_compare(const CompareOptions& options) {
  if (options.runs.size() < 2) {
    throw wba::validation_error("compare needs at least 2 --run NAME=PATH arguments");
  }
  std::vector<std::pair<std::string, std::string>> named;
  for (const auto& text : options.runs) {
    auto [name, path] = split_assignment(text, "--run");
    for (const auto& [existing, unused] : named) {
      if (existing == name) throw wba::validation_error("duplicate run name '" + name + "'");
    }
    named.emplace_back(std::move(name), std::move(path));
  }
  const auto spec = build_weight_spec(options.weights);
  const auto kinds = parse_metrics(options.metrics);

  std::vector<wba::RunResult> runs;
  runs.reserve(named.size());
  for (auto& [name, path] : named) {
    runs.push_back({name, wba::load_run_matrix(path), path});
  }
  emit_report(wba::evaluate_suite(runs, spec, kinds), options.output);
  return 0;
}

struct WeightsOptions {
  WeightFlags weights;
  std::string labels;  // comma-separated
  std::string frequencies_file;
  std::string predictions;
  std::string confusion;
  std::string out;
};

int run_weights(const WeightsOptions& options) {
  const auto spec = build_weight_spec(options.weights);

  // Work out the class set and, when available, its truth distribution.
  std::vector<std::string> labels;
  std::optional<std::vector<std::int64_t>> counts;
  std::optional<std::map<std::string, double>> frequency_map;

  if (!options.frequencies_file.empty()) {
    const std::string text = wba::detail::read_file(options.frequencies_file);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw wba::validation_error(options.frequencies_file + ": " + e.what());
    }
    if (!j.is_object() || j.empty()) {
      throw wba::validation_error(options.frequencies_file +
                                  ": expected a JSON object of class frequencies");
    }
    frequency_map.emplace();
    for (const auto& [label, value] : j.items()) {
      if (!value.is_number()) {
        throw wba::validation_error(options.frequencies_file + ": " + label +
                                    ": expected a number");
      }
      (*frequency_map)[label] = value.get<double>();
    }
  }
  if (!options.predictions.empty() || !options.confusion.empty()) {
    const wba::ConfusionMatrix matrix = options.predictions.empty()
                                            ? wba::read_confusion(options.confusion)
                                            : wba::read_predictions(options.predictions).matrix;
    std::vector<std::string> present;
    std::vector<std::int64_t> present_counts;
    for (std::size_t i = 0; i < matrix.size(); ++i) {
      if (matrix.row_total(i) > 0) {
        present.push_back(matrix.labels()[i]);
        present_counts.push_back(matrix.row_total(i));
      }
    }
    labels = std::move(present);
    counts = std::move(present_counts);
  }
  if (!options.labels.empty()) {
    labels.clear();
    std::stringstream stream(options.labels);
    std::string label;
    while (std::getline(stream, label, ',')) {
      if (!label.empty()) labels.push_back(label);
    }
  }
  if (labels.empty() && frequency_map) {
    for (const auto& [label, unused] : *frequency_map) labels.push_back(label);
  }
  if (labels.empty() &&
      (spec.scheme == wba::WeightScheme::user || spec.scheme == wba::WeightScheme::partial)) {
    for (const auto& [label, unused] : spec.user) labels.push_back(label);
  }
  if (labels.empty() && spec.scheme == wba::WeightScheme::composite) {
    std::set<std::string> all;
    for (const auto& criterion : spec.criteria) {
      for (const auto& [label, unused] : criterion.weights) all.insert(label);
    }
    labels.assign(all.begin(), all.end());
  }
  if (labels.empty()) {
    throw wba::validation_error(
        "cannot determine the class set; give --labels, --frequencies, --predictions, or --confusion");
  }

  auto frequencies = [&]() -> std::vector<double> {
    if (frequency_map) {
      std::vector<double> f;
      f.reserve(labels.size());
      for (const auto& label : labels) {
        auto it = frequency_map->find(label);
        if (it == frequency_map->end()) {
          throw wba::validation_error("no frequency given for class '" + label + "'");
        }
        f.push_back(it->second);
      }
      return f;
    }
    if (counts) {
      std::int64_t total = 0;
      for (std::int64_t n : *counts) total += n;
      std::vector<double> f;
      f.reserve(counts->size());
      for (std::int64_t n : *counts) {
        f.push_back(static_cast<double>(n) / static_cast<double>(total));
      }
      return f;
    }
    throw wba::validation_error(
        "this scheme needs class frequencies; give --frequencies, --predictions, or --confusion");
  };

  wba::WeightVector result = [&]() {
    switch (spec.scheme) {
      case wba::WeightScheme::user:
        return wba::user_weights(spec.user, labels);
      case wba::WeightScheme::rarity:
        return wba::rarity_weights(labels, frequencies());
      case wba::WeightScheme::partial: {
        if (spec.fill == wba::FillPolicy::rarity) {
          const auto f = frequencies();
          return wba::partial_fill(spec.user, labels, spec.fill, &f);
        }
        return wba::partial_fill(spec.user, labels, spec.fill);
      }
      case wba::WeightScheme::composite: {
        std::vector<std::vector<double>> columns;
        for (const auto& criterion : spec.criteria) {
          std::vector<double> column;
          column.reserve(labels.size());
          for (const auto& label : labels) {
            auto it = criterion.weights.find(label);
            if (it == criterion.weights.end()) {
              throw wba::validation_error("criterion '" + criterion.name +
                                          "' has no weight for class '" + label + "'");
            }
            column.push_back(it->second);
          }
          columns.push_back(std::move(column));
        }
        return wba::composite_weights(labels, columns);
      }
    }
    throw wba::validation_error("unknown weight scheme");
  }();

  nlohmann::ordered_json j;
  j["scheme"] = wba::describe(spec);
  j["labels"] = result.labels();
  j["weights"] = result.values();
  emit(j.dump(2) + "\n", options.out);
  return 0;
}

struct ProfileOptions {
  std::string predictions;
  std::string out;
};

int run_profile(const ProfileOptions& options) {
  const auto data = wba::read_predictions(options.predictions);
  std::vector<std::string> truth;
  truth.reserve(data.rows.size());
  for (const auto& row : data.rows) truth.push_back(row.truth);
  const auto profile = wba::profile_dataset(truth);

  nlohmann::ordered_json j;
  j["items"] = profile.items;
  j["classes"] = profile.labels.size();
  j["average_class_count"] = profile.average_class_count;
  j["labels"] = profile.labels;
  j["counts"] = profile.counts;
  j["frequencies"] = profile.frequencies;
  j["infrequent"] = {{"count", profile.infrequent.size()}, {"labels", profile.infrequent}};
  if (profile.skew.has_value()) {
    j["skew"] = *profile.skew;
  } else {
    j["skew"] = nullptr;
    j["skew_note"] = profile.skew_note;
  }
  emit(j.dump(2) + "\n", options.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Class-weighted evaluation toolkit for imbalanced multi-class classification"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  EvaluateOptions evaluate_options;
  auto* evaluate = app.add_subcommand("evaluate", "Score a single run");
  evaluate->add_option("--predictions", evaluate_options.predictions,
                       "CSV of true,predicted label pairs");
  evaluate->add_option("--confusion", evaluate_options.confusion, "Confusion matrix CSV");
  add_weight_flags(evaluate, evaluate_options.weights);
  evaluate->add_option("--metrics", evaluate_options.metrics, "Comma-separated metric list");
  add_output_flags(evaluate, evaluate_options.output);

  CompareOptions compare_options;
  auto* compare = app.add_subcommand("compare", "Score and rank several runs");
  compare->add_option("--run", compare_options.runs,
                      "Run as NAME=PATH (predictions or confusion CSV; repeatable)");
  add_weight_flags(compare, compare_options.weights);
  compare->add_option("--metrics", compare_options.metrics, "Comma-separated metric list");
  add_output_flags(compare, compare_options.output);

  WeightsOptions weights_options;
  auto* weights = app.add_subcommand("weights", "Build a weight vector and print it as JSON");
  add_weight_flags(weights, weights_options.weights);
  weights->add_option("--labels", weights_options.labels, "Comma-separated class set");
  weights->add_option("--frequencies", weights_options.frequencies_file,
                      "JSON object of class frequencies");
  weights->add_option("--predictions", weights_options.predictions,
                      "Derive the class set and frequencies from this predictions CSV");
  weights->add_option("--confusion", weights_options.confusion,
                      "Derive the class set and frequencies from this confusion CSV");
  weights->add_option("--out", weights_options.out, "Write to this file instead of stdout");

  ProfileOptions profile_options;
  auto* profile = app.add_subcommand("profile", "Summarize a dataset's class distribution");
  profile->add_option("--predictions", profile_options.predictions,
                      "CSV of true,predicted label pairs")
      ->required();
  profile->add_option("--out", profile_options.out, "Write to this file instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\nRun with --help for usage.\n";
    return 2;
  }

  try {
    if (evaluate->parsed()) return run_evaluate(evaluate_options);
    if (compare->parsed()) return run_compare(compare_options);
    if (weights->parsed()) return run_weights(weights_options);
    if (profile->parsed()) return run_profile(profile_options);
    std::cerr << "no subcommand given\n";
    return 2;
  } catch (const wba::io_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const wba::validation_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
