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

#include <algorithm>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "wba/confusion.hpp"
#include "wba/error.hpp"
#include "wba/metrics.hpp"
#include "wba/weights.hpp"

namespace wba {

/// One classifier's test outcome: a confusion matrix plus identifying
/// metadata. Run names must be unique within a comparison.
struct RunResult {
  std::string name;
  ConfusionMatrix matrix;
  std::string source;  // optional provenance, e.g. the input file

  bool operator==(const RunResult&) const = default;
};

/// Run names in descending score order for one metric. Ties are broken
/// lexicographically in `order` and reported explicitly in `ties`.
struct Ranking {
  MetricKind metric = MetricKind::accuracy;
  std::vector<std::string> order;
  std::vector<std::vector<std::string>> ties;  // groups of 2+ runs with equal scores

  bool operator==(const Ranking&) const = default;
};

/// Run pairs ordered oppositely by two metrics. Ties on either metric count
/// as neither concordant nor discordant.
struct Disagreement {
  MetricKind metric_a = MetricKind::accuracy;
  MetricKind metric_b = MetricKind::accuracy;
  std::vector<std::pair<std::string, std::string>> discordant;
  bool agree = true;  // true iff no discordant pair exists

  bool operator==(const Disagreement&) const = default;
};

/// Scores for every (run, metric) cell plus per-run class breakdowns,
/// per-metric rankings, and the pairwise disagreement summary.
struct MetricReport {
  std::vector<MetricKind> metrics;
  std::vector<std::string> runs;
  std::vector<std::string> run_sources;
  std::vector<std::string> labels;  // unified label set
  std::string weight_scheme;        // human-readable description of the spec
  std::vector<std::vector<MetricValue>> scores;  // [run][metric]
  std::vector<std::optional<std::vector<double>>> run_weights;  // resolved per run, when used
  std::vector<std::vector<ClassStat>> per_class;  // [run][class]
  std::vector<Ranking> rankings;                  // one per metric
  std::vector<Disagreement> disagreements;        // every unordered metric pair

  bool operator==(const MetricReport&) const = default;

  std::size_t metric_index(MetricKind kind) const {
    for (std::size_t i = 0; i < metrics.size(); ++i) {
      if (metrics[i] == kind) return i;
    }
    throw validation_error(std::string("metric '") + metric_name(kind) + "' is not in the report");
  }
};

namespace detail {

inline Ranking rank_scores(MetricKind kind, const std::vector<std::string>& runs,
                           const std::vector<double>& scores) {
  std::vector<std::size_t> index(runs.size());
  for (std::size_t i = 0; i < index.size(); ++i) index[i] = i;
  std::sort(index.begin(), index.end(), [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return runs[a] < runs[b];
  });
  Ranking ranking;
  ranking.metric = kind;
  for (std::size_t i : index) ranking.order.push_back(runs[i]);
  std::size_t start = 0;
  while (start < index.size()) {
    std::size_t end = start + 1;
    while (end < index.size() && scores[index[end]] == scores[index[start]]) ++end;
    if (end - start > 1) {
      ranking.ties.emplace_back(ranking.order.begin() + static_cast<std::ptrdiff_t>(start),
                                ranking.order.begin() + static_cast<std::ptrdiff_t>(end));
    }
    start = end;
  }
  return ranking;
}

inline Disagreement discordant_pairs(MetricKind a, MetricKind b,
                                     const std::vector<std::string>& runs,
                                     const std::vector<double>& scores_a,
                                     const std::vector<double>& scores_b) {
  Disagreement d;
  d.metric_a = a;
  d.metric_b = b;
  for (std::size_t x = 0; x < runs.size(); ++x) {
    for (std::size_t y = x + 1; y < runs.size(); ++y) {
      const double da = scores_a[x] - scores_a[y];
      const double db = scores_b[x] - scores_b[y];
      if ((da > 0.0 && db < 0.0) || (da < 0.0 && db > 0.0)) {
        d.discordant.emplace_back(runs[x], runs[y]);
      }
    }
  }
  d.agree = d.discordant.empty();
  return d;
}

}  // namespace detail

/// Evaluates every requested metric for every run over a unified label set.
/// Runs missing a label get zero rows/columns for it; weight specs are
/// resolved per run against that run's own ground-truth distribution, which
/// is identical across runs sharing a test set.
inline MetricReport evaluate_suite(const std::vector<RunResult>& runs, const WeightSpec& spec,
                                   const std::vector<MetricKind>& metrics) {
  if (runs.empty()) throw validation_error("evaluation needs at least one run");
  if (metrics.empty()) throw validation_error("evaluation needs at least one metric");
  {
    std::set<std::string> names;
    for (const auto& run : runs) {
      if (!names.insert(run.name).second) {
        throw validation_error("duplicate run name '" + run.name + "'");
      }
    }
    std::set<MetricKind> kinds(metrics.begin(), metrics.end());
    if (kinds.size() != metrics.size()) throw validation_error("duplicate metric in the request");
  }

  // Unified label set: keep the shared order when every run agrees on it,
  // otherwise fall back to the sorted union.
  std::vector<std::string> labels = runs.front().matrix.labels();
  bool identical = true;
  for (const auto& run : runs) identical = identical && run.matrix.labels() == labels;
  if (!identical) {
    std::set<std::string> all;
    for (const auto& run : runs) {
      all.insert(run.matrix.labels().begin(), run.matrix.labels().end());
    }
    labels.assign(all.begin(), all.end());
  }

  const bool weighted = std::any_of(metrics.begin(), metrics.end(), metric_uses_weights);

  MetricReport report;
  report.metrics = metrics;
  report.labels = labels;
  report.weight_scheme = describe(spec);
  for (const auto& run : runs) {
    report.runs.push_back(run.name);
    report.run_sources.push_back(run.source);

    const ConfusionMatrix aligned =
        run.matrix.labels() == labels ? run.matrix : run.matrix.aligned_to(labels);
    std::optional<WeightVector> weights;
    if (weighted) {
      std::vector<std::int64_t> truth_counts(labels.size());
      for (std::size_t i = 0; i < labels.size(); ++i) truth_counts[i] = aligned.row_total(i);
      weights = resolve_weights(spec, labels, truth_counts);
      report.run_weights.emplace_back(weights->values());
    } else {
      report.run_weights.emplace_back(std::nullopt);
    }

    std::vector<MetricValue> row;
    row.reserve(metrics.size());
    for (MetricKind kind : metrics) {
      row.push_back(compute_metric(aligned, kind, weights ? &*weights : nullptr));
    }
    report.scores.push_back(std::move(row));
    report.per_class.push_back(class_stats(aligned));
  }

  for (std::size_t m = 0; m < metrics.size(); ++m) {
    std::vector<double> column(runs.size());
    for (std::size_t r = 0; r < runs.size(); ++r) column[r] = report.scores[r][m].value;
    report.rankings.push_back(detail::rank_scores(metrics[m], report.runs, column));
  }
  for (std::size_t a = 0; a < metrics.size(); ++a) {
    std::vector<double> column_a(runs.size());
    for (std::size_t r = 0; r < runs.size(); ++r) column_a[r] = report.scores[r][a].value;
    for (std::size_t b = a + 1; b < metrics.size(); ++b) {
      std::vector<double> column_b(runs.size());
      for (std::size_t r = 0; r < runs.size(); ++r) column_b[r] = report.scores[r][b].value;
      report.disagreements.push_back(
          detail::discordant_pairs(metrics[a], metrics[b], report.runs, column_a, column_b));
    }
  }
  return report;
}

/// Run names in descending order under one metric of an existing report.
inline std::vector<std::string> rank_by(const MetricReport& report, MetricKind kind) {
  return report.rankings[report.metric_index(kind)].order;
}

/// Discordant run pairs between two metrics of an existing report.
inline Disagreement disagreements(const MetricReport& report, MetricKind a, MetricKind b) {
  const std::size_t ia = report.metric_index(a);
  const std::size_t ib = report.metric_index(b);
  std::vector<double> scores_a(report.runs.size());
  std::vector<double> scores_b(report.runs.size());
  for (std::size_t r = 0; r < report.runs.size(); ++r) {
    scores_a[r] = report.scores[r][ia].value;
    scores_b[r] = report.scores[r][ib].value;
  }
  return detail::discordant_pairs(a, b, report.runs, scores_a, scores_b);
}

}  // namespace wba
