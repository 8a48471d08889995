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

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wba/error.hpp"

namespace wba {

/// Shape summary of a labeled dataset: class counts, frequencies, which
/// classes fall below the average per-class count, and how skewed the count
/// distribution is.
struct DatasetProfile {
  std::int64_t items = 0;  // N
  std::vector<std::string> labels;  // sorted
  std::vector<std::int64_t> counts;
  std::vector<double> frequencies;
  double average_class_count = 0.0;  // N / C
  std::vector<std::string> infrequent;  // classes with count strictly below N / C
  std::optional<double> skew;
  std::string skew_note;  // why skew is unavailable, when it is

  bool operator==(const DatasetProfile&) const = default;
};

/// Class counts over the true labels, keyed and ordered by label.
inline std::map<std::string, std::int64_t> class_counts(const std::vector<std::string>& truth) {
  if (truth.empty()) throw validation_error("cannot profile an empty label list");
  std::map<std::string, std::int64_t> counts;
  for (const auto& label : truth) ++counts[label];
  return counts;
}

/// Relative class frequencies f_i = n_i / N in sorted label order.
inline std::vector<std::pair<std::string, double>> class_frequencies(
    const std::vector<std::string>& truth) {
  const auto counts = class_counts(truth);
  const double total = static_cast<double>(truth.size());
  std::vector<std::pair<std::string, double>> frequencies;
  frequencies.reserve(counts.size());
  for (const auto& [label, count] : counts) {
    frequencies.emplace_back(label, static_cast<double>(count) / total);
  }
  return frequencies;
}

/// Classes with strictly fewer occurrences than the average per-class count
/// N / C. The comparison is exact: n_i * C < N.
inline std::vector<std::string> infrequent_classes(const std::vector<std::string>& labels,
                                                   const std::vector<std::int64_t>& counts) {
  if (labels.empty() || labels.size() != counts.size()) {
    throw validation_error("infrequent classes need a non-empty aligned label/count list");
  }
  std::int64_t total = 0;
  for (std::int64_t n : counts) total += n;
  std::vector<std::string> infrequent;
  const auto classes = static_cast<std::int64_t>(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (counts[i] * classes < total) infrequent.push_back(labels[i]);
  }
  return infrequent;
}

/// Sample skewness in the spreadsheet SKEW form:
///   n / ((n-1)(n-2)) * sum_i ((x_i - mean) / s)^3
/// with s the (n-1) sample standard deviation. Needs n >= 3 and s > 0.
inline double skewness(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 3) throw validation_error("skewness needs at least 3 values");
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(n);
  double squared = 0.0;
  for (double v : values) squared += (v - mean) * (v - mean);
  const double variance = squared / static_cast<double>(n - 1);
  if (variance <= 0.0) throw validation_error("skewness undefined: zero variance");
  const double stddev = std::sqrt(variance);
  double cubes = 0.0;
  for (double v : values) {
    const double z = (v - mean) / stddev;
    cubes += z * z * z;
  }
  const double dn = static_cast<double>(n);
  return dn / ((dn - 1.0) * (dn - 2.0)) * cubes;
}

/// Full profile of a dataset's true labels. Skew is computed over the
/// per-class counts; it is left empty (with a note) when there are fewer
/// than 3 classes or the counts have zero variance.
inline DatasetProfile profile_dataset(const std::vector<std::string>& truth) {
  const auto counts = class_counts(truth);
  DatasetProfile profile;
  profile.items = static_cast<std::int64_t>(truth.size());
  for (const auto& [label, count] : counts) {
    profile.labels.push_back(label);
    profile.counts.push_back(count);
    profile.frequencies.push_back(static_cast<double>(count) / static_cast<double>(profile.items));
  }
  profile.average_class_count =
      static_cast<double>(profile.items) / static_cast<double>(profile.labels.size());
  profile.infrequent = infrequent_classes(profile.labels, profile.counts);

  if (profile.labels.size() < 3) {
    profile.skew_note = "skew unavailable: fewer than 3 classes";
  } else {
    std::vector<double> values(profile.counts.begin(), profile.counts.end());
    bool constant = true;
    for (double v : values) constant = constant && v == values.front();
    if (constant) {
      profile.skew_note = "skew unavailable: all class counts are equal";
    } else {
      profile.skew = skewness(values);
    }
  }
  return profile;
}

}  // namespace wba
