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

#include <cstddef>
#include <cstdint>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "wba/error.hpp"

namespace wba {

/// Square count matrix over an ordered label set. Entry (i, j) counts items
/// whose true class is labels()[i] and whose predicted class is labels()[j].
/// Row totals are the true class cardinalities, the diagonal holds the
/// correct predictions. Immutable after construction.
class ConfusionMatrix {
 public:
  /// `counts` is row-major with dimension labels.size() x labels.size().
  ConfusionMatrix(std::vector<std::string> labels, std::vector<std::int64_t> counts)
      : labels_(std::move(labels)), counts_(std::move(counts)) {
    if (labels_.empty()) {
      throw validation_error("confusion matrix needs at least one class");
    }
    std::set<std::string> seen;
    for (const auto& label : labels_) {
      if (label.empty()) {
        throw validation_error("confusion matrix labels must be non-empty");
      }
      if (!seen.insert(label).second) {
        throw validation_error("duplicate class label '" + label + "'");
      }
    }
    const std::size_t c = labels_.size();
    if (counts_.size() != c * c) {
      throw validation_error("confusion matrix counts must be square over the label set");
    }
    for (std::int64_t v : counts_) {
      if (v < 0) {
        throw validation_error("confusion matrix entries must be non-negative");
      }
    }
  }

  /// Builds a matrix from (true, predicted) label pairs over the sorted set
  /// of distinct labels seen in either column.
  static ConfusionMatrix from_pairs(const std::vector<std::pair<std::string, std::string>>& pairs) {
    if (pairs.empty()) {
      throw validation_error("cannot build a confusion matrix from zero observations");
    }
    std::set<std::string> distinct;
    for (const auto& [truth, predicted] : pairs) {
      distinct.insert(truth);
      distinct.insert(predicted);
    }
    std::vector<std::string> labels(distinct.begin(), distinct.end());
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < labels.size(); ++i) index[labels[i]] = i;
    std::vector<std::int64_t> counts(labels.size() * labels.size(), 0);
    for (const auto& [truth, predicted] : pairs) {
      ++counts[index.at(truth) * labels.size() + index.at(predicted)];
    }
    return ConfusionMatrix(std::move(labels), std::move(counts));
  }

  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }

  std::int64_t at(std::size_t row, std::size_t col) const {
    return counts_[row * labels_.size() + col];
  }

  /// True cardinality n_i of class `row`.
  std::int64_t row_total(std::size_t row) const {
    std::int64_t sum = 0;
    for (std::size_t j = 0; j < labels_.size(); ++j) sum += at(row, j);
    return sum;
  }

  /// How many items were predicted as class `col`.
  std::int64_t col_total(std::size_t col) const {
    std::int64_t sum = 0;
    for (std::size_t i = 0; i < labels_.size(); ++i) sum += at(i, col);
    return sum;
  }

  /// Correctly predicted count p_i of class `row`.
  std::int64_t correct(std::size_t row) const { return at(row, row); }

  /// Total observation count N.
  std::int64_t total() const {
    std::int64_t sum = 0;
    for (std::int64_t v : counts_) sum += v;
    return sum;
  }

  /// Re-expresses the matrix over `target`, a superset of the current label
  /// set; classes the matrix has never seen get zero rows and columns.
  ConfusionMatrix aligned_to(const std::vector<std::string>& target) const {
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < target.size(); ++i) index[target[i]] = i;
    std::vector<std::int64_t> counts(target.size() * target.size(), 0);
    for (std::size_t i = 0; i < labels_.size(); ++i) {
      auto row = index.find(labels_[i]);
      if (row == index.end()) {
        throw validation_error("alignment target is missing class '" + labels_[i] + "'");
      }
      for (std::size_t j = 0; j < labels_.size(); ++j) {
        counts[row->second * target.size() + index.at(labels_[j])] = at(i, j);
      }
    }
    return ConfusionMatrix(target, std::move(counts));
  }

  bool operator==(const ConfusionMatrix&) const = default;

 private:
  std::vector<std::string> labels_;
  std::vector<std::int64_t> counts_;  // row-major C x C
};

}  // namespace wba
