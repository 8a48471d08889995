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
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wba/error.hpp"

namespace wba {

namespace detail {

inline std::string format_number(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

/// Normalized per-class products across criteria columns. Does not validate
/// that the columns are simplex vectors; composite_weights() does.
inline std::vector<double> composite_raw(const std::vector<std::vector<double>>& columns) {
  const std::size_t classes = columns.front().size();
  std::vector<double> products(classes, 1.0);
  for (const auto& column : columns) {
    for (std::size_t i = 0; i < classes; ++i) products[i] *= column[i];
  }
  double sum = 0.0;
  for (double p : products) sum += p;
  if (sum <= 0.0) {
    throw validation_error("composite weights undefined: no class has positive weight under all criteria");
  }
  for (double& p : products) p /= sum;
  return products;
}

}  // namespace detail

/// Lists every simplex condition the raw values violate; empty means ok.
inline std::vector<std::string> simplex_violations(std::span<const double> weights,
                                                   double sum_tolerance = 1e-9) {
  std::vector<std::string> violations;
  double sum = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (!(weights[i] >= 0.0 && weights[i] <= 1.0)) {
      violations.push_back("weight " + std::to_string(i) + " = " + detail::format_number(weights[i]) +
                           " is outside [0, 1]");
    }
    sum += weights[i];
  }
  if (weights.empty() || std::abs(sum - 1.0) > sum_tolerance) {
    violations.push_back("weights sum to " + detail::format_number(sum) + ", expected 1");
  }
  return violations;
}

/// Per-class importance weights over an ordered label set. Entries live in
/// [0, 1] and sum to 1; the constructor renormalizes so the stored sum is 1
/// up to rounding. Zero weight means the class is ignored by the metric.
class WeightVector {
 public:
  /// Checked constructor: each weight in [0, 1], sum within 1e-6 of 1,
  /// then renormalized.
  WeightVector(std::vector<std::string> labels, std::vector<double> weights)
      : labels_(std::move(labels)), weights_(std::move(weights)) {
    check_labels();
    double sum = 0.0;
    for (std::size_t i = 0; i < weights_.size(); ++i) {
      if (!(weights_[i] >= 0.0 && weights_[i] <= 1.0)) {
        throw validation_error("weight for class '" + labels_[i] + "' is " +
                               detail::format_number(weights_[i]) + ", outside [0, 1]");
      }
      sum += weights_[i];
    }
    if (std::abs(sum - 1.0) > 1e-6) {
      throw validation_error("weights sum to " + detail::format_number(sum) +
                             ", deviates from 1 beyond tolerance 1e-6");
    }
    for (double& w : weights_) w /= sum;
  }

  /// Exact 1/C per class. Skips renormalization so the stored values are
  /// bit-identical to the reciprocal used by the unweighted macro means.
  static WeightVector uniform(std::vector<std::string> labels) {
    std::vector<double> weights(labels.size(), 0.0);
    if (labels.empty()) throw validation_error("weight vector needs at least one class");
    const double share = 1.0 / static_cast<double>(labels.size());
    for (double& w : weights) w = share;
    return WeightVector(unchecked_tag{}, std::move(labels), std::move(weights));
  }

  /// Exact 1/k on the included classes, 0 elsewhere.
  static WeightVector uniform_subset(std::vector<std::string> labels, const std::vector<bool>& include) {
    std::size_t k = 0;
    for (bool b : include) k += b ? 1 : 0;
    if (k == 0) throw validation_error("uniform weights need at least one included class");
    const double share = 1.0 / static_cast<double>(k);
    std::vector<double> weights(labels.size(), 0.0);
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (include[i]) weights[i] = share;
    }
    return WeightVector(unchecked_tag{}, std::move(labels), std::move(weights));
  }

  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<double>& values() const { return weights_; }
  double operator[](std::size_t i) const { return weights_[i]; }

  std::vector<std::string> violations() const { return simplex_violations(weights_); }

  bool operator==(const WeightVector&) const = default;

 private:
  struct unchecked_tag {};
  WeightVector(unchecked_tag, std::vector<std::string> labels, std::vector<double> weights)
      : labels_(std::move(labels)), weights_(std::move(weights)) {
    check_labels();
  }

  void check_labels() const {
    if (labels_.empty()) throw validation_error("weight vector needs at least one class");
    if (labels_.size() != weights_.size()) {
      throw validation_error("weight vector labels and values differ in length");
    }
    std::set<std::string> seen;
    for (const auto& label : labels_) {
      if (!seen.insert(label).second) {
        throw validation_error("duplicate class label '" + label + "' in weight vector");
      }
    }
  }

  std::vector<std::string> labels_;
  std::vector<double> weights_;
};

/// Fully user-specified weights: w_i = u_i. Every label needs an entry and
/// the entries must already sum to 1 within 1e-6.
inline WeightVector user_weights(const std::map<std::string, double>& user,
                                 const std::vector<std::string>& labels) {
  for (const auto& [label, value] : user) {
    if (std::find(labels.begin(), labels.end(), label) == labels.end()) {
      throw validation_error("weight specified for unknown class '" + label + "'");
    }
    (void)value;
  }
  std::vector<double> weights;
  weights.reserve(labels.size());
  for (const auto& label : labels) {
    auto it = user.find(label);
    if (it == user.end()) {
      throw validation_error("no weight specified for class '" + label + "'");
    }
    weights.push_back(it->second);
  }
  return WeightVector(labels, std::move(weights));
}

/// Normalized inverse class frequencies: w_i = 1 / (f_i * sum_j 1/f_j).
/// Frequencies must be strictly positive and sum to 1 within 1e-6.
inline WeightVector rarity_weights(const std::vector<std::string>& labels,
                                   const std::vector<double>& frequencies) {
  if (frequencies.size() != labels.size()) {
    throw validation_error("frequencies and labels differ in length");
  }
  double freq_sum = 0.0;
  for (std::size_t i = 0; i < frequencies.size(); ++i) {
    if (!(frequencies[i] > 0.0)) {
      throw validation_error("rarity weights undefined: class '" + labels[i] +
                             "' has zero or negative frequency");
    }
    freq_sum += frequencies[i];
  }
  if (std::abs(freq_sum - 1.0) > 1e-6) {
    throw validation_error("frequencies sum to " + detail::format_number(freq_sum) + ", expected 1");
  }
  std::vector<double> inverse(frequencies.size());
  double inverse_sum = 0.0;
  for (std::size_t i = 0; i < frequencies.size(); ++i) {
    inverse[i] = 1.0 / frequencies[i];
    inverse_sum += inverse[i];
  }
  for (double& w : inverse) w /= inverse_sum;
  return WeightVector(labels, std::move(inverse));
}

/// Rarity weights from raw class counts; counts are normalized to
/// frequencies first, so scaling the input does not change the result.
inline WeightVector rarity_weights_from_counts(const std::vector<std::string>& labels,
                                               const std::vector<std::int64_t>& counts) {
  if (counts.size() != labels.size()) {
    throw validation_error("counts and labels differ in length");
  }
  std::int64_t total = 0;
  for (std::int64_t n : counts) total += n;
  if (total <= 0) throw validation_error("rarity weights need at least one observation");
  std::vector<double> frequencies(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    frequencies[i] = static_cast<double>(counts[i]) / static_cast<double>(total);
  }
  return rarity_weights(labels, frequencies);
}

/// Multiplicative composition of M >= 2 criteria columns:
/// w_i = prod_j m_ij / sum_k prod_j m_kj. Each column must itself be a
/// simplex vector; non-normalized columns are rejected rather than fixed up.
inline WeightVector composite_weights(const std::vector<std::string>& labels,
                                      const std::vector<std::vector<double>>& columns) {
  if (columns.size() < 2) {
    throw validation_error("composite weights need at least 2 criteria");
  }
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j].size() != labels.size()) {
      throw validation_error("criteria column " + std::to_string(j) +
                             " does not match the label set size");
    }
    double sum = 0.0;
    for (double m : columns[j]) {
      if (m < 0.0) {
        throw validation_error("criteria column " + std::to_string(j) + " has a negative entry");
      }
      sum += m;
    }
    if (std::abs(sum - 1.0) > 1e-6) {
      throw validation_error("criteria column " + std::to_string(j) + " sums to " +
                             detail::format_number(sum) + ", expected a normalized simplex vector");
    }
  }
  return WeightVector(labels, detail::composite_raw(columns));
}

enum class FillPolicy { even, rarity };

/// Keeps the user-specified weights and distributes the remaining mass
/// (1 - sum specified) over the unspecified classes, either evenly or
/// proportionally to their rarity.
inline WeightVector partial_fill(const std::map<std::string, double>& specified,
                                 const std::vector<std::string>& labels,
                                 FillPolicy policy = FillPolicy::even,
                                 const std::vector<double>* frequencies = nullptr) {
  for (const auto& [label, value] : specified) {
    if (std::find(labels.begin(), labels.end(), label) == labels.end()) {
      throw validation_error("weight specified for unknown class '" + label + "'");
    }
    if (!(value >= 0.0 && value <= 1.0)) {
      throw validation_error("weight for class '" + label + "' is " +
                             detail::format_number(value) + ", outside [0, 1]");
    }
  }
  double specified_sum = 0.0;
  for (const auto& [label, value] : specified) specified_sum += value;
  if (specified_sum > 1.0 + 1e-6) {
    throw validation_error("specified weights sum to " + detail::format_number(specified_sum) +
                           ", may not exceed 1");
  }

  std::vector<std::size_t> unspecified;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (specified.find(labels[i]) == specified.end()) unspecified.push_back(i);
  }
  std::vector<double> weights(labels.size(), 0.0);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto it = specified.find(labels[i]);
    if (it != specified.end()) weights[i] = it->second;
  }

  if (unspecified.empty()) {
    // Fully specified input reduces to the plain user scheme.
    return user_weights(specified, labels);
  }

  const double remainder = std::max(0.0, 1.0 - specified_sum);
  if (policy == FillPolicy::even) {
    const double share = remainder / static_cast<double>(unspecified.size());
    for (std::size_t i : unspecified) weights[i] = share;
  } else {
    if (frequencies == nullptr) {
      throw validation_error("rarity fill policy requires class frequencies");
    }
    if (frequencies->size() != labels.size()) {
      throw validation_error("frequencies and labels differ in length");
    }
    double inverse_sum = 0.0;
    for (std::size_t i : unspecified) {
      if (!((*frequencies)[i] > 0.0)) {
        throw validation_error("rarity fill undefined: class '" + labels[i] +
                               "' has zero or negative frequency");
      }
      inverse_sum += 1.0 / (*frequencies)[i];
    }
    for (std::size_t i : unspecified) {
      weights[i] = remainder * (1.0 / (*frequencies)[i]) / inverse_sum;
    }
  }
  return WeightVector(labels, std::move(weights));
}

enum class WeightScheme { user, rarity, composite, partial };

inline const char* scheme_name(WeightScheme scheme) {
  switch (scheme) {
    case WeightScheme::user: return "user";
    case WeightScheme::rarity: return "rarity";
    case WeightScheme::composite: return "composite";
    case WeightScheme::partial: return "partial";
  }
  return "?";
}

struct WeightCriterion {
  std::string name;
  std::map<std::string, double> weights;

  bool operator==(const WeightCriterion&) const = default;
};

/// Declarative description of how a weight vector is produced; resolved
/// against a concrete label set and, for rarity-based schemes, a
/// ground-truth class distribution.
struct WeightSpec {
  WeightScheme scheme = WeightScheme::rarity;
  std::map<std::string, double> user;       // user and partial schemes
  FillPolicy fill = FillPolicy::even;       // partial scheme
  std::vector<WeightCriterion> criteria;    // composite scheme

  bool operator==(const WeightSpec&) const = default;
};

/// One-line description of a spec, printed in report headers so the active
/// scheme is never silent.
inline std::string describe(const WeightSpec& spec) {
  std::string out = scheme_name(spec.scheme);
  if (spec.scheme == WeightScheme::user || spec.scheme == WeightScheme::partial) {
    out += "(";
    bool first = true;
    for (const auto& [label, value] : spec.user) {
      if (!first) out += ", ";
      out += label + "=" + detail::format_number(value);
      first = false;
    }
    if (spec.scheme == WeightScheme::partial) {
      if (!spec.user.empty()) out += "; ";
      out += std::string("fill=") + (spec.fill == FillPolicy::even ? "even" : "rarity");
    }
    out += ")";
  } else if (spec.scheme == WeightScheme::composite) {
    out += "(";
    for (std::size_t i = 0; i < spec.criteria.size(); ++i) {
      if (i > 0) out += " x ";
      out += spec.criteria[i].name.empty() ? ("criterion" + std::to_string(i + 1))
                                           : spec.criteria[i].name;
    }
    out += ")";
  }
  return out;
}

/// Resolves a spec against a label set whose ground-truth cardinalities are
/// known. Classes absent from the truth (count 0) are never part of the
/// observed class distribution: rarity mass and fill mass go to the present
/// classes only and absent classes get weight 0, which marks them ignored.
/// The user scheme stays strict and requires a weight for every label.
inline WeightVector resolve_weights(const WeightSpec& spec,
                                    const std::vector<std::string>& labels,
                                    const std::vector<std::int64_t>& truth_counts) {
  if (truth_counts.size() != labels.size()) {
    throw validation_error("truth counts and labels differ in length");
  }
  std::int64_t total = 0;
  for (std::int64_t n : truth_counts) total += n;
  if (total <= 0) throw validation_error("weight resolution needs at least one observation");

  auto present_frequency = [&](std::size_t i) {
    return static_cast<double>(truth_counts[i]) / static_cast<double>(total);
  };

  switch (spec.scheme) {
    case WeightScheme::user:
      return user_weights(spec.user, labels);

    case WeightScheme::rarity: {
      double inverse_sum = 0.0;
      for (std::size_t i = 0; i < labels.size(); ++i) {
        if (truth_counts[i] > 0) inverse_sum += 1.0 / present_frequency(i);
      }
      std::vector<double> weights(labels.size(), 0.0);
      for (std::size_t i = 0; i < labels.size(); ++i) {
        if (truth_counts[i] > 0) weights[i] = (1.0 / present_frequency(i)) / inverse_sum;
      }
      return WeightVector(labels, std::move(weights));
    }

    case WeightScheme::composite: {
      if (spec.criteria.size() < 2) {
        throw validation_error("composite weights need at least 2 criteria");
      }
      std::vector<std::vector<double>> columns;
      columns.reserve(spec.criteria.size());
      for (std::size_t j = 0; j < spec.criteria.size(); ++j) {
        const auto& criterion = spec.criteria[j];
        std::vector<double> column;
        column.reserve(labels.size());
        for (const auto& label : labels) {
          auto it = criterion.weights.find(label);
          if (it == criterion.weights.end()) {
            throw validation_error("criterion '" +
                                   (criterion.name.empty() ? std::to_string(j) : criterion.name) +
                                   "' has no weight for class '" + label + "'");
          }
          column.push_back(it->second);
        }
        columns.push_back(std::move(column));
      }
      return composite_weights(labels, columns);
    }

    case WeightScheme::partial: {
      for (const auto& [label, value] : spec.user) {
        if (std::find(labels.begin(), labels.end(), label) == labels.end()) {
          throw validation_error("weight specified for unknown class '" + label + "'");
        }
        if (!(value >= 0.0 && value <= 1.0)) {
          throw validation_error("weight for class '" + label + "' is " +
                                 detail::format_number(value) + ", outside [0, 1]");
        }
      }
      double specified_sum = 0.0;
      for (const auto& [label, value] : spec.user) specified_sum += value;
      if (specified_sum > 1.0 + 1e-6) {
        throw validation_error("specified weights sum to " + detail::format_number(specified_sum) +
                               ", may not exceed 1");
      }
      std::vector<double> weights(labels.size(), 0.0);
      std::vector<std::size_t> fill_targets;  // unspecified classes present in the truth
      for (std::size_t i = 0; i < labels.size(); ++i) {
        auto it = spec.user.find(labels[i]);
        if (it != spec.user.end()) {
          weights[i] = it->second;
        } else if (truth_counts[i] > 0) {
          fill_targets.push_back(i);
        }
      }
      const double remainder = std::max(0.0, 1.0 - specified_sum);
      if (fill_targets.empty()) {
        if (remainder > 1e-6) {
          throw validation_error("remaining weight mass " + detail::format_number(remainder) +
                                 " has no unspecified class to go to");
        }
      } else if (spec.fill == FillPolicy::even) {
        const double share = remainder / static_cast<double>(fill_targets.size());
        for (std::size_t i : fill_targets) weights[i] = share;
      } else {
        double inverse_sum = 0.0;
        for (std::size_t i : fill_targets) inverse_sum += 1.0 / present_frequency(i);
        for (std::size_t i : fill_targets) {
          weights[i] = remainder * (1.0 / present_frequency(i)) / inverse_sum;
        }
      }
      return WeightVector(labels, std::move(weights));
    }
  }
  throw validation_error("unknown weight scheme");
}

}  // namespace wba
