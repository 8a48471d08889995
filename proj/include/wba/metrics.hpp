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

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wba/confusion.hpp"
#include "wba/error.hpp"
#include "wba/weights.hpp"

namespace wba {

enum class MetricKind {
  accuracy,
  balanced_accuracy,
  wba,
  precision,   // macro over classes present in the truth
  recall,      // ditto; identical to balanced_accuracy
  f1,          // ditto
  wprecision,  // importance-weighted macro
  wrecall,     // identical to wba
  wf1,
};

inline const char* metric_name(MetricKind kind) {
  switch (kind) {
    case MetricKind::accuracy: return "accuracy";
    case MetricKind::balanced_accuracy: return "ba";
    case MetricKind::wba: return "wba";
    case MetricKind::precision: return "precision";
    case MetricKind::recall: return "recall";
    case MetricKind::f1: return "f1";
    case MetricKind::wprecision: return "wprecision";
    case MetricKind::wrecall: return "wrecall";
    case MetricKind::wf1: return "wf1";
  }
  return "?";
}

inline std::optional<MetricKind> metric_from_name(std::string_view name) {
  for (MetricKind kind :
       {MetricKind::accuracy, MetricKind::balanced_accuracy, MetricKind::wba, MetricKind::precision,
        MetricKind::recall, MetricKind::f1, MetricKind::wprecision, MetricKind::wrecall, MetricKind::wf1}) {
    if (name == metric_name(kind)) return kind;
  }
  return std::nullopt;
}

/// True for the kinds that take an importance weight vector.
inline bool metric_uses_weights(MetricKind kind) {
  return kind == MetricKind::wba || kind == MetricKind::wprecision ||
         kind == MetricKind::wrecall || kind == MetricKind::wf1;
}

/// Records a class whose per-class component was undefined and how the
/// metric resolved it.
struct DegenerateNote {
  std::string label;
  std::string detail;

  bool operator==(const DegenerateNote&) const = default;
};

struct MetricValue {
  double value = 0.0;
  MetricKind kind = MetricKind::accuracy;
  std::vector<DegenerateNote> notes;

  bool operator==(const MetricValue&) const = default;
};

/// Per-class counts and scores. Undefined components (empty class, empty
/// predicted column) stay empty instead of carrying a silent 0.
struct ClassStat {
  std::string label;
  std::int64_t count = 0;    // n_i
  std::int64_t correct = 0;  // p_i
  double frequency = 0.0;    // f_i = n_i / N
  std::optional<double> accuracy;   // p_i / n_i
  std::optional<double> precision;  // p_i / column total
  std::optional<double> recall;     // same value as accuracy
  std::optional<double> f1;

  bool operator==(const ClassStat&) const = default;
};

namespace detail {

inline void require_observations(const ConfusionMatrix& cm) {
  if (cm.total() < 1) {
    throw validation_error("confusion matrix has no observations");
  }
}

inline void require_aligned(const ConfusionMatrix& cm, const WeightVector& weights) {
  if (weights.labels() != cm.labels()) {
    throw validation_error("weight vector labels do not match the confusion matrix labels");
  }
}

}  // namespace detail

/// All per-class statistics in label order.
inline std::vector<ClassStat> class_stats(const ConfusionMatrix& cm) {
  detail::require_observations(cm);
  const double total = static_cast<double>(cm.total());
  std::vector<ClassStat> stats;
  stats.reserve(cm.size());
  for (std::size_t i = 0; i < cm.size(); ++i) {
    ClassStat s;
    s.label = cm.labels()[i];
    s.count = cm.row_total(i);
    s.correct = cm.correct(i);
    s.frequency = static_cast<double>(s.count) / total;
    const std::int64_t predicted = cm.col_total(i);
    if (s.count > 0) {
      s.accuracy = static_cast<double>(s.correct) / static_cast<double>(s.count);
      s.recall = s.accuracy;
    }
    if (predicted > 0) {
      s.precision = static_cast<double>(s.correct) / static_cast<double>(predicted);
    }
    if (s.recall.has_value() && s.precision.has_value()) {
      const double p = *s.precision;
      const double r = *s.recall;
      s.f1 = (p + r > 0.0) ? 2.0 * p * r / (p + r) : 0.0;
    }
    stats.push_back(std::move(s));
  }
  return stats;
}

/// Overall accuracy: sum of correct predictions over N.
inline MetricValue accuracy(const ConfusionMatrix& cm) {
  detail::require_observations(cm);
  std::int64_t correct = 0;
  for (std::size_t i = 0; i < cm.size(); ++i) correct += cm.correct(i);
  return {static_cast<double>(correct) / static_cast<double>(cm.total()), MetricKind::accuracy, {}};
}

/// Macro-average of the per-class accuracies. Classes that never occur in
/// the truth are excluded from the mean and reported in the notes.
inline MetricValue balanced_accuracy(const ConfusionMatrix& cm) {
  detail::require_observations(cm);
  MetricValue result;
  result.kind = MetricKind::balanced_accuracy;
  std::size_t defined = 0;
  for (std::size_t i = 0; i < cm.size(); ++i) {
    if (cm.row_total(i) > 0) ++defined;
  }
  if (defined == 0) {
    throw validation_error("balanced accuracy undefined: every class is empty");
  }
  // Summing w * acc with w = 1/defined keeps this bit-identical to
  // weighted_balanced_accuracy under uniform weights.
  const double share = 1.0 / static_cast<double>(defined);
  double sum = 0.0;
  for (std::size_t i = 0; i < cm.size(); ++i) {
    const std::int64_t n = cm.row_total(i);
    if (n > 0) {
      sum += share * (static_cast<double>(cm.correct(i)) / static_cast<double>(n));
    } else {
      result.notes.push_back({cm.labels()[i], "no true items; excluded from the mean"});
    }
  }
  result.value = sum;
  return result;
}

/// Importance-weighted sum of per-class accuracies. Every class with a
/// positive weight must occur in the truth; zero-weight classes contribute
/// nothing regardless of whether their accuracy is defined.
inline MetricValue weighted_balanced_accuracy(const ConfusionMatrix& cm, const WeightVector& weights) {
  detail::require_observations(cm);
  detail::require_aligned(cm, weights);
  MetricValue result;
  result.kind = MetricKind::wba;
  double sum = 0.0;
  for (std::size_t i = 0; i < cm.size(); ++i) {
    const double w = weights[i];
    const std::int64_t n = cm.row_total(i);
    if (w == 0.0) {
      if (n == 0) {
        result.notes.push_back({cm.labels()[i], "weight 0 on class with no true items; skipped"});
      }
      continue;
    }
    if (n == 0) {
      throw validation_error("positive weight on class '" + cm.labels()[i] +
                             "' which has no true items");
    }
    sum += w * (static_cast<double>(cm.correct(i)) / static_cast<double>(n));
  }
  result.value = sum;
  return result;
}

enum class MacroKind { precision, recall, f1 };

/// Importance-weighted macro precision / recall / F1. Empty predicted
/// columns resolve precision to 0 and are surfaced in the notes; F1 at
/// precision = recall = 0 is 0 by the limit convention.
inline MetricValue weighted_macro(const ConfusionMatrix& cm, const WeightVector& weights,
                                  MacroKind kind) {
  detail::require_observations(cm);
  detail::require_aligned(cm, weights);
  MetricValue result;
  result.kind = kind == MacroKind::precision ? MetricKind::wprecision
              : kind == MacroKind::recall    ? MetricKind::wrecall
                                             : MetricKind::wf1;
  double sum = 0.0;
  for (std::size_t i = 0; i < cm.size(); ++i) {
    const double w = weights[i];
    const std::int64_t n = cm.row_total(i);
    if (w == 0.0) {
      if (n == 0) {
        result.notes.push_back({cm.labels()[i], "weight 0 on class with no true items; skipped"});
      }
      continue;
    }
    if (n == 0) {
      throw validation_error("positive weight on class '" + cm.labels()[i] +
                             "' which has no true items");
    }
    double component = 0.0;
    if (kind == MacroKind::recall) {
      component = static_cast<double>(cm.correct(i)) / static_cast<double>(n);
    } else {
      const std::int64_t predicted = cm.col_total(i);
      double precision = 0.0;
      if (predicted > 0) {
        precision = static_cast<double>(cm.correct(i)) / static_cast<double>(predicted);
      } else {
        result.notes.push_back({cm.labels()[i], "no predictions for class; precision treated as 0"});
      }
      if (kind == MacroKind::precision) {
        component = precision;
      } else {
        const double recall = static_cast<double>(cm.correct(i)) / static_cast<double>(n);
        if (precision + recall > 0.0) {
          component = 2.0 * precision * recall / (precision + recall);
        } else {
          component = 0.0;
          result.notes.push_back({cm.labels()[i], "precision and recall both 0; F1 treated as 0"});
        }
      }
    }
    sum += w * component;
  }
  result.value = sum;
  return result;
}

/// Computes any metric kind. `weights` is required for the weighted kinds
/// and ignored otherwise; the unweighted macro kinds average uniformly over
/// the classes present in the truth.
inline MetricValue compute_metric(const ConfusionMatrix& cm, MetricKind kind,
                                  const WeightVector* weights = nullptr) {
  auto require_weights = [&]() -> const WeightVector& {
    if (weights == nullptr) {
      throw validation_error(std::string("metric '") + metric_name(kind) +
                             "' needs an importance weight vector");
    }
    return *weights;
  };
  auto uniform_present = [&]() {
    std::vector<bool> present(cm.size());
    for (std::size_t i = 0; i < cm.size(); ++i) present[i] = cm.row_total(i) > 0;
    return WeightVector::uniform_subset(cm.labels(), present);
  };
  MetricValue value;
  switch (kind) {
    case MetricKind::accuracy: return accuracy(cm);
    case MetricKind::balanced_accuracy: return balanced_accuracy(cm);
    case MetricKind::wba: return weighted_balanced_accuracy(cm, require_weights());
    case MetricKind::wprecision: return weighted_macro(cm, require_weights(), MacroKind::precision);
    case MetricKind::wrecall: return weighted_macro(cm, require_weights(), MacroKind::recall);
    case MetricKind::wf1: return weighted_macro(cm, require_weights(), MacroKind::f1);
    case MetricKind::precision:
      value = weighted_macro(cm, uniform_present(), MacroKind::precision);
      break;
    case MetricKind::recall:
      value = weighted_macro(cm, uniform_present(), MacroKind::recall);
      break;
    case MetricKind::f1:
      value = weighted_macro(cm, uniform_present(), MacroKind::f1);
      break;
  }
  value.kind = kind;
  return value;
}

}  // namespace wba
