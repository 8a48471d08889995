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
#include <cstddef>
#include <string>
#include <vector>

#include "wba/error.hpp"
#include "wba/weights.hpp"

namespace wba {

/// A batch of classifier scores for training with class-importance weights.
/// `logits` is row-major items x classes; `targets[b]` is the true class
/// index of item b; `weights` is aligned to the class axis by index.
struct LogitBatch {
  std::vector<double> logits;
  std::size_t items = 0;
  std::size_t classes = 0;
  std::vector<std::size_t> targets;
  WeightVector weights;
};

namespace detail {

inline void check_batch(const LogitBatch& batch) {
  if (batch.items < 1) throw validation_error("logit batch needs at least one item");
  if (batch.classes < 1) throw validation_error("logit batch needs at least one class");
  if (batch.logits.size() != batch.items * batch.classes) {
    throw validation_error("logit matrix shape does not match items x classes");
  }
  if (batch.targets.size() != batch.items) {
    throw validation_error("one target class index is needed per item");
  }
  if (batch.weights.size() != batch.classes) {
    throw validation_error("weight vector length does not match the class count");
  }
  for (std::size_t target : batch.targets) {
    if (target >= batch.classes) {
      throw validation_error("target class index " + std::to_string(target) + " is out of range");
    }
  }
}

/// Sum of the per-item true-class weights; the loss normalizer.
inline double target_weight_total(const LogitBatch& batch) {
  double total = 0.0;
  for (std::size_t b = 0; b < batch.items; ++b) {
    total += batch.weights[batch.targets[b]];
  }
  if (total <= 0.0) {
    throw validation_error("loss undefined: every item in the batch has a zero-weight true class");
  }
  return total;
}

/// log(sum_j exp(z_j)) with max subtraction.
inline double log_sum_exp(const double* row, std::size_t classes) {
  double max = row[0];
  for (std::size_t j = 1; j < classes; ++j) max = std::max(max, row[j]);
  double sum = 0.0;
  for (std::size_t j = 0; j < classes; ++j) sum += std::exp(row[j] - max);
  return max + std::log(sum);
}

}  // namespace detail

/// Class-weighted negative log-likelihood over a softmax:
///   loss = sum_b w[y_b] * (-log softmax(z_b)[y_b]) / sum_b w[y_b].
/// Normalizing by the batch's target weights (not the batch size) makes
/// uniform weights reproduce plain mean cross-entropy and keeps the loss
/// scale independent of the weight scheme.
inline double weighted_nll(const LogitBatch& batch) {
  detail::check_batch(batch);
  const double total = detail::target_weight_total(batch);
  double sum = 0.0;
  for (std::size_t b = 0; b < batch.items; ++b) {
    const double* row = batch.logits.data() + b * batch.classes;
    const double nll = detail::log_sum_exp(row, batch.classes) - row[batch.targets[b]];
    sum += batch.weights[batch.targets[b]] * nll;
  }
  return sum / total;
}

/// Analytic gradient of weighted_nll with respect to the logits:
///   d loss / d z[b][j] = (w[y_b] / sum_b w[y_b]) * (softmax(z_b)[j] - [j == y_b]).
/// Returned row-major, same shape as the input logits.
inline std::vector<double> weighted_nll_grad(const LogitBatch& batch) {
  detail::check_batch(batch);
  const double total = detail::target_weight_total(batch);
  std::vector<double> grad(batch.items * batch.classes, 0.0);
  for (std::size_t b = 0; b < batch.items; ++b) {
    const double* row = batch.logits.data() + b * batch.classes;
    const double scale = batch.weights[batch.targets[b]] / total;
    double max = row[0];
    for (std::size_t j = 1; j < batch.classes; ++j) max = std::max(max, row[j]);
    double denom = 0.0;
    for (std::size_t j = 0; j < batch.classes; ++j) denom += std::exp(row[j] - max);
    for (std::size_t j = 0; j < batch.classes; ++j) {
      const double softmax = std::exp(row[j] - max) / denom;
      grad[b * batch.classes + j] = scale * (softmax - (j == batch.targets[b] ? 1.0 : 0.0));
    }
  }
  return grad;
}

}  // namespace wba
