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

#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "test_support.hpp"
#include "wba/metrics.hpp"

using Catch::Approx;
using namespace wba;

namespace {

ConfusionMatrix matrix(std::vector<std::string> labels, std::vector<std::int64_t> counts) {
  return ConfusionMatrix(std::move(labels), std::move(counts));
}

// 3-class example: n = (10, 20, 70), diagonal (1, 4, 60).
ConfusionMatrix example_matrix() {
  return matrix({"A", "B", "C"},
                {1, 2, 7,
                 3, 4, 13,
                 4, 6, 60});
}

}  // namespace

TEST_CASE("accuracy") {
  SECTION("counts correct predictions over N") {
    REQUIRE(accuracy(example_matrix()).value == 0.65);
    REQUIRE(accuracy(example_matrix()).notes.empty());
  }
  SECTION("perfect classifier scores 1") {
    REQUIRE(accuracy(matrix({"x", "y"}, {4, 0, 0, 9})).value == 1.0);
  }
  SECTION("all-wrong classifier scores 0") {
    REQUIRE(accuracy(matrix({"x", "y"}, {0, 7, 3, 0})).value == 0.0);
  }
  SECTION("empty matrix is rejected") {
    REQUIRE_THROWS_AS(accuracy(matrix({"x", "y"}, {0, 0, 0, 0})), validation_error);
  }
}

TEST_CASE("per-class stats") {
  const auto stats = class_stats(example_matrix());
  REQUIRE(stats.size() == 3);
  REQUIRE(stats[0].accuracy == Approx(0.10).margin(1e-15));
  REQUIRE(stats[1].accuracy == Approx(0.20).margin(1e-15));
  REQUIRE(stats[2].accuracy == Approx(60.0 / 70.0).margin(1e-15));
  SECTION("frequencies sum to 1 and recall equals accuracy") {
    double sum = 0.0;
    for (const auto& s : stats) {
      sum += s.frequency;
      REQUIRE(s.recall == s.accuracy);
    }
    REQUIRE(sum == Approx(1.0).margin(1e-12));
  }
  SECTION("empty class stays undefined") {
    const auto degenerate = class_stats(matrix({"A", "B"}, {3, 2, 0, 0}));
    REQUIRE(degenerate[0].accuracy == Approx(0.6).margin(1e-15));
    REQUIRE_FALSE(degenerate[1].accuracy.has_value());
    REQUIRE_FALSE(degenerate[1].f1.has_value());
    // B was predicted twice, never correctly
    REQUIRE(degenerate[1].precision == Approx(0.0).margin(1e-15));
  }
  SECTION("class that is never predicted has undefined precision") {
    const auto stats2 = class_stats(matrix({"A", "B"}, {2, 0, 1, 0}));
    REQUIRE_FALSE(stats2[1].precision.has_value());
    REQUIRE(stats2[1].recall == Approx(0.0).margin(1e-15));
  }
}

TEST_CASE("balanced accuracy") {
  SECTION("macro-average of per-class accuracies") {
    const auto ba = balanced_accuracy(example_matrix());
    REQUIRE(ba.value == Approx((0.1 + 0.2 + 60.0 / 70.0) / 3.0).margin(1e-15));
    REQUIRE(ba.value >= 0.38);
    REQUIRE(ba.value < 0.39);
    REQUIRE(ba.notes.empty());
  }
  SECTION("equals accuracy on balanced datasets") {
    const auto cm = matrix({"A", "B"}, {3, 2, 1, 4});  // both rows total 5
    REQUIRE(balanced_accuracy(cm).value == Approx(accuracy(cm).value).margin(1e-15));
  }
  SECTION("two singleton classes") {
    REQUIRE(balanced_accuracy(matrix({"A", "B"}, {1, 0, 1, 0})).value == 0.5);
  }
  SECTION("empty classes are skipped and noted") {
    const auto ba = balanced_accuracy(matrix({"A", "B"}, {3, 2, 0, 0}));
    REQUIRE(ba.value == Approx(0.6).margin(1e-15));
    REQUIRE(ba.notes.size() == 1);
    REQUIRE(ba.notes[0].label == "B");
  }
}

TEST_CASE("weighted balanced accuracy") {
  SECTION("importance-weighted sum of per-class accuracies") {
    const WeightVector w({"A", "B", "C"}, {0.15, 0.7, 0.15});
    const auto value = weighted_balanced_accuracy(example_matrix(), w);
    REQUIRE(value.value == Approx(0.15 * 0.1 + 0.7 * 0.2 + 0.15 * (60.0 / 70.0)).margin(1e-15));
    REQUIRE(value.value == Approx(0.2836).margin(5e-5));
  }
  SECTION("uniform weights reduce to balanced accuracy, exactly") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
      std::uniform_int_distribution<std::size_t> class_count(1, 6);
      const std::size_t classes = class_count(rng);
      const ConfusionMatrix cm(testsupport::make_labels(classes),
                               testsupport::random_counts(rng, classes, 20));
      const auto uniform = WeightVector::uniform(cm.labels());
      REQUIRE(weighted_balanced_accuracy(cm, uniform).value == balanced_accuracy(cm).value);
    }
  }
  SECTION("frequency weights reduce to accuracy") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
      std::uniform_int_distribution<std::size_t> class_count(1, 6);
      const std::size_t classes = class_count(rng);
      const ConfusionMatrix cm(testsupport::make_labels(classes),
                               testsupport::random_counts(rng, classes, 20));
      std::vector<double> frequencies(classes);
      for (std::size_t i = 0; i < classes; ++i) {
        frequencies[i] =
            static_cast<double>(cm.row_total(i)) / static_cast<double>(cm.total());
      }
      const WeightVector w(cm.labels(), frequencies);
      REQUIRE(weighted_balanced_accuracy(cm, w).value ==
              Approx(accuracy(cm).value).margin(1e-12));
    }
  }
  SECTION("zero-weight class may be empty; positive weight may not") {
    const auto cm = matrix({"A", "B"}, {3, 2, 0, 0});
    const auto ok = weighted_balanced_accuracy(cm, WeightVector({"A", "B"}, {1.0, 0.0}));
    REQUIRE(ok.value == Approx(0.6).margin(1e-15));
    REQUIRE(ok.notes.size() == 1);
    REQUIRE_THROWS_AS(weighted_balanced_accuracy(cm, WeightVector({"A", "B"}, {0.5, 0.5})),
                      validation_error);
  }
  SECTION("misaligned labels are rejected") {
    REQUIRE_THROWS_AS(
        weighted_balanced_accuracy(example_matrix(), WeightVector({"A", "C", "B"}, {0.2, 0.3, 0.5})),
        validation_error);
  }
}

TEST_CASE("weighted macro metrics") {
  SECTION("identity matrix scores 1 for all kinds") {
    const auto cm = matrix({"A", "B", "C"}, {5, 0, 0, 0, 2, 0, 0, 0, 9});
    const WeightVector w({"A", "B", "C"}, {0.2, 0.5, 0.3});
    for (MacroKind kind : {MacroKind::precision, MacroKind::recall, MacroKind::f1}) {
      REQUIRE(weighted_macro(cm, w, kind).value == Approx(1.0).margin(1e-15));
    }
  }
  SECTION("symmetric 2-class example") {
    const auto cm = matrix({"A", "B"}, {3, 1, 1, 3});
    const WeightVector w({"A", "B"}, {0.5, 0.5});
    for (MacroKind kind : {MacroKind::precision, MacroKind::recall, MacroKind::f1}) {
      REQUIRE(weighted_macro(cm, w, kind).value == Approx(0.75).margin(1e-15));
    }
  }
  SECTION("recall kind is exactly wba") {
    std::mt19937 rng(23);
    for (int trial = 0; trial < 200; ++trial) {
      std::uniform_int_distribution<std::size_t> class_count(1, 6);
      const std::size_t classes = class_count(rng);
      const ConfusionMatrix cm(testsupport::make_labels(classes),
                               testsupport::random_counts(rng, classes, 20));
      const WeightVector w(cm.labels(), testsupport::random_simplex(rng, classes));
      REQUIRE(weighted_macro(cm, w, MacroKind::recall).value ==
              weighted_balanced_accuracy(cm, w).value);
    }
  }
  SECTION("empty predicted column resolves precision to 0 with a note") {
    // Nothing is ever predicted as B.
    const auto cm = matrix({"A", "B"}, {2, 0, 1, 0});
    const auto precision = weighted_macro(cm, WeightVector({"A", "B"}, {0.5, 0.5}),
                                          MacroKind::precision);
    REQUIRE(precision.value == Approx(0.5 * (2.0 / 3.0)).margin(1e-15));
    REQUIRE(precision.notes.size() == 1);
    REQUIRE(precision.notes[0].label == "B");
  }
  SECTION("F1 is 0 when precision and recall are both 0") {
    const auto cm = matrix({"A", "B"}, {0, 2, 2, 0});  // everything crosses over
    const auto f1 = weighted_macro(cm, WeightVector({"A", "B"}, {0.5, 0.5}), MacroKind::f1);
    REQUIRE(f1.value == 0.0);
    REQUIRE_FALSE(f1.notes.empty());
  }
}

TEST_CASE("metric properties") {
  SECTION("values stay in [0, 1] and permuting classes with weights changes nothing") {
    std::mt19937 rng(31);
    for (int trial = 0; trial < 100; ++trial) {
      std::uniform_int_distribution<std::size_t> class_count(2, 5);
      const std::size_t classes = class_count(rng);
      auto labels = testsupport::make_labels(classes);
      auto counts = testsupport::random_counts(rng, classes, 15);
      const ConfusionMatrix cm(labels, counts);
      const auto weights = testsupport::random_simplex(rng, classes);
      const WeightVector w(labels, weights);

      std::vector<std::size_t> perm(classes);
      for (std::size_t i = 0; i < classes; ++i) perm[i] = i;
      std::shuffle(perm.begin(), perm.end(), rng);
      std::vector<std::string> plabels(classes);
      std::vector<double> pweights(classes);
      std::vector<std::int64_t> pcounts(classes * classes);
      for (std::size_t i = 0; i < classes; ++i) {
        plabels[i] = labels[perm[i]];
        pweights[i] = weights[perm[i]];
        for (std::size_t j = 0; j < classes; ++j) {
          pcounts[i * classes + j] = counts[perm[i] * classes + perm[j]];
        }
      }
      const ConfusionMatrix pcm(plabels, pcounts);
      const WeightVector pw(plabels, pweights);

      for (MetricKind kind : {MetricKind::accuracy, MetricKind::balanced_accuracy, MetricKind::wba,
                              MetricKind::wprecision, MetricKind::wf1}) {
        const double value = compute_metric(cm, kind, &w).value;
        const double permuted = compute_metric(pcm, kind, &pw).value;
        REQUIRE(value >= 0.0);
        REQUIRE(value <= 1.0);
        REQUIRE(value == Approx(permuted).margin(1e-12));
      }
    }
  }
  SECTION("moving mass from an off-diagonal cell to the diagonal never hurts") {
    std::mt19937 rng(37);
    for (int trial = 0; trial < 100; ++trial) {
      std::uniform_int_distribution<std::size_t> class_count(2, 5);
      const std::size_t classes = class_count(rng);
      const auto labels = testsupport::make_labels(classes);
      auto counts = testsupport::random_counts(rng, classes, 15);
      const WeightVector w(labels, testsupport::random_simplex(rng, classes));

      std::uniform_int_distribution<std::size_t> pick(0, classes - 1);
      const std::size_t row = pick(rng);
      std::size_t col = pick(rng);
      if (col == row) col = (col + 1) % classes;
      if (counts[row * classes + col] == 0) continue;
      auto improved = counts;
      --improved[row * classes + col];
      ++improved[row * classes + row];

      const ConfusionMatrix before(labels, counts);
      const ConfusionMatrix after(labels, improved);
      REQUIRE(accuracy(after).value >= accuracy(before).value);
      REQUIRE(balanced_accuracy(after).value >= balanced_accuracy(before).value);
      REQUIRE(weighted_balanced_accuracy(after, w).value >=
              weighted_balanced_accuracy(before, w).value);
    }
  }
  SECTION("every metric matches the brute-force recomputation from raw pairs") {
    std::mt19937 rng(41);
    for (int trial = 0; trial < 100; ++trial) {
      const auto pairs = testsupport::random_pairs(rng, 5, 50);
      const auto cm = ConfusionMatrix::from_pairs(pairs);
      const auto weights = testsupport::random_simplex(rng, cm.size());
      std::map<std::string, double> weight_map;
      for (std::size_t i = 0; i < cm.size(); ++i) weight_map[cm.labels()[i]] = weights[i];
      const WeightVector w(cm.labels(), weights);

      REQUIRE(accuracy(cm).value == Approx(testsupport::brute_accuracy(pairs)).margin(1e-12));
      REQUIRE(balanced_accuracy(cm).value ==
              Approx(testsupport::brute_balanced_accuracy(pairs)).margin(1e-12));
      REQUIRE(weighted_balanced_accuracy(cm, w).value ==
              Approx(testsupport::brute_wba(pairs, weight_map)).margin(1e-12));
      REQUIRE(weighted_macro(cm, w, MacroKind::precision).value ==
              Approx(testsupport::brute_macro(pairs, weight_map, testsupport::BruteMacro::precision))
                  .margin(1e-12));
      REQUIRE(weighted_macro(cm, w, MacroKind::f1).value ==
              Approx(testsupport::brute_macro(pairs, weight_map, testsupport::BruteMacro::f1))
                  .margin(1e-12));
    }
  }
}

TEST_CASE("metric kinds") {
  REQUIRE(metric_from_name("wba") == MetricKind::wba);
  REQUIRE(metric_from_name("ba") == MetricKind::balanced_accuracy);
  REQUIRE_FALSE(metric_from_name("auc").has_value());
  REQUIRE(metric_uses_weights(MetricKind::wf1));
  REQUIRE_FALSE(metric_uses_weights(MetricKind::f1));

  SECTION("unweighted macro recall equals balanced accuracy") {
    const auto cm = example_matrix();
    REQUIRE(compute_metric(cm, MetricKind::recall).value == balanced_accuracy(cm).value);
  }
  SECTION("weighted kinds require a weight vector") {
    REQUIRE_THROWS_AS(compute_metric(example_matrix(), MetricKind::wba), validation_error);
  }
}
