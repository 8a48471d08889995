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
#include "wba/analysis.hpp"

using Catch::Approx;
using namespace wba;

namespace {

// Shared test set, n = (10, 20, 70), with B carrying most of the importance.
// "bulk" excels on the majority class C, "rare" on the important class B.
RunResult bulk_run() {
  return {"bulk",
          ConfusionMatrix({"A", "B", "C"},
                          {1, 2, 7,
                           3, 4, 13,
                           4, 6, 60}),
          ""};
}

RunResult rare_run() {
  return {"rare",
          ConfusionMatrix({"A", "B", "C"},
                          {5, 2, 3,
                           1, 18, 1,
                           25, 25, 20}),
          ""};
}

WeightSpec partial_b_spec() {
  WeightSpec spec;
  spec.scheme = WeightScheme::partial;
  spec.user = {{"B", 0.7}};
  return spec;
}

// Hand-assembled report holding just names, metrics, and scores.
MetricReport scores_only(const std::vector<std::string>& runs,
                         const std::vector<MetricKind>& metrics,
                         const std::vector<std::vector<double>>& values) {
  MetricReport report;
  report.runs = runs;
  report.run_sources.assign(runs.size(), "");
  report.metrics = metrics;
  for (std::size_t r = 0; r < runs.size(); ++r) {
    std::vector<MetricValue> row;
    for (std::size_t m = 0; m < metrics.size(); ++m) {
      row.push_back({values[r][m], metrics[m], {}});
    }
    report.scores.push_back(std::move(row));
  }
  return report;
}

}  // namespace

TEST_CASE("evaluate_suite") {
  SECTION("single run, single metric") {
    const auto report = evaluate_suite({bulk_run()}, WeightSpec{}, {MetricKind::accuracy});
    REQUIRE(report.runs == std::vector<std::string>{"bulk"});
    REQUIRE(report.scores[0][0].value == 0.65);
    REQUIRE(report.rankings.size() == 1);
    REQUIRE(report.rankings[0].order == std::vector<std::string>{"bulk"});
    REQUIRE_FALSE(report.run_weights[0].has_value());  // no weighted metric requested
  }

  SECTION("accuracy and user-weighted wba rank the two runs oppositely") {
    const auto report = evaluate_suite({bulk_run(), rare_run()}, partial_b_spec(),
                                       {MetricKind::accuracy, MetricKind::wba});
    REQUIRE(rank_by(report, MetricKind::accuracy) == std::vector<std::string>{"bulk", "rare"});
    REQUIRE(rank_by(report, MetricKind::wba) == std::vector<std::string>{"rare", "bulk"});
    const auto flip = disagreements(report, MetricKind::accuracy, MetricKind::wba);
    REQUIRE_FALSE(flip.agree);
    REQUIRE(flip.discordant.size() == 1);
    REQUIRE(flip.discordant[0] == std::pair<std::string, std::string>{"bulk", "rare"});
  }

  SECTION("full matrix of runs and metrics with rankings attached") {
    RunResult third{"mid", bulk_run().matrix, ""};
    third.matrix = ConfusionMatrix({"A", "B", "C"},
                                   {5, 3, 2,
                                    5, 10, 5,
                                    10, 10, 50});
    const auto report = evaluate_suite(
        {bulk_run(), rare_run(), third}, partial_b_spec(),
        {MetricKind::accuracy, MetricKind::f1, MetricKind::balanced_accuracy, MetricKind::wba});
    REQUIRE(report.scores.size() == 3);
    REQUIRE(report.scores[0].size() == 4);
    REQUIRE(report.rankings.size() == 4);
    for (const auto& ranking : report.rankings) REQUIRE(ranking.order.size() == 3);
    REQUIRE(report.disagreements.size() == 6);  // every unordered metric pair
  }

  SECTION("rarity weights come from each run's ground truth") {
    WeightSpec rarity;
    rarity.scheme = WeightScheme::rarity;
    const auto report = evaluate_suite({bulk_run(), rare_run()}, rarity, {MetricKind::wba});
    // both runs share row totals (10, 20, 70), so the weights must agree
    REQUIRE(report.run_weights[0].has_value());
    REQUIRE(*report.run_weights[0] == *report.run_weights[1]);
  }

  SECTION("runs with different label sets are union-aligned") {
    const RunResult narrow{"narrow", ConfusionMatrix({"A", "B"}, {3, 1, 1, 3}), ""};
    const RunResult wide{"wide", ConfusionMatrix({"A", "B", "X"}, {3, 1, 0, 1, 3, 0, 0, 0, 0}), ""};
    const auto report =
        evaluate_suite({narrow, wide}, WeightSpec{}, {MetricKind::accuracy, MetricKind::wba});
    REQUIRE(report.labels == std::vector<std::string>{"A", "B", "X"});
    // X never occurs in either truth: rarity gives it weight 0
    REQUIRE((*report.run_weights[0])[2] == 0.0);
    REQUIRE(report.per_class[0].size() == 3);
    REQUIRE(report.scores[0][0].value == report.scores[1][0].value);
  }

  SECTION("duplicate run names and duplicate metrics are rejected") {
    REQUIRE_THROWS_AS(evaluate_suite({bulk_run(), bulk_run()}, WeightSpec{}, {MetricKind::accuracy}),
                      validation_error);
    REQUIRE_THROWS_AS(evaluate_suite({bulk_run()}, WeightSpec{},
                                     {MetricKind::accuracy, MetricKind::accuracy}),
                      validation_error);
  }

  SECTION("identical inputs produce identical reports") {
    const auto a = evaluate_suite({bulk_run(), rare_run()}, partial_b_spec(),
                                  {MetricKind::accuracy, MetricKind::wba, MetricKind::wf1});
    const auto b = evaluate_suite({bulk_run(), rare_run()}, partial_b_spec(),
                                  {MetricKind::accuracy, MetricKind::wba, MetricKind::wf1});
    REQUIRE(a == b);
  }
}

TEST_CASE("rankings") {
  SECTION("descending by score") {
    const auto report = scores_only({"a", "b", "c"}, {MetricKind::accuracy},
                                    {{0.9}, {0.5}, {0.7}});
    const auto ranking = detail::rank_scores(MetricKind::accuracy, report.runs, {0.9, 0.5, 0.7});
    REQUIRE(ranking.order == std::vector<std::string>{"a", "c", "b"});
    REQUIRE(ranking.ties.empty());
  }
  SECTION("ties break lexicographically and are reported") {
    const auto ranking = detail::rank_scores(MetricKind::accuracy, {"b", "a"}, {0.5, 0.5});
    REQUIRE(ranking.order == std::vector<std::string>{"a", "b"});
    REQUIRE(ranking.ties == std::vector<std::vector<std::string>>{{"a", "b"}});
  }
  SECTION("single run ranks alone") {
    const auto ranking = detail::rank_scores(MetricKind::accuracy, {"solo"}, {0.4});
    REQUIRE(ranking.order == std::vector<std::string>{"solo"});
  }
  SECTION("unknown metric is rejected") {
    const auto report = evaluate_suite({bulk_run()}, WeightSpec{}, {MetricKind::accuracy});
    REQUIRE_THROWS_AS(rank_by(report, MetricKind::wba), validation_error);
  }
}

TEST_CASE("disagreements") {
  SECTION("identical rankings agree") {
    const auto report = scores_only({"x", "y"}, {MetricKind::accuracy, MetricKind::balanced_accuracy},
                                    {{0.9, 0.8}, {0.5, 0.4}});
    const auto d = disagreements(report, MetricKind::accuracy, MetricKind::balanced_accuracy);
    REQUIRE(d.agree);
    REQUIRE(d.discordant.empty());
  }
  SECTION("opposite two-run rankings yield one discordant pair") {
    const auto report = scores_only({"x", "y"}, {MetricKind::accuracy, MetricKind::wba},
                                    {{0.9, 0.2}, {0.5, 0.7}});
    const auto d = disagreements(report, MetricKind::accuracy, MetricKind::wba);
    REQUIRE_FALSE(d.agree);
    REQUIRE(d.discordant == std::vector<std::pair<std::string, std::string>>{{"x", "y"}});
  }
  SECTION("(a,b,c) versus (b,a,c) disagrees exactly on {a,b}") {
    const auto report = scores_only({"a", "b", "c"}, {MetricKind::accuracy, MetricKind::wba},
                                    {{0.9, 0.8}, {0.8, 0.9}, {0.1, 0.1}});
    const auto d = disagreements(report, MetricKind::accuracy, MetricKind::wba);
    REQUIRE(d.discordant == std::vector<std::pair<std::string, std::string>>{{"a", "b"}});
  }
  SECTION("ties count as neither concordant nor discordant") {
    const auto report = scores_only({"x", "y"}, {MetricKind::accuracy, MetricKind::wba},
                                    {{0.5, 0.2}, {0.5, 0.7}});
    REQUIRE(disagreements(report, MetricKind::accuracy, MetricKind::wba).agree);
  }
  SECTION("symmetric in the two metrics, empty against itself") {
    std::mt19937 rng(71);
    std::uniform_real_distribution<double> score(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
      std::uniform_int_distribution<std::size_t> run_count(2, 6);
      const std::size_t runs = run_count(rng);
      std::vector<std::string> names;
      std::vector<std::vector<double>> values;
      for (std::size_t r = 0; r < runs; ++r) {
        names.push_back("r" + std::to_string(r));
        values.push_back({score(rng), score(rng)});
      }
      const auto report = scores_only(names, {MetricKind::accuracy, MetricKind::wba}, values);
      const auto ab = disagreements(report, MetricKind::accuracy, MetricKind::wba);
      const auto ba = disagreements(report, MetricKind::wba, MetricKind::accuracy);
      REQUIRE(ab.discordant == ba.discordant);
      REQUIRE(disagreements(report, MetricKind::accuracy, MetricKind::accuracy).discordant.empty());

      // brute-force pair count
      std::size_t expected = 0;
      for (std::size_t x = 0; x < runs; ++x) {
        for (std::size_t y = x + 1; y < runs; ++y) {
          const double da = values[x][0] - values[y][0];
          const double db = values[x][1] - values[y][1];
          if (da * db < 0.0) ++expected;
        }
      }
      REQUIRE(ab.discordant.size() == expected);
    }
  }
}
