// Copyright 2025 The migr Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "migr/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "migr/errors.hpp"

using namespace migr;

namespace {

const Taxonomy& dfew() { return builtin_taxonomy("dfew"); }

EvalRecord rec(int target, std::optional<int> predicted,
               std::optional<int> reasoning) {
  EvalRecord r;
  r.target = dfew().label(target);
  if (predicted) r.predicted = dfew().label(*predicted);
  if (reasoning) r.reasoning_emotion = dfew().label(*reasoning);
  return r;
}

// Literal indicator-sum reference for the five metrics, kept independent of
// the engine implementation.
struct BruteMetrics {
  double war, uar, eea, epc, fcr;
};

BruteMetrics brute_force(const std::vector<EvalRecord>& records) {
  size_t c = dfew().size();
  std::vector<long> tp(c, 0), n(c, 0);
  long eea = 0, epc = 0, fcr = 0;
  for (const EvalRecord& r : records) {
    ++n[r.target.id];
    if (r.predicted && r.predicted->id == r.target.id) ++tp[r.target.id];
    if (r.reasoning_emotion && r.reasoning_emotion->id == r.target.id) ++eea;
    if (r.reasoning_emotion && r.predicted &&
        r.reasoning_emotion->id == r.predicted->id) {
      ++epc;
    }
    if (r.reasoning_emotion && r.predicted &&
        r.reasoning_emotion->id == r.target.id &&
        r.predicted->id == r.target.id) {
      ++fcr;
    }
  }
  long tp_sum = 0, n_sum = 0;
  double recall_sum = 0.0;
  long present = 0;
  for (size_t i = 0; i < c; ++i) {
    tp_sum += tp[i];
    n_sum += n[i];
    if (n[i] > 0) {
      recall_sum += static_cast<double>(tp[i]) / static_cast<double>(n[i]);
      ++present;
    }
  }
  double s = static_cast<double>(records.size());
  return BruteMetrics{static_cast<double>(tp_sum) / static_cast<double>(n_sum),
                      recall_sum / static_cast<double>(present), eea / s,
                      epc / s, fcr / s};
}

std::vector<EvalRecord> random_dataset(std::mt19937& rng, int max_records) {
  int n = 1 + static_cast<int>(rng() % max_records);
  std::vector<EvalRecord> records;
  records.reserve(n);
  for (int i = 0; i < n; ++i) {
    int target = static_cast<int>(rng() % 7);
    std::optional<int> predicted;
    std::optional<int> reasoning;
    if (rng() % 10 < 9) {
      predicted = (rng() % 2) ? target : static_cast<int>(rng() % 7);
    }
    if (rng() % 10 < 9) {
      reasoning = (rng() % 2) ? target : static_cast<int>(rng() % 7);
    }
    records.push_back(rec(target, predicted, reasoning));
  }
  return records;
}

}  // namespace

TEST_CASE("compute_war") {
  SUBCASE("hand case: 2 of 3 correct") {
    std::vector<EvalRecord> records = {rec(0, 0, {}), rec(0, 1, {}),
                                       rec(1, 1, {})};
    CHECK(compute_war(records) == doctest::Approx(2.0 / 3.0));
  }
  SUBCASE("all correct") {
    std::vector<EvalRecord> records = {rec(0, 0, {}), rec(1, 1, {})};
    CHECK(compute_war(records) == 1.0);
  }
  SUBCASE("uniform class sizes make war equal uar") {
    std::vector<EvalRecord> records;
    std::mt19937 rng(5);
    for (int target = 0; target < 7; ++target) {
      for (int i = 0; i < 10; ++i) {
        records.push_back(
            rec(target, (rng() % 2) ? std::optional<int>(target)
                                    : std::optional<int>((target + 1) % 7),
                {}));
      }
    }
    CHECK(compute_war(records) == doctest::Approx(compute_uar(records)));
  }
  SUBCASE("empty dataset") {
    std::vector<EvalRecord> none;
    CHECK_THROWS_AS(compute_war(none), EmptyDatasetError);
  }
}

TEST_CASE("compute_uar") {
  SUBCASE("hand case") {
    std::vector<EvalRecord> records = {rec(0, 0, {}), rec(0, 1, {}),
                                       rec(1, 1, {})};
    CHECK(compute_uar(records) == doctest::Approx(0.75));
  }
  SUBCASE("absent classes are excluded from the mean") {
    std::vector<EvalRecord> records = {rec(2, 2, {}), rec(2, 2, {}),
                                       rec(3, 0, {})};
    CHECK(compute_uar(records) == doctest::Approx(0.5));
  }
}

TEST_CASE("compute_consistency") {
  SUBCASE("identity case") {
    std::vector<EvalRecord> records = {rec(4, 4, 4)};
    ConsistencyTriple c = compute_consistency(records);
    CHECK(c.eea == 1.0);
    CHECK(c.epc == 1.0);
    CHECK(c.fcr == 1.0);
  }
  SUBCASE("consistent but wrong") {
    std::vector<EvalRecord> records = {rec(0, 1, 1), rec(2, 3, 3)};
    ConsistencyTriple c = compute_consistency(records);
    CHECK(c.eea == 0.0);
    CHECK(c.epc == 1.0);
    CHECK(c.fcr == 0.0);
  }
  SUBCASE("six-record hand set against the reference") {
    std::vector<EvalRecord> records = {rec(0, 0, 0), rec(0, 0, 1),
                                       rec(1, 0, 1), rec(1, {}, 1),
                                       rec(2, 2, {}), rec(3, 3, 3)};
    ConsistencyTriple c = compute_consistency(records);
    BruteMetrics b = brute_force(records);
    CHECK(c.eea == doctest::Approx(b.eea));
    CHECK(c.epc == doctest::Approx(b.epc));
    CHECK(c.fcr == doctest::Approx(b.fcr));
    CHECK(c.eea == doctest::Approx(4.0 / 6.0));
    CHECK(c.epc == doctest::Approx(2.0 / 6.0));
    CHECK(c.fcr == doctest::Approx(2.0 / 6.0));
  }
}

TEST_CASE("inconsistency_rates reproduce the reported decomposition") {
  SUBCASE("synthetic set pinned to war=0.7393, fcr=0.6848") {
    std::vector<EvalRecord> records;
    records.reserve(10000);
    for (int i = 0; i < 10000; ++i) {
      int target = i % 7;
      int wrong = (target + 1) % 7;
      if (i < 6848) {
        records.push_back(rec(target, target, target));
      } else if (i < 7393) {
        records.push_back(rec(target, target, wrong));
      } else {
        records.push_back(rec(target, wrong, wrong));
      }
    }
    InconsistencyRates rates = inconsistency_rates(records);
    CHECK(rates.all == doctest::Approx(0.0545).epsilon(1e-9));
    CHECK(rates.among_correct == doctest::Approx(0.0737).epsilon(1e-3));
  }
  SUBCASE("all predictions wrong") {
    std::vector<EvalRecord> records = {rec(0, 1, 0), rec(2, 3, 2)};
    InconsistencyRates rates = inconsistency_rates(records);
    CHECK(rates.all == 0.0);
    CHECK(rates.among_correct == 0.0);
  }
  SUBCASE("all correct with correct reasoning") {
    std::vector<EvalRecord> records = {rec(0, 0, 0), rec(1, 1, 1)};
    InconsistencyRates rates = inconsistency_rates(records);
    CHECK(rates.all == 0.0);
    CHECK(rates.among_correct == 0.0);
  }
}

TEST_CASE("metric invariants on random datasets") {
  std::mt19937 rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<EvalRecord> records = random_dataset(rng, 100);
    MetricsReport report = compute_report(records, dfew());
    BruteMetrics b = brute_force(records);

    CHECK(std::abs(report.war - b.war) < 1e-10);
    CHECK(std::abs(report.uar - b.uar) < 1e-10);
    CHECK(std::abs(report.eea - b.eea) < 1e-10);
    CHECK(std::abs(report.epc - b.epc) < 1e-10);
    CHECK(std::abs(report.fcr - b.fcr) < 1e-10);

    CHECK(report.fcr <= report.eea + 1e-12);
    CHECK(report.fcr <= report.epc + 1e-12);
    CHECK(report.fcr <= report.war + 1e-12);
    CHECK(std::abs(report.inconsistent_all - (report.war - report.fcr)) <
          1e-12);
    if (report.war > 0) {
      CHECK(std::abs(report.inconsistent_among_correct -
                     report.inconsistent_all / report.war) < 1e-12);
    }

    // permutation invariance
    std::shuffle(records.begin(), records.end(), rng);
    MetricsReport again = compute_report(records, dfew());
    CHECK(again.war == report.war);
    CHECK(again.uar == report.uar);
    CHECK(again.fcr == report.fcr);

    // confusion row sums equal class counts
    std::vector<long> class_counts(dfew().size(), 0);
    for (const EvalRecord& r : records) ++class_counts[r.target.id];
    for (size_t row = 0; row < report.confusion.size(); ++row) {
      long sum = 0;
      for (long v : report.confusion[row]) sum += v;
      CHECK(sum == class_counts[row]);
    }
  }
}

TEST_CASE("reasoning_topk") {
  const Lexicon lexicon = default_lexicon(dfew());

  SUBCASE("ranked by matched-sentence count") {
    ReasoningTrace t;
    t.segments = {
        {SegmentKind::VisDesc,
         "Trembling hands. He is shaking. Cowering in the corner. "
         "A gasp escapes. Her widened eyes dart."},
        {SegmentKind::Answer, "fear"}};
    auto top = reasoning_topk(t, lexicon, 2);
    REQUIRE(top.size() == 2);
    CHECK(top[0].name == "fear");      // 3 sentences
    CHECK(top[1].name == "surprise");  // 2 sentences
  }
  SUBCASE("no matches") {
    ReasoningTrace t;
    t.segments = {{SegmentKind::Think, "The table is brown."}};
    CHECK(reasoning_topk(t, lexicon, 2).empty());
  }
  SUBCASE("tie resolves by taxonomy order") {
    ReasoningTrace t;
    t.segments = {{SegmentKind::Think, "Sobbing. Smiling."}};
    auto top = reasoning_topk(t, lexicon, 1);
    REQUIRE(top.size() == 1);
    CHECK(top[0].name == "happy");  // happy(0) precedes sad(1) in dfew
  }
  SUBCASE("answer segment is ignored") {
    ReasoningTrace t;
    t.segments = {{SegmentKind::Answer, "sobbing"}};
    CHECK(reasoning_topk(t, lexicon, 3).empty());
  }
  SUBCASE("one sentence can vote for several labels") {
    ReasoningTrace t;
    t.segments = {{SegmentKind::Think, "Sobbing while smiling."}};
    auto top = reasoning_topk(t, lexicon, 3);
    REQUIRE(top.size() == 2);
  }
  SUBCASE("k must be positive") {
    ReasoningTrace t;
    CHECK_THROWS_AS(reasoning_topk(t, lexicon, 0), ValidationError);
  }
}

TEST_CASE("infer_reasoning_emotion") {
  const Lexicon lexicon = default_lexicon(dfew());
  ReasoningTrace t;
  t.segments = {{SegmentKind::AudDesc, "Sobbing. Weeping."},
                {SegmentKind::Think, "One smiling moment."}};
  auto e = infer_reasoning_emotion(t, lexicon);
  REQUIRE(e.has_value());
  CHECK(e->name == "sad");

  ReasoningTrace empty;
  CHECK_FALSE(infer_reasoning_emotion(empty, lexicon).has_value());
}
