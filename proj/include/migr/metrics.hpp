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

#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "migr/classifier.hpp"
#include "migr/taxonomy.hpp"
#include "migr/trace.hpp"

namespace migr {

/// One evaluated sample: ground truth y, prediction y_hat, and the emotion
/// the reasoning text expresses (e). Absent values count as incorrect in
/// every metric.
struct EvalRecord {
  std::string id;
  EmotionLabel target;
  std::optional<EmotionLabel> predicted;
  std::optional<EmotionLabel> reasoning_emotion;
};

/// Micro accuracy: correct predictions over all records.
double compute_war(std::span<const EvalRecord> records);

/// Macro recall over the classes present in the data; classes with no
/// samples are excluded from the mean.
double compute_uar(std::span<const EvalRecord> records);

struct ConsistencyTriple {
  double eea = 0.0;  // mean 1[e == y]
  double epc = 0.0;  // mean 1[e == y_hat]
  double fcr = 0.0;  // mean 1[e == y and y_hat == y]
};

ConsistencyTriple compute_consistency(std::span<const EvalRecord> records);

struct InconsistencyRates {
  double all = 0.0;            // fraction with y_hat == y and e != y
  double among_correct = 0.0;  // same count over the correctly predicted
};

/// The reasoning-right-answer-wrong decomposition; `all` equals WAR - FCR.
InconsistencyRates inconsistency_rates(std::span<const EvalRecord> records);

struct MetricsReport {
  long records = 0;
  double war = 0.0;
  double uar = 0.0;
  double eea = 0.0;
  double epc = 0.0;
  double fcr = 0.0;
  double inconsistent_all = 0.0;
  double inconsistent_among_correct = 0.0;
  std::map<int, double> per_class_recall;  // label id -> recall, N_i > 0 only
  // confusion[target_id][predicted_id]; the extra last column counts
  // missing/unmappable predictions.
  std::vector<std::vector<long>> confusion;
};

/// One pass over the records. Throws EmptyDatasetError on empty input.
MetricsReport compute_report(std::span<const EvalRecord> records,
                             const Taxonomy& taxonomy);

/// Labels ranked by how many sentences across the non-answer segments carry
/// evidence for them (a sentence can count for several labels); ties break
/// by taxonomy id order; at most k labels returned.
std::vector<EmotionLabel> reasoning_topk(const ReasoningTrace& trace,
                                         const SentenceClassifier& classifier,
                                         int k);

/// Dominant reasoning emotion: reasoning_topk with k = 1, absent when no
/// sentence matches anything. Stand-in for an external judge; a judge can
/// instead fill EvalRecord::reasoning_emotion directly.
std::optional<EmotionLabel> infer_reasoning_emotion(
    const ReasoningTrace& trace, const SentenceClassifier& classifier);

}  // namespace migr
