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
#include <map>

#include "migr/errors.hpp"

namespace migr {

namespace {

void require_nonempty(std::span<const EvalRecord> records, const char* op) {
  if (records.empty()) {
    throw EmptyDatasetError(std::string(op) + " over an empty record set");
  }
}

}  // namespace

double compute_war(std::span<const EvalRecord> records) {
  require_nonempty(records, "compute_war");
  long correct = 0;
  for (const EvalRecord& r : records) {
    if (r.predicted == r.target) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(records.size());
}

double compute_uar(std::span<const EvalRecord> records) {
  require_nonempty(records, "compute_uar");
  // id-ordered accumulation keeps the mean bit-identical under record
  // permutation
  std::map<int, std::pair<long, long>> per_class;  // id -> (tp, n)
  for (const EvalRecord& r : records) {
    auto& [tp, n] = per_class[r.target.id];
    ++n;
    if (r.predicted == r.target) ++tp;
  }
  double sum = 0.0;
  for (const auto& [id, counts] : per_class) {
    sum += static_cast<double>(counts.first) /
           static_cast<double>(counts.second);
  }
  return sum / static_cast<double>(per_class.size());
}

ConsistencyTriple compute_consistency(std::span<const EvalRecord> records) {
  require_nonempty(records, "compute_consistency");
  long eea = 0;
  long epc = 0;
  long fcr = 0;
  for (const EvalRecord& r : records) {
    bool e_matches_y = r.reasoning_emotion == r.target;
    bool pred_matches_y = r.predicted == r.target;
    bool e_matches_pred =
        r.reasoning_emotion.has_value() && r.predicted.has_value() &&
        *r.reasoning_emotion == *r.predicted;
    if (e_matches_y) ++eea;
    if (e_matches_pred) ++epc;
    if (e_matches_y && pred_matches_y) ++fcr;
  }
  double n = static_cast<double>(records.size());
  return ConsistencyTriple{eea / n, epc / n, fcr / n};
}

InconsistencyRates inconsistency_rates(std::span<const EvalRecord> records) {
  require_nonempty(records, "inconsistency_rates");
  long correct = 0;
  long inconsistent = 0;
  for (const EvalRecord& r : records) {
    if (r.predicted == r.target) {
      ++correct;
      if (r.reasoning_emotion != r.target) ++inconsistent;
    }
  }
  InconsistencyRates out;
  out.all = static_cast<double>(inconsistent) /
            static_cast<double>(records.size());
  out.among_correct = correct == 0 ? 0.0
                                   : static_cast<double>(inconsistent) /
                                         static_cast<double>(correct);
  return out;
}

MetricsReport compute_report(std::span<const EvalRecord> records,
                             const Taxonomy& taxonomy) {
  require_nonempty(records, "compute_report");
  MetricsReport report;
  report.records = static_cast<long>(records.size());
  report.war = compute_war(records);
  report.uar = compute_uar(records);
  ConsistencyTriple c = compute_consistency(records);
  report.eea = c.eea;
  report.epc = c.epc;
  report.fcr = c.fcr;
  InconsistencyRates inc = inconsistency_rates(records);
  report.inconsistent_all = inc.all;
  report.inconsistent_among_correct = inc.among_correct;

  size_t n_classes = taxonomy.size();
  report.confusion.assign(n_classes, std::vector<long>(n_classes + 1, 0));
  std::vector<long> tp(n_classes, 0);
  std::vector<long> n(n_classes, 0);
  for (const EvalRecord& r : records) {
    size_t row = static_cast<size_t>(r.target.id);
    size_t col = r.predicted ? static_cast<size_t>(r.predicted->id)
                             : n_classes;  // missing-prediction column
    ++report.confusion.at(row).at(col);
    ++n[row];
    if (r.predicted == r.target) ++tp[row];
  }
  for (size_t id = 0; id < n_classes; ++id) {
    if (n[id] > 0) {
      report.per_class_recall[static_cast<int>(id)] =
          static_cast<double>(tp[id]) / static_cast<double>(n[id]);
    }
  }
  return report;
}

std::vector<EmotionLabel> reasoning_topk(const ReasoningTrace& trace,
                                         const SentenceClassifier& classifier,
                                         int k) {
  if (k < 1) throw ValidationError("reasoning_topk requires k >= 1");
  const Taxonomy& taxonomy = classifier.taxonomy();
  std::vector<long> counts(taxonomy.size(), 0);
  for (const Segment& seg : trace.segments) {
    if (seg.kind == SegmentKind::Answer) continue;
    for (const std::string& sentence : split_sentences(seg.text)) {
      ClassifierVerdict v = classifier.classify(sentence);
      std::set<int> labels_here;
      for (const MatchEvidence& m : v.matched) labels_here.insert(m.label.id);
      for (int id : labels_here) ++counts[id];
    }
  }
  std::vector<int> ids;
  for (size_t id = 0; id < counts.size(); ++id) {
    if (counts[id] > 0) ids.push_back(static_cast<int>(id));
  }
  std::sort(ids.begin(), ids.end(), [&](int a, int b) {
    if (counts[a] != counts[b]) return counts[a] > counts[b];
    return a < b;  // taxonomy order on ties
  });
  if (static_cast<int>(ids.size()) > k) ids.resize(k);
  std::vector<EmotionLabel> out;
  out.reserve(ids.size());
  for (int id : ids) out.push_back(taxonomy.label(id));
  return out;
}

std::optional<EmotionLabel> infer_reasoning_emotion(
    const ReasoningTrace& trace, const SentenceClassifier& classifier) {
  std::vector<EmotionLabel> top = reasoning_topk(trace, classifier, 1);
  if (top.empty()) return std::nullopt;
  return top.front();
}

}  // namespace migr
