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

#include "migr/rewards.hpp"

#include "migr/errors.hpp"

namespace migr {

SegmentKind description_kind(ModalityImportance mi) {
  switch (mi) {
    case ModalityImportance::Audio: return SegmentKind::AudDesc;
    case ModalityImportance::Visual: return SegmentKind::VisDesc;
    default: break;
  }
  throw UnresolvedMiError(
      "description_kind requires a resolved single modality");
}

namespace {

void require_single_modality(ModalityImportance mi, const char* op) {
  if (mi != ModalityImportance::Audio && mi != ModalityImportance::Visual) {
    throw UnresolvedMiError(std::string(op) +
                            " requires modality importance audio or visual");
  }
}

}  // namespace

double mao_reward(const ReasoningTrace& trace, ModalityImportance mi,
                  const EmotionLabel& target,
                  const SentenceClassifier& classifier) {
  require_single_modality(mi, "mao_reward");
  if (trace.segments.empty()) return 0.0;
  SegmentKind want = description_kind(mi);
  const Segment& first = trace.segments.front();
  if (first.kind != want) return 0.0;
  std::vector<std::string> sentences = split_sentences(first.text);
  std::set<EmotionLabel> detected = emotion_set(sentences, classifier);
  return detected.contains(target) ? 1.0 : 0.0;
}

double mgr_reward(const ReasoningTrace& trace, ModalityImportance mi,
                  const EmotionLabel& target,
                  const SentenceClassifier& classifier) {
  require_single_modality(mi, "mgr_reward");
  std::vector<std::string> sentences;
  if (auto desc = trace.segment_text(description_kind(mi))) {
    sentences = split_sentences(*desc);
  }
  if (auto think = trace.segment_text(SegmentKind::Think)) {
    for (auto& s : split_sentences(*think)) sentences.push_back(std::move(s));
  }
  if (sentences.empty()) return 0.0;  // 0/0 convention
  long on_target = 0;
  for (const std::string& s : sentences) {
    ClassifierVerdict v = classifier.classify(s);
    if (v.label == target) ++on_target;
  }
  return static_cast<double>(on_target) /
         static_cast<double>(sentences.size());
}

double answer_reward(const ReasoningTrace& trace, const EmotionLabel& target,
                     const Taxonomy& taxonomy) {
  auto answer = trace.segment_text(SegmentKind::Answer);
  if (!answer) return 0.0;
  auto label = taxonomy.normalize(*answer);
  return label == target ? 1.0 : 0.0;
}

RewardBreakdown score(const ReasoningTrace& trace, ModalityImportance mi,
                      const EmotionLabel& target,
                      const SentenceClassifier& classifier,
                      const Taxonomy& taxonomy) {
  if (mi == ModalityImportance::Unresolved) {
    throw UnresolvedMiError("score requires a resolved modality importance");
  }
  ModalityImportance effective = mi;
  if (mi == ModalityImportance::Both) {
    // Either ordering is acceptable for a Both sample: ground against the
    // modality the rollout actually led with.
    effective = ModalityImportance::Audio;
    if (!trace.segments.empty() &&
        trace.segments.front().kind == SegmentKind::VisDesc) {
      effective = ModalityImportance::Visual;
    }
  }
  RewardBreakdown out;
  out.r_mao = mao_reward(trace, effective, target, classifier);
  out.r_mgr = mgr_reward(trace, effective, target, classifier);
  out.r_answer = answer_reward(trace, target, taxonomy);
  out.r_total = out.r_mao + out.r_mgr + out.r_answer;
  return out;
}

}  // namespace migr
