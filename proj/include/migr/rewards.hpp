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

#include "migr/classifier.hpp"
#include "migr/mi.hpp"
#include "migr/taxonomy.hpp"
#include "migr/trace.hpp"

namespace migr {

/// Per-rollout reward components. r_total is always the exact sum; r_mao and
/// r_answer are 0/1, r_mgr sits in [0, 1].
struct RewardBreakdown {
  double r_mao = 0.0;
  double r_mgr = 0.0;
  double r_answer = 0.0;
  double r_total = 0.0;

  friend bool operator==(const RewardBreakdown&, const RewardBreakdown&) =
      default;
};

/// Modality-aligned order reward: 1 iff the trace opens with the description
/// segment of `mi` and the target is detected among that segment's
/// sentences. Requires mi in {Audio, Visual}; throws UnresolvedMiError
/// otherwise (Both is resolved by score()).
double mao_reward(const ReasoningTrace& trace, ModalityImportance mi,
                  const EmotionLabel& target,
                  const SentenceClassifier& classifier);

/// Modality-grounded reasoning reward: the fraction of sentences from the
/// mi-description segment plus the think segment whose verdict equals the
/// target. Sentences form an ordered multiset (duplicates count); an empty
/// sentence set scores 0. Requires mi in {Audio, Visual}.
double mgr_reward(const ReasoningTrace& trace, ModalityImportance mi,
                  const EmotionLabel& target,
                  const SentenceClassifier& classifier);

/// 1 iff the answer segment normalizes to the target label. A missing or
/// unmappable answer scores 0.
double answer_reward(const ReasoningTrace& trace, const EmotionLabel& target,
                     const Taxonomy& taxonomy);

/// All three components plus their sum. For mi == Both the order and
/// grounding components are evaluated with m = the modality of the trace's
/// leading description segment; a Both trace that does not open with a
/// description segment gets r_mao = 0 and is grounded against audio.
/// Throws UnresolvedMiError for Unresolved.
RewardBreakdown score(const ReasoningTrace& trace, ModalityImportance mi,
                      const EmotionLabel& target,
                      const SentenceClassifier& classifier,
                      const Taxonomy& taxonomy);

/// Description segment kind for a resolved single modality.
SegmentKind description_kind(ModalityImportance mi);

}  // namespace migr
