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
#include <set>
#include <string>
#include <vector>

#include "migr/mi.hpp"
#include "migr/taxonomy.hpp"
#include "migr/trace.hpp"

namespace migr {

/// Facial action unit ids, set semantics.
using FauSet = std::set<int>;

/// Emotion -> prototypical FAU set. Not every label needs an entry; labels
/// without one (neutral has no prototype) bypass the FAU filter.
class FauEmotionTable {
 public:
  /// `entries` maps canonical label name -> AU ids. Throws ValidationError
  /// on unknown labels, empty sets, or non-positive AU ids.
  FauEmotionTable(const Taxonomy& taxonomy,
                  const std::map<std::string, std::vector<int>>& entries);

  /// nullptr when the label has no prototype.
  const FauSet* find(const EmotionLabel& label) const;

  const Taxonomy& taxonomy() const { return *taxonomy_; }
  const std::map<int, FauSet>& entries() const { return by_label_; }

 private:
  const Taxonomy* taxonomy_;
  std::map<int, FauSet> by_label_;
};

/// EMFACS-style prototype sets for the basic six, restricted to `taxonomy`.
/// Defaults for experimentation, not ground truth.
FauEmotionTable default_fau_table(const Taxonomy& taxonomy);

enum class FauMatchMode {
  Exact,   // sample AU set equals the prototype
  Subset,  // prototype is contained in the sample AU set
};

/// True iff `sample_fau` matches the prototype of `target` under `mode`.
/// Throws MissingTableEntry when the target has no table row.
bool fau_filter(const FauSet& sample_fau, const EmotionLabel& target,
                const FauEmotionTable& table,
                FauMatchMode mode = FauMatchMode::Exact);

/// One input sample: modality-specific reasoning texts plus the prediction
/// triple used for MI estimation. Texts must not contain delimiter tokens.
struct RawSample {
  std::string id;
  EmotionLabel target;
  std::string aud_text;
  std::string vis_text;
  std::string think_text;
  PredictionTriple triple;
  std::optional<FauSet> fau;
};

/// One emitted training record. `rendered` reparses to a trace whose leading
/// segment matches `mi` (either ordering for Both) and whose answer equals
/// the target's canonical name.
struct TrainingRecord {
  std::string id;
  ModalityImportance mi;
  std::string rendered;
  EmotionLabel target;
};

/// Audio -> [aud, vis, think, answer]; Visual -> [vis, aud, think, answer];
/// Both -> both orderings, audio-first record first. Throws UnresolvedMiError
/// for Unresolved.
std::vector<TrainingRecord> reorder(const RawSample& sample,
                                    ModalityImportance mi,
                                    const TokenConfig& tokens);

struct BuildOptions {
  bool require_fau = false;
  FauMatchMode fau_mode = FauMatchMode::Exact;
};

struct BuildStats {
  long input = 0;
  long fau_rejected = 0;
  long unresolved_dropped = 0;
  long kept_audio = 0;
  long kept_visual = 0;
  long kept_both = 0;
  long emitted = 0;       // == kept_audio + kept_visual + 2 * kept_both
  long parse_errors = 0;  // malformed input records, counted by the driver

  long kept() const { return kept_audio + kept_visual + kept_both; }
  friend bool operator==(const BuildStats&, const BuildStats&) = default;
};

/// Pure per-sample pipeline step: FAU gate, MI estimate, reorder. Updates
/// `stats` and returns the records to emit (empty on drop).
std::vector<TrainingRecord> process_sample(const RawSample& sample,
                                           const FauEmotionTable& table,
                                           const BuildOptions& options,
                                           const TokenConfig& tokens,
                                           BuildStats& stats);

/// Sentence router for corpora that ship one flat reasoning text instead of
/// per-modality texts. Sentences with an audio cue go to aud_text, visual
/// cue to vis_text, both or neither to think_text. Heuristic, not part of
/// the core pipeline.
struct DecomposedReasoning {
  std::string aud_text;
  std::string vis_text;
  std::string think_text;
};

DecomposedReasoning decompose_reasoning(std::string_view reasoning);

}  // namespace migr
