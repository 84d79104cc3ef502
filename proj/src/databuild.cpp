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

#include "migr/databuild.hpp"

#include <algorithm>
#include <array>

#include "migr/errors.hpp"
#include "migr/text.hpp"

namespace migr {

FauEmotionTable::FauEmotionTable(
    const Taxonomy& taxonomy,
    const std::map<std::string, std::vector<int>>& entries)
    : taxonomy_(&taxonomy) {
  for (const auto& [label_name, aus] : entries) {
    auto label = taxonomy.find(label_name);
    if (!label) {
      throw ValidationError("fau table: unknown label '" + label_name +
                            "' in taxonomy '" + taxonomy.name() + "'");
    }
    if (aus.empty()) {
      throw ValidationError("fau table: label '" + label_name +
                            "' has an empty AU set");
    }
    FauSet set;
    for (int au : aus) {
      if (au <= 0) {
        throw ValidationError("fau table: label '" + label_name +
                              "' has non-positive AU id " +
                              std::to_string(au));
      }
      set.insert(au);
    }
    if (!by_label_.emplace(label->id, std::move(set)).second) {
      throw ValidationError("fau table: duplicate entry for label '" +
                            label_name + "'");
    }
  }
}

const FauSet* FauEmotionTable::find(const EmotionLabel& label) const {
  auto it = by_label_.find(label.id);
  return it == by_label_.end() ? nullptr : &it->second;
}

FauEmotionTable default_fau_table(const Taxonomy& taxonomy) {
  static const std::map<std::string, std::vector<int>> kPrototypes = {
      {"happy", {6, 12}},
      {"sad", {1, 4, 15}},
      {"surprise", {1, 2, 5, 26}},
      {"fear", {1, 2, 4, 5, 7, 20, 26}},
      {"angry", {4, 5, 7, 23}},
      {"disgust", {9, 15}},
  };
  std::map<std::string, std::vector<int>> filtered;
  for (const auto& [name, aus] : kPrototypes) {
    if (taxonomy.find(name)) filtered.emplace(name, aus);
  }
  return FauEmotionTable(taxonomy, filtered);
}

bool fau_filter(const FauSet& sample_fau, const EmotionLabel& target,
                const FauEmotionTable& table, FauMatchMode mode) {
  const FauSet* prototype = table.find(target);
  if (!prototype) {
    throw MissingTableEntry("fau table has no entry for label '" +
                            target.name + "'");
  }
  if (mode == FauMatchMode::Exact) return sample_fau == *prototype;
  return std::includes(sample_fau.begin(), sample_fau.end(),
                       prototype->begin(), prototype->end());
}

std::vector<TrainingRecord> reorder(const RawSample& sample,
                                    ModalityImportance mi,
                                    const TokenConfig& tokens) {
  if (mi == ModalityImportance::Unresolved) {
    throw UnresolvedMiError("cannot reorder sample '" + sample.id +
                            "': modality importance is unresolved");
  }
  auto make = [&](bool audio_first) {
    ReasoningTrace trace;
    Segment aud{SegmentKind::AudDesc, std::string(trim(sample.aud_text))};
    Segment vis{SegmentKind::VisDesc, std::string(trim(sample.vis_text))};
    if (audio_first) {
      trace.segments = {aud, vis};
    } else {
      trace.segments = {vis, aud};
    }
    trace.segments.push_back(
        Segment{SegmentKind::Think, std::string(trim(sample.think_text))});
    trace.segments.push_back(Segment{SegmentKind::Answer, sample.target.name});
    return TrainingRecord{sample.id, mi, render_trace(trace, tokens),
                          sample.target};
  };
  switch (mi) {
    case ModalityImportance::Audio: return {make(true)};
    case ModalityImportance::Visual: return {make(false)};
    case ModalityImportance::Both: return {make(true), make(false)};
    case ModalityImportance::Unresolved: break;
  }
  return {};
}

std::vector<TrainingRecord> process_sample(const RawSample& sample,
                                           const FauEmotionTable& table,
                                           const BuildOptions& options,
                                           const TokenConfig& tokens,
                                           BuildStats& stats) {
  ++stats.input;
  if (options.require_fau && sample.fau.has_value()) {
    // Labels without a prototype (neutral and the compound categories)
    // bypass the gate.
    if (table.find(sample.target) != nullptr &&
        !fau_filter(*sample.fau, sample.target, table, options.fau_mode)) {
      ++stats.fau_rejected;
      return {};
    }
  }
  ModalityImportance mi = estimate_mi(sample.triple, sample.target);
  if (mi == ModalityImportance::Unresolved) {
    ++stats.unresolved_dropped;
    return {};
  }
  switch (mi) {
    case ModalityImportance::Audio: ++stats.kept_audio; break;
    case ModalityImportance::Visual: ++stats.kept_visual; break;
    case ModalityImportance::Both: ++stats.kept_both; break;
    case ModalityImportance::Unresolved: break;
  }
  std::vector<TrainingRecord> records = reorder(sample, mi, tokens);
  stats.emitted += static_cast<long>(records.size());
  return records;
}

namespace {

bool has_cue(const std::string& lowered,
             const std::vector<std::string>& cues) {
  for (const std::string& cue : cues) {
    size_t at = lowered.find(cue);
    while (at != std::string::npos) {
      bool left = at == 0 || !is_word_char(lowered[at - 1]);
      bool right = at + cue.size() == lowered.size() ||
                   !is_word_char(lowered[at + cue.size()]);
      if (left && right) return true;
      at = lowered.find(cue, at + 1);
    }
  }
  return false;
}

}  // namespace

DecomposedReasoning decompose_reasoning(std::string_view reasoning) {
  static const std::vector<std::string> kAudioCues = {
      "voice", "tone", "sound", "audio", "speech", "says", "saying",
      "hear", "heard", "vocal", "music", "spoken", "silence"};
  static const std::vector<std::string> kVisualCues = {
      "face", "facial", "eyes", "eyebrow", "eyebrows", "expression",
      "visual", "frame", "video", "looks", "looking", "appears", "gesture",
      "mouth", "posture"};

  DecomposedReasoning out;
  auto append = [](std::string& dst, const std::string& sentence) {
    if (!dst.empty()) dst += ' ';
    dst += sentence;
  };
  for (const std::string& sentence : split_sentences(reasoning)) {
    std::string lowered = to_lower(sentence);
    bool audio = has_cue(lowered, kAudioCues);
    bool visual = has_cue(lowered, kVisualCues);
    if (audio && !visual) {
      append(out.aud_text, sentence);
    } else if (visual && !audio) {
      append(out.vis_text, sentence);
    } else {
      append(out.think_text, sentence);
    }
  }
  return out;
}

}  // namespace migr
