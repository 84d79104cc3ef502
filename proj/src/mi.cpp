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

#include "migr/mi.hpp"

namespace migr {

const char* to_string(ModalityImportance mi) {
  switch (mi) {
    case ModalityImportance::Audio: return "audio";
    case ModalityImportance::Visual: return "visual";
    case ModalityImportance::Both: return "both";
    case ModalityImportance::Unresolved: return "unresolved";
  }
  return "?";
}

std::optional<ModalityImportance> mi_from_string(std::string_view name) {
  if (name == "audio") return ModalityImportance::Audio;
  if (name == "visual") return ModalityImportance::Visual;
  if (name == "both") return ModalityImportance::Both;
  if (name == "unresolved") return ModalityImportance::Unresolved;
  return std::nullopt;
}

ModalityImportance estimate_mi(const PredictionTriple& triple,
                               const EmotionLabel& target) {
  bool a = triple.audio_only == target;
  bool v = triple.visual_only == target;
  bool av = triple.audio_visual == target;
  if (a && !v) return ModalityImportance::Audio;
  if (!a && v) return ModalityImportance::Visual;
  if (a && v) return ModalityImportance::Both;
  if (av) return ModalityImportance::Both;
  return ModalityImportance::Unresolved;
}

MiCounts mi_distribution(
    std::span<const std::pair<PredictionTriple, EmotionLabel>> samples) {
  MiCounts counts;
  for (const auto& [triple, target] : samples) {
    switch (estimate_mi(triple, target)) {
      case ModalityImportance::Audio: ++counts.audio; break;
      case ModalityImportance::Visual: ++counts.visual; break;
      case ModalityImportance::Both: ++counts.both; break;
      case ModalityImportance::Unresolved: ++counts.unresolved; break;
    }
  }
  return counts;
}

}  // namespace migr
