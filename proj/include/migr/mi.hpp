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

#include <optional>
#include <span>
#include <string_view>
#include <utility>

#include "migr/taxonomy.hpp"

namespace migr {

/// The emotion-dominant modality of a sample. Unresolved samples never feed
/// reordering; the data build drops them and reports the count.
enum class ModalityImportance { Audio, Visual, Both, Unresolved };

const char* to_string(ModalityImportance mi);
std::optional<ModalityImportance> mi_from_string(std::string_view name);

/// Predicted label under each input condition. Absent means the prediction
/// was missing or did not normalize; it counts as incorrect.
struct PredictionTriple {
  std::optional<EmotionLabel> audio_only;
  std::optional<EmotionLabel> visual_only;
  std::optional<EmotionLabel> audio_visual;
};

/// Decision table over a := audio_only==target, v := visual_only==target,
/// av := audio_visual==target:
///
///   a  !v  *   -> Audio
///  !a   v  *   -> Visual
///   a   v  *   -> Both
///  !a  !v  av  -> Both        (fusion-only success: both contribute)
///  !a  !v !av  -> Unresolved
ModalityImportance estimate_mi(const PredictionTriple& triple,
                               const EmotionLabel& target);

struct MiCounts {
  long audio = 0;
  long visual = 0;
  long both = 0;
  long unresolved = 0;

  long total() const { return audio + visual + both + unresolved; }
  friend bool operator==(const MiCounts&, const MiCounts&) = default;
};

MiCounts mi_distribution(
    std::span<const std::pair<PredictionTriple, EmotionLabel>> samples);

}  // namespace migr
