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

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace migr {

/// One emotion category. `id` is the position inside its taxonomy and
/// doubles as the deterministic tie-break order everywhere in the toolkit.
struct EmotionLabel {
  int id = -1;
  std::string name;

  friend bool operator==(const EmotionLabel&, const EmotionLabel&) = default;
  friend auto operator<=>(const EmotionLabel&, const EmotionLabel&) = default;
};

/// An ordered emotion label set plus a surface-form alias map.
/// Immutable after construction; safe to share across threads.
class Taxonomy {
 public:
  /// `aliases` maps surface strings to canonical label names. Throws
  /// ValidationError when a label is empty, padded, uppercase, duplicated,
  /// or an alias points at an unknown label.
  Taxonomy(std::string name, std::vector<std::string> label_names,
           std::map<std::string, std::string> aliases = {});

  const std::string& name() const { return name_; }
  const std::vector<EmotionLabel>& labels() const { return labels_; }
  size_t size() const { return labels_.size(); }
  const EmotionLabel& label(int id) const { return labels_.at(id); }

  /// Exact canonical-name lookup (input must already be normalized).
  std::optional<EmotionLabel> find(std::string_view canonical_name) const;

  /// Case-insensitive, trimmed lookup through canonical names and aliases.
  /// Absent is a value (unmapped surface form), not an error.
  std::optional<EmotionLabel> normalize(std::string_view text) const;

  /// Alias surface -> canonical name pairs, sorted by surface.
  const std::map<std::string, std::string>& aliases() const {
    return aliases_;
  }

 private:
  std::string name_;
  std::vector<EmotionLabel> labels_;
  std::map<std::string, std::string> aliases_;
  std::unordered_map<std::string, int> lookup_;  // canonical + alias -> id
};

/// Free-function spelling of Taxonomy::normalize.
std::optional<EmotionLabel> normalize_label(std::string_view text,
                                            const Taxonomy& taxonomy);

/// Built-in label sets: "emer" (5), "dfew" (7), "mafw" (11), each with the
/// default alias table. Throws ValidationError for any other name.
const Taxonomy& builtin_taxonomy(std::string_view name);

/// True when `name` selects one of the built-in taxonomies.
bool is_builtin_taxonomy(std::string_view name);

}  // namespace migr
