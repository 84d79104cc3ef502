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

#include "migr/taxonomy.hpp"

#include "migr/errors.hpp"
#include "migr/text.hpp"

namespace migr {

Taxonomy::Taxonomy(std::string name, std::vector<std::string> label_names,
                   std::map<std::string, std::string> aliases)
    : name_(std::move(name)), aliases_(std::move(aliases)) {
  if (name_.empty()) throw ValidationError("taxonomy name must be nonempty");
  labels_.reserve(label_names.size());
  for (auto& ln : label_names) {
    if (ln.empty()) {
      throw ValidationError("taxonomy '" + name_ + "': empty label name");
    }
    if (ln != to_lower(trim(ln))) {
      throw ValidationError("taxonomy '" + name_ + "': label '" + ln +
                            "' must be lowercase with no padding");
    }
    int id = static_cast<int>(labels_.size());
    auto [_, inserted] = lookup_.emplace(ln, id);
    if (!inserted) {
      throw ValidationError("taxonomy '" + name_ + "': duplicate label '" +
                            ln + "'");
    }
    labels_.push_back(EmotionLabel{id, std::move(ln)});
  }
  for (const auto& [surface, canonical] : aliases_) {
    auto it = lookup_.find(canonical);
    if (it == lookup_.end() ||
        static_cast<size_t>(it->second) >= labels_.size() ||
        labels_[it->second].name != canonical) {
      throw ValidationError("taxonomy '" + name_ + "': alias '" + surface +
                            "' maps to unknown label '" + canonical + "'");
    }
    std::string key = to_lower(trim(surface));
    if (key.empty()) {
      throw ValidationError("taxonomy '" + name_ + "': empty alias surface");
    }
    lookup_.emplace(key, it->second);  // canonical names win on collision
  }
}

std::optional<EmotionLabel> Taxonomy::find(
    std::string_view canonical_name) const {
  auto it = lookup_.find(std::string(canonical_name));
  if (it == lookup_.end()) return std::nullopt;
  const EmotionLabel& l = labels_[it->second];
  return l.name == canonical_name ? std::optional<EmotionLabel>(l)
                                  : std::nullopt;
}

std::optional<EmotionLabel> Taxonomy::normalize(std::string_view text) const {
  std::string key = to_lower(trim(text));
  auto it = lookup_.find(key);
  if (it == lookup_.end()) return std::nullopt;
  return labels_[it->second];
}

std::optional<EmotionLabel> normalize_label(std::string_view text,
                                            const Taxonomy& taxonomy) {
  return taxonomy.normalize(text);
}

namespace {

// Shared alias surfaces. Only pairs whose target exists in the taxonomy get
// installed, so e.g. "worried" aliases stay out of DFEW. These defaults are
// editable config, not ground truth.
const std::map<std::string, std::string>& master_aliases() {
  static const std::map<std::string, std::string> kAliases = {
      {"happiness", "happy"},      {"joy", "happy"},
      {"hap", "happy"},            {"sadness", "sad"},
      {"anger", "angry"},          {"ang", "angry"},
      {"mad", "angry"},            {"neu", "neutral"},
      {"surprised", "surprise"},   {"sur", "surprise"},
      {"astonishment", "surprise"},{"disgusted", "disgust"},
      {"dis", "disgust"},          {"fearful", "fear"},
      {"fea", "fear"},             {"afraid", "fear"},
      {"scared", "fear"},          {"worry", "worried"},
      {"anxious", "anxiety"},      {"contemptuous", "contempt"},
      {"disappointed", "disappointment"},
      {"helpless", "helplessness"},
  };
  return kAliases;
}

Taxonomy make_builtin(std::string name, std::vector<std::string> labels) {
  std::map<std::string, std::string> aliases;
  for (const auto& [surface, canonical] : master_aliases()) {
    for (const auto& l : labels) {
      if (l == canonical) {
        aliases.emplace(surface, canonical);
        break;
      }
    }
  }
  return Taxonomy(std::move(name), std::move(labels), std::move(aliases));
}

}  // namespace

const Taxonomy& builtin_taxonomy(std::string_view name) {
  static const Taxonomy kEmer =
      make_builtin("emer", {"angry", "sad", "surprise", "worried", "happy"});
  static const Taxonomy kDfew = make_builtin(
      "dfew",
      {"happy", "sad", "neutral", "angry", "surprise", "disgust", "fear"});
  static const Taxonomy kMafw = make_builtin(
      "mafw",
      {"happy", "sad", "neutral", "angry", "surprise", "disgust", "fear",
       "anxiety", "contempt", "disappointment", "helplessness"});
  if (name == "emer") return kEmer;
  if (name == "dfew") return kDfew;
  if (name == "mafw") return kMafw;
  throw ValidationError("unknown built-in taxonomy '" + std::string(name) +
                        "' (expected emer, dfew, or mafw)");
}

bool is_builtin_taxonomy(std::string_view name) {
  return name == "emer" || name == "dfew" || name == "mafw";
}

}  // namespace migr
