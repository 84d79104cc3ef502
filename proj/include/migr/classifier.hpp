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
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "migr/taxonomy.hpp"

namespace migr {

struct MatchEvidence {
  std::string keyword;
  EmotionLabel label;
  size_t offset = 0;  // first word-boundary occurrence in the sentence
};

struct ClassifierVerdict {
  std::optional<EmotionLabel> label;  // present iff matched is nonempty
  std::vector<MatchEvidence> matched;
};

/// Sentence-level emotion classifier interface. The toolkit ships a keyword
/// lexicon; a model-backed judge can be swapped in behind this interface
/// without touching rewards or metrics.
class SentenceClassifier {
 public:
  virtual ~SentenceClassifier() = default;
  virtual ClassifierVerdict classify(std::string_view sentence) const = 0;
  virtual const Taxonomy& taxonomy() const = 0;
};

struct LexiconEntry {
  std::string keyword;  // lowercase word or phrase
  int label_id = -1;
};

/// Deterministic keyword/phrase lexicon.
///
/// Matching is a case-insensitive scan on ASCII word boundaries. When a
/// matched span lies strictly inside another matched span, the longer match
/// wins. Ties across labels resolve by matched-keyword count, then taxonomy
/// id order. Immutable after construction.
class Lexicon final : public SentenceClassifier {
 public:
  /// `entries` maps keyword -> canonical label name. Throws ValidationError
  /// on empty/uppercase keywords or unknown labels.
  Lexicon(const Taxonomy& taxonomy,
          const std::map<std::string, std::string>& entries);

  ClassifierVerdict classify(std::string_view sentence) const override;
  const Taxonomy& taxonomy() const override { return *taxonomy_; }

  /// Entries sorted by keyword.
  const std::vector<LexiconEntry>& entries() const { return entries_; }

  /// Smallest keyword mapped to `label_id`, absent when the label has none.
  std::optional<std::string_view> keyword_for(int label_id) const;

 private:
  const Taxonomy* taxonomy_;
  std::vector<LexiconEntry> entries_;
};

ClassifierVerdict classify_sentence(std::string_view sentence,
                                    const SentenceClassifier& classifier);

/// Union of the verdict labels over `sentences` (E_m when applied to one
/// modality segment's sentences).
std::set<EmotionLabel> emotion_set(std::span<const std::string> sentences,
                                   const SentenceClassifier& classifier);

/// Default keyword table restricted to the labels of `taxonomy`. Heuristic
/// defaults meant to be replaced by per-dataset config.
Lexicon default_lexicon(const Taxonomy& taxonomy);

/// The raw default keyword -> label-name table (before taxonomy filtering).
const std::map<std::string, std::string>& default_lexicon_entries();

}  // namespace migr
