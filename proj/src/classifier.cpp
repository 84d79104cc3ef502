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

#include "migr/classifier.hpp"

#include <algorithm>

#include "migr/errors.hpp"
#include "migr/text.hpp"

namespace migr {

Lexicon::Lexicon(const Taxonomy& taxonomy,
                 const std::map<std::string, std::string>& entries)
    : taxonomy_(&taxonomy) {
  entries_.reserve(entries.size());
  for (const auto& [keyword, label_name] : entries) {
    if (keyword.empty()) {
      throw ValidationError("lexicon: empty keyword");
    }
    if (keyword != to_lower(trim(keyword))) {
      throw ValidationError("lexicon: keyword '" + keyword +
                            "' must be lowercase with no padding");
    }
    auto label = taxonomy.find(label_name);
    if (!label) {
      throw ValidationError("lexicon: keyword '" + keyword +
                            "' maps to unknown label '" + label_name +
                            "' in taxonomy '" + taxonomy.name() + "'");
    }
    entries_.push_back(LexiconEntry{keyword, label->id});
  }
  // std::map iteration already sorts by keyword.
}

std::optional<std::string_view> Lexicon::keyword_for(int label_id) const {
  for (const LexiconEntry& e : entries_) {
    if (e.label_id == label_id) return std::string_view(e.keyword);
  }
  return std::nullopt;
}

namespace {

struct Span {
  size_t begin;
  size_t end;
  const LexiconEntry* entry;
};

bool boundary_ok(const std::string& text, size_t begin, size_t end) {
  if (begin > 0 && is_word_char(text[begin - 1])) return false;
  if (end < text.size() && is_word_char(text[end])) return false;
  return true;
}

}  // namespace

ClassifierVerdict Lexicon::classify(std::string_view sentence) const {
  std::string haystack = to_lower(sentence);
  std::vector<Span> spans;
  for (const LexiconEntry& e : entries_) {
    size_t from = 0;
    while (true) {
      size_t at = haystack.find(e.keyword, from);
      if (at == std::string::npos) break;
      if (boundary_ok(haystack, at, at + e.keyword.size())) {
        spans.push_back(Span{at, at + e.keyword.size(), &e});
      }
      from = at + 1;
    }
  }
  // Longest match wins: drop spans strictly contained in another span.
  std::vector<Span> kept;
  for (const Span& a : spans) {
    bool contained = std::any_of(spans.begin(), spans.end(), [&](const Span& b) {
      return (b.begin <= a.begin && a.end <= b.end) &&
             (b.end - b.begin > a.end - a.begin);
    });
    if (!contained) kept.push_back(a);
  }
  std::sort(kept.begin(), kept.end(), [](const Span& a, const Span& b) {
    if (a.begin != b.begin) return a.begin < b.begin;
    return a.entry->keyword < b.entry->keyword;
  });

  ClassifierVerdict verdict;
  std::vector<int> votes(taxonomy_->size(), 0);
  for (const Span& s : kept) {
    bool seen = std::any_of(
        verdict.matched.begin(), verdict.matched.end(),
        [&](const MatchEvidence& m) { return m.keyword == s.entry->keyword; });
    if (seen) continue;  // one vote per distinct keyword
    verdict.matched.push_back(MatchEvidence{
        s.entry->keyword, taxonomy_->label(s.entry->label_id), s.begin});
    ++votes[s.entry->label_id];
  }
  if (verdict.matched.empty()) return verdict;

  int best = -1;
  for (size_t id = 0; id < votes.size(); ++id) {
    if (votes[id] > 0 && (best < 0 || votes[id] > votes[best])) {
      best = static_cast<int>(id);  // ties keep the smaller taxonomy id
    }
  }
  verdict.label = taxonomy_->label(best);
  return verdict;
}

ClassifierVerdict classify_sentence(std::string_view sentence,
                                    const SentenceClassifier& classifier) {
  return classifier.classify(sentence);
}

std::set<EmotionLabel> emotion_set(std::span<const std::string> sentences,
                                   const SentenceClassifier& classifier) {
  std::set<EmotionLabel> out;
  for (const std::string& s : sentences) {
    ClassifierVerdict v = classifier.classify(s);
    if (v.label) out.insert(*v.label);
  }
  return out;
}

const std::map<std::string, std::string>& default_lexicon_entries() {
  static const std::map<std::string, std::string> kEntries = {
      {"smiling", "happy"},        {"laughing", "happy"},
      {"cheerful", "happy"},       {"joyful", "happy"},
      {"beaming", "happy"},        {"delighted", "happy"},
      {"sobbing", "sad"},          {"tearful", "sad"},
      {"crying", "sad"},           {"weeping", "sad"},
      {"mournful", "sad"},         {"downcast", "sad"},
      {"calm", "neutral"},         {"composed", "neutral"},
      {"expressionless", "neutral"},
      {"flat tone", "neutral"},    {"matter of fact", "neutral"},
      {"frowning", "angry"},       {"yelling", "angry"},
      {"shouting", "angry"},       {"furious", "angry"},
      {"gritted teeth", "angry"},  {"scowling", "angry"},
      {"widened eyes", "surprise"},{"raised eyebrows", "surprise"},
      {"gasp", "surprise"},        {"astonished", "surprise"},
      {"startled", "surprise"},    {"gaping", "surprise"},
      {"wrinkled nose", "disgust"},{"grimace", "disgust"},
      {"sneering", "disgust"},     {"repulsed", "disgust"},
      {"recoiling", "disgust"},
      {"trembling", "fear"},       {"shaking", "fear"},
      {"terrified", "fear"},       {"panicked", "fear"},
      {"cowering", "fear"},        {"shivering", "fear"},
      {"uneasy", "worried"},       {"apprehensive", "worried"},
      {"fretting", "worried"},
      {"restless", "anxiety"},     {"on edge", "anxiety"},
      {"jittery", "anxiety"},
      {"smirking", "contempt"},    {"scornful", "contempt"},
      {"disdainful", "contempt"},
      {"crestfallen", "disappointment"},
      {"let down", "disappointment"},
      {"deflated", "disappointment"},
      {"resigned", "helplessness"},{"powerless", "helplessness"},
      {"defeated", "helplessness"},
  };
  return kEntries;
}

Lexicon default_lexicon(const Taxonomy& taxonomy) {
  std::map<std::string, std::string> filtered;
  for (const auto& [keyword, label_name] : default_lexicon_entries()) {
    if (taxonomy.find(label_name)) filtered.emplace(keyword, label_name);
  }
  return Lexicon(taxonomy, filtered);
}

}  // namespace migr
