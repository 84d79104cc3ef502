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

#include "migr/trace.hpp"

#include <algorithm>

#include "migr/errors.hpp"
#include "migr/text.hpp"

namespace migr {

const char* to_string(SegmentKind kind) {
  switch (kind) {
    case SegmentKind::AudDesc: return "aud_desc";
    case SegmentKind::VisDesc: return "vis_desc";
    case SegmentKind::Think: return "think";
    case SegmentKind::Answer: return "answer";
  }
  return "?";
}

std::optional<SegmentKind> segment_kind_from_string(std::string_view name) {
  for (SegmentKind k : kSegmentKinds) {
    if (name == to_string(k)) return k;
  }
  return std::nullopt;
}

const Segment* ReasoningTrace::first_of(SegmentKind kind) const {
  for (const Segment& s : segments) {
    if (s.kind == kind) return &s;
  }
  return nullptr;
}

std::optional<std::string_view> ReasoningTrace::segment_text(
    SegmentKind kind) const {
  const Segment* s = first_of(kind);
  if (!s) return std::nullopt;
  return std::string_view(s->text);
}

bool ReasoningTrace::is_canonical() const {
  int counts[4] = {0, 0, 0, 0};
  for (const Segment& s : segments) ++counts[static_cast<size_t>(s.kind)];
  if (counts[static_cast<size_t>(SegmentKind::AudDesc)] > 1) return false;
  if (counts[static_cast<size_t>(SegmentKind::VisDesc)] > 1) return false;
  if (counts[static_cast<size_t>(SegmentKind::Answer)] > 1) return false;
  if (counts[static_cast<size_t>(SegmentKind::Answer)] == 1 &&
      segments.back().kind != SegmentKind::Answer) {
    return false;
  }
  return true;
}

std::vector<std::string> canonical_warnings(const ReasoningTrace& trace) {
  std::vector<std::string> warnings;
  int counts[4] = {0, 0, 0, 0};
  for (const Segment& s : trace.segments) {
    ++counts[static_cast<size_t>(s.kind)];
  }
  for (SegmentKind k :
       {SegmentKind::AudDesc, SegmentKind::VisDesc, SegmentKind::Answer}) {
    if (counts[static_cast<size_t>(k)] > 1) {
      warnings.push_back(std::string("duplicate <") + to_string(k) +
                         "> segment; first occurrence wins");
    }
  }
  if (counts[static_cast<size_t>(SegmentKind::Answer)] >= 1 &&
      trace.segments.back().kind != SegmentKind::Answer) {
    warnings.push_back("answer segment is not last");
  }
  return warnings;
}

TokenConfig::TokenConfig(TokenPair aud_desc, TokenPair vis_desc,
                         TokenPair think, TokenPair answer)
    : pairs_{std::move(aud_desc), std::move(vis_desc), std::move(think),
             std::move(answer)} {
  for (const TokenPair& p : pairs_) {
    if (p.open.empty() || p.close.empty()) {
      throw ValidationError("token config: delimiters must be nonempty");
    }
  }
  // Same-kind open==close is the single-token form; cross-kind collisions
  // make parsing ambiguous and are rejected.
  for (size_t i = 0; i < pairs_.size(); ++i) {
    for (size_t j = i + 1; j < pairs_.size(); ++j) {
      const TokenPair& a = pairs_[i];
      const TokenPair& b = pairs_[j];
      if (a.open == b.open || a.open == b.close || a.close == b.open ||
          a.close == b.close) {
        throw ValidationError(
            std::string("token config: '") +
            (a.open == b.open || a.open == b.close ? a.open : a.close) +
            "' is used by both " + to_string(static_cast<SegmentKind>(i)) +
            " and " + to_string(static_cast<SegmentKind>(j)));
      }
    }
  }
}

TokenConfig TokenConfig::defaults() {
  return TokenConfig({"<aud_desc>", "<aud_desc>"},
                     {"<vis_desc>", "<vis_desc>"}, {"<think>", "</think>"},
                     {"<answer>", "</answer>"});
}

const char* to_string(ParseErrorKind kind) {
  switch (kind) {
    case ParseErrorKind::UnbalancedDelimiter: return "unbalanced delimiter";
    case ParseErrorKind::NestedSegment: return "nested segment";
    case ParseErrorKind::TrailingGarbage: return "trailing garbage";
  }
  return "?";
}

namespace {

struct TokenRef {
  SegmentKind kind;
  bool is_close;
  const std::string* text;
};

bool matches_at(std::string_view text, size_t pos, const std::string& token) {
  return text.compare(pos, token.size(), token) == 0;
}

// Earliest occurrence of any delimiter at or after `from`; longest token
// wins at equal positions. Returns npos when none occurs.
size_t find_next_token(std::string_view text, size_t from,
                       const std::vector<TokenRef>& tokens,
                       const TokenRef** hit) {
  for (size_t pos = from; pos < text.size(); ++pos) {
    const TokenRef* best = nullptr;
    for (const TokenRef& t : tokens) {
      if (matches_at(text, pos, *t.text)) {
        if (!best || t.text->size() > best->text->size()) best = &t;
      }
    }
    if (best) {
      *hit = best;
      return pos;
    }
  }
  return std::string_view::npos;
}

}  // namespace

ParseResult parse_trace(std::string_view text, const TokenConfig& tokens) {
  std::vector<TokenRef> all;
  for (SegmentKind k : kSegmentKinds) {
    const TokenPair& p = tokens.pair(k);
    all.push_back({k, false, &p.open});
    if (p.close != p.open) all.push_back({k, true, &p.close});
  }

  ReasoningTrace trace;
  size_t pos = 0;
  while (pos < text.size()) {
    if (is_ascii_space(text[pos])) {
      ++pos;
      continue;
    }
    // Longest opener match at this position.
    const TokenPair* open_pair = nullptr;
    SegmentKind open_kind = SegmentKind::AudDesc;
    for (SegmentKind k : kSegmentKinds) {
      const TokenPair& p = tokens.pair(k);
      if (matches_at(text, pos, p.open) &&
          (!open_pair || p.open.size() > open_pair->open.size())) {
        open_pair = &p;
        open_kind = k;
      }
    }
    if (!open_pair) {
      return ParseError{ParseErrorKind::TrailingGarbage, pos,
                        "non-whitespace text outside any segment at byte " +
                            std::to_string(pos)};
    }
    size_t open_at = pos;
    size_t interior_start = pos + open_pair->open.size();

    const TokenRef* hit = nullptr;
    size_t hit_at = find_next_token(text, interior_start, all, &hit);
    if (hit_at == std::string_view::npos) {
      return ParseError{ParseErrorKind::UnbalancedDelimiter, open_at,
                        std::string("<") + to_string(open_kind) +
                            "> opener at byte " + std::to_string(open_at) +
                            " has no matching closer"};
    }
    // Inside a segment the only legal token is this kind's closer. The
    // closer takes precedence when another token also matches here.
    if (!matches_at(text, hit_at, open_pair->close)) {
      return ParseError{ParseErrorKind::NestedSegment, hit_at,
                        std::string("delimiter inside <") +
                            to_string(open_kind) + "> segment at byte " +
                            std::to_string(hit_at)};
    }
    std::string_view interior =
        text.substr(interior_start, hit_at - interior_start);
    trace.segments.push_back(
        Segment{open_kind, std::string(trim(interior))});
    pos = hit_at + open_pair->close.size();
  }
  return trace;
}

std::string render_trace(const ReasoningTrace& trace,
                         const TokenConfig& tokens) {
  std::string out;
  for (size_t i = 0; i < trace.segments.size(); ++i) {
    const Segment& s = trace.segments[i];
    const TokenPair& p = tokens.pair(s.kind);
    if (i > 0) out += '\n';
    out += p.open;
    out += ' ';
    out += s.text;
    out += ' ';
    out += p.close;
  }
  return out;
}

std::vector<std::string> split_sentences(std::string_view text) {
  std::vector<std::string> out;
  size_t start = 0;
  for (size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    bool terminal = (c == '.' || c == '!' || c == '?') &&
                    (i + 1 == text.size() || is_ascii_space(text[i + 1]));
    if (terminal) {
      std::string_view sentence = trim(text.substr(start, i + 1 - start));
      if (!sentence.empty()) out.emplace_back(sentence);
      start = i + 1;
    }
  }
  if (start < text.size()) {
    std::string_view tail = trim(text.substr(start));
    if (!tail.empty()) out.emplace_back(tail);
  }
  return out;
}

std::optional<std::string_view> segment_text(const ReasoningTrace& trace,
                                             SegmentKind kind) {
  return trace.segment_text(kind);
}

}  // namespace migr
