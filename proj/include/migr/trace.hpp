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

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace migr {

enum class SegmentKind { AudDesc = 0, VisDesc = 1, Think = 2, Answer = 3 };

inline constexpr std::array<SegmentKind, 4> kSegmentKinds = {
    SegmentKind::AudDesc, SegmentKind::VisDesc, SegmentKind::Think,
    SegmentKind::Answer};

const char* to_string(SegmentKind kind);
std::optional<SegmentKind> segment_kind_from_string(std::string_view name);

struct Segment {
  SegmentKind kind;
  std::string text;  // verbatim interior, edge whitespace trimmed

  friend bool operator==(const Segment&, const Segment&) = default;
};

/// Ordered modality-tagged segments of one model output.
struct ReasoningTrace {
  std::vector<Segment> segments;

  /// First segment of `kind`, absent if none. Duplicate kinds are legal in a
  /// parsed trace; the first occurrence wins (see canonical_warnings).
  std::optional<std::string_view> segment_text(SegmentKind kind) const;

  const Segment* first_of(SegmentKind kind) const;

  /// Canonical form: at most one Answer and it is last, at most one AudDesc
  /// and one VisDesc.
  bool is_canonical() const;

  friend bool operator==(const ReasoningTrace&, const ReasoningTrace&) =
      default;
};

/// Human-readable notes for traces that parse but are not canonical.
std::vector<std::string> canonical_warnings(const ReasoningTrace& trace);

struct TokenPair {
  std::string open;
  std::string close;
};

/// Delimiter strings per segment kind. The opener and closer of one kind may
/// be the same string (the description tokens default to that form); tokens
/// of different kinds must not collide.
class TokenConfig {
 public:
  TokenConfig(TokenPair aud_desc, TokenPair vis_desc, TokenPair think,
              TokenPair answer);

  /// <aud_desc>...<aud_desc>, <vis_desc>...<vis_desc>,
  /// <think>...</think>, <answer>...</answer>.
  static TokenConfig defaults();

  const TokenPair& pair(SegmentKind kind) const {
    return pairs_[static_cast<size_t>(kind)];
  }

 private:
  std::array<TokenPair, 4> pairs_;
};

enum class ParseErrorKind {
  UnbalancedDelimiter,  // opener without a matching closer
  NestedSegment,        // delimiter token inside another segment
  TrailingGarbage,      // non-whitespace text outside any segment
};

const char* to_string(ParseErrorKind kind);

struct ParseError {
  ParseErrorKind kind;
  size_t offset = 0;  // byte offset into the input
  std::string message;
};

using ParseResult = std::variant<ReasoningTrace, ParseError>;

/// Parse delimited text into segments, in input order. Whitespace between
/// segments is discarded; segment interiors keep their text verbatim apart
/// from edge trimming. Never throws on malformed input: every failure is one
/// of the three ParseErrorKind cases with a byte offset.
ParseResult parse_trace(std::string_view text, const TokenConfig& tokens);

/// Canonical rendering: one space inside delimiters, one newline between
/// segments, empty trace renders to "". parse_trace(render_trace(t)) == t
/// for every trace whose segment texts are trimmed and delimiter-free.
std::string render_trace(const ReasoningTrace& trace,
                         const TokenConfig& tokens);

/// Split on '.', '!' or '?' followed by whitespace or end of input. Each
/// sentence is trimmed, empties are dropped, and a trailing fragment without
/// terminal punctuation is kept.
std::vector<std::string> split_sentences(std::string_view text);

/// First segment of `kind`, absent if none.
std::optional<std::string_view> segment_text(const ReasoningTrace& trace,
                                             SegmentKind kind);

}  // namespace migr
