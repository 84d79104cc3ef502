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

#include <istream>
#include <optional>
#include <string>

#include "json.hpp"
#include "migr/classifier.hpp"
#include "migr/databuild.hpp"
#include "migr/grposim.hpp"
#include "migr/metrics.hpp"
#include "migr/mi.hpp"
#include "migr/rewards.hpp"
#include "migr/taxonomy.hpp"
#include "migr/trace.hpp"

namespace migr {

// Output preserves insertion order so stream outputs are diffable.
using Json = nlohmann::ordered_json;

/// Parse a whole file; errors carry the path.
Json load_json_file(const std::string& path);

// ---- config files -------------------------------------------------------
// Taxonomy:   {"name": ..., "labels": [...], "aliases": {surface: label}}
// Tokens:     {"aud_desc": {"open": ..., "close": ...}, ...}
// Lexicon:    {"taxonomy": ..., "entries": {keyword: label}}
// Fau table:  {"taxonomy": ..., "entries": {label: [au, ...]}}
// Unknown top-level fields (e.g. "note") are ignored.

Taxonomy taxonomy_from_json(const Json& j);
Json taxonomy_to_json(const Taxonomy& taxonomy);

TokenConfig token_config_from_json(const Json& j);
Json token_config_to_json(const TokenConfig& tokens);

/// The file's "taxonomy" field, when present, must equal taxonomy.name().
Lexicon lexicon_from_json(const Json& j, const Taxonomy& taxonomy);
Json lexicon_to_json(const Lexicon& lexicon);

FauEmotionTable fau_table_from_json(const Json& j, const Taxonomy& taxonomy);
Json fau_table_to_json(const FauEmotionTable& table);

// ---- JSON Lines records --------------------------------------------------

/// Required string field normalized through the taxonomy; throws
/// ValidationError naming the field when missing or unmappable.
EmotionLabel label_field(const Json& j, const char* field,
                         const Taxonomy& taxonomy);

/// {"pred_audio": ..., "pred_visual": ..., "pred_av": ...}; absent or
/// unmappable predictions become absent entries (counted incorrect).
PredictionTriple triple_from_json(const Json& j, const Taxonomy& taxonomy);

/// RawSample line: {"id", "target", "aud_text", "vis_text", "think_text",
/// "pred_audio", "pred_visual", "pred_av", "fau"?}. A flat "reasoning" field
/// may replace the three texts when `decompose` is set. Throws
/// ValidationError naming the offending field.
RawSample raw_sample_from_json(const Json& j, const Taxonomy& taxonomy,
                               const TokenConfig& tokens,
                               bool decompose = false);

Json training_record_to_json(const TrainingRecord& record);

struct ScoreInput {
  std::string id;
  EmotionLabel target;
  ModalityImportance mi = ModalityImportance::Audio;
  std::string trace_text;
};

/// Score line: {"id", "target", "mi", "trace_text"}.
ScoreInput score_input_from_json(const Json& j, const Taxonomy& taxonomy);

Json reward_row_to_json(const std::string& id, const RewardBreakdown& rb);

struct ParsedEvalRecord {
  EvalRecord record;
  std::optional<std::string> warning;
};

/// Eval line: either explicit {"id", "target", "predicted"?,
/// "reasoning_emotion"?} or a raw trace {"id", "target", "trace_text"}.
/// Explicit fields win; trace_text fills the gaps via the answer segment and
/// the classifier. An unparseable trace leaves both absent and sets warning.
ParsedEvalRecord eval_record_from_json(const Json& j,
                                       const Taxonomy& taxonomy,
                                       const TokenConfig& tokens,
                                       const SentenceClassifier& classifier);

Json metrics_report_to_json(const MetricsReport& report,
                            const Taxonomy& taxonomy);

/// Fixed-width text rendering of the headline metrics (percent, two
/// decimals) plus the inconsistency rates.
std::string metrics_report_table(const MetricsReport& report);

Json step_stats_to_json(const StepStats& stats);
Json eval_stats_to_json(const EvalStats& stats, const char* phase);

Json build_stats_to_json(const BuildStats& stats);

}  // namespace migr
