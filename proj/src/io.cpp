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

#include "migr/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "migr/errors.hpp"

namespace migr {

namespace {

const Json* find_field(const Json& j, const char* field) {
  if (!j.is_object()) return nullptr;
  auto it = j.find(field);
  if (it == j.end() || it->is_null()) return nullptr;
  return &*it;
}

std::string require_string(const Json& j, const char* field) {
  const Json* v = find_field(j, field);
  if (!v || !v->is_string()) {
    throw ValidationError(std::string("missing or non-string field '") +
                          field + "'");
  }
  return v->get<std::string>();
}

std::optional<std::string> optional_string(const Json& j, const char* field) {
  const Json* v = find_field(j, field);
  if (!v) return std::nullopt;
  if (!v->is_string()) {
    throw ValidationError(std::string("field '") + field +
                          "' must be a string");
  }
  return v->get<std::string>();
}

EmotionLabel require_label(const Json& j, const char* field,
                           const Taxonomy& taxonomy) {
  std::string text = require_string(j, field);
  auto label = taxonomy.normalize(text);
  if (!label) {
    throw ValidationError(std::string("field '") + field + "': '" + text +
                          "' is not a label of taxonomy '" + taxonomy.name() +
                          "'");
  }
  return *label;
}

}  // namespace

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ValidationError("cannot open '" + path + "'");
  }
  Json j = Json::parse(in, nullptr, false);
  if (j.is_discarded()) {
    throw ValidationError("'" + path + "' is not valid JSON");
  }
  return j;
}

Taxonomy taxonomy_from_json(const Json& j) {
  std::string name = require_string(j, "name");
  const Json* labels = find_field(j, "labels");
  if (!labels || !labels->is_array()) {
    throw ValidationError("taxonomy config: missing 'labels' array");
  }
  std::vector<std::string> label_names;
  for (const Json& l : *labels) {
    if (!l.is_string()) {
      throw ValidationError("taxonomy config: labels must be strings");
    }
    label_names.push_back(l.get<std::string>());
  }
  std::map<std::string, std::string> aliases;
  if (const Json* a = find_field(j, "aliases")) {
    if (!a->is_object()) {
      throw ValidationError("taxonomy config: 'aliases' must be an object");
    }
    for (const auto& [surface, canonical] : a->items()) {
      if (!canonical.is_string()) {
        throw ValidationError("taxonomy config: alias '" + surface +
                              "' must map to a string");
      }
      aliases.emplace(surface, canonical.get<std::string>());
    }
  }
  return Taxonomy(std::move(name), std::move(label_names), std::move(aliases));
}

Json taxonomy_to_json(const Taxonomy& taxonomy) {
  Json j;
  j["name"] = taxonomy.name();
  Json labels = Json::array();
  for (const EmotionLabel& l : taxonomy.labels()) labels.push_back(l.name);
  j["labels"] = std::move(labels);
  Json aliases = Json::object();
  for (const auto& [surface, canonical] : taxonomy.aliases()) {
    aliases[surface] = canonical;
  }
  j["aliases"] = std::move(aliases);
  return j;
}

TokenConfig token_config_from_json(const Json& j) {
  auto read_pair = [&](const char* kind) {
    const Json* p = find_field(j, kind);
    if (!p || !p->is_object()) {
      throw ValidationError(std::string("token config: missing '") + kind +
                            "' object");
    }
    return TokenPair{require_string(*p, "open"), require_string(*p, "close")};
  };
  return TokenConfig(read_pair("aud_desc"), read_pair("vis_desc"),
                     read_pair("think"), read_pair("answer"));
}

Json token_config_to_json(const TokenConfig& tokens) {
  Json j;
  for (SegmentKind k : kSegmentKinds) {
    const TokenPair& p = tokens.pair(k);
    j[to_string(k)] = Json{{"open", p.open}, {"close", p.close}};
  }
  return j;
}

Lexicon lexicon_from_json(const Json& j, const Taxonomy& taxonomy) {
  if (auto declared = optional_string(j, "taxonomy")) {
    if (*declared != taxonomy.name()) {
      throw ValidationError("lexicon config is for taxonomy '" + *declared +
                            "' but '" + taxonomy.name() + "' is active");
    }
  }
  const Json* entries = find_field(j, "entries");
  if (!entries || !entries->is_object()) {
    throw ValidationError("lexicon config: missing 'entries' object");
  }
  std::map<std::string, std::string> map;
  for (const auto& [keyword, label] : entries->items()) {
    if (!label.is_string()) {
      throw ValidationError("lexicon config: entry '" + keyword +
                            "' must map to a string label");
    }
    map.emplace(keyword, label.get<std::string>());
  }
  return Lexicon(taxonomy, map);
}

Json lexicon_to_json(const Lexicon& lexicon) {
  Json entries = Json::object();
  for (const LexiconEntry& e : lexicon.entries()) {
    entries[e.keyword] = lexicon.taxonomy().label(e.label_id).name;
  }
  Json j;
  j["taxonomy"] = lexicon.taxonomy().name();
  j["entries"] = std::move(entries);
  return j;
}

FauEmotionTable fau_table_from_json(const Json& j, const Taxonomy& taxonomy) {
  if (auto declared = optional_string(j, "taxonomy")) {
    if (*declared != taxonomy.name()) {
      throw ValidationError("fau table config is for taxonomy '" + *declared +
                            "' but '" + taxonomy.name() + "' is active");
    }
  }
  const Json* entries = find_field(j, "entries");
  if (!entries || !entries->is_object()) {
    throw ValidationError("fau table config: missing 'entries' object");
  }
  std::map<std::string, std::vector<int>> map;
  for (const auto& [label, aus] : entries->items()) {
    if (!aus.is_array()) {
      throw ValidationError("fau table config: entry '" + label +
                            "' must be an array of AU ids");
    }
    std::vector<int> ids;
    for (const Json& v : aus) {
      if (!v.is_number_integer()) {
        throw ValidationError("fau table config: entry '" + label +
                              "' has a non-integer AU id");
      }
      ids.push_back(v.get<int>());
    }
    map.emplace(label, std::move(ids));
  }
  return FauEmotionTable(taxonomy, map);
}

Json fau_table_to_json(const FauEmotionTable& table) {
  Json entries = Json::object();
  for (const auto& [label_id, set] : table.entries()) {
    Json aus = Json::array();
    for (int au : set) aus.push_back(au);
    entries[table.taxonomy().label(label_id).name] = std::move(aus);
  }
  Json j;
  j["taxonomy"] = table.taxonomy().name();
  j["entries"] = std::move(entries);
  return j;
}

EmotionLabel label_field(const Json& j, const char* field,
                         const Taxonomy& taxonomy) {
  return require_label(j, field, taxonomy);
}

PredictionTriple triple_from_json(const Json& j, const Taxonomy& taxonomy) {
  auto read = [&](const char* field) -> std::optional<EmotionLabel> {
    auto text = optional_string(j, field);
    if (!text) return std::nullopt;
    return taxonomy.normalize(*text);  // unmappable counts as incorrect
  };
  PredictionTriple triple;
  triple.audio_only = read("pred_audio");
  triple.visual_only = read("pred_visual");
  triple.audio_visual = read("pred_av");
  return triple;
}

namespace {

void check_no_delimiters(const std::string& text, const char* field,
                         const TokenConfig& tokens) {
  for (SegmentKind k : kSegmentKinds) {
    const TokenPair& p = tokens.pair(k);
    for (const std::string* tok : {&p.open, &p.close}) {
      if (text.find(*tok) != std::string::npos) {
        throw ValidationError(std::string("field '") + field +
                              "' contains delimiter token '" + *tok + "'");
      }
    }
  }
}

}  // namespace

RawSample raw_sample_from_json(const Json& j, const Taxonomy& taxonomy,
                               const TokenConfig& tokens, bool decompose) {
  RawSample sample;
  sample.id = require_string(j, "id");
  sample.target = require_label(j, "target", taxonomy);
  if (decompose && find_field(j, "reasoning") &&
      !find_field(j, "aud_text")) {
    std::string reasoning = require_string(j, "reasoning");
    check_no_delimiters(reasoning, "reasoning", tokens);
    DecomposedReasoning d = decompose_reasoning(reasoning);
    sample.aud_text = std::move(d.aud_text);
    sample.vis_text = std::move(d.vis_text);
    sample.think_text = std::move(d.think_text);
  } else {
    sample.aud_text = require_string(j, "aud_text");
    sample.vis_text = require_string(j, "vis_text");
    sample.think_text = require_string(j, "think_text");
    check_no_delimiters(sample.aud_text, "aud_text", tokens);
    check_no_delimiters(sample.vis_text, "vis_text", tokens);
    check_no_delimiters(sample.think_text, "think_text", tokens);
  }
  sample.triple = triple_from_json(j, taxonomy);
  if (const Json* fau = find_field(j, "fau")) {
    if (!fau->is_array()) {
      throw ValidationError("field 'fau' must be an array of AU ids");
    }
    FauSet set;
    for (const Json& v : *fau) {
      if (!v.is_number_integer() || v.get<int>() <= 0) {
        throw ValidationError("field 'fau' must contain positive integers");
      }
      set.insert(v.get<int>());
    }
    sample.fau = std::move(set);
  }
  return sample;
}

Json training_record_to_json(const TrainingRecord& record) {
  Json j;
  j["id"] = record.id;
  j["mi"] = to_string(record.mi);
  j["target"] = record.target.name;
  j["rendered"] = record.rendered;
  return j;
}

ScoreInput score_input_from_json(const Json& j, const Taxonomy& taxonomy) {
  ScoreInput input;
  input.id = require_string(j, "id");
  input.target = require_label(j, "target", taxonomy);
  std::string mi_text = require_string(j, "mi");
  auto mi = mi_from_string(mi_text);
  if (!mi) {
    throw ValidationError("field 'mi': '" + mi_text +
                          "' is not one of audio, visual, both, unresolved");
  }
  if (*mi == ModalityImportance::Unresolved) {
    throw ValidationError("field 'mi': unresolved samples cannot be scored");
  }
  input.mi = *mi;
  // "rendered" (the build-sft output name) is accepted as an alias so the
  // pipelines compose without transformation.
  if (find_field(j, "trace_text")) {
    input.trace_text = require_string(j, "trace_text");
  } else {
    input.trace_text = require_string(j, "rendered");
  }
  return input;
}

Json reward_row_to_json(const std::string& id, const RewardBreakdown& rb) {
  Json j;
  j["id"] = id;
  j["r_mao"] = rb.r_mao;
  j["r_mgr"] = rb.r_mgr;
  j["r_answer"] = rb.r_answer;
  j["r_total"] = rb.r_total;
  return j;
}

ParsedEvalRecord eval_record_from_json(const Json& j,
                                       const Taxonomy& taxonomy,
                                       const TokenConfig& tokens,
                                       const SentenceClassifier& classifier) {
  ParsedEvalRecord out;
  out.record.id = require_string(j, "id");
  out.record.target = require_label(j, "target", taxonomy);
  if (auto predicted = optional_string(j, "predicted")) {
    out.record.predicted = taxonomy.normalize(*predicted);
  }
  if (auto reasoning = optional_string(j, "reasoning_emotion")) {
    out.record.reasoning_emotion = taxonomy.normalize(*reasoning);
  }
  bool need_predicted = !out.record.predicted.has_value() &&
                        !find_field(j, "predicted");
  bool need_reasoning = !out.record.reasoning_emotion.has_value() &&
                        !find_field(j, "reasoning_emotion");
  const char* trace_field = find_field(j, "trace_text") ? "trace_text"
                            : find_field(j, "rendered") ? "rendered"
                                                        : nullptr;
  if ((need_predicted || need_reasoning) && trace_field) {
    std::string text = require_string(j, trace_field);
    ParseResult parsed = parse_trace(text, tokens);
    if (const ParseError* err = std::get_if<ParseError>(&parsed)) {
      out.warning = "trace_text does not parse (" + err->message +
                    "); prediction and reasoning emotion left absent";
    } else {
      const ReasoningTrace& trace = std::get<ReasoningTrace>(parsed);
      if (need_predicted) {
        if (auto answer = trace.segment_text(SegmentKind::Answer)) {
          out.record.predicted = taxonomy.normalize(*answer);
        }
      }
      if (need_reasoning) {
        out.record.reasoning_emotion =
            infer_reasoning_emotion(trace, classifier);
      }
    }
  }
  return out;
}

Json metrics_report_to_json(const MetricsReport& report,
                            const Taxonomy& taxonomy) {
  Json j;
  j["records"] = report.records;
  j["war"] = report.war;
  j["uar"] = report.uar;
  j["eea"] = report.eea;
  j["epc"] = report.epc;
  j["fcr"] = report.fcr;
  j["inconsistent_all"] = report.inconsistent_all;
  j["inconsistent_among_correct"] = report.inconsistent_among_correct;
  Json recall = Json::object();
  for (const auto& [id, r] : report.per_class_recall) {
    recall[taxonomy.label(id).name] = r;
  }
  j["per_class_recall"] = std::move(recall);
  Json labels = Json::array();
  for (const EmotionLabel& l : taxonomy.labels()) labels.push_back(l.name);
  Json columns = labels;
  columns.push_back("(none)");
  Json rows = Json::array();
  for (const auto& row : report.confusion) {
    Json r = Json::array();
    for (long v : row) r.push_back(v);
    rows.push_back(std::move(r));
  }
  j["confusion"] =
      Json{{"labels", std::move(labels)}, {"columns", std::move(columns)},
           {"rows", std::move(rows)}};
  return j;
}

std::string metrics_report_table(const MetricsReport& report) {
  char buf[256];
  std::string out;
  out += "  FCR     EEA     EPC     UAR     WAR\n";
  std::snprintf(buf, sizeof(buf), "%5.2f   %5.2f   %5.2f   %5.2f   %5.2f\n",
                report.fcr * 100.0, report.eea * 100.0, report.epc * 100.0,
                report.uar * 100.0, report.war * 100.0);
  out += buf;
  std::snprintf(buf, sizeof(buf),
                "inconsistent (all samples):   %5.2f%%\n"
                "inconsistent (among correct): %5.2f%%\n",
                report.inconsistent_all * 100.0,
                report.inconsistent_among_correct * 100.0);
  out += buf;
  return out;
}

Json step_stats_to_json(const StepStats& stats) {
  Json j;
  j["kind"] = "step";
  j["step"] = stats.step;
  j["mean_reward"] = stats.mean_reward;
  j["order_rate"] = stats.order_rate;
  j["consistency_rate"] = stats.consistency_rate;
  j["answer_acc"] = stats.answer_acc;
  return j;
}

Json eval_stats_to_json(const EvalStats& stats, const char* phase) {
  Json j;
  j["kind"] = phase;
  j["episodes"] = stats.episodes;
  j["order_rate"] = stats.order_rate;
  j["consistency_rate"] = stats.consistency_rate;
  j["answer_acc"] = stats.answer_acc;
  j["mean_total"] = stats.mean_total;
  return j;
}

Json build_stats_to_json(const BuildStats& stats) {
  Json j;
  j["input"] = stats.input;
  j["fau_rejected"] = stats.fau_rejected;
  j["unresolved_dropped"] = stats.unresolved_dropped;
  j["kept_audio"] = stats.kept_audio;
  j["kept_visual"] = stats.kept_visual;
  j["kept_both"] = stats.kept_both;
  j["emitted"] = stats.emitted;
  j["parse_errors"] = stats.parse_errors;
  return j;
}

}  // namespace migr
