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

#include "migr/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <istream>
#include <ostream>

#include "CLI11.hpp"
#include "migr/errors.hpp"
#include "migr/io.hpp"
#include "migr/text.hpp"

namespace migr::cli {

namespace {

// Config discovery order: explicit flag > MIGR_CONFIG_DIR > built-in.
std::string config_dir_file(const char* filename) {
  const char* dir = std::getenv("MIGR_CONFIG_DIR");
  if (!dir || !*dir) return {};
  std::filesystem::path p = std::filesystem::path(dir) / filename;
  std::error_code ec;
  if (std::filesystem::exists(p, ec)) return p.string();
  return {};
}

Taxonomy resolve_taxonomy(const std::string& flag) {
  if (!flag.empty()) {
    if (is_builtin_taxonomy(flag)) return builtin_taxonomy(flag);
    return taxonomy_from_json(load_json_file(flag));
  }
  if (std::string path = config_dir_file("taxonomy.json"); !path.empty()) {
    return taxonomy_from_json(load_json_file(path));
  }
  return builtin_taxonomy("dfew");
}

TokenConfig resolve_tokens(const std::string& flag) {
  if (!flag.empty()) return token_config_from_json(load_json_file(flag));
  if (std::string path = config_dir_file("tokens.json"); !path.empty()) {
    return token_config_from_json(load_json_file(path));
  }
  return TokenConfig::defaults();
}

Lexicon resolve_lexicon(const std::string& flag, const Taxonomy& taxonomy) {
  if (!flag.empty()) {
    return lexicon_from_json(load_json_file(flag), taxonomy);
  }
  if (std::string path = config_dir_file("lexicon.json"); !path.empty()) {
    return lexicon_from_json(load_json_file(path), taxonomy);
  }
  return default_lexicon(taxonomy);
}

FauEmotionTable resolve_fau_table(const std::string& flag,
                                  const Taxonomy& taxonomy) {
  if (!flag.empty()) {
    return fau_table_from_json(load_json_file(flag), taxonomy);
  }
  if (std::string path = config_dir_file("fau_table.json"); !path.empty()) {
    return fau_table_from_json(load_json_file(path), taxonomy);
  }
  return default_fau_table(taxonomy);
}

struct Options {
  std::string in_path;
  std::string out_path;
  std::string report_path;
  std::string report_format = "json";
  std::string taxonomy;
  std::string tokens;
  std::string lexicon;
  std::string fau_table;
  bool require_fau = false;
  std::string fau_mode = "exact";
  bool decompose = false;
  bool strict = false;
  int verbose = 0;

  // simulate
  int steps = 1000;
  int group_size = 4;
  double lr = 0.04;
  std::string reward_mode = "total";
  uint64_t seed = 1;
  int sentence_count = 3;
  int eval_episodes = 400;
  double l2_pull = 0.0;
};

struct LineIo {
  std::istream* in;
  std::ostream* out;
  std::string in_name;
  std::ifstream in_file;
  std::ofstream out_file;
};

LineIo open_io(const Options& o, std::istream& fallback_in,
               std::ostream& fallback_out) {
  LineIo io;
  if (o.in_path.empty()) {
    io.in = &fallback_in;
    io.in_name = "<stdin>";
  } else {
    io.in_file.open(o.in_path);
    if (!io.in_file) throw ValidationError("cannot open '" + o.in_path + "'");
    io.in = &io.in_file;
    io.in_name = o.in_path;
  }
  if (o.out_path.empty()) {
    io.out = &fallback_out;
  } else {
    io.out_file.open(o.out_path);
    if (!io.out_file) {
      throw ValidationError("cannot open '" + o.out_path + "' for writing");
    }
    io.out = &io.out_file;
  }
  return io;
}

/// Runs `fn` per nonempty line; malformed lines warn and are skipped, or
/// abort with the line number under --strict. Returns the error count.
long for_each_record(std::istream& in, const std::string& source, bool strict,
                     std::ostream& err,
                     const std::function<void(int, const Json&)>& fn) {
  std::string line;
  int line_no = 0;
  long errors = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::string problem;
    try {
      Json j = Json::parse(line);
      if (!j.is_object()) throw ValidationError("record is not a JSON object");
      fn(line_no, j);
      continue;
    } catch (const Json::parse_error&) {
      problem = "invalid JSON";
    } catch (const ValidationError& e) {
      problem = e.what();
    }
    ++errors;
    std::string msg =
        source + ":" + std::to_string(line_no) + ": " + problem;
    if (strict) throw ValidationError(msg);
    err << "migr: warning: " << msg << "; line skipped\n";
  }
  return errors;
}

void write_line(std::ostream& out, const Json& j) { out << j.dump() << '\n'; }

int cmd_estimate_mi(const Options& o, std::istream& in, std::ostream& out,
                    std::ostream& err) {
  Taxonomy taxonomy = resolve_taxonomy(o.taxonomy);
  LineIo io = open_io(o, in, out);
  MiCounts counts;
  for_each_record(*io.in, io.in_name, o.strict, err,
                  [&](int, const Json& j) {
                    EmotionLabel target = label_field(j, "target", taxonomy);
                    PredictionTriple triple = triple_from_json(j, taxonomy);
                    ModalityImportance mi = estimate_mi(triple, target);
                    switch (mi) {
                      case ModalityImportance::Audio: ++counts.audio; break;
                      case ModalityImportance::Visual: ++counts.visual; break;
                      case ModalityImportance::Both: ++counts.both; break;
                      case ModalityImportance::Unresolved:
                        ++counts.unresolved;
                        break;
                    }
                    Json echo = j;
                    echo["mi"] = to_string(mi);
                    write_line(*io.out, echo);
                  });
  Json summary;
  summary["audio"] = counts.audio;
  summary["visual"] = counts.visual;
  summary["both"] = counts.both;
  summary["unresolved"] = counts.unresolved;
  err << "migr: mi distribution " << summary.dump() << '\n';
  return 0;
}

int cmd_build_sft(const Options& o, std::istream& in, std::ostream& out,
                  std::ostream& err) {
  Taxonomy taxonomy = resolve_taxonomy(o.taxonomy);
  TokenConfig tokens = resolve_tokens(o.tokens);
  FauEmotionTable table = resolve_fau_table(o.fau_table, taxonomy);
  BuildOptions options;
  options.require_fau = o.require_fau;
  if (o.fau_mode == "exact") {
    options.fau_mode = FauMatchMode::Exact;
  } else if (o.fau_mode == "subset") {
    options.fau_mode = FauMatchMode::Subset;
  } else {
    throw ValidationError("--fau-mode must be 'exact' or 'subset'");
  }
  LineIo io = open_io(o, in, out);
  BuildStats stats;
  stats.parse_errors = for_each_record(
      *io.in, io.in_name, o.strict, err, [&](int, const Json& j) {
        RawSample sample =
            raw_sample_from_json(j, taxonomy, tokens, o.decompose);
        for (const TrainingRecord& record :
             process_sample(sample, table, options, tokens, stats)) {
          write_line(*io.out, training_record_to_json(record));
        }
      });
  err << "migr: build stats " << build_stats_to_json(stats).dump() << '\n';
  return 0;
}

int cmd_score(const Options& o, std::istream& in, std::ostream& out,
              std::ostream& err) {
  Taxonomy taxonomy = resolve_taxonomy(o.taxonomy);
  TokenConfig tokens = resolve_tokens(o.tokens);
  Lexicon lexicon = resolve_lexicon(o.lexicon, taxonomy);
  LineIo io = open_io(o, in, out);
  for_each_record(
      *io.in, io.in_name, o.strict, err, [&](int line_no, const Json& j) {
        ScoreInput input = score_input_from_json(j, taxonomy);
        RewardBreakdown rb;  // unparseable rollouts keep all-zero rewards
        ParseResult parsed = parse_trace(input.trace_text, tokens);
        if (const auto* trace = std::get_if<ReasoningTrace>(&parsed)) {
          rb = score(*trace, input.mi, input.target, lexicon, taxonomy);
          if (o.verbose > 0) {
            for (const std::string& w : canonical_warnings(*trace)) {
              err << "migr: " << io.in_name << ":" << line_no << ": " << w
                  << '\n';
            }
          }
        } else if (o.verbose > 0) {
          err << "migr: " << io.in_name << ":" << line_no << ": "
              << std::get<ParseError>(parsed).message
              << "; rewards are zero\n";
        }
        write_line(*io.out, reward_row_to_json(input.id, rb));
      });
  return 0;
}

int cmd_evaluate(const Options& o, std::istream& in, std::ostream& out,
                 std::ostream& err) {
  Taxonomy taxonomy = resolve_taxonomy(o.taxonomy);
  TokenConfig tokens = resolve_tokens(o.tokens);
  Lexicon lexicon = resolve_lexicon(o.lexicon, taxonomy);
  LineIo io = open_io(o, in, out);
  std::vector<EvalRecord> records;
  for_each_record(*io.in, io.in_name, o.strict, err,
                  [&](int line_no, const Json& j) {
                    ParsedEvalRecord pe =
                        eval_record_from_json(j, taxonomy, tokens, lexicon);
                    if (pe.warning) {
                      err << "migr: warning: " << io.in_name << ":" << line_no
                          << ": " << *pe.warning << '\n';
                    }
                    records.push_back(std::move(pe.record));
                  });
  if (records.empty()) {
    throw ValidationError("evaluate: no usable records in " + io.in_name);
  }
  MetricsReport report = compute_report(records, taxonomy);

  std::ofstream report_file;
  std::ostream* report_out = io.out;
  if (!o.report_path.empty()) {
    report_file.open(o.report_path);
    if (!report_file) {
      throw ValidationError("cannot open '" + o.report_path +
                            "' for writing");
    }
    report_out = &report_file;
  }
  if (o.report_format == "json") {
    *report_out << metrics_report_to_json(report, taxonomy).dump(2) << '\n';
  } else if (o.report_format == "table") {
    *report_out << metrics_report_table(report);
  } else {
    throw ValidationError("--format must be 'json' or 'table'");
  }
  return 0;
}

int cmd_simulate(const Options& o, std::istream& in, std::ostream& out,
                 std::ostream& err) {
  (void)in;
  (void)err;
  Taxonomy taxonomy = resolve_taxonomy(o.taxonomy);
  TokenConfig tokens = resolve_tokens(o.tokens);
  Lexicon lexicon = resolve_lexicon(o.lexicon, taxonomy);
  SimEnv env(taxonomy, lexicon, tokens);
  SimConfig config;
  config.steps = o.steps;
  config.group_size = o.group_size;
  config.lr = o.lr;
  auto mode = reward_mode_from_string(o.reward_mode);
  if (!mode) {
    throw ValidationError(
        "--reward-mode must be one of total, answer_only, mao_only, "
        "mgr_only");
  }
  config.reward_mode = *mode;
  config.seed = o.seed;
  config.sentence_count = o.sentence_count;
  config.eval_episodes = o.eval_episodes;
  config.l2_pull = o.l2_pull;

  LineIo io = open_io(o, in, out);
  TrainingLog log = train(config, env);

  write_line(*io.out, eval_stats_to_json(log.initial_eval, "init_eval"));
  for (const StepStats& s : log.steps) {
    write_line(*io.out, step_stats_to_json(s));
  }
  write_line(*io.out, eval_stats_to_json(log.final_eval, "final_eval"));
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in,
        std::ostream& out, std::ostream& err) {
  CLI::App app{"modality-importance emotion reasoning toolkit"};
  app.name("migr");
  app.set_version_flag("--version", std::string("migr ") + kVersion);
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);

  Options o;

  auto add_common = [&](CLI::App* sc, bool with_out = true) {
    sc->add_option("--in", o.in_path, "input JSON Lines (default: stdin)");
    if (with_out) {
      sc->add_option("--out", o.out_path,
                     "output JSON Lines (default: stdout)");
    }
    sc->add_flag("--strict", o.strict, "abort on the first malformed record");
    sc->add_flag("-v,--verbose", o.verbose, "more per-record diagnostics");
    sc->add_option("--taxonomy", o.taxonomy,
                   "built-in name (emer|dfew|mafw) or config path");
  };

  CLI::App* sc_mi = app.add_subcommand(
      "estimate-mi", "attach modality-importance labels to prediction triples");
  add_common(sc_mi);

  CLI::App* sc_build = app.add_subcommand(
      "build-sft", "FAU-filter, estimate MI, and reorder reasoning records");
  add_common(sc_build);
  sc_build->add_option("--tokens", o.tokens, "token config path");
  sc_build->add_option("--fau-table", o.fau_table, "FAU table config path");
  sc_build->add_flag("--require-fau", o.require_fau,
                     "drop samples whose AU set fails the emotion table");
  sc_build->add_option("--fau-mode", o.fau_mode,
                       "AU match rule: exact (default) or subset");
  sc_build->add_flag("--decompose", o.decompose,
                     "route a flat 'reasoning' field into aud/vis/think");

  CLI::App* sc_score = app.add_subcommand(
      "score", "compute the order/grounding/answer rewards per trace");
  add_common(sc_score);
  sc_score->add_option("--tokens", o.tokens, "token config path");
  sc_score->add_option("--lexicon", o.lexicon, "lexicon config path");

  CLI::App* sc_eval = app.add_subcommand(
      "evaluate", "recognition and consistency metrics over eval records");
  add_common(sc_eval, /*with_out=*/false);
  sc_eval->add_option("--tokens", o.tokens, "token config path");
  sc_eval->add_option("--lexicon", o.lexicon, "lexicon config path");
  sc_eval->add_option("--report", o.report_path,
                      "report path (default: stdout)");
  sc_eval->add_option("--format", o.report_format,
                      "report format: json (default) or table");

  CLI::App* sc_sim = app.add_subcommand(
      "simulate", "group-relative reward-shaping simulation");
  sc_sim->add_option("--out", o.out_path, "log JSON Lines (default: stdout)");
  sc_sim->add_option("--taxonomy", o.taxonomy,
                     "built-in name (emer|dfew|mafw) or config path");
  sc_sim->add_option("--tokens", o.tokens, "token config path");
  sc_sim->add_option("--lexicon", o.lexicon, "lexicon config path");
  sc_sim->add_option("--steps", o.steps, "training steps");
  sc_sim->add_option("--group-size", o.group_size, "rollouts per step");
  sc_sim->add_option("--lr", o.lr, "learning rate");
  sc_sim->add_option("--reward-mode", o.reward_mode,
                     "total | answer_only | mao_only | mgr_only");
  sc_sim->add_option("--seed", o.seed, "run seed");
  sc_sim->add_option("--sentence-count", o.sentence_count,
                     "sentences per segment");
  sc_sim->add_option("--eval-episodes", o.eval_episodes,
                     "episodes per policy evaluation");
  sc_sim->add_option("--l2-pull", o.l2_pull,
                     "pull strength toward the initial params (0 = off)");

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("migr");
  for (const std::string& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
    if (sc_mi->parsed()) return cmd_estimate_mi(o, in, out, err);
    if (sc_build->parsed()) return cmd_build_sft(o, in, out, err);
    if (sc_score->parsed()) return cmd_score(o, in, out, err);
    if (sc_eval->parsed()) return cmd_evaluate(o, in, out, err);
    if (sc_sim->parsed()) return cmd_simulate(o, in, out, err);
    return 1;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 1;
  } catch (const Error& e) {
    err << "migr: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "migr: internal error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace migr::cli
