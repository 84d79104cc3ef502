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

#include "migr/grposim.hpp"

#include <cmath>

#include "migr/errors.hpp"

namespace migr {

namespace {

uint64_t splitmix64(uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

uint64_t SimRng::next_u64() { return splitmix64(state_); }

double SimRng::next_uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

int SimRng::next_below(int n) {
  return static_cast<int>(next_u64() % static_cast<uint64_t>(n));
}

uint64_t derive_seed(uint64_t base, uint64_t stream) {
  uint64_t state = base ^ (stream * 0xD1B54A32D192ED03ULL);
  splitmix64(state);
  return splitmix64(state);
}

bool PolicyParams::all_finite() const {
  for (double x : v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

SimEnv::SimEnv(const Taxonomy& taxonomy, const Lexicon& lexicon,
               TokenConfig tokens)
    : taxonomy_(&taxonomy), lexicon_(&lexicon), tokens_(std::move(tokens)) {
  keywords_.reserve(taxonomy.size());
  for (const EmotionLabel& label : taxonomy.labels()) {
    auto kw = lexicon.keyword_for(label.id);
    if (!kw) {
      throw ValidationError("simulator lexicon has no keyword for label '" +
                            label.name + "'");
    }
    keywords_.emplace_back(*kw);
  }
}

EmotionLabel SimEnv::distractor(const EmotionLabel& target) const {
  int next = (target.id + 1) % static_cast<int>(taxonomy_->size());
  return taxonomy_->label(next);
}

EpisodeContext sample_episode(const SimEnv& env, uint64_t seed) {
  SimRng rng(seed);
  EpisodeContext ctx;
  ctx.target =
      env.taxonomy().label(rng.next_below(static_cast<int>(env.taxonomy().size())));
  ctx.mi = rng.next_below(2) == 0 ? ModalityImportance::Audio
                                  : ModalityImportance::Visual;
  ctx.cue_strength = rng.next_uniform();
  return ctx;
}

namespace {

// Binary softmax pieces, numerically stable for saturated logits.
void softmax2(const double* z, double* p) {
  double m = z[0] > z[1] ? z[0] : z[1];
  double e0 = std::exp(z[0] - m);
  double e1 = std::exp(z[1] - m);
  double denom = e0 + e1;
  p[0] = e0 / denom;
  p[1] = e1 / denom;
}

double log_softmax2_at(const double* z, int k) {
  double m = z[0] > z[1] ? z[0] : z[1];
  double lse = m + std::log(std::exp(z[0] - m) + std::exp(z[1] - m));
  return z[k] - lse;
}

int sample2(const double* z, SimRng& rng) {
  double p[2];
  softmax2(z, p);
  return rng.next_uniform() < p[0] ? 0 : 1;
}

int observed_mi_index(const EpisodeContext& ctx) {
  return ctx.mi == ModalityImportance::Audio ? 0 : 1;
}

constexpr int kSlotAud = 0;
constexpr int kSlotVis = 1;
constexpr int kSlotThink = 2;

std::string sentence_for(const SimEnv& env, const EpisodeContext& ctx,
                         int choice) {
  const EmotionLabel label =
      choice == 0 ? ctx.target : env.distractor(ctx.target);
  return "The cues include " + env.keyword(label.id) + ".";
}

std::string segment_text_for(const SimEnv& env, const EpisodeContext& ctx,
                             const std::vector<int>& emissions) {
  std::string out;
  for (size_t i = 0; i < emissions.size(); ++i) {
    if (i > 0) out += ' ';
    out += sentence_for(env, ctx, emissions[i]);
  }
  return out;
}

}  // namespace

Generation generate(const PolicyParams& params, const EpisodeContext& context,
                    const SimEnv& env, int sentence_count, SimRng& rng) {
  Generation gen;
  int mi_obs = observed_mi_index(context);

  const double* order_z = &params.v[PolicyParams::order_index(mi_obs, 0)];
  gen.choices.lead = sample2(order_z, rng);
  gen.log_prob += log_softmax2_at(order_z, gen.choices.lead);

  for (int slot = 0; slot < 3; ++slot) {
    const double* emo_z = &params.v[PolicyParams::emotion_index(slot, 0)];
    gen.choices.emissions[slot].reserve(sentence_count);
    for (int i = 0; i < sentence_count; ++i) {
      int c = sample2(emo_z, rng);
      gen.choices.emissions[slot].push_back(c);
      gen.log_prob += log_softmax2_at(emo_z, c);
    }
  }

  const double* ans_z = &params.v[PolicyParams::answer_index(0)];
  gen.choices.answer = sample2(ans_z, rng);
  gen.log_prob += log_softmax2_at(ans_z, gen.choices.answer);

  Segment aud{SegmentKind::AudDesc,
              segment_text_for(env, context, gen.choices.emissions[kSlotAud])};
  Segment vis{SegmentKind::VisDesc,
              segment_text_for(env, context, gen.choices.emissions[kSlotVis])};
  Segment think{
      SegmentKind::Think,
      segment_text_for(env, context, gen.choices.emissions[kSlotThink])};
  EmotionLabel answer_label = gen.choices.answer == 0
                                  ? context.target
                                  : env.distractor(context.target);
  Segment answer{SegmentKind::Answer, answer_label.name};

  if (gen.choices.lead == 0) {
    gen.trace.segments = {aud, vis, think, answer};
  } else {
    gen.trace.segments = {vis, aud, think, answer};
  }
  gen.trace_text = render_trace(gen.trace, env.tokens());
  return gen;
}

double log_prob(const PolicyParams& params, const EpisodeContext& context,
                const RolloutChoices& choices) {
  int mi_obs = observed_mi_index(context);
  double lp = log_softmax2_at(&params.v[PolicyParams::order_index(mi_obs, 0)],
                              choices.lead);
  for (int slot = 0; slot < 3; ++slot) {
    const double* emo_z = &params.v[PolicyParams::emotion_index(slot, 0)];
    for (int c : choices.emissions[slot]) {
      lp += log_softmax2_at(emo_z, c);
    }
  }
  lp += log_softmax2_at(&params.v[PolicyParams::answer_index(0)],
                        choices.answer);
  return lp;
}

void accumulate_log_prob_grad(const PolicyParams& params,
                              const EpisodeContext& context,
                              const RolloutChoices& choices, double coeff,
                              std::array<double, PolicyParams::kDim>& grad) {
  // d log softmax(z)[k] / d z[j] = 1[j == k] - p[j]
  auto add = [&](size_t base, int chosen) {
    double p[2];
    softmax2(&params.v[base], p);
    grad[base + 0] += coeff * ((chosen == 0 ? 1.0 : 0.0) - p[0]);
    grad[base + 1] += coeff * ((chosen == 1 ? 1.0 : 0.0) - p[1]);
  };
  int mi_obs = observed_mi_index(context);
  add(PolicyParams::order_index(mi_obs, 0), choices.lead);
  for (int slot = 0; slot < 3; ++slot) {
    for (int c : choices.emissions[slot]) {
      add(PolicyParams::emotion_index(slot, 0), c);
    }
  }
  add(PolicyParams::answer_index(0), choices.answer);
}

std::vector<RolloutChoices> enumerate_choices(int sentence_count) {
  std::vector<RolloutChoices> out;
  long per_slot = 1L << sentence_count;
  for (int lead = 0; lead < 2; ++lead) {
    for (long e0 = 0; e0 < per_slot; ++e0) {
      for (long e1 = 0; e1 < per_slot; ++e1) {
        for (long e2 = 0; e2 < per_slot; ++e2) {
          for (int answer = 0; answer < 2; ++answer) {
            RolloutChoices c;
            c.lead = lead;
            c.answer = answer;
            long codes[3] = {e0, e1, e2};
            for (int slot = 0; slot < 3; ++slot) {
              for (int i = 0; i < sentence_count; ++i) {
                c.emissions[slot].push_back(
                    static_cast<int>((codes[slot] >> i) & 1));
              }
            }
            out.push_back(std::move(c));
          }
        }
      }
    }
  }
  return out;
}

std::vector<double> group_advantages(std::span<const double> rewards,
                                     double eps) {
  if (rewards.empty()) {
    throw EmptyGroupError("group_advantages over an empty group");
  }
  double mean = 0.0;
  for (double r : rewards) mean += r;
  mean /= static_cast<double>(rewards.size());
  double var = 0.0;
  for (double r : rewards) var += (r - mean) * (r - mean);
  var /= static_cast<double>(rewards.size());
  double denom = std::sqrt(var) + eps;
  std::vector<double> out;
  out.reserve(rewards.size());
  for (double r : rewards) out.push_back((r - mean) / denom);
  return out;
}

const char* to_string(RewardMode mode) {
  switch (mode) {
    case RewardMode::Total: return "total";
    case RewardMode::AnswerOnly: return "answer_only";
    case RewardMode::MaoOnly: return "mao_only";
    case RewardMode::MgrOnly: return "mgr_only";
  }
  return "?";
}

std::optional<RewardMode> reward_mode_from_string(std::string_view name) {
  if (name == "total") return RewardMode::Total;
  if (name == "answer_only") return RewardMode::AnswerOnly;
  if (name == "mao_only") return RewardMode::MaoOnly;
  if (name == "mgr_only") return RewardMode::MgrOnly;
  return std::nullopt;
}

double select_reward(const RewardBreakdown& breakdown, RewardMode mode) {
  switch (mode) {
    case RewardMode::Total: return breakdown.r_total;
    case RewardMode::AnswerOnly: return breakdown.r_answer;
    case RewardMode::MaoOnly: return breakdown.r_mao;
    case RewardMode::MgrOnly: return breakdown.r_mgr;
  }
  return 0.0;
}

namespace {

constexpr uint64_t kInitEvalStream = 0xE0E0E0E0E0E0E0E0ULL;
constexpr uint64_t kFinalEvalStream = 0xF1F1F1F1F1F1F1F1ULL;

bool lead_matches_mi(const RolloutChoices& choices,
                     const EpisodeContext& ctx) {
  int want = ctx.mi == ModalityImportance::Audio ? 0 : 1;
  return choices.lead == want;
}

}  // namespace

EvalStats evaluate_policy(const PolicyParams& params, const SimEnv& env,
                          const SimConfig& config, uint64_t eval_seed) {
  EvalStats stats;
  stats.episodes = config.eval_episodes;
  if (config.eval_episodes <= 0) return stats;
  for (int e = 0; e < config.eval_episodes; ++e) {
    EpisodeContext ctx = sample_episode(env, derive_seed(eval_seed, 2 * e));
    SimRng rng(derive_seed(eval_seed, 2 * e + 1));
    Generation gen =
        generate(params, ctx, env, config.sentence_count, rng);
    RewardBreakdown rb =
        score(gen.trace, ctx.mi, ctx.target, env.lexicon(), env.taxonomy());
    stats.order_rate += lead_matches_mi(gen.choices, ctx) ? 1.0 : 0.0;
    stats.consistency_rate += rb.r_mgr >= 0.5 ? 1.0 : 0.0;
    stats.answer_acc += rb.r_answer;
    stats.mean_total += rb.r_total;
  }
  double n = static_cast<double>(config.eval_episodes);
  stats.order_rate /= n;
  stats.consistency_rate /= n;
  stats.answer_acc /= n;
  stats.mean_total /= n;
  return stats;
}

TrainingLog train(const SimConfig& config, const SimEnv& env) {
  if (config.group_size < 1) {
    throw ValidationError("simulator group size must be >= 1");
  }
  if (config.sentence_count < 1) {
    throw ValidationError("simulator sentence count must be >= 1");
  }
  TrainingLog log;
  PolicyParams params;  // zero logits: every choice starts uniform
  const PolicyParams init = params;

  log.initial_eval = evaluate_policy(
      params, env, config, derive_seed(config.seed, kInitEvalStream));

  log.steps.reserve(config.steps);
  for (int step = 1; step <= config.steps; ++step) {
    uint64_t step_seed = derive_seed(config.seed, static_cast<uint64_t>(step));
    EpisodeContext ctx = sample_episode(env, derive_seed(step_seed, 0));

    std::vector<Generation> rollouts;
    std::vector<double> selected;
    rollouts.reserve(config.group_size);
    selected.reserve(config.group_size);
    StepStats stats;
    stats.step = step;
    for (int i = 0; i < config.group_size; ++i) {
      SimRng rng(derive_seed(step_seed, static_cast<uint64_t>(i) + 1));
      Generation gen =
          generate(params, ctx, env, config.sentence_count, rng);
      RewardBreakdown rb =
          score(gen.trace, ctx.mi, ctx.target, env.lexicon(), env.taxonomy());
      selected.push_back(select_reward(rb, config.reward_mode));
      stats.order_rate += lead_matches_mi(gen.choices, ctx) ? 1.0 : 0.0;
      stats.consistency_rate += rb.r_mgr >= 0.5 ? 1.0 : 0.0;
      stats.answer_acc += rb.r_answer;
      rollouts.push_back(std::move(gen));
    }
    std::vector<double> advantages =
        group_advantages(selected, config.advantage_eps);

    std::array<double, PolicyParams::kDim> grad{};
    for (int i = 0; i < config.group_size; ++i) {
      accumulate_log_prob_grad(params, ctx, rollouts[i].choices,
                               advantages[i], grad);
    }
    if (config.l2_pull > 0.0) {
      for (size_t j = 0; j < PolicyParams::kDim; ++j) {
        grad[j] += config.l2_pull * (init.v[j] - params.v[j]);
      }
    }
    for (size_t j = 0; j < PolicyParams::kDim; ++j) {
      params.v[j] += config.lr * grad[j];
    }
    if (!params.all_finite()) {
      throw NonFiniteGradientError(
          "policy parameters went non-finite at step " + std::to_string(step),
          step);
    }

    double g = static_cast<double>(config.group_size);
    for (double r : selected) stats.mean_reward += r;
    stats.mean_reward /= g;
    stats.order_rate /= g;
    stats.consistency_rate /= g;
    stats.answer_acc /= g;
    log.steps.push_back(stats);
  }

  log.final_eval = evaluate_policy(
      params, env, config, derive_seed(config.seed, kFinalEvalStream));
  log.final_params = params;
  return log;
}

}  // namespace migr
