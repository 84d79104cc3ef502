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
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "migr/classifier.hpp"
#include "migr/mi.hpp"
#include "migr/rewards.hpp"
#include "migr/taxonomy.hpp"
#include "migr/trace.hpp"

namespace migr {

/// Deterministic splitmix64 stream. Stable across platforms and builds,
/// which the simulator's bit-identical-log contract depends on.
class SimRng {
 public:
  explicit SimRng(uint64_t seed) : state_(seed) {}

  uint64_t next_u64();
  double next_uniform();          // [0, 1)
  int next_below(int n);          // uniform in [0, n)

 private:
  uint64_t state_;
};

/// Independent substream seed for (base, stream).
uint64_t derive_seed(uint64_t base, uint64_t stream);

/// Synthetic stand-in for one multimodal sample: which emotion is expressed
/// and through which modality. cue_strength is carried for environment
/// variants; the default policy does not read it.
struct EpisodeContext {
  EmotionLabel target;
  ModalityImportance mi = ModalityImportance::Audio;  // Audio or Visual
  double cue_strength = 0.0;
};

/// Parametric trace-generating policy over three choice families:
///   order_logits[observed mi][lead]   lead: 0 = audio-first, 1 = visual-first
///   emotion_logits[segment slot][c]   slot: 0 = aud_desc, 1 = vis_desc,
///                                     2 = think; c: 0 = target keyword,
///                                     1 = distractor keyword, per sentence
///   answer_logits[c]                  c: 0 = target label, 1 = distractor
/// stored flat as 12 doubles (4 + 6 + 2).
struct PolicyParams {
  static constexpr size_t kDim = 12;
  std::array<double, kDim> v{};

  static size_t order_index(int observed_mi, int choice) {
    return static_cast<size_t>(observed_mi * 2 + choice);
  }
  static size_t emotion_index(int slot, int choice) {
    return static_cast<size_t>(4 + slot * 2 + choice);
  }
  static size_t answer_index(int choice) {
    return static_cast<size_t>(10 + choice);
  }

  bool all_finite() const;
  friend bool operator==(const PolicyParams&, const PolicyParams&) = default;
};

/// The sampled decisions behind one trace, sufficient to recompute its
/// log probability.
struct RolloutChoices {
  int lead = 0;  // 0 audio-first, 1 visual-first
  std::array<std::vector<int>, 3> emissions;  // [slot][sentence] in {0, 1}
  int answer = 0;  // 0 target, 1 distractor
};

/// Fixed simulation world: taxonomy, lexicon, tokens, and one canonical
/// keyword per label. Throws ValidationError if the lexicon leaves any
/// label without a keyword.
class SimEnv {
 public:
  SimEnv(const Taxonomy& taxonomy, const Lexicon& lexicon,
         TokenConfig tokens);

  const Taxonomy& taxonomy() const { return *taxonomy_; }
  const Lexicon& lexicon() const { return *lexicon_; }
  const TokenConfig& tokens() const { return tokens_; }
  const std::string& keyword(int label_id) const {
    return keywords_.at(label_id);
  }
  /// Distractor label for a target: the next label in taxonomy order.
  EmotionLabel distractor(const EmotionLabel& target) const;

 private:
  const Taxonomy* taxonomy_;
  const Lexicon* lexicon_;
  TokenConfig tokens_;
  std::vector<std::string> keywords_;
};

/// Target uniform over the taxonomy, mi uniform over {Audio, Visual},
/// cue_strength uniform in [0, 1). Deterministic given the seed.
EpisodeContext sample_episode(const SimEnv& env, uint64_t seed);

struct Generation {
  ReasoningTrace trace;
  std::string trace_text;
  double log_prob = 0.0;
  RolloutChoices choices;
};

/// Sample a full trace from the policy. log_prob is the exact joint log
/// probability of the sampled choices.
Generation generate(const PolicyParams& params, const EpisodeContext& context,
                    const SimEnv& env, int sentence_count, SimRng& rng);

/// Joint log probability of `choices` under `params` in `context`.
double log_prob(const PolicyParams& params, const EpisodeContext& context,
                const RolloutChoices& choices);

/// grad += coeff * d log_prob / d params.
void accumulate_log_prob_grad(const PolicyParams& params,
                              const EpisodeContext& context,
                              const RolloutChoices& choices, double coeff,
                              std::array<double, PolicyParams::kDim>& grad);

/// Every choice combination for the given sentence count, in a fixed order.
/// Small configurations make the outcome space exhaustively enumerable.
std::vector<RolloutChoices> enumerate_choices(int sentence_count);

/// Group-relative advantages: (r - mean) / (population std + eps).
/// Throws EmptyGroupError on an empty list.
std::vector<double> group_advantages(std::span<const double> rewards,
                                     double eps);

enum class RewardMode { Total, AnswerOnly, MaoOnly, MgrOnly };

const char* to_string(RewardMode mode);
std::optional<RewardMode> reward_mode_from_string(std::string_view name);

double select_reward(const RewardBreakdown& breakdown, RewardMode mode);

struct SimConfig {
  int steps = 1000;
  int group_size = 4;
  double lr = 0.04;
  RewardMode reward_mode = RewardMode::Total;
  uint64_t seed = 1;
  int sentence_count = 3;
  double advantage_eps = 1e-4;
  int eval_episodes = 400;
  double l2_pull = 0.0;  // pull toward the initial params; 0 disables
};

struct StepStats {
  int step = 0;
  double mean_reward = 0.0;       // of the optimized reward mode
  double order_rate = 0.0;        // leading segment matches the episode mi
  double consistency_rate = 0.0;  // fraction of rollouts with r_mgr >= 0.5
  double answer_acc = 0.0;
};

struct EvalStats {
  int episodes = 0;
  double order_rate = 0.0;
  double consistency_rate = 0.0;
  double answer_acc = 0.0;
  double mean_total = 0.0;
};

struct TrainingLog {
  EvalStats initial_eval;
  EvalStats final_eval;
  std::vector<StepStats> steps;
  PolicyParams final_params;
};

/// Freshly sampled episodes, one stochastic rollout each.
EvalStats evaluate_policy(const PolicyParams& params, const SimEnv& env,
                          const SimConfig& config, uint64_t eval_seed);

/// REINFORCE with a group-relative baseline: per step, sample one context,
/// draw group_size rollouts, score them under the selected reward mode, and
/// ascend sum_i A_i * grad log p(rollout_i). Deterministic given
/// (seed, config). Throws NonFiniteGradientError if an update goes
/// non-finite.
TrainingLog train(const SimConfig& config, const SimEnv& env);

}  // namespace migr
