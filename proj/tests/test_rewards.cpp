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

#include "migr/rewards.hpp"

#include <random>

#include "doctest.h"
#include "migr/errors.hpp"
#include "testutil.hpp"

using namespace migr;

namespace {

const Taxonomy& dfew() { return builtin_taxonomy("dfew"); }

const Lexicon& lex() {
  static const Lexicon kLex = default_lexicon(dfew());
  return kLex;
}

ReasoningTrace make_trace(std::vector<Segment> segments) {
  ReasoningTrace t;
  t.segments = std::move(segments);
  return t;
}

}  // namespace

TEST_CASE("mao_reward") {
  EmotionLabel sad = *dfew().find("sad");

  SUBCASE("wrong leading segment") {
    ReasoningTrace t = make_trace({{SegmentKind::VisDesc, "A frowning face."},
                                   {SegmentKind::AudDesc, "Sobbing there."}});
    CHECK(mao_reward(t, ModalityImportance::Audio, sad, lex()) == 0.0);
  }
  SUBCASE("right lead and target detected") {
    ReasoningTrace t =
        make_trace({{SegmentKind::AudDesc, "The voice is sobbing."}});
    CHECK(mao_reward(t, ModalityImportance::Audio, sad, lex()) == 1.0);
  }
  SUBCASE("right lead but target undetected") {
    ReasoningTrace t =
        make_trace({{SegmentKind::AudDesc, "The tone is flat."}});
    CHECK(mao_reward(t, ModalityImportance::Audio, sad, lex()) == 0.0);
  }
  SUBCASE("empty trace") {
    CHECK(mao_reward(ReasoningTrace{}, ModalityImportance::Audio, sad,
                     lex()) == 0.0);
  }
  SUBCASE("both and unresolved are rejected") {
    ReasoningTrace t = make_trace({{SegmentKind::AudDesc, "x"}});
    CHECK_THROWS_AS(mao_reward(t, ModalityImportance::Both, sad, lex()),
                    UnresolvedMiError);
    CHECK_THROWS_AS(mao_reward(t, ModalityImportance::Unresolved, sad, lex()),
                    UnresolvedMiError);
  }
}

TEST_CASE("mgr_reward") {
  EmotionLabel sad = *dfew().find("sad");

  SUBCASE("half the sentences on target") {
    // 2 of 4 sentences classify as sad
    ReasoningTrace t = make_trace(
        {{SegmentKind::AudDesc, "She is sobbing. The tone is level."},
         {SegmentKind::Think, "Crying fits here. The room is dim."}});
    CHECK(mgr_reward(t, ModalityImportance::Audio, sad, lex()) ==
          doctest::Approx(0.5));
  }
  SUBCASE("empty relevant segments") {
    ReasoningTrace t = make_trace({{SegmentKind::VisDesc, "Still frame."}});
    CHECK(mgr_reward(t, ModalityImportance::Audio, sad, lex()) == 0.0);
  }
  SUBCASE("all sentences on target") {
    ReasoningTrace t = make_trace(
        {{SegmentKind::AudDesc, "Sobbing. Weeping."},
         {SegmentKind::Think, "Tearful through and through."}});
    CHECK(mgr_reward(t, ModalityImportance::Audio, sad, lex()) == 1.0);
  }
  SUBCASE("visual modality uses the vis segment") {
    ReasoningTrace t = make_trace(
        {{SegmentKind::VisDesc, "A tearful face."},
         {SegmentKind::AudDesc, "Loud yelling."}});
    CHECK(mgr_reward(t, ModalityImportance::Visual, sad, lex()) == 1.0);
  }
  SUBCASE("duplicate sentences count as a multiset") {
    ReasoningTrace t = make_trace(
        {{SegmentKind::AudDesc, "She is sobbing. She is sobbing."},
         {SegmentKind::Think, "The room is dim."}});
    CHECK(mgr_reward(t, ModalityImportance::Audio, sad, lex()) ==
          doctest::Approx(2.0 / 3.0));
  }
}

TEST_CASE("answer_reward") {
  EmotionLabel sad = *dfew().find("sad");
  SUBCASE("normalized match") {
    ReasoningTrace t = make_trace({{SegmentKind::Answer, "Sad"}});
    CHECK(answer_reward(t, sad, dfew()) == 1.0);
  }
  SUBCASE("missing answer") {
    ReasoningTrace t = make_trace({{SegmentKind::Think, "hmm"}});
    CHECK(answer_reward(t, sad, dfew()) == 0.0);
  }
  SUBCASE("mismatch") {
    ReasoningTrace t = make_trace({{SegmentKind::Answer, "angry"}});
    CHECK(answer_reward(t, sad, dfew()) == 0.0);
  }
  SUBCASE("alias answers count") {
    ReasoningTrace t = make_trace({{SegmentKind::Answer, "sadness"}});
    CHECK(answer_reward(t, sad, dfew()) == 1.0);
  }
}

TEST_CASE("score composes the three components") {
  EmotionLabel sad = *dfew().find("sad");

  SUBCASE("fully aligned trace") {
    ReasoningTrace t = make_trace(
        {{SegmentKind::AudDesc, "She is sobbing."},
         {SegmentKind::VisDesc, "A tearful face."},
         {SegmentKind::Think, "Crying all through."},
         {SegmentKind::Answer, "sad"}});
    RewardBreakdown rb =
        score(t, ModalityImportance::Audio, sad, lex(), dfew());
    CHECK(rb.r_mao == 1.0);
    CHECK(rb.r_mgr == 1.0);
    CHECK(rb.r_answer == 1.0);
    CHECK(rb.r_total == 3.0);
  }
  SUBCASE("wrong order, correct answer, off-target reasoning") {
    ReasoningTrace t = make_trace(
        {{SegmentKind::VisDesc, "The frame is dark."},
         {SegmentKind::AudDesc, "The tone is level."},
         {SegmentKind::Think, "Nothing decisive."},
         {SegmentKind::Answer, "sad"}});
    RewardBreakdown rb =
        score(t, ModalityImportance::Audio, sad, lex(), dfew());
    CHECK(rb.r_mao == 0.0);
    CHECK(rb.r_mgr == 0.0);
    CHECK(rb.r_answer == 1.0);
    CHECK(rb.r_total == 1.0);
  }
  SUBCASE("unresolved is rejected") {
    ReasoningTrace t = make_trace({{SegmentKind::Answer, "sad"}});
    CHECK_THROWS_AS(
        score(t, ModalityImportance::Unresolved, sad, lex(), dfew()),
        UnresolvedMiError);
  }
}

TEST_CASE("score with mi=both follows the leading description") {
  EmotionLabel sad = *dfew().find("sad");
  ReasoningTrace audio_first = make_trace(
      {{SegmentKind::AudDesc, "She is sobbing."},
       {SegmentKind::VisDesc, "Blank stare."},
       {SegmentKind::Answer, "sad"}});
  ReasoningTrace visual_first = make_trace(
      {{SegmentKind::VisDesc, "A tearful face."},
       {SegmentKind::AudDesc, "Flat hum."},
       {SegmentKind::Answer, "sad"}});
  ReasoningTrace think_first = make_trace(
      {{SegmentKind::Think, "Sobbing somewhere."},
       {SegmentKind::Answer, "sad"}});

  CHECK(score(audio_first, ModalityImportance::Both, sad, lex(), dfew())
            .r_mao == 1.0);
  CHECK(score(visual_first, ModalityImportance::Both, sad, lex(), dfew())
            .r_mao == 1.0);
  RewardBreakdown rb =
      score(think_first, ModalityImportance::Both, sad, lex(), dfew());
  CHECK(rb.r_mao == 0.0);
  CHECK(rb.r_mgr == 1.0);  // grounded against audio: think sentences only
}

TEST_CASE("component ranges and exact sum on random traces") {
  std::mt19937 rng(42);
  for (int i = 0; i < 400; ++i) {
    ReasoningTrace t = testutil::random_trace(rng);
    EmotionLabel target = dfew().label(static_cast<int>(rng() % 7));
    ModalityImportance mi = (rng() % 2) ? ModalityImportance::Audio
                                        : ModalityImportance::Visual;
    RewardBreakdown rb = score(t, mi, target, lex(), dfew());
    CHECK((rb.r_mao == 0.0 || rb.r_mao == 1.0));
    CHECK((rb.r_answer == 0.0 || rb.r_answer == 1.0));
    CHECK(rb.r_mgr >= 0.0);
    CHECK(rb.r_mgr <= 1.0);
    CHECK(rb.r_total >= 0.0);
    CHECK(rb.r_total <= 3.0);
    // independent recomputation of the sum
    double again = mao_reward(t, mi, target, lex()) +
                   mgr_reward(t, mi, target, lex()) +
                   answer_reward(t, target, dfew());
    CHECK(rb.r_total == again);
  }
}

TEST_CASE("mao evidence implies target membership") {
  std::mt19937 rng(43);
  std::vector<std::string> texts = {
      "She is sobbing.", "Loud yelling.", "A gasp.", "The table is brown.",
      "Trembling hands. Weeping softly.", ""};
  for (int i = 0; i < 200; ++i) {
    ReasoningTrace t = make_trace(
        {{SegmentKind::AudDesc, texts[rng() % texts.size()]},
         {SegmentKind::Think, texts[rng() % texts.size()]}});
    EmotionLabel target = dfew().label(static_cast<int>(rng() % 7));
    if (mao_reward(t, ModalityImportance::Audio, target, lex()) == 1.0) {
      auto sentences = split_sentences(t.segments[0].text);
      CHECK(emotion_set(sentences, lex()).contains(target));
    }
  }
}

TEST_CASE("appending think sentences moves mgr_reward monotonically") {
  EmotionLabel sad = *dfew().find("sad");
  std::mt19937 rng(44);
  for (int i = 0; i < 200; ++i) {
    ReasoningTrace t = make_trace(
        {{SegmentKind::AudDesc, "She is sobbing. The room is dim."},
         {SegmentKind::Think, ""}});
    std::string think;
    int n = static_cast<int>(rng() % 4);
    for (int s = 0; s < n; ++s) {
      think += (rng() % 2) ? "Weeping again. " : "Nothing here. ";
    }
    t.segments[1].text = think;
    double before = mgr_reward(t, ModalityImportance::Audio, sad, lex());

    ReasoningTrace off = t;
    off.segments[1].text += "The chair squeaks. ";
    CHECK(mgr_reward(off, ModalityImportance::Audio, sad, lex()) <=
          before + 1e-12);

    ReasoningTrace on = t;
    on.segments[1].text += "Tearful still. ";
    CHECK(mgr_reward(on, ModalityImportance::Audio, sad, lex()) >=
          before - 1e-12);
  }
}
