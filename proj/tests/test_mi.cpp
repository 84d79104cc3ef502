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

#include "migr/mi.hpp"

#include <algorithm>
#include <random>

#include "doctest.h"

using namespace migr;

namespace {

const Taxonomy& dfew() { return builtin_taxonomy("dfew"); }

// (a, v, av) flags -> triple against a fixed target/wrong pair.
PredictionTriple make_triple(bool a, bool v, bool av,
                             const EmotionLabel& target,
                             const EmotionLabel& wrong) {
  PredictionTriple t;
  t.audio_only = a ? target : wrong;
  t.visual_only = v ? target : wrong;
  t.audio_visual = av ? target : wrong;
  return t;
}

}  // namespace

TEST_CASE("estimate_mi matches the full decision table") {
  EmotionLabel target = *dfew().find("sad");
  EmotionLabel wrong = *dfew().find("angry");
  struct Row {
    bool a, v, av;
    ModalityImportance expected;
  };
  const Row table[] = {
      {true, false, false, ModalityImportance::Audio},
      {true, false, true, ModalityImportance::Audio},
      {false, true, false, ModalityImportance::Visual},
      {false, true, true, ModalityImportance::Visual},
      {true, true, false, ModalityImportance::Both},
      {true, true, true, ModalityImportance::Both},
      {false, false, true, ModalityImportance::Both},
      {false, false, false, ModalityImportance::Unresolved},
  };
  for (const Row& row : table) {
    CAPTURE(row.a);
    CAPTURE(row.v);
    CAPTURE(row.av);
    PredictionTriple t = make_triple(row.a, row.v, row.av, target, wrong);
    CHECK(estimate_mi(t, target) == row.expected);
  }
}

TEST_CASE("absent predictions count as incorrect") {
  EmotionLabel target = *dfew().find("sad");
  PredictionTriple t;
  t.audio_only = target;
  // visual_only and audio_visual absent
  CHECK(estimate_mi(t, target) == ModalityImportance::Audio);

  PredictionTriple none;
  CHECK(estimate_mi(none, target) == ModalityImportance::Unresolved);
}

TEST_CASE("audio/visual symmetry") {
  EmotionLabel target = *dfew().find("fear");
  EmotionLabel wrong = *dfew().find("happy");
  for (int mask = 0; mask < 8; ++mask) {
    bool a = mask & 1;
    bool v = mask & 2;
    bool av = mask & 4;
    PredictionTriple t = make_triple(a, v, av, target, wrong);
    PredictionTriple swapped = t;
    std::swap(swapped.audio_only, swapped.visual_only);
    ModalityImportance mi = estimate_mi(t, target);
    ModalityImportance mi_swapped = estimate_mi(swapped, target);
    if (mi == ModalityImportance::Audio) {
      CHECK(mi_swapped == ModalityImportance::Visual);
    } else if (mi == ModalityImportance::Visual) {
      CHECK(mi_swapped == ModalityImportance::Audio);
    } else {
      CHECK(mi_swapped == mi);
    }
  }
}

TEST_CASE("mi_distribution") {
  EmotionLabel target = *dfew().find("sad");
  EmotionLabel wrong = *dfew().find("angry");

  SUBCASE("empty input") {
    std::vector<std::pair<PredictionTriple, EmotionLabel>> none;
    CHECK(mi_distribution(none) == MiCounts{});
  }
  SUBCASE("counts the three example cases") {
    std::vector<std::pair<PredictionTriple, EmotionLabel>> samples = {
        {make_triple(true, false, true, target, wrong), target},   // audio
        {make_triple(true, true, true, target, wrong), target},    // both
        {make_triple(false, false, false, target, wrong), target}, // unresolved
    };
    MiCounts counts = mi_distribution(samples);
    CHECK(counts == MiCounts{1, 0, 1, 1});
    CHECK(counts.total() == 3);
  }
  SUBCASE("order invariance") {
    std::mt19937 rng(3);
    std::vector<std::pair<PredictionTriple, EmotionLabel>> samples;
    for (int i = 0; i < 60; ++i) {
      samples.push_back({make_triple(rng() % 2, rng() % 2, rng() % 2, target,
                                     wrong),
                         target});
    }
    MiCounts before = mi_distribution(samples);
    std::shuffle(samples.begin(), samples.end(), rng);
    CHECK(mi_distribution(samples) == before);
    CHECK(before.total() == 60);
  }
}

TEST_CASE("mi string round trip") {
  for (ModalityImportance mi :
       {ModalityImportance::Audio, ModalityImportance::Visual,
        ModalityImportance::Both, ModalityImportance::Unresolved}) {
    auto back = mi_from_string(to_string(mi));
    REQUIRE(back.has_value());
    CHECK(*back == mi);
  }
  CHECK_FALSE(mi_from_string("av").has_value());
}
