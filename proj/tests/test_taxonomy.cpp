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

#include "migr/taxonomy.hpp"

#include "doctest.h"
#include "migr/errors.hpp"
#include "migr/io.hpp"

using namespace migr;

TEST_CASE("built-in label sets") {
  const Taxonomy& dfew = builtin_taxonomy("dfew");
  REQUIRE(dfew.size() == 7);
  std::vector<std::string> names;
  for (const auto& l : dfew.labels()) names.push_back(l.name);
  CHECK(names == std::vector<std::string>{"happy", "sad", "neutral", "angry",
                                          "surprise", "disgust", "fear"});

  const Taxonomy& emer = builtin_taxonomy("emer");
  REQUIRE(emer.size() == 5);
  CHECK(emer.labels()[0].name == "angry");
  CHECK(emer.labels()[3].name == "worried");

  const Taxonomy& mafw = builtin_taxonomy("mafw");
  REQUIRE(mafw.size() == 11);
  CHECK(mafw.find("anxiety").has_value());
  CHECK(mafw.find("contempt").has_value());
  CHECK(mafw.find("disappointment").has_value());
  CHECK(mafw.find("helplessness").has_value());

  CHECK_THROWS_AS(builtin_taxonomy("afew"), ValidationError);
}

TEST_CASE("normalize_label") {
  const Taxonomy& dfew = builtin_taxonomy("dfew");

  SUBCASE("case and whitespace") {
    auto l = normalize_label("Happy ", dfew);
    REQUIRE(l.has_value());
    CHECK(l->name == "happy");
  }
  SUBCASE("alias table") {
    auto l = normalize_label("happiness", dfew);
    REQUIRE(l.has_value());
    CHECK(l->name == "happy");
  }
  SUBCASE("unmapped surface form") {
    CHECK_FALSE(normalize_label("melancholy", dfew).has_value());
  }
  SUBCASE("short forms used by reports") {
    CHECK(normalize_label("Sur", dfew)->name == "surprise");
    CHECK(normalize_label("Fea", dfew)->name == "fear");
  }
  SUBCASE("unk is not a label") {
    CHECK_FALSE(normalize_label("Unk", dfew).has_value());
  }
}

TEST_CASE("normalization is idempotent over all built-ins") {
  for (const char* name : {"emer", "dfew", "mafw"}) {
    const Taxonomy& t = builtin_taxonomy(name);
    for (const EmotionLabel& label : t.labels()) {
      auto once = t.normalize(label.name);
      REQUIRE(once.has_value());
      CHECK(*once == label);
      auto twice = t.normalize(once->name);
      REQUIRE(twice.has_value());
      CHECK(*twice == *once);
    }
    for (const auto& [surface, canonical] : t.aliases()) {
      auto via_alias = t.normalize(surface);
      REQUIRE(via_alias.has_value());
      CHECK(via_alias->name == canonical);
    }
  }
}

TEST_CASE("construction validation") {
  CHECK_THROWS_AS(Taxonomy("t", {"happy", "happy"}), ValidationError);
  CHECK_THROWS_AS(Taxonomy("t", {"Happy"}), ValidationError);
  CHECK_THROWS_AS(Taxonomy("t", {" happy"}), ValidationError);
  CHECK_THROWS_AS(Taxonomy("t", {""}), ValidationError);
  CHECK_THROWS_AS(Taxonomy("t", {"happy"}, {{"joy", "joyful"}}),
                  ValidationError);
  CHECK_THROWS_AS(Taxonomy("", {"happy"}), ValidationError);
}

TEST_CASE("taxonomy json round trip") {
  const Taxonomy& mafw = builtin_taxonomy("mafw");
  Json j = taxonomy_to_json(mafw);
  Taxonomy back = taxonomy_from_json(j);
  CHECK(back.name() == mafw.name());
  REQUIRE(back.size() == mafw.size());
  for (size_t i = 0; i < mafw.size(); ++i) {
    CHECK(back.label(static_cast<int>(i)) == mafw.label(static_cast<int>(i)));
  }
  CHECK(back.aliases() == mafw.aliases());
}
