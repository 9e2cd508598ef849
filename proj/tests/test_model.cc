// Copyright 2026 The hysafe Authors
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

#include <gtest/gtest.h>

#include "hysafe/model.h"

namespace hysafe {
namespace {

TEST(Guideword, TokensRoundTrip) {
  for (Guideword g : kAllGuidewords) {
    auto back = parse_guideword(guideword_token(g));
    ASSERT_TRUE(back.has_value());
    EXPECT_EQ(*back, g);
  }
  EXPECT_FALSE(parse_guideword("TooEarly").has_value());
  EXPECT_FALSE(parse_guideword("incorrectvalue").has_value());
}

TEST(Guideword, DescribesCompositeSetsAsWorksheetText) {
  EXPECT_EQ(describe_guidewords({Guideword::kIncorrectValue}), "Incorrect Value");
  EXPECT_EQ(describe_guidewords({Guideword::kMissingValue}), "Missing Value");
  EXPECT_EQ(describe_guidewords(
                {Guideword::kIncorrectValue, Guideword::kIncorrectTiming}),
            "Incorrect Value/Timing");
  EXPECT_EQ(describe_guidewords(
                {Guideword::kValueTooHigh, Guideword::kValueTooLow}),
            "Value too high/low");
  EXPECT_EQ(describe_guidewords(
                {Guideword::kIncorrectValue, Guideword::kMissingValue}),
            "Incorrect or Missing Value");
}

TEST(Identifier, Syntax) {
  EXPECT_TRUE(is_identifier("Encoder"));
  EXPECT_TRUE(is_identifier("_x"));
  EXPECT_TRUE(is_identifier("a-b_9"));
  EXPECT_FALSE(is_identifier(""));
  EXPECT_FALSE(is_identifier("9a"));
  EXPECT_FALSE(is_identifier("-a"));
  EXPECT_FALSE(is_identifier("a b"));
  EXPECT_FALSE(is_identifier("a.b"));
}

TEST(Rating, Range) {
  EXPECT_TRUE(rating_in_range(1));
  EXPECT_TRUE(rating_in_range(10));
  EXPECT_FALSE(rating_in_range(0));
  EXPECT_FALSE(rating_in_range(11));
}

TEST(Project, EqualityIgnoresSourceLocations) {
  HazardProject a;
  a.architecture.components.push_back(Component{.id = "A"});
  HazardProject b = a;
  b.locations["component:A"] = SourceSpan{"x.hsa", 3, 1, 9};
  EXPECT_EQ(a, b);
  b.architecture.components[0].name = "different";
  EXPECT_NE(a, b);
}

TEST(Project, Lookups) {
  HazardProject p;
  p.architecture.components.push_back(Component{.id = "Enc"});
  p.architecture.pseudo_elements.push_back("Dataset");
  EXPECT_NE(p.architecture.find_component("Enc"), nullptr);
  EXPECT_EQ(p.architecture.find_component("Dataset"), nullptr);
  EXPECT_TRUE(p.architecture.has_element("Dataset"));
  EXPECT_FALSE(p.architecture.has_element("Nope"));

  FaultTree t;
  t.id = "t";
  t.top = "g";
  t.nodes.push_back(FaultNode{"g", Gate{GateKind::kOr, {"e"}, ""}});
  t.nodes.push_back(FaultNode{"e", BasicEvent{}});
  ASSERT_NE(t.find("e"), nullptr);
  EXPECT_FALSE(t.find("e")->is_gate());
  EXPECT_EQ(t.find("zz"), nullptr);
}

}  // namespace
}  // namespace hysafe
