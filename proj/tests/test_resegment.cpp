// Copyright 2026 The swer-toolkit Authors. All Rights Reserved.
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

#include <functional>
#include <random>

#include "support/generators.hpp"
#include "swer/alignment.hpp"
#include "support/oracles.hpp"
#include "swer/errors.hpp"
#include "swer/resegment.hpp"

namespace swer {
namespace {

using testing::cost_of;
using testing::brute_force_cuts;

using testing::plain_vocab;
using testing::random_len;
using testing::random_tokens;

std::vector<Token> words(std::string_view text) {
  return tokenize(text, NormalizationProfile::exact());
}

TEST(Resegment, SingleSegmentTakesEverything) {
  const std::vector<std::vector<Token>> refs = {words("a b c")};
  const auto r = resegment(refs, words("a x c d"));
  EXPECT_TRUE(r.boundaries.empty());
  EXPECT_EQ(r.per_segment_cost, (std::vector<std::size_t>{2}));
}

TEST(Resegment, IdentityRecoversOriginalCuts) {
  const std::vector<std::vector<Token>> refs = {words("we fine-tune BERT"), words("on thirty tasks"),
                                                words("and report scores")};
  std::vector<Token> hyp;
  for (const auto& r : refs) hyp.insert(hyp.end(), r.begin(), r.end());
  const auto cut = resegment(refs, hyp);
  EXPECT_EQ(cut.boundaries, (std::vector<std::size_t>{3, 6}));
  EXPECT_EQ(cut.total_cost(), 0u);
}

TEST(Resegment, EmptyHypothesisGivesEmptyPieces) {
  const std::vector<std::vector<Token>> refs = {words("a b"), words("c")};
  const auto cut = resegment(refs, {});
  EXPECT_EQ(cut.boundaries, (std::vector<std::size_t>{0}));
  EXPECT_EQ(cut.per_segment_cost, (std::vector<std::size_t>{2, 1}));
}

TEST(Resegment, NoSegmentsIsPrecondition) {
  EXPECT_THROW(resegment(std::vector<std::vector<Token>>{}, words("a")), PreconditionError);
}

TEST(Resegment, TranscriptCopiesIdsAndTimes) {
  Transcript ref{"v", TranscriptRole::kReference, {}};
  ref.segments.push_back(Segment{"s1", 0.0, 2.0, words("we fine-tune"), {}});
  ref.segments.push_back(Segment{"s2", 2.0, 5.0, words("BERT today"), {}});
  const auto out = resegment_transcript(ref, words("we finetune birds today"));
  ASSERT_EQ(out.segments.size(), 2u);
  EXPECT_EQ(out.role, TranscriptRole::kHypothesis);
  EXPECT_EQ(out.segments[0].id, "s1");
  EXPECT_EQ(out.segments[1].end_s, 5.0);
  EXPECT_EQ(join_surfaces(out.segments[0].tokens), "we finetune");
  EXPECT_EQ(join_surfaces(out.segments[1].tokens), "birds today");
}

TEST(ResegmentProperty, MatchesExhaustiveSearch) {
  std::mt19937 rng(23);
  for (int round = 0; round < 600; ++round) {
    const std::size_t k = 1 + random_len(rng, 3);
    std::vector<std::vector<Token>> refs;
    for (std::size_t s = 0; s < k; ++s) refs.push_back(random_tokens(rng, random_len(rng, 4), plain_vocab()));
    const auto hyp = random_tokens(rng, random_len(rng, 12), plain_vocab());
    std::size_t expected_cost = 0;
    const auto expected = brute_force_cuts(refs, hyp, &expected_cost);
    const auto got = resegment(refs, hyp);
    ASSERT_EQ(got.total_cost(), expected_cost) << "round " << round;
    ASSERT_EQ(got.boundaries, expected) << "round " << round;
    EXPECT_EQ(cost_of(refs, hyp, got.boundaries), expected_cost);
  }
}

// The pieces always concatenate back to the hypothesis.
TEST(ResegmentProperty, PiecesPartitionHypothesis) {
  std::mt19937 rng(29);
  for (int round = 0; round < 300; ++round) {
    std::vector<std::vector<Token>> refs;
    const std::size_t k = 1 + random_len(rng, 6);
    for (std::size_t s = 0; s < k; ++s) refs.push_back(random_tokens(rng, random_len(rng, 6), plain_vocab()));
    const auto hyp = random_tokens(rng, random_len(rng, 30), plain_vocab());
    const auto cut = resegment(refs, hyp);
    ASSERT_EQ(cut.boundaries.size(), k - 1);
    std::vector<Token> joined;
    for (std::size_t s = 0; s < k; ++s) {
      const auto r = cut.segment_range(s, hyp.size());
      ASSERT_LE(r.begin, r.end);
      joined.insert(joined.end(), hyp.begin() + r.begin, hyp.begin() + r.end);
    }
    EXPECT_EQ(joined, hyp);
    // Never worse than aligning the whole stream at once.
    std::vector<Token> all_ref;
    for (const auto& r : refs) all_ref.insert(all_ref.end(), r.begin(), r.end());
    EXPECT_GE(cut.total_cost(), edit_distance(all_ref, hyp));
  }
}

}  // namespace
}  // namespace swer
