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

#include <random>

#include "support/generators.hpp"
#include "swer/alignment.hpp"
#include "support/oracles.hpp"
#include "swer/errors.hpp"

namespace swer {
namespace {

using testing::oracle_distance;

using testing::bracket_vocab;
using testing::plain_vocab;
using testing::random_len;
using testing::random_tokens;

std::vector<Token> words(std::string_view text) {
  return tokenize(text, NormalizationProfile::exact());
}

std::string kinds(const EditScript& script) {
  std::string out;
  for (const auto& op : script.ops) out += op_letter(op.kind);
  return out;
}

// Replays a script and checks it rewrites ref into hyp with one token per side per op.
void expect_valid_script(const EditScript& s, const std::vector<Token>& ref,
                         const std::vector<Token>& hyp) {
  std::size_t i = 0, j = 0;
  OpCounts counts;
  for (const auto& op : s.ops) {
    ASSERT_EQ(op.ref_span.begin, i);
    ASSERT_EQ(op.hyp_span.begin, j);
    switch (op.kind) {
      case OpKind::kMatch:
        ASSERT_EQ(ref[i].surface, hyp[j].surface);
        ASSERT_EQ(op.position, i);
        ++i, ++j;
        break;
      case OpKind::kSubstitution:
        ASSERT_NE(ref[i].surface, hyp[j].surface);
        ASSERT_EQ(op.position, i);
        ++counts.substitutions, ++i, ++j;
        break;
      case OpKind::kOmission:
        ASSERT_EQ(op.position, i);
        ++counts.omissions, ++i;
        break;
      case OpKind::kInsertion:
        ASSERT_EQ(op.position, i);
        ++counts.insertions, ++j;
        break;
    }
    ASSERT_EQ(op.ref_span.end, i);
    ASSERT_EQ(op.hyp_span.end, j);
  }
  EXPECT_EQ(i, ref.size());
  EXPECT_EQ(j, hyp.size());
  EXPECT_EQ(counts, s.counts);
}

TEST(Align, EmptySides) {
  EXPECT_TRUE(align({}, {}).ops.empty());
  const auto ref = words("a b");
  EXPECT_EQ(kinds(align(ref, {})), "OO");
  EXPECT_EQ(kinds(align({}, ref)), "II");
  EXPECT_EQ(align({}, ref).ops[1].position, 0u);
}

TEST(Align, SubstitutionOfOneToken) {
  const auto s = align(words("finetune BERT"), words("finetune birds"));
  EXPECT_EQ(kinds(s), "MS");
  EXPECT_EQ(s.counts, (OpCounts{0, 0, 1}));
}

TEST(Align, FillerOmission) {
  const auto ref = words("We try to um try to do");
  const auto hyp = words("We try to try to do");
  const auto s = align(ref, hyp);
  EXPECT_EQ(s.counts, (OpCounts{0, 1, 0}));
  const auto mm = extract_mismatches(s, ref, hyp);
  ASSERT_EQ(mm.size(), 1u);
  EXPECT_EQ(mm[0].ref_text, "um");
  EXPECT_EQ(mm[0].op.position, 3u);
}

TEST(Align, TrailingInsertionAnchorsAtRefLength) {
  const auto ref = words("a b");
  const auto s = align(ref, words("a b c"));
  ASSERT_EQ(kinds(s), "MMI");
  EXPECT_EQ(s.ops[2].position, 2u);
  EXPECT_EQ(s.ops[2].ref_span, (TokenRange{2, 2}));
}

TEST(Align, TieBreakPrefersSubstitutionNearestTheEnd) {
  // "a" -> "b c" costs 2 either way; the backtrace takes the substitution
  // first, so it lands on the last hypothesis token.
  const auto s = align(words("a"), words("b c"));
  EXPECT_EQ(kinds(s), "IS");
  // Omission beats insertion when both are optimal at the same cell.
  const auto t = align(words("x a"), words("a"));
  EXPECT_EQ(kinds(t), "OM");
}

TEST(Align, CaseDifferenceIsAnError) {
  EXPECT_EQ(align(words("Toronto"), words("toronto")).counts.substitutions, 1u);
}

TEST(AlignProperty, MatchesBruteForceDistance) {
  std::mt19937 rng(42);
  for (int round = 0; round < 3000; ++round) {
    const std::size_t n = random_len(rng, 8);
    const std::size_t m = random_len(rng, 16 - n > 8 ? 8 : 16 - n);
    const auto ref = random_tokens(rng, n, plain_vocab());
    const auto hyp = random_tokens(rng, m, plain_vocab());
    const auto s = align(ref, hyp);
    const std::size_t expected = oracle_distance(ref, hyp);
    ASSERT_EQ(s.counts.total(), expected) << "round " << round;
    ASSERT_EQ(edit_distance(ref, hyp), expected);
    expect_valid_script(s, ref, hyp);
  }
}

TEST(AlignProperty, DistanceIsSymmetricAndBounded) {
  std::mt19937 rng(5);
  for (int round = 0; round < 1000; ++round) {
    const auto a = random_tokens(rng, random_len(rng, 10), plain_vocab());
    const auto b = random_tokens(rng, random_len(rng, 10), plain_vocab());
    const auto c = random_tokens(rng, random_len(rng, 10), plain_vocab());
    EXPECT_EQ(edit_distance(a, b), edit_distance(b, a));
    EXPECT_EQ(align(a, b).counts.total(), align(b, a).counts.total());
    EXPECT_LE(edit_distance(a, b), std::max(a.size(), b.size()));
    EXPECT_LE(edit_distance(a, c), edit_distance(a, b) + edit_distance(b, c));
    EXPECT_EQ(edit_distance(a, a), 0u);
  }
}

TEST(Mismatches, GroupsAreMaximalRuns) {
  const auto ref = words("a b c d e");
  const auto hyp = words("a x y d z e");
  const auto s = align(ref, hyp);
  const auto mm = extract_mismatches(s, ref, hyp);
  ASSERT_EQ(mm.size(), 3u);
  EXPECT_EQ(mm[0].group_id, 1);
  EXPECT_EQ(mm[1].group_id, 1);
  EXPECT_EQ(mm[2].group_id, 2);
  EXPECT_EQ(mm[2].hyp_text, "z");
}

TEST(Mismatches, RejectsForeignScript) {
  const auto ref = words("a b");
  const auto s = align(ref, words("a"));
  EXPECT_THROW(extract_mismatches(s, ref, words("a c")), ConsistencyError);
}

TEST(MismatchesProperty, GroupIdsDenseAndRunBound) {
  std::mt19937 rng(9);
  for (int round = 0; round < 500; ++round) {
    const auto ref = random_tokens(rng, random_len(rng, 12), plain_vocab());
    const auto hyp = random_tokens(rng, random_len(rng, 12), plain_vocab());
    const auto s = align(ref, hyp);
    const auto mm = extract_mismatches(s, ref, hyp);
    EXPECT_EQ(mm.size(), s.counts.total());
    int last = 0;
    for (std::size_t k = 0; k < mm.size(); ++k) {
      EXPECT_NE(s.ops[mm[k].op_index].kind, OpKind::kMatch);
      if (k == 0) {
        EXPECT_EQ(mm[k].group_id, 1);
      } else {
        const bool adjacent = mm[k].op_index == mm[k - 1].op_index + 1;
        EXPECT_EQ(mm[k].group_id, adjacent ? last : last + 1);
      }
      last = mm[k].group_id;
    }
  }
}

TEST(Highlight, RendersBrackets) {
  const auto ref = words("We use fine-tuning on um BERT");
  const auto hyp = words("We use finetuning on birds");
  const auto s = align(ref, hyp);
  const auto h = render_highlight(s, ref, hyp);
  EXPECT_EQ(h.ref, "We use [fine-tuning] on {um} [BERT]");
  EXPECT_EQ(h.hyp, "We use [finetuning] on [birds]");
  const auto short_ref = words("a b");
  const auto long_hyp = words("a b c");
  const auto g = render_highlight(align(short_ref, long_hyp), short_ref, long_hyp);
  EXPECT_EQ(g.ref, "a b");
  EXPECT_EQ(g.hyp, "a b <c>");
}

TEST(Highlight, EscapesBracketCharacters) {
  const auto ref = words("a [b]");
  const auto hyp = words("a <c>");
  const auto h = render_highlight(align(ref, hyp), ref, hyp);
  EXPECT_EQ(h.ref, "a [\\[b\\]]");
  EXPECT_EQ(h.hyp, "a [\\<c\\>]");
}

TEST(HighlightProperty, ParseInvertsRender) {
  std::mt19937 rng(17);
  for (int round = 0; round < 1500; ++round) {
    const auto ref = random_tokens(rng, random_len(rng, 10), bracket_vocab());
    const auto hyp = random_tokens(rng, random_len(rng, 10), bracket_vocab());
    const auto s = align(ref, hyp);
    const auto h = render_highlight(s, ref, hyp);
    const auto parsed = parse_highlight(h.ref, h.hyp);
    ASSERT_EQ(parsed, extract_mismatches(s, ref, hyp)) << h.ref << " || " << h.hyp;
    const auto doc = parse_highlight_document(format_highlight_document(h));
    EXPECT_EQ(doc.ref, h.ref);
    EXPECT_EQ(doc.hyp, h.hyp);
  }
}

TEST(Highlight, ParseErrorsCarryLocation) {
  auto expect_parse_error = [](std::string_view r, std::string_view h, std::size_t line,
                               std::size_t column) {
    try {
      parse_highlight(r, h);
      ADD_FAILURE() << "no error for " << r << " / " << h;
    } catch (const ParseError& e) {
      EXPECT_EQ(e.line(), line) << r << " / " << h;
      EXPECT_EQ(e.column(), column) << r << " / " << h;
    }
  };
  expect_parse_error("a [b", "a [c]", 1, 3);
  expect_parse_error("a b]", "a b", 1, 4);
  expect_parse_error("a <b>", "a", 1, 3);
  expect_parse_error("a", "a {b}", 2, 3);
  expect_parse_error("a [[b]]", "a [c]", 1, 4);
  expect_parse_error("a []", "a [c]", 1, 3);
  expect_parse_error("a b\\", "a b", 1, 4);
  EXPECT_THROW(parse_highlight("a [b]", "a c"), ConsistencyError);
  EXPECT_THROW(parse_highlight("a b", "a c"), ConsistencyError);
  EXPECT_THROW(parse_highlight("a b", "a"), ConsistencyError);
  EXPECT_THROW(parse_highlight_document("no blank line"), ParseError);
}

TEST(OpKind, NamesRoundTrip) {
  for (OpKind k : {OpKind::kMatch, OpKind::kSubstitution, OpKind::kOmission, OpKind::kInsertion}) {
    EXPECT_EQ(parse_op_kind(std::string(1, op_letter(k))), k);
    EXPECT_EQ(parse_op_kind(op_name(k)), k);
  }
  EXPECT_THROW(parse_op_kind("X"), InputError);
}

}  // namespace
}  // namespace swer
