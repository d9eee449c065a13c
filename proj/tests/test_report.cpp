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
#include <sstream>

#include "support/generators.hpp"
#include "swer/errors.hpp"
#include "swer/report.hpp"

namespace swer {
namespace {

using testing::plain_vocab;
using testing::random_annotations;
using testing::random_len;
using testing::random_tokens;

HumanVote vote(std::string a, std::string b, Verdict v, std::string scene = "s1") {
  return HumanVote{"v1", std::move(scene), std::move(a), std::move(b), v, "g"};
}

AnnotatedMismatch labelled(ContentType type, Severity severity, int group) {
  AnnotatedMismatch a;
  a.mismatch.group_id = group;
  a.mismatch.op_index = static_cast<std::size_t>(group);
  a.mismatch.op.kind = OpKind::kSubstitution;
  a.content_type = type;
  a.severity = severity;
  return a;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

bool has_line(const std::string& text, const std::string& line) {
  for (const auto& l : lines_of(text)) {
    if (l == line) return true;
  }
  return false;
}

TEST(Votes, TallyPercentages) {
  const std::vector<HumanVote> votes = {vote("vision", "text", Verdict::kWin),
                                        vote("vision", "text", Verdict::kTie),
                                        vote("vision", "text", Verdict::kLose),
                                        vote("text", "vision", Verdict::kWin)};
  const auto r = tally_votes(votes, "vision", "text");
  EXPECT_EQ(r.votes, 4u);
  EXPECT_DOUBLE_EQ(r.win, 25.0);
  EXPECT_DOUBLE_EQ(r.tie, 25.0);
  EXPECT_DOUBLE_EQ(r.lose, 50.0);
  const auto flipped = tally_votes(votes, "text", "vision");
  EXPECT_DOUBLE_EQ(flipped.win, 50.0);
  EXPECT_DOUBLE_EQ(flipped.lose, 25.0);

  const std::vector<HumanVote> sweep = {vote("a", "b", Verdict::kWin), vote("b", "a", Verdict::kLose)};
  const auto all = tally_votes(sweep, "a", "b");
  EXPECT_EQ(std::make_tuple(all.win, all.tie, all.lose), std::make_tuple(100.0, 0.0, 0.0));
  EXPECT_THROW(tally_votes(sweep, "a", "c"), PreconditionError);
  EXPECT_THROW(tally_votes({}, "a", "b"), PreconditionError);
}

TEST(Votes, AllPairsInLexicographicOrder) {
  const std::vector<HumanVote> votes = {vote("z", "a", Verdict::kWin), vote("m", "a", Verdict::kTie),
                                        vote("a", "z", Verdict::kWin)};
  const auto pairs = tally_all_pairs(votes);
  ASSERT_EQ(pairs.size(), 2u);
  EXPECT_EQ(pairs[0].system_a, "a");
  EXPECT_EQ(pairs[0].system_b, "m");
  EXPECT_EQ(pairs[1].system_b, "z");
  EXPECT_DOUBLE_EQ(pairs[1].win, 50.0);
}

TEST(Votes, TripleSumsTo100Property) {
  std::mt19937 rng(5);
  const std::vector<std::string> systems = {"asr", "text", "vision", "e2e"};
  std::uniform_int_distribution<int> pick(0, 3), verdict(0, 2);
  for (int round = 0; round < 200; ++round) {
    std::vector<HumanVote> votes;
    const int n = 1 + static_cast<int>(random_len(rng, 30));
    for (int i = 0; i < n; ++i) {
      const int a = pick(rng);
      int b = pick(rng);
      if (b == a) b = (a + 1) % 4;
      votes.push_back(vote(systems[a], systems[b], static_cast<Verdict>(verdict(rng))));
    }
    std::size_t total = 0;
    for (const auto& r : tally_all_pairs(votes)) {
      EXPECT_NEAR(r.win + r.tie + r.lose, 100.0, 1e-9);
      EXPECT_LT(r.system_a, r.system_b);
      total += r.votes;
    }
    EXPECT_EQ(total, votes.size());
  }
}

TEST(Votes, ReadRejectsBadRecords) {
  std::istringstream ok(
      R"({"video_id":"v","scene_id":3,"system_a":"a","system_b":"b","verdict":"tie","annotator_group":"x"})"
      "\n\n");
  const auto votes = read_votes(ok);
  ASSERT_EQ(votes.size(), 1u);
  EXPECT_EQ(votes[0].scene_id, "3");
  EXPECT_EQ(votes[0].verdict, Verdict::kTie);
  for (const char* bad : {R"({"video_id":"v","scene_id":"s","system_a":"a","system_b":"b","verdict":"draw"})",
                          R"({"video_id":"v","scene_id":"s","system_a":"a","system_b":"a","verdict":"win"})",
                          R"({"video_id":"v","scene_id":"s","system_a":"a","verdict":"win"})", "{"}) {
    std::istringstream in(std::string("\n") + bad + "\n");
    try {
      read_votes(in);
      FAIL() << bad;
    } catch (const ParseError& e) {
      EXPECT_EQ(e.line(), 2u);
    }
  }
}

EvalReport baseline_report() {
  std::vector<AnnotatedMismatch> a;
  int g = 0;
  for (int i = 0; i < 529; ++i) a.push_back(labelled(ContentType::kGen, Severity::kCritical, ++g));
  for (int i = 0; i < 176; ++i) a.push_back(labelled(ContentType::kGen, Severity::kMinor, ++g));
  for (int i = 0; i < 524; ++i) a.push_back(labelled(ContentType::kGen, Severity::kOk, ++g));
  return build_report("asr", 10000, OpCounts{0, 0, 1229}, a, SeverityWeights::standard(),
                      TermRecall{3, 4}, 1229);
}

TEST(RenderReport, TableRows) {
  auto bundle = make_bundle({baseline_report()}, "all", 1229);
  bundle.votes.push_back(VoteRatio{"text", "vision", 4, 25.0, 25.0, 50.0});
  bundle.correlations.push_back(CorrelationEntry{"difficulty~wer", 10, -0.5, -0.636});
  const std::string table = render_report(bundle, ReportFormat::kTable);
  EXPECT_TRUE(has_line(table, "asr      0.0/0  0.0/0  0.0/0  0.0/0  0.0/0  739.4/1229  12.29  7.39        75.00"))
      << table;
  EXPECT_TRUE(has_line(table, "asr         43.04  14.32  42.64  1229 (baseline)")) << table;
  EXPECT_TRUE(has_line(table, "all         43.04  14.32  42.64  1229 (baseline)")) << table;
  EXPECT_TRUE(has_line(table, "text vs vision      4  25.00  25.00  50.00")) << table;
  EXPECT_TRUE(has_line(table, "difficulty~wer  10   -0.500    -0.636")) << table;
  EXPECT_NE(table.find("weights: default"), std::string::npos);
}

TEST(RenderReport, EmptyMismatchSetIsAllZero) {
  const auto clean = build_report("clean", 12, OpCounts{}, {}, SeverityWeights::standard(), TermRecall{});
  const std::string table = render_report(make_bundle({clean}, "all"), ReportFormat::kTable);
  EXPECT_TRUE(has_line(table, "clean    0.0/0  0.0/0  0.0/0  0.0/0  0.0/0  0.0/0  0.00  0.00            -"))
      << table;
  EXPECT_TRUE(has_line(table, "clean        0.00   0.00  0.00            0")) << table;
}

TEST(RenderReport, RefusesInconsistentBundles) {
  const auto good = make_bundle({baseline_report()}, "all", 1229);
  EXPECT_NO_THROW(check_bundle(good));

  auto bad_wer = good;
  bad_wer.per_video[0].wer += 0.01;
  auto bad_sum = good;
  bad_sum.aggregate.ref_len += 1;
  bad_sum.aggregate.wer = static_cast<double>(bad_sum.aggregate.mismatches) / bad_sum.aggregate.ref_len;
  bad_sum.aggregate.swer = bad_sum.aggregate.weighted_total.value() / bad_sum.aggregate.ref_len;
  auto bad_counts = good;
  bad_counts.aggregate.severity_counts[0] += 1;
  auto bad_votes = good;
  bad_votes.votes.push_back(VoteRatio{"a", "b", 3, 33.0, 33.0, 33.0});
  for (const auto* b : {&bad_wer, &bad_sum, &bad_counts, &bad_votes}) {
    EXPECT_THROW(render_report(*b, ReportFormat::kTable), ConsistencyError);
    EXPECT_THROW(render_report(*b, ReportFormat::kStructured), ConsistencyError);
  }
}

TEST(RenderReport, ParseRejectsTamperedDocuments) {
  const std::string doc = render_report(make_bundle({baseline_report()}, "all", 1229), ReportFormat::kStructured);
  EXPECT_NO_THROW(parse_report(doc));
  std::string tampered = doc;
  const auto pos = tampered.find("\"mismatches\": 1229");
  ASSERT_NE(pos, std::string::npos);
  tampered.replace(pos, 18, "\"mismatches\": 1228");
  EXPECT_THROW(parse_report(tampered), ConsistencyError);
  EXPECT_THROW(parse_report("{\"per_video\": []}"), InputError);
  EXPECT_THROW(parse_report_format("html"), ConfigError);
}

// Random per-video reports with votes survive the structured form exactly.
TEST(RenderReportProperty, StructuredRoundTrip) {
  std::mt19937 rng(77);
  const SeverityWeights weights[] = {SeverityWeights::standard(), SeverityWeights::alternate(),
                                     SeverityWeights(0.9, 0.35, 0.05)};
  for (int round = 0; round < 150; ++round) {
    const auto& w = weights[round % 3];
    std::vector<EvalReport> reports;
    const std::size_t videos = 1 + random_len(rng, 3);
    for (std::size_t v = 0; v < videos; ++v) {
      const auto ref = random_tokens(rng, 1 + random_len(rng, 14), plain_vocab());
      const auto hyp = random_tokens(rng, random_len(rng, 14), plain_vocab());
      const auto script = align(ref, hyp);
      const auto annotated = random_annotations(rng, extract_mismatches(script, ref, hyp));
      const std::size_t total = random_len(rng, 3);
      reports.push_back(build_report("v" + std::to_string(v), ref.size(), script.counts, annotated, w,
                                     TermRecall{std::min(total, random_len(rng, 3)), total}));
    }
    auto bundle = make_bundle(reports, "all");
    std::vector<HumanVote> votes;
    for (std::size_t i = 0, n = 1 + random_len(rng, 7); i < n; ++i) {
      votes.push_back(vote(i % 2 ? "x" : "y", i % 2 ? "y" : "x", static_cast<Verdict>(random_len(rng, 2))));
    }
    bundle.votes = tally_all_pairs(votes);
    const auto parsed = parse_report(render_report(bundle, ReportFormat::kStructured));
    EXPECT_EQ(parsed, bundle);
    EXPECT_EQ(render_report(parsed, ReportFormat::kTable), render_report(bundle, ReportFormat::kTable));
  }
}

TEST(ReportJson, SingleReportRoundTrip) {
  const auto r = baseline_report();
  EXPECT_EQ(report_from_json(report_to_json(r)), r);
  EXPECT_THROW(report_from_json("[1]"), InputError);
}

}  // namespace
}  // namespace swer
