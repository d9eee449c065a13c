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

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "support/generators.hpp"
#include "swer/errors.hpp"
#include "swer/metrics.hpp"

namespace swer {
namespace {

using testing::plain_vocab;
using testing::random_annotations;
using testing::random_len;
using testing::random_tokens;

std::vector<Token> words(std::string_view text) {
  return tokenize(text, NormalizationProfile::exact());
}

AnnotatedMismatch labelled(ContentType type, Severity severity, int group = 1) {
  AnnotatedMismatch a;
  a.mismatch.group_id = group;
  a.mismatch.op_index = static_cast<std::size_t>(group);
  a.mismatch.op.kind = OpKind::kSubstitution;
  a.content_type = type;
  a.severity = severity;
  return a;
}

// O(n^2) tie-aware ranks and a textbook two-pass Pearson.
double oracle_pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) mx += x[i] / n, my += y[i] / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

std::vector<double> oracle_ranks(const std::vector<double>& v) {
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    double less = 0, equal = 0;
    for (std::size_t j = 0; j < v.size(); ++j) {
      if (v[j] < v[i]) ++less;
      if (j != i && v[j] == v[i]) ++equal;
    }
    r[i] = 1 + less + equal / 2;
  }
  return r;
}

TEST(Wer, CountsOverReferenceLength) {
  const auto s = align(words("a b c d"), words("a x c"));
  EXPECT_DOUBLE_EQ(wer(s), 0.5);
  EXPECT_THROW(wer(align({}, words("a"))), UndefinedMetricError);
  EXPECT_THROW(wer(0, 0), UndefinedMetricError);
}

TEST(Swer, WeightsBySeverity) {
  const std::vector<AnnotatedMismatch> a = {labelled(ContentType::kTerm, Severity::kCritical, 1),
                                            labelled(ContentType::kDisf, Severity::kOk, 2),
                                            labelled(ContentType::kGram, Severity::kMinor, 3)};
  // (1.0 + 0.2 + 0.6) / 10
  EXPECT_NEAR(swer(a, 10, SeverityWeights::standard()), 0.18, 1e-15);
  EXPECT_NEAR(swer(a, 10, SeverityWeights::alternate()), 0.16, 1e-15);
  EXPECT_EQ(swer(a, 10, SeverityWeights::uniform()), wer(3, 10));
  EXPECT_EQ(swer({}, 7, SeverityWeights::standard()), 0.0);
  EXPECT_THROW(swer(a, 0, SeverityWeights::standard()), UndefinedMetricError);
}

TEST(SeverityWeights, ParseAndValidate) {
  EXPECT_EQ(SeverityWeights::parse("default").weight(Severity::kMinor),
            WeightedScore::from_units(600'000'000));
  const auto w = SeverityWeights::parse("0.9,0.4,0");
  EXPECT_EQ(w.weight(Severity::kOk).units(), 0);
  EXPECT_EQ(w.weight(Severity::kCritical).units(), 900'000'000);
  EXPECT_THROW(SeverityWeights::parse("0.2,0.6,1.0"), InputError);
  EXPECT_THROW(SeverityWeights::parse("1.5,0.6,0.2"), InputError);
  EXPECT_THROW(SeverityWeights::parse("1,0.5"), InputError);
  EXPECT_THROW(SeverityWeights::parse("heavy"), InputError);
}

TEST(WeightedScore, RendersDecimal) {
  EXPECT_EQ(WeightedScore::from_value(271.4).to_string(), "271.4");
  EXPECT_EQ(WeightedScore::from_value(12).to_string(), "12");
  EXPECT_EQ(WeightedScore::from_value(0.2).to_string(), "0.2");
}

struct ComparisonRow {
  std::size_t critical, minor, ok;
  double critical_pct, minor_pct, ok_pct;
};

// Severity distributions over a shared 1229-mismatch baseline.
TEST(AggregateScores, BaselinePercentages) {
  const std::vector<ComparisonRow> rows = {{529, 176, 524, 43.04, 14.32, 42.64},
                                           {328, 185, 599, 26.69, 15.05, 48.74},
                                           {178, 181, 603, 14.48, 14.73, 49.06}};
  for (const auto& row : rows) {
    std::vector<AnnotatedMismatch> a;
    int g = 0;
    for (std::size_t i = 0; i < row.critical; ++i) a.push_back(labelled(ContentType::kGen, Severity::kCritical, ++g));
    for (std::size_t i = 0; i < row.minor; ++i) a.push_back(labelled(ContentType::kGen, Severity::kMinor, ++g));
    for (std::size_t i = 0; i < row.ok; ++i) a.push_back(labelled(ContentType::kGen, Severity::kOk, ++g));
    const auto agg = aggregate_scores(a, SeverityWeights::standard(), 1229);
    EXPECT_NEAR(agg.severity_percentages[severity_value(Severity::kCritical)], row.critical_pct, 0.01);
    EXPECT_NEAR(agg.severity_percentages[severity_value(Severity::kMinor)], row.minor_pct, 0.01);
    EXPECT_NEAR(agg.severity_percentages[severity_value(Severity::kOk)], row.ok_pct, 0.01);
  }
}

TEST(AggregateScores, OwnTotalAndEmpty) {
  const std::vector<AnnotatedMismatch> a = {labelled(ContentType::kTerm, Severity::kCritical, 1),
                                            labelled(ContentType::kTerm, Severity::kOk, 2)};
  const auto agg = aggregate_scores(a, SeverityWeights::standard());
  EXPECT_DOUBLE_EQ(agg.severity_percentages[severity_value(Severity::kCritical)], 50.0);
  EXPECT_EQ(agg.content_scores[index_of(ContentType::kTerm)].unweighted, 2u);
  EXPECT_EQ(agg.content_scores[index_of(ContentType::kTerm)].weighted.units(), 1'200'000'000);
  const auto empty = aggregate_scores({}, SeverityWeights::standard());
  for (double p : empty.severity_percentages) EXPECT_EQ(p, 0.0);
  EXPECT_THROW(aggregate_scores(a, SeverityWeights::standard(), 0), PreconditionError);
}

// Random annotated alignments: uniform weights reproduce WER exactly and
// the default weights never exceed it.
TEST(SwerProperty, Identities) {
  std::mt19937 rng(101);
  for (int round = 0; round < 800; ++round) {
    const auto ref = random_tokens(rng, 1 + random_len(rng, 15), plain_vocab());
    const auto hyp = random_tokens(rng, random_len(rng, 15), plain_vocab());
    const auto script = align(ref, hyp);
    const auto annotated = random_annotations(rng, extract_mismatches(script, ref, hyp));
    const std::size_t n = ref.size();
    EXPECT_EQ(swer(annotated, n, SeverityWeights::uniform()), wer(script));
    const double standard = swer(annotated, n, SeverityWeights::standard());
    EXPECT_LE(standard, wer(script));
    const auto agg = aggregate_scores(annotated, SeverityWeights::standard());
    WeightedScore sum;
    std::size_t unweighted = 0;
    for (const auto& c : agg.content_scores) sum += c.weighted, unweighted += c.unweighted;
    EXPECT_EQ(sum, agg.weighted_total);
    EXPECT_EQ(unweighted, script.counts.total());
    EXPECT_EQ(standard, swer_from_total(sum, n));
    const auto report = build_report("r", n, script.counts, annotated, SeverityWeights::standard(), {});
    EXPECT_NO_THROW(report.check_identities());
  }
}

TEST(TermRecall, ContiguousNormalizedMatch) {
  const auto m = NormalizationProfile::matching();
  std::vector<Segment> ref(2);
  ref[0].tokens = words("we fine-tune BERT models");
  ref[0].terms = {{1, 2}, {2, 3}};
  ref[1].tokens = words("on the GLUE benchmark");
  ref[1].terms = {{2, 4}};
  const std::vector<std::vector<Token>> hyp = {words("we finetune birds models"),
                                               words("on the glue, benchmark.")};
  const auto r = count_term_recall(ref, hyp, m);
  EXPECT_EQ(r.matched, 2u);
  EXPECT_EQ(r.total, 3u);
  EXPECT_NEAR(r.percent(), 66.6667, 1e-4);
  EXPECT_THROW(count_term_recall(ref, std::vector<std::vector<Token>>(1), m), PreconditionError);
  std::vector<Segment> none(1);
  none[0].tokens = words("x");
  EXPECT_THROW(term_recall(none, std::vector<std::vector<Token>>(1), m), UndefinedMetricError);
}

TEST(Correlation, DifficultyAgainstWerFixture) {
  std::ifstream in(SWER_FIXTURE_DIR "/difficulty_vs_wer.csv");
  ASSERT_TRUE(in);
  std::string line;
  std::getline(in, line);
  std::vector<double> ds, w;
  while (std::getline(in, line)) {
    std::istringstream row(line);
    std::string video, a, b;
    std::getline(row, video, ',');
    std::getline(row, a, ',');
    std::getline(row, b, ',');
    ds.push_back(std::stod(a));
    w.push_back(std::stod(b));
  }
  ASSERT_EQ(ds.size(), 10u);
  EXPECT_NEAR(correlation(ds, w, CorrelationMode::kSpearman), -0.636, 0.001);
  EXPECT_NEAR(correlation(ds, w, CorrelationMode::kSpearman), -7.0 / 11.0, 1e-12);
}

TEST(Correlation, KnownValuesAndErrors) {
  const std::vector<double> x = {1, 2, 3, 4};
  const std::vector<double> y = {2, 4, 6, 8};
  const std::vector<double> z = {1, 1, 1, 1};
  EXPECT_NEAR(correlation(x, y, CorrelationMode::kPearson), 1.0, 1e-12);
  EXPECT_NEAR(correlation(x, std::vector<double>{8, 6, 4, 2}, CorrelationMode::kSpearman), -1.0, 1e-12);
  EXPECT_THROW(correlation(x, z, CorrelationMode::kPearson), UndefinedMetricError);
  EXPECT_THROW(correlation(x, std::vector<double>{1, 2}, CorrelationMode::kPearson), PreconditionError);
  EXPECT_THROW(correlation(std::vector<double>{1}, std::vector<double>{1}, CorrelationMode::kSpearman), PreconditionError);
  EXPECT_EQ(average_ranks(std::vector<double>{10, 20, 20, 5}), (std::vector<double>{2, 3.5, 3.5, 1}));
}

TEST(CorrelationProperty, MatchesIndependentImplementation) {
  std::mt19937 rng(55);
  std::uniform_int_distribution<int> small(0, 5);
  std::normal_distribution<double> noise(0.0, 1.0);
  int compared = 0;
  for (int round = 0; round < 400; ++round) {
    const std::size_t n = 2 + random_len(rng, 18);
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      // Draw from a small integer set half the time so ties are common.
      x[i] = round % 2 ? small(rng) : noise(rng);
      y[i] = round % 3 ? small(rng) + 0.5 * x[i] : noise(rng);
    }
    const bool constant = std::all_of(x.begin(), x.end(), [&](double v) { return v == x[0]; }) ||
                          std::all_of(y.begin(), y.end(), [&](double v) { return v == y[0]; });
    if (constant) {
      EXPECT_THROW(correlation(x, y, CorrelationMode::kPearson), UndefinedMetricError);
      continue;
    }
    EXPECT_NEAR(correlation(x, y, CorrelationMode::kPearson), oracle_pearson(x, y), 1e-9);
    EXPECT_NEAR(correlation(x, y, CorrelationMode::kSpearman),
                oracle_pearson(oracle_ranks(x), oracle_ranks(y)), 1e-9);
    EXPECT_EQ(average_ranks(x), oracle_ranks(x));
    ++compared;
  }
  EXPECT_GT(compared, 300);
}

// Gold rows, predicted columns:
//   TERM: 6 TERM, 2 NE      NE: 1 TERM, 3 NE, 1 GEN      GEN: 7 GEN
// 16 of 20 on the diagonal, so micro P = R = F1 = 80%.
ConfusionMatrix hand_matrix() {
  ConfusionMatrix m{};
  m[index_of(ContentType::kTerm)][index_of(ContentType::kTerm)] = 6;
  m[index_of(ContentType::kTerm)][index_of(ContentType::kNe)] = 2;
  m[index_of(ContentType::kNe)][index_of(ContentType::kTerm)] = 1;
  m[index_of(ContentType::kNe)][index_of(ContentType::kNe)] = 3;
  m[index_of(ContentType::kNe)][index_of(ContentType::kGen)] = 1;
  m[index_of(ContentType::kGen)][index_of(ContentType::kGen)] = 7;
  return m;
}

TEST(Agreement, HandBuiltMatrix) {
  const auto r = score_confusion(hand_matrix());
  EXPECT_NEAR(r.micro.precision, 80.0, 1e-4);
  EXPECT_NEAR(r.micro.recall, 80.0, 1e-4);
  EXPECT_NEAR(r.micro.f1, 80.0, 1e-4);
  EXPECT_EQ(r.items, 20u);
  ASSERT_EQ(r.per_type.size(), 3u);
  const auto& term = r.per_type.at(ContentType::kTerm);
  EXPECT_NEAR(term.precision, 85.7143, 1e-4);  // 6/7
  EXPECT_NEAR(term.recall, 75.0, 1e-4);        // 6/8
  EXPECT_NEAR(term.f1, 80.0, 1e-4);
  const auto& gen = r.per_type.at(ContentType::kGen);
  EXPECT_NEAR(gen.precision, 87.5, 1e-4);
  EXPECT_NEAR(gen.recall, 100.0, 1e-4);
  EXPECT_NEAR(gen.f1, 93.3333, 1e-4);
  EXPECT_NEAR(r.per_type.at(ContentType::kNe).f1, 60.0, 1e-4);
}

TEST(Agreement, MatchesLabelsById) {
  std::vector<AnnotatedMismatch> gold, pred;
  const ConfusionMatrix m = hand_matrix();
  int g = 0;
  for (std::size_t i = 0; i < kContentTypeCount; ++i) {
    for (std::size_t j = 0; j < kContentTypeCount; ++j) {
      for (std::size_t c = 0; c < m[i][j]; ++c) {
        ++g;
        gold.push_back(labelled(kAllContentTypes[i], Severity::kCritical, g));
        pred.push_back(labelled(kAllContentTypes[j], g % 2 ? Severity::kCritical : Severity::kMinor, g));
      }
    }
  }
  std::reverse(pred.begin(), pred.end());
  const auto r = agreement(pred, gold);
  EXPECT_EQ(r.confusion, m);
  EXPECT_NEAR(r.micro.f1, 80.0, 1e-4);
  // Gold severity is constant, so the correlations are undefined.
  EXPECT_FALSE(r.severity_pearson.has_value());
  pred.pop_back();
  EXPECT_THROW(agreement(pred, gold), PreconditionError);
}

TEST(Difficulty, RatioAndPerplexity) {
  EXPECT_DOUBLE_EQ(difficulty_score(30.0, 40.0), 0.75);
  EXPECT_THROW(difficulty_score(0.0, 1.0), InputError);
  const std::vector<double> lp = {std::log(0.5), std::log(0.5)};
  EXPECT_NEAR(perplexity_from_log_probs(lp), 2.0, 1e-12);
  EXPECT_THROW(perplexity_from_log_probs({}), InputError);
}

TEST(Reports, MergeSumsAndRecomputes) {
  const auto a = build_report("a", 10, OpCounts{1, 0, 1},
                              std::vector<AnnotatedMismatch>{labelled(ContentType::kTerm, Severity::kCritical, 1),
                                                             labelled(ContentType::kGen, Severity::kOk, 2)},
                              SeverityWeights::standard(), TermRecall{1, 2});
  const auto b = build_report("b", 30, OpCounts{0, 1, 0},
                              std::vector<AnnotatedMismatch>{labelled(ContentType::kNum, Severity::kMinor, 1)},
                              SeverityWeights::standard(), TermRecall{0, 0});
  const std::vector<EvalReport> both = {a, b};
  const auto merged = merge_reports("all", both);
  EXPECT_EQ(merged.ref_len, 40u);
  EXPECT_EQ(merged.mismatches, 3u);
  EXPECT_DOUBLE_EQ(merged.wer, 3.0 / 40.0);
  EXPECT_NEAR(merged.swer, 1.8 / 40.0, 1e-15);
  EXPECT_EQ(merged.terms_total, 2u);
  ASSERT_TRUE(merged.term_recall.has_value());
  EXPECT_DOUBLE_EQ(*merged.term_recall, 50.0);
  EXPECT_FALSE(b.term_recall.has_value());
  EXPECT_NO_THROW(merged.check_identities());
  auto broken = merged;
  broken.swer += 0.01;
  EXPECT_THROW(broken.check_identities(), ConsistencyError);
}

}  // namespace
}  // namespace swer
