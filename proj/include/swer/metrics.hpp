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

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "swer/alignment.hpp"
#include "swer/transcript.hpp"

namespace swer {

enum class ContentType { kTerm, kNum, kNe, kGram, kDisf, kGen };
inline constexpr std::size_t kContentTypeCount = 6;
inline constexpr std::array<ContentType, kContentTypeCount> kAllContentTypes = {
    ContentType::kTerm, ContentType::kNum,  ContentType::kNe,
    ContentType::kGram, ContentType::kDisf, ContentType::kGen};

// Integer encoding OK=0, MINOR=1, CRITICAL=2 is used for correlations.
enum class Severity { kOk = 0, kMinor = 1, kCritical = 2 };
inline constexpr std::size_t kSeverityCount = 3;
inline constexpr std::array<Severity, kSeverityCount> kAllSeverities = {
    Severity::kCritical, Severity::kMinor, Severity::kOk};

// "TERM", "NUM", "NE", "GRAM", "DISF", "GEN".
std::string_view to_string(ContentType type) noexcept;
// "OK", "MIN", "CRI".
std::string_view to_string(Severity severity) noexcept;
std::string_view long_name(Severity severity) noexcept;
// Exact, case-sensitive; accepts both "MIN" and "MINOR", "CRI" and
// "CRITICAL". Returns nullopt for anything else.
std::optional<ContentType> parse_content_type(std::string_view text) noexcept;
std::optional<Severity> parse_severity(std::string_view text) noexcept;
inline std::size_t index_of(ContentType type) noexcept { return static_cast<std::size_t>(type); }
inline int severity_value(Severity severity) noexcept { return static_cast<int>(severity); }

// Severity weight sums are kept in integer nano-units so that identities
// such as swer * N == sum of per-type weighted scores hold exactly.
class WeightedScore {
 public:
  static constexpr std::int64_t kUnitsPerOne = 1'000'000'000;

  constexpr WeightedScore() = default;
  static constexpr WeightedScore from_units(std::int64_t units) {
    WeightedScore s;
    s.units_ = units;
    return s;
  }
  static WeightedScore from_value(double value);

  constexpr std::int64_t units() const noexcept { return units_; }
  double value() const noexcept { return static_cast<double>(units_) / kUnitsPerOne; }
  // Decimal rendering with trailing zeros dropped, e.g. "271.4".
  std::string to_string() const;

  WeightedScore& operator+=(WeightedScore other) noexcept {
    units_ += other.units_;
    return *this;
  }
  friend WeightedScore operator+(WeightedScore a, WeightedScore b) noexcept { return a += b; }
  friend auto operator<=>(const WeightedScore&, const WeightedScore&) = default;

 private:
  std::int64_t units_ = 0;
};

// Weights in [0, 1] with ok <= minor <= critical. Values are quantized to
// nano-units on construction.
class SeverityWeights {
 public:
  SeverityWeights(double critical, double minor, double ok, std::string name = "custom");

  // (1.0, 0.6, 0.2)
  static SeverityWeights standard();
  // (1.0, 0.5, 0.1)
  static SeverityWeights alternate();
  // (1, 1, 1): SWER collapses to WER.
  static SeverityWeights uniform();
  // A preset name ("default", "alternate", "uniform") or "crit,minor,ok".
  static SeverityWeights parse(std::string_view text);

  WeightedScore weight(Severity severity) const noexcept;
  double value(Severity severity) const noexcept { return weight(severity).value(); }
  const std::string& name() const noexcept { return name_; }

 private:
  std::array<WeightedScore, kSeverityCount> by_severity_{};
  std::string name_;
};

enum class AnnotatorSource { kRules, kLlm, kHuman };
std::string_view to_string(AnnotatorSource source) noexcept;
std::optional<AnnotatorSource> parse_annotator_source(std::string_view text) noexcept;

struct AnnotatedMismatch {
  Mismatch mismatch;
  ContentType content_type = ContentType::kGen;
  Severity severity = Severity::kMinor;
  AnnotatorSource annotator = AnnotatorSource::kRules;
  std::string video_id;
  std::string scene_id;
  // Insertions have no reference span; they are typed by what was inserted.
  bool typed_by_hypothesis = false;

  friend bool operator==(const AnnotatedMismatch&, const AnnotatedMismatch&) = default;
};

struct ContentScore {
  WeightedScore weighted;
  std::size_t unweighted = 0;

  friend bool operator==(const ContentScore&, const ContentScore&) = default;
};

using ContentScores = std::array<ContentScore, kContentTypeCount>;
// Indexed by severity_value(): [OK, MINOR, CRITICAL].
using SeverityCounts = std::array<std::size_t, kSeverityCount>;
using SeverityPercentages = std::array<double, kSeverityCount>;

struct ScoreAggregate {
  ContentScores content_scores{};
  SeverityCounts severity_counts{};
  SeverityPercentages severity_percentages{};
  WeightedScore weighted_total;
};

// (I + O + S) / N. Throws UndefinedMetricError if N = 0.
double wer(const EditScript& script);
double wer(std::size_t mismatches, std::size_t ref_len);

// Sum of severity weights over N. Throws UndefinedMetricError if N = 0.
double swer(std::span<const AnnotatedMismatch> annotated, std::size_t ref_len,
            const SeverityWeights& weights);
double swer_from_total(WeightedScore total, std::size_t ref_len);

// Percentages use baseline_total as denominator when given, the list's own
// size otherwise. Throws PreconditionError for a zero baseline with a
// non-empty list.
ScoreAggregate aggregate_scores(std::span<const AnnotatedMismatch> annotated,
                                const SeverityWeights& weights,
                                std::optional<std::size_t> baseline_total = std::nullopt);
SeverityPercentages severity_percentages(const SeverityCounts& counts,
                                         std::optional<std::size_t> baseline_total);

struct TermRecall {
  std::size_t matched = 0;
  std::size_t total = 0;
  // x100. Throws UndefinedMetricError when total is 0.
  double percent() const;
};

// A reference term counts as recalled when its normalized token sequence
// occurs contiguously in the paired hypothesis segment. Tokens whose
// normalized form is empty (pure punctuation) are ignored on both sides.
// Throws PreconditionError if the segment counts differ.
TermRecall count_term_recall(std::span<const Segment> ref_segments,
                             std::span<const std::vector<Token>> hyp_segments,
                             const NormalizationProfile& profile);
double term_recall(std::span<const Segment> ref_segments,
                   std::span<const std::vector<Token>> hyp_segments,
                   const NormalizationProfile& profile);

enum class CorrelationMode { kPearson, kSpearman };

// Product-moment or rank correlation (average ranks for ties).
// Throws PreconditionError on length mismatch or fewer than two points and
// UndefinedMetricError when either input is constant.
double correlation(std::span<const double> x, std::span<const double> y, CorrelationMode mode);
std::vector<double> average_ranks(std::span<const double> values);

struct ClassScores {
  // Percentages.
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;    // gold count
  std::size_t predicted = 0;  // predicted count
};

// confusion[gold][pred]
using ConfusionMatrix = std::array<std::array<std::size_t, kContentTypeCount>, kContentTypeCount>;

struct AgreementResult {
  ConfusionMatrix confusion{};
  // Only types that occur in either label set.
  std::map<ContentType, ClassScores> per_type;
  ClassScores micro;
  std::optional<double> severity_pearson;
  std::optional<double> severity_spearman;
  std::size_t items = 0;
};

// Per-type and micro-averaged scores from a confusion matrix.
AgreementResult score_confusion(const ConfusionMatrix& confusion);

// Compares two annotations of the same mismatch set, matched by
// (video_id, scene_id, group_id, op_index). Throws PreconditionError
// listing the unmatched ids if the sets differ.
AgreementResult agreement(std::span<const AnnotatedMismatch> pred,
                          std::span<const AnnotatedMismatch> gold);

// CPPL_baseline / CPPL_speech; smaller is harder. Throws InputError for
// non-positive inputs.
double difficulty_score(double cppl_baseline, double cppl_speech);
// exp(-mean log-probability). Throws InputError for an empty sequence.
double perplexity_from_log_probs(std::span<const double> log_probs);

// Per-unit evaluation report.
struct EvalReport {
  std::string label;
  std::size_t ref_len = 0;     // N
  std::size_t mismatches = 0;  // K
  OpCounts ops;
  double wer = 0.0;
  double swer = 0.0;
  WeightedScore weighted_total;
  std::optional<double> term_recall;
  std::size_t terms_matched = 0;
  std::size_t terms_total = 0;
  ContentScores content_scores{};
  SeverityCounts severity_counts{};
  SeverityPercentages severity_percentages{};
  std::optional<std::size_t> baseline_total;
  std::string weights_name;

  // Throws ConsistencyError naming the first identity that fails:
  //   wer = K/N, swer = sum(weights)/N, sum(weighted) = weighted_total,
  //   K = sum(unweighted) = sum(severity counts) = I+O+S.
  void check_identities() const;

  friend bool operator==(const EvalReport&, const EvalReport&) = default;
};

EvalReport build_report(std::string label, std::size_t ref_len, const OpCounts& ops,
                        std::span<const AnnotatedMismatch> annotated,
                        const SeverityWeights& weights, const TermRecall& terms,
                        std::optional<std::size_t> baseline_total = std::nullopt);

// Sums N, K and scores over `reports`; ratios are recomputed from the sums.
EvalReport merge_reports(std::string label, std::span<const EvalReport> reports,
                         std::optional<std::size_t> baseline_total = std::nullopt);

}  // namespace swer
