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

#include "swer/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <set>
#include <tuple>

#include "swer/errors.hpp"

namespace swer {

std::string_view to_string(ContentType type) noexcept {
  switch (type) {
    case ContentType::kTerm: return "TERM";
    case ContentType::kNum: return "NUM";
    case ContentType::kNe: return "NE";
    case ContentType::kGram: return "GRAM";
    case ContentType::kDisf: return "DISF";
    case ContentType::kGen: return "GEN";
  }
  return "?";
}

std::string_view to_string(Severity severity) noexcept {
  switch (severity) {
    case Severity::kOk: return "OK";
    case Severity::kMinor: return "MIN";
    case Severity::kCritical: return "CRI";
  }
  return "?";
}

std::string_view long_name(Severity severity) noexcept {
  switch (severity) {
    case Severity::kOk: return "OK";
    case Severity::kMinor: return "MINOR";
    case Severity::kCritical: return "CRITICAL";
  }
  return "?";
}

std::optional<ContentType> parse_content_type(std::string_view text) noexcept {
  for (ContentType type : kAllContentTypes) {
    if (text == to_string(type)) return type;
  }
  return std::nullopt;
}

std::optional<Severity> parse_severity(std::string_view text) noexcept {
  for (Severity severity : kAllSeverities) {
    if (text == to_string(severity) || text == long_name(severity)) return severity;
  }
  return std::nullopt;
}

std::string_view to_string(AnnotatorSource source) noexcept {
  switch (source) {
    case AnnotatorSource::kRules: return "rules";
    case AnnotatorSource::kLlm: return "llm";
    case AnnotatorSource::kHuman: return "human";
  }
  return "?";
}

std::optional<AnnotatorSource> parse_annotator_source(std::string_view text) noexcept {
  for (AnnotatorSource s : {AnnotatorSource::kRules, AnnotatorSource::kLlm, AnnotatorSource::kHuman}) {
    if (text == to_string(s)) return s;
  }
  return std::nullopt;
}

// ---- WeightedScore / SeverityWeights ---------------------------------------

WeightedScore WeightedScore::from_value(double value) {
  if (!std::isfinite(value)) throw InputError("weighted score must be finite");
  return from_units(std::llround(value * static_cast<double>(kUnitsPerOne)));
}

std::string WeightedScore::to_string() const {
  const bool negative = units_ < 0;
  const std::uint64_t magnitude =
      negative ? static_cast<std::uint64_t>(-(units_ + 1)) + 1 : static_cast<std::uint64_t>(units_);
  std::string out = std::to_string(magnitude / kUnitsPerOne);
  std::string fraction = std::to_string(magnitude % kUnitsPerOne);
  fraction.insert(0, 9 - fraction.size(), '0');
  while (!fraction.empty() && fraction.back() == '0') fraction.pop_back();
  if (!fraction.empty()) out += "." + fraction;
  return negative ? "-" + out : out;
}

SeverityWeights::SeverityWeights(double critical, double minor, double ok, std::string name)
    : name_(std::move(name)) {
  for (double w : {critical, minor, ok}) {
    if (!(w >= 0.0 && w <= 1.0)) {
      throw InputError("severity weights must lie in [0, 1], got " + std::to_string(w));
    }
  }
  if (!(ok <= minor && minor <= critical)) {
    throw InputError("severity weights must satisfy ok <= minor <= critical");
  }
  by_severity_[severity_value(Severity::kCritical)] = WeightedScore::from_value(critical);
  by_severity_[severity_value(Severity::kMinor)] = WeightedScore::from_value(minor);
  by_severity_[severity_value(Severity::kOk)] = WeightedScore::from_value(ok);
}

SeverityWeights SeverityWeights::standard() { return {1.0, 0.6, 0.2, "default"}; }
SeverityWeights SeverityWeights::alternate() { return {1.0, 0.5, 0.1, "alternate"}; }
SeverityWeights SeverityWeights::uniform() { return {1.0, 1.0, 1.0, "uniform"}; }

SeverityWeights SeverityWeights::parse(std::string_view text) {
  if (text == "default") return standard();
  if (text == "alternate") return alternate();
  if (text == "uniform") return uniform();
  std::array<double, 3> values{};
  std::size_t field = 0;
  std::size_t pos = 0;
  while (field < 3) {
    const std::size_t comma = text.find(',', pos);
    const std::string part(text.substr(pos, comma == std::string_view::npos ? std::string_view::npos
                                                                            : comma - pos));
    std::size_t used = 0;
    try {
      values[field] = std::stod(part, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != part.size()) {
      throw InputError("weights must be a preset name or 'crit,minor,ok', got '" +
                       std::string(text) + "'");
    }
    ++field;
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  if (field != 3 || text.find(',', pos) != std::string_view::npos) {
    throw InputError("weights must have exactly three comma-separated values");
  }
  return {values[0], values[1], values[2], std::string(text)};
}

WeightedScore SeverityWeights::weight(Severity severity) const noexcept {
  return by_severity_[severity_value(severity)];
}

// ---- WER / SWER -------------------------------------------------------------

double wer(std::size_t mismatches, std::size_t ref_len) {
  if (ref_len == 0) throw UndefinedMetricError("WER is undefined for an empty reference (N = 0)");
  return static_cast<double>(mismatches) / static_cast<double>(ref_len);
}

double wer(const EditScript& script) { return wer(script.counts.total(), script.ref_len); }

double swer_from_total(WeightedScore total, std::size_t ref_len) {
  if (ref_len == 0) throw UndefinedMetricError("SWER is undefined for an empty reference (N = 0)");
  return static_cast<double>(total.units()) /
         (static_cast<double>(ref_len) * static_cast<double>(WeightedScore::kUnitsPerOne));
}

double swer(std::span<const AnnotatedMismatch> annotated, std::size_t ref_len,
            const SeverityWeights& weights) {
  WeightedScore total;
  for (const auto& a : annotated) total += weights.weight(a.severity);
  return swer_from_total(total, ref_len);
}

SeverityPercentages severity_percentages(const SeverityCounts& counts,
                                         std::optional<std::size_t> baseline_total) {
  const std::size_t own = std::accumulate(counts.begin(), counts.end(), std::size_t{0});
  const std::size_t denominator = baseline_total.value_or(own);
  SeverityPercentages out{};
  if (denominator == 0) {
    if (own > 0) throw PreconditionError("severity percentages: baseline total is 0");
    return out;
  }
  for (std::size_t s = 0; s < kSeverityCount; ++s) {
    out[s] = 100.0 * static_cast<double>(counts[s]) / static_cast<double>(denominator);
  }
  return out;
}

ScoreAggregate aggregate_scores(std::span<const AnnotatedMismatch> annotated,
                                const SeverityWeights& weights,
                                std::optional<std::size_t> baseline_total) {
  ScoreAggregate out;
  for (const auto& a : annotated) {
    const WeightedScore w = weights.weight(a.severity);
    ContentScore& score = out.content_scores[index_of(a.content_type)];
    score.weighted += w;
    ++score.unweighted;
    ++out.severity_counts[severity_value(a.severity)];
    out.weighted_total += w;
  }
  out.severity_percentages = severity_percentages(out.severity_counts, baseline_total);
  return out;
}

// ---- Term recall ------------------------------------------------------------

double TermRecall::percent() const {
  if (total == 0) throw UndefinedMetricError("term recall is undefined without annotated terms");
  return 100.0 * static_cast<double>(matched) / static_cast<double>(total);
}

namespace {

std::vector<std::string> normalized_words(std::span<const Token> tokens,
                                          const NormalizationProfile& profile) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& token : tokens) {
    std::string n = normalize(token.surface, profile);
    if (!n.empty()) out.push_back(std::move(n));
  }
  return out;
}

}  // namespace

TermRecall count_term_recall(std::span<const Segment> ref_segments,
                             std::span<const std::vector<Token>> hyp_segments,
                             const NormalizationProfile& profile) {
  if (ref_segments.size() != hyp_segments.size()) {
    throw PreconditionError("term recall: " + std::to_string(ref_segments.size()) +
                            " reference segments but " + std::to_string(hyp_segments.size()) +
                            " hypothesis segments; resegment first");
  }
  TermRecall out;
  for (std::size_t s = 0; s < ref_segments.size(); ++s) {
    const Segment& ref = ref_segments[s];
    if (ref.terms.empty()) continue;
    const std::vector<std::string> hyp = normalized_words(hyp_segments[s], profile);
    for (const TokenRange& term : ref.terms) {
      if (term.end > ref.tokens.size() || term.begin >= term.end) {
        throw ConsistencyError("term range outside segment '" + ref.id + "'");
      }
      const std::vector<std::string> needle = normalized_words(
          std::span<const Token>(ref.tokens).subspan(term.begin, term.size()), profile);
      ++out.total;
      if (needle.empty()) continue;
      if (std::search(hyp.begin(), hyp.end(), needle.begin(), needle.end()) != hyp.end()) {
        ++out.matched;
      }
    }
  }
  return out;
}

double term_recall(std::span<const Segment> ref_segments,
                   std::span<const std::vector<Token>> hyp_segments,
                   const NormalizationProfile& profile) {
  return count_term_recall(ref_segments, hyp_segments, profile).percent();
}

// ---- Correlation ------------------------------------------------------------

std::vector<double> average_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    // 1-based ranks i+1 .. j+1 share their mean.
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

namespace {

double pearson(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  const double mean_x = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double mean_y = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mean_x;
    const double dy = y[i] - mean_y;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw UndefinedMetricError("correlation is undefined for a constant input");
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

}  // namespace

double correlation(std::span<const double> x, std::span<const double> y, CorrelationMode mode) {
  if (x.size() != y.size()) {
    throw PreconditionError("correlation: inputs have lengths " + std::to_string(x.size()) +
                            " and " + std::to_string(y.size()));
  }
  if (x.size() < 2) throw PreconditionError("correlation needs at least two points");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) {
      throw InputError("correlation: non-finite value at index " + std::to_string(i));
    }
  }
  if (mode == CorrelationMode::kPearson) return pearson(x, y);
  const std::vector<double> rx = average_ranks(x);
  const std::vector<double> ry = average_ranks(y);
  return pearson(rx, ry);
}

// ---- Agreement --------------------------------------------------------------

namespace {

double ratio_percent(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : 100.0 * static_cast<double>(num) / static_cast<double>(den);
}

double harmonic(double p, double r) { return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r); }

using ItemKey = std::tuple<std::string, std::string, int, std::size_t>;

ItemKey key_of(const AnnotatedMismatch& a) {
  return {a.video_id, a.scene_id, a.mismatch.group_id, a.mismatch.op_index};
}

std::string describe(const ItemKey& key) {
  return std::get<0>(key) + "/" + std::get<1>(key) + "/g" + std::to_string(std::get<2>(key)) +
         "/op" + std::to_string(std::get<3>(key));
}

}  // namespace

AgreementResult score_confusion(const ConfusionMatrix& confusion) {
  AgreementResult out;
  out.confusion = confusion;
  std::size_t tp_sum = 0, pred_sum = 0, gold_sum = 0;
  for (ContentType type : kAllContentTypes) {
    const std::size_t c = index_of(type);
    std::size_t gold = 0, predicted = 0;
    for (std::size_t k = 0; k < kContentTypeCount; ++k) {
      gold += confusion[c][k];
      predicted += confusion[k][c];
    }
    const std::size_t tp = confusion[c][c];
    tp_sum += tp;
    pred_sum += predicted;
    gold_sum += gold;
    if (gold == 0 && predicted == 0) continue;
    ClassScores scores;
    scores.precision = ratio_percent(tp, predicted);
    scores.recall = ratio_percent(tp, gold);
    scores.f1 = harmonic(scores.precision, scores.recall);
    scores.support = gold;
    scores.predicted = predicted;
    out.per_type.emplace(type, scores);
  }
  out.items = gold_sum;
  out.micro.precision = ratio_percent(tp_sum, pred_sum);
  out.micro.recall = ratio_percent(tp_sum, gold_sum);
  out.micro.f1 = harmonic(out.micro.precision, out.micro.recall);
  out.micro.support = gold_sum;
  out.micro.predicted = pred_sum;
  return out;
}

AgreementResult agreement(std::span<const AnnotatedMismatch> pred,
                          std::span<const AnnotatedMismatch> gold) {
  std::map<ItemKey, const AnnotatedMismatch*> gold_by_key;
  for (const auto& g : gold) {
    if (!gold_by_key.emplace(key_of(g), &g).second) {
      throw PreconditionError("agreement: duplicate gold label for " + describe(key_of(g)));
    }
  }
  std::vector<std::string> unmatched;
  std::set<ItemKey> seen;
  ConfusionMatrix confusion{};
  std::vector<double> pred_severity, gold_severity;
  for (const auto& p : pred) {
    const ItemKey key = key_of(p);
    if (!seen.insert(key).second) {
      throw PreconditionError("agreement: duplicate predicted label for " + describe(key));
    }
    const auto it = gold_by_key.find(key);
    if (it == gold_by_key.end()) {
      unmatched.push_back("pred:" + describe(key));
      continue;
    }
    ++confusion[index_of(it->second->content_type)][index_of(p.content_type)];
    pred_severity.push_back(severity_value(p.severity));
    gold_severity.push_back(severity_value(it->second->severity));
  }
  for (const auto& [key, g] : gold_by_key) {
    if (!seen.count(key)) unmatched.push_back("gold:" + describe(key));
  }
  if (!unmatched.empty()) {
    std::string message = "agreement: label sets disagree on " +
                          std::to_string(unmatched.size()) + " items:";
    for (const auto& u : unmatched) message += " " + u;
    throw PreconditionError(message);
  }

  AgreementResult out = score_confusion(confusion);
  auto safe = [&](CorrelationMode mode) -> std::optional<double> {
    try {
      return correlation(pred_severity, gold_severity, mode);
    } catch (const PreconditionError&) {
      return std::nullopt;
    }
  };
  out.severity_pearson = safe(CorrelationMode::kPearson);
  out.severity_spearman = safe(CorrelationMode::kSpearman);
  return out;
}

// ---- Difficulty -------------------------------------------------------------

double difficulty_score(double cppl_baseline, double cppl_speech) {
  if (!(cppl_baseline > 0.0) || !(cppl_speech > 0.0) || !std::isfinite(cppl_baseline) ||
      !std::isfinite(cppl_speech)) {
    throw InputError("difficulty score needs two positive finite perplexities");
  }
  return cppl_baseline / cppl_speech;
}

double perplexity_from_log_probs(std::span<const double> log_probs) {
  if (log_probs.empty()) throw InputError("perplexity needs at least one log-probability");
  double sum = 0.0;
  for (double lp : log_probs) {
    if (!std::isfinite(lp)) throw InputError("log-probabilities must be finite");
    sum += lp;
  }
  return std::exp(-sum / static_cast<double>(log_probs.size()));
}

// ---- Reports ----------------------------------------------------------------

void EvalReport::check_identities() const {
  auto fail = [&](const std::string& identity) {
    throw ConsistencyError("report '" + label + "' violates " + identity);
  };
  if (ops.total() != mismatches) fail("K = I + O + S");
  std::size_t unweighted = 0;
  WeightedScore weighted;
  for (const auto& score : content_scores) {
    unweighted += score.unweighted;
    weighted += score.weighted;
  }
  if (unweighted != mismatches) fail("K = sum of content-wise unweighted scores");
  if (std::accumulate(severity_counts.begin(), severity_counts.end(), std::size_t{0}) != mismatches) {
    fail("K = sum of severity counts");
  }
  if (weighted != weighted_total) fail("swer * N = sum of content-wise weighted scores");
  if (ref_len == 0) {
    if (mismatches != 0) fail("N > 0 when K > 0");
    return;
  }
  if (wer != swer::wer(mismatches, ref_len)) fail("wer = K / N");
  if (swer != swer_from_total(weighted_total, ref_len)) fail("swer = sum of weights / N");
  if (terms_matched > terms_total) fail("terms matched <= terms total");
  if (terms_total > 0) {
    if (!term_recall || *term_recall != TermRecall{terms_matched, terms_total}.percent()) {
      fail("term recall = matched / total");
    }
  } else if (term_recall) {
    fail("term recall absent without terms");
  }
  if (severity_percentages != swer::severity_percentages(severity_counts, baseline_total)) {
    fail("severity percentages = counts / denominator");
  }
}

EvalReport build_report(std::string label, std::size_t ref_len, const OpCounts& ops,
                        std::span<const AnnotatedMismatch> annotated,
                        const SeverityWeights& weights, const TermRecall& terms,
                        std::optional<std::size_t> baseline_total) {
  if (annotated.size() != ops.total()) {
    throw PreconditionError("report '" + label + "': " + std::to_string(ops.total()) +
                            " mismatches but " + std::to_string(annotated.size()) +
                            " annotations");
  }
  const ScoreAggregate scores = aggregate_scores(annotated, weights, baseline_total);
  EvalReport report;
  report.label = std::move(label);
  report.ref_len = ref_len;
  report.mismatches = ops.total();
  report.ops = ops;
  report.weighted_total = scores.weighted_total;
  if (ref_len > 0) {
    report.wer = wer(report.mismatches, ref_len);
    report.swer = swer_from_total(scores.weighted_total, ref_len);
  }
  report.terms_matched = terms.matched;
  report.terms_total = terms.total;
  if (terms.total > 0) report.term_recall = terms.percent();
  report.content_scores = scores.content_scores;
  report.severity_counts = scores.severity_counts;
  report.severity_percentages = scores.severity_percentages;
  report.baseline_total = baseline_total;
  report.weights_name = weights.name();
  report.check_identities();
  return report;
}

EvalReport merge_reports(std::string label, std::span<const EvalReport> reports,
                         std::optional<std::size_t> baseline_total) {
  EvalReport out;
  out.label = std::move(label);
  out.baseline_total = baseline_total;
  for (const auto& r : reports) {
    if (out.weights_name.empty()) {
      out.weights_name = r.weights_name;
    } else if (r.weights_name != out.weights_name) {
      throw ConsistencyError("cannot merge reports computed with different weights ('" +
                             out.weights_name + "' vs '" + r.weights_name + "')");
    }
    out.ref_len += r.ref_len;
    out.mismatches += r.mismatches;
    out.ops.insertions += r.ops.insertions;
    out.ops.omissions += r.ops.omissions;
    out.ops.substitutions += r.ops.substitutions;
    out.weighted_total += r.weighted_total;
    out.terms_matched += r.terms_matched;
    out.terms_total += r.terms_total;
    for (std::size_t c = 0; c < kContentTypeCount; ++c) {
      out.content_scores[c].weighted += r.content_scores[c].weighted;
      out.content_scores[c].unweighted += r.content_scores[c].unweighted;
    }
    for (std::size_t s = 0; s < kSeverityCount; ++s) out.severity_counts[s] += r.severity_counts[s];
  }
  if (out.ref_len > 0) {
    out.wer = wer(out.mismatches, out.ref_len);
    out.swer = swer_from_total(out.weighted_total, out.ref_len);
  }
  if (out.terms_total > 0) out.term_recall = TermRecall{out.terms_matched, out.terms_total}.percent();
  out.severity_percentages = severity_percentages(out.severity_counts, baseline_total);
  out.check_identities();
  return out;
}

}  // namespace swer
