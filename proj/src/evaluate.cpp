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
#include "swer/evaluate.hpp"

#include <map>
#include <set>
#include <tuple>

#include "swer/errors.hpp"
#include "swer/resegment.hpp"

namespace swer {

EvalGranularity parse_granularity(std::string_view text) {
  if (text == "video") return EvalGranularity::kVideo;
  if (text == "segment") return EvalGranularity::kSegment;
  throw ConfigError("unknown unit '" + std::string(text) + "' (expected video or segment)");
}

std::vector<EvalUnit> build_units(const Transcript& ref, const Transcript& hyp,
                                  EvalGranularity granularity) {
  std::vector<EvalUnit> units;
  const std::vector<Token> hyp_stream = hyp.token_stream();
  if (granularity == EvalGranularity::kVideo || ref.segments.empty()) {
    EvalUnit u{ref.video_id, "", ref.token_stream(), hyp_stream, {}};
    u.script = align(u.ref, u.hyp);
    units.push_back(std::move(u));
    return units;
  }
  const Transcript cut = resegment_transcript(ref, hyp_stream);
  for (std::size_t s = 0; s < ref.segments.size(); ++s) {
    EvalUnit u{ref.video_id, ref.segments[s].id, ref.segments[s].tokens, cut.segments[s].tokens, {}};
    u.script = align(u.ref, u.hyp);
    units.push_back(std::move(u));
  }
  return units;
}

std::vector<std::pair<const Transcript*, const Transcript*>> pair_transcripts(
    std::span<const Transcript> refs, std::span<const Transcript> hyps) {
  std::map<std::string, const Transcript*> by_id;
  for (const Transcript& h : hyps) by_id[h.video_id] = &h;
  std::vector<std::pair<const Transcript*, const Transcript*>> out;
  for (const Transcript& r : refs) {
    const auto it = by_id.find(r.video_id);
    if (it == by_id.end()) throw InputError("no hypothesis for video '" + r.video_id + "'");
    out.emplace_back(&r, it->second);
    by_id.erase(it);
  }
  if (!by_id.empty()) {
    throw InputError("no reference for video '" + by_id.begin()->first + "'");
  }
  return out;
}

NormalizationProfile rule_profile(const RuleLexicons& lexicons) {
  NormalizationProfile::Options options{true, true, true, true, {}};
  const NormalizationProfile plain(options);
  for (const auto& f : lexicons.fillers) options.filler_lexicon.insert(normalize(f, plain));
  return NormalizationProfile(options);
}

std::vector<AnnotatedMismatch> annotate_units_rules(std::span<const EvalUnit> units,
                                                    const RuleLexicons& lexicons) {
  const NormalizationProfile profile = rule_profile(lexicons);
  std::vector<AnnotatedMismatch> out;
  for (const EvalUnit& u : units) {
    const auto mismatches = extract_mismatches(u.script, u.ref, u.hyp);
    for (AnnotatedMismatch& a : annotate_rules(mismatches, u.ref, u.hyp, lexicons, profile)) {
      a.video_id = u.video_id;
      a.scene_id = u.scene_id;
      out.push_back(std::move(a));
    }
  }
  return out;
}

std::vector<AnnotatedMismatch> annotate_units_llm(std::span<const EvalUnit> units,
                                                  ChatClient& client, std::string_view guideline,
                                                  const LlmAnnotatorOptions& options) {
  std::vector<AnnotationRequest> requests;
  for (const EvalUnit& u : units) {
    requests.push_back(build_annotation_request(u.video_id, u.scene_id, u.script, u.ref, u.hyp));
  }
  std::vector<AnnotatedMismatch> out;
  for (auto& part : annotate_llm_batch(requests, client, guideline, options)) {
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

std::vector<AnnotatedMismatch> validate_units(std::span<const EvalUnit> units,
                                              std::vector<AnnotatedMismatch> annotated) {
  std::map<std::pair<std::string, std::string>, std::vector<AnnotatedMismatch>> parts;
  for (AnnotatedMismatch& a : annotated) parts[{a.video_id, a.scene_id}].push_back(std::move(a));
  std::vector<AnnotatedMismatch> out;
  for (const EvalUnit& u : units) {
    auto it = parts.find({u.video_id, u.scene_id});
    std::vector<AnnotatedMismatch> part;
    if (it != parts.end()) {
      part = std::move(it->second);
      parts.erase(it);
    }
    try {
      auto valid = validate_annotations(std::move(part), u.script);
      out.insert(out.end(), valid.begin(), valid.end());
    } catch (const ValidationError& e) {
      throw ValidationError("video '" + u.video_id + "'" +
                                (u.scene_id.empty() ? "" : ", scene '" + u.scene_id + "'") +
                                ": " + e.what(),
                            e.group_ids());
    }
  }
  if (!parts.empty()) {
    const auto& [video, scene] = parts.begin()->first;
    throw ConsistencyError("annotations for unknown unit: video '" + video + "', scene '" +
                           scene + "'");
  }
  return out;
}

EvalReport evaluate_video(const Transcript& ref, const Transcript& hyp,
                          std::span<const EvalUnit> units,
                          std::span<const AnnotatedMismatch> annotated,
                          const SeverityWeights& weights,
                          std::optional<std::size_t> baseline_total) {
  std::size_t n = 0;
  OpCounts ops;
  for (const EvalUnit& u : units) {
    n += u.script.ref_len;
    ops.insertions += u.script.counts.insertions;
    ops.omissions += u.script.counts.omissions;
    ops.substitutions += u.script.counts.substitutions;
  }
  TermRecall terms;
  if (!ref.segments.empty()) {
    const Transcript cut = resegment_transcript(ref, hyp.token_stream());
    std::vector<std::vector<Token>> pieces;
    for (const Segment& s : cut.segments) pieces.push_back(s.tokens);
    terms = count_term_recall(ref.segments, pieces, NormalizationProfile::matching());
  }
  return build_report(ref.video_id, n, ops, annotated, weights, terms, baseline_total);
}

void fold_transcript(Transcript& transcript, const NormalizationProfile& profile) {
  for (Segment& s : transcript.segments) {
    for (Token& t : s.tokens) {
      t.surface = fold_case(t.surface);
      t.normalized = normalize(t.surface, profile);
    }
  }
}

}  // namespace swer
