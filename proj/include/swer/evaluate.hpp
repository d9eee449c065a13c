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

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "swer/alignment.hpp"
#include "swer/annotator.hpp"
#include "swer/metrics.hpp"
#include "swer/transcript.hpp"

namespace swer {

// Whole-video alignment, or per reference segment after re-cutting the
// hypothesis onto the reference segmentation.
enum class EvalGranularity { kVideo, kSegment };
EvalGranularity parse_granularity(std::string_view text);

struct EvalUnit {
  std::string video_id;
  std::string scene_id;  // empty for whole-video units, segment id otherwise
  std::vector<Token> ref;
  std::vector<Token> hyp;
  EditScript script;
};

std::vector<EvalUnit> build_units(const Transcript& ref, const Transcript& hyp,
                                  EvalGranularity granularity);

// Pairs transcripts by video id. Throws InputError when a video is missing
// on either side.
std::vector<std::pair<const Transcript*, const Transcript*>> pair_transcripts(
    std::span<const Transcript> refs, std::span<const Transcript> hyps);

// NormalizationProfile::matching() with the lexicon fillers.
NormalizationProfile rule_profile(const RuleLexicons& lexicons);

std::vector<AnnotatedMismatch> annotate_units_rules(std::span<const EvalUnit> units,
                                                    const RuleLexicons& lexicons);
std::vector<AnnotatedMismatch> annotate_units_llm(std::span<const EvalUnit> units,
                                                  ChatClient& client, std::string_view guideline,
                                                  const LlmAnnotatorOptions& options = {});

// Splits `annotated` by (video_id, scene_id) and validates each part against
// its unit. Annotations for unknown units are rejected.
std::vector<AnnotatedMismatch> validate_units(std::span<const EvalUnit> units,
                                              std::vector<AnnotatedMismatch> annotated);

// One report for one video from its units and their validated annotations.
// Term recall pairs reference segments with the re-cut hypothesis.
EvalReport evaluate_video(const Transcript& ref, const Transcript& hyp,
                          std::span<const EvalUnit> units,
                          std::span<const AnnotatedMismatch> annotated,
                          const SeverityWeights& weights,
                          std::optional<std::size_t> baseline_total = std::nullopt);

// Lowercases every token surface (Unicode case folding) and re-normalizes.
void fold_transcript(Transcript& transcript, const NormalizationProfile& profile);

}  // namespace swer
