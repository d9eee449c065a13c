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
#include <filesystem>
#include <iosfwd>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "swer/alignment.hpp"
#include "swer/llm_client.hpp"
#include "swer/metrics.hpp"
#include "swer/transcript.hpp"

namespace swer {

// Word lists for the rule-based annotator. Entries may be multi-word
// phrases; lookups compare normalized forms.
struct RuleLexicons {
  std::set<std::string> fillers;
  std::set<std::string> grammatical;
  std::set<std::string> terminology;
  std::set<std::string> gazetteer;

  // Built-in English fillers and closed-class words, empty term lists.
  static RuleLexicons defaults();
  // JSON object with optional arrays "fillers", "grammatical",
  // "terminology", "gazetteer". Missing filler/grammatical lists fall back
  // to the defaults.
  static RuleLexicons load(const std::filesystem::path& path);

  // One message per word that appears in more than one list.
  std::vector<std::string> overlap_warnings(const NormalizationProfile& profile) const;
};

// Rule-based content type and severity per mismatch. `ref` and `hyp` are
// the token lists the mismatches were extracted from (needed for sentence
// position, repetitions and multi-word lexicon entries).
std::vector<AnnotatedMismatch> annotate_rules(std::span<const Mismatch> mismatches,
                                              std::span<const Token> ref,
                                              std::span<const Token> hyp,
                                              const RuleLexicons& lexicons,
                                              const NormalizationProfile& profile);

struct MismatchGroup {
  int group_id = 0;
  std::string kinds;  // op letters, e.g. "S" or "O O"
  std::string ref_text;
  std::string hyp_text;
};

struct AnnotationRequest {
  std::string video_id;
  std::string scene_id;
  std::string highlighted_ref;
  std::string highlighted_hyp;
  std::vector<MismatchGroup> groups;
  std::vector<Mismatch> mismatches;
};

AnnotationRequest build_annotation_request(std::string video_id, std::string scene_id,
                                           const EditScript& script, std::span<const Token> ref,
                                           std::span<const Token> hyp);

// Default guideline (system prompt) with the label contract.
const std::string& default_guideline();
// User turn for one request.
std::string format_annotation_request(const AnnotationRequest& request);

struct GroupLabel {
  ContentType content_type;
  Severity severity;
};

// Strict reader for "<group_id>: <TYPE>/<SEV>" lines. Blank lines and code
// fences are skipped; anything else, unknown labels, duplicates, and
// missing or extra group ids raise AnnotationError carrying the raw reply.
std::map<int, GroupLabel> parse_label_reply(std::string_view reply,
                                            const AnnotationRequest& request);

struct LlmAnnotatorOptions {
  // Total model calls allowed per request when replies fail to parse. Each
  // retry adds a correction note, so it is a different (uncached) request.
  int parse_attempts = 2;
  std::size_t max_parallel = 4;
};

// One label per group, fanned out to every op of the group. An empty
// request returns immediately without network traffic.
std::vector<AnnotatedMismatch> annotate_llm(const AnnotationRequest& request, ChatClient& client,
                                            std::string_view guideline,
                                            const LlmAnnotatorOptions& options = {});

// Annotates many requests with bounded parallelism; results keep request
// order regardless of completion order.
std::vector<std::vector<AnnotatedMismatch>> annotate_llm_batch(
    std::span<const AnnotationRequest> requests, ChatClient& client, std::string_view guideline,
    const LlmAnnotatorOptions& options = {});

// Checks coverage (every non-match op annotated exactly once, nothing else),
// group ids against the script, enum ranges, and, for LLM labels, that all
// ops of a group share one label. Throws ValidationError listing every
// offending group id; returns the list ordered by op index otherwise.
std::vector<AnnotatedMismatch> validate_annotations(std::vector<AnnotatedMismatch> annotated,
                                                    const EditScript& script);

// ---- Line-delimited annotation records ------------------------------------
//   {"video_id", "scene_id", "group_id", "op_index", "op_kind", "ref_text",
//    "hyp_text", "content_type", "severity", "annotator"}
// plus "typed_by_hypothesis": true on insertions typed by their hypothesis
// side.

void write_annotations(std::ostream& out, std::span<const AnnotatedMismatch> annotated);
std::vector<AnnotatedMismatch> read_annotations(std::istream& in);
std::vector<AnnotatedMismatch> read_annotations(const std::filesystem::path& path);

}  // namespace swer
