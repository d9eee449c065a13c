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
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "swer/kts.hpp"
#include "swer/llm_client.hpp"
#include "swer/transcript.hpp"

namespace swer {

// A system message plus a user message with {{slot}} placeholders.
struct PromptTemplate {
  std::string name;
  std::string system;
  std::string user;

  // Text before a line holding only "----" is the system part.
  static PromptTemplate parse(std::string name, std::string_view text);
  // Fills every slot. Throws ConfigError if a slot in the template is not
  // provided or a provided value is not used.
  std::string render(const std::map<std::string, std::string>& slots) const;
  std::vector<std::string> slots() const;
};

struct PromptSet {
  static constexpr std::size_t kQuestionCount = 8;

  std::string question_system;
  std::vector<std::string> slide_questions;
  PromptTemplate scene_summary;  // {{answers}}
  PromptTemplate condense;       // {{summaries}}
  PromptTemplate post_edit;      // {{scene_context}}, {{presentation_summary}}, {{transcript}}
  PromptTemplate e2e;            // {{transcript}}; the slide image is attached

  static PromptSet defaults();
  // Overrides from files named like the bundled assets (slide_questions.txt,
  // post_edit.txt, ...); missing files keep the defaults.
  static PromptSet load(const std::filesystem::path& dir);
  // Throws ConfigError unless there are exactly eight questions and every
  // template carries exactly its expected slots.
  void validate() const;
  // SHA-256 of every prompt text, keyed by asset name.
  std::map<std::string, std::string> digests() const;
};

struct SceneRecord {
  std::size_t index = 0;  // 1-based
  std::string scene_id;   // "scene_0001"
  TimeSpan span;
  double sample_time_s = 0.0;
  std::filesystem::path image_ref;  // empty when no frames are used
  std::vector<std::size_t> segment_indices;
  std::vector<Token> transcript;
  std::string scene_context;
  std::string post_edited;
};

// Frame file for scene k: frames_dir/scene_%04d.{png,jpg,jpeg,webp}.
std::optional<std::filesystem::path> find_frame(const std::filesystem::path& frames_dir,
                                                std::size_t index);

// One record per span. An empty frames_dir skips image lookup; otherwise a
// missing frame is an InputError naming the span. Warnings from slicing
// are appended to `warnings` when given.
std::vector<SceneRecord> assemble_scenes(const ScenePlan& plan, const Transcript& transcript,
                                         const std::filesystem::path& frames_dir,
                                         std::vector<std::string>* warnings = nullptr);

struct SlideAnalysis {
  std::string context;
  std::size_t answered = 0;
  std::vector<std::string> warnings;
  std::size_t vision_calls = 0;
  std::size_t text_calls = 0;
};

// Asks the eight questions about the slide image, then summarizes the
// answers with one text call. Failed questions are recorded as warnings;
// fewer than four answers, or a failed summary, raise SceneAnalysisError.
SlideAnalysis analyze_slide(const SceneRecord& scene, ChatClient& vision, ChatClient& text,
                            const PromptSet& prompts, std::size_t max_parallel = 8);

struct PresentationContext {
  std::string summary;
  bool hierarchical = false;
  std::size_t text_calls = 0;
};

// Condenses the non-empty scene contexts into one summary. When the joined
// input exceeds `budget_chars` it is condensed in chunks first, then the
// chunk summaries are condensed again. Throws PreconditionError when every
// context is empty.
PresentationContext condense(std::span<const std::string> scene_contexts, ChatClient& text,
                             const PromptSet& prompts, std::size_t budget_chars = 24000);

struct EditOutcome {
  std::string text;
  bool fell_back = false;
  bool called = false;
  std::optional<std::string> warning;
};

inline constexpr double kMinLengthRatio = 0.5;
inline constexpr double kMaxLengthRatio = 2.0;

// Edited scene text; falls back to the input on a remote error or when the
// output token count leaves [0.5, 2.0] x the input. An empty scene is
// returned as is without a call.
EditOutcome post_edit(const SceneRecord& scene, const PresentationContext& presentation,
                      ChatClient& text, const PromptSet& prompts);
EditOutcome post_edit_e2e(const SceneRecord& scene, ChatClient& vision, const PromptSet& prompts);

enum class PipelineMode { kAsrOnly, kTextPe, kVisionPe, kE2eVisionPe };
std::string_view to_string(PipelineMode mode) noexcept;
PipelineMode parse_pipeline_mode(std::string_view text);

struct PipelineInputs {
  Transcript transcript;
  // Either a plan or features to plan from; neither means fixed windows.
  std::optional<ScenePlan> plan;
  std::optional<FeatureMatrix> features;
  std::filesystem::path frames_dir;
};

struct PipelineConfig {
  PipelineMode mode = PipelineMode::kAsrOnly;
  KtsOptions kts;
  double window_s = 60.0;
  std::size_t max_parallel = 4;
  std::size_t context_budget_chars = 24000;
  NormalizationProfile profile = NormalizationProfile::exact();
};

struct CallCounts {
  std::size_t vision = 0;
  std::size_t text = 0;

  friend bool operator==(const CallCounts&, const CallCounts&) = default;
};

struct RunManifest {
  std::string video_id;
  PipelineMode mode = PipelineMode::kAsrOnly;
  std::size_t scenes = 0;
  std::size_t edited_scenes = 0;
  std::size_t fallbacks = 0;
  bool hierarchical_condense = false;
  std::map<std::string, CallCounts> calls_by_stage;
  CallCounts calls;
  std::map<std::string, double> stage_ms;
  ClientStats text_client;
  ClientStats vision_client;
  std::vector<std::string> warnings;
  std::map<std::string, std::string> prompt_digests;

  // Everything except timings and cache statistics: stable across reruns.
  std::string deterministic_json() const;
  std::string to_json() const;
};

struct PipelineResult {
  Transcript transcript;
  std::vector<SceneRecord> scenes;
  std::string presentation_summary;
  RunManifest manifest;
};

// Runs the stages of `config.mode`. Edited scene text is re-cut onto the
// scene's original segments, so ids and timestamps survive and the
// identity edit reproduces the input exactly. `text` and `vision` may be
// null for modes that do not use them.
PipelineResult run_pipeline(const PipelineInputs& inputs, const PipelineConfig& config,
                            ChatClient* text, ChatClient* vision,
                            const PromptSet& prompts = PromptSet::defaults());

}  // namespace swer
