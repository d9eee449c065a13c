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
#include "swer/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iterator>
#include <regex>
#include <set>
#include <sstream>

#include "json.hpp"
#include "swer/errors.hpp"
#include "swer/parallel.hpp"
#include "swer/prompts.hpp"
#include "swer/resegment.hpp"

namespace swer {

using json = nlohmann::json;

namespace {

const std::regex& slot_pattern() {
  static const std::regex re(R"(\{\{([a-z_]+)\}\})");
  return re;
}

std::string trim(std::string_view text) {
  const auto b = text.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return "";
  const auto e = text.find_last_not_of(" \t\r\n");
  return std::string(text.substr(b, e - b + 1));
}

std::size_t word_count(std::string_view text) {
  std::istringstream in{std::string(text)};
  return static_cast<std::size_t>(
      std::distance(std::istream_iterator<std::string>(in), std::istream_iterator<std::string>()));
}

std::vector<std::string> question_lines(std::string_view text) {
  std::vector<std::string> out;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    std::string q = trim(line);
    if (!q.empty()) out.push_back(std::move(q));
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

std::string scene_id_for(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "scene_%04zu", index);
  return buf;
}

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

}  // namespace

// ---- Prompts --------------------------------------------------------------

PromptTemplate PromptTemplate::parse(std::string name, std::string_view text) {
  PromptTemplate t;
  t.name = std::move(name);
  std::istringstream in{std::string(text)};
  std::string line;
  std::string system;
  std::string user;
  bool in_user = false;
  bool has_separator = text.find("\n----\n") != std::string_view::npos ||
                       text.starts_with("----\n");
  if (!has_separator) in_user = true;
  while (std::getline(in, line)) {
    if (!in_user && line == "----") {
      in_user = true;
      continue;
    }
    (in_user ? user : system) += line + "\n";
  }
  t.system = trim(system);
  t.user = trim(user);
  return t;
}

std::vector<std::string> PromptTemplate::slots() const {
  std::set<std::string> seen;
  std::vector<std::string> out;
  for (auto it = std::sregex_iterator(user.begin(), user.end(), slot_pattern());
       it != std::sregex_iterator(); ++it) {
    if (seen.insert((*it)[1].str()).second) out.push_back((*it)[1].str());
  }
  return out;
}

std::string PromptTemplate::render(const std::map<std::string, std::string>& values) const {
  std::set<std::string> used;
  std::string out;
  auto last = user.cbegin();
  for (auto it = std::sregex_iterator(user.begin(), user.end(), slot_pattern());
       it != std::sregex_iterator(); ++it) {
    const std::string slot = (*it)[1].str();
    const auto value = values.find(slot);
    if (value == values.end()) {
      throw ConfigError("prompt '" + name + "': no value for slot {{" + slot + "}}");
    }
    out.append(last, user.cbegin() + it->position());
    out += value->second;
    last = user.cbegin() + it->position() + it->length();
    used.insert(slot);
  }
  out.append(last, user.cend());
  for (const auto& [slot, unused] : values) {
    if (!used.contains(slot)) {
      throw ConfigError("prompt '" + name + "' has no slot {{" + slot + "}}");
    }
  }
  return out;
}

PromptSet PromptSet::defaults() {
  PromptSet set;
  set.question_system = trim(prompts::slide_question_system());
  set.slide_questions = question_lines(prompts::slide_questions());
  set.scene_summary = PromptTemplate::parse("scene_summary", prompts::scene_summary());
  set.condense = PromptTemplate::parse("condense", prompts::condense());
  set.post_edit = PromptTemplate::parse("post_edit", prompts::post_edit());
  set.e2e = PromptTemplate::parse("e2e_post_edit", prompts::e2e_post_edit());
  return set;
}

PromptSet PromptSet::load(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw ConfigError("prompt directory " + dir.string() + " does not exist");
  }
  PromptSet set = defaults();
  auto file = [&](const char* name) -> std::optional<std::string> {
    const auto path = dir / name;
    if (!std::filesystem::exists(path)) return std::nullopt;
    return read_file(path);
  };
  if (auto t = file("slide_question_system.txt")) set.question_system = trim(*t);
  if (auto t = file("slide_questions.txt")) set.slide_questions = question_lines(*t);
  if (auto t = file("scene_summary.txt")) set.scene_summary = PromptTemplate::parse("scene_summary", *t);
  if (auto t = file("condense.txt")) set.condense = PromptTemplate::parse("condense", *t);
  if (auto t = file("post_edit.txt")) set.post_edit = PromptTemplate::parse("post_edit", *t);
  if (auto t = file("e2e_post_edit.txt")) set.e2e = PromptTemplate::parse("e2e_post_edit", *t);
  set.validate();
  return set;
}

void PromptSet::validate() const {
  if (slide_questions.size() != kQuestionCount) {
    throw ConfigError("expected " + std::to_string(kQuestionCount) + " slide questions, got " +
                      std::to_string(slide_questions.size()));
  }
  auto expect = [](const PromptTemplate& t, std::set<std::string> want) {
    const auto got = t.slots();
    const std::set<std::string> have(got.begin(), got.end());
    if (have != want) {
      std::string list;
      for (const auto& s : want) list += (list.empty() ? "{{" : ", {{") + s + "}}";
      throw ConfigError("prompt '" + t.name + "' must use exactly the slots " + list);
    }
  };
  expect(scene_summary, {"answers"});
  expect(condense, {"summaries"});
  expect(post_edit, {"scene_context", "presentation_summary", "transcript"});
  expect(e2e, {"transcript"});
}

std::map<std::string, std::string> PromptSet::digests() const {
  std::string questions;
  for (const auto& q : slide_questions) questions += q + "\n";
  auto both = [](const PromptTemplate& t) { return t.system + "\n----\n" + t.user; };
  return {
      {"slide_question_system", sha256_hex(question_system)},
      {"slide_questions", sha256_hex(questions)},
      {"scene_summary", sha256_hex(both(scene_summary))},
      {"condense", sha256_hex(both(condense))},
      {"post_edit", sha256_hex(both(post_edit))},
      {"e2e_post_edit", sha256_hex(both(e2e))},
      {"annotation_guideline", sha256_hex(prompts::annotation_guideline())},
  };
}

// ---- Scenes ---------------------------------------------------------------

std::optional<std::filesystem::path> find_frame(const std::filesystem::path& frames_dir,
                                                std::size_t index) {
  for (const char* ext : {".png", ".jpg", ".jpeg", ".webp"}) {
    auto path = frames_dir / (scene_id_for(index) + ext);
    if (std::filesystem::is_regular_file(path)) return path;
  }
  return std::nullopt;
}

std::vector<SceneRecord> assemble_scenes(const ScenePlan& plan, const Transcript& transcript,
                                         const std::filesystem::path& frames_dir,
                                         std::vector<std::string>* warnings) {
  plan.validate();
  std::vector<SceneRecord> scenes(plan.spans.size());
  for (std::size_t k = 0; k < scenes.size(); ++k) {
    SceneRecord& s = scenes[k];
    s.index = k + 1;
    s.scene_id = scene_id_for(k + 1);
    s.span = plan.spans[k];
    s.sample_time_s = plan.sample_times_s[k];
    if (!frames_dir.empty()) {
      const auto frame = find_frame(frames_dir, s.index);
      if (!frame) {
        char span[64];
        std::snprintf(span, sizeof span, "%.3f-%.3f s", s.span.start_s, s.span.end_s);
        throw InputError("no frame for " + s.scene_id + " (" + span + ") in " +
                         frames_dir.string());
      }
      s.image_ref = *frame;
    }
  }
  if (transcript.segments.empty()) return scenes;
  if (!transcript.timed()) {
    if (scenes.size() != 1) {
      throw PreconditionError("transcript has no timestamps; cannot split it into " +
                              std::to_string(scenes.size()) + " scenes");
    }
    for (std::size_t i = 0; i < transcript.segments.size(); ++i) {
      scenes[0].segment_indices.push_back(i);
      const auto& tokens = transcript.segments[i].tokens;
      scenes[0].transcript.insert(scenes[0].transcript.end(), tokens.begin(), tokens.end());
    }
    return scenes;
  }
  SpanSlices slices = slice_by_spans(transcript, plan.spans);
  for (std::size_t k = 0; k < scenes.size(); ++k) {
    scenes[k].segment_indices = std::move(slices.groups[k]);
    scenes[k].transcript = std::move(slices.tokens[k]);
  }
  if (warnings) {
    warnings->insert(warnings->end(), slices.warnings.begin(), slices.warnings.end());
  }
  return scenes;
}

// ---- Slide analysis -------------------------------------------------------

namespace {

void analyze_into(const SceneRecord& scene, ChatClient& vision, ChatClient& text,
                  const PromptSet& prompts, std::size_t max_parallel, SlideAnalysis& out) {
  if (scene.image_ref.empty()) {
    throw PreconditionError(scene.scene_id + " has no slide image");
  }
  const ImageInput image = load_image(scene.image_ref);
  const std::size_t n = prompts.slide_questions.size();
  std::vector<std::optional<std::string>> answers(n);
  std::vector<std::string> failures(n);
  parallel_for(n, max_parallel, [&](std::size_t q) {
    try {
      std::string answer =
          trim(vision.complete_vision(prompts.question_system, prompts.slide_questions[q], image));
      if (answer.empty()) {
        failures[q] = "empty answer";
      } else {
        answers[q] = std::move(answer);
      }
    } catch (const RemoteError& e) {
      failures[q] = e.what();
    }
  });
  out.vision_calls += n;

  std::string joined;
  for (std::size_t q = 0; q < n; ++q) {
    if (!answers[q]) {
      out.warnings.push_back(scene.scene_id + ": question " + std::to_string(q + 1) +
                             " failed: " + failures[q]);
      continue;
    }
    ++out.answered;
    joined += "Question: " + prompts.slide_questions[q] + "\nAnswer: " + *answers[q] + "\n\n";
  }
  if (out.answered < 4) {
    throw SceneAnalysisError(scene.scene_id + ": only " + std::to_string(out.answered) +
                                 " of " + std::to_string(n) + " slide questions answered",
                             scene.index);
  }
  const std::string user = prompts.scene_summary.render({{"answers", trim(joined)}});
  ++out.text_calls;
  try {
    out.context = trim(text.complete_text(prompts.scene_summary.system, user));
  } catch (const RemoteError& e) {
    throw SceneAnalysisError(scene.scene_id + ": summary failed: " + e.what(), scene.index);
  }
  if (out.context.empty()) {
    throw SceneAnalysisError(scene.scene_id + ": summary is empty", scene.index);
  }
}

}  // namespace

SlideAnalysis analyze_slide(const SceneRecord& scene, ChatClient& vision, ChatClient& text,
                            const PromptSet& prompts, std::size_t max_parallel) {
  SlideAnalysis out;
  analyze_into(scene, vision, text, prompts, max_parallel, out);
  return out;
}

// ---- Condensation ---------------------------------------------------------

PresentationContext condense(std::span<const std::string> scene_contexts, ChatClient& text,
                             const PromptSet& prompts, std::size_t budget_chars) {
  std::vector<std::string> items;
  for (std::size_t k = 0; k < scene_contexts.size(); ++k) {
    const std::string c = trim(scene_contexts[k]);
    if (!c.empty()) items.push_back("Slide " + std::to_string(k + 1) + ":\n" + c);
  }
  if (items.empty()) throw PreconditionError("no scene context to condense");

  PresentationContext out;
  auto call = [&](const std::string& joined) {
    ++out.text_calls;
    std::string reply =
        trim(text.complete_text(prompts.condense.system,
                                prompts.condense.render({{"summaries", joined}})));
    if (reply.empty()) throw RemoteError("condensation returned an empty summary");
    return reply;
  };
  auto join = [](std::span<const std::string> parts) {
    std::string s;
    for (const auto& p : parts) s += (s.empty() ? "" : "\n\n") + p;
    return s;
  };

  while (items.size() > 1 && join(items).size() > budget_chars) {
    out.hierarchical = true;
    std::vector<std::vector<std::string>> chunks;
    std::size_t size = 0;
    for (auto& item : items) {
      if (chunks.empty() || (size + item.size() + 2 > budget_chars && !chunks.back().empty())) {
        chunks.emplace_back();
        size = 0;
      }
      size += item.size() + 2;
      chunks.back().push_back(std::move(item));
    }
    // Items too large to share a chunk would never shrink; pair them up.
    if (chunks.size() == items.size()) {
      std::vector<std::vector<std::string>> paired;
      for (std::size_t i = 0; i < chunks.size(); i += 2) {
        paired.push_back(std::move(chunks[i]));
        if (i + 1 < chunks.size()) paired.back().push_back(std::move(chunks[i + 1].front()));
      }
      chunks = std::move(paired);
    }
    std::vector<std::string> next;
    for (std::size_t c = 0; c < chunks.size(); ++c) {
      next.push_back("Part " + std::to_string(c + 1) + ":\n" + call(join(chunks[c])));
    }
    items = std::move(next);
  }
  out.summary = call(join(items));
  return out;
}

// ---- Post-editing ---------------------------------------------------------

namespace {

EditOutcome guarded(const SceneRecord& scene, const std::string& input, std::string reply) {
  EditOutcome out;
  out.called = true;
  reply = trim(reply);
  const double in_words = static_cast<double>(word_count(input));
  const double out_words = static_cast<double>(word_count(reply));
  const double ratio = out_words / in_words;
  if (ratio < kMinLengthRatio || ratio > kMaxLengthRatio) {
    out.text = input;
    out.fell_back = true;
    out.warning = scene.scene_id + ": edited text has " + std::to_string(word_count(reply)) +
                  " words for " + std::to_string(word_count(input)) +
                  " input words; kept the original";
    return out;
  }
  out.text = std::move(reply);
  return out;
}

EditOutcome remote_failure(const SceneRecord& scene, const std::string& input,
                           const RemoteError& e) {
  EditOutcome out;
  out.called = true;
  out.text = input;
  out.fell_back = true;
  out.warning = scene.scene_id + ": post-editing failed, kept the original: " + e.what();
  return out;
}

}  // namespace

EditOutcome post_edit(const SceneRecord& scene, const PresentationContext& presentation,
                      ChatClient& text, const PromptSet& prompts) {
  const std::string input = join_surfaces(scene.transcript);
  if (input.empty()) return EditOutcome{};
  const std::string context = trim(scene.scene_context);
  const std::string summary = trim(presentation.summary);
  const std::string user = prompts.post_edit.render({
      {"scene_context", context.empty() ? "(none)" : context},
      {"presentation_summary", summary.empty() ? "(none)" : summary},
      {"transcript", input},
  });
  try {
    return guarded(scene, input, text.complete_text(prompts.post_edit.system, user));
  } catch (const RemoteError& e) {
    return remote_failure(scene, input, e);
  }
}

EditOutcome post_edit_e2e(const SceneRecord& scene, ChatClient& vision, const PromptSet& prompts) {
  const std::string input = join_surfaces(scene.transcript);
  if (input.empty()) return EditOutcome{};
  if (scene.image_ref.empty()) throw PreconditionError(scene.scene_id + " has no slide image");
  const ImageInput image = load_image(scene.image_ref);
  const std::string user = prompts.e2e.render({{"transcript", input}});
  try {
    return guarded(scene, input, vision.complete_vision(prompts.e2e.system, user, image));
  } catch (const RemoteError& e) {
    return remote_failure(scene, input, e);
  }
}

// ---- Orchestration --------------------------------------------------------

std::string_view to_string(PipelineMode mode) noexcept {
  switch (mode) {
    case PipelineMode::kAsrOnly: return "asr-only";
    case PipelineMode::kTextPe: return "text-pe";
    case PipelineMode::kVisionPe: return "vision-pe";
    case PipelineMode::kE2eVisionPe: return "e2e-vision-pe";
  }
  return "?";
}

PipelineMode parse_pipeline_mode(std::string_view text) {
  for (PipelineMode m : {PipelineMode::kAsrOnly, PipelineMode::kTextPe, PipelineMode::kVisionPe,
                         PipelineMode::kE2eVisionPe}) {
    if (text == to_string(m)) return m;
  }
  throw ConfigError("unknown pipeline mode '" + std::string(text) +
                    "' (expected asr-only, text-pe, vision-pe or e2e-vision-pe)");
}

namespace {

json stats_json(const ClientStats& s) {
  return {{"requests", s.requests},
          {"cache_hits", s.cache_hits},
          {"deduplicated", s.deduplicated},
          {"http_attempts", s.http_attempts},
          {"retries", s.retries}};
}

json deterministic(const RunManifest& m) {
  json doc;
  doc["video_id"] = m.video_id;
  doc["mode"] = std::string(to_string(m.mode));
  doc["scenes"] = m.scenes;
  doc["edited_scenes"] = m.edited_scenes;
  doc["fallbacks"] = m.fallbacks;
  doc["hierarchical_condense"] = m.hierarchical_condense;
  doc["calls"] = {{"vision", m.calls.vision}, {"text", m.calls.text}};
  doc["calls_by_stage"] = json::object();
  for (const auto& [stage, c] : m.calls_by_stage) {
    doc["calls_by_stage"][stage] = {{"vision", c.vision}, {"text", c.text}};
  }
  doc["warnings"] = m.warnings;
  doc["prompt_digests"] = m.prompt_digests;
  return doc;
}

}  // namespace

std::string RunManifest::deterministic_json() const { return deterministic(*this).dump(2) + "\n"; }

std::string RunManifest::to_json() const {
  json doc = deterministic(*this);
  doc["stage_ms"] = stage_ms;
  doc["cache"] = {{"text", stats_json(text_client)}, {"vision", stats_json(vision_client)}};
  return doc.dump(2) + "\n";
}

PipelineResult run_pipeline(const PipelineInputs& inputs, const PipelineConfig& config,
                            ChatClient* text, ChatClient* vision, const PromptSet& prompts) {
  const auto started = Clock::now();
  PipelineResult result;
  RunManifest& manifest = result.manifest;
  manifest.video_id = inputs.transcript.video_id;
  manifest.mode = config.mode;

  if (config.mode == PipelineMode::kAsrOnly) {
    result.transcript = inputs.transcript;
    manifest.stage_ms["total"] = elapsed_ms(started);
    return result;
  }

  prompts.validate();
  manifest.prompt_digests = prompts.digests();
  const bool vision_mode =
      config.mode == PipelineMode::kVisionPe || config.mode == PipelineMode::kE2eVisionPe;
  if (config.mode != PipelineMode::kE2eVisionPe && text == nullptr) {
    throw PreconditionError(std::string(to_string(config.mode)) + " needs a text endpoint");
  }
  if (vision_mode && vision == nullptr) {
    throw PreconditionError(std::string(to_string(config.mode)) + " needs a vision endpoint");
  }
  if (vision_mode && inputs.frames_dir.empty()) {
    throw PreconditionError(std::string(to_string(config.mode)) + " needs a frames directory");
  }
  if (vision_mode && !inputs.plan && !inputs.features) {
    throw PreconditionError(std::string(to_string(config.mode)) +
                            " needs frame features or a scene plan");
  }

  auto stage_start = Clock::now();
  ScenePlan plan;
  if (inputs.plan) {
    plan = *inputs.plan;
  } else if (inputs.features) {
    plan = plan_scenes(*inputs.features, config.kts);
  } else {
    double duration = 0.0;
    if (inputs.transcript.timed()) {
      for (const Segment& s : inputs.transcript.segments) duration = std::max(duration, *s.end_s);
      plan = fixed_window_plan(duration, config.window_s);
    } else {
      plan = fixed_window_plan(0.0, config.window_s);
    }
  }
  manifest.stage_ms["plan"] = elapsed_ms(stage_start);

  stage_start = Clock::now();
  result.scenes = assemble_scenes(plan, inputs.transcript,
                                  vision_mode ? inputs.frames_dir : std::filesystem::path{},
                                  &manifest.warnings);
  auto& scenes = result.scenes;
  manifest.scenes = scenes.size();
  manifest.stage_ms["assemble"] = elapsed_ms(stage_start);

  PresentationContext presentation;
  if (config.mode == PipelineMode::kVisionPe) {
    stage_start = Clock::now();
    std::vector<SlideAnalysis> analyses(scenes.size());
    std::vector<std::optional<std::string>> failures(scenes.size());
    parallel_for(scenes.size(), config.max_parallel, [&](std::size_t k) {
      try {
        analyze_into(scenes[k], *vision, *text, prompts, config.max_parallel, analyses[k]);
      } catch (const SceneAnalysisError& e) {
        failures[k] = e.what();
      }
    });
    CallCounts& counts = manifest.calls_by_stage["analyze"];
    std::vector<std::string> contexts;
    for (std::size_t k = 0; k < scenes.size(); ++k) {
      counts.vision += analyses[k].vision_calls;
      counts.text += analyses[k].text_calls;
      manifest.warnings.insert(manifest.warnings.end(), analyses[k].warnings.begin(),
                               analyses[k].warnings.end());
      if (failures[k]) {
        manifest.warnings.push_back("slide analysis failed, continuing without context: " +
                                    *failures[k]);
      } else {
        scenes[k].scene_context = analyses[k].context;
      }
      contexts.push_back(scenes[k].scene_context);
    }
    manifest.stage_ms["analyze"] = elapsed_ms(stage_start);

    stage_start = Clock::now();
    if (std::any_of(contexts.begin(), contexts.end(),
                    [](const std::string& c) { return !c.empty(); })) {
      try {
        presentation = condense(contexts, *text, prompts, config.context_budget_chars);
      } catch (const RemoteError& e) {
        throw RemoteError(std::string("condense stage failed: ") + e.what());
      }
      manifest.calls_by_stage["condense"].text = presentation.text_calls;
      manifest.hierarchical_condense = presentation.hierarchical;
      if (presentation.hierarchical) {
        manifest.warnings.emplace_back("scene contexts exceeded the context budget; condensed in chunks");
      }
    } else {
      manifest.warnings.emplace_back("no scene context available; post-editing without a presentation summary");
    }
    result.presentation_summary = presentation.summary;
    manifest.stage_ms["condense"] = elapsed_ms(stage_start);
  }

  stage_start = Clock::now();
  std::vector<EditOutcome> edits(scenes.size());
  parallel_for(scenes.size(), config.max_parallel, [&](std::size_t k) {
    edits[k] = config.mode == PipelineMode::kE2eVisionPe
                   ? post_edit_e2e(scenes[k], *vision, prompts)
                   : post_edit(scenes[k], presentation, *text, prompts);
  });
  CallCounts& edit_calls = manifest.calls_by_stage["post_edit"];
  for (std::size_t k = 0; k < scenes.size(); ++k) {
    const EditOutcome& e = edits[k];
    scenes[k].post_edited = e.text;
    if (e.called) {
      (config.mode == PipelineMode::kE2eVisionPe ? edit_calls.vision : edit_calls.text) += 1;
    }
    if (e.fell_back) ++manifest.fallbacks;
    if (e.called && !e.fell_back) ++manifest.edited_scenes;
    if (e.warning) manifest.warnings.push_back(*e.warning);
  }
  manifest.stage_ms["post_edit"] = elapsed_ms(stage_start);

  // Re-cut each edited scene onto its original segments.
  stage_start = Clock::now();
  result.transcript = inputs.transcript;
  result.transcript.role = TranscriptRole::kHypothesis;
  for (const SceneRecord& scene : scenes) {
    if (scene.segment_indices.empty()) continue;
    const std::vector<Token> edited = tokenize(scene.post_edited, config.profile);
    std::vector<std::vector<Token>> pieces;
    for (std::size_t i : scene.segment_indices) pieces.push_back(inputs.transcript.segments[i].tokens);
    const SegmentationResult cut = resegment(pieces, edited);
    for (std::size_t k = 0; k < scene.segment_indices.size(); ++k) {
      const TokenRange r = cut.segment_range(k, edited.size());
      Segment& out = result.transcript.segments[scene.segment_indices[k]];
      std::vector<Token> piece(edited.begin() + static_cast<std::ptrdiff_t>(r.begin),
                               edited.begin() + static_cast<std::ptrdiff_t>(r.end));
      if (piece != out.tokens) {
        out.tokens = std::move(piece);
        out.terms.clear();
      }
    }
  }
  manifest.stage_ms["assemble_output"] = elapsed_ms(stage_start);

  for (const auto& [stage, c] : manifest.calls_by_stage) {
    manifest.calls.vision += c.vision;
    manifest.calls.text += c.text;
  }
  if (text) manifest.text_client = text->stats();
  if (vision) manifest.vision_client = vision->stats();
  manifest.stage_ms["total"] = elapsed_ms(started);
  return result;
}

}  // namespace swer
