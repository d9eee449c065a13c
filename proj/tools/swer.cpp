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
// swer: command-line front end for the evaluation and post-editing toolkit.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "swer/alignment.hpp"
#include "swer/annotator.hpp"
#include "swer/errors.hpp"
#include "swer/evaluate.hpp"
#include "swer/kts.hpp"
#include "swer/llm_client.hpp"
#include "swer/metrics.hpp"
#include "swer/pipeline.hpp"
#include "swer/report.hpp"
#include "swer/resegment.hpp"
#include "swer/transcript.hpp"
#include "swer/version.hpp"

namespace {

using json = nlohmann::json;
using namespace swer;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Writes to `path`, or stdout when it is empty or "-".
void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write " + path);
  out << text;
  if (!out) throw InputError("failed writing " + path);
}

struct TextOptions {
  bool case_fold = false;
};

std::vector<Transcript> load(const std::string& path, TranscriptRole role, const TextOptions& t) {
  const NormalizationProfile profile = NormalizationProfile::exact();
  auto transcripts = read_transcripts(std::filesystem::path(path), role, profile);
  if (t.case_fold) {
    for (auto& tr : transcripts) fold_transcript(tr, profile);
  }
  return transcripts;
}

EndpointConfig endpoint_from(const json& doc) {
  EndpointConfig c;
  try {
    c.base_url = doc.at("base_url").get<std::string>();
    c.model_name = doc.at("model").get<std::string>();
    c.api_key_env = doc.value("api_key_env", c.api_key_env);
    c.timeout_s = doc.value("timeout_s", c.timeout_s);
    c.max_retries = doc.value("max_retries", c.max_retries);
    c.temperature = doc.value("temperature", c.temperature);
    c.retry_base_delay_s = doc.value("retry_base_delay_s", c.retry_base_delay_s);
    c.max_image_bytes = doc.value("max_image_bytes", c.max_image_bytes);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("endpoint config: ") + e.what());
  }
  c.validate();
  return c;
}

struct Endpoints {
  std::unique_ptr<ChatClient> text;
  std::unique_ptr<ChatClient> vision;
};

// Flat config: one endpoint for both roles. Otherwise "text" and "vision"
// sections. "cache_dir" enables the response cache unless disabled.
Endpoints load_endpoints(const std::string& path, bool use_cache) {
  json doc;
  try {
    doc = json::parse(slurp(path));
  } catch (const json::parse_error& e) {
    throw ConfigError("endpoint config " + path + ": " + e.what());
  }
  if (!doc.is_object()) throw ConfigError("endpoint config " + path + " must be an object");
  std::shared_ptr<ResponseCache> cache;
  if (use_cache && doc.contains("cache_dir")) {
    cache = std::make_shared<ResponseCache>(doc["cache_dir"].get<std::string>());
  }
  Endpoints e;
  if (doc.contains("text") || doc.contains("vision")) {
    if (doc.contains("text")) e.text = std::make_unique<ChatClient>(endpoint_from(doc["text"]), cache);
    if (doc.contains("vision")) {
      e.vision = std::make_unique<ChatClient>(endpoint_from(doc["vision"]), cache);
    }
  } else {
    const EndpointConfig c = endpoint_from(doc);
    e.text = std::make_unique<ChatClient>(c, cache);
    e.vision = std::make_unique<ChatClient>(c, cache);
  }
  return e;
}

std::string tokens_json(std::span<const Token> tokens) {
  json list = json::array();
  for (const Token& t : tokens) list.push_back({{"surface", t.surface}, {"normalized", t.normalized}});
  return list.dump();
}

json script_json(const EditScript& s) {
  json ops = json::array();
  for (const EditOp& op : s.ops) {
    ops.push_back({{"kind", std::string(1, op_letter(op.kind))},
                   {"ref", {op.ref_span.begin, op.ref_span.end}},
                   {"hyp", {op.hyp_span.begin, op.hyp_span.end}},
                   {"position", op.position}});
  }
  return {{"ref_len", s.ref_len},
          {"hyp_len", s.hyp_len},
          {"insertions", s.counts.insertions},
          {"omissions", s.counts.omissions},
          {"substitutions", s.counts.substitutions},
          {"ops", ops}};
}

struct PairArgs {
  std::string ref;
  std::string hyp;
  std::string unit = "video";
  TextOptions text;
};

void add_pair_args(CLI::App* cmd, PairArgs& a) {
  cmd->add_option("--ref", a.ref, "Reference transcript (JSONL)")->required();
  cmd->add_option("--hyp", a.hyp, "Hypothesis transcript (JSONL)")->required();
  cmd->add_option("--unit", a.unit, "Alignment unit: video or segment")->capture_default_str();
  cmd->add_flag("--case-fold", a.text.case_fold, "Fold case before comparing");
}

struct LoadedPairs {
  std::vector<Transcript> refs;
  std::vector<Transcript> hyps;
  std::vector<std::pair<const Transcript*, const Transcript*>> pairs;
  std::vector<std::vector<EvalUnit>> units;  // per pair
};

LoadedPairs load_pairs(const PairArgs& a) {
  LoadedPairs p;
  p.refs = load(a.ref, TranscriptRole::kReference, a.text);
  p.hyps = load(a.hyp, TranscriptRole::kHypothesis, a.text);
  p.pairs = pair_transcripts(p.refs, p.hyps);
  const EvalGranularity g = parse_granularity(a.unit);
  for (const auto& [r, h] : p.pairs) p.units.push_back(build_units(*r, *h, g));
  return p;
}

std::vector<EvalUnit> flatten(const LoadedPairs& p) {
  std::vector<EvalUnit> all;
  for (const auto& u : p.units) all.insert(all.end(), u.begin(), u.end());
  return all;
}

int run(int argc, char** argv) {
  CLI::App app{"Severity-aware ASR evaluation and context-aware post-editing"};
  app.set_version_flag("--version", std::string(SWER_VERSION_STRING));
  app.require_subcommand(1);

  // tokenize
  std::string tok_input;
  std::string tok_profile = "exact";
  TextOptions tok_text;
  auto* tokenize_cmd = app.add_subcommand("tokenize", "Print tokens of every segment");
  tokenize_cmd->add_option("--input", tok_input, "Transcript (JSONL)")->required();
  tokenize_cmd->add_option("--profile", tok_profile, "exact or matching")->capture_default_str();
  tokenize_cmd->add_flag("--case-fold", tok_text.case_fold, "Fold case first");
  tokenize_cmd->callback([&] {
    if (tok_profile != "exact" && tok_profile != "matching") {
      throw ConfigError("unknown profile '" + tok_profile + "'");
    }
    const NormalizationProfile profile =
        tok_profile == "exact" ? NormalizationProfile::exact() : NormalizationProfile::matching();
    std::string out;
    for (Transcript& t : read_transcripts(std::filesystem::path(tok_input), TranscriptRole::kReference,
                                          profile)) {
      if (tok_text.case_fold) fold_transcript(t, profile);
      for (const Segment& s : t.segments) {
        out += "{\"video_id\":" + json(t.video_id).dump() + ",\"segment_id\":" + json(s.id).dump() +
               ",\"tokens\":" + tokens_json(s.tokens) + "}\n";
      }
    }
    emit("", out);
  });

  // align
  PairArgs align_args;
  auto* align_cmd = app.add_subcommand("align", "Print edit scripts");
  add_pair_args(align_cmd, align_args);
  align_cmd->callback([&] {
    const LoadedPairs p = load_pairs(align_args);
    std::string out;
    for (const EvalUnit& u : flatten(p)) {
      json line = script_json(u.script);
      line["video_id"] = u.video_id;
      line["scene_id"] = u.scene_id;
      out += line.dump() + "\n";
    }
    emit("", out);
  });

  // highlight
  PairArgs hl_args;
  std::string hl_out_dir;
  auto* highlight_cmd = app.add_subcommand("highlight", "Render bracketed diffs");
  add_pair_args(highlight_cmd, hl_args);
  highlight_cmd->add_option("--out-dir", hl_out_dir, "One file per unit instead of stdout");
  highlight_cmd->callback([&] {
    const LoadedPairs p = load_pairs(hl_args);
    std::string out;
    for (const EvalUnit& u : flatten(p)) {
      const std::string doc = format_highlight_document(render_highlight(u.script, u.ref, u.hyp));
      const std::string name = u.video_id + (u.scene_id.empty() ? "" : "__" + u.scene_id);
      if (!hl_out_dir.empty()) {
        std::filesystem::create_directories(hl_out_dir);
        emit((std::filesystem::path(hl_out_dir) / (name + ".txt")).string(), doc);
      } else {
        out += "# " + name + "\n" + doc + "\n";
      }
    }
    if (hl_out_dir.empty()) emit("", out);
  });

  // resegment
  PairArgs rs_args;
  std::string rs_hyp_text;
  std::string rs_out;
  auto* reseg_cmd = app.add_subcommand("resegment", "Cut hypotheses onto reference segments");
  reseg_cmd->add_option("--ref", rs_args.ref, "Reference transcript (JSONL)")->required();
  auto* rs_hyp_opt = reseg_cmd->add_option("--hyp", rs_args.hyp, "Hypothesis transcript (JSONL)");
  auto* rs_text_opt =
      reseg_cmd->add_option("--hyp-text", rs_hyp_text, "Plain-text hypothesis for a single video");
  rs_hyp_opt->excludes(rs_text_opt);
  reseg_cmd->add_flag("--case-fold", rs_args.text.case_fold, "Fold case first");
  reseg_cmd->add_option("--out", rs_out, "Output transcript (JSONL)");
  reseg_cmd->callback([&] {
    const auto refs = load(rs_args.ref, TranscriptRole::kReference, rs_args.text);
    std::ostringstream out;
    if (!rs_hyp_text.empty()) {
      if (refs.size() != 1) throw InputError("--hyp-text needs a reference with exactly one video");
      std::string text = slurp(rs_hyp_text);
      if (rs_args.text.case_fold) text = fold_case(text);
      const auto hyp = tokenize(text, NormalizationProfile::exact());
      write_transcript(out, resegment_transcript(refs.front(), hyp));
    } else {
      if (rs_args.hyp.empty()) throw ConfigError("resegment needs --hyp or --hyp-text");
      const auto hyps = load(rs_args.hyp, TranscriptRole::kHypothesis, rs_args.text);
      for (const auto& [r, h] : pair_transcripts(refs, hyps)) {
        write_transcript(out, resegment_transcript(*r, h->token_stream()));
      }
    }
    emit(rs_out, out.str());
  });

  // annotate
  PairArgs an_args;
  std::string an_backend = "rules";
  std::string an_lexicons;
  std::string an_endpoint;
  std::string an_guideline;
  std::string an_out;
  bool an_no_cache = false;
  std::size_t an_parallel = 4;
  int an_attempts = 2;
  auto* annotate_cmd = app.add_subcommand("annotate", "Label mismatches with type and severity");
  add_pair_args(annotate_cmd, an_args);
  annotate_cmd->add_option("--backend", an_backend, "rules or llm")->capture_default_str();
  annotate_cmd->add_option("--lexicons", an_lexicons, "Lexicon file (JSON) for the rules backend");
  annotate_cmd->add_option("--endpoint", an_endpoint, "Endpoint config (JSON) for the llm backend");
  annotate_cmd->add_option("--guideline", an_guideline, "Replacement guideline prompt");
  annotate_cmd->add_option("--max-parallel", an_parallel, "Concurrent requests")->capture_default_str();
  annotate_cmd->add_option("--parse-attempts", an_attempts, "Calls per request when replies do not parse")
      ->capture_default_str();
  annotate_cmd->add_flag("--no-cache", an_no_cache, "Ignore the endpoint cache");
  annotate_cmd->add_option("--out", an_out, "Annotation file (JSONL)");
  annotate_cmd->callback([&] {
    const LoadedPairs p = load_pairs(an_args);
    const std::vector<EvalUnit> units = flatten(p);
    std::vector<AnnotatedMismatch> annotated;
    if (an_backend == "rules") {
      const RuleLexicons lex = an_lexicons.empty() ? RuleLexicons::defaults() : RuleLexicons::load(an_lexicons);
      for (const std::string& w : lex.overlap_warnings(rule_profile(lex))) {
        std::cerr << "warning: " << w << "\n";
      }
      annotated = annotate_units_rules(units, lex);
    } else if (an_backend == "llm") {
      if (an_endpoint.empty()) throw ConfigError("--backend llm needs --endpoint");
      Endpoints e = load_endpoints(an_endpoint, !an_no_cache);
      if (!e.text) throw ConfigError("endpoint config has no text endpoint");
      const std::string guideline = an_guideline.empty() ? default_guideline() : slurp(an_guideline);
      annotated = annotate_units_llm(units, *e.text, guideline, {an_attempts, an_parallel});
    } else {
      throw ConfigError("unknown backend '" + an_backend + "'");
    }
    annotated = validate_units(units, std::move(annotated));
    std::ostringstream out;
    write_annotations(out, annotated);
    emit(an_out, out.str());
  });

  // eval
  PairArgs ev_args;
  std::string ev_annotations;
  std::string ev_lexicons;
  std::string ev_weights = "default";
  std::optional<std::size_t> ev_baseline;
  std::string ev_format = "table";
  std::string ev_label = "all";
  std::string ev_out;
  auto* eval_cmd = app.add_subcommand("eval", "WER, SWER, term recall and content-wise scores");
  add_pair_args(eval_cmd, ev_args);
  eval_cmd->add_option("--annotations", ev_annotations, "Annotation file; rules backend otherwise");
  eval_cmd->add_option("--lexicons", ev_lexicons, "Lexicon file for the rules backend");
  eval_cmd->add_option("--weights", ev_weights, "default, alternate, uniform or crit,minor,ok")
      ->capture_default_str();
  eval_cmd->add_option("--baseline-total", ev_baseline, "Denominator for severity percentages");
  eval_cmd->add_option("--format", ev_format, "table or structured")->capture_default_str();
  eval_cmd->add_option("--label", ev_label, "Label of the aggregate row")->capture_default_str();
  eval_cmd->add_option("--out", ev_out, "Output file");
  eval_cmd->callback([&] {
    const SeverityWeights weights = SeverityWeights::parse(ev_weights);
    const ReportFormat format = parse_report_format(ev_format);
    const LoadedPairs p = load_pairs(ev_args);
    std::vector<AnnotatedMismatch> annotated;
    const std::vector<EvalUnit> all = flatten(p);
    if (!ev_annotations.empty()) {
      annotated = read_annotations(std::filesystem::path(ev_annotations));
    } else {
      const RuleLexicons lex = ev_lexicons.empty() ? RuleLexicons::defaults() : RuleLexicons::load(ev_lexicons);
      annotated = annotate_units_rules(all, lex);
    }
    annotated = validate_units(all, std::move(annotated));
    std::map<std::string, std::vector<AnnotatedMismatch>> by_video;
    for (auto& a : annotated) by_video[a.video_id].push_back(std::move(a));
    std::vector<EvalReport> reports;
    for (std::size_t i = 0; i < p.pairs.size(); ++i) {
      const auto& [r, h] = p.pairs[i];
      reports.push_back(evaluate_video(*r, *h, p.units[i], by_video[r->video_id], weights, ev_baseline));
    }
    emit(ev_out, render_report(make_bundle(std::move(reports), ev_label, ev_baseline), format));
  });

  // kts
  std::string kts_features;
  std::string kts_out;
  KtsOptions kts_options;
  auto* kts_cmd = app.add_subcommand("kts", "Split a video into scenes from frame features");
  kts_cmd->add_option("--features", kts_features, "Feature matrix file")->required();
  kts_cmd->add_option("--max-segments", kts_options.max_segments, "Upper bound on scenes")
      ->capture_default_str();
  kts_cmd->add_option("--penalty", kts_options.penalty, "Penalty coefficient")->capture_default_str();
  kts_cmd->add_option("--stride", kts_options.stride, "Use every n-th frame")->capture_default_str();
  kts_cmd->add_option("--out", kts_out, "Scene plan (JSON)");
  kts_cmd->callback([&] {
    emit(kts_out, plan_to_json(plan_scenes(load_features(kts_features), kts_options)));
  });

  // pipeline run
  std::string pl_mode = "asr-only";
  std::string pl_video;
  std::string pl_transcript;
  std::string pl_features;
  std::string pl_plan;
  std::string pl_frames;
  std::string pl_endpoint;
  std::string pl_prompts;
  std::string pl_out;
  std::string pl_manifest;
  bool pl_no_cache = false;
  TextOptions pl_text;
  PipelineConfig pl_config;
  auto* pipeline_cmd = app.add_subcommand("pipeline", "Post-editing pipeline");
  pipeline_cmd->require_subcommand(1);
  auto* run_cmd = pipeline_cmd->add_subcommand("run", "Run one video");
  run_cmd->add_option("--mode", pl_mode, "asr-only, text-pe, vision-pe or e2e-vision-pe")
      ->capture_default_str();
  run_cmd->add_option("--video", pl_video, "Video id inside the transcript file")->required();
  run_cmd->add_option("--transcript", pl_transcript, "ASR transcript (JSONL)")->required();
  run_cmd->add_option("--features", pl_features, "Frame feature matrix");
  run_cmd->add_option("--plan", pl_plan, "Precomputed scene plan (JSON)");
  run_cmd->add_option("--frames", pl_frames, "Directory with scene_NNNN images");
  run_cmd->add_option("--endpoint", pl_endpoint, "Endpoint config (JSON)");
  run_cmd->add_option("--prompts", pl_prompts, "Directory overriding bundled prompts");
  run_cmd->add_option("--out", pl_out, "Edited transcript (JSONL)");
  run_cmd->add_option("--manifest", pl_manifest, "Run manifest (JSON)");
  run_cmd->add_option("--max-parallel", pl_config.max_parallel, "Concurrent requests")->capture_default_str();
  run_cmd->add_option("--max-segments", pl_config.kts.max_segments, "Scene cap")->capture_default_str();
  run_cmd->add_option("--penalty", pl_config.kts.penalty, "Scene penalty")->capture_default_str();
  run_cmd->add_option("--stride", pl_config.kts.stride, "Frame stride")->capture_default_str();
  run_cmd->add_option("--window-s", pl_config.window_s, "Scene length without features")
      ->capture_default_str();
  run_cmd->add_option("--context-budget", pl_config.context_budget_chars,
                      "Characters per condensation call")->capture_default_str();
  run_cmd->add_flag("--no-cache", pl_no_cache, "Ignore the endpoint cache");
  run_cmd->add_flag("--case-fold", pl_text.case_fold, "Fold case first");
  run_cmd->callback([&] {
    pl_config.mode = parse_pipeline_mode(pl_mode);
    PipelineInputs inputs;
    bool found = false;
    for (Transcript& t : load(pl_transcript, TranscriptRole::kHypothesis, pl_text)) {
      if (t.video_id == pl_video) {
        inputs.transcript = std::move(t);
        found = true;
      }
    }
    if (!found) throw InputError("video '" + pl_video + "' not in " + pl_transcript);
    if (!pl_plan.empty()) inputs.plan = load_plan(pl_plan);
    if (!pl_features.empty()) inputs.features = load_features(pl_features);
    inputs.frames_dir = pl_frames;
    const PromptSet prompts = pl_prompts.empty() ? PromptSet::defaults() : PromptSet::load(pl_prompts);
    Endpoints e;
    if (pl_config.mode != PipelineMode::kAsrOnly) {
      if (pl_endpoint.empty()) throw ConfigError("--mode " + pl_mode + " needs --endpoint");
      e = load_endpoints(pl_endpoint, !pl_no_cache);
    }
    const PipelineResult result = run_pipeline(inputs, pl_config, e.text.get(), e.vision.get(), prompts);
    std::ostringstream out;
    write_transcript(out, result.transcript);
    emit(pl_out, out.str());
    if (!pl_manifest.empty()) emit(pl_manifest, result.manifest.to_json());
    for (const std::string& w : result.manifest.warnings) std::cerr << "warning: " << w << "\n";
  });

  // report
  std::vector<std::string> rp_inputs;
  std::string rp_votes;
  std::vector<std::string> rp_correlations;
  std::string rp_format = "table";
  std::string rp_label = "all";
  std::optional<std::size_t> rp_baseline;
  std::string rp_out;
  auto* report_cmd = app.add_subcommand("report", "Merge structured reports and render them");
  report_cmd->add_option("--inputs", rp_inputs, "Structured reports from eval")->required();
  report_cmd->add_option("--votes", rp_votes, "Human preference votes (JSONL)");
  report_cmd->add_option("--correlation", rp_correlations,
                         "CSV with a header and two numeric columns; repeatable");
  report_cmd->add_option("--format", rp_format, "table or structured")->capture_default_str();
  report_cmd->add_option("--label", rp_label, "Label of the aggregate row")->capture_default_str();
  report_cmd->add_option("--baseline-total", rp_baseline, "Denominator for severity percentages");
  report_cmd->add_option("--out", rp_out, "Output file");
  report_cmd->callback([&] {
    const ReportFormat format = parse_report_format(rp_format);
    std::vector<EvalReport> reports;
    for (const std::string& path : rp_inputs) {
      ReportBundle b = parse_report(slurp(path));
      reports.insert(reports.end(), b.per_video.begin(), b.per_video.end());
    }
    ReportBundle bundle = make_bundle(std::move(reports), rp_label, rp_baseline);
    for (const std::string& path : rp_correlations) {
      std::istringstream in(slurp(path));
      std::string line;
      std::getline(in, line);
      std::vector<double> x, y;
      std::size_t line_no = 1;
      while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::vector<std::string> cells;
        std::stringstream row(line);
        std::string cell;
        while (std::getline(row, cell, ',')) cells.push_back(cell);
        if (cells.size() < 2) throw ParseError("expected at least two columns", line_no, 1);
        try {
          x.push_back(std::stod(cells[cells.size() - 2]));
          y.push_back(std::stod(cells[cells.size() - 1]));
        } catch (const std::exception&) {
          throw ParseError("non-numeric value", line_no, 1);
        }
      }
      bundle.correlations.push_back({std::filesystem::path(path).stem().string(), x.size(),
                                     correlation(x, y, CorrelationMode::kPearson),
                                     correlation(x, y, CorrelationMode::kSpearman)});
    }
    if (!rp_votes.empty()) bundle.votes = tally_all_pairs(read_votes(std::filesystem::path(rp_votes)));
    emit(rp_out, render_report(bundle, format));
  });

  // votes
  std::string vt_votes;
  std::string vt_pair;
  auto* votes_cmd = app.add_subcommand("votes", "Win/tie/lose ratios from human votes");
  votes_cmd->add_option("--votes", vt_votes, "Vote file (JSONL)")->required();
  votes_cmd->add_option("--pair", vt_pair, "SYSTEM_A,SYSTEM_B; all pairs otherwise");
  votes_cmd->callback([&] {
    const auto votes = read_votes(std::filesystem::path(vt_votes));
    std::vector<VoteRatio> ratios;
    if (vt_pair.empty()) {
      ratios = tally_all_pairs(votes);
    } else {
      const auto comma = vt_pair.find(',');
      if (comma == std::string::npos) throw ConfigError("--pair expects A,B");
      ratios.push_back(tally_votes(votes, vt_pair.substr(0, comma), vt_pair.substr(comma + 1)));
    }
    std::string out;
    char buf[256];
    for (const VoteRatio& r : ratios) {
      std::snprintf(buf, sizeof buf, "%s vs %s: win %.2f%%  tie %.2f%%  lose %.2f%%  (n=%zu)\n",
                    r.system_a.c_str(), r.system_b.c_str(), r.win, r.tie, r.lose, r.votes);
      out += buf;
    }
    emit("", out);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return swer::exit_code_for(e);
  }
}
