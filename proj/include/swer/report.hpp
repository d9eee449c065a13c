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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "swer/metrics.hpp"

namespace swer {

// Verdicts are from system_a's point of view.
enum class Verdict { kWin, kTie, kLose };
std::string_view to_string(Verdict verdict) noexcept;
std::optional<Verdict> parse_verdict(std::string_view text) noexcept;

struct HumanVote {
  std::string video_id;
  std::string scene_id;
  std::string system_a;
  std::string system_b;
  Verdict verdict = Verdict::kTie;
  std::string annotator_group;
};

// {"video_id", "scene_id", "system_a", "system_b", "verdict", "annotator_group"}
// per line. Throws ParseError on unknown verdicts or identical systems.
std::vector<HumanVote> read_votes(std::istream& in);
std::vector<HumanVote> read_votes(const std::filesystem::path& path);

struct VoteRatio {
  std::string system_a;
  std::string system_b;
  std::size_t votes = 0;
  double win = 0.0;  // percentages
  double tie = 0.0;
  double lose = 0.0;

  friend bool operator==(const VoteRatio&, const VoteRatio&) = default;
};

// Win/tie/lose percentages of `a` against `b`. Votes cast as (b, a) are
// flipped. Throws PreconditionError when no vote compares the pair.
VoteRatio tally_votes(std::span<const HumanVote> votes, const std::string& a,
                      const std::string& b);
// One ratio per unordered pair, systems in lexicographic order.
std::vector<VoteRatio> tally_all_pairs(std::span<const HumanVote> votes);

struct CorrelationEntry {
  std::string name;
  std::size_t points = 0;
  std::optional<double> pearson;
  std::optional<double> spearman;

  friend bool operator==(const CorrelationEntry&, const CorrelationEntry&) = default;
};

struct ReportBundle {
  std::vector<EvalReport> per_video;
  EvalReport aggregate;
  std::vector<CorrelationEntry> correlations;
  std::vector<VoteRatio> votes;

  friend bool operator==(const ReportBundle&, const ReportBundle&) = default;
};

ReportBundle make_bundle(std::vector<EvalReport> per_video, std::string aggregate_label,
                         std::optional<std::size_t> baseline_total = std::nullopt);

// Every report's identities, aggregate N and K against the per-video sums,
// and vote triples summing to 100. Throws ConsistencyError naming the
// first violation.
void check_bundle(const ReportBundle& bundle);

enum class ReportFormat { kTable, kStructured };
ReportFormat parse_report_format(std::string_view text);

// Refuses inconsistent bundles (see check_bundle).
std::string render_report(const ReportBundle& bundle, ReportFormat format);
// Inverse of the structured rendering; the result is checked.
ReportBundle parse_report(std::string_view structured);

// Single JSON object for one report, shared with the eval subcommand.
std::string report_to_json(const EvalReport& report);
EvalReport report_from_json(std::string_view text);

}  // namespace swer
