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
#include "swer/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"
#include "swer/errors.hpp"

namespace swer {

using json = nlohmann::json;

std::string_view to_string(Verdict verdict) noexcept {
  switch (verdict) {
    case Verdict::kWin: return "win";
    case Verdict::kTie: return "tie";
    case Verdict::kLose: return "lose";
  }
  return "?";
}

std::optional<Verdict> parse_verdict(std::string_view text) noexcept {
  if (text == "win") return Verdict::kWin;
  if (text == "tie") return Verdict::kTie;
  if (text == "lose") return Verdict::kLose;
  return std::nullopt;
}

std::vector<HumanVote> read_votes(std::istream& in) {
  std::vector<HumanVote> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json r;
    try {
      r = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(std::string("invalid JSON: ") + e.what(), line_no, 1);
    }
    auto text = [&](const char* key, bool required = true) -> std::string {
      if (!r.is_object() || !r.contains(key)) {
        if (!required) return "";
        throw ParseError(std::string("missing field '") + key + "'", line_no, 1);
      }
      if (r[key].is_string()) return r[key].get<std::string>();
      if (r[key].is_number_integer()) return std::to_string(r[key].get<long long>());
      throw ParseError(std::string("field '") + key + "' must be a string", line_no, 1);
    };
    HumanVote v;
    v.video_id = text("video_id");
    v.scene_id = text("scene_id");
    v.system_a = text("system_a");
    v.system_b = text("system_b");
    v.annotator_group = text("annotator_group", false);
    const std::string verdict = text("verdict");
    const auto parsed = parse_verdict(verdict);
    if (!parsed) throw ParseError("unknown verdict '" + verdict + "'", line_no, 1);
    v.verdict = *parsed;
    if (v.system_a == v.system_b) {
      throw ParseError("vote compares '" + v.system_a + "' with itself", line_no, 1);
    }
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<HumanVote> read_votes(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open vote file " + path.string());
  return read_votes(in);
}

VoteRatio tally_votes(std::span<const HumanVote> votes, const std::string& a,
                      const std::string& b) {
  std::size_t win = 0, tie = 0, lose = 0;
  for (const HumanVote& v : votes) {
    Verdict verdict;
    if (v.system_a == a && v.system_b == b) {
      verdict = v.verdict;
    } else if (v.system_a == b && v.system_b == a) {
      verdict = v.verdict == Verdict::kWin    ? Verdict::kLose
                : v.verdict == Verdict::kLose ? Verdict::kWin
                                              : Verdict::kTie;
    } else {
      continue;
    }
    (verdict == Verdict::kWin ? win : verdict == Verdict::kTie ? tie : lose) += 1;
  }
  const std::size_t n = win + tie + lose;
  if (n == 0) throw PreconditionError("no votes compare '" + a + "' with '" + b + "'");
  const double total = static_cast<double>(n);
  return VoteRatio{a, b, n, 100.0 * static_cast<double>(win) / total,
                   100.0 * static_cast<double>(tie) / total,
                   100.0 * static_cast<double>(lose) / total};
}

std::vector<VoteRatio> tally_all_pairs(std::span<const HumanVote> votes) {
  std::set<std::pair<std::string, std::string>> pairs;
  for (const HumanVote& v : votes) pairs.insert(std::minmax(v.system_a, v.system_b));
  std::vector<VoteRatio> out;
  for (const auto& [a, b] : pairs) out.push_back(tally_votes(votes, a, b));
  return out;
}

ReportBundle make_bundle(std::vector<EvalReport> per_video, std::string aggregate_label,
                         std::optional<std::size_t> baseline_total) {
  ReportBundle bundle;
  bundle.aggregate = merge_reports(std::move(aggregate_label), per_video, baseline_total);
  bundle.per_video = std::move(per_video);
  return bundle;
}

void check_bundle(const ReportBundle& bundle) {
  for (const EvalReport& r : bundle.per_video) r.check_identities();
  bundle.aggregate.check_identities();
  if (!bundle.per_video.empty()) {
    std::size_t n = 0, k = 0;
    for (const EvalReport& r : bundle.per_video) {
      n += r.ref_len;
      k += r.mismatches;
    }
    if (n != bundle.aggregate.ref_len) {
      throw ConsistencyError("aggregate N differs from the sum over videos");
    }
    if (k != bundle.aggregate.mismatches) {
      throw ConsistencyError("aggregate K differs from the sum over videos");
    }
  }
  for (const VoteRatio& v : bundle.votes) {
    if (std::abs(v.win + v.tie + v.lose - 100.0) > 0.02) {
      throw ConsistencyError("vote ratios for '" + v.system_a + "' vs '" + v.system_b +
                             "' do not sum to 100");
    }
  }
}

ReportFormat parse_report_format(std::string_view text) {
  if (text == "table") return ReportFormat::kTable;
  if (text == "structured" || text == "json") return ReportFormat::kStructured;
  throw ConfigError("unknown report format '" + std::string(text) +
                    "' (expected table or structured)");
}

namespace {

json severity_json(const auto& values) {
  json out = json::object();
  for (Severity s : kAllSeverities) out[std::string(long_name(s))] = values[severity_value(s)];
  return out;
}

template <typename T>
void severity_from_json(const json& doc, std::array<T, kSeverityCount>& into) {
  for (Severity s : kAllSeverities) into[severity_value(s)] = doc.at(std::string(long_name(s))).get<T>();
}

json to_json(const EvalReport& r) {
  json doc;
  doc["label"] = r.label;
  doc["ref_len"] = r.ref_len;
  doc["mismatches"] = r.mismatches;
  doc["ops"] = {{"insertions", r.ops.insertions},
                {"omissions", r.ops.omissions},
                {"substitutions", r.ops.substitutions}};
  doc["wer"] = r.wer;
  doc["swer"] = r.swer;
  doc["weighted_total"] = r.weighted_total.to_string();
  doc["weighted_total_units"] = r.weighted_total.units();
  doc["term_recall"] = r.term_recall ? json(*r.term_recall) : json(nullptr);
  doc["terms_matched"] = r.terms_matched;
  doc["terms_total"] = r.terms_total;
  json scores = json::object();
  for (ContentType t : kAllContentTypes) {
    const ContentScore& s = r.content_scores[index_of(t)];
    scores[std::string(to_string(t))] = {{"weighted", s.weighted.to_string()},
                                         {"weighted_units", s.weighted.units()},
                                         {"unweighted", s.unweighted}};
  }
  doc["content_scores"] = scores;
  doc["severity_counts"] = severity_json(r.severity_counts);
  doc["severity_percentages"] = severity_json(r.severity_percentages);
  doc["baseline_total"] = r.baseline_total ? json(*r.baseline_total) : json(nullptr);
  doc["weights"] = r.weights_name;
  return doc;
}

EvalReport from_json(const json& doc) {
  EvalReport r;
  r.label = doc.at("label").get<std::string>();
  r.ref_len = doc.at("ref_len").get<std::size_t>();
  r.mismatches = doc.at("mismatches").get<std::size_t>();
  const json& ops = doc.at("ops");
  r.ops = {ops.at("insertions").get<std::size_t>(), ops.at("omissions").get<std::size_t>(),
           ops.at("substitutions").get<std::size_t>()};
  r.wer = doc.at("wer").get<double>();
  r.swer = doc.at("swer").get<double>();
  r.weighted_total = WeightedScore::from_units(doc.at("weighted_total_units").get<std::int64_t>());
  if (!doc.at("term_recall").is_null()) r.term_recall = doc.at("term_recall").get<double>();
  r.terms_matched = doc.at("terms_matched").get<std::size_t>();
  r.terms_total = doc.at("terms_total").get<std::size_t>();
  const json& scores = doc.at("content_scores");
  for (ContentType t : kAllContentTypes) {
    const json& s = scores.at(std::string(to_string(t)));
    r.content_scores[index_of(t)] = {
        WeightedScore::from_units(s.at("weighted_units").get<std::int64_t>()),
        s.at("unweighted").get<std::size_t>()};
  }
  severity_from_json(doc.at("severity_counts"), r.severity_counts);
  severity_from_json(doc.at("severity_percentages"), r.severity_percentages);
  if (!doc.at("baseline_total").is_null()) {
    r.baseline_total = doc.at("baseline_total").get<std::size_t>();
  }
  r.weights_name = doc.at("weights").get<std::string>();
  return r;
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::string fixed(double value, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, value);
  return buf;
}

std::string weighted_cell(WeightedScore s) {
  std::string text = s.to_string();
  if (text.find('.') == std::string::npos) text += ".0";
  return text;
}

// Left-aligned first column, right-aligned rest.
std::string render_table(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& row : rows) {
    if (width.size() < row.size()) width.resize(row.size(), 0);
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  }
  std::string out;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::string line;
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      const std::string& cell = rows[r][c];
      const std::string pad(width[c] - cell.size(), ' ');
      if (c > 0) line += "  ";
      line += c == 0 ? cell + pad : pad + cell;
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line + "\n";
    if (r == 0) {
      std::size_t total = 0;
      for (std::size_t c = 0; c < width.size(); ++c) total += width[c] + (c > 0 ? 2 : 0);
      out += std::string(total, '-') + "\n";
    }
  }
  return out;
}

std::string render_tables(const ReportBundle& bundle) {
  std::vector<const EvalReport*> rows;
  for (const EvalReport& r : bundle.per_video) rows.push_back(&r);
  rows.push_back(&bundle.aggregate);

  std::vector<std::vector<std::string>> scores = {{"Setting"}};
  for (ContentType t : kAllContentTypes) scores[0].emplace_back(to_string(t));
  for (const char* h : {"WER", "SWER", "Term-Recall"}) scores[0].emplace_back(h);
  for (const EvalReport* r : rows) {
    std::vector<std::string> row = {r->label};
    for (ContentType t : kAllContentTypes) {
      const ContentScore& s = r->content_scores[index_of(t)];
      row.push_back(weighted_cell(s.weighted) + "/" + std::to_string(s.unweighted));
    }
    row.push_back(fixed(100.0 * r->wer, 2));
    row.push_back(fixed(100.0 * r->swer, 2));
    row.push_back(r->term_recall ? fixed(*r->term_recall, 2) : "-");
    scores.push_back(std::move(row));
  }

  std::vector<std::vector<std::string>> severity = {
      {"Setting", "CRITICAL", "MINOR", "OK", "Denominator"}};
  for (const EvalReport* r : rows) {
    std::vector<std::string> row = {r->label};
    for (Severity s : kAllSeverities) {
      row.push_back(fixed(r->severity_percentages[severity_value(s)], 2));
    }
    row.push_back(r->baseline_total ? std::to_string(*r->baseline_total) + " (baseline)"
                                    : std::to_string(r->mismatches));
    severity.push_back(std::move(row));
  }

  std::string out = "Content-wise severity score (weighted/unweighted), weights: " +
                    bundle.aggregate.weights_name + "\n\n" + render_table(scores) +
                    "\nSeverity distribution (%)\n\n" + render_table(severity);
  if (!bundle.correlations.empty()) {
    std::vector<std::vector<std::string>> corr = {{"Correlation", "n", "Pearson", "Spearman"}};
    for (const CorrelationEntry& c : bundle.correlations) {
      corr.push_back({c.name, std::to_string(c.points), c.pearson ? fixed(*c.pearson, 3) : "-",
                      c.spearman ? fixed(*c.spearman, 3) : "-"});
    }
    out += "\n" + render_table(corr);
  }
  if (!bundle.votes.empty()) {
    std::vector<std::vector<std::string>> votes = {{"Pair", "Votes", "Win", "Tie", "Lose"}};
    for (const VoteRatio& v : bundle.votes) {
      votes.push_back({v.system_a + " vs " + v.system_b, std::to_string(v.votes),
                       fixed(v.win, 2), fixed(v.tie, 2), fixed(v.lose, 2)});
    }
    out += "\n" + render_table(votes);
  }
  return out;
}

}  // namespace

std::string report_to_json(const EvalReport& report) { return to_json(report).dump(2) + "\n"; }

EvalReport report_from_json(std::string_view text) {
  try {
    EvalReport r = from_json(json::parse(text));
    r.check_identities();
    return r;
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed report: ") + e.what());
  }
}

std::string render_report(const ReportBundle& bundle, ReportFormat format) {
  check_bundle(bundle);
  if (format == ReportFormat::kTable) return render_tables(bundle);

  json doc;
  doc["per_video"] = json::array();
  for (const EvalReport& r : bundle.per_video) doc["per_video"].push_back(to_json(r));
  doc["aggregate"] = to_json(bundle.aggregate);
  doc["correlations"] = json::array();
  for (const CorrelationEntry& c : bundle.correlations) {
    doc["correlations"].push_back({{"name", c.name},
                                   {"points", c.points},
                                   {"pearson", optional_number(c.pearson)},
                                   {"spearman", optional_number(c.spearman)}});
  }
  doc["votes"] = json::array();
  for (const VoteRatio& v : bundle.votes) {
    doc["votes"].push_back({{"system_a", v.system_a},
                            {"system_b", v.system_b},
                            {"votes", v.votes},
                            {"win", v.win},
                            {"tie", v.tie},
                            {"lose", v.lose}});
  }
  return doc.dump(2) + "\n";
}

ReportBundle parse_report(std::string_view structured) {
  ReportBundle bundle;
  try {
    const json doc = json::parse(structured);
    for (const json& r : doc.at("per_video")) bundle.per_video.push_back(from_json(r));
    bundle.aggregate = from_json(doc.at("aggregate"));
    for (const json& c : doc.at("correlations")) {
      CorrelationEntry e{c.at("name").get<std::string>(), c.at("points").get<std::size_t>(), {}, {}};
      if (!c.at("pearson").is_null()) e.pearson = c.at("pearson").get<double>();
      if (!c.at("spearman").is_null()) e.spearman = c.at("spearman").get<double>();
      bundle.correlations.push_back(std::move(e));
    }
    for (const json& v : doc.at("votes")) {
      bundle.votes.push_back(VoteRatio{v.at("system_a").get<std::string>(),
                                       v.at("system_b").get<std::string>(),
                                       v.at("votes").get<std::size_t>(), v.at("win").get<double>(),
                                       v.at("tie").get<double>(), v.at("lose").get<double>()});
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed report: ") + e.what());
  }
  check_bundle(bundle);
  return bundle;
}

}  // namespace swer
