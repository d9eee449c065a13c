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
#include "swer/annotator.hpp"

#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <regex>
#include <sstream>

#include "json.hpp"
#include "swer/errors.hpp"
#include "swer/parallel.hpp"
#include "swer/prompts.hpp"

namespace swer {

using json = nlohmann::json;

namespace {

const std::set<std::string>& default_fillers() {
  static const std::set<std::string> words = {"uh",  "um", "uhm", "umm", "uh-huh", "ah", "er",
                                              "erm", "hmm", "hm", "mhm", "mm",     "eh"};
  return words;
}

const std::set<std::string>& default_grammatical() {
  static const std::set<std::string> words = {
      // articles and determiners
      "a", "an", "the", "this", "that", "these", "those", "some", "any", "each", "every",
      // prepositions
      "of", "in", "on", "at", "to", "for", "from", "with", "by", "about", "into", "onto",
      "over", "under", "between", "through", "during", "after", "before", "without", "within",
      "across", "against", "among", "around", "behind", "below", "above", "beyond", "via",
      "per", "than", "up", "down", "off", "out",
      // conjunctions
      "and", "or", "but", "nor", "so", "yet", "if", "because", "although", "though", "while",
      "whereas", "whether", "since", "unless", "until", "as",
      // auxiliaries and modals
      "be", "am", "is", "are", "was", "were", "been", "being", "do", "does", "did", "have",
      "has", "had", "having", "will", "would", "shall", "should", "can", "could", "may",
      "might", "must",
      // pronouns and particles
      "i", "you", "he", "she", "it", "we", "they", "me", "him", "her", "us", "them", "my",
      "your", "his", "its", "our", "their", "which", "who", "whom", "whose", "what", "there",
      "here", "not", "also", "just", "very"};
  return words;
}

const std::set<std::string>& number_words() {
  static const std::set<std::string> words = {
      "zero",     "one",     "two",      "three",    "four",     "five",      "six",
      "seven",    "eight",   "nine",     "ten",      "eleven",   "twelve",    "thirteen",
      "fourteen", "fifteen", "sixteen",  "seventeen", "eighteen", "nineteen", "twenty",
      "thirty",   "forty",   "fifty",    "sixty",    "seventy",  "eighty",    "ninety",
      "hundred",  "hundreds", "thousand", "thousands", "million", "millions",  "billion",
      "billions", "trillion", "percent", "percentage", "dozen",   "dozens",    "half",
      "twice",    "thrice"};
  return words;
}

std::string ascii_lower(std::string_view text) {
  std::string out(text);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

bool ascii_punct(char c) {
  return c > 0 && c < 0x7f && !std::isalnum(static_cast<unsigned char>(c)) && c != ' ';
}

// Surface with leading/trailing ASCII punctuation removed; '%' survives.
std::string trim_punct(std::string_view surface) {
  std::size_t b = 0;
  std::size_t e = surface.size();
  while (b < e && ascii_punct(surface[b]) && surface[b] != '%' && surface[b] != '-' &&
         surface[b] != '+')
    ++b;
  while (e > b && ascii_punct(surface[e - 1]) && surface[e - 1] != '%') --e;
  return std::string(surface.substr(b, e - b));
}

bool is_numeric(std::string_view surface) {
  static const std::regex digits(R"(^[-+]?[$€£]?\d+([.,:/]\d+)*(%|st|nd|rd|th|s|k|m|b|x)?$)");
  const std::string word = ascii_lower(trim_punct(surface));
  if (word.empty()) return false;
  if (std::regex_match(word, digits)) return true;
  // "twenty-five", "thirty"
  std::size_t start = 0;
  bool any = false;
  while (start <= word.size()) {
    const std::size_t dash = word.find('-', start);
    const std::string part =
        word.substr(start, dash == std::string::npos ? std::string::npos : dash - start);
    if (part.empty() || !number_words().contains(part)) return false;
    any = true;
    if (dash == std::string::npos) break;
    start = dash + 1;
  }
  return any;
}

bool starts_uppercase(std::string_view surface) {
  const std::string word = trim_punct(surface);
  if (word.empty()) return false;
  std::int32_t i = 0;
  UChar32 c = 0;
  U8_NEXT(word.data(), i, static_cast<std::int32_t>(word.size()), c);
  return c >= 0 && u_isupper(c);
}

bool ends_sentence(std::string_view surface) {
  std::size_t e = surface.size();
  while (e > 0 && (surface[e - 1] == '"' || surface[e - 1] == '\'' || surface[e - 1] == ')'))
    --e;
  if (e == 0) return false;
  const char c = surface[e - 1];
  return c == '.' || c == '!' || c == '?';
}

// Normalized lexicon phrases, split into token sequences.
std::vector<std::vector<std::string>> phrase_list(const std::set<std::string>& entries,
                                                  const NormalizationProfile& profile) {
  std::vector<std::vector<std::string>> out;
  for (const std::string& entry : entries) {
    std::vector<std::string> words;
    for (const Token& t : tokenize(entry, profile)) {
      if (!t.normalized.empty()) words.push_back(t.normalized);
    }
    if (!words.empty()) out.push_back(std::move(words));
  }
  return out;
}

std::set<std::string> normalized_set(const std::set<std::string>& entries,
                                     const NormalizationProfile& profile) {
  std::set<std::string> out;
  for (const auto& words : phrase_list(entries, profile)) {
    std::string joined;
    for (const auto& w : words) joined += (joined.empty() ? "" : " ") + w;
    out.insert(joined);
  }
  return out;
}

// Per-token facts about one side of an alignment.
struct SideFacts {
  std::vector<bool> term;
  std::vector<bool> entity;
  std::vector<bool> repetition;
  std::vector<bool> sentence_initial;
};

void mark_phrases(std::span<const Token> tokens, const std::vector<std::size_t>& index,
                  const std::vector<std::vector<std::string>>& phrases, std::vector<bool>& out) {
  for (const auto& phrase : phrases) {
    if (phrase.size() > index.size()) continue;
    for (std::size_t s = 0; s + phrase.size() <= index.size(); ++s) {
      bool hit = true;
      for (std::size_t k = 0; k < phrase.size() && hit; ++k) {
        hit = tokens[index[s + k]].normalized == phrase[k];
      }
      if (!hit) continue;
      for (std::size_t k = 0; k < phrase.size(); ++k) out[index[s + k]] = true;
    }
  }
}

SideFacts side_facts(std::span<const Token> tokens,
                     const std::vector<std::vector<std::string>>& terms,
                     const std::vector<std::vector<std::string>>& gazetteer,
                     const std::set<std::string>& fillers) {
  const std::size_t n = tokens.size();
  SideFacts facts{std::vector<bool>(n), std::vector<bool>(n), std::vector<bool>(n),
                  std::vector<bool>(n)};
  std::vector<std::size_t> content;  // tokens with a non-empty normalized form
  std::vector<std::size_t> spoken;   // content minus fillers
  for (std::size_t i = 0; i < n; ++i) {
    facts.sentence_initial[i] = i == 0 || ends_sentence(tokens[i - 1].surface);
    if (tokens[i].normalized.empty()) continue;
    content.push_back(i);
    if (!fillers.contains(tokens[i].normalized)) spoken.push_back(i);
  }
  mark_phrases(tokens, content, terms, facts.term);
  mark_phrases(tokens, content, gazetteer, facts.entity);
  // An n-gram (n <= 3) immediately repeated, ignoring fillers in between.
  for (std::size_t len = 1; len <= 3; ++len) {
    for (std::size_t s = 0; s + 2 * len <= spoken.size(); ++s) {
      bool repeated = true;
      for (std::size_t k = 0; k < len && repeated; ++k) {
        repeated = tokens[spoken[s + k]].normalized == tokens[spoken[s + len + k]].normalized;
      }
      if (!repeated) continue;
      for (std::size_t k = 0; k < 2 * len; ++k) facts.repetition[spoken[s + k]] = true;
    }
  }
  return facts;
}

std::string normalized_concat(std::span<const Token> tokens, TokenRange range) {
  std::string out;
  for (std::size_t i = range.begin; i < range.end; ++i) out += tokens[i].normalized;
  return out;
}

}  // namespace

RuleLexicons RuleLexicons::defaults() {
  RuleLexicons lex;
  lex.fillers = default_fillers();
  lex.grammatical = default_grammatical();
  return lex;
}

RuleLexicons RuleLexicons::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open lexicon file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError("lexicon file " + path.string() + ": " + e.what());
  }
  if (!doc.is_object()) throw InputError("lexicon file " + path.string() + ": expected object");
  RuleLexicons lex = defaults();
  auto read = [&](const char* key, std::set<std::string>& into) {
    if (!doc.contains(key)) return;
    const json& list = doc[key];
    if (!list.is_array()) throw InputError(std::string("lexicon '") + key + "' must be an array");
    into.clear();
    for (const json& item : list) {
      if (!item.is_string()) {
        throw InputError(std::string("lexicon '") + key + "' must contain strings");
      }
      into.insert(item.get<std::string>());
    }
  };
  read("fillers", lex.fillers);
  read("grammatical", lex.grammatical);
  read("terminology", lex.terminology);
  read("gazetteer", lex.gazetteer);
  return lex;
}

std::vector<std::string> RuleLexicons::overlap_warnings(
    const NormalizationProfile& profile) const {
  const std::array<std::pair<const char*, std::set<std::string>>, 4> lists = {{
      {"fillers", normalized_set(fillers, profile)},
      {"grammatical", normalized_set(grammatical, profile)},
      {"terminology", normalized_set(terminology, profile)},
      {"gazetteer", normalized_set(gazetteer, profile)},
  }};
  std::vector<std::string> out;
  for (std::size_t a = 0; a < lists.size(); ++a) {
    for (std::size_t b = a + 1; b < lists.size(); ++b) {
      for (const std::string& word : lists[a].second) {
        if (lists[b].second.contains(word)) {
          out.push_back("'" + word + "' appears in both " + lists[a].first + " and " +
                        lists[b].first);
        }
      }
    }
  }
  return out;
}

std::vector<AnnotatedMismatch> annotate_rules(std::span<const Mismatch> mismatches,
                                              std::span<const Token> ref,
                                              std::span<const Token> hyp,
                                              const RuleLexicons& lexicons,
                                              const NormalizationProfile& profile) {
  // Lexicon and token forms must agree, so tokens are re-normalized under
  // `profile` here rather than trusting whatever profile built them.
  auto renormalize = [&](std::span<const Token> tokens) {
    std::vector<Token> out(tokens.begin(), tokens.end());
    for (Token& t : out) t.normalized = normalize(t.surface, profile);
    return out;
  };
  const std::vector<Token> r = renormalize(ref);
  const std::vector<Token> h = renormalize(hyp);

  const auto terms = phrase_list(lexicons.terminology, profile);
  const auto gazetteer = phrase_list(lexicons.gazetteer, profile);
  const std::set<std::string> fillers = normalized_set(lexicons.fillers, profile);
  const std::set<std::string> grammatical = normalized_set(lexicons.grammatical, profile);
  const SideFacts rf = side_facts(r, terms, gazetteer, fillers);
  const SideFacts hf = side_facts(h, terms, gazetteer, fillers);

  // Group-level normalization equality catches split/merged words such as
  // "fine tuning" -> "finetuning".
  std::map<int, std::pair<std::string, std::string>> group_text;
  for (const Mismatch& m : mismatches) {
    if (m.op.ref_span.end > r.size() || m.op.hyp_span.end > h.size()) {
      throw ConsistencyError("mismatch op " + std::to_string(m.op_index) +
                             " does not fit the given token lists");
    }
    auto& [rt, ht] = group_text[m.group_id];
    rt += normalized_concat(r, m.op.ref_span);
    ht += normalized_concat(h, m.op.hyp_span);
  }

  std::vector<AnnotatedMismatch> out;
  out.reserve(mismatches.size());
  for (const Mismatch& m : mismatches) {
    const bool insertion = m.op.kind == OpKind::kInsertion;
    const std::span<const Token> side = insertion ? std::span<const Token>(h) : r;
    const SideFacts& facts = insertion ? hf : rf;
    const std::size_t idx = insertion ? m.op.hyp_span.begin : m.op.ref_span.begin;
    const Token& token = side[idx];

    ContentType type = ContentType::kGen;
    if (is_numeric(token.surface)) {
      type = ContentType::kNum;
    } else if (facts.term[idx]) {
      type = ContentType::kTerm;
    } else if (facts.entity[idx] ||
               (starts_uppercase(token.surface) && !facts.sentence_initial[idx] &&
                !grammatical.contains(token.normalized) && !fillers.contains(token.normalized))) {
      type = ContentType::kNe;
    } else if (fillers.contains(token.normalized) || facts.repetition[idx]) {
      type = ContentType::kDisf;
    } else if (grammatical.contains(token.normalized)) {
      type = ContentType::kGram;
    }

    const auto& [group_ref, group_hyp] = group_text.at(m.group_id);
    const bool equal_pair =
        (m.op.kind == OpKind::kSubstitution &&
         r[m.op.ref_span.begin].normalized == h[m.op.hyp_span.begin].normalized) ||
        group_ref == group_hyp;

    Severity severity = Severity::kMinor;
    if (equal_pair) {
      severity = Severity::kOk;
    } else if (type == ContentType::kDisf && m.op.kind != OpKind::kSubstitution) {
      severity = Severity::kOk;
    } else if (insertion) {
      severity = Severity::kMinor;
    } else if (type == ContentType::kTerm || type == ContentType::kNum ||
               type == ContentType::kNe) {
      severity = Severity::kCritical;
    }
    out.push_back(AnnotatedMismatch{m, type, severity, AnnotatorSource::kRules, "", "",
                                    insertion});
  }
  return out;
}

AnnotationRequest build_annotation_request(std::string video_id, std::string scene_id,
                                           const EditScript& script, std::span<const Token> ref,
                                           std::span<const Token> hyp) {
  AnnotationRequest request;
  request.video_id = std::move(video_id);
  request.scene_id = std::move(scene_id);
  request.mismatches = extract_mismatches(script, ref, hyp);
  const Highlight highlight = render_highlight(script, ref, hyp);
  request.highlighted_ref = highlight.ref;
  request.highlighted_hyp = highlight.hyp;
  for (const Mismatch& m : request.mismatches) {
    if (request.groups.empty() || request.groups.back().group_id != m.group_id) {
      request.groups.push_back(MismatchGroup{m.group_id, "", "", ""});
    }
    MismatchGroup& g = request.groups.back();
    auto append = [](std::string& into, const std::string& piece) {
      if (piece.empty()) return;
      if (!into.empty()) into += ' ';
      into += piece;
    };
    append(g.kinds, std::string(1, op_letter(m.op.kind)));
    append(g.ref_text, m.ref_text);
    append(g.hyp_text, m.hyp_text);
  }
  return request;
}

const std::string& default_guideline() {
  static const std::string text(prompts::annotation_guideline());
  return text;
}

std::string format_annotation_request(const AnnotationRequest& request) {
  std::ostringstream out;
  out << "Reference:\n" << request.highlighted_ref << "\n\n";
  out << "Recognized:\n" << request.highlighted_hyp << "\n\n";
  out << "Mismatch groups:\n";
  for (const MismatchGroup& g : request.groups) {
    out << g.group_id << " [" << g.kinds << "] ref=" << json(g.ref_text).dump()
        << " hyp=" << json(g.hyp_text).dump() << "\n";
  }
  return out.str();
}

std::map<int, GroupLabel> parse_label_reply(std::string_view reply,
                                            const AnnotationRequest& request) {
  static const std::regex line_re(R"(^(\d+)\s*:\s*([A-Z]+)\s*/\s*([A-Z]+)$)");
  const std::string raw(reply);
  std::set<int> expected;
  for (const MismatchGroup& g : request.groups) expected.insert(g.group_id);

  std::map<int, GroupLabel> labels;
  std::istringstream lines(raw);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    const auto e = line.find_last_not_of(" \t\r");
    const std::string text = line.substr(b, e - b + 1);
    if (text.starts_with("```")) continue;
    std::smatch match;
    if (!std::regex_match(text, match, line_re)) {
      throw AnnotationError("reply line " + std::to_string(line_no) +
                                " is not '<group>: <TYPE>/<SEV>': " + text,
                            raw);
    }
    const int id = std::stoi(match[1].str());
    const auto type = parse_content_type(match[2].str());
    const auto severity = parse_severity(match[3].str());
    if (!type) throw AnnotationError("unknown content type '" + match[2].str() + "'", raw);
    if (!severity) throw AnnotationError("unknown severity '" + match[3].str() + "'", raw);
    if (!expected.contains(id)) {
      throw AnnotationError("reply labels unknown group " + std::to_string(id), raw);
    }
    if (!labels.emplace(id, GroupLabel{*type, *severity}).second) {
      throw AnnotationError("reply labels group " + std::to_string(id) + " twice", raw);
    }
  }
  if (labels.size() != expected.size()) {
    std::string missing;
    for (int id : expected) {
      if (!labels.contains(id)) missing += (missing.empty() ? "" : ", ") + std::to_string(id);
    }
    throw AnnotationError("reply has " + std::to_string(labels.size()) + " labels for " +
                              std::to_string(expected.size()) + " groups; missing " + missing,
                          raw);
  }
  return labels;
}

std::vector<AnnotatedMismatch> annotate_llm(const AnnotationRequest& request, ChatClient& client,
                                            std::string_view guideline,
                                            const LlmAnnotatorOptions& options) {
  if (request.mismatches.empty()) return {};
  const std::string user = format_annotation_request(request);
  const int attempts = std::max(1, options.parse_attempts);
  std::map<int, GroupLabel> labels;
  std::string message = user;
  for (int attempt = 1;; ++attempt) {
    const std::string reply = client.complete_text(guideline, message);
    try {
      labels = parse_label_reply(reply, request);
      break;
    } catch (const AnnotationError& e) {
      if (attempt >= attempts) throw;
      message = user + "\nYour previous reply could not be used (" + e.what() +
                "). Answer again with exactly one '<group>: <TYPE>/<SEV>' line per group.\n";
    }
  }
  std::vector<AnnotatedMismatch> out;
  out.reserve(request.mismatches.size());
  for (const Mismatch& m : request.mismatches) {
    const GroupLabel& label = labels.at(m.group_id);
    out.push_back(AnnotatedMismatch{m, label.content_type, label.severity, AnnotatorSource::kLlm,
                                    request.video_id, request.scene_id,
                                    m.op.kind == OpKind::kInsertion});
  }
  return out;
}

std::vector<std::vector<AnnotatedMismatch>> annotate_llm_batch(
    std::span<const AnnotationRequest> requests, ChatClient& client, std::string_view guideline,
    const LlmAnnotatorOptions& options) {
  std::vector<std::vector<AnnotatedMismatch>> out(requests.size());
  parallel_for(requests.size(), options.max_parallel, [&](std::size_t i) {
    out[i] = annotate_llm(requests[i], client, guideline, options);
  });
  return out;
}

std::vector<AnnotatedMismatch> validate_annotations(std::vector<AnnotatedMismatch> annotated,
                                                    const EditScript& script) {
  // Expected group id per op index; 0 for matches.
  std::vector<int> group_of(script.ops.size(), 0);
  {
    int group = 0;
    bool in_run = false;
    for (std::size_t k = 0; k < script.ops.size(); ++k) {
      if (script.ops[k].kind == OpKind::kMatch) {
        in_run = false;
        continue;
      }
      if (!in_run) ++group;
      in_run = true;
      group_of[k] = group;
    }
  }

  std::set<int> bad;
  std::vector<std::string> problems;
  auto fail = [&](int group, std::string what) {
    bad.insert(group);
    if (problems.size() < 8) problems.push_back(std::move(what));
  };

  std::vector<int> seen(script.ops.size(), 0);
  std::map<int, std::pair<ContentType, Severity>> llm_label;
  for (const AnnotatedMismatch& a : annotated) {
    const Mismatch& m = a.mismatch;
    const int gid = m.group_id;
    if (m.op_index >= script.ops.size()) {
      fail(gid, "group " + std::to_string(gid) + ": op index " + std::to_string(m.op_index) +
                    " outside the script");
      continue;
    }
    const EditOp& op = script.ops[m.op_index];
    if (op.kind == OpKind::kMatch) {
      fail(gid, "group " + std::to_string(gid) + ": op " + std::to_string(m.op_index) +
                    " is a match");
      continue;
    }
    if (op.kind != m.op.kind) {
      fail(gid, "group " + std::to_string(gid) + ": op " + std::to_string(m.op_index) +
                    " kind differs from the script");
    }
    if (gid != group_of[m.op_index]) {
      fail(gid, "op " + std::to_string(m.op_index) + " claims group " + std::to_string(gid) +
                    ", script has group " + std::to_string(group_of[m.op_index]));
    }
    if (++seen[m.op_index] == 2) {
      fail(gid, "group " + std::to_string(gid) + ": op " + std::to_string(m.op_index) +
                    " annotated more than once");
    }
    if (index_of(a.content_type) >= kContentTypeCount ||
        static_cast<std::size_t>(severity_value(a.severity)) >= kSeverityCount) {
      fail(gid, "group " + std::to_string(gid) + ": label out of range");
    }
    if (a.annotator == AnnotatorSource::kLlm) {
      const auto [it, inserted] = llm_label.emplace(gid, std::pair{a.content_type, a.severity});
      if (!inserted && it->second != std::pair{a.content_type, a.severity}) {
        fail(gid, "group " + std::to_string(gid) + ": conflicting labels within the group");
      }
    }
  }
  for (std::size_t k = 0; k < script.ops.size(); ++k) {
    if (script.ops[k].kind != OpKind::kMatch && seen[k] == 0) {
      fail(group_of[k], "group " + std::to_string(group_of[k]) + ": op " + std::to_string(k) +
                            " not annotated");
    }
  }
  if (!bad.empty()) {
    std::string what = "annotation validation failed:";
    for (const auto& p : problems) what += "\n  " + p;
    throw ValidationError(what, std::vector<int>(bad.begin(), bad.end()));
  }
  std::stable_sort(annotated.begin(), annotated.end(),
                   [](const AnnotatedMismatch& a, const AnnotatedMismatch& b) {
                     return a.mismatch.op_index < b.mismatch.op_index;
                   });
  return annotated;
}

void write_annotations(std::ostream& out, std::span<const AnnotatedMismatch> annotated) {
  for (const AnnotatedMismatch& a : annotated) {
    json record;
    record["video_id"] = a.video_id;
    record["scene_id"] = a.scene_id;
    record["group_id"] = a.mismatch.group_id;
    record["op_index"] = a.mismatch.op_index;
    record["op_kind"] = std::string(1, op_letter(a.mismatch.op.kind));
    record["ref_text"] = a.mismatch.ref_text;
    record["hyp_text"] = a.mismatch.hyp_text;
    record["content_type"] = std::string(to_string(a.content_type));
    record["severity"] = std::string(to_string(a.severity));
    record["annotator"] = std::string(to_string(a.annotator));
    record["ref_span"] = {a.mismatch.op.ref_span.begin, a.mismatch.op.ref_span.end};
    record["hyp_span"] = {a.mismatch.op.hyp_span.begin, a.mismatch.op.hyp_span.end};
    record["position"] = a.mismatch.op.position;
    if (a.typed_by_hypothesis) record["typed_by_hypothesis"] = true;
    out << record.dump() << '\n';
  }
}

std::vector<AnnotatedMismatch> read_annotations(std::istream& in) {
  std::vector<AnnotatedMismatch> out;
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
    auto field = [&](const char* key) -> const json& {
      if (!r.is_object() || !r.contains(key)) {
        throw ParseError(std::string("missing field '") + key + "'", line_no, 1);
      }
      return r[key];
    };
    auto text = [&](const char* key) {
      const json& v = field(key);
      if (v.is_string()) return v.get<std::string>();
      if (v.is_number_integer()) return std::to_string(v.get<long long>());
      throw ParseError(std::string("field '") + key + "' must be a string", line_no, 1);
    };
    auto count = [&](const char* key) {
      const json& v = field(key);
      if (!v.is_number_unsigned()) {
        throw ParseError(std::string("field '") + key + "' must be a non-negative integer",
                         line_no, 1);
      }
      return v.get<std::size_t>();
    };
    AnnotatedMismatch a;
    a.video_id = text("video_id");
    a.scene_id = text("scene_id");
    a.mismatch.group_id = static_cast<int>(count("group_id"));
    a.mismatch.op_index = count("op_index");
    try {
      a.mismatch.op.kind = parse_op_kind(text("op_kind"));
    } catch (const InputError& e) {
      throw ParseError(e.what(), line_no, 1);
    }
    a.mismatch.ref_text = text("ref_text");
    a.mismatch.hyp_text = text("hyp_text");
    const auto type = parse_content_type(text("content_type"));
    const auto severity = parse_severity(text("severity"));
    const auto source = parse_annotator_source(text("annotator"));
    if (!type) throw ParseError("unknown content type", line_no, 1);
    if (!severity) throw ParseError("unknown severity", line_no, 1);
    if (!source) throw ParseError("unknown annotator", line_no, 1);
    a.content_type = *type;
    a.severity = *severity;
    a.annotator = *source;
    auto span = [&](const char* key, TokenRange& into) {
      if (!r.contains(key)) return;
      const json& v = r[key];
      if (!v.is_array() || v.size() != 2 || !v[0].is_number_unsigned() ||
          !v[1].is_number_unsigned() || v[0].get<std::size_t>() > v[1].get<std::size_t>()) {
        throw ParseError(std::string("field '") + key + "' must be [begin, end]", line_no, 1);
      }
      into = {v[0].get<std::size_t>(), v[1].get<std::size_t>()};
    };
    span("ref_span", a.mismatch.op.ref_span);
    span("hyp_span", a.mismatch.op.hyp_span);
    if (r.contains("position")) a.mismatch.op.position = count("position");
    if (r.contains("typed_by_hypothesis")) {
      if (!r["typed_by_hypothesis"].is_boolean()) {
        throw ParseError("field 'typed_by_hypothesis' must be boolean", line_no, 1);
      }
      a.typed_by_hypothesis = r["typed_by_hypothesis"].get<bool>();
    }
    out.push_back(std::move(a));
  }
  return out;
}

std::vector<AnnotatedMismatch> read_annotations(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open annotation file " + path.string());
  return read_annotations(in);
}

}  // namespace swer
