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

#include "swer/alignment.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>

#include "swer/errors.hpp"

namespace swer {

char op_letter(OpKind kind) noexcept {
  switch (kind) {
    case OpKind::kMatch: return 'M';
    case OpKind::kSubstitution: return 'S';
    case OpKind::kOmission: return 'O';
    case OpKind::kInsertion: return 'I';
  }
  return '?';
}

std::string_view op_name(OpKind kind) noexcept {
  switch (kind) {
    case OpKind::kMatch: return "match";
    case OpKind::kSubstitution: return "substitution";
    case OpKind::kOmission: return "omission";
    case OpKind::kInsertion: return "insertion";
  }
  return "unknown";
}

OpKind parse_op_kind(std::string_view text) {
  if (text == "M" || text == "match") return OpKind::kMatch;
  if (text == "S" || text == "substitution") return OpKind::kSubstitution;
  if (text == "O" || text == "omission") return OpKind::kOmission;
  if (text == "I" || text == "insertion") return OpKind::kInsertion;
  throw InputError("unknown op kind '" + std::string(text) + "'");
}

EditScript align(std::span<const Token> ref, std::span<const Token> hyp) {
  const std::size_t n = ref.size();
  const std::size_t m = hyp.size();
  const std::size_t width = m + 1;
  std::vector<std::uint32_t> cost((n + 1) * width);
  auto at = [&](std::size_t i, std::size_t j) -> std::uint32_t& { return cost[i * width + j]; };

  for (std::size_t j = 0; j <= m; ++j) at(0, j) = static_cast<std::uint32_t>(j);
  for (std::size_t i = 1; i <= n; ++i) {
    at(i, 0) = static_cast<std::uint32_t>(i);
    for (std::size_t j = 1; j <= m; ++j) {
      const std::uint32_t diagonal =
          at(i - 1, j - 1) + (ref[i - 1].surface == hyp[j - 1].surface ? 0u : 1u);
      at(i, j) = std::min({diagonal, at(i - 1, j) + 1, at(i, j - 1) + 1});
    }
  }

  EditScript script;
  script.ref_len = n;
  script.hyp_len = m;
  std::size_t i = n;
  std::size_t j = m;
  while (i > 0 || j > 0) {
    const std::uint32_t here = at(i, j);
    EditOp op;
    if (i > 0 && j > 0 && ref[i - 1].surface == hyp[j - 1].surface && here == at(i - 1, j - 1)) {
      op = {OpKind::kMatch, {i - 1, i}, {j - 1, j}, i - 1};
      --i, --j;
    } else if (i > 0 && j > 0 && here == at(i - 1, j - 1) + 1) {
      op = {OpKind::kSubstitution, {i - 1, i}, {j - 1, j}, i - 1};
      ++script.counts.substitutions;
      --i, --j;
    } else if (i > 0 && here == at(i - 1, j) + 1) {
      op = {OpKind::kOmission, {i - 1, i}, {j, j}, i - 1};
      ++script.counts.omissions;
      --i;
    } else {
      op = {OpKind::kInsertion, {i, i}, {j - 1, j}, i};
      ++script.counts.insertions;
      --j;
    }
    script.ops.push_back(op);
  }
  std::reverse(script.ops.begin(), script.ops.end());
  return script;
}

std::size_t edit_distance(std::span<const Token> ref, std::span<const Token> hyp) {
  if (ref.size() < hyp.size()) std::swap(ref, hyp);
  std::vector<std::size_t> row(hyp.size() + 1);
  for (std::size_t j = 0; j <= hyp.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= ref.size(); ++i) {
    std::size_t diagonal = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= hyp.size(); ++j) {
      const std::size_t above = row[j];
      row[j] = std::min({diagonal + (ref[i - 1].surface == hyp[j - 1].surface ? 0 : 1),
                         above + 1, row[j - 1] + 1});
      diagonal = above;
    }
  }
  return row[hyp.size()];
}

namespace {

std::string span_text(std::span<const Token> tokens, TokenRange range, const char* side,
                      std::size_t op_index) {
  if (range.begin > range.end || range.end > tokens.size()) {
    throw ConsistencyError(std::string("op ") + std::to_string(op_index) + ": " + side +
                           " span [" + std::to_string(range.begin) + ", " +
                           std::to_string(range.end) + ") out of bounds for " +
                           std::to_string(tokens.size()) + " tokens");
  }
  return join_surfaces(tokens.subspan(range.begin, range.size()));
}

}  // namespace

std::vector<Mismatch> extract_mismatches(const EditScript& script, std::span<const Token> ref,
                                         std::span<const Token> hyp) {
  if (script.ref_len != ref.size() || script.hyp_len != hyp.size()) {
    throw ConsistencyError("edit script was built for " + std::to_string(script.ref_len) + "/" +
                           std::to_string(script.hyp_len) + " tokens, got " +
                           std::to_string(ref.size()) + "/" + std::to_string(hyp.size()));
  }
  std::vector<Mismatch> out;
  int group = 0;
  bool in_run = false;
  for (std::size_t k = 0; k < script.ops.size(); ++k) {
    const EditOp& op = script.ops[k];
    if (op.kind == OpKind::kMatch) {
      in_run = false;
      continue;
    }
    if (!in_run) ++group;
    in_run = true;
    out.push_back(Mismatch{op, k, span_text(ref, op.ref_span, "reference", k),
                           span_text(hyp, op.hyp_span, "hypothesis", k), group});
  }
  return out;
}

namespace {

bool is_bracket(char c) {
  switch (c) {
    case '[': case ']': case '{': case '}': case '<': case '>': case '\\':
      return true;
    default:
      return false;
  }
}

std::string escape(std::string_view token) {
  std::string out;
  out.reserve(token.size());
  for (char c : token) {
    if (is_bracket(c)) out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

Highlight render_highlight(const EditScript& script, std::span<const Token> ref,
                           std::span<const Token> hyp) {
  if (script.ref_len != ref.size() || script.hyp_len != hyp.size()) {
    throw ConsistencyError("edit script does not match the token lists it is rendered with");
  }
  std::vector<std::string> ref_words;
  std::vector<std::string> hyp_words;
  for (std::size_t k = 0; k < script.ops.size(); ++k) {
    const EditOp& op = script.ops[k];
    const std::string r = escape(span_text(ref, op.ref_span, "reference", k));
    const std::string h = escape(span_text(hyp, op.hyp_span, "hypothesis", k));
    switch (op.kind) {
      case OpKind::kMatch:
        ref_words.push_back(r);
        hyp_words.push_back(h);
        break;
      case OpKind::kSubstitution:
        ref_words.push_back("[" + r + "]");
        hyp_words.push_back("[" + h + "]");
        break;
      case OpKind::kOmission:
        ref_words.push_back("{" + r + "}");
        break;
      case OpKind::kInsertion:
        hyp_words.push_back("<" + h + ">");
        break;
    }
  }
  auto join = [](const std::vector<std::string>& words) {
    std::string out;
    for (const auto& w : words) {
      if (!out.empty()) out += ' ';
      out += w;
    }
    return out;
  };
  return {join(ref_words), join(hyp_words)};
}

namespace {

enum class Mark { kPlain, kSubstitution, kOmission, kInsertion };

struct Item {
  Mark mark;
  std::string text;
  std::size_t column;
};

// Splits one highlighted line into words, each tagged with its bracket.
std::vector<Item> scan_line(std::string_view line, std::size_t line_no, bool reference_side) {
  std::vector<Item> items;
  std::string word;
  std::size_t word_column = 0;
  std::optional<Mark> open;
  std::size_t open_column = 0;
  std::size_t words_in_bracket = 0;

  auto flush = [&] {
    if (!word.empty()) {
      items.push_back({open.value_or(Mark::kPlain), std::move(word), word_column});
      if (open) ++words_in_bracket;
    }
    word.clear();
  };

  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    const std::size_t column = i + 1;
    if (c == '\\') {
      if (i + 1 >= line.size()) throw ParseError("dangling escape character", line_no, column);
      if (word.empty()) word_column = column;
      word += line[++i];
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      flush();
      continue;
    }
    std::optional<Mark> opens;
    if (c == '[') opens = Mark::kSubstitution;
    if (c == '{') opens = Mark::kOmission;
    if (c == '<') opens = Mark::kInsertion;
    if (opens) {
      if (open) throw ParseError("nested bracket '" + std::string(1, c) + "'", line_no, column);
      if (reference_side && *opens == Mark::kInsertion) {
        throw ParseError("insertion marker '<' on the reference line", line_no, column);
      }
      if (!reference_side && *opens == Mark::kOmission) {
        throw ParseError("omission marker '{' on the hypothesis line", line_no, column);
      }
      flush();
      open = opens;
      open_column = column;
      words_in_bracket = 0;
      continue;
    }
    if (c == ']' || c == '}' || c == '>') {
      const Mark closes = c == ']' ? Mark::kSubstitution : c == '}' ? Mark::kOmission : Mark::kInsertion;
      if (!open || *open != closes) {
        throw ParseError("unbalanced closing bracket '" + std::string(1, c) + "'", line_no, column);
      }
      flush();
      if (words_in_bracket == 0) throw ParseError("empty bracket pair", line_no, open_column);
      open.reset();
      continue;
    }
    if (word.empty()) word_column = column;
    word += c;
  }
  if (open) throw ParseError("unclosed bracket", line_no, open_column);
  flush();
  return items;
}

}  // namespace

std::vector<Mismatch> parse_highlight(std::string_view highlighted_ref,
                                      std::string_view highlighted_hyp) {
  const std::vector<Item> ref = scan_line(highlighted_ref, 1, true);
  const std::vector<Item> hyp = scan_line(highlighted_hyp, 2, false);

  std::vector<Mismatch> out;
  std::size_t i = 0;
  std::size_t j = 0;
  std::size_t op_index = 0;
  int group = 0;
  bool in_run = false;
  auto emit = [&](OpKind kind, TokenRange r, TokenRange h, std::size_t position,
                  std::string ref_text, std::string hyp_text) {
    if (!in_run) ++group;
    in_run = true;
    out.push_back(Mismatch{EditOp{kind, r, h, position}, op_index, std::move(ref_text),
                           std::move(hyp_text), group});
  };

  while (i < ref.size() || j < hyp.size()) {
    if (i < ref.size() && ref[i].mark == Mark::kOmission) {
      emit(OpKind::kOmission, {i, i + 1}, {j, j}, i, ref[i].text, "");
      ++i;
    } else if (j < hyp.size() && hyp[j].mark == Mark::kInsertion) {
      emit(OpKind::kInsertion, {i, i}, {j, j + 1}, i, "", hyp[j].text);
      ++j;
    } else if (i < ref.size() && j < hyp.size()) {
      const Item& r = ref[i];
      const Item& h = hyp[j];
      if (r.mark == Mark::kPlain && h.mark == Mark::kPlain) {
        if (r.text != h.text) {
          throw ConsistencyError("unmarked words differ: '" + r.text + "' (reference column " +
                                 std::to_string(r.column) + ") vs '" + h.text +
                                 "' (hypothesis column " + std::to_string(h.column) + ")");
        }
        in_run = false;
      } else if (r.mark == Mark::kSubstitution && h.mark == Mark::kSubstitution) {
        emit(OpKind::kSubstitution, {i, i + 1}, {j, j + 1}, i, r.text, h.text);
      } else {
        throw ConsistencyError("substitution marked on one line only: '" + r.text +
                               "' (reference column " + std::to_string(r.column) + ") vs '" +
                               h.text + "' (hypothesis column " + std::to_string(h.column) + ")");
      }
      ++i, ++j;
    } else {
      throw ConsistencyError(i < ref.size()
                                 ? "reference line has unpaired words from column " +
                                       std::to_string(ref[i].column)
                                 : "hypothesis line has unpaired words from column " +
                                       std::to_string(hyp[j].column));
    }
    ++op_index;
  }
  return out;
}

std::string format_highlight_document(const Highlight& highlight) {
  return highlight.ref + "\n\n" + highlight.hyp + "\n";
}

Highlight parse_highlight_document(std::string_view document) {
  const std::size_t split = document.find("\n\n");
  if (split == std::string_view::npos) {
    throw ParseError("highlight document needs a blank line between the two paragraphs", 1, 1);
  }
  auto trim_newlines = [](std::string_view s) {
    while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.remove_suffix(1);
    while (!s.empty() && (s.front() == '\n' || s.front() == '\r')) s.remove_prefix(1);
    return std::string(s);
  };
  Highlight out{trim_newlines(document.substr(0, split)), trim_newlines(document.substr(split + 2))};
  if (out.ref.find('\n') != std::string::npos || out.hyp.find('\n') != std::string::npos) {
    throw ParseError("each highlight paragraph must be a single line", 1, 1);
  }
  return out;
}

}  // namespace swer
