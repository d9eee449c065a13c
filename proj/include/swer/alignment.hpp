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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "swer/transcript.hpp"

namespace swer {

enum class OpKind { kMatch, kSubstitution, kOmission, kInsertion };

// "M", "S", "O", "I".
char op_letter(OpKind kind) noexcept;
std::string_view op_name(OpKind kind) noexcept;
OpKind parse_op_kind(std::string_view text);

// One unit-cost edit operation. Every operation covers at most one token per
// side: omissions have an empty hyp_span, insertions an empty ref_span.
struct EditOp {
  OpKind kind = OpKind::kMatch;
  TokenRange ref_span;
  TokenRange hyp_span;
  // Reference index the op is anchored at. Insertions anchor at the number
  // of reference tokens consumed before them, so a leading insertion is at 0
  // and a trailing one at N.
  std::size_t position = 0;

  friend bool operator==(const EditOp&, const EditOp&) = default;
};

struct OpCounts {
  std::size_t insertions = 0;
  std::size_t omissions = 0;
  std::size_t substitutions = 0;

  std::size_t total() const noexcept { return insertions + omissions + substitutions; }
  friend bool operator==(const OpCounts&, const OpCounts&) = default;
};

struct EditScript {
  std::vector<EditOp> ops;
  std::size_t ref_len = 0;
  std::size_t hyp_len = 0;
  OpCounts counts;
};

// Minimal unit-cost alignment on surface tokens. Among equal-cost paths the
// backtrace prefers match, then substitution, omission, insertion.
EditScript align(std::span<const Token> ref, std::span<const Token> hyp);

// Unit-cost Levenshtein distance on surface tokens, O(min(n, m)) memory.
std::size_t edit_distance(std::span<const Token> ref, std::span<const Token> hyp);

struct Mismatch {
  EditOp op;
  // Index of `op` inside EditScript::ops.
  std::size_t op_index = 0;
  std::string ref_text;
  std::string hyp_text;
  // Dense from 1; shared by every op of one maximal run of non-match ops.
  int group_id = 0;

  friend bool operator==(const Mismatch&, const Mismatch&) = default;
};

// One Mismatch per non-match op. Throws ConsistencyError if the script does
// not describe `ref` and `hyp`.
std::vector<Mismatch> extract_mismatches(const EditScript& script, std::span<const Token> ref,
                                         std::span<const Token> hyp);

struct Highlight {
  std::string ref;
  std::string hyp;
};

// Bracketed diff: "[x]" substitution on both lines, "{x}" omission on the
// reference line, "<x>" insertion on the hypothesis line. Bracket characters
// and backslashes inside tokens are escaped with a backslash.
Highlight render_highlight(const EditScript& script, std::span<const Token> ref,
                           std::span<const Token> hyp);

// Inverse of render_highlight. Throws ParseError (line 1 = reference,
// line 2 = hypothesis) on unbalanced or misplaced brackets and
// ConsistencyError when the two lines disagree.
std::vector<Mismatch> parse_highlight(std::string_view highlighted_ref,
                                      std::string_view highlighted_hyp);

// File form: reference paragraph, blank line, hypothesis paragraph.
std::string format_highlight_document(const Highlight& highlight);
Highlight parse_highlight_document(std::string_view document);

}  // namespace swer
