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
#include <random>
#include <string>
#include <vector>

#include "swer/alignment.hpp"
#include "swer/metrics.hpp"
#include "swer/transcript.hpp"

namespace swer::testing {

// Small alphabets keep matches frequent so alignments are non-trivial.
inline std::vector<Token> random_tokens(std::mt19937& rng, std::size_t len,
                                        const std::vector<std::string>& vocab) {
  std::uniform_int_distribution<std::size_t> pick(0, vocab.size() - 1);
  std::vector<Token> out;
  for (std::size_t i = 0; i < len; ++i) {
    const std::string& w = vocab[pick(rng)];
    out.push_back(Token{w, w});
  }
  return out;
}

inline const std::vector<std::string>& plain_vocab() {
  static const std::vector<std::string> v = {"a", "b", "c", "d"};
  return v;
}

// Words that need escaping in highlighted text.
inline const std::vector<std::string>& bracket_vocab() {
  static const std::vector<std::string> v = {"a", "b", "[x]", "{y", "z}", "<w>", "back\\slash",
                                             "\\", "]", "c"};
  return v;
}

inline std::size_t random_len(std::mt19937& rng, std::size_t max) {
  return std::uniform_int_distribution<std::size_t>(0, max)(rng);
}

// Annotates every mismatch with random labels.
inline std::vector<AnnotatedMismatch> random_annotations(std::mt19937& rng,
                                                         const std::vector<Mismatch>& mismatches) {
  std::uniform_int_distribution<int> type(0, static_cast<int>(kContentTypeCount) - 1);
  std::uniform_int_distribution<int> sev(0, static_cast<int>(kSeverityCount) - 1);
  std::vector<AnnotatedMismatch> out;
  for (const Mismatch& m : mismatches) {
    AnnotatedMismatch a;
    a.mismatch = m;
    a.content_type = static_cast<ContentType>(type(rng));
    a.severity = static_cast<Severity>(sev(rng));
    a.typed_by_hypothesis = m.op.kind == OpKind::kInsertion;
    out.push_back(a);
  }
  return out;
}

}  // namespace swer::testing
