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

#include <map>
#include <string>

#include "support/stub_server.hpp"
#include "swer/llm_client.hpp"

namespace swer::testing {

// Transcript excerpt embedded in a post-editing prompt.
inline std::string excerpt_of(const std::string& user) {
  const std::string open = "Transcript excerpt:\n";
  const std::string close = "\n\nReply with the corrected";
  const auto a = user.find(open);
  if (a == std::string::npos) return "";
  const auto b = user.find(close, a);
  return user.substr(a + open.size(), b == std::string::npos ? std::string::npos : b - a - open.size());
}

inline std::string apply_fixes(std::string text, const std::map<std::string, std::string>& fixes) {
  std::string out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto space = text.find(' ', pos);
    const std::string word = text.substr(pos, space == std::string::npos ? std::string::npos : space - pos);
    const auto it = fixes.find(word);
    out += it == fixes.end() ? word : it->second;
    if (space == std::string::npos) break;
    out += ' ';
    pos = space + 1;
  }
  return out;
}

// Deterministic stand-in for text and vision models. Every reply is a pure
// function of the request, so reruns are reproducible.
inline StubReply pipeline_reply(const nlohmann::json& request,
                                const std::map<std::string, std::string>& fixes) {
  const std::string user = user_text(request);
  const std::string system = system_text(request);
  if (user.find("Transcript excerpt:") != std::string::npos) {
    return completion(apply_fixes(excerpt_of(user), fixes));
  }
  if (has_image(request)) {
    const std::string url =
        request.at("messages").back().at("content").at(1).at("image_url").at("url");
    return completion("Slide " + sha256_hex(url).substr(0, 8) + " mentions BERT, RoBERTa and GLUE.");
  }
  if (system.rfind("You consolidate notes", 0) == 0) {
    return completion("Scene " + sha256_hex(user).substr(0, 8) + ": BERT, RoBERTa, GLUE.");
  }
  if (system.rfind("You condense", 0) == 0) {
    return completion("Talk about fine-tuning BERT and comparing with RoBERTa on GLUE.");
  }
  return StubReply{404, "{\"error\": \"unrecognized prompt\"}"};
}

inline const std::map<std::string, std::string>& synthetic_fixes() {
  static const std::map<std::string, std::string> f = {
      {"birds", "BERT"}, {"roberta", "RoBERTa"}, {"glue", "GLUE"}};
  return f;
}

}  // namespace swer::testing
