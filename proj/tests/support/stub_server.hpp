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

#include <atomic>
#include <cstddef>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "swer/llm_client.hpp"

namespace swer::testing {

struct StubReply {
  int status = 200;
  std::string body;
};

// Chat-completions body carrying `content` as the assistant message.
StubReply completion(const std::string& content);

// Concatenated text parts of the last user message of a request body.
std::string user_text(const nlohmann::json& request);
std::string system_text(const nlohmann::json& request);
bool has_image(const nlohmann::json& request);

// In-process HTTP server answering POST /v1/chat/completions.
class StubServer {
 public:
  using Handler = std::function<StubReply(const nlohmann::json& request)>;

  explicit StubServer(Handler handler);
  ~StubServer();
  StubServer(const StubServer&) = delete;
  StubServer& operator=(const StubServer&) = delete;

  std::string base_url() const;
  std::size_t hits() const { return hits_; }
  std::vector<nlohmann::json> requests() const;
  std::vector<std::string> authorization_headers() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::atomic<std::size_t> hits_{0};
};

// Endpoint pointing at `server` with no auth and fast retries.
EndpointConfig stub_endpoint(const StubServer& server, int max_retries = 2);

}  // namespace swer::testing
