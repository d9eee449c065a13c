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
#include "support/stub_server.hpp"

#include <chrono>
#include <stdexcept>

#include "httplib.h"

namespace swer::testing {

using json = nlohmann::json;

StubReply completion(const std::string& content) {
  const json body = {
      {"id", "stub"},
      {"object", "chat.completion"},
      {"choices", json::array({{{"index", 0},
                                {"message", {{"role", "assistant"}, {"content", content}}},
                                {"finish_reason", "stop"}}})}};
  return {200, body.dump()};
}

namespace {

std::string content_text(const json& content) {
  if (content.is_string()) return content.get<std::string>();
  std::string out;
  for (const json& part : content) {
    if (part.value("type", "") == "text") out += part.value("text", "");
  }
  return out;
}

}  // namespace

std::string user_text(const json& request) {
  const json& messages = request.at("messages");
  for (auto it = messages.rbegin(); it != messages.rend(); ++it) {
    if ((*it).value("role", "") == "user") return content_text((*it).at("content"));
  }
  return "";
}

std::string system_text(const json& request) {
  for (const json& m : request.at("messages")) {
    if (m.value("role", "") == "system") return content_text(m.at("content"));
  }
  return "";
}

bool has_image(const json& request) {
  for (const json& m : request.at("messages")) {
    if (!m.at("content").is_array()) continue;
    for (const json& part : m.at("content")) {
      if (part.value("type", "") == "image_url") return true;
    }
  }
  return false;
}

struct StubServer::Impl {
  httplib::Server server;
  std::thread thread;
  int port = 0;
  mutable std::mutex mutex;
  std::vector<json> requests;
  std::vector<std::string> auth;
};

StubServer::StubServer(Handler handler) : impl_(std::make_unique<Impl>()) {
  impl_->server.Post("/v1/chat/completions",
                     [this, handler](const httplib::Request& req, httplib::Response& res) {
                       ++hits_;
                       json body;
                       try {
                         body = json::parse(req.body);
                       } catch (const json::exception&) {
                         res.status = 400;
                         res.set_content("bad json", "text/plain");
                         return;
                       }
                       {
                         std::lock_guard lock(impl_->mutex);
                         impl_->requests.push_back(body);
                         impl_->auth.push_back(req.get_header_value("Authorization"));
                       }
                       const StubReply reply = handler(body);
                       res.status = reply.status;
                       res.set_content(reply.body, "application/json");
                     });
  impl_->port = impl_->server.bind_to_any_port("127.0.0.1");
  if (impl_->port <= 0) throw std::runtime_error("stub server could not bind");
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
}

StubServer::~StubServer() {
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

std::string StubServer::base_url() const {
  return "http://127.0.0.1:" + std::to_string(impl_->port) + "/v1";
}

std::vector<json> StubServer::requests() const {
  std::lock_guard lock(impl_->mutex);
  return impl_->requests;
}

std::vector<std::string> StubServer::authorization_headers() const {
  std::lock_guard lock(impl_->mutex);
  return impl_->auth;
}

EndpointConfig stub_endpoint(const StubServer& server, int max_retries) {
  EndpointConfig c;
  c.base_url = server.base_url();
  c.model_name = "stub-model";
  c.api_key_env = "";
  c.timeout_s = 5.0;
  c.max_retries = max_retries;
  c.retry_base_delay_s = 0.001;
  return c;
}

}  // namespace swer::testing
