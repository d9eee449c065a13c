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
#include <cstdint>
#include <filesystem>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace swer {

std::string sha256_hex(std::string_view data);
std::string sha256_hex(std::span<const std::uint8_t> data);
std::string base64_encode(std::span<const std::uint8_t> data);

// One chat-completions endpoint.
struct EndpointConfig {
  // Scheme, host, optional port and path prefix, e.g. "http://127.0.0.1:8000/v1".
  std::string base_url;
  std::string model_name;
  // Environment variable holding the bearer token. Empty: no Authorization
  // header (self-hosted servers).
  std::string api_key_env = "OPENAI_API_KEY";
  double timeout_s = 120.0;
  // Retries after the first attempt, for transport failures and 5xx.
  int max_retries = 3;
  double temperature = 0.0;
  double retry_base_delay_s = 0.5;
  std::size_t max_image_bytes = 20u << 20;

  // Throws ConfigError if the URL is malformed or a limit is out of range.
  void validate() const;
};

struct ImageInput {
  std::vector<std::uint8_t> bytes;
  std::string media_type;  // image/png, image/jpeg, image/webp or image/gif
};

// Reads an image, inferring the media type from the extension.
ImageInput load_image(const std::filesystem::path& path);

// Disk-backed response cache: one JSON file per digest under `dir`.
class ResponseCache {
 public:
  explicit ResponseCache(std::filesystem::path dir);

  std::optional<std::string> lookup(const std::string& key) const;
  void store(const std::string& key, const std::string& response);
  const std::filesystem::path& dir() const noexcept { return dir_; }

 private:
  std::filesystem::path file_for(const std::string& key) const;

  std::filesystem::path dir_;
  mutable std::mutex mutex_;
};

struct ClientStats {
  std::size_t requests = 0;       // logical completions asked for
  std::size_t cache_hits = 0;
  std::size_t deduplicated = 0;   // served by an identical in-flight request
  std::size_t http_attempts = 0;  // every POST, including retries
  std::size_t retries = 0;
};

// Thread-safe chat-completions client with optional response caching and
// in-flight deduplication of identical requests. The API key is read from
// the environment per request and never logged or cached.
class ChatClient {
 public:
  explicit ChatClient(EndpointConfig config, std::shared_ptr<ResponseCache> cache = nullptr);
  ChatClient(const ChatClient&) = delete;
  ChatClient& operator=(const ChatClient&) = delete;

  std::string complete_text(std::string_view system, std::string_view user);
  // Throws InputError before any network traffic for empty or oversized
  // images and unsupported media types.
  std::string complete_vision(std::string_view system, std::string_view user,
                              const ImageInput& image);

  // Cache digest for a request; pure function of model, temperature and
  // every message byte (images contribute their SHA-256).
  std::string text_request_key(std::string_view system, std::string_view user) const;
  std::string vision_request_key(std::string_view system, std::string_view user,
                                 const ImageInput& image) const;

  ClientStats stats() const;
  const EndpointConfig& config() const noexcept { return config_; }

 private:
  std::string dispatch(const std::string& key, const std::string& body);
  std::string post_with_retries(const std::string& body);

  EndpointConfig config_;
  std::shared_ptr<ResponseCache> cache_;
  std::string scheme_host_port_;
  std::string path_;

  mutable std::mutex inflight_mutex_;
  std::map<std::string, std::shared_future<std::string>> inflight_;

  std::atomic<std::size_t> requests_{0};
  std::atomic<std::size_t> cache_hits_{0};
  std::atomic<std::size_t> deduplicated_{0};
  std::atomic<std::size_t> http_attempts_{0};
  std::atomic<std::size_t> retries_{0};
};

}  // namespace swer
