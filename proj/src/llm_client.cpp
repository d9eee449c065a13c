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

#include "swer/llm_client.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "swer/errors.hpp"

namespace swer {

using json = nlohmann::json;

std::string sha256_hex(std::span<const std::uint8_t> data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 computation failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(length * 2);
  for (unsigned int i = 0; i < length; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xf];
  }
  return out;
}

std::string sha256_hex(std::string_view data) {
  return sha256_hex(std::span<const std::uint8_t>(
      reinterpret_cast<const std::uint8_t*>(data.data()), data.size()));
}

std::string base64_encode(std::span<const std::uint8_t> data) {
  std::string out(4 * ((data.size() + 2) / 3), '\0');
  const int written = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()), data.data(),
                                      static_cast<int>(data.size()));
  out.resize(static_cast<std::size_t>(written));
  return out;
}

// ---- Config -----------------------------------------------------------------

namespace {

const std::regex& url_pattern() {
  static const std::regex pattern(R"(^(https?)://([A-Za-z0-9.\-]+|\[[0-9A-Fa-f:.]+\])(:[0-9]{1,5})?(/[^\s?#]*)?$)");
  return pattern;
}

}  // namespace

void EndpointConfig::validate() const {
  std::smatch match;
  if (!std::regex_match(base_url, match, url_pattern())) {
    throw ConfigError("endpoint base_url '" + base_url + "' is not an http(s) URL");
  }
  if (model_name.empty()) throw ConfigError("endpoint model_name must be set");
  if (!(timeout_s > 0.0)) throw ConfigError("endpoint timeout_s must be positive");
  if (max_retries < 0) throw ConfigError("endpoint max_retries must be non-negative");
  if (!(retry_base_delay_s >= 0.0)) throw ConfigError("endpoint retry_base_delay_s must be >= 0");
  if (!(temperature >= 0.0)) throw ConfigError("endpoint temperature must be >= 0");
}

ImageInput load_image(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  for (auto& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  ImageInput image;
  if (ext == ".png") image.media_type = "image/png";
  else if (ext == ".jpg" || ext == ".jpeg") image.media_type = "image/jpeg";
  else if (ext == ".webp") image.media_type = "image/webp";
  else if (ext == ".gif") image.media_type = "image/gif";
  else throw InputError("unsupported image type '" + ext + "' for " + path.string());
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open image " + path.string());
  image.bytes.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  return image;
}

// ---- Cache ------------------------------------------------------------------

ResponseCache::ResponseCache(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw InputError("cannot create cache directory " + dir_.string() + ": " + ec.message());
}

std::filesystem::path ResponseCache::file_for(const std::string& key) const {
  return dir_ / (key + ".json");
}

std::optional<std::string> ResponseCache::lookup(const std::string& key) const {
  std::lock_guard lock(mutex_);
  std::ifstream in(file_for(key));
  if (!in) return std::nullopt;
  try {
    const json entry = json::parse(in);
    if (entry.value("key", "") != key || !entry.contains("response")) return std::nullopt;
    return entry["response"].get<std::string>();
  } catch (const json::exception&) {
    return std::nullopt;
  }
}

void ResponseCache::store(const std::string& key, const std::string& response) {
  std::lock_guard lock(mutex_);
  const json entry = {{"key", key},
                      {"response", response},
                      {"created_at", static_cast<std::int64_t>(std::time(nullptr))}};
  const std::filesystem::path target = file_for(key);
  const std::filesystem::path temp = target.string() + ".tmp";
  {
    std::ofstream out(temp, std::ios::trunc);
    if (!out) throw InputError("cannot write cache entry " + temp.string());
    out << entry.dump();
  }
  std::error_code ec;
  std::filesystem::rename(temp, target, ec);
  if (ec) throw InputError("cannot commit cache entry " + target.string() + ": " + ec.message());
}

// ---- Client -----------------------------------------------------------------

namespace {

json text_messages(std::string_view system, std::string_view user) {
  json messages = json::array();
  if (!system.empty()) messages.push_back({{"role", "system"}, {"content", system}});
  messages.push_back({{"role", "user"}, {"content", user}});
  return messages;
}

void check_image(const ImageInput& image, const EndpointConfig& config) {
  if (image.bytes.empty()) throw InputError("vision request with an empty image");
  if (image.bytes.size() > config.max_image_bytes) {
    throw InputError("image of " + std::to_string(image.bytes.size()) + " bytes exceeds the " +
                     std::to_string(config.max_image_bytes) + "-byte limit");
  }
  static const std::set<std::string> kSupported = {"image/png", "image/jpeg", "image/webp",
                                                   "image/gif"};
  if (!kSupported.count(image.media_type)) {
    throw InputError("unsupported image media type '" + image.media_type + "'");
  }
}

json vision_messages(std::string_view system, std::string_view user, json image_part) {
  json messages = json::array();
  if (!system.empty()) messages.push_back({{"role", "system"}, {"content", system}});
  messages.push_back({{"role", "user"},
                      {"content", json::array({{{"type", "text"}, {"text", user}}, image_part})}});
  return messages;
}

}  // namespace

ChatClient::ChatClient(EndpointConfig config, std::shared_ptr<ResponseCache> cache)
    : config_(std::move(config)), cache_(std::move(cache)) {
  config_.validate();
  std::smatch match;
  std::regex_match(config_.base_url, match, url_pattern());
  scheme_host_port_ = match[1].str() + "://" + match[2].str() + match[3].str();
  std::string prefix = match[4].str();
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  path_ = prefix + "/chat/completions";
}

std::string ChatClient::text_request_key(std::string_view system, std::string_view user) const {
  const json canonical = {{"model", config_.model_name},
                          {"temperature", config_.temperature},
                          {"messages", text_messages(system, user)}};
  return sha256_hex(canonical.dump());
}

std::string ChatClient::vision_request_key(std::string_view system, std::string_view user,
                                           const ImageInput& image) const {
  const json image_part = {{"type", "image_digest"},
                           {"media_type", image.media_type},
                           {"sha256", sha256_hex(image.bytes)}};
  const json canonical = {{"model", config_.model_name},
                          {"temperature", config_.temperature},
                          {"messages", vision_messages(system, user, image_part)}};
  return sha256_hex(canonical.dump());
}

std::string ChatClient::complete_text(std::string_view system, std::string_view user) {
  const json body = {{"model", config_.model_name},
                     {"temperature", config_.temperature},
                     {"messages", text_messages(system, user)}};
  return dispatch(text_request_key(system, user), body.dump());
}

std::string ChatClient::complete_vision(std::string_view system, std::string_view user,
                                        const ImageInput& image) {
  check_image(image, config_);
  const json image_part = {
      {"type", "image_url"},
      {"image_url", {{"url", "data:" + image.media_type + ";base64," + base64_encode(image.bytes)}}}};
  const json body = {{"model", config_.model_name},
                     {"temperature", config_.temperature},
                     {"messages", vision_messages(system, user, image_part)}};
  return dispatch(vision_request_key(system, user, image), body.dump());
}

std::string ChatClient::dispatch(const std::string& key, const std::string& body) {
  ++requests_;
  if (cache_) {
    if (auto hit = cache_->lookup(key)) {
      ++cache_hits_;
      return *hit;
    }
  }

  std::promise<std::string> promise;
  std::shared_future<std::string> pending;
  bool owner = false;
  {
    std::lock_guard lock(inflight_mutex_);
    auto it = inflight_.find(key);
    if (it != inflight_.end()) {
      pending = it->second;
    } else {
      pending = promise.get_future().share();
      inflight_.emplace(key, pending);
      owner = true;
    }
  }
  if (!owner) {
    ++deduplicated_;
    return pending.get();
  }

  auto finish = [&] {
    std::lock_guard lock(inflight_mutex_);
    inflight_.erase(key);
  };
  try {
    std::string text = post_with_retries(body);
    if (cache_) cache_->store(key, text);
    promise.set_value(text);
    finish();
    return text;
  } catch (...) {
    promise.set_exception(std::current_exception());
    finish();
    throw;
  }
}

std::string ChatClient::post_with_retries(const std::string& body) {
  httplib::Headers headers;
  if (!config_.api_key_env.empty()) {
    const char* key = std::getenv(config_.api_key_env.c_str());
    if (key == nullptr || *key == '\0') {
      throw ConfigError("API key environment variable " + config_.api_key_env + " is not set");
    }
    headers.emplace("Authorization", std::string("Bearer ") + key);
  }

  const auto seconds = static_cast<time_t>(config_.timeout_s);
  const auto micros = static_cast<time_t>((config_.timeout_s - static_cast<double>(seconds)) * 1e6);
  std::string last_failure;
  for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
    if (attempt > 0) {
      ++retries_;
      const double delay = config_.retry_base_delay_s * std::pow(2.0, attempt - 1);
      std::this_thread::sleep_for(std::chrono::duration<double>(delay));
    }
    ++http_attempts_;
    httplib::Client client(scheme_host_port_);
    client.set_connection_timeout(seconds, micros);
    client.set_read_timeout(seconds, micros);
    client.set_write_timeout(seconds, micros);
    const httplib::Result result = client.Post(path_, headers, body, "application/json");
    if (!result) {
      last_failure = "transport failure: " + httplib::to_string(result.error());
      continue;
    }
    if (result->status >= 500) {
      last_failure = "HTTP " + std::to_string(result->status);
      continue;
    }
    if (result->status >= 400) {
      throw RequestError("endpoint rejected the request with HTTP " +
                             std::to_string(result->status) + ": " + result->body.substr(0, 200),
                         result->status);
    }
    try {
      const json reply = json::parse(result->body);
      const json& content = reply.at("choices").at(0).at("message").at("content");
      if (!content.is_string()) throw RequestError("message content is not a string", result->status);
      return content.get<std::string>();
    } catch (const json::exception& e) {
      throw RequestError(std::string("malformed chat-completions response: ") + e.what(),
                         result->status);
    }
  }
  throw TransportError("request to " + scheme_host_port_ + path_ + " failed after " +
                       std::to_string(config_.max_retries + 1) + " attempts (" + last_failure + ")");
}

ClientStats ChatClient::stats() const {
  ClientStats s;
  s.requests = requests_;
  s.cache_hits = cache_hits_;
  s.deduplicated = deduplicated_;
  s.http_attempts = http_attempts_;
  s.retries = retries_;
  return s;
}

}  // namespace swer
