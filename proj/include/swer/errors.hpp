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
#include <stdexcept>
#include <string>
#include <vector>

namespace swer {

// Exception hierarchy. Each leaf maps onto one CLI exit code:
//   InputError -> 2, PreconditionError / ConsistencyError -> 3,
//   RemoteError -> 4.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InputError : public Error {
 public:
  using Error::Error;
};

// Malformed text with a location. Lines and columns are 1-based.
class ParseError : public InputError {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : InputError(what + " (line " + std::to_string(line) + ", column " +
                   std::to_string(column) + ")"),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class ConfigError : public InputError {
 public:
  using InputError::InputError;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

// A metric whose denominator is empty (N = 0, constant input, no terms).
class UndefinedMetricError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class ConsistencyError : public Error {
 public:
  using Error::Error;
};

// Annotation validation failure. Carries every offending group id so the
// caller can report them all at once.
class ValidationError : public ConsistencyError {
 public:
  ValidationError(const std::string& what, std::vector<int> group_ids)
      : ConsistencyError(what), group_ids_(std::move(group_ids)) {}

  const std::vector<int>& group_ids() const noexcept { return group_ids_; }

 private:
  std::vector<int> group_ids_;
};

class RemoteError : public Error {
 public:
  using Error::Error;
};

// Connection failures, timeouts and 5xx responses once retries ran out.
class TransportError : public RemoteError {
 public:
  using RemoteError::RemoteError;
};

// 4xx responses and malformed response bodies; never retried.
class RequestError : public RemoteError {
 public:
  RequestError(const std::string& what, int status)
      : RemoteError(what), status_(status) {}
  int status() const noexcept { return status_; }

 private:
  int status_;
};

// The model answered, but not in the label contract.
class AnnotationError : public RemoteError {
 public:
  AnnotationError(const std::string& what, std::string raw_reply)
      : RemoteError(what), raw_reply_(std::move(raw_reply)) {}
  const std::string& raw_reply() const noexcept { return raw_reply_; }

 private:
  std::string raw_reply_;
};

class SceneAnalysisError : public RemoteError {
 public:
  SceneAnalysisError(const std::string& what, std::size_t scene_index)
      : RemoteError(what), scene_index_(scene_index) {}
  std::size_t scene_index() const noexcept { return scene_index_; }

 private:
  std::size_t scene_index_;
};

// Exit code convention shared by every CLI subcommand.
int exit_code_for(const std::exception& e) noexcept;

}  // namespace swer
