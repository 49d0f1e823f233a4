// Copyright 2026 The UNER Corpus Authors.
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

#ifndef UNER_ERROR_H_
#define UNER_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace uner {

// Process exit codes used by the command-line tool.
enum class ExitCode : int {
  kSuccess = 0,
  kUsage = 1,
  kDataError = 2,
  kNetworkExhausted = 3,
};

// Base class for all errors raised by the library. Each subclass maps to
// one exit code of the command-line tool.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
  virtual ExitCode exit_code() const { return ExitCode::kDataError; }
};

// Bad configuration or command-line usage.
class ConfigError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const override { return ExitCode::kUsage; }
};

// Input data that violates a file format or a domain invariant.
class DataError : public Error {
 public:
  using Error::Error;
};

// Read or write failure. `position` is a line number (or byte offset when
// noted by the raiser), 0 when unknown.
class IoError : public Error {
 public:
  IoError(const std::string& what, std::size_t position)
      : Error(what), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

// Every remote request failed after retries.
class NetworkExhaustedError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const override {
    return ExitCode::kNetworkExhausted;
  }
};

}  // namespace uner

#endif  // UNER_ERROR_H_
