// Copyright 2026 The wraleak Authors
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

#ifndef WRALEAK_ERROR_H_
#define WRALEAK_ERROR_H_

#include <stdexcept>
#include <string>

namespace wraleak {

// Base of every exception the toolkit throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller passed a value that violates a documented precondition.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

// Input text (a file line, a model reply) could not be parsed. Carries the
// offending raw text so callers can log or replay it.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::string raw = {}, int line = 0)
      : Error(what), raw_(std::move(raw)), line_(line) {}

  const std::string& raw() const { return raw_; }
  // 1-based line number, 0 when not line-oriented.
  int line() const { return line_; }

 private:
  std::string raw_;
  int line_;
};

// A model reply parsed but had the wrong shape (session counts, decoy counts).
class StructureError : public ParseError {
 public:
  using ParseError::ParseError;
};

class TransportError : public Error {
 public:
  TransportError(const std::string& what, bool transient)
      : Error(what), transient_(transient) {}

  // Transient failures (timeouts, 5xx, 429) are eligible for retry.
  bool transient() const { return transient_; }

 private:
  bool transient_;
};

class EmptyResponseError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace wraleak

#endif  // WRALEAK_ERROR_H_
