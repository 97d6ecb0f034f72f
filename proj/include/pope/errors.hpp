// Copyright 2026 The popekit Authors.
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

#ifndef POPE_ERRORS_HPP_
#define POPE_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace pope {

// Base class for every toolkit error. The CLI maps ValidationError to
// exit status 1 and IoError to exit status 2.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class ValidationError : public Error {
 public:
  enum class Kind {
    kSchema,              // malformed input file, missing/mistyped field
    kReferential,         // id or name that resolves to nothing
    kConflict,            // two inputs claim contradictory facts
    kPrecondition,        // operation called outside its contract
    kEmptyInput,          // operation requires a non-empty corpus
    kUndefinedRatio,      // ratio whose denominator set is empty
    kInsufficientCorpus,  // fewer eligible images than requested
    kCoverage,            // answers do not cover the probe exactly once
    kFingerprintMismatch  // artifact produced against a different config
  };

  ValidationError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(what) {}
};

}  // namespace pope

#endif  // POPE_ERRORS_HPP_
