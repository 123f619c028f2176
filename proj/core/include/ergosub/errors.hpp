// Copyright 2026 The ergosub Authors
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

#include <stdexcept>
#include <string>

namespace ergosub {

// Every failure the library reports deliberately derives from Error. The CLI
// maps each subclass onto its own exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input: bad family descriptors, out-of-range parameters.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A computation would exceed a configured size cap (grid, search, memory).
class ResourceError : public Error {
 public:
  using Error::Error;
};

// An independent re-check of a computed object found a violated inequality.
class VerificationFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace ergosub
