// Copyright 2026 The pejkit Authors.
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

#ifndef PEJKIT_ERROR_HPP
#define PEJKIT_ERROR_HPP

#include <stdexcept>
#include <string>

namespace pejkit {

// Error taxonomy shared by the library and the CLI. The enum value doubles
// as the process exit code of the command-line tool.
enum class ErrorKind : int {
  kUsage = 2,    // bad arguments, bad configuration, missing inputs
  kSchema = 3,   // malformed files, violated format invariants
  kData = 4,     // non-finite values, insufficient or degenerate data
  kNumeric = 5,  // undefined ratios, undefined directions
  kIo = 6,       // filesystem failures
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }
  int exit_code() const { return static_cast<int>(kind_); }

 private:
  ErrorKind kind_;
};

}  // namespace pejkit

#endif  // PEJKIT_ERROR_HPP
