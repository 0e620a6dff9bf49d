// Copyright 2026 The qpg Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include <stdexcept>
#include <string>

namespace qpg {

enum class ErrorCode {
    Config,      // invalid configuration value
    Shape,       // vector/tensor dimension mismatch
    Index,       // qubit or element index out of range
    InvalidGate, // e.g. CNOT with control == target
    Numeric,     // non-finite intermediate value
    Protocol,    // environment misuse (stepping a finished episode)
    Io,          // filesystem failure
    Load,        // missing or corrupt persisted artifact
    Exists,      // run directory already present
};

const char *to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string &message)
        : std::runtime_error(message), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string &message) {
    throw Error(code, message);
}

} // namespace qpg
