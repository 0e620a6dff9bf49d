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
#include "qpg/error.hpp"

namespace qpg {

const char *to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::Config:
        return "configuration error";
    case ErrorCode::Shape:
        return "shape error";
    case ErrorCode::Index:
        return "index error";
    case ErrorCode::InvalidGate:
        return "invalid gate";
    case ErrorCode::Numeric:
        return "numeric error";
    case ErrorCode::Protocol:
        return "protocol violation";
    case ErrorCode::Io:
        return "I/O error";
    case ErrorCode::Load:
        return "load error";
    case ErrorCode::Exists:
        return "already exists";
    }
    return "unknown error";
}

} // namespace qpg
