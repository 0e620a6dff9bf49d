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

#include <memory>
#include <string>
#include <vector>

#include "qpg/qpg.h"

namespace qpg::cli {

struct ConfigDeleter {
    void operator()(qpg_config *c) const noexcept { qpg_config_destroy(c); }
};
using ConfigHandle = std::unique_ptr<qpg_config, ConfigDeleter>;

enum class Command { None, Train, Eval };

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitRuntime = 2;

struct ParsedArgs {
    Command command = Command::None;
    /// Train: the full run configuration. Eval: carries the evaluation keys.
    ConfigHandle config;
    std::string runs_dir = "runs";
    std::string exp;
    bool overwrite = false;
    bool evaluate_after = true;
    /// Set when parsing ended without a runnable command (help or error).
    bool finished = false;
    int exit_code = kExitOk;
    std::string output; // help or usage text to print
};

/// Parses `qpg train ...` / `qpg eval ...`. Never exits the process.
ParsedArgs parse_args(const std::vector<std::string> &argv);

/// Executes a parsed command through the C API; returns the process exit code.
int run(const ParsedArgs &args, std::string &message);

} // namespace qpg::cli
