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
#include <iostream>
#include <string>
#include <vector>

#include "cli_args.hpp"

int main(int argc, char **argv) {
    const std::vector<std::string> args(argv, argv + argc);
    const qpg::cli::ParsedArgs parsed = qpg::cli::parse_args(args);
    std::string message;
    const int code = qpg::cli::run(parsed, message);
    if (!message.empty()) {
        (code == qpg::cli::kExitOk ? std::cout : std::cerr) << message << '\n';
    }
    return code;
}
