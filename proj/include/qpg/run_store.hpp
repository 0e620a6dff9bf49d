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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qpg/evaluation.hpp"
#include "qpg/policy.hpp"
#include "qpg/trainer.hpp"

namespace qpg {

inline constexpr int kConfigSchemaVersion = 1;
inline constexpr int kWeightsSchemaVersion = 1;
inline constexpr int kEvalReportSchemaVersion = 1;

inline constexpr std::string_view kRewardLogHeader = "episode,return,loss,grad_norm,lr";
inline constexpr std::string_view kNoiseSweepHeader = "sigma,mean_return,std_return,success_rate";

/// Everything needed to reproduce one training run.
struct RunConfig {
    std::string exp = "default";
    std::uint64_t seed = 42;
    /// Training-time observation noise.
    double noise = 0.0;
    bool quadratic_reward = false;
    AgentSpec agent;
    TrainConfig train;
    EvalConfig eval;

    void validate() const;
    [[nodiscard]] EnvConfig env_config() const;
    [[nodiscard]] EnvConfig eval_env_config() const;

    friend bool operator==(const RunConfig &, const RunConfig &);
};

bool is_valid_experiment_name(std::string_view name);

std::string run_config_to_json(const RunConfig &config);
RunConfig run_config_from_json(std::string_view json);

/// Flat string keys shared by the CLI and the C API ("episodes", "lr", ...).
void set_run_config_value(RunConfig &config, std::string_view key, std::string_view value);
std::string get_run_config_value(const RunConfig &config, std::string_view key);
const std::vector<std::string> &run_config_keys();

std::string weights_to_json(const Policy &policy);
Policy weights_from_json(std::string_view json);
void save_weights(const Policy &policy, const std::filesystem::path &path);
Policy load_weights(const std::filesystem::path &path);

std::string weights_filename(AgentKind kind);

std::string eval_report_to_json(const EvalReport &report);
EvalReport eval_report_from_json(std::string_view json);
std::string noise_sweep_csv(const EvalReport &report);
std::string reward_log_row(const UpdateReport &report);

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);
double parse_double(std::string_view text);

/// Writes `contents` to a sibling temp file and renames it over `path`.
void write_file_atomic(const std::filesystem::path &path, std::string_view contents);
std::string read_file(const std::filesystem::path &path);

struct RunArtifacts {
    std::filesystem::path directory;
    std::filesystem::path config;
    std::filesystem::path reward_log;
    std::filesystem::path weights;
    std::filesystem::path train_stats;
    std::optional<std::filesystem::path> eval_report;
    std::optional<std::filesystem::path> noise_sweep;
};

struct RunOptions {
    bool overwrite = false;
    bool evaluate_after = true;
    /// Called after each logged update (after its reward_log row is flushed).
    EpisodeCallback on_update;
};

/// Trains and persists runs/<exp>/. config.json is on disk before the first
/// episode; weights are written atomically.
RunArtifacts run_training(const RunConfig &config, const std::filesystem::path &runs_root,
                          const RunOptions &options = {});

/// Reloads runs/<exp>/ and writes eval_report.json and noise_sweep.csv.
RunArtifacts run_evaluation(const std::filesystem::path &runs_root, std::string_view exp,
                            const EvalConfig &eval);

} // namespace qpg
