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

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qpg/cartpole.hpp"
#include "qpg/policy.hpp"
#include "qpg/trainer.hpp"

namespace qpg {

struct EvalConfig {
    std::size_t rollouts_per_point = 20;             // M
    std::vector<double> noise_levels{0.0, 0.02, 0.05, 0.10};
    std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5}; // S seeds
    bool deterministic_actions = false;              // argmax instead of sampling

    void validate() const;
};

struct NoiseRow {
    double sigma = 0.0;
    double mean_return = 0.0;
    double std_return = 0.0; // population std over all rollouts x seeds
    double success_rate = 0.0;
    std::vector<double> returns; // per rollout, seed-major then rollout
};

struct EvalReport {
    std::vector<NoiseRow> rows; // ascending sigma
    std::string agent_kind;
    std::size_t parameter_count = 0;
    std::optional<double> train_wall_clock_seconds;
    std::optional<std::uint64_t> vqc_circuit_evaluations;
    /// Which quantity the rows summarize: "rollouts" or "training_log".
    std::string summary_source = "rollouts";
    std::size_t rollouts_per_point = 0;
    std::vector<std::uint64_t> seeds;
    bool deterministic_actions = false;
};

/// Chooses an action from the observation the agent sees.
using ActionSelector = std::function<int(std::span<const double> obs, Rng &rng)>;

/// Stochastic (or greedy) action selection from a policy; measurement noise
/// is left at zero during evaluation.
ActionSelector policy_selector(const Policy &policy, bool deterministic);

/// Runs M rollouts per (sigma, seed) cell. Sensor noise only corrupts the
/// observation handed to the selector; the physics runs on the true state.
/// Each cell has its own streams, so the report does not depend on
/// evaluation order.
EvalReport evaluate(const ActionSelector &selector, const EvalConfig &config,
                    const EnvConfig &env = {});

EvalReport evaluate(const Policy &policy, const EvalConfig &config, const EnvConfig &env = {});

/// Length and return of a single evaluation rollout.
struct RolloutOutcome {
    double episode_return = 0.0;
    int length = 0;
    bool reached_horizon = false;
};

RolloutOutcome evaluation_rollout(const ActionSelector &selector, double sigma,
                                  std::uint64_t seed, std::size_t rollout_index,
                                  const EnvConfig &env = {});

std::size_t count_parameters(AgentKind kind, const AgentSpec &shape);

struct EfficiencyProfile {
    double wall_clock_seconds = 0.0;
    std::size_t total_steps = 0;
    /// Gradient-pass circuit evaluations per episode; absent for the MLP.
    std::optional<std::vector<std::uint64_t>> evals_per_episode;
    std::optional<std::uint64_t> total_circuit_evals;
};

/// Per-timestep gradient pass cost of the ansatz: one forward plus two
/// shifted evaluations per angle.
constexpr std::uint64_t circuit_evals_per_step(std::size_t n_params) {
    return 1 + 2 * static_cast<std::uint64_t>(n_params);
}

EfficiencyProfile efficiency_profile(std::span<const UpdateReport> log, AgentKind kind);

/// Mean / population std of episode returns over the last `window` entries
/// of a training log (all entries when window is 0 or exceeds the log).
NoiseRow summarize_training_log(std::span<const UpdateReport> log, std::size_t window = 0,
                                int horizon = 500);

} // namespace qpg
