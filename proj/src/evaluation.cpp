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
#include "qpg/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qpg/error.hpp"

namespace qpg {

namespace {

constexpr std::uint64_t kEvalSalt = 0x6576616cULL; // "eval"

void fill_statistics(NoiseRow &row, int horizon, std::span<const int> lengths) {
    const double n = static_cast<double>(row.returns.size());
    if (row.returns.empty()) {
        return;
    }
    row.mean_return = std::accumulate(row.returns.begin(), row.returns.end(), 0.0) / n;
    double ss = 0.0;
    for (double r : row.returns) {
        ss += (r - row.mean_return) * (r - row.mean_return);
    }
    row.std_return = std::sqrt(ss / n);
    const auto successes =
        std::count_if(lengths.begin(), lengths.end(), [horizon](int len) { return len >= horizon; });
    row.success_rate = static_cast<double>(successes) / n;
}

} // namespace

void EvalConfig::validate() const {
    if (rollouts_per_point < 1) {
        fail(ErrorCode::Config, "evaluation needs at least one rollout per point");
    }
    if (seeds.empty()) {
        fail(ErrorCode::Config, "evaluation needs at least one seed");
    }
    if (noise_levels.empty()) {
        fail(ErrorCode::Config, "evaluation needs at least one noise level");
    }
    for (double s : noise_levels) {
        if (!(s >= 0.0) || !std::isfinite(s)) {
            fail(ErrorCode::Config, "noise levels must be finite and >= 0");
        }
    }
}

ActionSelector policy_selector(const Policy &policy, bool deterministic) {
    return [policy, deterministic](std::span<const double> obs, Rng &rng) {
        const PolicyDistribution dist = policy.distribution(obs);
        return deterministic ? greedy_action(dist) : sample_action(dist, rng);
    };
}

RolloutOutcome evaluation_rollout(const ActionSelector &selector, double sigma,
                                  std::uint64_t seed, std::size_t rollout_index,
                                  const EnvConfig &env_config) {
    EnvConfig cfg = env_config;
    cfg.observation_noise.sigma = sigma;
    CartPole env(cfg);

    // Streams depend on (seed, rollout) only, so every noise level replays
    // the same initial states and action draws.
    const std::uint64_t cell = mix_seed(seed, rollout_index, kEvalSalt);
    Rng action_rng(cell, streams::kActions);
    Rng noise_rng(cell, streams::kObservationNoise);

    env.reset(cell);
    auto obs = env.observe(noise_rng);
    RolloutOutcome out;
    while (!env.done()) {
        const int action = selector(obs, action_rng);
        const StepResult step = env.step(action, &noise_rng);
        out.episode_return += step.reward;
        out.reached_horizon = step.truncated;
        obs = step.next_obs;
    }
    out.length = env.steps();
    return out;
}

EvalReport evaluate(const ActionSelector &selector, const EvalConfig &config,
                    const EnvConfig &env) {
    config.validate();
    std::vector<double> sigmas = config.noise_levels;
    std::sort(sigmas.begin(), sigmas.end());

    EvalReport report;
    report.rollouts_per_point = config.rollouts_per_point;
    report.seeds = config.seeds;
    report.deterministic_actions = config.deterministic_actions;
    for (double sigma : sigmas) {
        NoiseRow row;
        row.sigma = sigma;
        std::vector<int> lengths;
        for (std::uint64_t seed : config.seeds) {
            for (std::size_t m = 0; m < config.rollouts_per_point; ++m) {
                const RolloutOutcome o = evaluation_rollout(selector, sigma, seed, m, env);
                row.returns.push_back(o.episode_return);
                lengths.push_back(o.length);
            }
        }
        fill_statistics(row, env.physics.horizon, lengths);
        report.rows.push_back(std::move(row));
    }
    return report;
}

EvalReport evaluate(const Policy &policy, const EvalConfig &config, const EnvConfig &env) {
    EvalReport report = evaluate(policy_selector(policy, config.deterministic_actions), config, env);
    report.agent_kind = to_string(policy.kind());
    report.parameter_count = policy.parameter_count();
    return report;
}

std::size_t count_parameters(AgentKind kind, const AgentSpec &shape) {
    if (kind == AgentKind::Classical) {
        return MlpParams::count_for(shape.hidden);
    }
    return 3 * shape.n_qubits * shape.depth;
}

EfficiencyProfile efficiency_profile(std::span<const UpdateReport> log, AgentKind kind) {
    EfficiencyProfile p;
    for (const auto &r : log) {
        p.wall_clock_seconds += r.wall_clock_seconds;
        p.total_steps += r.episode_length;
    }
    if (kind == AgentKind::Quantum) {
        std::vector<std::uint64_t> per_episode;
        std::uint64_t total = 0;
        for (const auto &r : log) {
            per_episode.push_back(r.gradient_circuit_evals);
            total += r.gradient_circuit_evals;
        }
        p.evals_per_episode = std::move(per_episode);
        p.total_circuit_evals = total;
    }
    return p;
}

NoiseRow summarize_training_log(std::span<const UpdateReport> log, std::size_t window,
                                int horizon) {
    if (window == 0 || window > log.size()) {
        window = log.size();
    }
    NoiseRow row;
    std::vector<int> lengths;
    for (std::size_t i = log.size() - window; i < log.size(); ++i) {
        row.returns.push_back(log[i].episode_return);
        lengths.push_back(static_cast<int>(log[i].episode_length));
    }
    fill_statistics(row, horizon, lengths);
    return row;
}

} // namespace qpg
