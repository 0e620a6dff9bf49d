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

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "qpg/cartpole.hpp"
#include "qpg/policy.hpp"

namespace qpg {

enum class OptimizerKind { Sgd, Adam };

const char *to_string(OptimizerKind kind) noexcept;
OptimizerKind optimizer_kind_from_string(std::string_view name);

struct TrainConfig {
    double gamma = 0.99;
    double entropy_weight = 5e-3;
    double l2_weight = 1e-4;
    double clip_threshold = 1.0;
    double lr0 = 0.005;
    double lr_decay = 0.995; // per update
    std::size_t episodes = 400;
    double baseline_decay = 0.95;
    /// Trajectories averaged per update (Monte Carlo batch size N).
    std::size_t batch_episodes = 1;
    bool standardize_advantages = true;
    OptimizerKind optimizer = OptimizerKind::Adam;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_epsilon = 1e-8;

    void validate() const;
};

/// Shape and initialization of a fresh policy.
struct AgentSpec {
    AgentKind kind = AgentKind::Classical;
    std::size_t hidden = 64;
    std::size_t n_qubits = 4;
    std::size_t depth = 3;
    double kappa = 1.0;
    Axis embedding_axis = Axis::X;
    std::vector<double> s_max{2.4, 3.0, 0.21, 3.0};
    double sigma_z = 0.0;
    double vqc_init_half_width = 0.1;
};

Policy make_initial_policy(const AgentSpec &spec, std::uint64_t seed);

struct Trajectory {
    std::vector<std::array<double, 4>> observations; // as seen by the policy
    std::vector<int> actions;
    std::vector<double> rewards;
    std::vector<double> returns;
    std::vector<double> advantages;
    bool terminated = false;
    bool truncated = false;

    [[nodiscard]] std::size_t episode_length() const noexcept { return actions.size(); }
    [[nodiscard]] double total_reward() const noexcept;
};

/// G_t = r_t + gamma * G_{t+1}, evaluated backwards.
std::vector<double> compute_returns(std::span<const double> rewards, double gamma);

/// Exponential moving average of episode returns G_0, used as a constant
/// baseline within each episode. The first observation initializes it.
struct BaselineState {
    double value = 0.0;
    double decay = 0.95;
    bool initialized = false;

    void observe(double episode_return);
};

/// A_t = G_t - b, optionally standardized to zero mean / unit variance.
std::vector<double> advantages_from_baseline(std::span<const double> returns, double baseline,
                                             bool standardize);

/// Advantages against the current baseline, then folds G_0 into the baseline.
std::vector<double> compute_advantages(std::span<const double> returns, BaselineState &baseline,
                                       bool standardize = false);

struct LossAndGradient {
    double loss = 0.0;
    std::vector<double> gradient; // flat, policy layout
    std::size_t circuit_evals = 0;
};

/// loss = -sum_t A_t log pi(a_t|s_t) - beta sum_t H(pi(.|s_t)) + lambda ||theta||^2
LossAndGradient episode_loss(const Trajectory &trajectory, const Policy &policy,
                             const TrainConfig &config);

/// Mean of per-episode losses and gradients.
LossAndGradient batch_loss(std::span<const Trajectory> trajectories, const Policy &policy,
                           const TrainConfig &config);

struct ClipResult {
    double norm_before = 0.0;
    double norm_after = 0.0;
};

/// Rescales `grad` in place so its global L2 norm is at most tau.
ClipResult clip_gradient(std::span<double> grad, double tau);

double lr_schedule(std::size_t episode_index, const TrainConfig &config);

/// First-order update rule over a flat parameter vector.
class Optimizer {
  public:
    Optimizer(const TrainConfig &config, std::size_t n_params);
    void step(std::span<double> params, std::span<const double> grad, double lr);

  private:
    OptimizerKind kind_;
    double beta1_, beta2_, epsilon_;
    std::vector<double> m_, v_;
    std::size_t t_ = 0;
};

/// Rollout counters for one collected trajectory.
struct RolloutStats {
    std::size_t circuit_evals = 0;
};

/// Runs one episode sampling a_t ~ pi(.|s_t). Observation noise comes from
/// the env config and draws from `obs_noise_rng`.
Trajectory collect_trajectory(const Policy &policy, CartPole &env, std::uint64_t episode_seed,
                              Rng &action_rng, Rng &obs_noise_rng, Rng &measurement_rng,
                              RolloutStats *stats = nullptr);

struct UpdateReport {
    std::size_t episode = 0;
    double loss = 0.0;
    double grad_norm_pre_clip = 0.0;
    double grad_norm_post_clip = 0.0;
    double lr_used = 0.0;
    double episode_return = 0.0; // mean over the batch
    std::size_t episode_length = 0; // summed over the batch
    std::size_t gradient_circuit_evals = 0;
    std::size_t rollout_circuit_evals = 0;
    double wall_clock_seconds = 0.0; // time spent on this update
};

struct TrainResult {
    Policy policy;
    std::vector<UpdateReport> log;
    double wall_clock_seconds = 0.0;
};

using EpisodeCallback = std::function<void(const UpdateReport &)>;

/// REINFORCE with a moving-average baseline, entropy and L2 regularization,
/// global-norm clipping and an exponentially decayed step size. The result
/// is a deterministic function of (initial policy, config, env, seed) except
/// for the wall-clock fields.
TrainResult train(Policy initial, const TrainConfig &config, const EnvConfig &env_config,
                  std::uint64_t seed, const EpisodeCallback &on_update = {});

/// Convenience: make_initial_policy + train.
TrainResult train(const AgentSpec &agent, const TrainConfig &config, const EnvConfig &env_config,
                  std::uint64_t seed, const EpisodeCallback &on_update = {});

} // namespace qpg
