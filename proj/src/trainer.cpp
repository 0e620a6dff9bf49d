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
#include "qpg/trainer.hpp"

#include <chrono>
#include <cmath>
#include <numeric>
#include <string>

#include "qpg/error.hpp"

namespace qpg {

const char *to_string(OptimizerKind kind) noexcept {
    return kind == OptimizerKind::Sgd ? "sgd" : "adam";
}

OptimizerKind optimizer_kind_from_string(std::string_view name) {
    if (name == "sgd") {
        return OptimizerKind::Sgd;
    }
    if (name == "adam") {
        return OptimizerKind::Adam;
    }
    fail(ErrorCode::Config, "unknown optimizer '" + std::string(name) + "' (expected sgd or adam)");
}

void TrainConfig::validate() const {
    const auto require = [](bool ok, const char *what) {
        if (!ok) {
            fail(ErrorCode::Config, what);
        }
    };
    require(gamma > 0.0 && gamma <= 1.0, "gamma must lie in (0, 1]");
    require(entropy_weight >= 0.0 && std::isfinite(entropy_weight), "entropy weight must be >= 0");
    require(l2_weight >= 0.0 && std::isfinite(l2_weight), "l2 weight must be >= 0");
    require(clip_threshold > 0.0 && std::isfinite(clip_threshold),
            "clip threshold must be positive");
    require(lr0 > 0.0 && std::isfinite(lr0), "learning rate must be positive");
    require(lr_decay > 0.0 && lr_decay <= 1.0, "learning-rate decay must lie in (0, 1]");
    require(baseline_decay >= 0.0 && baseline_decay <= 1.0, "baseline decay must lie in [0, 1]");
    require(batch_episodes >= 1, "batch size must be at least 1");
    require(adam_beta1 >= 0.0 && adam_beta1 < 1.0, "adam beta1 must lie in [0, 1)");
    require(adam_beta2 >= 0.0 && adam_beta2 < 1.0, "adam beta2 must lie in [0, 1)");
    require(adam_epsilon > 0.0, "adam epsilon must be positive");
}

Policy make_initial_policy(const AgentSpec &spec, std::uint64_t seed) {
    Rng rng(seed, streams::kInit);
    if (spec.kind == AgentKind::Classical) {
        if (spec.hidden == 0) {
            fail(ErrorCode::Config, "hidden width must be positive");
        }
        return Policy(MlpParams::random(spec.hidden, rng));
    }
    QuantumPolicyParams q;
    q.circuit = VqcParams::random(spec.depth, spec.n_qubits, rng, spec.vqc_init_half_width,
                                  spec.kappa, spec.embedding_axis);
    q.normalization.s_max = spec.s_max;
    q.normalization.kappa = spec.kappa;
    q.noise.sigma_z = spec.sigma_z;
    return Policy(std::move(q));
}

double Trajectory::total_reward() const noexcept {
    return std::accumulate(rewards.begin(), rewards.end(), 0.0);
}

std::vector<double> compute_returns(std::span<const double> rewards, double gamma) {
    std::vector<double> g(rewards.size());
    double running = 0.0;
    for (std::size_t i = rewards.size(); i-- > 0;) {
        running = rewards[i] + gamma * running;
        g[i] = running;
    }
    return g;
}

void BaselineState::observe(double episode_return) {
    if (!initialized) {
        value = episode_return;
        initialized = true;
        return;
    }
    value = decay * value + (1.0 - decay) * episode_return;
}

std::vector<double> advantages_from_baseline(std::span<const double> returns, double baseline,
                                             bool standardize) {
    std::vector<double> a(returns.size());
    for (std::size_t i = 0; i < returns.size(); ++i) {
        a[i] = returns[i] - baseline;
    }
    if (standardize && !a.empty()) {
        const double n = static_cast<double>(a.size());
        const double mean = std::accumulate(a.begin(), a.end(), 0.0) / n;
        double var = 0.0;
        for (double v : a) {
            var += (v - mean) * (v - mean);
        }
        const double sd = std::sqrt(var / n);
        for (auto &v : a) {
            v = sd > 1e-12 ? (v - mean) / sd : v - mean;
        }
    }
    return a;
}

std::vector<double> compute_advantages(std::span<const double> returns, BaselineState &baseline,
                                       bool standardize) {
    if (returns.empty()) {
        return {};
    }
    const double b = baseline.initialized ? baseline.value : 0.0;
    auto a = advantages_from_baseline(returns, b, standardize);
    baseline.observe(returns.front());
    return a;
}

LossAndGradient episode_loss(const Trajectory &trajectory, const Policy &policy,
                             const TrainConfig &config) {
    const std::size_t n = trajectory.episode_length();
    if (trajectory.observations.size() != n || trajectory.advantages.size() != n) {
        fail(ErrorCode::Shape, "trajectory is incomplete: observations, actions and advantages "
                               "must have equal length");
    }
    LossAndGradient out;
    out.gradient.assign(policy.parameter_count(), 0.0);
    for (std::size_t t = 0; t < n; ++t) {
        const StepLossWeights w{trajectory.advantages[t], config.entropy_weight};
        const auto step = policy.accumulate_step_gradient(trajectory.observations[t],
                                                          trajectory.actions[t], w, out.gradient);
        out.loss += step.loss;
        out.circuit_evals += step.circuit_evals;
    }
    if (config.l2_weight > 0.0) {
        const std::vector<double> theta = policy.flat_params();
        double sq = 0.0;
        for (std::size_t i = 0; i < theta.size(); ++i) {
            sq += theta[i] * theta[i];
            out.gradient[i] += 2.0 * config.l2_weight * theta[i];
        }
        out.loss += config.l2_weight * sq;
    }
    if (!std::isfinite(out.loss)) {
        fail(ErrorCode::Numeric, "episode loss is not finite (episode length " +
                                     std::to_string(n) + ")");
    }
    return out;
}

LossAndGradient batch_loss(std::span<const Trajectory> trajectories, const Policy &policy,
                           const TrainConfig &config) {
    if (trajectories.empty()) {
        fail(ErrorCode::Config, "batch contains no trajectories");
    }
    if (trajectories.size() == 1) {
        return episode_loss(trajectories.front(), policy, config);
    }
    LossAndGradient out;
    out.gradient.assign(policy.parameter_count(), 0.0);
    for (const auto &traj : trajectories) {
        const LossAndGradient one = episode_loss(traj, policy, config);
        out.loss += one.loss;
        out.circuit_evals += one.circuit_evals;
        for (std::size_t i = 0; i < one.gradient.size(); ++i) {
            out.gradient[i] += one.gradient[i];
        }
    }
    const double inv = 1.0 / static_cast<double>(trajectories.size());
    out.loss *= inv;
    for (auto &g : out.gradient) {
        g *= inv;
    }
    return out;
}

ClipResult clip_gradient(std::span<double> grad, double tau) {
    if (!(tau > 0.0)) {
        fail(ErrorCode::Config, "clip threshold must be positive");
    }
    double sq = 0.0;
    for (double g : grad) {
        sq += g * g;
    }
    ClipResult r;
    r.norm_before = std::sqrt(sq);
    r.norm_after = r.norm_before;
    if (r.norm_before > tau) {
        const double scale = tau / r.norm_before;
        double sq_after = 0.0;
        for (auto &g : grad) {
            g *= scale;
            sq_after += g * g;
        }
        r.norm_after = std::sqrt(sq_after);
    }
    return r;
}

double lr_schedule(std::size_t episode_index, const TrainConfig &config) {
    return config.lr0 * std::pow(config.lr_decay, static_cast<double>(episode_index));
}

Optimizer::Optimizer(const TrainConfig &config, std::size_t n_params)
    : kind_(config.optimizer), beta1_(config.adam_beta1), beta2_(config.adam_beta2),
      epsilon_(config.adam_epsilon) {
    if (kind_ == OptimizerKind::Adam) {
        m_.assign(n_params, 0.0);
        v_.assign(n_params, 0.0);
    }
}

void Optimizer::step(std::span<double> params, std::span<const double> grad, double lr) {
    if (params.size() != grad.size()) {
        fail(ErrorCode::Shape, "parameter and gradient sizes differ");
    }
    if (kind_ == OptimizerKind::Sgd) {
        for (std::size_t i = 0; i < params.size(); ++i) {
            params[i] -= lr * grad[i];
        }
        return;
    }
    ++t_;
    const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
    for (std::size_t i = 0; i < params.size(); ++i) {
        m_[i] = beta1_ * m_[i] + (1.0 - beta1_) * grad[i];
        v_[i] = beta2_ * v_[i] + (1.0 - beta2_) * grad[i] * grad[i];
        const double m_hat = m_[i] / c1;
        const double v_hat = v_[i] / c2;
        params[i] -= lr * m_hat / (std::sqrt(v_hat) + epsilon_);
    }
}

Trajectory collect_trajectory(const Policy &policy, CartPole &env, std::uint64_t episode_seed,
                              Rng &action_rng, Rng &obs_noise_rng, Rng &measurement_rng,
                              RolloutStats *stats) {
    Trajectory traj;
    env.reset(episode_seed);
    std::array<double, 4> obs = env.observe(obs_noise_rng);
    const bool quantum = policy.kind() == AgentKind::Quantum;
    while (!env.done()) {
        const PolicyDistribution dist = policy.act_distribution(obs, &measurement_rng);
        if (quantum && stats) {
            ++stats->circuit_evals;
        }
        const int action = sample_action(dist, action_rng);
        const StepResult step = env.step(action, &obs_noise_rng);
        traj.observations.push_back(obs);
        traj.actions.push_back(action);
        traj.rewards.push_back(step.reward);
        traj.terminated = step.terminated;
        traj.truncated = step.truncated;
        obs = step.next_obs;
    }
    return traj;
}

TrainResult train(Policy initial, const TrainConfig &config, const EnvConfig &env_config,
                  std::uint64_t seed, const EpisodeCallback &on_update) {
    using clock = std::chrono::steady_clock;
    config.validate();
    const auto run_start = clock::now();

    TrainResult result{std::move(initial), {}, 0.0};
    Policy &policy = result.policy;
    Optimizer optimizer(config, policy.parameter_count());
    BaselineState baseline;
    baseline.decay = config.baseline_decay;
    CartPole env(env_config);
    Rng action_rng(seed, streams::kActions);
    Rng obs_rng(seed, streams::kObservationNoise);
    Rng measurement_rng(seed, streams::kMeasurementNoise);

    result.log.reserve(config.episodes);
    std::vector<Trajectory> batch(config.batch_episodes);
    for (std::size_t episode = 0; episode < config.episodes; ++episode) {
        const auto start = clock::now();
        UpdateReport report;
        report.episode = episode;

        RolloutStats stats;
        for (std::size_t n = 0; n < batch.size(); ++n) {
            batch[n] = collect_trajectory(policy, env, mix_seed(seed, episode, n), action_rng,
                                          obs_rng, measurement_rng, &stats);
        }
        report.rollout_circuit_evals = stats.circuit_evals;

        const double b = baseline.initialized ? baseline.value : 0.0;
        double return_sum = 0.0;
        for (auto &traj : batch) {
            traj.returns = compute_returns(traj.rewards, config.gamma);
            traj.advantages =
                advantages_from_baseline(traj.returns, b, config.standardize_advantages);
            return_sum += traj.total_reward();
            report.episode_length += traj.episode_length();
        }
        for (const auto &traj : batch) {
            if (!traj.returns.empty()) {
                baseline.observe(traj.returns.front());
            }
        }
        report.episode_return = return_sum / static_cast<double>(batch.size());

        LossAndGradient lg;
        try {
            lg = batch_loss(batch, policy, config);
        } catch (const Error &e) {
            fail(e.code(), "episode " + std::to_string(episode) + ": " + e.what());
        }
        report.loss = lg.loss;
        report.gradient_circuit_evals = lg.circuit_evals;

        const ClipResult clip = clip_gradient(lg.gradient, config.clip_threshold);
        report.grad_norm_pre_clip = clip.norm_before;
        report.grad_norm_post_clip = clip.norm_after;
        report.lr_used = lr_schedule(episode, config);

        std::vector<double> theta = policy.flat_params();
        optimizer.step(theta, lg.gradient, report.lr_used);
        for (double v : theta) {
            if (!std::isfinite(v)) {
                fail(ErrorCode::Numeric,
                     "episode " + std::to_string(episode) + ": parameters became non-finite");
            }
        }
        policy.set_flat_params(theta);

        report.wall_clock_seconds = std::chrono::duration<double>(clock::now() - start).count();
        result.log.push_back(report);
        if (on_update) {
            on_update(report);
        }
    }
    result.wall_clock_seconds = std::chrono::duration<double>(clock::now() - run_start).count();
    return result;
}

TrainResult train(const AgentSpec &agent, const TrainConfig &config, const EnvConfig &env_config,
                  std::uint64_t seed, const EpisodeCallback &on_update) {
    return train(make_initial_policy(agent, seed), config, env_config, seed, on_update);
}

} // namespace qpg
