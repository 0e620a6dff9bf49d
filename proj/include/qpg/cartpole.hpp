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
#include <cstdint>
#include <optional>
#include <span>

#include "qpg/rng.hpp"

namespace qpg {

struct CartPoleState {
    double x = 0.0;         // m
    double x_dot = 0.0;     // m/s
    double theta = 0.0;     // rad
    double theta_dot = 0.0; // rad/s

    [[nodiscard]] std::array<double, 4> as_array() const { return {x, x_dot, theta, theta_dot}; }
    friend bool operator==(const CartPoleState &, const CartPoleState &) = default;
};

/// Canonical CartPole-v1 constants.
struct CartPolePhysics {
    double gravity = 9.8;
    double cart_mass = 1.0;
    double pole_mass = 0.1;
    double half_length = 0.5;
    double force_mag = 10.0;
    double dt = 0.02;
    double x_threshold = 2.4;
    double theta_threshold = 12.0 * 2.0 * 3.14159265358979323846 / 360.0;
    int horizon = 500;
};

/// One explicit-Euler step of the cart-pole equations of motion.
[[nodiscard]] CartPoleState cartpole_dynamics(const CartPoleState &s, int action,
                                              const CartPolePhysics &physics = {});

[[nodiscard]] bool cartpole_failed(const CartPoleState &s, const CartPolePhysics &physics = {});

using Matrix4 = std::array<std::array<double, 4>, 4>;

struct QuadraticReward {
    Matrix4 q{{{1.0, 0, 0, 0}, {0, 0.1, 0, 0}, {0, 0, 10.0, 0}, {0, 0, 0, 0.1}}};
    double r = 0.001;

    /// Requires symmetric positive semidefinite Q and R >= 0.
    void validate() const;
};

/// -(x^T Q x + R u^2) with u = -force_mag for action 0, +force_mag for action 1.
[[nodiscard]] double quadratic_reward(const CartPoleState &s, int action, const Matrix4 &q,
                                      double r, double force_mag = 10.0);

/// Either +1 per step (default) or the quadratic cost.
struct RewardMode {
    std::optional<QuadraticReward> quadratic;
};

struct ObservationNoiseSpec {
    double sigma = 0.0;
};

/// y = x + N(0, sigma^2 I).
[[nodiscard]] std::array<double, 4> observe(const CartPoleState &s,
                                            const ObservationNoiseSpec &noise, Rng &rng);

struct StepResult {
    std::array<double, 4> next_obs{};
    double reward = 0.0;
    bool terminated = false; // pole fell or cart left the track
    bool truncated = false;  // horizon reached
};

struct EnvConfig {
    CartPolePhysics physics;
    RewardMode reward;
    ObservationNoiseSpec observation_noise;
    /// Std-dev of additive Gaussian process noise on every state component.
    double process_noise_sigma = 0.0;
};

/// Single-threaded episode state machine.
class CartPole {
  public:
    explicit CartPole(EnvConfig config = {});

    /// Starts an episode with all components uniform in [-0.05, 0.05].
    CartPoleState reset(std::uint64_t seed);

    /// Observation of the current state, corrupted by the configured noise.
    std::array<double, 4> observe(Rng &noise_rng) const;

    StepResult step(int action, Rng *noise_rng = nullptr);

    [[nodiscard]] const CartPoleState &state() const noexcept { return state_; }
    [[nodiscard]] int steps() const noexcept { return steps_; }
    [[nodiscard]] bool done() const noexcept { return done_; }
    [[nodiscard]] const EnvConfig &config() const noexcept { return config_; }

  private:
    EnvConfig config_;
    CartPoleState state_;
    Rng process_rng_{0};
    int steps_ = 0;
    bool done_ = true;
};

} // namespace qpg
