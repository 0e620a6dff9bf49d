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
#include "qpg/cartpole.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "qpg/error.hpp"

namespace qpg {

CartPoleState cartpole_dynamics(const CartPoleState &s, int action, const CartPolePhysics &p) {
    if (action != 0 && action != 1) {
        fail(ErrorCode::Config, "CartPole action must be 0 or 1, got " + std::to_string(action));
    }
    const double force = action == 1 ? p.force_mag : -p.force_mag;
    const double total_mass = p.cart_mass + p.pole_mass;
    const double polemass_length = p.pole_mass * p.half_length;
    const double cos_t = std::cos(s.theta);
    const double sin_t = std::sin(s.theta);

    const double temp = (force + polemass_length * s.theta_dot * s.theta_dot * sin_t) / total_mass;
    const double theta_acc =
        (p.gravity * sin_t - cos_t * temp) /
        (p.half_length * (4.0 / 3.0 - p.pole_mass * cos_t * cos_t / total_mass));
    const double x_acc = temp - polemass_length * theta_acc * cos_t / total_mass;

    CartPoleState next;
    next.x = s.x + p.dt * s.x_dot;
    next.x_dot = s.x_dot + p.dt * x_acc;
    next.theta = s.theta + p.dt * s.theta_dot;
    next.theta_dot = s.theta_dot + p.dt * theta_acc;
    return next;
}

bool cartpole_failed(const CartPoleState &s, const CartPolePhysics &p) {
    return s.x < -p.x_threshold || s.x > p.x_threshold || s.theta < -p.theta_threshold ||
           s.theta > p.theta_threshold;
}

void QuadraticReward::validate() const {
    if (!(r >= 0.0) || !std::isfinite(r)) {
        fail(ErrorCode::Config, "control weight R must be a finite value >= 0");
    }
    Eigen::Matrix4d m;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            m(i, j) = q[i][j];
            if (!std::isfinite(q[i][j])) {
                fail(ErrorCode::Config, "state weight Q has a non-finite entry");
            }
        }
    }
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
        fail(ErrorCode::Config, "state weight Q must be symmetric");
    }
    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> eig(m, Eigen::EigenvaluesOnly);
    const double floor = -1e-12 * std::max(1.0, m.cwiseAbs().maxCoeff());
    if (eig.eigenvalues().minCoeff() < floor) {
        fail(ErrorCode::Config, "state weight Q must be positive semidefinite");
    }
}

double quadratic_reward(const CartPoleState &s, int action, const Matrix4 &q, double r,
                        double force_mag) {
    const auto x = s.as_array();
    double state_cost = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            state_cost += x[i] * q[i][j] * x[j];
        }
    }
    const double u = action == 1 ? force_mag : -force_mag;
    return -(state_cost + r * u * u);
}

std::array<double, 4> observe(const CartPoleState &s, const ObservationNoiseSpec &noise,
                              Rng &rng) {
    if (!(noise.sigma >= 0.0) || !std::isfinite(noise.sigma)) {
        fail(ErrorCode::Config, "observation noise sigma must be a finite value >= 0");
    }
    auto y = s.as_array();
    for (auto &v : y) {
        v = rng.normal(v, noise.sigma);
    }
    return y;
}

CartPole::CartPole(EnvConfig config) : config_(std::move(config)) {
    if (config_.reward.quadratic) {
        config_.reward.quadratic->validate();
    }
    if (!(config_.observation_noise.sigma >= 0.0)) {
        fail(ErrorCode::Config, "observation noise sigma must be >= 0");
    }
    if (!(config_.process_noise_sigma >= 0.0)) {
        fail(ErrorCode::Config, "process noise sigma must be >= 0");
    }
}

CartPoleState CartPole::reset(std::uint64_t seed) {
    Rng rng(seed, streams::kEnvReset);
    state_.x = rng.uniform(-0.05, 0.05);
    state_.x_dot = rng.uniform(-0.05, 0.05);
    state_.theta = rng.uniform(-0.05, 0.05);
    state_.theta_dot = rng.uniform(-0.05, 0.05);
    process_rng_ = Rng(seed, streams::kProcessNoise);
    steps_ = 0;
    done_ = false;
    return state_;
}

std::array<double, 4> CartPole::observe(Rng &noise_rng) const {
    return qpg::observe(state_, config_.observation_noise, noise_rng);
}

StepResult CartPole::step(int action, Rng *noise_rng) {
    if (done_) {
        fail(ErrorCode::Protocol, "step() called on a finished episode; call reset() first");
    }
    StepResult result;
    result.reward = config_.reward.quadratic
                        ? quadratic_reward(state_, action, config_.reward.quadratic->q,
                                           config_.reward.quadratic->r, config_.physics.force_mag)
                        : 1.0;
    state_ = cartpole_dynamics(state_, action, config_.physics);
    if (config_.process_noise_sigma > 0.0) {
        state_.x = process_rng_.normal(state_.x, config_.process_noise_sigma);
        state_.x_dot = process_rng_.normal(state_.x_dot, config_.process_noise_sigma);
        state_.theta = process_rng_.normal(state_.theta, config_.process_noise_sigma);
        state_.theta_dot = process_rng_.normal(state_.theta_dot, config_.process_noise_sigma);
    }
    ++steps_;

    result.terminated = cartpole_failed(state_, config_.physics);
    result.truncated = !result.terminated && steps_ >= config_.physics.horizon;
    done_ = result.terminated || result.truncated;

    if (config_.observation_noise.sigma > 0.0) {
        if (!noise_rng) {
            fail(ErrorCode::Config, "observation noise enabled without a random stream");
        }
        result.next_obs = observe(*noise_rng);
    } else {
        result.next_obs = state_.as_array();
    }
    return result;
}

} // namespace qpg
