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
#include <span>
#include <vector>

#include "qpg/rng.hpp"

namespace qpg {

struct PolicyDistribution;

inline constexpr std::size_t kObsDim = 4;
inline constexpr std::size_t kNumActions = 2;

/// Weights of the tanh MLP policy: obs(4) -> h -> h -> logits(2).
/// Matrices are row-major with shape [out][in].
struct MlpParams {
    std::size_t hidden = 0;
    std::vector<double> w1, b1; // h x 4, h
    std::vector<double> w2, b2; // h x h, h
    std::vector<double> w3, b3; // 2 x h, 2

    MlpParams() = default;
    /// All-zero parameters of the given width.
    explicit MlpParams(std::size_t hidden);

    /// Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) per layer.
    static MlpParams random(std::size_t hidden, Rng &rng);

    [[nodiscard]] static std::size_t count_for(std::size_t hidden) noexcept {
        return kObsDim * hidden + hidden + hidden * hidden + hidden + kNumActions * hidden +
               kNumActions;
    }
    [[nodiscard]] std::size_t parameter_count() const noexcept { return count_for(hidden); }

    /// Flat order: w1, b1, w2, b2, w3, b3.
    [[nodiscard]] std::vector<double> flat() const;
    static MlpParams from_flat(std::size_t hidden, std::span<const double> flat);

    void validate() const;
};

/// Intermediate activations kept for the backward pass.
struct MlpActivations {
    std::vector<double> h1, h2;
};

PolicyDistribution mlp_forward(std::span<const double> obs, const MlpParams &params,
                               MlpActivations *activations = nullptr);

/// Reverse-mode gradient of a scalar loss given its gradient w.r.t. the logits.
/// The result is accumulated into `grad` (same structure as params).
void mlp_backward_logits(std::span<const double> obs, const MlpParams &params,
                         const MlpActivations &activations, std::span<const double> dlogits,
                         MlpParams &grad);

/// Gradient of -advantage_weight * log pi(action | obs).
MlpParams mlp_backward(std::span<const double> obs, int action, double advantage_weight,
                       const MlpParams &params);

} // namespace qpg
