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
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "qpg/circuit.hpp"
#include "qpg/mlp.hpp"
#include "qpg/rng.hpp"

namespace qpg {

/// Two-action categorical distribution. `logits[a]` is the logit of action a,
/// so softmax(logits) == probs.
struct PolicyDistribution {
    std::array<double, kNumActions> probs{};
    std::array<double, kNumActions> logits{};
    std::array<double, kNumActions> log_probs{};
    double entropy = 0.0; // nats
};

/// Stable softmax with entropy.
PolicyDistribution categorical_from_logits(std::span<const double, kNumActions> logits);

/// Bernoulli policy with pi(a=1) = sigmoid(2 z). Logits are [-z, z].
PolicyDistribution bernoulli_from_expectation(double z);

/// Clip-then-scale state normalization into [-kappa*pi, kappa*pi].
struct NormalizationSpec {
    std::vector<double> s_max{2.4, 3.0, 0.21, 3.0};
    double kappa = 1.0;

    void validate() const;
};

std::vector<double> normalize_state(std::span<const double> obs, const NormalizationSpec &spec);

/// Forward pass of the quantum policy. `noise_rng` is only consulted when
/// noise.sigma_z > 0. `z_out`, if given, receives the noiseless expectation.
PolicyDistribution vqc_policy(std::span<const double> obs, const VqcParams &params,
                              const NormalizationSpec &spec, const MeasurementNoiseModel &noise,
                              Rng *noise_rng, double *z_out = nullptr);

struct VqcGradient {
    std::vector<double> grads; // flattened like VqcParams::angles
    std::size_t circuit_evals = 0;
};

/// Gradient of -advantage_weight * log pi(action | obs) over the ansatz angles,
/// chained through the noiseless expectation and the shift rule.
VqcGradient vqc_logprob_gradient(std::span<const double> obs, int action,
                                 double advantage_weight, const VqcParams &params,
                                 const NormalizationSpec &spec);

/// Returns 1 with probability probs[1]; consumes exactly one uniform draw.
int sample_action(const PolicyDistribution &dist, Rng &rng);

int greedy_action(const PolicyDistribution &dist);

enum class AgentKind { Classical, Quantum };

const char *to_string(AgentKind kind) noexcept;
AgentKind agent_kind_from_string(std::string_view name);

struct QuantumPolicyParams {
    VqcParams circuit;
    NormalizationSpec normalization;
    MeasurementNoiseModel noise;
};

/// Per-step loss weights: the step loss is
///   -logprob_weight * log pi(a|s) - entropy_weight * H(pi(.|s)).
struct StepLossWeights {
    double logprob_weight = 0.0;
    double entropy_weight = 0.0;
};

/// Common interface over the MLP and VQC policies.
class Policy {
  public:
    explicit Policy(MlpParams mlp);
    explicit Policy(QuantumPolicyParams quantum);

    [[nodiscard]] AgentKind kind() const noexcept;
    [[nodiscard]] std::size_t parameter_count() const noexcept;

    /// Action distribution used for acting. Measurement noise (quantum only)
    /// draws from `noise_rng` when enabled.
    [[nodiscard]] PolicyDistribution act_distribution(std::span<const double> obs,
                                                      Rng *noise_rng) const;

    /// Noiseless distribution used for loss evaluation.
    [[nodiscard]] PolicyDistribution distribution(std::span<const double> obs) const;

    struct StepGradient {
        double loss = 0.0;              // step loss at the noiseless distribution
        std::size_t circuit_evals = 0;  // zero for the classical policy
    };

    /// Adds the gradient of the step loss at (obs, action) into `grad`
    /// (flat layout).
    StepGradient accumulate_step_gradient(std::span<const double> obs, int action,
                                         const StepLossWeights &weights,
                                         std::span<double> grad) const;

    [[nodiscard]] std::vector<double> flat_params() const;
    void set_flat_params(std::span<const double> flat);

    [[nodiscard]] const MlpParams *mlp() const noexcept { return std::get_if<MlpParams>(&impl_); }
    [[nodiscard]] const QuantumPolicyParams *quantum() const noexcept {
        return std::get_if<QuantumPolicyParams>(&impl_);
    }

  private:
    std::variant<MlpParams, QuantumPolicyParams> impl_;
};

} // namespace qpg
