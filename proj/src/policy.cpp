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
#include "qpg/policy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qpg/error.hpp"

namespace qpg {

PolicyDistribution categorical_from_logits(std::span<const double, kNumActions> logits) {
    PolicyDistribution d;
    const double m = std::max(logits[0], logits[1]);
    double sum = 0.0;
    for (std::size_t k = 0; k < kNumActions; ++k) {
        sum += std::exp(logits[k] - m);
    }
    const double log_sum = std::log(sum);
    double entropy = 0.0;
    for (std::size_t k = 0; k < kNumActions; ++k) {
        d.logits[k] = logits[k];
        d.log_probs[k] = logits[k] - m - log_sum;
        d.probs[k] = std::exp(d.log_probs[k]);
        if (d.probs[k] > 0.0) {
            entropy -= d.probs[k] * d.log_probs[k];
        }
    }
    d.entropy = std::clamp(entropy, 0.0, std::numbers::ln2);
    return d;
}

PolicyDistribution bernoulli_from_expectation(double z) {
    const std::array<double, kNumActions> logits{-z, z};
    return categorical_from_logits(logits);
}

void NormalizationSpec::validate() const {
    if (s_max.empty()) {
        fail(ErrorCode::Config, "normalization bound vector is empty");
    }
    for (double s : s_max) {
        if (!(s > 0.0) || !std::isfinite(s)) {
            fail(ErrorCode::Config, "normalization bound s_max must be positive and finite");
        }
    }
    if (!(kappa > 0.0) || !std::isfinite(kappa)) {
        fail(ErrorCode::Config, "normalization scale kappa must be positive and finite");
    }
}

std::vector<double> normalize_state(std::span<const double> obs, const NormalizationSpec &spec) {
    spec.validate();
    if (obs.size() != spec.s_max.size()) {
        fail(ErrorCode::Shape, "observation has " + std::to_string(obs.size()) +
                                   " entries, normalization expects " +
                                   std::to_string(spec.s_max.size()));
    }
    std::vector<double> out(obs.size());
    for (std::size_t i = 0; i < obs.size(); ++i) {
        if (!std::isfinite(obs[i])) {
            fail(ErrorCode::Numeric, "observation entry " + std::to_string(i) + " is not finite");
        }
        const double s = spec.s_max[i];
        out[i] = std::clamp(obs[i], -s, s) * (spec.kappa * std::numbers::pi / s);
    }
    return out;
}

PolicyDistribution vqc_policy(std::span<const double> obs, const VqcParams &params,
                              const NormalizationSpec &spec, const MeasurementNoiseModel &noise,
                              Rng *noise_rng, double *z_out) {
    const std::vector<double> scaled = normalize_state(obs, spec);
    const double z = run_vqc(scaled, params);
    if (z_out) {
        *z_out = z;
    }
    double z_noisy = z;
    if (noise.sigma_z != 0.0) {
        if (!noise_rng) {
            fail(ErrorCode::Config, "measurement noise enabled without a random stream");
        }
        z_noisy = apply_measurement_noise(z, noise, *noise_rng);
    }
    return bernoulli_from_expectation(z_noisy);
}

namespace {

void check_action(int action) {
    if (action != 0 && action != 1) {
        fail(ErrorCode::Config, "action must be 0 or 1, got " + std::to_string(action));
    }
}

double sigmoid(double x) {
    if (x >= 0) {
        return 1.0 / (1.0 + std::exp(-x));
    }
    const double e = std::exp(x);
    return e / (1.0 + e);
}

// d(step loss)/dz for the Bernoulli policy pi(a=1) = sigmoid(2z).
//   d log pi(a) / dz = 2 (a - p1)
//   dH / dz          = -4 z p1 (1 - p1)
double step_loss_dz(double z, int action, const StepLossWeights &w) {
    const double p1 = sigmoid(2.0 * z);
    const double dlogp = 2.0 * (static_cast<double>(action) - p1);
    const double dentropy = -4.0 * z * p1 * (1.0 - p1);
    return -w.logprob_weight * dlogp - w.entropy_weight * dentropy;
}

double step_loss(const PolicyDistribution &dist, int action, const StepLossWeights &w) {
    return -w.logprob_weight * dist.log_probs[static_cast<std::size_t>(action)] -
           w.entropy_weight * dist.entropy;
}

} // namespace

VqcGradient vqc_logprob_gradient(std::span<const double> obs, int action,
                                 double advantage_weight, const VqcParams &params,
                                 const NormalizationSpec &spec) {
    check_action(action);
    const std::vector<double> scaled = normalize_state(obs, spec);
    GradientReport report = parameter_shift_gradient(scaled, params);
    const double dz = step_loss_dz(report.value, action, {advantage_weight, 0.0});
    VqcGradient out;
    out.grads = std::move(report.grads);
    for (auto &g : out.grads) {
        g *= dz;
    }
    out.circuit_evals = report.circuit_evals();
    return out;
}

int sample_action(const PolicyDistribution &dist, Rng &rng) {
    return rng.uniform() < dist.probs[1] ? 1 : 0;
}

int greedy_action(const PolicyDistribution &dist) {
    return dist.probs[1] > dist.probs[0] ? 1 : 0;
}

const char *to_string(AgentKind kind) noexcept {
    return kind == AgentKind::Classical ? "classical" : "quantum";
}

AgentKind agent_kind_from_string(std::string_view name) {
    if (name == "classical") {
        return AgentKind::Classical;
    }
    if (name == "quantum") {
        return AgentKind::Quantum;
    }
    fail(ErrorCode::Config, "unknown agent kind '" + std::string(name) +
                                "' (expected classical or quantum)");
}

Policy::Policy(MlpParams mlp) : impl_(std::move(mlp)) {
    std::get<MlpParams>(impl_).validate();
}

Policy::Policy(QuantumPolicyParams quantum) : impl_(std::move(quantum)) {
    const auto &q = std::get<QuantumPolicyParams>(impl_);
    q.circuit.validate();
    q.normalization.validate();
    if (q.normalization.s_max.size() != q.circuit.n_qubits) {
        fail(ErrorCode::Shape, "normalization dimension does not match the qubit count");
    }
    if (q.normalization.kappa != q.circuit.embed_scale) {
        fail(ErrorCode::Config, "normalization kappa and circuit embedding scale disagree");
    }
    if (!(q.noise.sigma_z >= 0.0)) {
        fail(ErrorCode::Config, "measurement noise sigma_z must be >= 0");
    }
}

AgentKind Policy::kind() const noexcept {
    return std::holds_alternative<MlpParams>(impl_) ? AgentKind::Classical : AgentKind::Quantum;
}

std::size_t Policy::parameter_count() const noexcept {
    if (const auto *m = mlp()) {
        return m->parameter_count();
    }
    return quantum()->circuit.parameter_count();
}

PolicyDistribution Policy::act_distribution(std::span<const double> obs, Rng *noise_rng) const {
    if (const auto *m = mlp()) {
        return mlp_forward(obs, *m);
    }
    const auto &q = *quantum();
    return vqc_policy(obs, q.circuit, q.normalization, q.noise, noise_rng);
}

PolicyDistribution Policy::distribution(std::span<const double> obs) const {
    if (const auto *m = mlp()) {
        return mlp_forward(obs, *m);
    }
    const auto &q = *quantum();
    return vqc_policy(obs, q.circuit, q.normalization, MeasurementNoiseModel{}, nullptr);
}

Policy::StepGradient Policy::accumulate_step_gradient(std::span<const double> obs, int action,
                                             const StepLossWeights &weights,
                                             std::span<double> grad) const {
    check_action(action);
    if (grad.size() != parameter_count()) {
        fail(ErrorCode::Shape, "gradient buffer has " + std::to_string(grad.size()) +
                                   " entries, policy has " + std::to_string(parameter_count()));
    }
    if (const auto *m = mlp()) {
        MlpActivations act;
        const PolicyDistribution dist = mlp_forward(obs, *m, &act);
        std::array<double, kNumActions> dlogits{};
        for (std::size_t k = 0; k < kNumActions; ++k) {
            const double onehot = static_cast<int>(k) == action ? 1.0 : 0.0;
            // -w log p_a      -> w (p_k - onehot_k)
            // -beta H         -> beta p_k (log p_k + H)
            dlogits[k] = weights.logprob_weight * (dist.probs[k] - onehot) +
                         weights.entropy_weight * dist.probs[k] *
                             (dist.log_probs[k] + dist.entropy);
        }
        MlpParams g(m->hidden);
        mlp_backward_logits(obs, *m, act, dlogits, g);
        const std::vector<double> flat = g.flat();
        for (std::size_t i = 0; i < flat.size(); ++i) {
            grad[i] += flat[i];
        }
        return {step_loss(dist, action, weights), 0};
    }

    const auto &q = *quantum();
    const std::vector<double> scaled = normalize_state(obs, q.normalization);
    const GradientReport report = parameter_shift_gradient(scaled, q.circuit);
    const double dz = step_loss_dz(report.value, action, weights);
    for (std::size_t i = 0; i < report.grads.size(); ++i) {
        grad[i] += dz * report.grads[i];
    }
    return {step_loss(bernoulli_from_expectation(report.value), action, weights),
            report.circuit_evals()};
}

std::vector<double> Policy::flat_params() const {
    if (const auto *m = mlp()) {
        return m->flat();
    }
    return quantum()->circuit.angles;
}

void Policy::set_flat_params(std::span<const double> flat) {
    if (auto *m = std::get_if<MlpParams>(&impl_)) {
        *m = MlpParams::from_flat(m->hidden, flat);
        return;
    }
    auto &q = std::get<QuantumPolicyParams>(impl_);
    if (flat.size() != q.circuit.angles.size()) {
        fail(ErrorCode::Shape, "VQC needs " + std::to_string(q.circuit.angles.size()) +
                                   " angles, got " + std::to_string(flat.size()));
    }
    q.circuit.angles.assign(flat.begin(), flat.end());
}

} // namespace qpg
