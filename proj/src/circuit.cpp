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
#include "qpg/circuit.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "qpg/error.hpp"

namespace qpg {

Statevector::Statevector(std::size_t n_qubits) : n_qubits_(n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
        fail(ErrorCode::Config, "statevector qubit count must be in [1, " +
                                    std::to_string(kMaxQubits) + "], got " +
                                    std::to_string(n_qubits));
    }
    amplitudes_.assign(std::size_t{1} << n_qubits, complex_t{0.0, 0.0});
    amplitudes_[0] = complex_t{1.0, 0.0};
}

void Statevector::set_amplitudes(std::span<const complex_t> amplitudes) {
    if (amplitudes.size() != amplitudes_.size()) {
        fail(ErrorCode::Shape, "expected " + std::to_string(amplitudes_.size()) +
                                   " amplitudes, got " + std::to_string(amplitudes.size()));
    }
    amplitudes_.assign(amplitudes.begin(), amplitudes.end());
}

void Statevector::check_qubit(std::size_t qubit) const {
    if (qubit >= n_qubits_) {
        fail(ErrorCode::Index, "qubit " + std::to_string(qubit) + " out of range for " +
                                   std::to_string(n_qubits_) + "-qubit register");
    }
}

void Statevector::apply_rotation(std::size_t qubit, Axis axis, double angle) {
    check_qubit(qubit);
    if (!std::isfinite(angle)) {
        fail(ErrorCode::Numeric, "rotation angle is not finite");
    }
    const double c = std::cos(angle / 2);
    const double s = std::sin(angle / 2);

    // 2x2 matrix [[m00, m01], [m10, m11]] of exp(-i angle P / 2).
    complex_t m00, m01, m10, m11;
    switch (axis) {
    case Axis::X:
        m00 = {c, 0};
        m01 = {0, -s};
        m10 = {0, -s};
        m11 = {c, 0};
        break;
    case Axis::Y:
        m00 = {c, 0};
        m01 = {-s, 0};
        m10 = {s, 0};
        m11 = {c, 0};
        break;
    case Axis::Z:
        m00 = {c, -s};
        m01 = {0, 0};
        m10 = {0, 0};
        m11 = {c, s};
        break;
    }

    const std::size_t st = stride(qubit);
    const std::size_t n = amplitudes_.size();
    for (std::size_t block = 0; block < n; block += 2 * st) {
        for (std::size_t i = block; i < block + st; ++i) {
            const complex_t a0 = amplitudes_[i];
            const complex_t a1 = amplitudes_[i + st];
            amplitudes_[i] = m00 * a0 + m01 * a1;
            amplitudes_[i + st] = m10 * a0 + m11 * a1;
        }
    }
}

void Statevector::apply_cnot(std::size_t control, std::size_t target) {
    check_qubit(control);
    check_qubit(target);
    if (control == target) {
        fail(ErrorCode::InvalidGate, "CNOT control and target must differ (both are qubit " +
                                         std::to_string(control) + ")");
    }
    const std::size_t cmask = stride(control);
    const std::size_t tmask = stride(target);
    for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
        // Visit each swapped pair once, from its target-bit-clear member.
        if ((i & cmask) != 0 && (i & tmask) == 0) {
            std::swap(amplitudes_[i], amplitudes_[i | tmask]);
        }
    }
}

double Statevector::expectation_z(std::size_t qubit) const {
    check_qubit(qubit);
    const std::size_t mask = stride(qubit);
    double acc = 0.0;
    for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
        const double p = std::norm(amplitudes_[i]);
        acc += (i & mask) ? -p : p;
    }
    return acc;
}

double Statevector::norm_squared() const noexcept {
    double acc = 0.0;
    for (const auto &a : amplitudes_) {
        acc += std::norm(a);
    }
    return acc;
}

void angle_embedding(Statevector &state, std::span<const double> scaled_obs, Axis axis) {
    if (scaled_obs.size() != state.n_qubits()) {
        fail(ErrorCode::Shape, "embedding expects " + std::to_string(state.n_qubits()) +
                                   " features, got " + std::to_string(scaled_obs.size()));
    }
    for (std::size_t i = 0; i < scaled_obs.size(); ++i) {
        if (!std::isfinite(scaled_obs[i])) {
            fail(ErrorCode::Numeric, "embedding feature " + std::to_string(i) + " is not finite");
        }
        state.apply_rotation(i, axis, scaled_obs[i]);
    }
}

VqcParams::VqcParams(std::size_t depth_, std::size_t n_qubits_, double embed_scale_,
                     Axis embedding_axis_)
    : depth(depth_), n_qubits(n_qubits_), angles(3 * depth_ * n_qubits_, 0.0),
      embed_scale(embed_scale_), embedding_axis(embedding_axis_) {}

VqcParams VqcParams::random(std::size_t depth, std::size_t n_qubits, Rng &rng,
                            double half_width, double embed_scale, Axis embedding_axis) {
    VqcParams p(depth, n_qubits, embed_scale, embedding_axis);
    for (auto &a : p.angles) {
        a = rng.uniform(-half_width, half_width);
    }
    return p;
}

void VqcParams::validate() const {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
        fail(ErrorCode::Config, "VQC qubit count must be in [1, " + std::to_string(kMaxQubits) +
                                    "], got " + std::to_string(n_qubits));
    }
    if (depth < 1) {
        fail(ErrorCode::Config, "VQC depth must be at least 1");
    }
    if (angles.size() != parameter_count()) {
        fail(ErrorCode::Shape, "VQC angle tensor has " + std::to_string(angles.size()) +
                                   " entries, expected " + std::to_string(parameter_count()));
    }
    for (double a : angles) {
        if (!std::isfinite(a)) {
            fail(ErrorCode::Numeric, "VQC angle is not finite");
        }
    }
    if (!(embed_scale > 0.0) || !std::isfinite(embed_scale)) {
        fail(ErrorCode::Config, "embedding scale must be a positive finite number");
    }
}

namespace {

void apply_ansatz(Statevector &state, const VqcParams &params) {
    const std::size_t d = params.n_qubits;
    for (std::size_t layer = 0; layer < params.depth; ++layer) {
        for (std::size_t q = 0; q < d; ++q) {
            state.apply_rotation(q, Axis::X, params.angle(layer, q, Axis::X));
            state.apply_rotation(q, Axis::Y, params.angle(layer, q, Axis::Y));
            state.apply_rotation(q, Axis::Z, params.angle(layer, q, Axis::Z));
        }
        for (std::size_t q = 0; q + 1 < d; ++q) {
            state.apply_cnot(q, q + 1);
        }
    }
}

} // namespace

Statevector prepare_vqc_state(std::span<const double> obs_scaled, const VqcParams &params) {
    params.validate();
    Statevector state(params.n_qubits);
    angle_embedding(state, obs_scaled, params.embedding_axis);
    apply_ansatz(state, params);
    return state;
}

double run_vqc(std::span<const double> obs_scaled, const VqcParams &params) {
    return prepare_vqc_state(obs_scaled, params).expectation_z(0);
}

double apply_measurement_noise(double z, const MeasurementNoiseModel &model, Rng &rng) {
    if (!(model.sigma_z >= 0.0) || !std::isfinite(model.sigma_z)) {
        fail(ErrorCode::Config, "measurement noise sigma_z must be a finite value >= 0");
    }
    return rng.normal(z, model.sigma_z);
}

GradientReport parameter_shift_gradient(std::span<const double> obs_scaled,
                                        const VqcParams &params) {
    params.validate();
    if (obs_scaled.size() != params.n_qubits) {
        fail(ErrorCode::Shape, "observation has " + std::to_string(obs_scaled.size()) +
                                   " entries, circuit has " + std::to_string(params.n_qubits) +
                                   " qubits");
    }

    // The embedded state is shared by every shifted evaluation.
    Statevector embedded(params.n_qubits);
    angle_embedding(embedded, obs_scaled, params.embedding_axis);

    const auto evaluate = [&](const VqcParams &p) {
        Statevector s = embedded;
        apply_ansatz(s, p);
        return s.expectation_z(0);
    };

    GradientReport report;
    report.value = evaluate(params);
    report.grads.resize(params.parameter_count());

    constexpr double kShift = std::numbers::pi / 2;
    VqcParams shifted = params;
    for (std::size_t k = 0; k < params.angles.size(); ++k) {
        const double original = params.angles[k];
        shifted.angles[k] = original + kShift;
        const double plus = evaluate(shifted);
        shifted.angles[k] = original - kShift;
        const double minus = evaluate(shifted);
        shifted.angles[k] = original;
        report.grads[k] = 0.5 * (plus - minus);
        report.shift_evals += 2;
    }
    return report;
}

} // namespace qpg
