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

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "qpg/rng.hpp"

namespace qpg {

using complex_t = std::complex<double>;

enum class Axis : std::uint8_t { X = 0, Y = 1, Z = 2 };

inline constexpr std::size_t kMaxQubits = 12;

/// Dense statevector over 2^n computational basis states.
///
/// Basis indexing is big-endian in qubit order: qubit 0 is the most
/// significant bit of the basis index. Rotations follow the e^{-i theta P / 2}
/// convention. A freshly constructed register holds |0...0>.
class Statevector {
  public:
    explicit Statevector(std::size_t n_qubits);

    [[nodiscard]] std::size_t n_qubits() const noexcept { return n_qubits_; }
    [[nodiscard]] std::size_t size() const noexcept { return amplitudes_.size(); }
    [[nodiscard]] std::span<const complex_t> amplitudes() const noexcept { return amplitudes_; }

    /// Replaces the amplitudes wholesale; length must be 2^n. Not renormalized.
    void set_amplitudes(std::span<const complex_t> amplitudes);

    void apply_rotation(std::size_t qubit, Axis axis, double angle);
    void apply_cnot(std::size_t control, std::size_t target);

    /// <Z> on `qubit`: probability of reading 0 minus probability of reading 1.
    [[nodiscard]] double expectation_z(std::size_t qubit) const;

    [[nodiscard]] double norm_squared() const noexcept;

  private:
    [[nodiscard]] std::size_t stride(std::size_t qubit) const noexcept {
        return std::size_t{1} << (n_qubits_ - 1 - qubit);
    }
    void check_qubit(std::size_t qubit) const;

    std::size_t n_qubits_;
    std::vector<complex_t> amplitudes_;
};

/// Encodes `scaled_obs[i]` as a single-qubit rotation on qubit i.
void angle_embedding(Statevector &state, std::span<const double> scaled_obs, Axis axis = Axis::X);

/// Trainable angles of the layered ansatz: per layer, every qubit gets
/// RX, RY, RZ (in that time order), then a CNOT ladder 0->1->...->(d-1).
struct VqcParams {
    std::size_t depth = 0;
    std::size_t n_qubits = 0;
    /// Flattened [layer][qubit][axis], axis order X, Y, Z.
    std::vector<double> angles;
    /// Observation scale applied before embedding (kappa).
    double embed_scale = 1.0;
    Axis embedding_axis = Axis::X;

    VqcParams() = default;
    VqcParams(std::size_t depth_, std::size_t n_qubits_, double embed_scale_ = 1.0,
              Axis embedding_axis_ = Axis::X);

    /// Small-angle start, uniform in [-half_width, half_width].
    static VqcParams random(std::size_t depth, std::size_t n_qubits, Rng &rng,
                            double half_width = 0.1, double embed_scale = 1.0,
                            Axis embedding_axis = Axis::X);

    [[nodiscard]] std::size_t parameter_count() const noexcept { return 3 * depth * n_qubits; }
    [[nodiscard]] static std::size_t index(std::size_t n_qubits, std::size_t layer,
                                           std::size_t qubit, Axis axis) noexcept {
        return (layer * n_qubits + qubit) * 3 + static_cast<std::size_t>(axis);
    }
    [[nodiscard]] double &angle(std::size_t layer, std::size_t qubit, Axis axis) {
        return angles[index(n_qubits, layer, qubit, axis)];
    }
    [[nodiscard]] double angle(std::size_t layer, std::size_t qubit, Axis axis) const {
        return angles[index(n_qubits, layer, qubit, axis)];
    }

    /// Throws a shape/config error unless the tensor is L x d x 3 of finite values.
    void validate() const;
};

/// Prepares |0...0>, embeds, applies the ansatz and returns <Z_0>.
[[nodiscard]] double run_vqc(std::span<const double> obs_scaled, const VqcParams &params);

/// Prepared state after embedding and ansatz; mainly for inspection and tests.
[[nodiscard]] Statevector prepare_vqc_state(std::span<const double> obs_scaled,
                                            const VqcParams &params);

struct MeasurementNoiseModel {
    double sigma_z = 0.0;
};

/// z + N(0, sigma_z^2). Output is deliberately not clamped to [-1, 1].
[[nodiscard]] double apply_measurement_noise(double z, const MeasurementNoiseModel &model,
                                             Rng &rng);

struct GradientReport {
    double value = 0.0;
    std::vector<double> grads;
    std::size_t shift_evals = 0;

    /// Forward pass plus shifted evaluations.
    [[nodiscard]] std::size_t circuit_evals() const noexcept { return shift_evals + 1; }
};

/// Exact d<Z_0>/d(theta_k) for every ansatz angle via the two-term shift rule
/// with shifts of +-pi/2. Embedding angles are not differentiated.
[[nodiscard]] GradientReport parameter_shift_gradient(std::span<const double> obs_scaled,
                                                      const VqcParams &params);

} // namespace qpg
