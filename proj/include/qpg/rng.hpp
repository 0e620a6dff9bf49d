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

#include <cstdint>
#include <random>

namespace qpg {

/// Seeded random stream. A (seed, stream) pair fully determines the sequence,
/// so independent components (env resets, action sampling, sensor noise)
/// draw from separate streams of the same run seed.
class Rng {
  public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

    std::uint64_t next() { return engine_(); }

    /// Uniform on [0, 1). Consumes exactly one engine draw.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Gaussian sample. A zero standard deviation returns `mean` without
    /// consuming any draw.
    double normal(double mean, double stddev);

  private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Well-known stream identifiers for a single run seed.
namespace streams {
inline constexpr std::uint64_t kInit = 1;
inline constexpr std::uint64_t kEnvReset = 2;
inline constexpr std::uint64_t kActions = 3;
inline constexpr std::uint64_t kObservationNoise = 4;
inline constexpr std::uint64_t kMeasurementNoise = 5;
inline constexpr std::uint64_t kProcessNoise = 6;
} // namespace streams

/// Mixes several integers into one 64-bit seed (splitmix64 finalizer).
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b, std::uint64_t c = 0);

} // namespace qpg
