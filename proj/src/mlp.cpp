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
#include "qpg/mlp.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "qpg/error.hpp"
#include "qpg/policy.hpp"

namespace qpg {

MlpParams::MlpParams(std::size_t h)
    : hidden(h), w1(h * kObsDim, 0.0), b1(h, 0.0), w2(h * h, 0.0), b2(h, 0.0),
      w3(kNumActions * h, 0.0), b3(kNumActions, 0.0) {}

MlpParams MlpParams::random(std::size_t h, Rng &rng) {
    MlpParams p(h);
    const auto fill = [&rng](std::vector<double> &v, std::size_t fan_in) {
        const double a = 1.0 / std::sqrt(static_cast<double>(fan_in));
        for (auto &x : v) {
            x = rng.uniform(-a, a);
        }
    };
    fill(p.w1, kObsDim);
    fill(p.b1, kObsDim);
    fill(p.w2, h);
    fill(p.b2, h);
    fill(p.w3, h);
    fill(p.b3, h);
    return p;
}

std::vector<double> MlpParams::flat() const {
    std::vector<double> out;
    out.reserve(parameter_count());
    for (const auto *v : {&w1, &b1, &w2, &b2, &w3, &b3}) {
        out.insert(out.end(), v->begin(), v->end());
    }
    return out;
}

MlpParams MlpParams::from_flat(std::size_t h, std::span<const double> flat) {
    if (flat.size() != count_for(h)) {
        fail(ErrorCode::Shape, "MLP with hidden width " + std::to_string(h) + " needs " +
                                   std::to_string(count_for(h)) + " parameters, got " +
                                   std::to_string(flat.size()));
    }
    MlpParams p(h);
    auto it = flat.begin();
    for (auto *v : {&p.w1, &p.b1, &p.w2, &p.b2, &p.w3, &p.b3}) {
        std::copy(it, it + static_cast<std::ptrdiff_t>(v->size()), v->begin());
        it += static_cast<std::ptrdiff_t>(v->size());
    }
    return p;
}

void MlpParams::validate() const {
    if (hidden == 0) {
        fail(ErrorCode::Config, "MLP hidden width must be positive");
    }
    const MlpParams shape(hidden);
    if (w1.size() != shape.w1.size() || b1.size() != shape.b1.size() ||
        w2.size() != shape.w2.size() || b2.size() != shape.b2.size() ||
        w3.size() != shape.w3.size() || b3.size() != shape.b3.size()) {
        fail(ErrorCode::Shape, "MLP parameter blocks do not match hidden width " +
                                   std::to_string(hidden));
    }
    for (const auto *v : {&w1, &b1, &w2, &b2, &w3, &b3}) {
        for (double x : *v) {
            if (!std::isfinite(x)) {
                fail(ErrorCode::Numeric, "MLP parameter is not finite");
            }
        }
    }
}

namespace {

// out = act(W x + b) for a row-major [rows][cols] matrix.
void affine(const std::vector<double> &w, const std::vector<double> &b,
            std::span<const double> x, std::span<double> out) {
    const std::size_t cols = x.size();
    for (std::size_t r = 0; r < out.size(); ++r) {
        double acc = b[r];
        const double *row = w.data() + r * cols;
        for (std::size_t c = 0; c < cols; ++c) {
            acc += row[c] * x[c];
        }
        out[r] = acc;
    }
}

void check_finite(std::span<const double> v, const char *layer) {
    for (double x : v) {
        if (!std::isfinite(x)) {
            fail(ErrorCode::Numeric, std::string("non-finite activation in MLP layer ") + layer);
        }
    }
}

} // namespace

PolicyDistribution mlp_forward(std::span<const double> obs, const MlpParams &params,
                               MlpActivations *activations) {
    if (obs.size() != kObsDim) {
        fail(ErrorCode::Shape, "MLP expects a " + std::to_string(kObsDim) +
                                   "-dimensional observation, got " + std::to_string(obs.size()));
    }
    check_finite(obs, "input");
    const std::size_t h = params.hidden;
    MlpActivations local;
    MlpActivations &act = activations ? *activations : local;
    act.h1.resize(h);
    act.h2.resize(h);

    affine(params.w1, params.b1, obs, act.h1);
    for (auto &v : act.h1) {
        v = std::tanh(v);
    }
    check_finite(act.h1, "h1");
    affine(params.w2, params.b2, act.h1, act.h2);
    for (auto &v : act.h2) {
        v = std::tanh(v);
    }
    check_finite(act.h2, "h2");
    std::array<double, kNumActions> logits{};
    affine(params.w3, params.b3, act.h2, logits);
    check_finite(logits, "logits");
    return categorical_from_logits(logits);
}

void mlp_backward_logits(std::span<const double> obs, const MlpParams &params,
                         const MlpActivations &act, std::span<const double> dlogits,
                         MlpParams &grad) {
    const std::size_t h = params.hidden;

    // Output layer.
    std::vector<double> dh2(h, 0.0);
    for (std::size_t r = 0; r < kNumActions; ++r) {
        const double g = dlogits[r];
        grad.b3[r] += g;
        for (std::size_t c = 0; c < h; ++c) {
            grad.w3[r * h + c] += g * act.h2[c];
            dh2[c] += params.w3[r * h + c] * g;
        }
    }

    // Second hidden layer; tanh' = 1 - tanh^2.
    std::vector<double> dh1(h, 0.0);
    for (std::size_t r = 0; r < h; ++r) {
        const double g = dh2[r] * (1.0 - act.h2[r] * act.h2[r]);
        grad.b2[r] += g;
        const double *row = params.w2.data() + r * h;
        double *grow = grad.w2.data() + r * h;
        for (std::size_t c = 0; c < h; ++c) {
            grow[c] += g * act.h1[c];
            dh1[c] += row[c] * g;
        }
    }

    for (std::size_t r = 0; r < h; ++r) {
        const double g = dh1[r] * (1.0 - act.h1[r] * act.h1[r]);
        grad.b1[r] += g;
        for (std::size_t c = 0; c < kObsDim; ++c) {
            grad.w1[r * kObsDim + c] += g * obs[c];
        }
    }
}

MlpParams mlp_backward(std::span<const double> obs, int action, double advantage_weight,
                       const MlpParams &params) {
    if (action != 0 && action != 1) {
        fail(ErrorCode::Config, "action must be 0 or 1, got " + std::to_string(action));
    }
    MlpActivations act;
    const PolicyDistribution dist = mlp_forward(obs, params, &act);
    // d(-log softmax_a)/dlogits = probs - onehot(a).
    std::array<double, kNumActions> dlogits{};
    for (std::size_t k = 0; k < kNumActions; ++k) {
        const double onehot = static_cast<int>(k) == action ? 1.0 : 0.0;
        dlogits[k] = advantage_weight * (dist.probs[k] - onehot);
    }
    MlpParams grad(params.hidden);
    mlp_backward_logits(obs, params, act, dlogits, grad);
    return grad;
}

} // namespace qpg
