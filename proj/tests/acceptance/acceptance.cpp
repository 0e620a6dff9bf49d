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
// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
// Usage: qpg_acceptance [--allow-fail ACn]... [ACn ...]
// With no criterion ids every criterion runs. A criterion named by --allow-fail
// still prints its FAIL line but does not change the exit status.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numbers>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <unistd.h>

#include "oracle/dense_circuit.hpp"
#include "qpg/cartpole.hpp"
#include "qpg/circuit.hpp"
#include "qpg/evaluation.hpp"
#include "qpg/policy.hpp"
#include "qpg/run_store.hpp"
#include "qpg/trainer.hpp"

using namespace qpg;
namespace fs = std::filesystem;
using std::numbers::pi;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    const char *id;
    const char *title;
    double time_limit_seconds;
    std::function<Outcome()> check;
};

std::vector<double> uniform_vector(std::mt19937_64 &gen, std::size_t n, double lo, double hi) {
    std::uniform_real_distribution<double> d(lo, hi);
    std::vector<double> v(n);
    for (auto &x : v) {
        x = d(gen);
    }
    return v;
}

std::string fmt(const char *pattern, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, pattern, a, b, c);
    return buf;
}

double final_window_mean(const TrainResult &r, std::size_t window) {
    double sum = 0.0;
    for (std::size_t i = r.log.size() - window; i < r.log.size(); ++i) {
        sum += r.log[i].episode_return;
    }
    return sum / static_cast<double>(window);
}

// Episode loss from forward passes only, for finite differencing.
double forward_loss(const Trajectory &t, const Policy &policy, const TrainConfig &c) {
    double loss = 0.0;
    for (std::size_t i = 0; i < t.actions.size(); ++i) {
        const PolicyDistribution d = policy.distribution(t.observations[i]);
        loss -= t.advantages[i] * d.log_probs[static_cast<std::size_t>(t.actions[i])] +
                c.entropy_weight * d.entropy;
    }
    double sq = 0.0;
    for (double v : policy.flat_params()) {
        sq += v * v;
    }
    return loss + c.l2_weight * sq;
}

// Shared between the convergence and noise-sweep criteria.
std::optional<Policy> g_trained_mlp;

constexpr std::uint64_t kConvergenceSeeds[] = {42, 43, 44, 45, 46};

Outcome parameter_shift_exactness() {
    std::mt19937_64 gen(101);
    double worst = 0.0;
    std::size_t coords = 0;
    for (std::size_t depth : {2u, 3u, 4u}) {
        for (int draw = 0; draw < 20; ++draw) {
            const auto obs = uniform_vector(gen, 4, -pi, pi);
            VqcParams p(depth, 4);
            p.angles = uniform_vector(gen, p.parameter_count(), -pi, pi);
            const GradientReport report = parameter_shift_gradient(obs, p);
            for (std::size_t k = 0; k < p.angles.size(); ++k) {
                VqcParams plus = p, minus = p;
                plus.angles[k] += 1e-4;
                minus.angles[k] -= 1e-4;
                const double fd = (run_vqc(obs, plus) - run_vqc(obs, minus)) / 2e-4;
                worst = std::max(worst, std::abs(report.grads[k] - fd));
                ++coords;
            }
        }
    }
    return {worst <= 1e-6, fmt("%.0f coordinates, max |shift - FD| = %.2e", double(coords), worst)};
}

Outcome circuit_oracle_equivalence() {
    std::mt19937_64 gen(202);
    double worst = 0.0;
    for (int draw = 0; draw < 100; ++draw) {
        const std::size_t d = 1 + static_cast<std::size_t>(draw % 3);
        const std::size_t depth = 1 + static_cast<std::size_t>(gen() % 4);
        const auto obs = uniform_vector(gen, d, -pi, pi);
        VqcParams p(depth, d);
        p.angles = uniform_vector(gen, p.parameter_count(), -pi, pi);
        const double z = run_vqc(obs, p);
        worst = std::max(worst, std::abs(z - testing::dense_vqc_expectation(obs, p.angles, depth)));
    }
    return {worst <= 1e-10, fmt("100 draws, max deviation %.2e", worst)};
}

Outcome mlp_gradient_check() {
    std::mt19937_64 gen(303);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const TrainConfig config;
    double worst = 0.0;
    std::size_t coords = 0;
    for (int trial = 0; trial < 20; ++trial) {
        Trajectory t;
        const std::size_t len = 2 + gen() % 4;
        for (std::size_t i = 0; i < len; ++i) {
            t.observations.push_back({2.4 * u(gen), 3.0 * u(gen), 0.21 * u(gen), 3.0 * u(gen)});
            t.actions.push_back(static_cast<int>(gen() % 2));
            t.advantages.push_back(2.0 * u(gen));
        }
        Policy policy = make_initial_policy(AgentSpec{}, 500 + static_cast<std::uint64_t>(trial));
        const LossAndGradient analytic = episode_loss(t, policy, config);
        const std::vector<double> theta = policy.flat_params();
        for (std::size_t k = 0; k < theta.size(); ++k) {
            auto plus = theta, minus = theta;
            plus[k] += 1e-5;
            minus[k] -= 1e-5;
            policy.set_flat_params(plus);
            const double lp = forward_loss(t, policy, config);
            policy.set_flat_params(minus);
            const double lm = forward_loss(t, policy, config);
            const double fd = (lp - lm) / 2e-5;
            const double scale = std::max({std::abs(fd), std::abs(analytic.gradient[k]), 1e-6});
            worst = std::max(worst, std::abs(fd - analytic.gradient[k]) / scale);
            ++coords;
        }
        policy.set_flat_params(theta);
    }
    return {worst <= 1e-4, fmt("%.0f coordinates, max relative error %.2e", double(coords), worst)};
}

Outcome mlp_convergence() {
    int at_least_400 = 0, at_least_475 = 0;
    std::string detail = "final-50 means:";
    for (std::uint64_t seed : kConvergenceSeeds) {
        const TrainResult r = train(AgentSpec{}, TrainConfig{}, EnvConfig{}, seed);
        const double m = final_window_mean(r, 50);
        at_least_400 += m >= 400.0;
        at_least_475 += m >= 475.0;
        detail += fmt(" %.1f", m);
        if (seed == kConvergenceSeeds[0]) {
            g_trained_mlp = r.policy;
        }
    }
    detail += fmt(" (>=400: %.0f/5, >=475: %.0f/5)", at_least_400, at_least_475);
    return {at_least_400 >= 3 && at_least_475 >= 1, detail};
}

Outcome vqc_viability() {
    AgentSpec spec;
    spec.kind = AgentKind::Quantum;
    const TrainResult r = train(spec, TrainConfig{}, EnvConfig{}, 42);
    bool finite = true, clipped = true, evals = true;
    double max_post = 0.0;
    for (const auto &u : r.log) {
        finite &= std::isfinite(u.loss);
        clipped &= u.grad_norm_post_clip <= 1.0 + 1e-9;
        evals &= u.gradient_circuit_evals == 73 * u.episode_length;
        max_post = std::max(max_post, u.grad_norm_post_clip);
    }
    const bool ok = r.log.size() == 400 && finite && clipped && evals;
    return {ok, fmt("%.0f episodes, max post-clip norm %.6f, final-50 mean %.1f",
                    double(r.log.size()), max_post, final_window_mean(r, 50)) +
                    (evals ? ", 73 evaluations per timestep" : ", evaluation count mismatch")};
}

Outcome noise_sweep_shape() {
    if (!g_trained_mlp) {
        g_trained_mlp = train(AgentSpec{}, TrainConfig{}, EnvConfig{}, kConvergenceSeeds[0]).policy;
    }
    const EvalConfig config;
    const EvalReport report = evaluate(*g_trained_mlp, config);
    const std::vector<double> expected{0.0, 0.02, 0.05, 0.10};
    bool rows_ok = report.rows.size() == expected.size();
    for (std::size_t i = 0; rows_ok && i < expected.size(); ++i) {
        rows_ok = report.rows[i].sigma == expected[i] && report.rows[i].returns.size() == 100;
    }
    if (!rows_ok) {
        return {false, "unexpected noise rows"};
    }
    const double clean = report.rows.front().mean_return;
    const double noisy = report.rows.back().mean_return;
    return {noisy <= clean,
            fmt("mean return sigma=0.00: %.1f, sigma=0.10: %.1f (rows 0, 0.02, 0.05, 0.10; %.0f "
                "rollouts each)",
                clean, noisy, 100.0)};
}

Outcome parameter_counts() {
    AgentSpec spec;
    const std::size_t q = count_parameters(AgentKind::Quantum, spec);
    const std::size_t c = count_parameters(AgentKind::Classical, spec);
    return {q == 36 && c == 4610, fmt("quantum %.0f, classical %.0f", double(q), double(c))};
}

Outcome environment_physics() {
    const CartPoleState next = cartpole_dynamics({}, 1);
    const double e1 = std::abs(next.x_dot - 0.19512);
    const double e2 = std::abs(next.theta_dot + 0.29268);
    const bool hand = e1 <= 1e-5 && e2 <= 1e-5 && next.x == 0.0 && next.theta == 0.0;
    std::mt19937_64 gen(404);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const CartPoleState s{2.4 * u(gen), 3.0 * u(gen), 0.21 * u(gen), 3.0 * u(gen)};
        const int a = static_cast<int>(gen() % 2);
        const auto lhs =
            cartpole_dynamics({-s.x, -s.x_dot, -s.theta, -s.theta_dot}, 1 - a).as_array();
        const auto rhs = cartpole_dynamics(s, a).as_array();
        for (std::size_t k = 0; k < 4; ++k) {
            worst = std::max(worst, std::abs(lhs[k] + rhs[k]));
        }
    }
    return {hand && worst <= 1e-12,
            fmt("x_dot %.5f, theta_dot %.5f, mirror max deviation %.1e", next.x_dot,
                next.theta_dot, worst)};
}

Outcome determinism_and_persistence() {
    const fs::path root = fs::temp_directory_path() /
                          ("qpg_acceptance_" + std::to_string(::getpid()));
    fs::remove_all(root);
    RunConfig cfg;
    cfg.exp = "determinism";
    cfg.train.episodes = 60;
    RunOptions opts;
    opts.evaluate_after = false;
    const RunArtifacts first = run_training(cfg, root, opts);
    const std::string log1 = read_file(first.reward_log);
    opts.overwrite = true;
    const RunArtifacts second = run_training(cfg, root, opts);
    const bool logs_equal = read_file(second.reward_log) == log1;

    const Policy stored = load_weights(second.weights);
    const Policy original = train(cfg.agent, cfg.train, cfg.env_config(), cfg.seed).policy;
    const bool bits_equal = stored.flat_params() == original.flat_params();
    EvalConfig ec;
    ec.rollouts_per_point = 5;
    const EvalReport a = evaluate(original, ec);
    const EvalReport b = evaluate(stored, ec);
    bool replay = a.rows.size() == b.rows.size();
    for (std::size_t i = 0; replay && i < a.rows.size(); ++i) {
        replay = a.rows[i].returns == b.rows[i].returns;
    }
    fs::remove_all(root);
    std::string detail = logs_equal ? "reward logs byte-identical" : "reward logs differ";
    detail += bits_equal ? ", weights bit-exact" : ", weights differ";
    detail += replay ? ", evaluation replays identically" : ", evaluation replay differs";
    return {logs_equal && bits_equal && replay, detail};
}

Outcome invariant_suites() {
    constexpr int kCases = 1000;
    std::mt19937_64 gen(505);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    int failures = 0;

    // Statevector norm preservation.
    for (int i = 0; i < kCases; ++i) {
        const std::size_t d = 1 + gen() % 6;
        Statevector s(d);
        for (int g = 0; g < 60; ++g) {
            const std::size_t q = gen() % d;
            if (d > 1 && gen() % 4 == 0) {
                s.apply_cnot(q, (q + 1 + gen() % (d - 1)) % d);
            } else {
                s.apply_rotation(q, static_cast<Axis>(gen() % 3), 4 * pi * u(gen));
            }
        }
        failures += std::abs(s.norm_squared() - 1.0) > 1e-12;
    }
    // Probability simplex and entropy bounds for both policy heads.
    for (int i = 0; i < kCases; ++i) {
        const double scale = std::pow(10.0, 3.0 * u(gen));
        const std::array<double, 2> logits{scale * u(gen), scale * u(gen)};
        for (const PolicyDistribution &d :
             {categorical_from_logits(logits), bernoulli_from_expectation(u(gen))}) {
            failures += d.probs[0] < 0.0 || d.probs[1] < 0.0;
            failures += std::abs(d.probs[0] + d.probs[1] - 1.0) > 1e-12;
            failures += d.entropy < 0.0 || d.entropy > std::log(2.0);
        }
    }
    // Return recursion.
    for (int i = 0; i < kCases; ++i) {
        std::vector<double> r(1 + gen() % 300);
        for (auto &v : r) {
            v = 5.0 * u(gen);
        }
        const double gamma = 0.5 + 0.5 * std::abs(u(gen));
        const auto g = compute_returns(r, gamma);
        failures += g.back() != r.back();
        for (std::size_t t = 0; t + 1 < r.size(); ++t) {
            failures += g[t] != r[t] + gamma * g[t + 1];
        }
    }
    // Clipping contract.
    for (int i = 0; i < kCases; ++i) {
        std::vector<double> g(1 + gen() % 200);
        const double scale = std::pow(10.0, 3.0 * u(gen));
        for (auto &v : g) {
            v = scale * u(gen);
        }
        const auto before = g;
        const double tau = 0.1 + 5.0 * std::abs(u(gen));
        const ClipResult c = clip_gradient(g, tau);
        double sq = 0.0, dot = 0.0;
        for (std::size_t k = 0; k < g.size(); ++k) {
            sq += g[k] * g[k];
            dot += g[k] * before[k];
        }
        failures += std::sqrt(sq) > tau + 1e-9;
        if (c.norm_before > 0.0) {
            failures += std::abs(dot / (std::sqrt(sq) * c.norm_before) - 1.0) > 1e-12;
        }
    }
    return {failures == 0,
            fmt("%.0f cases per suite (norm, simplex, entropy, returns, clipping), %.0f failures",
                double(kCases), double(failures))};
}

} // namespace

int main(int argc, char **argv) {
    const std::vector<Criterion> criteria{
        {"AC1", "parameter-shift exactness", 30, parameter_shift_exactness},
        {"AC2", "circuit oracle equivalence", 10, circuit_oracle_equivalence},
        {"AC3", "MLP gradient check", 30, mlp_gradient_check},
        {"AC4", "MLP convergence", 300, mlp_convergence},
        {"AC5", "VQC training viability", 900, vqc_viability},
        {"AC6", "noise-sweep shape", 180, noise_sweep_shape},
        {"AC7", "parameter-count accounting", 1, parameter_counts},
        {"AC8", "environment physics", 5, environment_physics},
        {"AC9", "determinism and persistence", 60, determinism_and_persistence},
        {"AC10", "invariant suites", 60, invariant_suites},
    };
    std::set<std::string> selected, allowed;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--allow-fail" && i + 1 < argc) {
            allowed.insert(argv[++i]);
        } else {
            selected.insert(arg);
        }
    }

    int failed = 0;
    for (const auto &c : criteria) {
        if (!selected.empty() && !selected.count(c.id)) {
            continue;
        }
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.check();
        } catch (const std::exception &e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = secs <= c.time_limit_seconds;
        const bool pass = o.pass && in_time;
        const bool tolerated = !pass && allowed.count(c.id) > 0;
        failed += !pass && !tolerated;
        std::printf("%-4s %s  %s: %s [%.2fs%s]%s\n", c.id, pass ? "PASS" : "FAIL", c.title,
                    o.detail.c_str(), secs, in_time ? "" : ", over time limit",
                    tolerated ? " (known shortfall, tolerated by --allow-fail)" : "");
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
