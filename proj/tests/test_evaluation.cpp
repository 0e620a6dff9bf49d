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
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "qpg/error.hpp"
#include "qpg/evaluation.hpp"

using namespace qpg;

namespace {

// Mean episode length of the always-left policy, simulated from scratch with the
// textbook equations over uniformly drawn starting states.
double reference_always_left_return(int samples) {
    std::mt19937_64 gen(2718);
    std::uniform_real_distribution<double> u(-0.05, 0.05);
    const double g = 9.8, mc = 1.0, mp = 0.1, l = 0.5, f = -10.0, dt = 0.02;
    const double limit = 12.0 * 2.0 * std::acos(-1.0) / 360.0;
    double total = 0.0;
    for (int i = 0; i < samples; ++i) {
        double x = u(gen), xd = u(gen), th = u(gen), thd = u(gen);
        int steps = 0;
        while (true) {
            const double temp = (f + mp * l * thd * thd * std::sin(th)) / (mc + mp);
            const double tha = (g * std::sin(th) - std::cos(th) * temp) /
                               (l * (4.0 / 3.0 - mp * std::cos(th) * std::cos(th) / (mc + mp)));
            const double xa = temp - mp * l * tha * std::cos(th) / (mc + mp);
            x += dt * xd;
            xd += dt * xa;
            th += dt * thd;
            thd += dt * tha;
            ++steps;
            if (std::abs(x) > 2.4 || std::abs(th) > limit || steps >= 500) {
                break;
            }
        }
        total += steps;
    }
    return total / samples;
}

int always_left(std::span<const double>, Rng &) { return 0; }

int balancer(std::span<const double> s, Rng &) {
    return 0.1 * s[0] + 0.5 * s[1] + 3.0 * s[2] + s[3] > 0.0 ? 1 : 0;
}

} // namespace

TEST_SUITE("evaluation") {
    TEST_CASE("always-left policy: short episodes and no successes") {
        const EvalConfig cfg;
        const auto report = evaluate(ActionSelector(always_left), cfg);
        REQUIRE(report.rows.size() == 4);
        const double reference = reference_always_left_return(20000);
        CHECK(reference > 8.0);
        CHECK(reference < 11.0);
        const auto &clean = report.rows.front();
        CHECK(clean.sigma == 0.0);
        CHECK(clean.returns.size() == 100);
        CHECK(std::abs(clean.mean_return - reference) < 0.5);
        CHECK(clean.success_rate == 0.0);
        for (const auto &row : report.rows) {
            CHECK(row.success_rate == 0.0);
        }
    }

    TEST_CASE("balancing controller succeeds on every rollout") {
        EvalConfig cfg;
        cfg.rollouts_per_point = 4;
        cfg.noise_levels = {0.0};
        const auto report = evaluate(ActionSelector(balancer), cfg);
        CHECK(report.rows[0].mean_return == 500.0);
        CHECK(report.rows[0].std_return == 0.0);
        CHECK(report.rows[0].success_rate == 1.0);
    }

    TEST_CASE("rows come out sorted and statistics match the raw returns") {
        EvalConfig cfg;
        cfg.rollouts_per_point = 3;
        cfg.seeds = {7, 8};
        cfg.noise_levels = {0.1, 0.0, 0.05};
        const Policy policy = make_initial_policy(AgentSpec{}, 1);
        const auto report = evaluate(policy, cfg);
        REQUIRE(report.rows.size() == 3);
        CHECK(report.rows[0].sigma == 0.0);
        CHECK(report.rows[1].sigma == 0.05);
        CHECK(report.rows[2].sigma == 0.1);
        CHECK(report.agent_kind == "classical");
        CHECK(report.parameter_count == 4610);
        for (const auto &row : report.rows) {
            REQUIRE(row.returns.size() == 6);
            double mean = 0.0;
            for (double r : row.returns) {
                mean += r / 6.0;
            }
            double var = 0.0;
            for (double r : row.returns) {
                var += (r - mean) * (r - mean) / 6.0;
            }
            CHECK(row.mean_return == doctest::Approx(mean));
            CHECK(row.std_return == doctest::Approx(std::sqrt(var)));
            CHECK(row.std_return >= 0.0);
            CHECK(row.success_rate >= 0.0);
            CHECK(row.success_rate <= 1.0);
        }
    }

    TEST_CASE("noise-free rollouts ignore the sigma-independent noise stream") {
        // At sigma = 0 the rollout is fully determined by (seed, rollout index).
        const ActionSelector sel(always_left);
        const auto a = evaluation_rollout(sel, 0.0, 3, 2);
        const auto b = evaluation_rollout(sel, 0.0, 3, 2);
        CHECK(a.episode_return == b.episode_return);
        CHECK(a.length == static_cast<int>(a.episode_return));
        bool any_different = false;
        for (std::size_t m = 0; m < 10; ++m) {
            any_different |= evaluation_rollout(sel, 0.0, 3, m).length != a.length;
        }
        CHECK(any_different);
    }

    TEST_CASE("evaluation noise does not leak into the training environment") {
        const EnvConfig training;
        const ActionSelector sel(balancer);
        (void)evaluation_rollout(sel, 0.1, 1, 0, training);
        CHECK(training.observation_noise.sigma == 0.0);
        CartPole env(training);
        env.reset(4);
        const auto r = env.step(1);
        CHECK(r.next_obs == env.state().as_array());
    }

    TEST_CASE("identical configuration replays identically") {
        EvalConfig cfg;
        cfg.rollouts_per_point = 2;
        const Policy policy = make_initial_policy(AgentSpec{}, 2);
        const auto a = evaluate(policy, cfg);
        const auto b = evaluate(policy, cfg);
        for (std::size_t i = 0; i < a.rows.size(); ++i) {
            CHECK(a.rows[i].returns == b.rows[i].returns);
        }
        cfg.deterministic_actions = true;
        const auto greedy = evaluate(policy, cfg);
        CHECK(greedy.deterministic_actions);
    }

    TEST_CASE("configuration errors") {
        EvalConfig none;
        none.rollouts_per_point = 0;
        CHECK_THROWS_AS(none.validate(), Error);
        EvalConfig no_seeds;
        no_seeds.seeds.clear();
        CHECK_THROWS_AS(no_seeds.validate(), Error);
        EvalConfig negative;
        negative.noise_levels = {0.0, -0.1};
        try {
            negative.validate();
            FAIL("expected a configuration error");
        } catch (const Error &e) {
            CHECK(e.code() == ErrorCode::Config);
        }
    }
}

TEST_SUITE("efficiency accounting") {
    TEST_CASE("parameter counts") {
        AgentSpec spec;
        CHECK(count_parameters(AgentKind::Classical, spec) == 4610);
        CHECK(count_parameters(AgentKind::Quantum, spec) == 36);
        spec.depth = 2;
        CHECK(count_parameters(AgentKind::Quantum, spec) == 24);
        spec.hidden = 32;
        CHECK(count_parameters(AgentKind::Classical, spec) == 4 * 32 + 32 + 32 * 32 + 32 + 64 + 2);
    }

    TEST_CASE("circuit evaluations per step") {
        CHECK(circuit_evals_per_step(36) == 73);
        CHECK(circuit_evals_per_step(24) == 49);
    }

    TEST_CASE("quantum profile counts 73 evaluations per timestep") {
        std::vector<UpdateReport> log(3);
        const std::size_t lengths[] = {10, 25, 7};
        for (std::size_t i = 0; i < 3; ++i) {
            log[i].episode_length = lengths[i];
            log[i].gradient_circuit_evals = 73 * lengths[i];
            log[i].wall_clock_seconds = 0.5;
        }
        const auto q = efficiency_profile(log, AgentKind::Quantum);
        CHECK(q.total_steps == 42);
        CHECK(q.wall_clock_seconds == doctest::Approx(1.5));
        REQUIRE(q.evals_per_episode.has_value());
        CHECK((*q.evals_per_episode)[1] == 73 * 25);
        CHECK(*q.total_circuit_evals == 73 * 42);
        const auto c = efficiency_profile(log, AgentKind::Classical);
        CHECK_FALSE(c.evals_per_episode.has_value());
        CHECK_FALSE(c.total_circuit_evals.has_value());
    }

    TEST_CASE("a short quantum run matches the accounting") {
        TrainConfig c;
        c.episodes = 2;
        AgentSpec spec;
        spec.kind = AgentKind::Quantum;
        const auto r = train(spec, c, EnvConfig{}, 4);
        const auto p = efficiency_profile(r.log, AgentKind::Quantum);
        CHECK(*p.total_circuit_evals == 73 * p.total_steps);
    }

    TEST_CASE("training-log summary over a window") {
        std::vector<UpdateReport> log(4);
        const double returns[] = {10.0, 500.0, 300.0, 500.0};
        for (std::size_t i = 0; i < 4; ++i) {
            log[i].episode_return = returns[i];
            log[i].episode_length = static_cast<std::size_t>(returns[i]);
        }
        const auto all = summarize_training_log(log);
        CHECK(all.mean_return == doctest::Approx(327.5));
        CHECK(all.success_rate == 0.5);
        const auto last = summarize_training_log(log, 2);
        CHECK(last.mean_return == 400.0);
        CHECK(last.std_return == 100.0);
        CHECK(last.success_rate == 0.5);
    }
}
