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

#include <filesystem>
#include <string>
#include <vector>

#include <unistd.h>

#include "qpg/qpg.h"

namespace fs = std::filesystem;

namespace {

struct Config {
    qpg_config *ptr = nullptr;
    Config() { REQUIRE(qpg_config_create(&ptr) == QPG_OK); }
    explicit Config(qpg_config *p) : ptr(p) {}
    ~Config() { qpg_config_destroy(ptr); }
    Config(const Config &) = delete;
    Config &operator=(const Config &) = delete;
};

std::string get(const qpg_config *c, const char *key) {
    size_t needed = 0;
    qpg_config_get(c, key, nullptr, 0, &needed);
    std::string out(needed, '\0');
    REQUIRE(qpg_config_get(c, key, out.data(), out.size(), nullptr) == QPG_OK);
    out.resize(needed - 1);
    return out;
}

std::string to_json(const qpg_config *c) {
    size_t needed = 0;
    CHECK(qpg_config_to_json(c, nullptr, 0, &needed) == QPG_ERR_BUFFER_TOO_SMALL);
    std::string out(needed, '\0');
    REQUIRE(qpg_config_to_json(c, out.data(), out.size(), nullptr) == QPG_OK);
    out.resize(needed - 1);
    return out;
}

fs::path temp_root() {
    static int counter = 0;
    const fs::path p = fs::temp_directory_path() /
                       ("qpg_capi_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(p);
    return p;
}

} // namespace

TEST_CASE("status strings and version") {
    CHECK(std::string(qpg_version()).size() > 0);
    CHECK(std::string(qpg_status_string(QPG_OK)) == "ok");
    CHECK(std::string(qpg_status_string(QPG_ERR_LOAD)).size() > 0);
    CHECK(std::string(qpg_status_string(static_cast<qpg_status>(99))) == "unknown status");
}

TEST_CASE("null arguments are rejected") {
    CHECK(qpg_config_create(nullptr) == QPG_ERR_INVALID_ARGUMENT);
    CHECK(qpg_config_set(nullptr, "lr", "0.1") == QPG_ERR_INVALID_ARGUMENT);
    CHECK(std::string(qpg_last_error()).size() > 0);
    CHECK(qpg_run_training(nullptr, "x", 0, 0) == QPG_ERR_INVALID_ARGUMENT);
    qpg_config_destroy(nullptr);
    qpg_policy_destroy(nullptr);
}

TEST_CASE("configuration keys, values and errors") {
    Config c;
    CHECK(qpg_config_key_count() > 20);
    CHECK(qpg_config_key_at(qpg_config_key_count()) == nullptr);
    CHECK(get(c.ptr, "seed") == "42");
    CHECK(get(c.ptr, "episodes") == "400");
    CHECK(get(c.ptr, "agent") == "classical");
    CHECK(qpg_config_set(c.ptr, "lr", "0.01") == QPG_OK);
    CHECK(get(c.ptr, "lr") == "0.01");
    CHECK(qpg_config_set(c.ptr, "lr", "fast") == QPG_ERR_CONFIG);
    CHECK(std::string(qpg_last_error()).find("lr") != std::string::npos);
    CHECK(qpg_config_set(c.ptr, "unknown_key", "1") == QPG_ERR_CONFIG);
    CHECK(qpg_config_set(c.ptr, "agent", "banana") == QPG_ERR_CONFIG);

    char tiny[3];
    size_t needed = 0;
    CHECK(qpg_config_get(c.ptr, "agent", tiny, sizeof tiny, &needed) == QPG_ERR_BUFFER_TOO_SMALL);
    CHECK(needed == std::string("classical").size() + 1);
    CHECK(std::string(tiny) == "cl");

    for (size_t i = 0; i < qpg_config_key_count(); ++i) {
        const char *key = qpg_config_key_at(i);
        REQUIRE(key != nullptr);
        const std::string value = get(c.ptr, key);
        CHECK_MESSAGE(qpg_config_set(c.ptr, key, value.c_str()) == QPG_OK, key);
    }
}

TEST_CASE("clone, JSON round trip and equality") {
    Config a;
    REQUIRE(qpg_config_set(a.ptr, "agent", "quantum") == QPG_OK);
    REQUIRE(qpg_config_set(a.ptr, "sigmas", "0,0.05") == QPG_OK);
    qpg_config *raw = nullptr;
    REQUIRE(qpg_config_clone(a.ptr, &raw) == QPG_OK);
    Config b(raw);
    CHECK(qpg_config_equal(a.ptr, b.ptr) == 1);
    REQUIRE(qpg_config_set(b.ptr, "seed", "1") == QPG_OK);
    CHECK(qpg_config_equal(a.ptr, b.ptr) == 0);

    const std::string text = to_json(a.ptr);
    qpg_config *parsed = nullptr;
    REQUIRE(qpg_config_from_json(text.c_str(), &parsed) == QPG_OK);
    Config c(parsed);
    CHECK(qpg_config_equal(a.ptr, c.ptr) == 1);
    qpg_config *bad = nullptr;
    CHECK(qpg_config_from_json("{]", &bad) != QPG_OK);
    CHECK(bad == nullptr);
}

TEST_CASE("validation") {
    Config c;
    CHECK(qpg_config_validate(c.ptr) == QPG_OK);
    REQUIRE(qpg_config_set(c.ptr, "agent", "quantum") == QPG_OK);
    REQUIRE(qpg_config_set(c.ptr, "qubits", "3") == QPG_OK);
    CHECK(qpg_config_validate(c.ptr) == QPG_ERR_CONFIG);
}

TEST_CASE("parameter counts") {
    size_t n = 0;
    CHECK(qpg_count_parameters(QPG_AGENT_CLASSICAL, 64, 0, 0, &n) == QPG_OK);
    CHECK(n == 4610);
    CHECK(qpg_count_parameters(QPG_AGENT_QUANTUM, 0, 4, 3, &n) == QPG_OK);
    CHECK(n == 36);
    CHECK(qpg_count_parameters(QPG_AGENT_QUANTUM, 0, 4, 3, nullptr) == QPG_ERR_INVALID_ARGUMENT);
}

TEST_CASE("train, load the policy and evaluate through the C interface") {
    const fs::path root = temp_root();
    Config c;
    REQUIRE(qpg_config_set(c.ptr, "exp", "capi_run") == QPG_OK);
    REQUIRE(qpg_config_set(c.ptr, "episodes", "4") == QPG_OK);
    REQUIRE(qpg_config_set(c.ptr, "hidden", "8") == QPG_OK);
    REQUIRE(qpg_config_set(c.ptr, "rollouts", "2") == QPG_OK);
    REQUIRE(qpg_run_training(c.ptr, root.c_str(), 0, 1) == QPG_OK);
    CHECK(fs::exists(root / "capi_run" / "eval_report.json"));
    CHECK(qpg_run_training(c.ptr, root.c_str(), 0, 0) == QPG_ERR_EXISTS);
    CHECK(std::string(qpg_last_error()).find("capi_run") != std::string::npos);

    qpg_policy *policy = nullptr;
    const std::string weights = (root / "capi_run" / "policy_classical.json").string();
    REQUIRE(qpg_policy_load(weights.c_str(), &policy) == QPG_OK);
    qpg_agent_kind kind{};
    CHECK(qpg_policy_kind(policy, &kind) == QPG_OK);
    CHECK(kind == QPG_AGENT_CLASSICAL);
    size_t count = 0;
    CHECK(qpg_policy_parameter_count(policy, &count) == QPG_OK);
    CHECK(count == 4 * 8 + 8 + 64 + 8 + 16 + 2);
    const double obs[4] = {0.0, 0.1, -0.02, 0.3};
    double probs[2] = {0, 0};
    CHECK(qpg_policy_action_probs(policy, obs, 4, probs) == QPG_OK);
    CHECK(probs[0] + probs[1] == doctest::Approx(1.0));
    CHECK(qpg_policy_action_probs(policy, obs, 3, probs) == QPG_ERR_SHAPE);
    qpg_policy_destroy(policy);

    qpg_policy *missing = nullptr;
    CHECK(qpg_policy_load((root / "nope.json").c_str(), &missing) == QPG_ERR_LOAD);

    Config eval;
    REQUIRE(qpg_config_set(eval.ptr, "sigmas", "0") == QPG_OK);
    REQUIRE(qpg_config_set(eval.ptr, "rollouts", "1") == QPG_OK);
    CHECK(qpg_run_evaluation(root.c_str(), "capi_run", eval.ptr) == QPG_OK);
    CHECK(qpg_run_evaluation(root.c_str(), "absent", nullptr) == QPG_ERR_LOAD);
    fs::remove_all(root);
}
