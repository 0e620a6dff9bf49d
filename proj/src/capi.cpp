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
#include "qpg/qpg.h"

#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "qpg/error.hpp"
#include "qpg/evaluation.hpp"
#include "qpg/run_store.hpp"

struct qpg_config {
    qpg::RunConfig value;
};

struct qpg_policy {
    qpg::Policy value;
};

namespace {

thread_local std::string g_last_error;

qpg_status to_status(qpg::ErrorCode code) {
    using qpg::ErrorCode;
    switch (code) {
    case ErrorCode::Config:
        return QPG_ERR_CONFIG;
    case ErrorCode::Shape:
        return QPG_ERR_SHAPE;
    case ErrorCode::Index:
        return QPG_ERR_INDEX;
    case ErrorCode::InvalidGate:
        return QPG_ERR_INVALID_GATE;
    case ErrorCode::Numeric:
        return QPG_ERR_NUMERIC;
    case ErrorCode::Protocol:
        return QPG_ERR_PROTOCOL;
    case ErrorCode::Io:
        return QPG_ERR_IO;
    case ErrorCode::Load:
        return QPG_ERR_LOAD;
    case ErrorCode::Exists:
        return QPG_ERR_EXISTS;
    }
    return QPG_ERR_INTERNAL;
}

qpg_status set_error(qpg_status status, std::string message) {
    g_last_error = std::move(message);
    return status;
}

// Runs `fn`, translating exceptions into status codes.
template <typename F> qpg_status guarded(F &&fn) noexcept {
    try {
        g_last_error.clear();
        fn();
        return QPG_OK;
    } catch (const qpg::Error &e) {
        return set_error(to_status(e.code()), e.what());
    } catch (const std::bad_alloc &) {
        return set_error(QPG_ERR_INTERNAL, "out of memory");
    } catch (const std::exception &e) {
        return set_error(QPG_ERR_INTERNAL, e.what());
    } catch (...) {
        return set_error(QPG_ERR_INTERNAL, "unknown failure");
    }
}

qpg_status null_argument(const char *what) {
    return set_error(QPG_ERR_INVALID_ARGUMENT, std::string(what) + " must not be NULL");
}

qpg_status copy_out(const std::string &s, char *buf, size_t cap, size_t *needed) {
    if (needed) {
        *needed = s.size() + 1;
    }
    if (!buf || cap == 0) {
        return set_error(QPG_ERR_BUFFER_TOO_SMALL, "output buffer is empty");
    }
    if (cap < s.size() + 1) {
        std::memcpy(buf, s.data(), cap - 1);
        buf[cap - 1] = '\0';
        return set_error(QPG_ERR_BUFFER_TOO_SMALL,
                         "output needs " + std::to_string(s.size() + 1) + " bytes");
    }
    std::memcpy(buf, s.data(), s.size());
    buf[s.size()] = '\0';
    return QPG_OK;
}

} // namespace

extern "C" {

const char *qpg_version(void) { return "1.0.0"; }

const char *qpg_status_string(qpg_status status) {
    switch (status) {
    case QPG_OK:
        return "ok";
    case QPG_ERR_INVALID_ARGUMENT:
        return "invalid argument";
    case QPG_ERR_CONFIG:
        return "configuration error";
    case QPG_ERR_SHAPE:
        return "shape error";
    case QPG_ERR_INDEX:
        return "index error";
    case QPG_ERR_INVALID_GATE:
        return "invalid gate";
    case QPG_ERR_NUMERIC:
        return "numeric error";
    case QPG_ERR_PROTOCOL:
        return "protocol violation";
    case QPG_ERR_IO:
        return "I/O error";
    case QPG_ERR_LOAD:
        return "load error";
    case QPG_ERR_EXISTS:
        return "already exists";
    case QPG_ERR_BUFFER_TOO_SMALL:
        return "buffer too small";
    case QPG_ERR_INTERNAL:
        return "internal error";
    }
    return "unknown status";
}

const char *qpg_last_error(void) { return g_last_error.c_str(); }

qpg_status qpg_config_create(qpg_config **out) {
    if (!out) {
        return null_argument("out");
    }
    return guarded([&] { *out = new qpg_config{}; });
}

void qpg_config_destroy(qpg_config *config) { delete config; }

qpg_status qpg_config_clone(const qpg_config *config, qpg_config **out) {
    if (!config || !out) {
        return null_argument("config/out");
    }
    return guarded([&] { *out = new qpg_config{config->value}; });
}

qpg_status qpg_config_set(qpg_config *config, const char *key, const char *value) {
    if (!config || !key || !value) {
        return null_argument("config/key/value");
    }
    return guarded([&] {
        qpg::RunConfig updated = config->value;
        qpg::set_run_config_value(updated, key, value);
        config->value = std::move(updated);
    });
}

qpg_status qpg_config_get(const qpg_config *config, const char *key, char *buf, size_t cap,
                          size_t *needed) {
    if (!config || !key) {
        return null_argument("config/key");
    }
    std::string value;
    const qpg_status st = guarded([&] { value = qpg::get_run_config_value(config->value, key); });
    return st == QPG_OK ? copy_out(value, buf, cap, needed) : st;
}

size_t qpg_config_key_count(void) { return qpg::run_config_keys().size(); }

const char *qpg_config_key_at(size_t index) {
    const auto &keys = qpg::run_config_keys();
    return index < keys.size() ? keys[index].c_str() : nullptr;
}

qpg_status qpg_config_validate(const qpg_config *config) {
    if (!config) {
        return null_argument("config");
    }
    return guarded([&] { config->value.validate(); });
}

qpg_status qpg_config_to_json(const qpg_config *config, char *buf, size_t cap, size_t *needed) {
    if (!config) {
        return null_argument("config");
    }
    std::string text;
    const qpg_status st = guarded([&] { text = qpg::run_config_to_json(config->value); });
    return st == QPG_OK ? copy_out(text, buf, cap, needed) : st;
}

qpg_status qpg_config_from_json(const char *json, qpg_config **out) {
    if (!json || !out) {
        return null_argument("json/out");
    }
    return guarded([&] { *out = new qpg_config{qpg::run_config_from_json(json)}; });
}

int qpg_config_equal(const qpg_config *a, const qpg_config *b) {
    if (!a || !b) {
        return 0;
    }
    return a->value == b->value ? 1 : 0;
}

qpg_status qpg_run_training(const qpg_config *config, const char *runs_dir, int overwrite,
                            int evaluate_after) {
    if (!config || !runs_dir) {
        return null_argument("config/runs_dir");
    }
    return guarded([&] {
        qpg::RunOptions options;
        options.overwrite = overwrite != 0;
        options.evaluate_after = evaluate_after != 0;
        qpg::run_training(config->value, runs_dir, options);
    });
}

qpg_status qpg_run_evaluation(const char *runs_dir, const char *exp,
                              const qpg_config *eval_config) {
    if (!runs_dir || !exp) {
        return null_argument("runs_dir/exp");
    }
    return guarded([&] {
        const qpg::EvalConfig eval = eval_config ? eval_config->value.eval : qpg::EvalConfig{};
        qpg::run_evaluation(runs_dir, exp, eval);
    });
}

qpg_status qpg_policy_load(const char *path, qpg_policy **out) {
    if (!path || !out) {
        return null_argument("path/out");
    }
    return guarded([&] { *out = new qpg_policy{qpg::load_weights(path)}; });
}

void qpg_policy_destroy(qpg_policy *policy) { delete policy; }

qpg_status qpg_policy_kind(const qpg_policy *policy, qpg_agent_kind *out) {
    if (!policy || !out) {
        return null_argument("policy/out");
    }
    *out = policy->value.kind() == qpg::AgentKind::Classical ? QPG_AGENT_CLASSICAL
                                                             : QPG_AGENT_QUANTUM;
    return QPG_OK;
}

qpg_status qpg_policy_parameter_count(const qpg_policy *policy, size_t *out) {
    if (!policy || !out) {
        return null_argument("policy/out");
    }
    *out = policy->value.parameter_count();
    return QPG_OK;
}

qpg_status qpg_policy_action_probs(const qpg_policy *policy, const double *obs, size_t obs_len,
                                   double *probs_out) {
    if (!policy || !obs || !probs_out) {
        return null_argument("policy/obs/probs_out");
    }
    return guarded([&] {
        const auto dist = policy->value.distribution(std::span<const double>(obs, obs_len));
        probs_out[0] = dist.probs[0];
        probs_out[1] = dist.probs[1];
    });
}

qpg_status qpg_count_parameters(qpg_agent_kind kind, size_t hidden, size_t qubits, size_t depth,
                                size_t *out) {
    if (!out) {
        return null_argument("out");
    }
    if (kind != QPG_AGENT_CLASSICAL && kind != QPG_AGENT_QUANTUM) {
        return set_error(QPG_ERR_CONFIG, "unknown agent kind");
    }
    qpg::AgentSpec shape;
    shape.hidden = hidden;
    shape.n_qubits = qubits;
    shape.depth = depth;
    *out = qpg::count_parameters(
        kind == QPG_AGENT_CLASSICAL ? qpg::AgentKind::Classical : qpg::AgentKind::Quantum, shape);
    return QPG_OK;
}

} // extern "C"
