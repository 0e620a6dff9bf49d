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
/* C interface to the qpg hybrid policy-gradient toolkit.
 *
 * All objects are opaque handles created and destroyed through this API.
 * Every fallible call returns a qpg_status; on failure a human-readable
 * message for the calling thread is available from qpg_last_error().
 * String outputs use caller-provided buffers: pass the capacity in `cap`,
 * and the required size (including the terminating NUL) is written to
 * `*needed` when it is non-NULL. A too-small buffer yields
 * QPG_ERR_BUFFER_TOO_SMALL and leaves the buffer NUL-terminated. */
#ifndef QPG_QPG_H
#define QPG_QPG_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(QPG_BUILDING_LIBRARY)
#define QPG_API __declspec(dllexport)
#else
#define QPG_API __declspec(dllimport)
#endif
#else
#define QPG_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qpg_status {
    QPG_OK = 0,
    QPG_ERR_INVALID_ARGUMENT = 1, /* NULL handle or pointer */
    QPG_ERR_CONFIG = 2,
    QPG_ERR_SHAPE = 3,
    QPG_ERR_INDEX = 4,
    QPG_ERR_INVALID_GATE = 5,
    QPG_ERR_NUMERIC = 6,
    QPG_ERR_PROTOCOL = 7,
    QPG_ERR_IO = 8,
    QPG_ERR_LOAD = 9,
    QPG_ERR_EXISTS = 10,
    QPG_ERR_BUFFER_TOO_SMALL = 11,
    QPG_ERR_INTERNAL = 12
} qpg_status;

typedef enum qpg_agent_kind { QPG_AGENT_CLASSICAL = 0, QPG_AGENT_QUANTUM = 1 } qpg_agent_kind;

typedef struct qpg_config qpg_config;
typedef struct qpg_policy qpg_policy;

QPG_API const char *qpg_version(void);
QPG_API const char *qpg_status_string(qpg_status status);
/* Message of the most recent failure on this thread ("" if none). */
QPG_API const char *qpg_last_error(void);

/* Run configuration ------------------------------------------------------ */

QPG_API qpg_status qpg_config_create(qpg_config **out);
QPG_API void qpg_config_destroy(qpg_config *config);
QPG_API qpg_status qpg_config_clone(const qpg_config *config, qpg_config **out);

/* Sets one field by its flat key ("agent", "episodes", "lr", "hidden", "exp",
 * "noise", "seed", ...). Lists use commas: "sigmas" = "0,0.02,0.05,0.1". */
QPG_API qpg_status qpg_config_set(qpg_config *config, const char *key, const char *value);
QPG_API qpg_status qpg_config_get(const qpg_config *config, const char *key, char *buf,
                                  size_t cap, size_t *needed);
/* Number of recognized keys and the key at `index`. */
QPG_API size_t qpg_config_key_count(void);
QPG_API const char *qpg_config_key_at(size_t index);

QPG_API qpg_status qpg_config_validate(const qpg_config *config);
/* Serialized form written to config.json. */
QPG_API qpg_status qpg_config_to_json(const qpg_config *config, char *buf, size_t cap,
                                      size_t *needed);
QPG_API qpg_status qpg_config_from_json(const char *json, qpg_config **out);
/* 1 when both configurations serialize identically, else 0. */
QPG_API int qpg_config_equal(const qpg_config *a, const qpg_config *b);

/* Runs ------------------------------------------------------------------- */

/* Trains into <runs_dir>/<exp>/. Fails with QPG_ERR_EXISTS if the directory
 * exists and `overwrite` is 0. When `evaluate_after` is non-zero the
 * configured noise sweep is run on the trained policy. */
QPG_API qpg_status qpg_run_training(const qpg_config *config, const char *runs_dir,
                                    int overwrite, int evaluate_after);

/* Re-evaluates a stored run. Only the evaluation keys of `eval_config`
 * ("rollouts", "sigmas", "eval_seeds", "argmax") are used; pass NULL for the
 * defaults. */
QPG_API qpg_status qpg_run_evaluation(const char *runs_dir, const char *exp,
                                      const qpg_config *eval_config);

/* Policies --------------------------------------------------------------- */

QPG_API qpg_status qpg_policy_load(const char *path, qpg_policy **out);
QPG_API void qpg_policy_destroy(qpg_policy *policy);
QPG_API qpg_status qpg_policy_kind(const qpg_policy *policy, qpg_agent_kind *out);
QPG_API qpg_status qpg_policy_parameter_count(const qpg_policy *policy, size_t *out);
/* Noiseless action probabilities for a raw 4-dimensional observation. */
QPG_API qpg_status qpg_policy_action_probs(const qpg_policy *policy, const double *obs,
                                           size_t obs_len, double *probs_out);

/* Trainable parameter count for a policy shape. `hidden` applies to the
 * classical agent; `qubits` and `depth` to the quantum one. */
QPG_API qpg_status qpg_count_parameters(qpg_agent_kind kind, size_t hidden, size_t qubits,
                                        size_t depth, size_t *out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* QPG_QPG_H */
