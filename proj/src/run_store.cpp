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
#include "qpg/run_store.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include <nlohmann/json.hpp>

#include "qpg/error.hpp"

namespace qpg {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
    double v = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size() || text.empty()) {
        fail(ErrorCode::Config, "malformed number '" + std::string(text) + "'");
    }
    return v;
}

namespace {

std::uint64_t parse_uint(std::string_view text) {
    std::uint64_t v = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size() || text.empty()) {
        fail(ErrorCode::Config, "malformed non-negative integer '" + std::string(text) + "'");
    }
    return v;
}

bool parse_bool(std::string_view text) {
    if (text == "true" || text == "1") {
        return true;
    }
    if (text == "false" || text == "0") {
        return false;
    }
    fail(ErrorCode::Config, "malformed boolean '" + std::string(text) + "'");
}

std::vector<std::string_view> split_list(std::string_view text) {
    std::vector<std::string_view> out;
    while (!text.empty()) {
        const auto pos = text.find(',');
        out.push_back(text.substr(0, pos));
        if (pos == std::string_view::npos) {
            break;
        }
        text.remove_prefix(pos + 1);
    }
    return out;
}

template <typename T, typename F> std::string join(const std::vector<T> &values, F &&fmt) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) {
            out += ',';
        }
        out += fmt(values[i]);
    }
    return out;
}

Axis axis_from_string(std::string_view s) {
    if (s == "X" || s == "x") {
        return Axis::X;
    }
    if (s == "Y" || s == "y") {
        return Axis::Y;
    }
    fail(ErrorCode::Config, "embedding axis must be X or Y, got '" + std::string(s) + "'");
}

const char *axis_to_string(Axis a) {
    switch (a) {
    case Axis::X:
        return "X";
    case Axis::Y:
        return "Y";
    case Axis::Z:
        return "Z";
    }
    return "X";
}

json parse_json(std::string_view text, ErrorCode code, const std::string &what) {
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::exception &e) {
        fail(code, what + " is not valid JSON: " + e.what());
    }
}

} // namespace

bool is_valid_experiment_name(std::string_view name) {
    if (name.empty() || name == "." || name == ".." || name.size() > 128) {
        return false;
    }
    for (char c : name) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                        c == '_' || c == '-' || c == '.';
        if (!ok) {
            return false;
        }
    }
    return true;
}

void RunConfig::validate() const {
    if (!is_valid_experiment_name(exp)) {
        fail(ErrorCode::Config, "experiment name '" + exp +
                                    "' must be non-empty and use only [A-Za-z0-9._-]");
    }
    if (!(noise >= 0.0) || !std::isfinite(noise)) {
        fail(ErrorCode::Config, "training noise must be a finite value >= 0");
    }
    if (train.episodes < 1) {
        fail(ErrorCode::Config, "episodes must be positive");
    }
    if (agent.hidden < 1) {
        fail(ErrorCode::Config, "hidden width must be positive");
    }
    if (agent.depth < 1 || agent.n_qubits < 1 || agent.n_qubits > kMaxQubits) {
        fail(ErrorCode::Config, "circuit depth and qubit count must be positive (qubits <= 12)");
    }
    if (agent.kind == AgentKind::Quantum && agent.n_qubits != kObsDim) {
        fail(ErrorCode::Config, "the CartPole observation needs exactly 4 qubits");
    }
    if (agent.s_max.size() != kObsDim) {
        fail(ErrorCode::Config, "s_max must have 4 entries");
    }
    NormalizationSpec{agent.s_max, agent.kappa}.validate();
    if (!(agent.sigma_z >= 0.0)) {
        fail(ErrorCode::Config, "sigma_z must be >= 0");
    }
    train.validate();
    eval.validate();
}

EnvConfig RunConfig::env_config() const {
    EnvConfig env;
    env.observation_noise.sigma = noise;
    if (quadratic_reward) {
        env.reward.quadratic = QuadraticReward{};
    }
    return env;
}

EnvConfig RunConfig::eval_env_config() const {
    EnvConfig env = env_config();
    env.observation_noise.sigma = 0.0;
    return env;
}

bool operator==(const RunConfig &a, const RunConfig &b) {
    return run_config_to_json(a) == run_config_to_json(b);
}

std::string run_config_to_json(const RunConfig &c) {
    json j;
    j["schema_version"] = kConfigSchemaVersion;
    j["agent"] = to_string(c.agent.kind);
    j["exp"] = c.exp;
    j["seed"] = c.seed;
    j["noise"] = c.noise;
    j["reward_mode"] = c.quadratic_reward ? "quadratic" : "unit";
    j["model"] = {
        {"hidden", c.agent.hidden},
        {"qubits", c.agent.n_qubits},
        {"depth", c.agent.depth},
        {"kappa", c.agent.kappa},
        {"embedding_axis", axis_to_string(c.agent.embedding_axis)},
        {"s_max", c.agent.s_max},
        {"sigma_z", c.agent.sigma_z},
        {"vqc_init_half_width", c.agent.vqc_init_half_width},
    };
    j["train"] = {
        {"episodes", c.train.episodes},
        {"lr", c.train.lr0},
        {"lr_decay", c.train.lr_decay},
        {"gamma", c.train.gamma},
        {"entropy_weight", c.train.entropy_weight},
        {"l2_weight", c.train.l2_weight},
        {"clip", c.train.clip_threshold},
        {"baseline_decay", c.train.baseline_decay},
        {"batch_episodes", c.train.batch_episodes},
        {"standardize_advantages", c.train.standardize_advantages},
        {"optimizer", to_string(c.train.optimizer)},
        {"adam_beta1", c.train.adam_beta1},
        {"adam_beta2", c.train.adam_beta2},
        {"adam_epsilon", c.train.adam_epsilon},
    };
    j["eval"] = {
        {"rollouts", c.eval.rollouts_per_point},
        {"sigmas", c.eval.noise_levels},
        {"seeds", c.eval.seeds},
        {"argmax", c.eval.deterministic_actions},
    };
    return j.dump(2) + "\n";
}

RunConfig run_config_from_json(std::string_view text) {
    const json j = parse_json(text, ErrorCode::Load, "config");
    try {
        const int version = j.at("schema_version").get<int>();
        if (version != kConfigSchemaVersion) {
            fail(ErrorCode::Load, "config schema_version " + std::to_string(version) +
                                      " is not supported (expected " +
                                      std::to_string(kConfigSchemaVersion) + ")");
        }
        RunConfig c;
        c.agent.kind = agent_kind_from_string(j.at("agent").get<std::string>());
        c.exp = j.at("exp").get<std::string>();
        c.seed = j.at("seed").get<std::uint64_t>();
        c.noise = j.at("noise").get<double>();
        const auto mode = j.at("reward_mode").get<std::string>();
        if (mode != "unit" && mode != "quadratic") {
            fail(ErrorCode::Load, "unknown reward_mode '" + mode + "'");
        }
        c.quadratic_reward = mode == "quadratic";

        const json &m = j.at("model");
        c.agent.hidden = m.at("hidden").get<std::size_t>();
        c.agent.n_qubits = m.at("qubits").get<std::size_t>();
        c.agent.depth = m.at("depth").get<std::size_t>();
        c.agent.kappa = m.at("kappa").get<double>();
        c.agent.embedding_axis = axis_from_string(m.at("embedding_axis").get<std::string>());
        c.agent.s_max = m.at("s_max").get<std::vector<double>>();
        c.agent.sigma_z = m.at("sigma_z").get<double>();
        c.agent.vqc_init_half_width = m.at("vqc_init_half_width").get<double>();

        const json &t = j.at("train");
        c.train.episodes = t.at("episodes").get<std::size_t>();
        c.train.lr0 = t.at("lr").get<double>();
        c.train.lr_decay = t.at("lr_decay").get<double>();
        c.train.gamma = t.at("gamma").get<double>();
        c.train.entropy_weight = t.at("entropy_weight").get<double>();
        c.train.l2_weight = t.at("l2_weight").get<double>();
        c.train.clip_threshold = t.at("clip").get<double>();
        c.train.baseline_decay = t.at("baseline_decay").get<double>();
        c.train.batch_episodes = t.at("batch_episodes").get<std::size_t>();
        c.train.standardize_advantages = t.at("standardize_advantages").get<bool>();
        c.train.optimizer = optimizer_kind_from_string(t.at("optimizer").get<std::string>());
        c.train.adam_beta1 = t.at("adam_beta1").get<double>();
        c.train.adam_beta2 = t.at("adam_beta2").get<double>();
        c.train.adam_epsilon = t.at("adam_epsilon").get<double>();

        const json &e = j.at("eval");
        c.eval.rollouts_per_point = e.at("rollouts").get<std::size_t>();
        c.eval.noise_levels = e.at("sigmas").get<std::vector<double>>();
        c.eval.seeds = e.at("seeds").get<std::vector<std::uint64_t>>();
        c.eval.deterministic_actions = e.at("argmax").get<bool>();
        return c;
    } catch (const json::exception &e) {
        fail(ErrorCode::Load, std::string("config is missing or has malformed fields: ") + e.what());
    }
}

const std::vector<std::string> &run_config_keys() {
    static const std::vector<std::string> keys{
        "agent",          "exp",        "seed",           "noise",
        "reward_mode",    "hidden",     "qubits",         "depth",
        "kappa",          "embedding_axis", "s_max",      "sigma_z",
        "vqc_init_half_width", "episodes", "lr",           "lr_decay",
        "gamma",          "entropy_weight", "l2_weight",  "clip",
        "baseline_decay", "batch_episodes", "standardize_advantages", "optimizer",
        "adam_beta1",     "adam_beta2", "adam_epsilon",   "rollouts",
        "sigmas",         "eval_seeds", "argmax"};
    return keys;
}

namespace {

void assign_run_config_value(RunConfig &c, std::string_view key, std::string_view value) {
    const std::string v(value);
    if (key == "agent") {
        c.agent.kind = agent_kind_from_string(value);
    } else if (key == "exp") {
        if (!is_valid_experiment_name(value)) {
            fail(ErrorCode::Config, "experiment name '" + v +
                                        "' must be non-empty and use only [A-Za-z0-9._-]");
        }
        c.exp = v;
    } else if (key == "seed") {
        c.seed = parse_uint(value);
    } else if (key == "noise") {
        c.noise = parse_double(value);
        if (!(c.noise >= 0.0)) {
            fail(ErrorCode::Config, "noise must be >= 0");
        }
    } else if (key == "reward_mode") {
        if (value != "unit" && value != "quadratic") {
            fail(ErrorCode::Config, "reward_mode must be unit or quadratic");
        }
        c.quadratic_reward = value == "quadratic";
    } else if (key == "hidden") {
        c.agent.hidden = parse_uint(value);
        if (c.agent.hidden < 1) {
            fail(ErrorCode::Config, "hidden must be positive");
        }
    } else if (key == "qubits") {
        c.agent.n_qubits = parse_uint(value);
    } else if (key == "depth") {
        c.agent.depth = parse_uint(value);
        if (c.agent.depth < 1) {
            fail(ErrorCode::Config, "depth must be positive");
        }
    } else if (key == "kappa") {
        c.agent.kappa = parse_double(value);
    } else if (key == "embedding_axis") {
        c.agent.embedding_axis = axis_from_string(value);
    } else if (key == "s_max") {
        std::vector<double> s;
        for (auto part : split_list(value)) {
            s.push_back(parse_double(part));
        }
        c.agent.s_max = std::move(s);
    } else if (key == "sigma_z") {
        c.agent.sigma_z = parse_double(value);
    } else if (key == "vqc_init_half_width") {
        c.agent.vqc_init_half_width = parse_double(value);
    } else if (key == "episodes") {
        c.train.episodes = parse_uint(value);
        if (c.train.episodes < 1) {
            fail(ErrorCode::Config, "episodes must be positive");
        }
    } else if (key == "lr") {
        c.train.lr0 = parse_double(value);
    } else if (key == "lr_decay") {
        c.train.lr_decay = parse_double(value);
    } else if (key == "gamma") {
        c.train.gamma = parse_double(value);
    } else if (key == "entropy_weight") {
        c.train.entropy_weight = parse_double(value);
    } else if (key == "l2_weight") {
        c.train.l2_weight = parse_double(value);
    } else if (key == "clip") {
        c.train.clip_threshold = parse_double(value);
    } else if (key == "baseline_decay") {
        c.train.baseline_decay = parse_double(value);
    } else if (key == "batch_episodes") {
        c.train.batch_episodes = parse_uint(value);
    } else if (key == "standardize_advantages") {
        c.train.standardize_advantages = parse_bool(value);
    } else if (key == "optimizer") {
        c.train.optimizer = optimizer_kind_from_string(value);
    } else if (key == "adam_beta1") {
        c.train.adam_beta1 = parse_double(value);
    } else if (key == "adam_beta2") {
        c.train.adam_beta2 = parse_double(value);
    } else if (key == "adam_epsilon") {
        c.train.adam_epsilon = parse_double(value);
    } else if (key == "rollouts") {
        c.eval.rollouts_per_point = parse_uint(value);
    } else if (key == "sigmas") {
        std::vector<double> s;
        for (auto part : split_list(value)) {
            s.push_back(parse_double(part));
        }
        c.eval.noise_levels = std::move(s);
    } else if (key == "eval_seeds") {
        std::vector<std::uint64_t> s;
        for (auto part : split_list(value)) {
            s.push_back(parse_uint(part));
        }
        c.eval.seeds = std::move(s);
    } else if (key == "argmax") {
        c.eval.deterministic_actions = parse_bool(value);
    } else {
        fail(ErrorCode::Config, "unknown configuration key '" + std::string(key) + "'");
    }
}

} // namespace

void set_run_config_value(RunConfig &c, std::string_view key, std::string_view value) {
    try {
        assign_run_config_value(c, key, value);
    } catch (const Error &e) {
        const std::string_view what = e.what();
        if (what.starts_with("unknown configuration key") || what.starts_with(key)) {
            throw;
        }
        fail(e.code(), std::string(key) + ": " + e.what());
    }
}

std::string get_run_config_value(const RunConfig &c, std::string_view key) {
    const auto num = [](double v) { return format_double(v); };
    const auto uns = [](std::uint64_t v) { return std::to_string(v); };
    if (key == "agent") return to_string(c.agent.kind);
    if (key == "exp") return c.exp;
    if (key == "seed") return uns(c.seed);
    if (key == "noise") return num(c.noise);
    if (key == "reward_mode") return c.quadratic_reward ? "quadratic" : "unit";
    if (key == "hidden") return uns(c.agent.hidden);
    if (key == "qubits") return uns(c.agent.n_qubits);
    if (key == "depth") return uns(c.agent.depth);
    if (key == "kappa") return num(c.agent.kappa);
    if (key == "embedding_axis") return axis_to_string(c.agent.embedding_axis);
    if (key == "s_max") return join(c.agent.s_max, num);
    if (key == "sigma_z") return num(c.agent.sigma_z);
    if (key == "vqc_init_half_width") return num(c.agent.vqc_init_half_width);
    if (key == "episodes") return uns(c.train.episodes);
    if (key == "lr") return num(c.train.lr0);
    if (key == "lr_decay") return num(c.train.lr_decay);
    if (key == "gamma") return num(c.train.gamma);
    if (key == "entropy_weight") return num(c.train.entropy_weight);
    if (key == "l2_weight") return num(c.train.l2_weight);
    if (key == "clip") return num(c.train.clip_threshold);
    if (key == "baseline_decay") return num(c.train.baseline_decay);
    if (key == "batch_episodes") return uns(c.train.batch_episodes);
    if (key == "standardize_advantages") return c.train.standardize_advantages ? "true" : "false";
    if (key == "optimizer") return to_string(c.train.optimizer);
    if (key == "adam_beta1") return num(c.train.adam_beta1);
    if (key == "adam_beta2") return num(c.train.adam_beta2);
    if (key == "adam_epsilon") return num(c.train.adam_epsilon);
    if (key == "rollouts") return uns(c.eval.rollouts_per_point);
    if (key == "sigmas") return join(c.eval.noise_levels, num);
    if (key == "eval_seeds") return join(c.eval.seeds, uns);
    if (key == "argmax") return c.eval.deterministic_actions ? "true" : "false";
    fail(ErrorCode::Config, "unknown configuration key '" + std::string(key) + "'");
}

// Weights -------------------------------------------------------------------

std::string weights_filename(AgentKind kind) {
    return std::string("policy_") + to_string(kind) + ".json";
}

std::string weights_to_json(const Policy &policy) {
    json j;
    j["schema_version"] = kWeightsSchemaVersion;
    j["agent_kind"] = to_string(policy.kind());
    if (const auto *m = policy.mlp()) {
        j["shape"] = {{"input", kObsDim}, {"hidden", m->hidden}, {"actions", kNumActions}};
    } else {
        const auto &q = *policy.quantum();
        j["shape"] = {
            {"qubits", q.circuit.n_qubits},
            {"depth", q.circuit.depth},
            {"embed_scale", format_double(q.circuit.embed_scale)},
            {"embedding_axis", axis_to_string(q.circuit.embedding_axis)},
            {"s_max", join(q.normalization.s_max, [](double v) { return format_double(v); })},
            {"sigma_z", format_double(q.noise.sigma_z)},
        };
    }
    json flat = json::array();
    for (double v : policy.flat_params()) {
        flat.push_back(format_double(v));
    }
    j["flat_params"] = std::move(flat);
    return j.dump() + "\n";
}

Policy weights_from_json(std::string_view text) {
    const std::string expect =
        " (expected weights schema_version " + std::to_string(kWeightsSchemaVersion) + ")";
    const json j = parse_json(text, ErrorCode::Load, "weights file" + expect);
    try {
        const int version = j.at("schema_version").get<int>();
        if (version != kWeightsSchemaVersion) {
            fail(ErrorCode::Load,
                 "weights schema_version " + std::to_string(version) + " is not supported" + expect);
        }
        std::vector<double> flat;
        for (const auto &v : j.at("flat_params")) {
            flat.push_back(parse_double(v.get<std::string>()));
        }
        const json &shape = j.at("shape");
        const AgentKind kind = agent_kind_from_string(j.at("agent_kind").get<std::string>());
        if (kind == AgentKind::Classical) {
            return Policy(MlpParams::from_flat(shape.at("hidden").get<std::size_t>(), flat));
        }
        QuantumPolicyParams q;
        q.circuit = VqcParams(shape.at("depth").get<std::size_t>(),
                              shape.at("qubits").get<std::size_t>(),
                              parse_double(shape.at("embed_scale").get<std::string>()),
                              axis_from_string(shape.at("embedding_axis").get<std::string>()));
        if (flat.size() != q.circuit.angles.size()) {
            fail(ErrorCode::Load, "weights file has " + std::to_string(flat.size()) +
                                      " angles, shape needs " +
                                      std::to_string(q.circuit.angles.size()) + expect);
        }
        q.circuit.angles = std::move(flat);
        q.normalization.kappa = q.circuit.embed_scale;
        q.normalization.s_max.clear();
        for (auto part : split_list(shape.at("s_max").get<std::string>())) {
            q.normalization.s_max.push_back(parse_double(part));
        }
        q.noise.sigma_z = parse_double(shape.at("sigma_z").get<std::string>());
        return Policy(std::move(q));
    } catch (const json::exception &e) {
        fail(ErrorCode::Load, std::string("weights file is malformed: ") + e.what() + expect);
    } catch (const Error &e) {
        if (e.code() == ErrorCode::Load) {
            throw;
        }
        fail(ErrorCode::Load, std::string("weights file is corrupt: ") + e.what() + expect);
    }
}

void save_weights(const Policy &policy, const fs::path &path) {
    write_file_atomic(path, weights_to_json(policy));
}

Policy load_weights(const fs::path &path) {
    if (!fs::exists(path)) {
        fail(ErrorCode::Load, "weights file " + path.string() + " not found (expected weights "
                              "schema_version " + std::to_string(kWeightsSchemaVersion) + ")");
    }
    try {
        return weights_from_json(read_file(path));
    } catch (const Error &e) {
        fail(e.code(), path.string() + ": " + e.what());
    }
}

// Reports -------------------------------------------------------------------

std::string eval_report_to_json(const EvalReport &r) {
    json j;
    j["schema_version"] = kEvalReportSchemaVersion;
    j["agent_kind"] = r.agent_kind;
    j["parameter_count"] = r.parameter_count;
    j["train_wall_clock_seconds"] =
        r.train_wall_clock_seconds ? json(*r.train_wall_clock_seconds) : json(nullptr);
    j["vqc_circuit_evaluations"] =
        r.vqc_circuit_evaluations ? json(*r.vqc_circuit_evaluations) : json(nullptr);
    j["summary_source"] = r.summary_source;
    j["rollouts_per_point"] = r.rollouts_per_point;
    j["seeds"] = r.seeds;
    j["deterministic_actions"] = r.deterministic_actions;
    json rows = json::array();
    for (const auto &row : r.rows) {
        rows.push_back({{"sigma", row.sigma},
                        {"mean_return", row.mean_return},
                        {"std_return", row.std_return},
                        {"success_rate", row.success_rate},
                        {"returns", row.returns}});
    }
    j["rows"] = std::move(rows);
    return j.dump(2) + "\n";
}

EvalReport eval_report_from_json(std::string_view text) {
    const json j = parse_json(text, ErrorCode::Load, "evaluation report");
    try {
        if (j.at("schema_version").get<int>() != kEvalReportSchemaVersion) {
            fail(ErrorCode::Load, "unsupported evaluation report schema_version");
        }
        EvalReport r;
        r.agent_kind = j.at("agent_kind").get<std::string>();
        r.parameter_count = j.at("parameter_count").get<std::size_t>();
        if (!j.at("train_wall_clock_seconds").is_null()) {
            r.train_wall_clock_seconds = j.at("train_wall_clock_seconds").get<double>();
        }
        if (!j.at("vqc_circuit_evaluations").is_null()) {
            r.vqc_circuit_evaluations = j.at("vqc_circuit_evaluations").get<std::uint64_t>();
        }
        r.summary_source = j.at("summary_source").get<std::string>();
        r.rollouts_per_point = j.at("rollouts_per_point").get<std::size_t>();
        r.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
        r.deterministic_actions = j.at("deterministic_actions").get<bool>();
        for (const auto &row : j.at("rows")) {
            NoiseRow nr;
            nr.sigma = row.at("sigma").get<double>();
            nr.mean_return = row.at("mean_return").get<double>();
            nr.std_return = row.at("std_return").get<double>();
            nr.success_rate = row.at("success_rate").get<double>();
            nr.returns = row.at("returns").get<std::vector<double>>();
            r.rows.push_back(std::move(nr));
        }
        return r;
    } catch (const json::exception &e) {
        fail(ErrorCode::Load, std::string("evaluation report is malformed: ") + e.what());
    }
}

std::string noise_sweep_csv(const EvalReport &r) {
    std::string out(kNoiseSweepHeader);
    out += '\n';
    for (const auto &row : r.rows) {
        out += format_double(row.sigma) + ',' + format_double(row.mean_return) + ',' +
               format_double(row.std_return) + ',' + format_double(row.success_rate) + '\n';
    }
    return out;
}

std::string reward_log_row(const UpdateReport &r) {
    return std::to_string(r.episode) + ',' + format_double(r.episode_return) + ',' +
           format_double(r.loss) + ',' + format_double(r.grad_norm_pre_clip) + ',' +
           format_double(r.lr_used) + '\n';
}

// Files ---------------------------------------------------------------------

void write_file_atomic(const fs::path &path, std::string_view contents) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            fail(ErrorCode::Io, "cannot open " + tmp.string() + " for writing");
        }
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        out.flush();
        if (!out) {
            fail(ErrorCode::Io, "failed writing " + tmp.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fail(ErrorCode::Io, "cannot rename " + tmp.string() + " to " + path.string() + ": " +
                                ec.message());
    }
}

std::string read_file(const fs::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        fail(ErrorCode::Io, "cannot open " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Runs ----------------------------------------------------------------------

namespace {

RunArtifacts artifact_paths(const fs::path &dir, AgentKind kind) {
    RunArtifacts a;
    a.directory = dir;
    a.config = dir / "config.json";
    a.reward_log = dir / "reward_log.csv";
    a.weights = dir / weights_filename(kind);
    a.train_stats = dir / "train_stats.json";
    return a;
}

void write_eval_outputs(RunArtifacts &a, const EvalReport &report) {
    a.eval_report = a.directory / "eval_report.json";
    a.noise_sweep = a.directory / "noise_sweep.csv";
    write_file_atomic(*a.eval_report, eval_report_to_json(report));
    write_file_atomic(*a.noise_sweep, noise_sweep_csv(report));
}

void attach_train_stats(EvalReport &report, const fs::path &stats_path) {
    if (!fs::exists(stats_path)) {
        return;
    }
    const json s = parse_json(read_file(stats_path), ErrorCode::Load, stats_path.string());
    try {
        report.train_wall_clock_seconds = s.at("wall_clock_seconds").get<double>();
        if (!s.at("gradient_circuit_evals").is_null()) {
            report.vqc_circuit_evaluations = s.at("gradient_circuit_evals").get<std::uint64_t>();
        }
    } catch (const json::exception &e) {
        fail(ErrorCode::Load, stats_path.string() + " is malformed: " + e.what());
    }
}

} // namespace

RunArtifacts run_training(const RunConfig &config, const fs::path &runs_root,
                          const RunOptions &options) {
    config.validate();
    const fs::path dir = runs_root / config.exp;
    RunArtifacts a = artifact_paths(dir, config.agent.kind);

    std::error_code ec;
    if (fs::exists(dir)) {
        if (!options.overwrite) {
            fail(ErrorCode::Exists, "run directory " + dir.string() +
                                        " already exists (pass the overwrite option to replace it)");
        }
        fs::remove_all(dir, ec);
        if (ec) {
            fail(ErrorCode::Io, "cannot remove " + dir.string() + ": " + ec.message());
        }
    }
    fs::create_directories(dir, ec);
    if (ec) {
        fail(ErrorCode::Io, "cannot create " + dir.string() + ": " + ec.message());
    }

    write_file_atomic(a.config, run_config_to_json(config));

    std::ofstream log(a.reward_log, std::ios::binary | std::ios::trunc);
    if (!log) {
        fail(ErrorCode::Io, "cannot open " + a.reward_log.string() + " for writing");
    }
    log << kRewardLogHeader << '\n';
    log.flush();

    const TrainResult result =
        train(config.agent, config.train, config.env_config(), config.seed,
              [&log, &options](const UpdateReport &r) {
                  log << reward_log_row(r);
                  log.flush();
                  if (options.on_update) {
                      options.on_update(r);
                  }
              });
    log.close();
    if (!log) {
        fail(ErrorCode::Io, "failed writing " + a.reward_log.string());
    }

    save_weights(result.policy, a.weights);

    const EfficiencyProfile profile = efficiency_profile(result.log, config.agent.kind);
    std::uint64_t rollout_evals = 0;
    for (const auto &r : result.log) {
        rollout_evals += r.rollout_circuit_evals;
    }
    json stats = {
        {"episodes", result.log.size()},
        {"wall_clock_seconds", result.wall_clock_seconds},
        {"total_steps", profile.total_steps},
        {"parameter_count", result.policy.parameter_count()},
        {"gradient_circuit_evals",
         profile.total_circuit_evals ? json(*profile.total_circuit_evals) : json(nullptr)},
        {"rollout_circuit_evals",
         config.agent.kind == AgentKind::Quantum ? json(rollout_evals) : json(nullptr)},
    };
    const NoiseRow summary = summarize_training_log(result.log);
    stats["training_log_summary"] = {{"summary_source", "training_log"},
                                     {"episodes", summary.returns.size()},
                                     {"mean_return", summary.mean_return},
                                     {"std_return", summary.std_return},
                                     {"success_rate", summary.success_rate}};
    write_file_atomic(a.train_stats, stats.dump(2) + "\n");

    if (options.evaluate_after) {
        EvalReport report = evaluate(result.policy, config.eval, config.eval_env_config());
        attach_train_stats(report, a.train_stats);
        write_eval_outputs(a, report);
    }
    return a;
}

RunArtifacts run_evaluation(const fs::path &runs_root, std::string_view exp,
                            const EvalConfig &eval) {
    if (!is_valid_experiment_name(exp)) {
        fail(ErrorCode::Config, "invalid experiment name '" + std::string(exp) + "'");
    }
    const fs::path dir = runs_root / std::string(exp);
    const fs::path config_path = dir / "config.json";
    if (!fs::exists(config_path)) {
        fail(ErrorCode::Load, "no run found at " + dir.string() + " (missing config.json)");
    }
    const RunConfig config = run_config_from_json(read_file(config_path));
    RunArtifacts a = artifact_paths(dir, config.agent.kind);
    const Policy policy = load_weights(a.weights);

    EvalReport report = evaluate(policy, eval, config.eval_env_config());
    attach_train_stats(report, a.train_stats);
    write_eval_outputs(a, report);
    return a;
}

} // namespace qpg
