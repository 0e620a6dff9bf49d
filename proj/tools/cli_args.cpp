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
#include "cli_args.hpp"

#include <CLI11.hpp>

#include <string>
#include <string_view>

namespace qpg::cli {

namespace {

struct Flag {
    const char *name;
    const char *key;
    const char *help;
};

// Training flags that map 1:1 onto configuration keys.
constexpr Flag kTrainFlags[] = {
    {"--agent", "agent", "Policy type: classical or quantum"},
    {"--episodes", "episodes", "Training episodes (default 400)"},
    {"--lr", "lr", "Initial learning rate (default 0.005)"},
    {"--hidden", "hidden", "MLP hidden width (default 64)"},
    {"--exp", "exp", "Experiment name; artifacts go to <runs-dir>/<exp>/"},
    {"--noise", "noise", "Training-time observation noise std (default 0.0)"},
    {"--seed", "seed", "Random seed (default 42)"},
    {"--depth", "depth", "Circuit depth L (default 3)"},
    {"--kappa", "kappa", "Embedding scale (default 1.0)"},
    {"--embedding-axis", "embedding_axis", "Embedding rotation axis: X or Y (default X)"},
    {"--s-max", "s_max", "Comma-separated clip bounds per observation dimension"},
    {"--sigma-z", "sigma_z", "Measurement noise std on the circuit expectation (default 0)"},
    {"--gamma", "gamma", "Discount factor (default 0.99)"},
    {"--entropy", "entropy_weight", "Entropy bonus weight (default 0.005)"},
    {"--l2", "l2_weight", "L2 penalty weight (default 1e-4)"},
    {"--clip", "clip", "Gradient-norm clip threshold (default 1.0)"},
    {"--lr-decay", "lr_decay", "Per-episode learning-rate decay factor (default 0.995)"},
    {"--baseline-decay", "baseline_decay", "Moving-average decay of the return baseline"},
    {"--batch", "batch_episodes", "Episodes averaged per update (default 1)"},
    {"--optimizer", "optimizer", "sgd or adam (default adam)"},
    {"--standardize", "standardize_advantages", "Standardize advantages: true or false (default true)"},
    {"--reward", "reward_mode", "unit or quadratic"},
    {"--rollouts", "rollouts", "Evaluation rollouts per (sigma, seed) (default 20)"},
    {"--eval-seeds", "eval_seeds", "Comma-separated evaluation seeds"},
};

constexpr Flag kEvalFlags[] = {
    {"--rollouts", "rollouts", "Rollouts per (sigma, seed) (default 20)"},
    {"--eval-seeds", "eval_seeds", "Comma-separated evaluation seeds (default 1,2,3,4,5)"},
};

std::string join(const std::vector<std::string> &parts) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        out += (i ? "," : "") + parts[i];
    }
    return out;
}

ParsedArgs usage_error(std::string message) {
    ParsedArgs out;
    out.finished = true;
    out.exit_code = kExitUsage;
    out.output = std::move(message);
    return out;
}

} // namespace

ParsedArgs parse_args(const std::vector<std::string> &argv) {
    CLI::App app{"Hybrid quantum-classical policy-gradient toolkit for CartPole", "qpg"};
    app.require_subcommand(1);

    std::string runs_dir = "runs";
    bool overwrite = false;
    bool no_eval = false;
    bool argmax = false;
    std::vector<std::string> sigmas;
    std::string eval_exp;

    auto *train = app.add_subcommand("train", "Train a policy and write runs/<exp>/");
    std::vector<std::string> train_values(std::size(kTrainFlags));
    for (std::size_t i = 0; i < std::size(kTrainFlags); ++i) {
        train->add_option(kTrainFlags[i].name, train_values[i], kTrainFlags[i].help);
    }
    train->get_option("--agent")->required();
    train->add_option("--sigma", sigmas, "Evaluation noise level (repeatable)");
    train->add_flag("--argmax", argmax, "Greedy actions during evaluation");
    train->add_option("--runs-dir", runs_dir, "Root directory for run artifacts");
    train->add_flag("--overwrite", overwrite, "Replace an existing run directory");
    train->add_flag("--no-eval", no_eval, "Skip the post-training noise sweep");

    auto *eval = app.add_subcommand("eval", "Evaluate a stored run under observation noise");
    std::vector<std::string> eval_values(std::size(kEvalFlags));
    eval->add_option("--exp", eval_exp, "Experiment name to evaluate")->required();
    for (std::size_t i = 0; i < std::size(kEvalFlags); ++i) {
        eval->add_option(kEvalFlags[i].name, eval_values[i], kEvalFlags[i].help);
    }
    eval->add_option("--sigma", sigmas, "Noise level (repeatable; default 0,0.02,0.05,0.1)");
    eval->add_flag("--argmax", argmax, "Greedy actions instead of sampling");
    eval->add_option("--runs-dir", runs_dir, "Root directory for run artifacts");

    std::vector<std::string> args(argv.rbegin(), argv.rend() - (argv.empty() ? 0 : 1));
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp &) {
        ParsedArgs out;
        out.finished = true;
        out.output = app.help();
        return out;
    } catch (const CLI::CallForAllHelp &) {
        ParsedArgs out;
        out.finished = true;
        out.output = app.help("", CLI::AppFormatMode::All);
        return out;
    } catch (const CLI::ParseError &e) {
        return usage_error(std::string(e.what()) + "\n" + app.help());
    }

    ParsedArgs out;
    out.runs_dir = runs_dir;
    qpg_config *raw = nullptr;
    if (qpg_config_create(&raw) != QPG_OK) {
        return usage_error(qpg_last_error());
    }
    out.config.reset(raw);

    const auto set = [&](const char *key, const std::string &value, const char *flag) {
        if (qpg_config_set(out.config.get(), key, value.c_str()) != QPG_OK) {
            std::string_view message = qpg_last_error();
            const std::string prefix = std::string(key) + ": ";
            if (message.starts_with(prefix)) message.remove_prefix(prefix.size());
            throw CLI::ValidationError(flag, std::string(message));
        }
    };

    try {
        const Flag *flags = train->parsed() ? kTrainFlags : kEvalFlags;
        const std::size_t n = train->parsed() ? std::size(kTrainFlags) : std::size(kEvalFlags);
        const auto &values = train->parsed() ? train_values : eval_values;
        CLI::App *sub = train->parsed() ? train : eval;
        for (std::size_t i = 0; i < n; ++i) {
            if (sub->count(flags[i].name) > 0) {
                set(flags[i].key, values[i], flags[i].name);
            }
        }
        if (!sigmas.empty()) {
            set("sigmas", join(sigmas), "--sigma");
        }
        if (argmax) {
            set("argmax", "true", "--argmax");
        }
        if (train->parsed()) {
            out.command = Command::Train;
            out.overwrite = overwrite;
            out.evaluate_after = !no_eval;
            if (qpg_config_validate(out.config.get()) != QPG_OK) {
                throw CLI::ValidationError("train", qpg_last_error());
            }
            char buf[256];
            if (qpg_config_get(out.config.get(), "exp", buf, sizeof(buf), nullptr) == QPG_OK) {
                out.exp = buf;
            }
        } else {
            set("exp", eval_exp, "--exp");
            out.command = Command::Eval;
            out.exp = eval_exp;
        }
    } catch (const CLI::Error &e) {
        return usage_error(std::string(e.what()));
    }
    return out;
}

int run(const ParsedArgs &args, std::string &message) {
    if (args.finished) {
        message = args.output;
        return args.exit_code;
    }
    qpg_status st = QPG_OK;
    if (args.command == Command::Train) {
        st = qpg_run_training(args.config.get(), args.runs_dir.c_str(), args.overwrite ? 1 : 0,
                              args.evaluate_after ? 1 : 0);
        if (st == QPG_OK) {
            message = "wrote " + args.runs_dir + "/" + args.exp + "/";
        }
    } else if (args.command == Command::Eval) {
        st = qpg_run_evaluation(args.runs_dir.c_str(), args.exp.c_str(), args.config.get());
        if (st == QPG_OK) {
            message = "wrote " + args.runs_dir + "/" + args.exp + "/eval_report.json and noise_sweep.csv";
        }
    } else {
        message = "no command given";
        return kExitUsage;
    }
    if (st == QPG_OK) {
        return kExitOk;
    }
    message = std::string("error: ") + qpg_status_string(st) + ": " + qpg_last_error();
    return (st == QPG_ERR_CONFIG || st == QPG_ERR_INVALID_ARGUMENT) ? kExitUsage : kExitRuntime;
}

} // namespace qpg::cli
