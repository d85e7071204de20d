// Copyright 2026 The qadapt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// qadapt: run, reproduce and verify measurement-based adaptation experiments.
//
// Exit codes: 0 success, 1 runtime failure, 2 usage error.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qadapt/qadapt.h"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;
constexpr double kFourPi = 12.566370614359172;

struct ConfigDeleter {
    void operator()(qa_config *c) const { qa_config_destroy(c); }
};
struct ResultDeleter {
    void operator()(qa_result *r) const { qa_result_destroy(r); }
};
struct ReportDeleter {
    void operator()(qa_verify_report *r) const { qa_verify_report_destroy(r); }
};
using ConfigPtr = std::unique_ptr<qa_config, ConfigDeleter>;
using ResultPtr = std::unique_ptr<qa_result, ResultDeleter>;
using ReportPtr = std::unique_ptr<qa_verify_report, ReportDeleter>;

/// Raised for problems the user can fix by changing flags.
struct UsageError {
    std::string message;
};
/// Raised for failures while running.
struct RuntimeError {
    std::string message;
};

void check_usage(qa_status s) {
    if (s != QA_OK) {
        throw UsageError{qa_last_error()};
    }
}

void check_runtime(qa_status s) {
    if (s != QA_OK) {
        throw RuntimeError{std::string(qa_status_name(s)) + ": " + qa_last_error()};
    }
}

struct CommonFlags {
    std::optional<std::size_t> trials;
    std::uint64_t seed = 1;
    unsigned threads = 0;
    bool dump_trials = false;
    bool force = false;
};

struct RunFlags {
    std::string env;
    std::optional<std::size_t> dim;
    std::optional<std::size_t> n;
    std::optional<std::size_t> cutoff;
    std::optional<double> alpha_re;
    std::optional<double> alpha_im;
    std::vector<double> epsilons;
    std::size_t iterations = 100;
    double delta_init = kFourPi;
    double delta_max = kFourPi;
    std::string label = "run";
    std::string out;
    std::string format;
};

struct ReproduceFlags {
    std::string figure;
    std::string out_dir = ".";
};

struct VerifyFlags {
    std::size_t seeds = 50;
    std::uint64_t seed = 20190101;
    bool inject_fault = false;
};

void add_common(CLI::App *cmd, CommonFlags &f) {
    cmd->add_option("--trials", f.trials, "Trials per epsilon (default 2000)");
    cmd->add_option("--seed", f.seed, "Master seed")->capture_default_str();
    cmd->add_option("--threads", f.threads, "Worker threads, 0 = auto")
        ->envname("QRL_THREADS")
        ->capture_default_str();
    cmd->add_flag("--dump-trials", f.dump_trials, "Also write per-trial iteration records");
    cmd->add_flag("--force", f.force, "Overwrite existing output files");
}

void refuse_existing(const std::vector<fs::path> &paths, bool force) {
    if (force) {
        return;
    }
    for (const auto &p : paths) {
        if (fs::exists(p)) {
            throw RuntimeError{p.string() + ": file exists (use --force to overwrite)"};
        }
    }
}

void print_summary(const qa_result *result, std::ostream &os) {
    std::size_t n_eps = 0;
    std::size_t n_iters = 0;
    check_runtime(qa_result_num_epsilons(result, &n_eps));
    check_runtime(qa_result_num_iterations(result, &n_iters));
    os << "epsilon   F[0]      F[" << n_iters << "]     mean_delta[" << n_iters << "]\n";
    for (std::size_t e = 0; e < n_eps; ++e) {
        double eps = 0, f0 = 0, fn = 0, dn = 0;
        check_runtime(qa_result_epsilon(result, e, &eps));
        check_runtime(qa_result_point(result, e, 0, &f0, nullptr, nullptr, nullptr));
        check_runtime(qa_result_point(result, e, n_iters, &fn, nullptr, &dn, nullptr));
        char line[128];
        std::snprintf(line, sizeof line, "%-9.3g %-9.4f %-9.4f %.4g\n", eps, f0, fn, dn);
        os << line;
    }
}

ConfigPtr make_config() {
    qa_config *raw = nullptr;
    check_runtime(qa_config_create(&raw));
    return ConfigPtr(raw);
}

ResultPtr run(const qa_config *config, const CommonFlags &common) {
    qa_result *raw = nullptr;
    check_runtime(qa_run_ensemble(config, common.threads, common.dump_trials ? 1 : 0, &raw));
    return ResultPtr(raw);
}

int cmd_run(const RunFlags &f, const CommonFlags &common) {
    const std::string family = [&] {
        std::string s = f.env;
        for (char &c : s) {
            if (c == '_') c = '-';
        }
        return s;
    }();
    const bool fock = family == "coherent" || family == "cat";

    if (f.n && family != "zero-n") {
        throw UsageError{"--n is only valid with --env zero-n"};
    }
    if ((f.alpha_re || f.alpha_im) && !fock) {
        throw UsageError{"--alpha-re/--alpha-im are only valid with --env coherent or cat"};
    }
    if (f.cutoff && !fock) {
        throw UsageError{"--cutoff is only valid with --env coherent or cat"};
    }

    std::size_t dim = 0;
    std::size_t cutoff = 10;
    std::size_t n = 0;
    if (family == "haar-qubit") {
        dim = f.dim.value_or(2);
    } else if (family == "random-qudit") {
        dim = f.dim.value_or(11);
    } else if (fock) {
        cutoff = f.cutoff.value_or(10);
        dim = f.dim.value_or(cutoff + 1);
        if (dim != cutoff + 1) {
            throw UsageError{"--dim must equal cutoff + 1 = " + std::to_string(cutoff + 1) +
                             " for " + family + " (pass --cutoff to change it)"};
        }
    } else if (family == "zero-n") {
        if (!f.n) {
            throw UsageError{"--env zero-n requires --n"};
        }
        n = *f.n;
        dim = f.dim.value_or(11);
    }

    ConfigPtr config = make_config();
    check_usage(qa_config_set_env(config.get(), family.c_str(), dim, n, cutoff));
    if (f.alpha_re || f.alpha_im) {
        check_usage(qa_config_set_alpha(config.get(), f.alpha_re.value_or(0.0),
                                        f.alpha_im.value_or(0.0)));
    }
    if (!f.epsilons.empty()) {
        check_usage(qa_config_clear_epsilons(config.get()));
        for (double e : f.epsilons) {
            check_usage(qa_config_add_epsilon(config.get(), e));
        }
    }
    check_usage(qa_config_set_trials(config.get(), common.trials.value_or(2000)));
    check_usage(qa_config_set_iterations(config.get(), f.iterations));
    check_usage(qa_config_set_delta(config.get(), f.delta_init, f.delta_max));
    check_usage(qa_config_set_seed(config.get(), common.seed));
    check_usage(qa_config_set_label(config.get(), f.label.c_str()));
    check_usage(qa_config_validate(config.get()));

    std::string format = f.format;
    fs::path out = f.out;
    if (format.empty()) {
        format = out.extension() == ".json" ? "json" : "csv";
    }
    if (out.empty()) {
        out = f.label + "." + format;
    }
    const fs::path stem = out.parent_path() / out.stem();
    std::vector<fs::path> outputs{out};
    if (format == "csv") {
        outputs.push_back(stem.string() + ".meta.json");
    }
    if (common.dump_trials) {
        outputs.push_back(stem.string() + ".trials.csv");
    }
    refuse_existing(outputs, common.force);

    ResultPtr result = run(config.get(), common);
    check_runtime(qa_result_write(result.get(), out.c_str(), format.c_str(), common.force));
    if (format == "csv") {
        check_runtime(qa_result_write_metadata(result.get(), outputs[1].c_str(), common.force));
    }
    if (common.dump_trials) {
        check_runtime(qa_result_write_trials(result.get(), outputs.back().c_str(), common.force));
    }
    print_summary(result.get(), std::cout);
    for (const auto &p : outputs) {
        std::cout << "wrote " << p.string() << '\n';
    }
    return kExitOk;
}

int cmd_reproduce(const ReproduceFlags &f, const CommonFlags &common) {
    ConfigPtr config = make_config();
    check_usage(qa_config_load_figure(config.get(), f.figure.c_str()));
    if (common.trials) {
        check_usage(qa_config_set_trials(config.get(), *common.trials));
    }
    check_usage(qa_config_set_seed(config.get(), common.seed));
    check_usage(qa_config_validate(config.get()));

    const fs::path dir = f.out_dir;
    std::vector<fs::path> outputs{dir / (f.figure + ".csv"), dir / (f.figure + ".json")};
    if (common.dump_trials) {
        outputs.push_back(dir / (f.figure + ".trials.csv"));
    }
    refuse_existing(outputs, common.force);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw RuntimeError{dir.string() + ": " + ec.message()};
    }

    ResultPtr result = run(config.get(), common);
    check_runtime(qa_result_write(result.get(), outputs[0].c_str(), "csv", common.force));
    check_runtime(qa_result_write(result.get(), outputs[1].c_str(), "json", common.force));
    if (common.dump_trials) {
        check_runtime(qa_result_write_trials(result.get(), outputs[2].c_str(), common.force));
    }
    print_summary(result.get(), std::cout);
    for (const auto &p : outputs) {
        std::cout << "wrote " << p.string() << '\n';
    }
    return kExitOk;
}

int cmd_verify(const VerifyFlags &f) {
    qa_verify_report *raw = nullptr;
    const qa_status s = qa_verify(f.seeds, f.seed, f.inject_fault ? 1 : 0, &raw);
    if (s == QA_ERR_INVALID_ARGUMENT) {
        throw UsageError{qa_last_error()};
    }
    check_runtime(s);
    ReportPtr report(raw);

    std::printf("%-42s %-6s %-12s %-10s %s\n", "check", "result", "worst", "tolerance",
                "cases");
    for (std::size_t i = 0; i < qa_verify_report_count(report.get()); ++i) {
        const char *name = nullptr;
        const char *detail = nullptr;
        int passed = 0;
        double worst = 0, tol = 0;
        check_runtime(qa_verify_report_check(report.get(), i, &name, &passed, &worst, &tol,
                                             &detail));
        std::printf("%-42s %-6s %-12.3e %-10.1e %s\n", name, passed ? "PASS" : "FAIL", worst,
                    tol, detail);
    }
    const bool ok = qa_verify_report_all_passed(report.get()) != 0;
    std::printf("%s\n", ok ? "all checks passed" : "verification FAILED");
    return ok ? kExitOk : kExitRuntime;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Measurement-based quantum adaptation: simulator and experiment runner"};
    app.set_version_flag("--version", std::string("qadapt ") + qa_version());
    app.require_subcommand(1);
    app.footer("Defaults: epsilon grid {0.1, 0.3, 0.5, 0.7, 0.9}; trials 2000; "
               "delta-init 4pi; delta-max 4pi.\n"
               "Exit codes: 0 success, 1 runtime failure, 2 usage error.");

    CommonFlags run_common;
    RunFlags run_flags;
    auto *run_cmd = app.add_subcommand("run", "Run a custom ensemble experiment");
    run_cmd->add_option("--env", run_flags.env, "Environment family")
        ->required()
        ->check(CLI::IsMember({"haar-qubit", "random-qudit", "coherent", "cat", "zero-n",
                               "haar_qubit", "random_qudit", "zero_n"}));
    run_cmd->add_option("--dim", run_flags.dim, "Hilbert-space dimension");
    run_cmd->add_option("--n", run_flags.n, "Excited level for zero-n");
    run_cmd->add_option("--cutoff", run_flags.cutoff, "Fock cutoff for coherent/cat (default 10)");
    run_cmd->add_option("--alpha-re", run_flags.alpha_re, "Fixed coherent amplitude, real part");
    run_cmd->add_option("--alpha-im", run_flags.alpha_im,
                        "Fixed coherent amplitude, imaginary part");
    run_cmd->add_option("--epsilon", run_flags.epsilons,
                        "Reward ratio, repeatable (default 0.1 0.3 0.5 0.7 0.9)")
        ->check(CLI::Range(0.0, 1.0));
    run_cmd->add_option("--iterations", run_flags.iterations, "Iterations per trial")
        ->capture_default_str();
    run_cmd->add_option("--delta-init", run_flags.delta_init, "Initial exploration range")
        ->capture_default_str();
    run_cmd->add_option("--delta-max", run_flags.delta_max, "Exploration range cap")
        ->capture_default_str();
    run_cmd->add_option("--label", run_flags.label, "Experiment label")->capture_default_str();
    run_cmd->add_option("--out", run_flags.out, "Output file (default <label>.<format>)");
    run_cmd->add_option("--format", run_flags.format, "csv or json (default from --out)")
        ->check(CLI::IsMember({"csv", "json"}));
    add_common(run_cmd, run_common);

    CommonFlags rep_common;
    ReproduceFlags rep_flags;
    auto *rep_cmd = app.add_subcommand("reproduce", "Reproduce a published figure");
    rep_cmd->add_option("figure", rep_flags.figure, "fig3, fig4, fig5, fig6a or fig6b")
        ->required()
        ->check(CLI::IsMember({"fig3", "fig4", "fig5", "fig6a", "fig6b"}));
    rep_cmd->add_option("--out", rep_flags.out_dir, "Output directory")->capture_default_str();
    add_common(rep_cmd, rep_common);

    VerifyFlags ver_flags;
    auto *ver_cmd = app.add_subcommand("verify", "Check the simulator against brute-force oracles");
    ver_cmd->add_option("--seeds", ver_flags.seeds, "Random cases per equivalence check")
        ->capture_default_str();
    ver_cmd->add_option("--seed", ver_flags.seed, "Seed for the random cases")
        ->capture_default_str();
    ver_cmd->add_flag("--inject-fault", ver_flags.inject_fault,
                      "Run against a fixture with a frame-conjugation error")
        ->group("");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return kExitUsage;
    }

    try {
        if (run_cmd->parsed()) {
            return cmd_run(run_flags, run_common);
        }
        if (rep_cmd->parsed()) {
            return cmd_reproduce(rep_flags, rep_common);
        }
        return cmd_verify(ver_flags);
    } catch (const UsageError &e) {
        std::cerr << "error: " << e.message << "\n\n" << app.help();
        return kExitUsage;
    } catch (const RuntimeError &e) {
        std::cerr << "error: " << e.message << '\n';
        return kExitRuntime;
    }
}
