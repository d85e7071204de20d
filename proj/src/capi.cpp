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

#include "qadapt/qadapt.h"

#include <memory>
#include <new>
#include <string>
#include <vector>

#include "qadapt/error.hpp"
#include "qadapt/harness.hpp"
#include "qadapt/oracle.hpp"

struct qa_config {
    qadapt::ExperimentConfig config;
};

struct qa_result {
    qadapt::AggregateResult result;
};

struct qa_verify_report {
    std::vector<qadapt::oracle::VerifyCheck> checks;
};

namespace {

thread_local std::string g_last_error;

qa_status fail(qa_status status, const std::string &message) {
    g_last_error = message;
    return status;
}

// Runs `body`, translating exceptions into status codes.
template <typename F>
qa_status guarded(F &&body) {
    try {
        body();
        return QA_OK;
    } catch (const qadapt::InvalidArgument &e) {
        return fail(QA_ERR_INVALID_ARGUMENT, e.what());
    } catch (const qadapt::DimensionMismatch &e) {
        return fail(QA_ERR_DIMENSION, e.what());
    } catch (const qadapt::NumericalError &e) {
        return fail(QA_ERR_NUMERICAL, e.what());
    } catch (const qadapt::IoError &e) {
        return fail(QA_ERR_IO, e.what());
    } catch (const std::bad_alloc &) {
        return fail(QA_ERR_INTERNAL, "out of memory");
    } catch (const std::exception &e) {
        return fail(QA_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(QA_ERR_INTERNAL, "unknown error");
    }
}

#define QA_REQUIRE(ptr)                                                                  \
    do {                                                                                 \
        if ((ptr) == nullptr) {                                                          \
            return fail(QA_ERR_NULL_HANDLE, std::string(#ptr) + " is null");             \
        }                                                                                \
    } while (0)

} // namespace

extern "C" {

const char *qa_version(void) { return QADAPT_VERSION; }

const char *qa_last_error(void) { return g_last_error.c_str(); }

const char *qa_status_name(qa_status status) {
    switch (status) {
    case QA_OK: return "ok";
    case QA_ERR_INVALID_ARGUMENT: return "invalid argument";
    case QA_ERR_DIMENSION: return "dimension mismatch";
    case QA_ERR_NUMERICAL: return "numerical error";
    case QA_ERR_IO: return "I/O error";
    case QA_ERR_NULL_HANDLE: return "null handle";
    case QA_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

qa_status qa_config_create(qa_config **out) {
    QA_REQUIRE(out);
    return guarded([&] { *out = new qa_config{}; });
}

void qa_config_destroy(qa_config *config) { delete config; }

qa_status qa_config_load_figure(qa_config *config, const char *figure) {
    QA_REQUIRE(config);
    QA_REQUIRE(figure);
    return guarded([&] { config->config = qadapt::figure_config(figure); });
}

qa_status qa_config_set_env(qa_config *config, const char *family, size_t dim, size_t n,
                            size_t cutoff) {
    QA_REQUIRE(config);
    QA_REQUIRE(family);
    return guarded([&] {
        auto &env = config->config.env;
        env.family = qadapt::parse_env_family(family);
        env.dim = dim;
        env.n = n;
        env.cutoff = cutoff;
        env.alpha.reset();
    });
}

qa_status qa_config_set_alpha(qa_config *config, double re, double im) {
    QA_REQUIRE(config);
    return guarded([&] { config->config.env.alpha = std::complex<double>(re, im); });
}

qa_status qa_config_clear_epsilons(qa_config *config) {
    QA_REQUIRE(config);
    config->config.epsilons.clear();
    return QA_OK;
}

qa_status qa_config_add_epsilon(qa_config *config, double epsilon) {
    QA_REQUIRE(config);
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
        return fail(QA_ERR_INVALID_ARGUMENT,
                    "epsilon must lie in (0, 1), got " + std::to_string(epsilon));
    }
    return guarded([&] { config->config.epsilons.push_back(epsilon); });
}

qa_status qa_config_set_trials(qa_config *config, size_t n_trials) {
    QA_REQUIRE(config);
    config->config.n_trials = n_trials;
    return QA_OK;
}

qa_status qa_config_set_iterations(qa_config *config, size_t n_iters) {
    QA_REQUIRE(config);
    config->config.n_iters = n_iters;
    return QA_OK;
}

qa_status qa_config_set_delta(qa_config *config, double delta_init, double delta_max) {
    QA_REQUIRE(config);
    config->config.delta_init = delta_init;
    config->config.delta_max = delta_max;
    return QA_OK;
}

qa_status qa_config_set_seed(qa_config *config, uint64_t master_seed) {
    QA_REQUIRE(config);
    config->config.master_seed = master_seed;
    return QA_OK;
}

qa_status qa_config_set_label(qa_config *config, const char *label) {
    QA_REQUIRE(config);
    QA_REQUIRE(label);
    return guarded([&] { config->config.label = label; });
}

qa_status qa_config_validate(const qa_config *config) {
    QA_REQUIRE(config);
    return guarded([&] { config->config.validate(); });
}

qa_status qa_config_get_trials(const qa_config *config, size_t *out) {
    QA_REQUIRE(config);
    QA_REQUIRE(out);
    *out = config->config.n_trials;
    return QA_OK;
}

qa_status qa_config_get_iterations(const qa_config *config, size_t *out) {
    QA_REQUIRE(config);
    QA_REQUIRE(out);
    *out = config->config.n_iters;
    return QA_OK;
}

qa_status qa_run_ensemble(const qa_config *config, unsigned threads, int keep_trials,
                          qa_result **out) {
    QA_REQUIRE(config);
    QA_REQUIRE(out);
    *out = nullptr;
    return guarded([&] {
        auto result = std::make_unique<qa_result>();
        result->result = qadapt::run_ensemble(
            config->config, qadapt::RunOptions{threads, keep_trials != 0});
        *out = result.release();
    });
}

void qa_result_destroy(qa_result *result) { delete result; }

qa_status qa_result_num_epsilons(const qa_result *result, size_t *out) {
    QA_REQUIRE(result);
    QA_REQUIRE(out);
    *out = result->result.config.epsilons.size();
    return QA_OK;
}

qa_status qa_result_num_iterations(const qa_result *result, size_t *out) {
    QA_REQUIRE(result);
    QA_REQUIRE(out);
    *out = result->result.config.n_iters;
    return QA_OK;
}

qa_status qa_result_epsilon(const qa_result *result, size_t epsilon_index, double *out) {
    QA_REQUIRE(result);
    QA_REQUIRE(out);
    const auto &eps = result->result.config.epsilons;
    if (epsilon_index >= eps.size()) {
        return fail(QA_ERR_INVALID_ARGUMENT, "epsilon index out of range");
    }
    *out = eps[epsilon_index];
    return QA_OK;
}

qa_status qa_result_point(const qa_result *result, size_t epsilon_index, size_t iteration,
                          double *mean_fidelity, double *std_fidelity, double *mean_delta,
                          double *mean_log_delta) {
    QA_REQUIRE(result);
    return guarded([&] {
        const auto &row = result->result.row(epsilon_index, iteration);
        if (mean_fidelity) *mean_fidelity = row.mean_fidelity;
        if (std_fidelity) *std_fidelity = row.std_fidelity;
        if (mean_delta) *mean_delta = row.mean_delta;
        if (mean_log_delta) *mean_log_delta = row.mean_log_delta;
    });
}

qa_status qa_result_best_epsilon(const qa_result *result, size_t iteration,
                                 size_t *epsilon_index) {
    QA_REQUIRE(result);
    QA_REQUIRE(epsilon_index);
    return guarded([&] { *epsilon_index = result->result.best_epsilon_index(iteration); });
}

qa_status qa_result_write(const qa_result *result, const char *path, const char *format,
                          int overwrite) {
    QA_REQUIRE(result);
    QA_REQUIRE(path);
    QA_REQUIRE(format);
    return guarded([&] {
        qadapt::write_results(result->result, path, qadapt::parse_output_format(format),
                              overwrite != 0);
    });
}

qa_status qa_result_write_metadata(const qa_result *result, const char *path, int overwrite) {
    QA_REQUIRE(result);
    QA_REQUIRE(path);
    return guarded([&] { qadapt::write_metadata(result->result, path, overwrite != 0); });
}

qa_status qa_result_write_trials(const qa_result *result, const char *path, int overwrite) {
    QA_REQUIRE(result);
    QA_REQUIRE(path);
    return guarded([&] { qadapt::write_trials(result->result, path, overwrite != 0); });
}

qa_status qa_verify(size_t cases, uint64_t seed, int inject_fault, qa_verify_report **out) {
    QA_REQUIRE(out);
    *out = nullptr;
    return guarded([&] {
        qadapt::oracle::VerifyOptions options;
        options.cases = cases;
        options.seed = seed;
        qadapt::oracle::Stepper stepper;
        if (inject_fault != 0) {
            stepper = &qadapt::oracle::fixtures::misconjugated_step;
        }
        auto report = std::make_unique<qa_verify_report>();
        report->checks = qadapt::oracle::run_verification(options, stepper);
        *out = report.release();
    });
}

void qa_verify_report_destroy(qa_verify_report *report) { delete report; }

size_t qa_verify_report_count(const qa_verify_report *report) {
    return report ? report->checks.size() : 0;
}

int qa_verify_report_all_passed(const qa_verify_report *report) {
    if (report == nullptr || report->checks.empty()) {
        return 0;
    }
    for (const auto &c : report->checks) {
        if (!c.passed) {
            return 0;
        }
    }
    return 1;
}

qa_status qa_verify_report_check(const qa_verify_report *report, size_t index,
                                 const char **name, int *passed, double *worst,
                                 double *tolerance, const char **detail) {
    QA_REQUIRE(report);
    if (index >= report->checks.size()) {
        return fail(QA_ERR_INVALID_ARGUMENT, "check index out of range");
    }
    const auto &c = report->checks[index];
    if (name) *name = c.name.c_str();
    if (passed) *passed = c.passed ? 1 : 0;
    if (worst) *worst = c.worst;
    if (tolerance) *tolerance = c.tolerance;
    if (detail) *detail = c.detail.c_str();
    return QA_OK;
}

} // extern "C"
