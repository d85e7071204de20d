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
/**
 * @file
 * Ensemble experiments: sweeps epsilon over many seeded trials, aggregates
 * per-iteration statistics and serializes them.
 *
 * Every (epsilon, trial) pair owns the stream
 * `RngStream(derive_trial_seed(master_seed, epsilon_index, trial_index))`,
 * which first draws the environment and then drives the trial. Reductions
 * run in trial order, so results do not depend on the thread count.
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "qadapt/envstates.hpp"
#include "qadapt/protocol.hpp"

namespace qadapt {

struct ExperimentConfig {
    EnvSpec env;
    std::vector<double> epsilons{0.1, 0.3, 0.5, 0.7, 0.9};
    std::size_t n_trials = 2000;
    std::size_t n_iters = 100;
    double delta_init = kDefaultDelta;
    double delta_max = kDefaultDelta;
    std::uint64_t master_seed = 1;
    std::string label = "run";

    void validate() const;
};

/// Pinned configuration of a published figure: fig3, fig4, fig5, fig6a or
/// fig6b. 2000 trials over epsilon in {0.1, 0.3, 0.5, 0.7, 0.9}.
ExperimentConfig figure_config(std::string_view figure);

struct RunOptions {
    /// Worker threads; 0 picks std::thread::hardware_concurrency().
    unsigned threads = 0;
    /// Keep every TrialResult in the aggregate.
    bool keep_trials = false;
};

struct SeriesRow {
    double epsilon;
    std::size_t iteration;
    double mean_fidelity;
    double std_fidelity;
    double median_fidelity;
    double mean_delta;
    double mean_log_delta;
};

struct AggregateResult {
    ExperimentConfig config;
    std::string version;
    /// trial_seeds[e][t]
    std::vector<std::vector<std::uint64_t>> trial_seeds;
    /// Epsilon-major, n_iters + 1 rows per epsilon (iteration 0 first).
    std::vector<SeriesRow> rows;
    /// Only filled with RunOptions::keep_trials; trials[e][t].
    std::vector<std::vector<TrialResult>> trials;

    [[nodiscard]] std::size_t iterations_per_series() const noexcept {
        return config.n_iters + 1;
    }
    [[nodiscard]] const SeriesRow &row(std::size_t epsilon_index,
                                       std::size_t iteration) const;
    /// Per-trial fidelities at `iteration` for one epsilon, in trial order.
    [[nodiscard]] std::span<const double> fidelity_samples(std::size_t epsilon_index,
                                                           std::size_t iteration) const;
    /// Index of the epsilon with the largest mean fidelity at `iteration`
    /// (the first one on ties).
    [[nodiscard]] std::size_t best_epsilon_index(std::size_t iteration) const;

    /// fidelity_table[e][iteration * n_trials + t]
    std::vector<std::vector<double>> fidelity_table;
};

/// mix64(master_seed + mix64(epsilon_index << 40 | trial_index)).
/// Injective in (epsilon_index, trial_index) for epsilon_index < 2^24 and
/// trial_index < 2^40.
std::uint64_t derive_trial_seed(std::uint64_t master_seed, std::uint64_t epsilon_index,
                                std::uint64_t trial_index);

AggregateResult run_ensemble(const ExperimentConfig &config, const RunOptions &options = {});

enum class OutputFormat { csv, json };

OutputFormat parse_output_format(std::string_view name);

/// Exact CSV header of the aggregate file.
inline constexpr std::string_view kCsvHeader =
    "experiment,env_family,dim,epsilon,iteration,mean_fidelity,std_fidelity,"
    "mean_delta,mean_log_delta,n_trials,master_seed";

/// Writes the aggregate. Refuses to replace an existing file unless
/// `overwrite` is set.
void write_results(const AggregateResult &result, const std::filesystem::path &path,
                   OutputFormat format, bool overwrite = false);

/// Config echo and run metadata without the series; written next to CSV
/// output so every run can be reproduced.
void write_metadata(const AggregateResult &result, const std::filesystem::path &path,
                    bool overwrite = false);

/// Per-iteration records of every kept trial, one CSV row per iteration.
void write_trials(const AggregateResult &result, const std::filesystem::path &path,
                  bool overwrite = false);

/// One parsed row of the aggregate CSV.
struct CsvRow {
    std::string experiment;
    std::string env_family;
    std::size_t dim;
    double epsilon;
    std::size_t iteration;
    double mean_fidelity;
    double std_fidelity;
    double mean_delta;
    double mean_log_delta;
    std::size_t n_trials;
    std::uint64_t master_seed;
};

std::vector<CsvRow> read_results_csv(const std::filesystem::path &path);
/// Reads the `series` array of a JSON result file.
std::vector<CsvRow> read_results_json(const std::filesystem::path &path);

/// Two-sample Kolmogorov-Smirnov statistic.
double ks_distance(std::span<const double> a, std::span<const double> b);

} // namespace qadapt
