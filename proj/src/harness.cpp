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

#include "qadapt/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "qadapt/error.hpp"

namespace qadapt {

using ordered_json = nlohmann::ordered_json;

void ExperimentConfig::validate() const {
    env.validate();
    if (epsilons.empty()) {
        throw InvalidArgument("at least one epsilon is required");
    }
    for (double e : epsilons) {
        RewardParams{e, delta_init, delta_max}.validate();
    }
    if (n_trials < 1) {
        throw InvalidArgument("n_trials must be at least 1");
    }
    if (n_iters < 1) {
        throw InvalidArgument("n_iters must be at least 1");
    }
    if (epsilons.size() >= (std::size_t{1} << 24) || n_trials >= (std::uint64_t{1} << 40)) {
        throw InvalidArgument("experiment too large for the seed derivation");
    }
    if (label.empty() || label.find_first_of(",\"\r\n") != std::string::npos) {
        throw InvalidArgument("label must be non-empty and free of commas, quotes and newlines");
    }
}

ExperimentConfig figure_config(std::string_view figure) {
    ExperimentConfig c;
    c.label = std::string(figure);
    if (figure == "fig3") {
        c.env = EnvSpec{EnvFamily::haar_qubit, 2, 0, kDefaultCutoff, std::nullopt};
        c.n_iters = 100;
    } else if (figure == "fig4") {
        c.env = EnvSpec{EnvFamily::random_qudit, 11, 0, kDefaultCutoff, std::nullopt};
        c.n_iters = 400;
    } else if (figure == "fig5") {
        c.env = EnvSpec{EnvFamily::coherent, 11, 0, 10, std::nullopt};
        c.n_iters = 100;
    } else if (figure == "fig6a") {
        c.env = EnvSpec{EnvFamily::cat, 11, 0, 10, std::nullopt};
        c.n_iters = 100;
    } else if (figure == "fig6b") {
        c.env = EnvSpec{EnvFamily::zero_n, 11, 10, kDefaultCutoff, std::nullopt};
        c.n_iters = 100;
    } else {
        throw InvalidArgument("unknown figure '" + std::string(figure) +
                              "' (expected fig3, fig4, fig5, fig6a or fig6b)");
    }
    return c;
}

const SeriesRow &AggregateResult::row(std::size_t epsilon_index, std::size_t iteration) const {
    if (epsilon_index >= config.epsilons.size() || iteration > config.n_iters) {
        throw InvalidArgument("series index out of range");
    }
    return rows[epsilon_index * iterations_per_series() + iteration];
}

std::span<const double> AggregateResult::fidelity_samples(std::size_t epsilon_index,
                                                          std::size_t iteration) const {
    if (epsilon_index >= fidelity_table.size() || iteration > config.n_iters) {
        throw InvalidArgument("sample index out of range");
    }
    return std::span<const double>(fidelity_table[epsilon_index])
        .subspan(iteration * config.n_trials, config.n_trials);
}

std::size_t AggregateResult::best_epsilon_index(std::size_t iteration) const {
    std::size_t best = 0;
    for (std::size_t e = 1; e < config.epsilons.size(); ++e) {
        if (row(e, iteration).mean_fidelity > row(best, iteration).mean_fidelity) {
            best = e;
        }
    }
    return best;
}

std::uint64_t derive_trial_seed(std::uint64_t master_seed, std::uint64_t epsilon_index,
                                std::uint64_t trial_index) {
    const std::uint64_t key = (epsilon_index << 40) | (trial_index & ((std::uint64_t{1} << 40) - 1));
    return RngStream::mix64(master_seed + RngStream::mix64(key));
}

namespace {

constexpr std::size_t kBlockTrials = 64;

struct BlockSums {
    std::vector<double> delta;
    std::vector<double> log_delta;
};

} // namespace

AggregateResult run_ensemble(const ExperimentConfig &config, const RunOptions &options) {
    config.validate();

    const std::size_t n_eps = config.epsilons.size();
    const std::size_t n_trials = config.n_trials;
    const std::size_t n_points = config.n_iters + 1;
    const std::size_t blocks_per_eps = (n_trials + kBlockTrials - 1) / kBlockTrials;
    const std::size_t n_jobs = n_eps * blocks_per_eps;

    AggregateResult result;
    result.config = config;
    result.version = QADAPT_VERSION;
    result.trial_seeds.assign(n_eps, std::vector<std::uint64_t>(n_trials));
    for (std::size_t e = 0; e < n_eps; ++e) {
        for (std::size_t t = 0; t < n_trials; ++t) {
            result.trial_seeds[e][t] = derive_trial_seed(config.master_seed, e, t);
        }
    }
    result.fidelity_table.assign(n_eps, std::vector<double>(n_points * n_trials));
    if (options.keep_trials) {
        result.trials.assign(n_eps, std::vector<TrialResult>(n_trials));
    }

    std::vector<BlockSums> partial(n_jobs);
    std::vector<std::exception_ptr> failures(n_jobs);
    const std::string env_label(env_family_name(config.env.family));

    auto run_job = [&](std::size_t job) {
        const std::size_t e = job / blocks_per_eps;
        const std::size_t first = (job % blocks_per_eps) * kBlockTrials;
        const std::size_t last = std::min(first + kBlockTrials, n_trials);
        const RewardParams params{config.epsilons[e], config.delta_init, config.delta_max};
        BlockSums sums{std::vector<double>(n_points, 0.0), std::vector<double>(n_points, 0.0)};
        auto &table = result.fidelity_table[e];

        for (std::size_t t = first; t < last; ++t) {
            RngStream rng(result.trial_seeds[e][t]);
            StateVector env = [&] {
                try {
                    return generate(config.env, rng);
                } catch (const Error &err) {
                    throw NumericalError("environment generation failed for trial " +
                                         std::to_string(t) + ": " + err.what());
                }
            }();
            TrialResult trial = run_trial(env, params, config.n_iters, rng,
                                          TrialOptions{std::nullopt, env_label});

            table[t] = trial.initial_fidelity;
            sums.delta[0] += config.delta_init;
            sums.log_delta[0] += std::log(config.delta_init);
            for (std::size_t k = 0; k < config.n_iters; ++k) {
                const IterationRecord &rec = trial.records[k];
                table[(k + 1) * n_trials + t] = rec.fidelity_after;
                sums.delta[k + 1] += rec.delta_after;
                sums.log_delta[k + 1] += rec.log_delta_after;
            }
            if (options.keep_trials) {
                result.trials[e][t] = std::move(trial);
            }
        }
        partial[job] = std::move(sums);
    };

    unsigned threads = options.threads;
    if (threads == 0) {
        threads = std::max(1u, std::thread::hardware_concurrency());
    }
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, n_jobs));

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t job = next.fetch_add(1); job < n_jobs; job = next.fetch_add(1)) {
            try {
                run_job(job);
            } catch (...) {
                failures[job] = std::current_exception();
            }
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned i = 0; i < threads; ++i) {
            pool.emplace_back(worker);
        }
    }
    for (const auto &f : failures) {
        if (f) {
            std::rethrow_exception(f);
        }
    }

    // Fixed-order reduction.
    result.rows.reserve(n_eps * n_points);
    const double n = static_cast<double>(n_trials);
    std::vector<double> scratch(n_trials);
    for (std::size_t e = 0; e < n_eps; ++e) {
        const auto &table = result.fidelity_table[e];
        for (std::size_t k = 0; k < n_points; ++k) {
            const double *f = table.data() + k * n_trials;
            double sum = 0.0;
            for (std::size_t t = 0; t < n_trials; ++t) {
                sum += f[t];
            }
            const double mean = sum / n;
            double ss = 0.0;
            for (std::size_t t = 0; t < n_trials; ++t) {
                ss += (f[t] - mean) * (f[t] - mean);
            }
            std::copy(f, f + n_trials, scratch.begin());
            std::sort(scratch.begin(), scratch.end());
            const double median = n_trials % 2 == 1
                                      ? scratch[n_trials / 2]
                                      : 0.5 * (scratch[n_trials / 2 - 1] + scratch[n_trials / 2]);

            double dsum = 0.0;
            double lsum = 0.0;
            for (std::size_t b = 0; b < blocks_per_eps; ++b) {
                dsum += partial[e * blocks_per_eps + b].delta[k];
                lsum += partial[e * blocks_per_eps + b].log_delta[k];
            }
            result.rows.push_back(SeriesRow{config.epsilons[e], k, std::min(mean, 1.0),
                                            std::sqrt(ss / n), median, dsum / n, lsum / n});
        }
    }
    return result;
}

OutputFormat parse_output_format(std::string_view name) {
    if (name == "csv") return OutputFormat::csv;
    if (name == "json") return OutputFormat::json;
    throw InvalidArgument("unknown output format '" + std::string(name) + "'");
}

namespace {

std::string fmt12(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

double round12(double x) { return std::strtod(fmt12(x).c_str(), nullptr); }

std::ofstream open_output(const std::filesystem::path &path, bool overwrite) {
    if (!overwrite && std::filesystem::exists(path)) {
        throw IoError(path.string() + ": file exists (use --force to overwrite)");
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError(path.string() + ": cannot open for writing");
    }
    return out;
}

void finish(std::ofstream &out, const std::filesystem::path &path) {
    out.flush();
    if (!out) {
        throw IoError(path.string() + ": write failed");
    }
}

ordered_json config_json(const ExperimentConfig &c) {
    ordered_json env;
    env["family"] = std::string(env_family_name(c.env.family));
    env["dim"] = c.env.dim;
    env["n"] = c.env.n;
    env["cutoff"] = c.env.cutoff;
    if (c.env.alpha) {
        env["alpha_re"] = round12(c.env.alpha->real());
        env["alpha_im"] = round12(c.env.alpha->imag());
    } else {
        env["alpha_re"] = nullptr;
        env["alpha_im"] = nullptr;
    }
    ordered_json j;
    j["env_spec"] = env;
    ordered_json eps = ordered_json::array();
    for (double e : c.epsilons) {
        eps.push_back(round12(e));
    }
    j["epsilons"] = eps;
    j["n_trials"] = c.n_trials;
    j["n_iters"] = c.n_iters;
    j["delta_init"] = round12(c.delta_init);
    j["delta_max"] = round12(c.delta_max);
    j["master_seed"] = c.master_seed;
    j["label"] = c.label;
    return j;
}

ordered_json metadata_json(const AggregateResult &r) {
    ordered_json m;
    m["version"] = r.version;
    m["seed_derivation"] = "mix64(master_seed + mix64(epsilon_index << 40 | trial_index))";
    const bool sampled_alpha = (r.config.env.family == EnvFamily::coherent ||
                                r.config.env.family == EnvFamily::cat) &&
                               !r.config.env.alpha;
    if (sampled_alpha) {
        m["alpha_sampling"] = "alpha = a + ib with a, b uniform on [0, 1), one per trial";
    }
    m["trial_seeds"] = r.trial_seeds;
    ordered_json medians = ordered_json::array();
    for (std::size_t e = 0; e < r.config.epsilons.size(); ++e) {
        ordered_json series = ordered_json::array();
        for (std::size_t k = 0; k <= r.config.n_iters; ++k) {
            series.push_back(round12(r.row(e, k).median_fidelity));
        }
        medians.push_back({{"epsilon", round12(r.config.epsilons[e])},
                           {"median_fidelity", std::move(series)}});
    }
    m["medians"] = std::move(medians);
    return m;
}

} // namespace

void write_results(const AggregateResult &result, const std::filesystem::path &path,
                   OutputFormat format, bool overwrite) {
    if (result.rows.empty()) {
        throw InvalidArgument("refusing to write an aggregate without iterations");
    }
    const auto &c = result.config;
    const std::string family(env_family_name(c.env.family));
    std::ofstream out = open_output(path, overwrite);

    if (format == OutputFormat::csv) {
        out << kCsvHeader << '\n';
        for (const SeriesRow &r : result.rows) {
            out << c.label << ',' << family << ',' << c.env.dim << ',' << fmt12(r.epsilon) << ','
                << r.iteration << ',' << fmt12(r.mean_fidelity) << ',' << fmt12(r.std_fidelity)
                << ',' << fmt12(r.mean_delta) << ',' << fmt12(r.mean_log_delta) << ','
                << c.n_trials << ',' << c.master_seed << '\n';
        }
    } else {
        ordered_json doc;
        doc["config"] = config_json(c);
        ordered_json series = ordered_json::array();
        for (const SeriesRow &r : result.rows) {
            ordered_json row;
            row["experiment"] = c.label;
            row["env_family"] = family;
            row["dim"] = c.env.dim;
            row["epsilon"] = round12(r.epsilon);
            row["iteration"] = r.iteration;
            row["mean_fidelity"] = round12(r.mean_fidelity);
            row["std_fidelity"] = round12(r.std_fidelity);
            row["mean_delta"] = round12(r.mean_delta);
            row["mean_log_delta"] = round12(r.mean_log_delta);
            row["n_trials"] = c.n_trials;
            row["master_seed"] = c.master_seed;
            series.push_back(std::move(row));
        }
        doc["series"] = std::move(series);
        doc["metadata"] = metadata_json(result);
        out << doc.dump(1) << '\n';
    }
    finish(out, path);
}

void write_metadata(const AggregateResult &result, const std::filesystem::path &path,
                    bool overwrite) {
    std::ofstream out = open_output(path, overwrite);
    ordered_json doc;
    doc["config"] = config_json(result.config);
    doc["metadata"] = metadata_json(result);
    out << doc.dump(1) << '\n';
    finish(out, path);
}

void write_trials(const AggregateResult &result, const std::filesystem::path &path,
                  bool overwrite) {
    if (result.trials.empty()) {
        throw InvalidArgument("no trial records were kept for this run");
    }
    std::ofstream out = open_output(path, overwrite);
    out << "epsilon,trial,seed,iteration,outcome,alpha,beta,delta,fidelity,theta_equiv\n";
    for (std::size_t e = 0; e < result.trials.size(); ++e) {
        const std::string eps = fmt12(result.config.epsilons[e]);
        for (std::size_t t = 0; t < result.trials[e].size(); ++t) {
            const TrialResult &tr = result.trials[e][t];
            out << eps << ',' << t << ',' << tr.seed << ",0,,,," << fmt12(result.config.delta_init)
                << ',' << fmt12(tr.initial_fidelity) << ','
                << fmt12(2.0 * std::acos(std::sqrt(tr.initial_fidelity))) << '\n';
            for (const IterationRecord &r : tr.records) {
                out << eps << ',' << t << ',' << tr.seed << ',' << r.iteration << ','
                    << r.outcome << ',' << fmt12(r.alpha) << ',' << fmt12(r.beta) << ','
                    << fmt12(r.delta_after) << ',' << fmt12(r.fidelity_after) << ','
                    << fmt12(r.theta_equiv) << '\n';
            }
        }
    }
    finish(out, path);
}

namespace {

std::vector<std::string> split_csv(const std::string &line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream is(line);
    while (std::getline(is, cell, ',')) {
        cells.push_back(cell);
    }
    if (!line.empty() && line.back() == ',') {
        cells.emplace_back();
    }
    return cells;
}

template <typename T>
T parse_number(const std::string &s, const std::filesystem::path &path, std::size_t line_no) {
    try {
        std::size_t used = 0;
        T value{};
        if constexpr (std::is_same_v<T, double>) {
            value = std::stod(s, &used);
        } else {
            value = static_cast<T>(std::stoull(s, &used));
        }
        if (used != s.size()) {
            throw std::invalid_argument(s);
        }
        return value;
    } catch (const std::exception &) {
        throw IoError(path.string() + ":" + std::to_string(line_no) + ": bad number '" + s + "'");
    }
}

} // namespace

std::vector<CsvRow> read_results_csv(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError(path.string() + ": cannot open for reading");
    }
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader) {
        throw IoError(path.string() + ":1: unexpected header");
    }
    std::vector<CsvRow> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        const auto c = split_csv(line);
        if (c.size() != 11) {
            throw IoError(path.string() + ":" + std::to_string(line_no) + ": expected 11 columns");
        }
        rows.push_back(CsvRow{
            c[0], c[1], parse_number<std::size_t>(c[2], path, line_no),
            parse_number<double>(c[3], path, line_no), parse_number<std::size_t>(c[4], path, line_no),
            parse_number<double>(c[5], path, line_no), parse_number<double>(c[6], path, line_no),
            parse_number<double>(c[7], path, line_no), parse_number<double>(c[8], path, line_no),
            parse_number<std::size_t>(c[9], path, line_no),
            parse_number<std::uint64_t>(c[10], path, line_no)});
    }
    return rows;
}

std::vector<CsvRow> read_results_json(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError(path.string() + ": cannot open for reading");
    }
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception &e) {
        throw IoError(path.string() + ": " + e.what());
    }
    std::vector<CsvRow> rows;
    try {
        for (const auto &r : doc.at("series")) {
            rows.push_back(CsvRow{
                r.at("experiment").get<std::string>(), r.at("env_family").get<std::string>(),
                r.at("dim").get<std::size_t>(), r.at("epsilon").get<double>(),
                r.at("iteration").get<std::size_t>(), r.at("mean_fidelity").get<double>(),
                r.at("std_fidelity").get<double>(), r.at("mean_delta").get<double>(),
                r.at("mean_log_delta").get<double>(), r.at("n_trials").get<std::size_t>(),
                r.at("master_seed").get<std::uint64_t>()});
        }
    } catch (const nlohmann::json::exception &e) {
        throw IoError(path.string() + ": malformed series: " + e.what());
    }
    return rows;
}

double ks_distance(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) {
        throw InvalidArgument("KS distance needs two non-empty samples");
    }
    std::vector<double> x(a.begin(), a.end());
    std::vector<double> y(b.begin(), b.end());
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    std::size_t i = 0;
    std::size_t j = 0;
    double worst = 0.0;
    while (i < x.size() && j < y.size()) {
        const double v = std::min(x[i], y[j]);
        while (i < x.size() && x[i] <= v) ++i;
        while (j < y.size() && y[j] <= v) ++j;
        const double fa = static_cast<double>(i) / static_cast<double>(x.size());
        const double fb = static_cast<double>(j) / static_cast<double>(y.size());
        worst = std::max(worst, std::abs(fa - fb));
    }
    return worst;
}

} // namespace qadapt
