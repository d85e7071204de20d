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

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <unordered_set>

#include <json.hpp>

#include "qadapt/error.hpp"
#include "qadapt/harness.hpp"

using namespace qadapt;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        std::random_device rd;
        path = fs::temp_directory_path() / ("qadapt_harness_" + std::to_string(rd()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ExperimentConfig small_config(EnvFamily family, std::size_t dim) {
    ExperimentConfig c;
    c.env.family = family;
    c.env.dim = dim;
    if (family == EnvFamily::zero_n) c.env.n = dim - 1;
    if (family == EnvFamily::coherent || family == EnvFamily::cat) c.env.cutoff = dim - 1;
    c.epsilons = {0.2, 0.6};
    c.n_trials = 150;
    c.n_iters = 30;
    c.master_seed = 99;
    c.label = "small";
    return c;
}

} // namespace

TEST_CASE("derive_trial_seed: distinct and stable") {
    CHECK(derive_trial_seed(1, 0, 0) == derive_trial_seed(1, 0, 0));
    CHECK(derive_trial_seed(1, 0, 0) != derive_trial_seed(2, 0, 0));
    CHECK(derive_trial_seed(1, 0, 1) != derive_trial_seed(1, 1, 0));
    std::unordered_set<std::uint64_t> seen;
    for (std::uint64_t e = 0; e < 5; ++e)
        for (std::uint64_t t = 0; t < 200000; ++t) seen.insert(derive_trial_seed(1, e, t));
    CHECK(seen.size() == 1000000);
}

TEST_CASE("ExperimentConfig: validation") {
    auto c = small_config(EnvFamily::haar_qubit, 2);
    CHECK_NOTHROW(c.validate());
    c.epsilons = {};
    CHECK_THROWS_AS(c.validate(), InvalidArgument);
    c = small_config(EnvFamily::haar_qubit, 2);
    c.epsilons = {1.2};
    CHECK_THROWS_AS(c.validate(), InvalidArgument);
    c = small_config(EnvFamily::haar_qubit, 2);
    c.n_trials = 0;
    CHECK_THROWS_AS(c.validate(), InvalidArgument);
    c = small_config(EnvFamily::haar_qubit, 2);
    c.label = "a,b";
    CHECK_THROWS_AS(c.validate(), InvalidArgument);
    CHECK_THROWS_AS(figure_config("fig7"), InvalidArgument);
    CHECK(figure_config("fig4").n_iters == 400);
    CHECK(figure_config("fig6b").env.n == 10);
}

TEST_CASE("run_ensemble: layout and single-trial agreement") {
    auto c = small_config(EnvFamily::random_qudit, 4);
    c.n_trials = 1;
    c.epsilons = {0.4};
    const auto r = run_ensemble(c, {1, true});
    REQUIRE(r.rows.size() == c.n_iters + 1);
    RngStream rng(derive_trial_seed(c.master_seed, 0, 0));
    const auto env = generate(c.env, rng);
    const auto trial = run_trial(env, RewardParams{0.4, c.delta_init, c.delta_max}, c.n_iters, rng);
    CHECK(r.row(0, 0).mean_fidelity == doctest::Approx(std::norm(env[0])).epsilon(1e-15));
    CHECK(r.row(0, 0).mean_delta == c.delta_init);
    for (std::size_t k = 0; k < c.n_iters; ++k) {
        CHECK(r.row(0, k + 1).mean_fidelity == trial.records[k].fidelity_after);
        CHECK(r.row(0, k + 1).mean_delta == trial.records[k].delta_after);
        CHECK(r.row(0, k + 1).std_fidelity == 0.0);
        CHECK(r.row(0, k + 1).iteration == k + 1);
    }
    CHECK(r.trials[0][0].records.size() == c.n_iters);
    CHECK_THROWS_AS((void)r.row(1, 0), InvalidArgument);
    CHECK_THROWS_AS((void)r.row(0, c.n_iters + 1), InvalidArgument);
}

TEST_CASE("run_ensemble: statistics match the stored samples") {
    const auto c = small_config(EnvFamily::haar_qubit, 2);
    const auto r = run_ensemble(c, {2, false});
    for (std::size_t e = 0; e < 2; ++e) {
        for (std::size_t k : {0u, 7u, 30u}) {
            const auto s = r.fidelity_samples(e, k);
            const double mean = std::accumulate(s.begin(), s.end(), 0.0) / s.size();
            CHECK(r.row(e, k).mean_fidelity == doctest::Approx(mean).epsilon(1e-12));
        }
    }
    CHECK(r.best_epsilon_index(30) < 2);
}

TEST_CASE("run_ensemble: identical output for any thread count") {
    TempDir tmp;
    auto c = small_config(EnvFamily::random_qudit, 5);
    c.n_trials = 300;
    write_results(run_ensemble(c, {1, false}), tmp.path / "t1.csv", OutputFormat::csv);
    write_results(run_ensemble(c, {3, false}), tmp.path / "t3.csv", OutputFormat::csv);
    write_results(run_ensemble(c, {8, false}), tmp.path / "t8.csv", OutputFormat::csv);
    CHECK(slurp(tmp.path / "t1.csv") == slurp(tmp.path / "t3.csv"));
    CHECK(slurp(tmp.path / "t1.csv") == slurp(tmp.path / "t8.csv"));
}

TEST_CASE("run_ensemble: initial fidelity statistics") {
    auto c = small_config(EnvFamily::haar_qubit, 2);
    c.n_trials = 4000;
    c.n_iters = 1;
    c.epsilons = {0.5};
    const auto haar = run_ensemble(c);
    CHECK(std::abs(haar.row(0, 0).mean_fidelity - 0.5) < 0.02);
    const double var = haar.row(0, 0).std_fidelity * haar.row(0, 0).std_fidelity;
    CHECK(std::abs(var - 1.0 / 12) < 0.1 / 12);

    auto q = small_config(EnvFamily::random_qudit, 11);
    q.n_trials = 4000;
    q.n_iters = 1;
    q.epsilons = {0.5};
    CHECK(std::abs(run_ensemble(q).row(0, 0).mean_fidelity - 1.0 / 11) < 0.01);

    auto z = small_config(EnvFamily::zero_n, 11);
    z.n_iters = 1;
    const auto zr = run_ensemble(z);
    CHECK(zr.row(0, 0).mean_fidelity == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(zr.row(0, 0).std_fidelity < 1e-12);
}

TEST_CASE("write_results: CSV and JSON round trip") {
    TempDir tmp;
    auto c = small_config(EnvFamily::coherent, 11);
    const auto r = run_ensemble(c);
    write_results(r, tmp.path / "r.csv", OutputFormat::csv);
    write_results(r, tmp.path / "r.json", OutputFormat::json);

    const auto csv = read_results_csv(tmp.path / "r.csv");
    const auto json = read_results_json(tmp.path / "r.json");
    REQUIRE(csv.size() == r.rows.size());
    REQUIRE(json.size() == r.rows.size());
    for (std::size_t i = 0; i < r.rows.size(); ++i) {
        const auto &row = r.rows[i];
        for (const auto *x : {&csv[i], &json[i]}) {
            CHECK(x->experiment == "small");
            CHECK(x->env_family == "coherent");
            CHECK(x->dim == 11);
            CHECK(x->iteration == row.iteration);
            CHECK(x->n_trials == c.n_trials);
            CHECK(x->master_seed == 99);
            CHECK(std::abs(x->epsilon - row.epsilon) < 1e-9);
            CHECK(std::abs(x->mean_fidelity - row.mean_fidelity) < 1e-9);
            CHECK(std::abs(x->std_fidelity - row.std_fidelity) < 1e-9);
            CHECK(std::abs(x->mean_delta - row.mean_delta) < 1e-9 * std::max(1.0, row.mean_delta));
            CHECK(std::abs(x->mean_log_delta - row.mean_log_delta) < 1e-9 * std::max(1.0, std::abs(row.mean_log_delta)));
        }
    }

    const auto doc = nlohmann::json::parse(slurp(tmp.path / "r.json"));
    CHECK(doc["config"]["master_seed"] == 99);
    CHECK(doc["config"]["label"] == "small");
    CHECK(doc["metadata"]["trial_seeds"][1][3] == derive_trial_seed(99, 1, 3));
    CHECK(doc["metadata"].contains("alpha_sampling"));
    CHECK(doc["metadata"]["medians"].size() == 2);

    const std::string text = slurp(tmp.path / "r.csv");
    CHECK(text.substr(0, kCsvHeader.size()) == kCsvHeader);
}

TEST_CASE("write_results: refuses to overwrite") {
    TempDir tmp;
    const auto r = run_ensemble(small_config(EnvFamily::haar_qubit, 2));
    const auto p = tmp.path / "x.csv";
    write_results(r, p, OutputFormat::csv);
    CHECK_THROWS_AS(write_results(r, p, OutputFormat::csv), IoError);
    CHECK_NOTHROW(write_results(r, p, OutputFormat::csv, true));
    CHECK_THROWS_AS(write_results(r, tmp.path / "missing" / "x.csv", OutputFormat::csv), IoError);
}

TEST_CASE("write_trials and write_metadata") {
    TempDir tmp;
    auto c = small_config(EnvFamily::haar_qubit, 2);
    c.n_trials = 3;
    c.n_iters = 4;
    const auto kept = run_ensemble(c, {1, true});
    write_trials(kept, tmp.path / "t.csv");
    std::ifstream in(tmp.path / "t.csv");
    std::size_t lines = 0;
    for (std::string line; std::getline(in, line);) ++lines;
    CHECK(lines == 1 + 2 * 3 * (4 + 1));
    CHECK_THROWS_AS(write_trials(run_ensemble(c), tmp.path / "u.csv"), InvalidArgument);

    write_metadata(kept, tmp.path / "m.json");
    const auto doc = nlohmann::json::parse(slurp(tmp.path / "m.json"));
    CHECK(doc.contains("config"));
    CHECK(doc.contains("metadata"));
}

TEST_CASE("read_results_csv: rejects malformed input") {
    TempDir tmp;
    {
        std::ofstream(tmp.path / "bad_header.csv") << "a,b,c\n";
        std::ofstream out(tmp.path / "bad_row.csv");
        out << kCsvHeader << "\nrun,haar_qubit,2,0.5,0,notanumber,0,1,0,1,1\n";
    }
    CHECK_THROWS_AS(read_results_csv(tmp.path / "bad_header.csv"), IoError);
    CHECK_THROWS_WITH_AS(read_results_csv(tmp.path / "bad_row.csv"), doctest::Contains(":2:"), IoError);
    CHECK_THROWS_AS(read_results_csv(tmp.path / "absent.csv"), IoError);
}

TEST_CASE("ks_distance: examples") {
    const std::vector<double> a{0.1, 0.2, 0.3, 0.4};
    CHECK(ks_distance(a, a) == 0.0);
    const std::vector<double> b{0.5, 0.6, 0.7, 0.8};
    CHECK(ks_distance(a, b) == 1.0);
    const std::vector<double> c{0.15, 0.25, 0.35, 0.45};
    CHECK(ks_distance(a, c) == doctest::Approx(0.25));
    CHECK_THROWS_AS(ks_distance({}, a), InvalidArgument);
}
