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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "qadapt/harness.hpp"

namespace fs = std::filesystem;

namespace {

struct Sandbox {
    fs::path dir;
    Sandbox() {
        std::random_device rd;
        dir = fs::temp_directory_path() / ("qadapt_cli_" + std::to_string(rd()));
        fs::create_directories(dir);
    }
    ~Sandbox() { fs::remove_all(dir); }

    // Runs the CLI inside the sandbox; stdout and stderr go to out.txt.
    int run(const std::string &args) const {
        const std::string cmd = "cd '" + dir.string() + "' && '" + QADAPT_CLI + "' " + args +
                                " > out.txt 2>&1";
        const int raw = std::system(cmd.c_str());
        return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    }
    std::string output() const { return read("out.txt"); }
    std::string read(const std::string &name) const {
        std::ifstream in(dir / name, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }
};

} // namespace

TEST_CASE("cli: run writes one row per iteration plus the initial point") {
    Sandbox sb;
    REQUIRE(sb.run("run --env haar-qubit --epsilon 0.5 --trials 100 --iterations 50 --seed 7 "
                   "--out out.csv") == 0);
    const auto rows = qadapt::read_results_csv(sb.dir / "out.csv");
    CHECK(rows.size() == 51);
    CHECK(rows.front().iteration == 0);
    CHECK(rows.back().iteration == 50);
    CHECK(rows.back().master_seed == 7);
    CHECK(fs::exists(sb.dir / "out.meta.json"));
}

TEST_CASE("cli: json output and trial dump") {
    Sandbox sb;
    REQUIRE(sb.run("run --env zero-n --dim 11 --n 10 --epsilon 0.3 --trials 10 --iterations 5 "
                   "--label z --format json --dump-trials") == 0);
    CHECK(qadapt::read_results_json(sb.dir / "z.json").size() == 6);
    CHECK(fs::exists(sb.dir / "z.trials.csv"));
}

TEST_CASE("cli: inconsistent arguments are usage errors") {
    Sandbox sb;
    CHECK(sb.run("run --env coherent --dim 12 --trials 5 --iterations 2") == 2);
    CHECK(sb.output().find("cutoff") != std::string::npos);
    CHECK(sb.run("run --env zero-n --dim 11 --trials 5") == 2);
    CHECK(sb.run("run --env haar-qubit --n 3 --trials 5") == 2);
    CHECK(sb.run("run --env haar-qubit --alpha-re 0.5 --trials 5") == 2);
    CHECK(sb.run("run --env warp") == 2);
    CHECK(sb.run("run --env haar-qubit --epsilon 1.5") == 2);
    CHECK(sb.run("reproduce fig9") == 2);
    CHECK(sb.run("") == 2);
}

TEST_CASE("cli: reproduce is byte-identical across runs and thread counts") {
    Sandbox sb;
    REQUIRE(sb.run("reproduce fig3 --trials 200 --threads 1 --out a") == 0);
    REQUIRE(sb.run("reproduce fig3 --trials 200 --threads 4 --out b") == 0);
    CHECK(!sb.read("a/fig3.csv").empty());
    CHECK(sb.read("a/fig3.csv") == sb.read("b/fig3.csv"));
    CHECK(sb.read("a/fig3.json") == sb.read("b/fig3.json"));
}

TEST_CASE("cli: existing outputs need --force") {
    Sandbox sb;
    const std::string args = "run --env haar-qubit --trials 10 --iterations 3 --out r.csv";
    REQUIRE(sb.run(args) == 0);
    CHECK(sb.run(args) == 1);
    CHECK(sb.output().find("exists") != std::string::npos);
    CHECK(sb.run(args + " --force") == 0);
}

TEST_CASE("cli: verify") {
    Sandbox sb;
    CHECK(sb.run("verify --seeds 20") == 0);
    CHECK(sb.output().find("all checks passed") != std::string::npos);
    CHECK(sb.run("verify --seeds 20 --inject-fault") == 1);
    CHECK(sb.output().find("FAIL") != std::string::npos);
}

TEST_CASE("cli: help lists the defaults") {
    Sandbox sb;
    CHECK(sb.run("--help") == 0);
    const std::string help = sb.output();
    CHECK(help.find("0.1, 0.3, 0.5, 0.7, 0.9") != std::string::npos);
    CHECK(help.find("2000") != std::string::npos);
    CHECK(help.find("4pi") != std::string::npos);
}
