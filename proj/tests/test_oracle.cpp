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

#include <chrono>
#include <cmath>
#include <complex>
#include <numbers>

#include "qadapt/envstates.hpp"
#include "qadapt/error.hpp"
#include "qadapt/oracle.hpp"
#include "qadapt/protocol.hpp"

using namespace qadapt;
using cplx = std::complex<double>;
constexpr double pi = std::numbers::pi;

namespace {

double closed_form_onestep(double theta, double delta) {
    const double p0 = std::pow(std::cos(theta / 2), 2);
    const double p1 = 1.0 - p0;
    const double mc = delta == 0.0 ? 1.0 : std::sin(delta / 2) / (delta / 2);
    return p0 * p0 + p1 * (p0 * 0.5 * (1 + mc) + p1 * 0.5 * (1 - mc));
}

} // namespace

TEST_CASE("xor_permutation: hermitian involution") {
    for (std::size_t d = 2; d <= oracle::kMaxOracleDim; ++d) {
        const auto p = oracle::xor_permutation(d);
        const std::size_t n = d * d;
        for (std::size_t r = 0; r < n; ++r) {
            double row = 0.0;
            for (std::size_t c = 0; c < n; ++c) {
                CHECK(p[r * n + c] == p[c * n + r]);
                row += p[r * n + c];
            }
            CHECK(row == 1.0);
        }
    }
}

TEST_CASE("tripartite_step: identity frame, aligned environment") {
    RngStream rng(1);
    const auto out = oracle::tripartite_step(UnitaryMatrix::identity(2), StateVector::basis(2, 0),
                                             std::nullopt, rng);
    CHECK(out.outcome == 0);
    CHECK(out.probs[0] == 1.0);
    CHECK(std::abs(out.post_agent[0] - cplx(1.0)) < 1e-15);
}

TEST_CASE("tripartite_step: equatorial qubit gives even odds") {
    RngStream rng(2);
    const auto env = haar_qubit_from_draws(0.0, 1.2);
    const auto out = oracle::tripartite_step(UnitaryMatrix::identity(2), env, std::nullopt, rng);
    CHECK(out.probs[0] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(out.probs[1] == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("tripartite_step: d=3 agrees with the reduced rule for every outcome") {
    RngStream rng(3);
    const auto params = RewardParams{};
    for (int c = 0; c < 20; ++c) {
        const auto env = random_qudit(3, rng);
        AgentState agent = AgentState::fresh(3, params);
        agent = act(agent, env, params, 1, rng.uniform(-3, 3), rng.uniform(-3, 3)).agent;
        agent = act(agent, env, params, 2, rng.uniform(-3, 3), rng.uniform(-3, 3)).agent;
        const auto reduced = born_probabilities(agent.frame, env);
        for (std::size_t m = 0; m < 3; ++m) {
            const auto out = oracle::tripartite_step(agent.frame, env, m, rng);
            CHECK(out.outcome == m);
            CHECK(std::abs(out.probs[m] - reduced[m]) < 1e-12);
            // The register measurement never disturbs the agent.
            CHECK(std::abs(fidelity(out.post_agent, agent.state()) - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("tripartite_step: guards") {
    RngStream rng(4);
    const auto big = StateVector::basis(oracle::kMaxOracleDim + 1, 0);
    CHECK_THROWS_AS(oracle::tripartite_step(UnitaryMatrix::identity(big.dim()), big, std::nullopt, rng),
                    InvalidArgument);
    CHECK_THROWS_AS(oracle::tripartite_step(UnitaryMatrix::identity(3), StateVector::basis(2, 0),
                                            std::nullopt, rng),
                    DimensionMismatch);
    CHECK_THROWS_AS(oracle::tripartite_step(UnitaryMatrix::identity(2), StateVector::basis(2, 0), 2, rng),
                    InvalidArgument);
}

TEST_CASE("analytic_post_fidelity: examples") {
    CHECK(oracle::analytic_post_fidelity(1.0, 0.0, 0.7, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(oracle::analytic_post_fidelity(0.0, 1.0, 0.0, pi) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(oracle::analytic_post_fidelity(0.0, 1.0, 0.0, 0.0) == 0.0);
    const double s = std::sqrt(0.5);
    // beta = pi/2 reaches an equal superposition only with the matching phase
    CHECK(oracle::analytic_post_fidelity(s, cplx(0.0, -s), 0.0, pi / 2) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(oracle::analytic_post_fidelity(s, cplx(0.0, s), 0.0, pi / 2) < 1e-15);
}

TEST_CASE("expected_onestep_fidelity: limits and closed form") {
    const auto aligned = oracle::expected_onestep_fidelity(0.0, 3.0, 10000);
    CHECK(aligned.mean == doctest::Approx(1.0).epsilon(1e-15));
    const double theta = 1.3;
    const auto frozen = oracle::expected_onestep_fidelity(theta, 0.0, 10000);
    CHECK(frozen.mean == doctest::Approx(std::pow(std::cos(theta / 2), 2)).epsilon(1e-12));

    const auto est = oracle::expected_onestep_fidelity(pi / 2, pi, 1000000);
    CHECK(est.mean == doctest::Approx(0.50003602628398058).epsilon(1e-15));
    CHECK(est.standard_error == doctest::Approx(0.00012489632388180442).epsilon(1e-12));
    CHECK(std::abs(est.mean - closed_form_onestep(pi / 2, pi)) < 5 * est.standard_error);

    RngStream rng(5);
    for (int c = 0; c < 10; ++c) {
        const double t = rng.uniform(0.0, pi);
        const double d = rng.uniform(0.0, 4 * pi);
        const auto e = oracle::expected_onestep_fidelity(t, d, 200000, 100 + c);
        CHECK(std::abs(e.mean - closed_form_onestep(t, d)) < 5 * e.standard_error + 1e-12);
    }
    CHECK_THROWS_AS(oracle::expected_onestep_fidelity(1.0, 1.0, 100), InvalidArgument);
}

TEST_CASE("matrix_exponential: diagonal and nilpotent inputs") {
    const auto diag = oracle::matrix_exponential(2, {cplx(0, 1.5), 0.0, 0.0, 2.0});
    CHECK(std::abs(diag[0] - std::exp(cplx(0, 1.5))) < 1e-13);
    CHECK(std::abs(diag[3] - std::exp(2.0)) < 1e-12);
    const auto nil = oracle::matrix_exponential(2, {0.0, 3.0, 0.0, 0.0});
    CHECK(std::abs(nil[1] - cplx(3.0)) < 1e-14);
    CHECK(std::abs(nil[0] - cplx(1.0)) < 1e-14);
    CHECK_THROWS_AS(oracle::matrix_exponential(3, {1.0}), DimensionMismatch);
}

TEST_CASE("tripartite_trial: matches the reduced trial") {
    RngStream envs(6);
    for (std::size_t d : {2u, 3u}) {
        for (int c = 0; c < 10; ++c) {
            const auto env = random_qudit(d, envs);
            const std::uint64_t seed = envs.next_u64();
            RewardParams params;
            params.epsilon = 0.5;
            RngStream a(seed);
            const auto trace = oracle::tripartite_trial(env, params, 40, a);
            const auto trial = run_trial(env, params, 40, seed);
            for (std::size_t k = 0; k < 40; ++k) {
                CHECK(trace.outcomes[k] == trial.records[k].outcome);
                CHECK(std::abs(trace.fidelities[k] - trial.records[k].fidelity_after) < 1e-10);
                CHECK(trace.deltas[k] == doctest::Approx(trial.records[k].delta_after).epsilon(1e-14));
            }
        }
    }
}

TEST_CASE("run_verification: the reduced stepper passes") {
    const auto start = std::chrono::steady_clock::now();
    const auto checks = oracle::run_verification({});
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    CHECK(checks.size() >= 7);
    for (const auto &c : checks) {
        INFO(c.name << ": worst " << c.worst << " tol " << c.tolerance << " " << c.detail);
        CHECK(c.passed);
    }
    CHECK(secs < 5.0);
}

TEST_CASE("run_verification: a misconjugated update is caught") {
    oracle::VerifyOptions opt;
    opt.cases = 20;
    const auto checks = oracle::run_verification(opt, oracle::fixtures::misconjugated_step);
    bool any_failed = false;
    for (const auto &c : checks) any_failed |= !c.passed;
    CHECK(any_failed);
    CHECK_THROWS_AS(oracle::run_verification(oracle::VerifyOptions{0, 40, 1}), InvalidArgument);
}
