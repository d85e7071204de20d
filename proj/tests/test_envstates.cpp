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
#include <complex>
#include <numbers>

#include "qadapt/envstates.hpp"
#include "qadapt/error.hpp"

using namespace qadapt;
using cplx = std::complex<double>;
constexpr double pi = std::numbers::pi;

TEST_CASE("parse_env_family: both spellings") {
    CHECK(parse_env_family("haar-qubit") == EnvFamily::haar_qubit);
    CHECK(parse_env_family("haar_qubit") == EnvFamily::haar_qubit);
    CHECK(parse_env_family("random-qudit") == EnvFamily::random_qudit);
    CHECK(parse_env_family("zero-n") == EnvFamily::zero_n);
    CHECK(parse_env_family("cat") == EnvFamily::cat);
    CHECK(env_family_name(EnvFamily::zero_n) == "zero_n");
    CHECK_THROWS_AS(parse_env_family("gaussian"), InvalidArgument);
}

TEST_CASE("haar_qubit_from_draws: poles and equator") {
    const auto north = haar_qubit_from_draws(1.0, 0.3);
    CHECK(std::abs(north[0] - cplx(1.0)) < 1e-15);
    CHECK(std::abs(north[1]) < 1e-15);
    const auto south = haar_qubit_from_draws(-1.0, 0.0);
    CHECK(std::abs(south[0]) < 1e-15);
    CHECK(std::abs(south[1] - cplx(1.0)) < 1e-15);
    const auto eq = haar_qubit_from_draws(0.0, pi / 2);
    CHECK(std::norm(eq[0]) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(std::abs(eq[1] - cplx(0.0, std::sqrt(0.5))) < 1e-15);
}

TEST_CASE("haar_qubit: mean overlap with |0> is one half") {
    RngStream rng(100);
    const int n = 100000;
    double sum = 0.0, sum_sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double f = std::norm(haar_qubit(rng)[0]);
        sum += f;
        sum_sq += f * f;
    }
    const double mean = sum / n;
    CHECK(std::abs(mean - 0.5) < 0.005);
    // cos^2(theta/2) is uniform on [0, 1] under the Haar measure
    CHECK(std::abs(sum_sq / n - mean * mean - 1.0 / 12) < 0.002);
}

TEST_CASE("random_qudit: normalized with mean overlap 1/d") {
    RngStream rng(101);
    const int n = 100000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const auto s = random_qudit(11, rng);
        sum += std::norm(s[0]);
        if (i < 1000) CHECK(std::abs(s.norm() - 1.0) < 1e-12);
    }
    CHECK(std::abs(sum / n - 1.0 / 11) < 0.003);
    CHECK(rng.counter() == 2u * 11u * n);
    CHECK_THROWS_AS(random_qudit(1, rng), InvalidArgument);
}

TEST_CASE("coherent: examples") {
    const auto vac = coherent(0.0, 10);
    CHECK(std::abs(vac.state[0] - cplx(1.0)) < 1e-15);
    CHECK(vac.tail_mass < 1e-15);

    const auto one = coherent(1.0, 10);
    CHECK(std::abs(one.state[1] / one.state[0] - cplx(1.0)) < 1e-14);
    CHECK(std::abs(one.state[2] / one.state[1] - cplx(1.0 / std::sqrt(2.0))) < 1e-14);

    const cplx alpha(1.0, 1.0);
    const auto t = coherent(alpha, 10);
    double fact = 1.0;
    for (int k = 2; k <= 10; ++k) fact *= k;
    const double exact_last = std::exp(-2.0) * std::pow(2.0, 10) / fact;
    CHECK(t.last_term_probability == doctest::Approx(exact_last).epsilon(1e-12));
    CHECK(t.last_term_probability <= 0.0062);
    CHECK(t.tail_mass < 1e-4);
    CHECK(std::abs(t.state.norm() - 1.0) < 1e-14);
    // phase of amplitude n is n * arg(alpha)
    CHECK(std::arg(t.state[3]) == doctest::Approx(std::remainder(3 * pi / 4, 2 * pi)).epsilon(1e-12));
    CHECK_THROWS_AS(coherent(1.0, 0), InvalidArgument);
}

TEST_CASE("coherent: last term bounded over the sampling square") {
    for (double a = 0.0; a <= 1.0; a += 0.05) {
        for (double b = 0.0; b <= 1.0; b += 0.05) {
            CHECK(coherent(cplx(a, b), 10).last_term_probability <= 0.0062 + 1e-4);
        }
    }
}

TEST_CASE("cat: even support only") {
    const auto t = cat(cplx(0.8, 0.6), 10);
    for (std::size_t k = 1; k < 11; k += 2) CHECK(t.state[k] == cplx(0.0));
    CHECK(std::abs(t.state.norm() - 1.0) < 1e-14);

    const auto small = cat(cplx(1e-9, 0.0), 10);
    CHECK(std::abs(std::abs(small.state[0]) - 1.0) < 1e-12);

    const auto unit = cat(1.0, 10);
    CHECK(unit.raw_norm == doctest::Approx(std::sqrt(2.0 * (1.0 + std::exp(-2.0)))).epsilon(2e-3));
    CHECK(unit.tail_mass < 1e-6);

    // |0> + |1> amplitudes relative to the coherent state
    const auto coh = coherent(cplx(0.5, 0.5), 10);
    const auto ct = cat(cplx(0.5, 0.5), 10);
    const cplx r0 = ct.state[0] / coh.state[0];
    for (std::size_t k = 2; k < 11; k += 2) CHECK(std::abs(ct.state[k] / coh.state[k] - r0) < 1e-12);
}

TEST_CASE("zero_n: equal superposition") {
    const auto s = zero_n(10, 11);
    CHECK(std::norm(s[0]) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(std::norm(s[10]) == doctest::Approx(0.5).epsilon(1e-15));
    for (std::size_t k = 1; k < 10; ++k) CHECK(s[k] == cplx(0.0));
    CHECK_THROWS_AS(zero_n(0, 11), InvalidArgument);
    CHECK_THROWS_AS(zero_n(11, 11), InvalidArgument);
}

TEST_CASE("sample_alpha: unit square") {
    RngStream rng(102);
    for (int i = 0; i < 10000; ++i) {
        const cplx a = sample_alpha(rng);
        CHECK(a.real() >= 0.0);
        CHECK(a.real() < 1.0);
        CHECK(a.imag() >= 0.0);
        CHECK(a.imag() < 1.0);
    }
}

TEST_CASE("EnvSpec: validation") {
    EnvSpec s;
    CHECK_NOTHROW(s.validate());
    s.dim = 3;
    CHECK_THROWS_AS(s.validate(), InvalidArgument);

    s = EnvSpec{EnvFamily::coherent, 11, 0, 10, std::nullopt};
    CHECK_NOTHROW(s.validate());
    s.dim = 12;
    CHECK_THROWS_AS(s.validate(), InvalidArgument);

    s = EnvSpec{EnvFamily::zero_n, 11, 10, 10, std::nullopt};
    CHECK_NOTHROW(s.validate());
    s.n = 0;
    CHECK_THROWS_AS(s.validate(), InvalidArgument);

    s = EnvSpec{EnvFamily::random_qudit, 1, 0, 10, std::nullopt};
    CHECK_THROWS_AS(s.validate(), InvalidArgument);
}

TEST_CASE("generate: dispatch and truncation guard") {
    RngStream rng(103);
    CHECK(generate(EnvSpec{}, rng).dim() == 2);
    CHECK(generate(EnvSpec{EnvFamily::random_qudit, 5, 0, 10, std::nullopt}, rng).dim() == 5);
    CHECK(generate(EnvSpec{EnvFamily::coherent, 11, 0, 10, std::nullopt}, rng).dim() == 11);

    EnvSpec big{EnvFamily::coherent, 4, 0, 3, cplx(2.0, 0.0)};
    CHECK_THROWS_AS(generate(big, rng), NumericalError);

    // A fixed alpha consumes no draws.
    RngStream quiet(104);
    generate(EnvSpec{EnvFamily::cat, 11, 0, 10, cplx(0.3, 0.4)}, quiet);
    CHECK(quiet.counter() == 0);
}
