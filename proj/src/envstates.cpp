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

#include "qadapt/envstates.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "qadapt/error.hpp"

namespace qadapt {

EnvFamily parse_env_family(std::string_view name) {
    std::string key(name);
    for (char &c : key) {
        if (c == '-') {
            c = '_';
        }
    }
    if (key == "haar_qubit") return EnvFamily::haar_qubit;
    if (key == "random_qudit") return EnvFamily::random_qudit;
    if (key == "coherent") return EnvFamily::coherent;
    if (key == "cat") return EnvFamily::cat;
    if (key == "zero_n") return EnvFamily::zero_n;
    throw InvalidArgument("unknown environment family '" + std::string(name) + "'");
}

std::string_view env_family_name(EnvFamily family) {
    switch (family) {
    case EnvFamily::haar_qubit: return "haar_qubit";
    case EnvFamily::random_qudit: return "random_qudit";
    case EnvFamily::coherent: return "coherent";
    case EnvFamily::cat: return "cat";
    case EnvFamily::zero_n: return "zero_n";
    }
    return "unknown";
}

void EnvSpec::validate() const {
    if (dim < 2) {
        throw InvalidArgument("environment dimension must be at least 2");
    }
    switch (family) {
    case EnvFamily::haar_qubit:
        if (dim != 2) {
            throw InvalidArgument("haar_qubit requires dim = 2");
        }
        break;
    case EnvFamily::random_qudit:
        break;
    case EnvFamily::coherent:
    case EnvFamily::cat:
        if (cutoff < 1) {
            throw InvalidArgument("Fock cutoff must be at least 1");
        }
        if (dim != cutoff + 1) {
            throw InvalidArgument("dim must equal cutoff + 1 (" +
                                  std::to_string(cutoff + 1) + ") for " +
                                  std::string(env_family_name(family)));
        }
        if (alpha && !(std::isfinite(alpha->real()) && std::isfinite(alpha->imag()))) {
            throw InvalidArgument("alpha must be finite");
        }
        break;
    case EnvFamily::zero_n:
        if (n == 0 || n >= dim) {
            throw InvalidArgument("zero_n requires 0 < n < dim");
        }
        break;
    }
}

StateVector haar_qubit_from_draws(double cos_theta, double phi) {
    const double theta = std::acos(std::clamp(cos_theta, -1.0, 1.0));
    return StateVector::normalized(
        {std::cos(theta / 2.0), std::polar(std::sin(theta / 2.0), phi)});
}

StateVector haar_qubit(RngStream &rng) {
    const double cos_theta = 1.0 - 2.0 * rng.uniform();
    const double phi = 2.0 * std::numbers::pi * rng.uniform();
    return haar_qubit_from_draws(cos_theta, phi);
}

StateVector random_qudit(std::size_t dim, RngStream &rng) {
    if (dim < 2) {
        throw InvalidArgument("random_qudit requires dim >= 2");
    }
    for (int attempt = 0; attempt < 2; ++attempt) {
        std::vector<Amplitude> c(dim);
        double n2 = 0.0;
        for (auto &ck : c) {
            const double a = rng.uniform();
            const double b = rng.uniform();
            ck = {a, b};
            n2 += a * a + b * b;
        }
        if (n2 > 0.0) {
            return StateVector::normalized(std::move(c));
        }
    }
    throw NumericalError("random_qudit drew an all-zero coefficient vector twice");
}

namespace {

// e^{-|alpha|^2/2} alpha^n / sqrt(n!) for n = 0..cutoff via the ratio
// alpha / sqrt(n).
std::vector<Amplitude> coherent_amplitudes(std::complex<double> alpha,
                                           std::size_t cutoff) {
    std::vector<Amplitude> amps(cutoff + 1);
    amps[0] = std::exp(-std::norm(alpha) / 2.0);
    for (std::size_t n = 1; n <= cutoff; ++n) {
        amps[n] = amps[n - 1] * alpha / std::sqrt(static_cast<double>(n));
    }
    return amps;
}

double squared_norm(const std::vector<Amplitude> &v) {
    double acc = 0.0;
    for (const auto &a : v) {
        acc += std::norm(a);
    }
    return acc;
}

} // namespace

TruncatedState coherent(std::complex<double> alpha, std::size_t cutoff) {
    if (cutoff < 1) {
        throw InvalidArgument("Fock cutoff must be at least 1");
    }
    auto amps = coherent_amplitudes(alpha, cutoff);
    const double kept = squared_norm(amps);
    const double last = std::norm(amps.back());
    return TruncatedState{StateVector::normalized(std::move(amps)), std::sqrt(kept),
                          std::max(0.0, 1.0 - kept), last};
}

TruncatedState cat(std::complex<double> alpha, std::size_t cutoff) {
    if (cutoff < 1) {
        throw InvalidArgument("Fock cutoff must be at least 1");
    }
    auto plus = coherent_amplitudes(alpha, cutoff);
    std::vector<Amplitude> amps(cutoff + 1);
    for (std::size_t n = 0; n <= cutoff; n += 2) {
        amps[n] = 2.0 * plus[n];
    }
    const double kept = squared_norm(amps);
    // <alpha|-alpha> = e^{-2|alpha|^2}
    const double full = 2.0 * (1.0 + std::exp(-2.0 * std::norm(alpha)));
    const double last = std::norm(amps.back()) / full;
    return TruncatedState{StateVector::normalized(std::move(amps)), std::sqrt(kept),
                          std::max(0.0, 1.0 - kept / full), last};
}

StateVector zero_n(std::size_t n, std::size_t dim) {
    if (dim < 2 || n == 0 || n >= dim) {
        throw InvalidArgument("zero_n requires 0 < n < dim");
    }
    std::vector<Amplitude> amps(dim);
    amps[0] = std::numbers::sqrt2 / 2.0;
    amps[n] = std::numbers::sqrt2 / 2.0;
    return StateVector::normalized(std::move(amps));
}

std::complex<double> sample_alpha(RngStream &rng) {
    const double a = rng.uniform();
    const double b = rng.uniform();
    return {a, b};
}

namespace {

StateVector checked_truncation(const TruncatedState &t) {
    if (t.tail_mass >= kMaxTruncationTail) {
        throw NumericalError("Fock truncation discards " + std::to_string(t.tail_mass) +
                             " of the norm; raise the cutoff");
    }
    return t.state;
}

} // namespace

StateVector generate(const EnvSpec &spec, RngStream &rng) {
    switch (spec.family) {
    case EnvFamily::haar_qubit:
        return haar_qubit(rng);
    case EnvFamily::random_qudit:
        return random_qudit(spec.dim, rng);
    case EnvFamily::coherent:
        return checked_truncation(
            coherent(spec.alpha ? *spec.alpha : sample_alpha(rng), spec.cutoff));
    case EnvFamily::cat:
        return checked_truncation(
            cat(spec.alpha ? *spec.alpha : sample_alpha(rng), spec.cutoff));
    case EnvFamily::zero_n:
        return zero_n(spec.n, spec.dim);
    }
    throw InvalidArgument("unknown environment family");
}

} // namespace qadapt
