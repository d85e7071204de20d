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
 * Environment-state families: Haar-random qubits, random qudits, truncated
 * coherent and cat states, and (|0> + |n>)/sqrt(2).
 */

#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "qadapt/qstate.hpp"
#include "qadapt/rng.hpp"

namespace qadapt {

enum class EnvFamily { haar_qubit, random_qudit, coherent, cat, zero_n };

/// Accepts both `haar-qubit` and `haar_qubit` spellings.
EnvFamily parse_env_family(std::string_view name);
/// Underscore spelling, as written to result files.
std::string_view env_family_name(EnvFamily family);

inline constexpr std::size_t kDefaultCutoff = 10;
/// Largest pre-renormalization tail mass accepted for a truncated state.
inline constexpr double kMaxTruncationTail = 0.01;

struct EnvSpec {
    EnvFamily family = EnvFamily::haar_qubit;
    std::size_t dim = 2;
    /// Excited level for zero_n.
    std::size_t n = 0;
    /// Fock cutoff for coherent and cat; dim must equal cutoff + 1.
    std::size_t cutoff = kDefaultCutoff;
    /// Fixed coherent amplitude. When empty, each draw samples
    /// alpha = a + ib with a, b uniform on [0, 1).
    std::optional<std::complex<double>> alpha;

    void validate() const;
};

StateVector haar_qubit(RngStream &rng);
/// cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>
StateVector haar_qubit_from_draws(double cos_theta, double phi);

/// c_k = a_k + i b_k with a_k, b_k uniform on [0, 1), drawn in the order
/// a_0, b_0, a_1, b_1, ..., then normalized.
StateVector random_qudit(std::size_t dim, RngStream &rng);

struct TruncatedState {
    StateVector state;
    /// Norm of the truncated vector before renormalization.
    double raw_norm;
    /// Probability mass lost beyond the cutoff.
    double tail_mass;
    /// |<cutoff|psi>|^2 before renormalization.
    double last_term_probability;
};

/// e^{-|alpha|^2/2} sum_{n <= cutoff} alpha^n / sqrt(n!) |n>, renormalized.
TruncatedState coherent(std::complex<double> alpha, std::size_t cutoff);

/// (|alpha> + |-alpha>) truncated at `cutoff` and normalized from the
/// truncated vector itself. Odd Fock amplitudes are exactly zero.
TruncatedState cat(std::complex<double> alpha, std::size_t cutoff);

/// (|0> + |n>)/sqrt(2)
StateVector zero_n(std::size_t n, std::size_t dim);

/// alpha = a + ib, a and b uniform on [0, 1), a drawn first.
std::complex<double> sample_alpha(RngStream &rng);

/// Draws one environment for `spec`. Deterministic families consume no
/// randomness.
StateVector generate(const EnvSpec &spec, RngStream &rng);

} // namespace qadapt
