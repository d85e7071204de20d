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
 * Dense state vectors and unitaries for a single d-level system, Born-rule
 * probabilities and the gate constructions used by the adaptation protocol.
 */

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "qadapt/rng.hpp"

namespace qadapt {

using Amplitude = std::complex<double>;

inline constexpr double kNormTolerance = 1e-10;
inline constexpr double kUnitarityTolerance = 1e-10;

class UnitaryMatrix;

/// Unit-norm pure state of a d-level system, d >= 2.
class StateVector {
  public:
    /// Computational basis state |index>.
    static StateVector basis(std::size_t dim, std::size_t index);
    /// Takes amplitudes that are already normalized (within 1e-10).
    static StateVector from_amplitudes(std::vector<Amplitude> amps);
    /// Rescales `amps` to unit norm. Throws on a zero vector.
    static StateVector normalized(std::vector<Amplitude> amps);

    [[nodiscard]] std::size_t dim() const noexcept { return amps_.size(); }
    [[nodiscard]] std::span<const Amplitude> amplitudes() const noexcept {
        return amps_;
    }
    [[nodiscard]] Amplitude operator[](std::size_t i) const { return amps_[i]; }
    [[nodiscard]] double norm() const noexcept;

  private:
    explicit StateVector(std::vector<Amplitude> amps) : amps_(std::move(amps)) {}
    friend class UnitaryMatrix;
    friend StateVector apply_unitary(const UnitaryMatrix &u,
                                     const StateVector &s);

    std::vector<Amplitude> amps_;
};

/// Dense row-major d x d unitary.
class UnitaryMatrix {
  public:
    static UnitaryMatrix identity(std::size_t dim);
    /// Row-major entries; checked for unitarity within 1e-10.
    static UnitaryMatrix from_entries(std::size_t dim,
                                      std::vector<Amplitude> entries);

    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
    [[nodiscard]] Amplitude operator()(std::size_t row, std::size_t col) const {
        return entries_[row * dim_ + col];
    }
    [[nodiscard]] std::span<const Amplitude> entries() const noexcept {
        return entries_;
    }
    /// Column `col` as a state, i.e. U|col>.
    [[nodiscard]] StateVector column(std::size_t col) const;
    [[nodiscard]] UnitaryMatrix adjoint() const;
    /// max |(U^dagger U - I)_{rc}|
    [[nodiscard]] double unitarity_error() const;

    friend UnitaryMatrix operator*(const UnitaryMatrix &a,
                                   const UnitaryMatrix &b);

    /// Returns this * G, where G acts as the 2x2 `block` on basis vectors
    /// (i, j) and as the identity elsewhere. Only columns i and j change.
    [[nodiscard]] UnitaryMatrix times_two_level(std::size_t i, std::size_t j,
                                                const Amplitude (&block)[2][2]) const;

  private:
    UnitaryMatrix(std::size_t dim, std::vector<Amplitude> entries)
        : dim_(dim), entries_(std::move(entries)) {}

    std::size_t dim_;
    std::vector<Amplitude> entries_;
};

/// Outcome distribution of a d-outcome projective measurement.
class ProbVector {
  public:
    /// Applies the normalization guard: a sum off by more than 1e-12 is
    /// renormalized, a sum off by more than 1e-9 is rejected.
    static ProbVector from_weights(std::vector<double> weights);

    [[nodiscard]] std::size_t dim() const noexcept { return probs_.size(); }
    [[nodiscard]] std::span<const double> probs() const noexcept {
        return probs_;
    }
    [[nodiscard]] double operator[](std::size_t i) const { return probs_[i]; }

  private:
    explicit ProbVector(std::vector<double> p) : probs_(std::move(p)) {}
    std::vector<double> probs_;
};

/// |<a|b>|^2
double fidelity(const StateVector &a, const StateVector &b);

/// p_j = |(frame^dagger env)_j|^2: register statistics after the XOR gate
/// when the environment is viewed in the agent's frame.
ProbVector born_probabilities(const UnitaryMatrix &frame, const StateVector &env);

/// Inverse-CDF sampling, scanning left to right over a single uniform draw.
std::size_t sample_outcome(const ProbVector &p, RngStream &rng);

/// 2x2 block of exp(-i Sz alpha) exp(-i Sx beta) on span{|i>, |j>}, rows
/// and columns ordered (i, j).
void two_level_block(double alpha, double beta, Amplitude (&block)[2][2]);

/// exp(-i Sz alpha) exp(-i Sx beta) with Sz = (|i><i| - |j><j|)/2 and
/// Sx = (|i><j| + |j><i|)/2, identity on the complement of span{|i>, |j>}.
UnitaryMatrix two_level_unitary(std::size_t dim, std::size_t i, std::size_t j,
                                double alpha, double beta);

/// Image of |control>|target> under the qudit XOR gate:
/// |j>|k> -> |j>|j - k mod d>.
struct XorImage {
    std::size_t control;
    std::size_t target;
    friend bool operator==(const XorImage &, const XorImage &) = default;
};
XorImage xor_gate_apply(std::size_t control, std::size_t target, std::size_t dim);

StateVector apply_unitary(const UnitaryMatrix &u, const StateVector &s);

} // namespace qadapt
