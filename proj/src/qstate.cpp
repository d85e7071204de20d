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

#include "qadapt/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qadapt/error.hpp"

namespace qadapt {

namespace {

void require_finite(std::span<const Amplitude> amps) {
    for (const auto &a : amps) {
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
            throw NumericalError("non-finite amplitude");
        }
    }
}

double squared_norm(std::span<const Amplitude> amps) {
    double acc = 0.0;
    for (const auto &a : amps) {
        acc += std::norm(a);
    }
    return acc;
}

} // namespace

StateVector StateVector::basis(std::size_t dim, std::size_t index) {
    if (dim < 2) {
        throw InvalidArgument("state dimension must be at least 2");
    }
    if (index >= dim) {
        throw InvalidArgument("basis index " + std::to_string(index) +
                              " out of range for dimension " +
                              std::to_string(dim));
    }
    std::vector<Amplitude> amps(dim);
    amps[index] = 1.0;
    return StateVector(std::move(amps));
}

StateVector StateVector::from_amplitudes(std::vector<Amplitude> amps) {
    if (amps.size() < 2) {
        throw InvalidArgument("state dimension must be at least 2");
    }
    require_finite(amps);
    const double n2 = squared_norm(amps);
    if (std::abs(n2 - 1.0) > kNormTolerance) {
        throw InvalidArgument("state is not normalized (|psi|^2 = " +
                              std::to_string(n2) + ")");
    }
    return StateVector(std::move(amps));
}

StateVector StateVector::normalized(std::vector<Amplitude> amps) {
    if (amps.size() < 2) {
        throw InvalidArgument("state dimension must be at least 2");
    }
    require_finite(amps);
    const double n = std::sqrt(squared_norm(amps));
    if (!(n > 0.0)) {
        throw NumericalError("cannot normalize the zero vector");
    }
    for (auto &a : amps) {
        a /= n;
    }
    return StateVector(std::move(amps));
}

double StateVector::norm() const noexcept { return std::sqrt(squared_norm(amps_)); }

UnitaryMatrix UnitaryMatrix::identity(std::size_t dim) {
    if (dim < 2) {
        throw InvalidArgument("matrix dimension must be at least 2");
    }
    std::vector<Amplitude> e(dim * dim);
    for (std::size_t i = 0; i < dim; ++i) {
        e[i * dim + i] = 1.0;
    }
    return UnitaryMatrix(dim, std::move(e));
}

UnitaryMatrix UnitaryMatrix::from_entries(std::size_t dim,
                                          std::vector<Amplitude> entries) {
    if (dim < 2) {
        throw InvalidArgument("matrix dimension must be at least 2");
    }
    if (entries.size() != dim * dim) {
        throw InvalidArgument("expected " + std::to_string(dim * dim) +
                              " matrix entries, got " +
                              std::to_string(entries.size()));
    }
    require_finite(entries);
    UnitaryMatrix u(dim, std::move(entries));
    const double err = u.unitarity_error();
    if (err > kUnitarityTolerance) {
        throw InvalidArgument("matrix is not unitary (max |U^dag U - I| = " +
                              std::to_string(err) + ")");
    }
    return u;
}

StateVector UnitaryMatrix::column(std::size_t col) const {
    if (col >= dim_) {
        throw InvalidArgument("column index out of range");
    }
    std::vector<Amplitude> v(dim_);
    for (std::size_t r = 0; r < dim_; ++r) {
        v[r] = entries_[r * dim_ + col];
    }
    return StateVector(std::move(v));
}

UnitaryMatrix UnitaryMatrix::adjoint() const {
    std::vector<Amplitude> e(dim_ * dim_);
    for (std::size_t r = 0; r < dim_; ++r) {
        for (std::size_t c = 0; c < dim_; ++c) {
            e[c * dim_ + r] = std::conj(entries_[r * dim_ + c]);
        }
    }
    return UnitaryMatrix(dim_, std::move(e));
}

double UnitaryMatrix::unitarity_error() const {
    double worst = 0.0;
    for (std::size_t r = 0; r < dim_; ++r) {
        for (std::size_t c = 0; c < dim_; ++c) {
            Amplitude acc = 0.0;
            for (std::size_t k = 0; k < dim_; ++k) {
                acc += std::conj(entries_[k * dim_ + r]) * entries_[k * dim_ + c];
            }
            if (r == c) {
                acc -= 1.0;
            }
            worst = std::max(worst, std::abs(acc));
        }
    }
    return worst;
}

UnitaryMatrix operator*(const UnitaryMatrix &a, const UnitaryMatrix &b) {
    if (a.dim_ != b.dim_) {
        throw DimensionMismatch("matrix product", a.dim_, b.dim_);
    }
    const std::size_t d = a.dim_;
    std::vector<Amplitude> e(d * d);
    for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t k = 0; k < d; ++k) {
            const Amplitude ark = a.entries_[r * d + k];
            for (std::size_t c = 0; c < d; ++c) {
                e[r * d + c] += ark * b.entries_[k * d + c];
            }
        }
    }
    return UnitaryMatrix(d, std::move(e));
}

UnitaryMatrix UnitaryMatrix::times_two_level(std::size_t i, std::size_t j,
                                             const Amplitude (&block)[2][2]) const {
    if (i >= dim_ || j >= dim_ || i == j) {
        throw InvalidArgument("two-level indices must be distinct and in range");
    }
    std::vector<Amplitude> e = entries_;
    for (std::size_t r = 0; r < dim_; ++r) {
        const Amplitude ui = entries_[r * dim_ + i];
        const Amplitude uj = entries_[r * dim_ + j];
        e[r * dim_ + i] = ui * block[0][0] + uj * block[1][0];
        e[r * dim_ + j] = ui * block[0][1] + uj * block[1][1];
    }
    return UnitaryMatrix(dim_, std::move(e));
}

ProbVector ProbVector::from_weights(std::vector<double> weights) {
    if (weights.size() < 2) {
        throw InvalidArgument("probability vector needs at least 2 entries");
    }
    double total = 0.0;
    for (double w : weights) {
        if (!std::isfinite(w) || w < -1e-12) {
            throw NumericalError("invalid probability weight " + std::to_string(w));
        }
        total += w;
    }
    const double drift = std::abs(total - 1.0);
    if (drift > 1e-9) {
        throw NumericalError("probabilities sum to " + std::to_string(total));
    }
    for (double &w : weights) {
        w = std::max(w, 0.0);
        if (drift > 1e-12) {
            w /= total;
        }
        w = std::min(w, 1.0);
    }
    return ProbVector(std::move(weights));
}

double fidelity(const StateVector &a, const StateVector &b) {
    if (a.dim() != b.dim()) {
        throw DimensionMismatch("fidelity", a.dim(), b.dim());
    }
    Amplitude overlap = 0.0;
    for (std::size_t j = 0; j < a.dim(); ++j) {
        overlap += std::conj(a[j]) * b[j];
    }
    return std::min(std::norm(overlap), 1.0);
}

ProbVector born_probabilities(const UnitaryMatrix &frame, const StateVector &env) {
    if (frame.dim() != env.dim()) {
        throw DimensionMismatch("born_probabilities", frame.dim(), env.dim());
    }
    const std::size_t d = env.dim();
    std::vector<double> p(d);
    for (std::size_t j = 0; j < d; ++j) {
        // (frame^dagger env)_j = sum_r conj(frame_rj) env_r
        Amplitude acc = 0.0;
        for (std::size_t r = 0; r < d; ++r) {
            acc += std::conj(frame(r, j)) * env[r];
        }
        p[j] = std::norm(acc);
    }
    return ProbVector::from_weights(std::move(p));
}

std::size_t sample_outcome(const ProbVector &p, RngStream &rng) {
    const double u = rng.uniform();
    double cdf = 0.0;
    const std::size_t d = p.dim();
    for (std::size_t m = 0; m + 1 < d; ++m) {
        cdf += p[m];
        if (u < cdf) {
            return m;
        }
    }
    // Rounding can leave the CDF just below 1; the tail goes to the last
    // outcome that carries weight.
    for (std::size_t m = d; m-- > 0;) {
        if (p[m] > 0.0) {
            return m;
        }
    }
    return d - 1;
}

void two_level_block(double alpha, double beta, Amplitude (&block)[2][2]) {
    const Amplitude phase_minus = std::polar(1.0, -alpha / 2.0);
    const Amplitude phase_plus = std::polar(1.0, alpha / 2.0);
    const double c = std::cos(beta / 2.0);
    const double s = std::sin(beta / 2.0);
    const Amplitude minus_i(0.0, -1.0);
    block[0][0] = phase_minus * c;
    block[0][1] = minus_i * phase_minus * s;
    block[1][0] = minus_i * phase_plus * s;
    block[1][1] = phase_plus * c;
}

UnitaryMatrix two_level_unitary(std::size_t dim, std::size_t i, std::size_t j,
                                double alpha, double beta) {
    if (i >= dim || j >= dim) {
        throw InvalidArgument("two-level index out of range");
    }
    if (i == j) {
        throw InvalidArgument("two-level indices must differ");
    }
    Amplitude block[2][2];
    two_level_block(alpha, beta, block);
    return UnitaryMatrix::identity(dim).times_two_level(i, j, block);
}

XorImage xor_gate_apply(std::size_t control, std::size_t target, std::size_t dim) {
    if (dim < 2 || control >= dim || target >= dim) {
        throw InvalidArgument("XOR gate index out of range");
    }
    return {control, (control + dim - target) % dim};
}

StateVector apply_unitary(const UnitaryMatrix &u, const StateVector &s) {
    if (u.dim() != s.dim()) {
        throw DimensionMismatch("apply_unitary", u.dim(), s.dim());
    }
    const std::size_t d = s.dim();
    std::vector<Amplitude> out(d);
    for (std::size_t r = 0; r < d; ++r) {
        Amplitude acc = 0.0;
        for (std::size_t c = 0; c < d; ++c) {
            acc += u(r, c) * s[c];
        }
        out[r] = acc;
    }
    return StateVector(std::move(out));
}

} // namespace qadapt
