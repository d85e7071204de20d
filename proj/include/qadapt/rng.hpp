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

#pragma once

#include <cstdint>

namespace qadapt {

/// Counter-based 64-bit generator.
///
/// Draw number n (n = 1, 2, ...) of a stream with seed s is
/// `mix64(s + n * 0x9E3779B97F4A7C15)`, where `mix64` is the SplitMix64
/// finalizer. The output sequence is therefore the SplitMix64 sequence
/// started from `s`, and is identical on every platform.
///
/// A stream has a single owner. Parallel callers derive independent child
/// streams with `child()` instead of sharing one.
class RngStream {
  public:
    static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

    explicit RngStream(std::uint64_t seed) noexcept : seed_(seed) {}

    [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
    /// Number of 64-bit words consumed so far.
    [[nodiscard]] std::uint64_t counter() const noexcept { return counter_; }

    std::uint64_t next_u64() noexcept {
        ++counter_;
        return mix64(seed_ + counter_ * kGamma);
    }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform on [lo, hi).
    double uniform(double lo, double hi) noexcept {
        return lo + (hi - lo) * uniform();
    }

    /// Independent stream keyed by `stream_id`; does not advance this one.
    [[nodiscard]] RngStream child(std::uint64_t stream_id) const noexcept {
        return RngStream(mix64(seed_ ^ mix64(stream_id + 0xD1B54A32D192ED03ULL)));
    }

    /// SplitMix64 finalizer. A bijection on 64-bit words.
    static constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

  private:
    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
};

} // namespace qadapt
