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
 * The measurement-based adaptation loop.
 *
 * The agent is tracked by the accumulated frame U, with agent state U|0>.
 * Each iteration measures the register after an XOR with a fresh copy of the
 * environment viewed in that frame, so outcome m has probability
 * |<m|U^dagger|E>|^2. Outcome 0 rewards the agent by shrinking the exploration
 * range; any other outcome punishes it by widening the range and rotating the
 * agent by a random two-level unitary in span{U|0>, U|m>}.
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "qadapt/qstate.hpp"
#include "qadapt/rng.hpp"

namespace qadapt {

inline constexpr double kDefaultDelta = 4.0 * std::numbers::pi;

/// Reward ratio epsilon, punishment ratio 1/epsilon, exploration bounds.
struct RewardParams {
    double epsilon = 0.5;
    double delta_init = kDefaultDelta;
    double delta_max = kDefaultDelta;

    /// Throws InvalidArgument unless 0 < epsilon < 1 and
    /// 0 < delta_init <= delta_max.
    void validate() const;
};

struct AgentState {
    UnitaryMatrix frame;
    double delta;
    /// log(delta), tracked additively so it stays finite after delta
    /// underflows.
    double log_delta;
    std::uint64_t iteration = 0;

    static AgentState fresh(std::size_t dim, const RewardParams &params);
    [[nodiscard]] StateVector state() const { return frame.column(0); }
};

struct IterationRecord {
    std::uint64_t iteration;
    std::size_t outcome;
    double alpha;
    double beta;
    double delta_after;
    double log_delta_after;
    double fidelity_after;
    /// 2 arccos(sqrt(fidelity_after))
    double theta_equiv;
};

struct TrialResult {
    std::string env_label;
    std::size_t dim = 0;
    std::uint64_t seed = 0;
    double initial_fidelity = 0.0;
    std::vector<IterationRecord> records;
};

struct StepResult {
    AgentState agent;
    IterationRecord record;
};

/// Reward rule: epsilon * delta on outcome 0, min(delta / epsilon,
/// delta_max) otherwise.
double reward_update(double delta, std::size_t outcome, const RewardParams &params);

/// One full iteration: measure, sample, reward, act.
///
/// Consumes one uniform for the outcome and, only when the outcome is
/// nonzero, two more for xi_alpha then xi_beta.
StepResult step(const AgentState &agent, const StateVector &env,
                const RewardParams &params, RngStream &rng);

/// Deterministic tail of `step` for a given outcome and rotation angles.
/// With outcome 0 the angles are ignored.
StepResult act(const AgentState &agent, const StateVector &env,
               const RewardParams &params, std::size_t outcome, double alpha,
               double beta);

struct TrialOptions {
    /// Number of environment copies available. The trial stops early, with
    /// fewer records, once they are used up. Unlimited by default.
    std::optional<std::uint64_t> copy_budget;
    std::string env_label;
};

TrialResult run_trial(const StateVector &env, const RewardParams &params,
                      std::size_t n_iters, std::uint64_t seed,
                      const TrialOptions &options = {});

/// Same as above on a caller-owned stream (seed field records `rng.seed()`).
TrialResult run_trial(const StateVector &env, const RewardParams &params,
                      std::size_t n_iters, RngStream &rng,
                      const TrialOptions &options = {});

} // namespace qadapt
