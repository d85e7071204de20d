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

#include "qadapt/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qadapt/error.hpp"

namespace qadapt {

void RewardParams::validate() const {
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
        throw InvalidArgument("epsilon must lie in (0, 1), got " +
                              std::to_string(epsilon));
    }
    if (!(delta_init > 0.0) || !std::isfinite(delta_init)) {
        throw InvalidArgument("delta_init must be positive");
    }
    if (!(delta_max >= delta_init) || !std::isfinite(delta_max)) {
        throw InvalidArgument("delta_max must be finite and >= delta_init");
    }
}

AgentState AgentState::fresh(std::size_t dim, const RewardParams &params) {
    return AgentState{UnitaryMatrix::identity(dim), params.delta_init,
                      std::log(params.delta_init), 0};
}

double reward_update(double delta, std::size_t outcome, const RewardParams &params) {
    if (outcome == 0) {
        return params.epsilon * delta;
    }
    return std::min(delta / params.epsilon, params.delta_max);
}

namespace {

double agent_fidelity(const UnitaryMatrix &frame, const StateVector &env) {
    Amplitude overlap = 0.0;
    for (std::size_t r = 0; r < env.dim(); ++r) {
        overlap += std::conj(frame(r, 0)) * env[r];
    }
    return std::min(std::norm(overlap), 1.0);
}

} // namespace

StepResult act(const AgentState &agent, const StateVector &env,
               const RewardParams &params, std::size_t outcome, double alpha,
               double beta) {
    if (agent.frame.dim() != env.dim()) {
        throw DimensionMismatch("step", agent.frame.dim(), env.dim());
    }
    if (outcome >= env.dim()) {
        throw InvalidArgument("outcome out of range");
    }

    StepResult out{agent, {}};
    out.agent.iteration = agent.iteration + 1;
    out.agent.delta = reward_update(agent.delta, outcome, params);
    if (outcome == 0) {
        alpha = 0.0;
        beta = 0.0;
        out.agent.log_delta = agent.log_delta + std::log(params.epsilon);
    } else {
        Amplitude block[2][2];
        two_level_block(alpha, beta, block);
        // Right-multiplying by the logical-basis rotation equals applying
        // U u U^dagger to the physical agent state.
        out.agent.frame = agent.frame.times_two_level(0, outcome, block);
        out.agent.log_delta =
            out.agent.delta == params.delta_max
                ? std::log(params.delta_max)
                : agent.log_delta - std::log(params.epsilon);
    }

    const double f = agent_fidelity(out.agent.frame, env);
    out.record = IterationRecord{
        .iteration = out.agent.iteration,
        .outcome = outcome,
        .alpha = alpha,
        .beta = beta,
        .delta_after = out.agent.delta,
        .log_delta_after = out.agent.log_delta,
        .fidelity_after = f,
        .theta_equiv = 2.0 * std::acos(std::sqrt(f)),
    };
    return out;
}

StepResult step(const AgentState &agent, const StateVector &env,
                const RewardParams &params, RngStream &rng) {
    const ProbVector p = born_probabilities(agent.frame, env);
    const std::size_t m = sample_outcome(p, rng);
    double alpha = 0.0;
    double beta = 0.0;
    if (m != 0) {
        const double xi_alpha = rng.uniform() - 0.5;
        const double xi_beta = rng.uniform() - 0.5;
        alpha = xi_alpha * agent.delta;
        beta = xi_beta * agent.delta;
    }
    return act(agent, env, params, m, alpha, beta);
}

TrialResult run_trial(const StateVector &env, const RewardParams &params,
                      std::size_t n_iters, RngStream &rng,
                      const TrialOptions &options) {
    params.validate();
    if (n_iters < 1) {
        throw InvalidArgument("n_iters must be at least 1");
    }

    TrialResult result;
    result.env_label = options.env_label;
    result.dim = env.dim();
    result.seed = rng.seed();
    result.initial_fidelity = std::min(std::norm(env[0]), 1.0);

    std::size_t iters = n_iters;
    if (options.copy_budget && *options.copy_budget < iters) {
        iters = static_cast<std::size_t>(*options.copy_budget);
    }
    result.records.reserve(iters);

    AgentState agent = AgentState::fresh(env.dim(), params);
    for (std::size_t k = 0; k < iters; ++k) {
        StepResult s = step(agent, env, params, rng);
        result.records.push_back(s.record);
        agent = std::move(s.agent);
    }
    return result;
}

TrialResult run_trial(const StateVector &env, const RewardParams &params,
                      std::size_t n_iters, std::uint64_t seed,
                      const TrialOptions &options) {
    RngStream rng(seed);
    return run_trial(env, params, n_iters, rng, options);
}

} // namespace qadapt
