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
 * Brute-force references for the reduced simulator.
 *
 * The tripartite simulator carries the full agent (x) register (x)
 * environment state, applies the XOR gate as an explicit d^2 x d^2
 * permutation, measures the register by partial trace, and rotates the
 * agent in the physical basis via U u U^dagger. None of it shares code
 * paths with `born_probabilities` or the frame update in `act`.
 */

#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qadapt/protocol.hpp"
#include "qadapt/qstate.hpp"
#include "qadapt/rng.hpp"

namespace qadapt::oracle {

/// Largest dimension accepted by the tripartite simulator (d^3 amplitudes).
inline constexpr std::size_t kMaxOracleDim = 8;

/// Amplitudes over (agent, register, environment), agent index slowest.
class TripartiteState {
  public:
    TripartiteState(const StateVector &agent, std::size_t register_level,
                    const StateVector &env);

    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
    [[nodiscard]] std::size_t index(std::size_t a, std::size_t r,
                                    std::size_t e) const noexcept {
        return (a * dim_ + r) * dim_ + e;
    }
    [[nodiscard]] std::complex<double> &at(std::size_t a, std::size_t r, std::size_t e) {
        return amps_[index(a, r, e)];
    }
    [[nodiscard]] std::complex<double> at(std::size_t a, std::size_t r,
                                          std::size_t e) const {
        return amps_[index(a, r, e)];
    }
    [[nodiscard]] double norm() const;

  private:
    std::size_t dim_;
    std::vector<std::complex<double>> amps_;
};

/// Dense d^2 x d^2 XOR gate with the environment as control and the
/// register as target, on the (register, environment) pair ordered with
/// the register slowest. Row-major, entries 0 or 1.
std::vector<double> xor_permutation(std::size_t dim);

/// Applies `xor_permutation(d)` to every agent slice.
void apply_xor(TripartiteState &psi, const std::vector<double> &perm);

struct TripartiteOutcome {
    std::size_t outcome;
    StateVector post_agent;
    ProbVector probs;
};

/// One measurement round on |agent>|0>_R (frame^dagger |env>)_E.
/// Samples from the partial-trace probabilities with one uniform unless
/// `forced_outcome` is given.
TripartiteOutcome tripartite_step(const UnitaryMatrix &frame, const StateVector &env,
                                  std::optional<std::size_t> forced_outcome,
                                  RngStream &rng);

struct OracleTrace {
    std::vector<std::size_t> outcomes;
    std::vector<double> fidelities;
    std::vector<double> deltas;
};

/// A whole trial driven by `tripartite_step`, consuming randomness in the
/// same order as `run_trial`.
OracleTrace tripartite_trial(const StateVector &env, const RewardParams &params,
                             std::size_t n_iters, RngStream &rng);

/// |e^{i alpha/2} cos(beta/2) c0 + i e^{-i alpha/2} sin(beta/2) cm|^2
double analytic_post_fidelity(std::complex<double> c0, std::complex<double> cm,
                              double alpha, double beta);

struct MonteCarloEstimate {
    double mean;
    double standard_error;
};

/// Unconditional expected fidelity after one iteration for the qubit
/// environment cos(theta/2)|0> + sin(theta/2)|1> and a fresh agent with
/// exploration range `delta`.
MonteCarloEstimate expected_onestep_fidelity(double theta, double delta,
                                             std::size_t samples,
                                             std::uint64_t seed = 0x5EEDULL);

/// exp(m) for a dense row-major n x n complex matrix by scaling and
/// squaring with a Taylor series.
std::vector<std::complex<double>> matrix_exponential(
    std::size_t n, const std::vector<std::complex<double>> &m);

/// exp(-i Sz alpha) exp(-i Sx beta) built from the generators.
std::vector<std::complex<double>> two_level_unitary_by_exponential(
    std::size_t dim, std::size_t i, std::size_t j, double alpha, double beta);

// ---------------------------------------------------------------------------
// Verification suite

using Stepper = std::function<StepResult(const AgentState &, const StateVector &,
                                         const RewardParams &, RngStream &)>;

struct VerifyCheck {
    std::string name;
    bool passed;
    double worst;
    double tolerance;
    std::string detail;
};

struct VerifyOptions {
    std::size_t cases = 50;
    std::size_t trial_iterations = 40;
    std::uint64_t seed = 20190101;
};

/// Runs the reduced-vs-tripartite equivalence checks for d = 2 and 3 and
/// the analytic one-step checks. `stepper` is the implementation under
/// test, `qadapt::step` by default.
std::vector<VerifyCheck> run_verification(const VerifyOptions &options,
                                          const Stepper &stepper = {});

namespace fixtures {

/// Mutation fixture: rotates the agent by u in the logical basis instead of
/// U u U^dagger. Used to show the verification suite catches a frame error.
StepResult misconjugated_step(const AgentState &agent, const StateVector &env,
                              const RewardParams &params, RngStream &rng);

} // namespace fixtures

} // namespace qadapt::oracle
