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

#include "qadapt/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

#include "qadapt/error.hpp"

namespace qadapt::oracle {

using cplx = std::complex<double>;

TripartiteState::TripartiteState(const StateVector &agent, std::size_t register_level,
                                 const StateVector &env)
    : dim_(env.dim()) {
    if (agent.dim() != dim_) {
        throw DimensionMismatch("tripartite state", agent.dim(), dim_);
    }
    if (dim_ > kMaxOracleDim) {
        throw InvalidArgument("tripartite oracle is limited to d <= " +
                              std::to_string(kMaxOracleDim));
    }
    if (register_level >= dim_) {
        throw InvalidArgument("register level out of range");
    }
    amps_.assign(dim_ * dim_ * dim_, 0.0);
    for (std::size_t a = 0; a < dim_; ++a) {
        for (std::size_t e = 0; e < dim_; ++e) {
            at(a, register_level, e) = agent[a] * env[e];
        }
    }
}

double TripartiteState::norm() const {
    double acc = 0.0;
    for (const auto &x : amps_) {
        acc += std::norm(x);
    }
    return std::sqrt(acc);
}

std::vector<double> xor_permutation(std::size_t dim) {
    const std::size_t n = dim * dim;
    std::vector<double> perm(n * n, 0.0);
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t e = 0; e < dim; ++e) {
            // environment is the control, register the target
            const XorImage img = xor_gate_apply(e, r, dim);
            const std::size_t from = r * dim + e;
            const std::size_t to = img.target * dim + img.control;
            perm[to * n + from] = 1.0;
        }
    }
    return perm;
}

void apply_xor(TripartiteState &psi, const std::vector<double> &perm) {
    const std::size_t d = psi.dim();
    const std::size_t n = d * d;
    if (perm.size() != n * n) {
        throw DimensionMismatch("apply_xor", perm.size(), n * n);
    }
    std::vector<cplx> slice(n);
    for (std::size_t a = 0; a < d; ++a) {
        for (std::size_t row = 0; row < n; ++row) {
            cplx acc = 0.0;
            for (std::size_t col = 0; col < n; ++col) {
                acc += perm[row * n + col] * psi.at(a, col / d, col % d);
            }
            slice[row] = acc;
        }
        for (std::size_t row = 0; row < n; ++row) {
            psi.at(a, row / d, row % d) = slice[row];
        }
    }
}

TripartiteOutcome tripartite_step(const UnitaryMatrix &frame, const StateVector &env,
                                  std::optional<std::size_t> forced_outcome,
                                  RngStream &rng) {
    const std::size_t d = env.dim();
    if (frame.dim() != d) {
        throw DimensionMismatch("tripartite_step", frame.dim(), d);
    }
    if (d > kMaxOracleDim) {
        throw InvalidArgument("tripartite oracle is limited to d <= " +
                              std::to_string(kMaxOracleDim));
    }

    const StateVector agent = frame.column(0);
    const StateVector env_in_frame = apply_unitary(frame.adjoint(), env);
    TripartiteState psi(agent, 0, env_in_frame);
    apply_xor(psi, xor_permutation(d));

    // Register statistics by tracing out agent and environment.
    std::vector<double> weights(d, 0.0);
    for (std::size_t a = 0; a < d; ++a) {
        for (std::size_t r = 0; r < d; ++r) {
            for (std::size_t e = 0; e < d; ++e) {
                weights[r] += std::norm(psi.at(a, r, e));
            }
        }
    }
    ProbVector probs = ProbVector::from_weights(weights);

    std::size_t m = 0;
    if (forced_outcome) {
        if (*forced_outcome >= d) {
            throw InvalidArgument("forced outcome out of range");
        }
        m = *forced_outcome;
    } else {
        m = sample_outcome(probs, rng);
    }

    // Collapse onto register level m. The agent factor is read from the
    // environment column carrying the most weight.
    std::size_t best_e = 0;
    double best_w = -1.0;
    for (std::size_t e = 0; e < d; ++e) {
        double w = 0.0;
        for (std::size_t a = 0; a < d; ++a) {
            w += std::norm(psi.at(a, m, e));
        }
        if (w > best_w) {
            best_w = w;
            best_e = e;
        }
    }
    std::vector<cplx> post(d);
    for (std::size_t a = 0; a < d; ++a) {
        post[a] = psi.at(a, m, best_e);
    }
    // A zero-probability forced outcome leaves nothing to collapse onto; the
    // agent is untouched by the register measurement in any case.
    StateVector post_agent = best_w > 0.0 ? StateVector::normalized(std::move(post)) : agent;
    return TripartiteOutcome{m, std::move(post_agent), std::move(probs)};
}

namespace {

// Modified Gram-Schmidt on the columns. U u U^dagger U amplifies any
// non-unitarity of U threefold per iteration, so the physical-basis route
// has to restore orthonormality after every update.
UnitaryMatrix orthonormalize(const UnitaryMatrix &m) {
    const std::size_t d = m.dim();
    std::vector<cplx> e(m.entries().begin(), m.entries().end());
    for (std::size_t c = 0; c < d; ++c) {
        for (std::size_t prev = 0; prev < c; ++prev) {
            cplx dot = 0.0;
            for (std::size_t r = 0; r < d; ++r) {
                dot += std::conj(e[r * d + prev]) * e[r * d + c];
            }
            for (std::size_t r = 0; r < d; ++r) {
                e[r * d + c] -= dot * e[r * d + prev];
            }
        }
        double n2 = 0.0;
        for (std::size_t r = 0; r < d; ++r) {
            n2 += std::norm(e[r * d + c]);
        }
        const double n = std::sqrt(n2);
        for (std::size_t r = 0; r < d; ++r) {
            e[r * d + c] /= n;
        }
    }
    return UnitaryMatrix::from_entries(d, std::move(e));
}

} // namespace

OracleTrace tripartite_trial(const StateVector &env, const RewardParams &params,
                             std::size_t n_iters, RngStream &rng) {
    params.validate();
    const std::size_t d = env.dim();
    UnitaryMatrix frame = UnitaryMatrix::identity(d);
    double delta = params.delta_init;

    OracleTrace trace;
    for (std::size_t k = 0; k < n_iters; ++k) {
        const TripartiteOutcome out = tripartite_step(frame, env, std::nullopt, rng);
        StateVector agent = out.post_agent;
        if (out.outcome == 0) {
            delta = params.epsilon * delta;
        } else {
            const double alpha = (rng.uniform() - 0.5) * delta;
            const double beta = (rng.uniform() - 0.5) * delta;
            const UnitaryMatrix u = UnitaryMatrix::from_entries(
                d, two_level_unitary_by_exponential(d, 0, out.outcome, alpha, beta));
            // Rotation expressed in the physical basis.
            const UnitaryMatrix physical = frame * u * frame.adjoint();
            agent = apply_unitary(physical, agent);
            frame = orthonormalize(physical * frame);
            delta = std::min(delta / params.epsilon, params.delta_max);
        }
        trace.outcomes.push_back(out.outcome);
        trace.fidelities.push_back(fidelity(agent, env));
        trace.deltas.push_back(delta);
    }
    return trace;
}

double analytic_post_fidelity(cplx c0, cplx cm, double alpha, double beta) {
    const cplx i(0.0, 1.0);
    const cplx v = std::polar(1.0, alpha / 2.0) * std::cos(beta / 2.0) * c0 +
                   i * std::polar(1.0, -alpha / 2.0) * std::sin(beta / 2.0) * cm;
    return std::norm(v);
}

MonteCarloEstimate expected_onestep_fidelity(double theta, double delta,
                                             std::size_t samples, std::uint64_t seed) {
    if (samples < 10000) {
        throw InvalidArgument("expected_onestep_fidelity needs at least 1e4 samples");
    }
    const double c0 = std::cos(theta / 2.0);
    const double c1 = std::sin(theta / 2.0);
    const double p0 = c0 * c0;
    const double p1 = c1 * c1;

    RngStream rng(seed);
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::size_t s = 0; s < samples; ++s) {
        const double alpha = (rng.uniform() - 0.5) * delta;
        const double beta = (rng.uniform() - 0.5) * delta;
        const double f = analytic_post_fidelity(c0, c1, alpha, beta);
        sum += f;
        sum_sq += f * f;
    }
    const double n = static_cast<double>(samples);
    const double mean = sum / n;
    const double var = std::max(0.0, sum_sq / n - mean * mean);
    // Outcome 0 leaves the agent, and hence the fidelity p0, unchanged.
    return {p0 * p0 + p1 * mean, p1 * std::sqrt(var / (n - 1.0))};
}

std::vector<cplx> matrix_exponential(std::size_t n, const std::vector<cplx> &m) {
    if (m.size() != n * n) {
        throw DimensionMismatch("matrix_exponential", m.size(), n * n);
    }
    auto multiply = [n](const std::vector<cplx> &a, const std::vector<cplx> &b) {
        std::vector<cplx> c(n * n);
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t k = 0; k < n; ++k) {
                for (std::size_t col = 0; col < n; ++col) {
                    c[r * n + col] += a[r * n + k] * b[k * n + col];
                }
            }
        }
        return c;
    };

    double row_norm = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        double s = 0.0;
        for (std::size_t c = 0; c < n; ++c) {
            s += std::abs(m[r * n + c]);
        }
        row_norm = std::max(row_norm, s);
    }
    int squarings = 0;
    if (row_norm > 0.5) {
        squarings = static_cast<int>(std::ceil(std::log2(row_norm / 0.5)));
    }
    const double scale = std::ldexp(1.0, -squarings);

    std::vector<cplx> a(m);
    for (auto &x : a) {
        x *= scale;
    }
    std::vector<cplx> result(n * n);
    std::vector<cplx> term(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        result[i * n + i] = 1.0;
        term[i * n + i] = 1.0;
    }
    for (int k = 1; k <= 30; ++k) {
        term = multiply(term, a);
        double largest = 0.0;
        for (auto &x : term) {
            x /= static_cast<double>(k);
            largest = std::max(largest, std::abs(x));
        }
        for (std::size_t i = 0; i < n * n; ++i) {
            result[i] += term[i];
        }
        if (largest < 1e-18) {
            break;
        }
    }
    for (int s = 0; s < squarings; ++s) {
        result = multiply(result, result);
    }
    return result;
}

std::vector<cplx> two_level_unitary_by_exponential(std::size_t dim, std::size_t i,
                                                   std::size_t j, double alpha,
                                                   double beta) {
    if (i >= dim || j >= dim || i == j) {
        throw InvalidArgument("two-level indices must be distinct and in range");
    }
    const cplx minus_i(0.0, -1.0);
    std::vector<cplx> gz(dim * dim);
    std::vector<cplx> gx(dim * dim);
    gz[i * dim + i] = minus_i * alpha * 0.5;
    gz[j * dim + j] = -minus_i * alpha * 0.5;
    gx[i * dim + j] = minus_i * beta * 0.5;
    gx[j * dim + i] = minus_i * beta * 0.5;
    const auto ez = matrix_exponential(dim, gz);
    const auto ex = matrix_exponential(dim, gx);
    std::vector<cplx> out(dim * dim);
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t k = 0; k < dim; ++k) {
            for (std::size_t c = 0; c < dim; ++c) {
                out[r * dim + c] += ez[r * dim + k] * ex[k * dim + c];
            }
        }
    }
    return out;
}

namespace fixtures {

StepResult misconjugated_step(const AgentState &agent, const StateVector &env,
                              const RewardParams &params, RngStream &rng) {
    const ProbVector p = born_probabilities(agent.frame, env);
    const std::size_t m = sample_outcome(p, rng);
    if (m == 0) {
        return act(agent, env, params, 0, 0.0, 0.0);
    }
    const double alpha = (rng.uniform() - 0.5) * agent.delta;
    const double beta = (rng.uniform() - 0.5) * agent.delta;
    StepResult out = act(agent, env, params, m, alpha, beta);
    out.agent.frame = two_level_unitary(env.dim(), 0, m, alpha, beta) * agent.frame;
    out.record.fidelity_after = fidelity(out.agent.state(), env);
    return out;
}

} // namespace fixtures

namespace {

StateVector random_state(std::size_t d, RngStream &rng) {
    std::vector<cplx> v(d);
    for (auto &x : v) {
        x = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    }
    return StateVector::normalized(std::move(v));
}

UnitaryMatrix random_frame(std::size_t d, RngStream &rng) {
    UnitaryMatrix u = UnitaryMatrix::identity(d);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = i + 1; j < d; ++j) {
            const double a = rng.uniform(0.0, 4.0 * std::numbers::pi);
            const double b = rng.uniform(0.0, 4.0 * std::numbers::pi);
            u = u * two_level_unitary(d, i, j, a, b);
        }
    }
    return u;
}

std::string describe(std::size_t cases, const std::string &what) {
    std::ostringstream os;
    os << cases << ' ' << what;
    return os.str();
}

VerifyCheck probability_check(std::size_t d, const VerifyOptions &opt) {
    RngStream rng = RngStream(opt.seed).child(100 + d);
    double worst = 0.0;
    for (std::size_t c = 0; c < opt.cases; ++c) {
        const UnitaryMatrix frame = random_frame(d, rng);
        const StateVector env = random_state(d, rng);
        const ProbVector reduced = born_probabilities(frame, env);
        RngStream unused(0);
        const TripartiteOutcome full = tripartite_step(frame, env, 0, unused);
        for (std::size_t j = 0; j < d; ++j) {
            worst = std::max(worst, std::abs(reduced[j] - full.probs[j]));
        }
        worst = std::max(worst, std::abs(1.0 - fidelity(full.post_agent, frame.column(0))));
    }
    const double tol = 1e-12;
    return {"probabilities d=" + std::to_string(d), worst <= tol, worst, tol,
            describe(opt.cases, "random (frame, env) pairs")};
}

VerifyCheck trial_check(std::size_t d, const VerifyOptions &opt, const Stepper &stepper) {
    static constexpr double kEpsilons[] = {0.1, 0.3, 0.5, 0.7, 0.9};
    RngStream rng = RngStream(opt.seed).child(200 + d);
    double worst = 0.0;
    std::size_t mismatched = 0;
    for (std::size_t c = 0; c < opt.cases; ++c) {
        const StateVector env = random_state(d, rng);
        RewardParams params;
        params.epsilon = kEpsilons[c % 5];
        const std::uint64_t seed = rng.next_u64();

        RngStream reduced_rng(seed);
        AgentState agent = AgentState::fresh(d, params);
        std::vector<IterationRecord> records;
        for (std::size_t k = 0; k < opt.trial_iterations; ++k) {
            StepResult s = stepper(agent, env, params, reduced_rng);
            records.push_back(s.record);
            agent = std::move(s.agent);
        }

        RngStream oracle_rng(seed);
        const OracleTrace trace = tripartite_trial(env, params, opt.trial_iterations, oracle_rng);
        for (std::size_t k = 0; k < opt.trial_iterations; ++k) {
            if (records[k].outcome != trace.outcomes[k]) {
                ++mismatched;
                worst = std::numeric_limits<double>::infinity();
                break;
            }
            worst = std::max(worst, std::abs(records[k].fidelity_after - trace.fidelities[k]));
            worst = std::max(worst, std::abs(records[k].delta_after - trace.deltas[k]));
        }
    }
    const double tol = 1e-10;
    std::string detail = describe(opt.cases, "trials of " + std::to_string(opt.trial_iterations) +
                                                 " iterations");
    if (mismatched > 0) {
        detail += ", " + std::to_string(mismatched) + " with diverging outcomes";
    }
    return {"trial trace d=" + std::to_string(d), worst <= tol, worst, tol, detail};
}

VerifyCheck analytic_check(const VerifyOptions &opt) {
    RngStream rng = RngStream(opt.seed).child(300);
    double worst = 0.0;
    RewardParams params;
    for (std::size_t c = 0; c < opt.cases; ++c) {
        const std::size_t d = 2 + c % 4;
        const UnitaryMatrix frame = random_frame(d, rng);
        const StateVector env = random_state(d, rng);
        const std::size_t m = 1 + static_cast<std::size_t>(rng.next_u64() % (d - 1));
        const double alpha = rng.uniform(-2.0 * std::numbers::pi, 2.0 * std::numbers::pi);
        const double beta = rng.uniform(-2.0 * std::numbers::pi, 2.0 * std::numbers::pi);

        AgentState agent = AgentState::fresh(d, params);
        agent.frame = frame;
        const StepResult s = act(agent, env, params, m, alpha, beta);

        cplx c0 = 0.0;
        cplx cm = 0.0;
        for (std::size_t r = 0; r < d; ++r) {
            c0 += std::conj(frame(r, 0)) * env[r];
            cm += std::conj(frame(r, m)) * env[r];
        }
        worst = std::max(worst, std::abs(s.record.fidelity_after -
                                         analytic_post_fidelity(c0, cm, alpha, beta)));
    }
    const double tol = 1e-10;
    return {"analytic one-step fidelity", worst <= tol, worst, tol,
            describe(opt.cases, "forced outcomes with fixed angles")};
}

VerifyCheck xor_check() {
    double violations = 0.0;
    for (std::size_t d = 2; d <= kMaxOracleDim; ++d) {
        const std::size_t n = d * d;
        const auto p = xor_permutation(d);
        for (std::size_t r = 0; r < n; ++r) {
            double row_sum = 0.0;
            for (std::size_t c = 0; c < n; ++c) {
                row_sum += p[r * n + c];
                if (p[r * n + c] != p[c * n + r]) {
                    violations += 1.0;
                }
            }
            if (row_sum != 1.0) {
                violations += 1.0;
            }
        }
        for (std::size_t j = 0; j < d; ++j) {
            for (std::size_t k = 0; k < d; ++k) {
                const bool to_zero = xor_gate_apply(j, k, d).target == 0;
                if (to_zero != (j == k)) {
                    violations += 1.0;
                }
            }
        }
    }
    return {"XOR gate hermitian permutation", violations == 0.0, violations, 0.0,
            "d = 2.." + std::to_string(kMaxOracleDim)};
}

VerifyCheck exponential_check(const VerifyOptions &opt) {
    RngStream rng = RngStream(opt.seed).child(400);
    double worst = 0.0;
    for (std::size_t c = 0; c < opt.cases; ++c) {
        const std::size_t d = 2 + c % 5;
        const std::size_t i = static_cast<std::size_t>(rng.next_u64() % d);
        const std::size_t j = (i + 1 + static_cast<std::size_t>(rng.next_u64() % (d - 1))) % d;
        const double alpha = rng.uniform(-8.0, 8.0);
        const double beta = rng.uniform(-8.0, 8.0);
        const UnitaryMatrix closed = two_level_unitary(d, i, j, alpha, beta);
        const auto series = two_level_unitary_by_exponential(d, i, j, alpha, beta);
        for (std::size_t k = 0; k < d * d; ++k) {
            worst = std::max(worst, std::abs(closed.entries()[k] - series[k]));
        }
        worst = std::max(worst, closed.unitarity_error());
    }
    const double tol = 1e-10;
    return {"two-level unitary vs matrix exponential", worst <= tol, worst, tol,
            describe(opt.cases, "random rotations")};
}

VerifyCheck onestep_check() {
    // E[cos beta] = sin(delta/2)/(delta/2) for beta uniform on
    // [-delta/2, delta/2], and E[sin alpha] = 0.
    struct Case { double theta, delta; };
    static constexpr Case cases[] = {{std::numbers::pi / 2, std::numbers::pi},
                                     {1.0, 4.0 * std::numbers::pi},
                                     {2.5, 0.3}};
    double worst = 0.0;
    for (const auto &c : cases) {
        const auto est = expected_onestep_fidelity(c.theta, c.delta, 200000);
        const double c0 = std::cos(c.theta / 2), c1 = std::sin(c.theta / 2);
        const double mean_cos = std::sin(c.delta / 2) / (c.delta / 2);
        const double cond = c0 * c0 * 0.5 * (1 + mean_cos) + c1 * c1 * 0.5 * (1 - mean_cos);
        const double exact = c0 * c0 * c0 * c0 + c1 * c1 * cond;
        worst = std::max(worst, std::abs(est.mean - exact) / std::max(est.standard_error, 1e-300));
    }
    return {"one-step expectation (z-score)", worst <= 5.0, worst, 5.0,
            "Monte Carlo vs closed form, 2e5 samples"};
}

} // namespace

std::vector<VerifyCheck> run_verification(const VerifyOptions &options,
                                          const Stepper &stepper) {
    if (options.cases == 0) {
        throw InvalidArgument("verification needs at least one case");
    }
    const Stepper impl = stepper ? stepper : Stepper(&qadapt::step);
    std::vector<VerifyCheck> checks;
    checks.push_back(probability_check(2, options));
    checks.push_back(probability_check(3, options));
    checks.push_back(trial_check(2, options, impl));
    checks.push_back(trial_check(3, options, impl));
    checks.push_back(analytic_check(options));
    checks.push_back(xor_check());
    checks.push_back(exponential_check(options));
    checks.push_back(onestep_check());
    return checks;
}

} // namespace qadapt::oracle
