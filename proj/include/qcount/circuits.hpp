// Copyright 2026 The qcount Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "qcount/analytic.hpp"
#include "qcount/common.hpp"
#include "qcount/grover.hpp"
#include "qcount/noise.hpp"
#include "qcount/parallel.hpp"
#include "qcount/rng.hpp"
#include "qcount/statevec.hpp"

namespace qcount {

/// Applies U in place to one second-register vector.
using UnitaryApplier = std::function<void(std::span<Complex>)>;
/// Applies U^power in place; closed-form shortcut for noiseless runs.
using PowerApplier = std::function<void(std::span<Complex>, std::uint64_t)>;

/// Phase estimation with p control lines: line j controls U^{2^j}, realized as
/// 2^j sequential controlled-U applications.
struct PhaseEstimationCircuit {
    int p = 0;
    int n = 0;
    UnitaryApplier unitary;
    std::vector<Complex> eigenstate;
    Ordering ordering = Ordering::ascending;
    PowerApplier power;

    void validate() const {
        if (p < 1 || p > 24) throw std::invalid_argument("phase estimation: p must be in [1, 24]");
        if (n < 1 || n > 26) throw std::invalid_argument("phase estimation: n must be in [1, 26]");
        if (p + n > 30) throw std::invalid_argument("phase estimation: p + n exceeds 30 qubits");
        if (!unitary) throw std::invalid_argument("phase estimation: missing unitary");
        if (eigenstate.size() != (std::size_t{1} << n)) {
            throw std::invalid_argument("phase estimation: eigenstate dimension " + std::to_string(eigenstate.size()) +
                                        " != 2^n = " + std::to_string(std::size_t{1} << n));
        }
        double s = 0.0;
        for (const auto& a : eigenstate) s += std::norm(a);
        if (std::abs(s - 1.0) > 1e-9) throw std::invalid_argument("phase estimation: eigenstate is not normalized");
    }
};

/// Runs one configured circuit, either exactly (marginal of the first register)
/// or as sampled trials. Immutable after construction; `sample` may be called
/// concurrently with distinct scratch states and generators.
class CircuitExecutor {
  public:
    CircuitExecutor(PhaseEstimationCircuit circuit, NoiseConfig noise)
        : circuit_(std::move(circuit)), noise_(std::move(noise)) {
        circuit_.validate();
        noise_.validate();
        if (noise_.event) validate_event(*noise_.event, circuit_.p, circuit_.n);
        schedule_ = schedule(circuit_.p, circuit_.ordering, noise_);
        qft_ = inverse_qft_gates(first_span());
        for (int q = 0; q < circuit_.n; ++q) second_qubits_.push_back(q);
        if (semi()) {
            first_qubits_.push_back(circuit_.n);
        } else {
            for (int j = 0; j < circuit_.p; ++j) first_qubits_.push_back(circuit_.n + j);
        }
        both_qubits_ = second_qubits_;
        both_qubits_.insert(both_qubits_.end(), first_qubits_.begin(), first_qubits_.end());
        if (!semi() && noise_.noiseless()) cached_ = run_exact();
    }

    [[nodiscard]] const PhaseEstimationCircuit& circuit() const { return circuit_; }
    [[nodiscard]] const NoiseConfig& noise() const { return noise_; }
    [[nodiscard]] const std::vector<ScheduleEntry>& steps() const { return schedule_; }

    [[nodiscard]] StateVector make_scratch() const {
        return StateVector(semi() ? circuit_.n + 1 : circuit_.n + circuit_.p);
    }

    /// Exact distribution of m'. Requires asc/desc ordering and no stochastic noise.
    [[nodiscard]] ProbDist exact_distribution() const {
        if (semi()) throw std::invalid_argument("semi_classical ordering has no exact mode; sample it instead");
        if (noise_.stochastic_active()) {
            throw std::invalid_argument("exact runs accept only noiseless or single_event noise");
        }
        return cached_ ? *cached_ : run_exact();
    }

    /// One trial: full execution with stochastic noise and measurement.
    std::uint64_t sample(TrialRng& rng, StateVector& scratch) const {
        if (cached_) return StateVector::sample_index(*cached_, rng);
        if (semi()) return run_semiclassical(scratch, rng);
        run_register(scratch, &rng);
        return scratch.measure(first_span(), rng);
    }

    std::uint64_t sample(TrialRng& rng) const {
        auto scratch = make_scratch();
        return sample(rng, scratch);
    }

  private:
    [[nodiscard]] bool semi() const { return circuit_.ordering == Ordering::semi_classical; }
    [[nodiscard]] RegisterSpan first_span() const { return {circuit_.n, circuit_.p}; }
    [[nodiscard]] RegisterSpan second_span() const { return {0, circuit_.n}; }

    [[nodiscard]] ProbDist run_exact() const {
        auto state = make_scratch();
        run_register(state, nullptr);
        return state.marginal_distribution(first_span());
    }

    void maybe_inject(StateVector& state, int line, std::uint64_t k) const {
        if (!noise_.event) return;
        const auto& e = *noise_.event;
        if (e.j != line || e.k != k) return;
        if (e.reg == Register::first) {
            state.apply_pauli(semi() ? circuit_.n : circuit_.n + line, e.pauli);
        } else if (e.unitary) {
            state.apply_1q(e.q, *e.unitary);
        } else {
            state.apply_pauli(e.q, e.pauli);
        }
    }

    void depolarize(StateVector& state, RegisterScope scope, TrialRng& rng) const {
        switch (scope) {
            case RegisterScope::none: return;
            case RegisterScope::first: depolarize_step(state, first_qubits_, noise_.d, rng); return;
            case RegisterScope::second: depolarize_step(state, second_qubits_, noise_.d, rng); return;
            case RegisterScope::both: depolarize_step(state, both_qubits_, noise_.d, rng); return;
        }
    }

    void controlled_unitary(StateVector& state, int control, std::uint64_t power) const {
        if (power == 1) {
            state.apply_controlled_block(control, second_span(), circuit_.unitary);
        } else {
            state.apply_controlled_block(control, second_span(),
                                         [&](std::span<Complex> v) { circuit_.power(v, power); });
        }
    }

    // Ascending / descending: everything up to (and including) the readout
    // relabeling; the first register is left unmeasured.
    void run_register(StateVector& state, TrialRng* rng) const {
        const bool use_power = circuit_.power && noise_.noiseless();
        const int n = circuit_.n;
        for (const auto& entry : schedule_) {
            if (const auto* ns = std::get_if<NoiseStep>(&entry)) {
                depolarize(state, ns->scope, *rng);
                continue;
            }
            const auto& st = std::get<CircuitStep>(entry);
            switch (st.kind) {
                case CircuitStep::Kind::prepare: {
                    auto amps = state.amplitudes();
                    std::fill(amps.begin(), amps.end(), Complex{0.0, 0.0});
                    std::copy(circuit_.eigenstate.begin(), circuit_.eigenstate.end(), amps.begin());
                    break;
                }
                case CircuitStep::Kind::hadamard:
                    for (int j = 0; j < circuit_.p; ++j) state.apply_1q_unchecked(n + j, hadamard_matrix());
                    break;
                case CircuitStep::Kind::controlled_u: {
                    const std::uint64_t block = std::uint64_t{1} << st.line;
                    maybe_inject(state, st.line, st.index);
                    if (!use_power) {
                        controlled_unitary(state, n + st.line, 1);
                    } else if (st.index == 0) {
                        controlled_unitary(state, n + st.line, block);
                    }
                    if (st.index + 1 == block) maybe_inject(state, st.line, block);
                    break;
                }
                case CircuitStep::Kind::qft_gate: state.apply(qft_[st.index]); break;
                case CircuitStep::Kind::rotation: break;
                case CircuitStep::Kind::measure: state.reverse_bits(first_span()); break;
            }
        }
    }

    std::uint64_t run_semiclassical(StateVector& state, TrialRng& rng) const {
        const int n = circuit_.n;
        const int p = circuit_.p;
        const int control = n;
        const RegisterSpan control_span{control, 1};
        std::uint64_t outcome = 0;
        std::uint64_t last_bit = 0;
        for (const auto& entry : schedule_) {
            if (const auto* ns = std::get_if<NoiseStep>(&entry)) {
                depolarize(state, ns->scope, rng);
                continue;
            }
            const auto& st = std::get<CircuitStep>(entry);
            switch (st.kind) {
                case CircuitStep::Kind::prepare:
                    if (st.line == p - 1) {
                        auto amps = state.amplitudes();
                        std::fill(amps.begin(), amps.end(), Complex{0.0, 0.0});
                        std::copy(circuit_.eigenstate.begin(), circuit_.eigenstate.end(), amps.begin());
                    } else if (last_bit == 1) {
                        // reset: the control was just measured, flip it back to |0>
                        state.apply_pauli(control, Pauli::X);
                    }
                    break;
                case CircuitStep::Kind::hadamard: state.apply_1q_unchecked(control, hadamard_matrix()); break;
                case CircuitStep::Kind::controlled_u: {
                    const std::uint64_t block = std::uint64_t{1} << st.line;
                    maybe_inject(state, st.line, st.index);
                    controlled_unitary(state, control, 1);
                    if (st.index + 1 == block) maybe_inject(state, st.line, block);
                    break;
                }
                case CircuitStep::Kind::rotation: {
                    // Feed-forward of the output bits already read (lines above this one).
                    double angle = 0.0;
                    for (int upper = st.line + 1; upper < p; ++upper) {
                        const std::uint64_t bit = (outcome >> (p - 1 - upper)) & 1u;
                        if (bit) angle -= kTwoPi / std::ldexp(1.0, upper - st.line + 1);
                    }
                    if (angle != 0.0) state.apply_phase(control, angle);
                    break;
                }
                case CircuitStep::Kind::measure:
                    last_bit = state.measure(control_span, rng);
                    outcome |= last_bit << (p - 1 - st.line);
                    break;
                case CircuitStep::Kind::qft_gate: break;
            }
        }
        return outcome;
    }

    PhaseEstimationCircuit circuit_;
    NoiseConfig noise_;
    std::vector<ScheduleEntry> schedule_;
    std::vector<QftGate> qft_;
    std::vector<int> first_qubits_, second_qubits_, both_qubits_;
    std::optional<ProbDist> cached_;
};

/// Exact distribution of m' for a generic phase-estimation circuit.
inline ProbDist run_phase_estimation(PhaseEstimationCircuit circuit, const NoiseConfig& noise = NoiseConfig::none()) {
    return CircuitExecutor(std::move(circuit), noise).exact_distribution();
}

/// One semi-classical trial: a single control qubit reused p times, lines
/// visited from p-1 down to 0.
inline std::uint64_t run_semiclassical(PhaseEstimationCircuit circuit, const NoiseConfig& noise, TrialRng& rng) {
    circuit.ordering = Ordering::semi_classical;
    return CircuitExecutor(std::move(circuit), noise).sample(rng);
}

// ---------------------------------------------------------------------------
// Quantum counting

struct CountingConfig {
    int p = 0;
    Oracle oracle;
    Ordering ordering = Ordering::ascending;
};

struct CountEstimate {
    std::uint64_t m_tilde = 0;
    double t_tilde = 0.0;
    std::int64_t t_rounded = 0;
};

/// t~ = N sin^2(pi m~ / P), rounded to nearest with ties to even.
inline CountEstimate estimate_t(std::uint64_t m_tilde, int p, int n) {
    const std::uint64_t P = std::uint64_t{1} << p;
    if (m_tilde >= P) throw std::out_of_range("estimate_t: m~ >= 2^p");
    const double N = std::ldexp(1.0, n);
    // sin^2(pi m/P) evaluated on the folded index keeps m <-> P - m exact.
    const std::uint64_t folded = std::min(m_tilde, P - m_tilde);
    const double s = std::sin(kPi * static_cast<double>(folded) / static_cast<double>(P));
    const double t = N * s * s;
    return {m_tilde, t, static_cast<std::int64_t>(std::nearbyint(t))};
}

inline PhaseEstimationCircuit counting_circuit(const CountingConfig& cfg) {
    PhaseEstimationCircuit c;
    c.p = cfg.p;
    c.n = cfg.oracle.n();
    c.unitary = [oracle = cfg.oracle](std::span<Complex> v) { apply_grover(oracle, v); };
    c.eigenstate = uniform_state(cfg.oracle.size());
    c.ordering = cfg.ordering;
    return c;
}

/// The counting circuit reduced to the Grover space: a one-qubit second
/// register in (|b>, |g>) coordinates with U the rotation by theta. Exact for
/// noiseless runs only; carries a closed-form power.
inline PhaseEstimationCircuit grover_space_circuit(const Oracle& oracle, int p, Ordering ordering) {
    PhaseEstimationCircuit c;
    c.p = p;
    c.n = 1;
    const double theta = grover_angle(oracle).theta;
    const auto rotate = [](std::span<Complex> v, double angle) {
        const double cs = std::cos(angle), sn = std::sin(angle);
        const Complex b = v[0], g = v[1];
        v[0] = cs * b - sn * g;
        v[1] = sn * b + cs * g;
    };
    c.unitary = [=](std::span<Complex> v) { rotate(v, theta); };
    c.power = [=](std::span<Complex> v, std::uint64_t power) {
        rotate(v, std::fmod(static_cast<double>(power) * theta, kTwoPi));
    };
    c.eigenstate = grover_space_start(oracle);
    c.ordering = ordering;
    return c;
}

inline ProbDist run_counting_exact(const CountingConfig& cfg, const NoiseConfig& noise = NoiseConfig::none()) {
    if (cfg.ordering == Ordering::semi_classical) {
        throw std::invalid_argument("run_counting_exact: semi_classical ordering needs run_counting_sampled");
    }
    return run_phase_estimation(counting_circuit(cfg), noise);
}

/// prob(m') = (1/2) [K_P(m'+f)^2 + K_P(m'-f)^2], f = P theta / 2 pi.
inline ProbDist closed_form_noiseless(int p, const Oracle& oracle) {
    const std::uint64_t P = std::uint64_t{1} << p;
    const double f = grover_angle(oracle).frequency(p);
    ProbDist out(P);
    for (std::uint64_t m = 0; m < P; ++m) {
        const double a = analytic::dirichlet_ratio(static_cast<double>(m) + f, P);
        const double b = analytic::dirichlet_ratio(static_cast<double>(m) - f, P);
        out[m] = 0.5 * (a * a + b * b);
    }
    return out;
}

struct SampledCounts {
    int p = 0;
    int n = 0;
    std::uint64_t trials = 0;
    std::vector<std::uint64_t> m_counts;  ///< length 2^p
    std::vector<std::uint64_t> t_counts;  ///< length N + 1, indexed by t_rounded

    [[nodiscard]] ProbDist m_frequencies() const {
        ProbDist out(m_counts.size());
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = static_cast<double>(m_counts[i]) / static_cast<double>(trials);
        return out;
    }
};

inline SampledCounts tally(std::vector<std::uint64_t> m_counts, int p, int n) {
    SampledCounts out;
    out.p = p;
    out.n = n;
    out.t_counts.assign((std::size_t{1} << n) + 1, 0);
    for (std::uint64_t m = 0; m < m_counts.size(); ++m) {
        out.trials += m_counts[m];
        out.t_counts[static_cast<std::size_t>(estimate_t(m, p, n).t_rounded)] += m_counts[m];
    }
    out.m_counts = std::move(m_counts);
    return out;
}

/// Histogram of `trials` independent runs of any phase-estimation circuit.
/// Trial i draws from TrialRng(seed, i) only.
inline std::vector<std::uint64_t> sample_phase_estimation(const PhaseEstimationCircuit& circuit, const NoiseConfig& noise,
                                                          std::uint64_t trials, std::uint64_t seed, int workers = 0) {
    const CircuitExecutor exec(circuit, noise);
    const std::size_t bins = std::size_t{1} << circuit.p;
    return count_outcomes(
        trials, bins,
        [&exec, seed] {
            return [&exec, seed, scratch = exec.make_scratch()](std::uint64_t trial) mutable {
                TrialRng rng(seed, trial);
                return exec.sample(rng, scratch);
            };
        },
        workers);
}

inline SampledCounts run_counting_sampled(const CountingConfig& cfg, const NoiseConfig& noise, std::uint64_t trials,
                                          std::uint64_t seed, int workers = 0) {
    if (trials == 0) throw std::invalid_argument("run_counting_sampled: trials must be >= 1");
    return tally(sample_phase_estimation(counting_circuit(cfg), noise, trials, seed, workers), cfg.p, cfg.oracle.n());
}

/// Average of the exact distributions over the four Paulis {I, X, Y, Z}
/// injected at block j after k applications.
inline ProbDist exact_pauli_average(const CountingConfig& cfg, Register reg, int j, std::uint64_t k, int q = 0) {
    ProbDist avg(std::size_t{1} << cfg.p, 0.0);
    for (Pauli pauli : kAllPaulis) {
        ErrorEvent e;
        e.pauli = pauli;
        e.reg = reg;
        e.j = j;
        e.k = k;
        e.q = q;
        const auto dist = run_counting_exact(cfg, NoiseConfig::single(e));
        for (std::size_t m = 0; m < avg.size(); ++m) avg[m] += 0.25 * dist[m];
    }
    return avg;
}

// ---------------------------------------------------------------------------
// Two-phase counting driver

struct BhtResult {
    int phase1_p = 0;
    std::uint64_t phase1_m = 0;
    double phase1_t = 0.0;
    int phase2_p = 0;
    std::uint64_t phase2_m = 0;
    double phase2_t = 0.0;
    std::int64_t estimate = 0;
};

inline constexpr int kMaxBhtPhase2Bits = 16;

/// Phase 1 with P = sqrt(N) (p rounded up for odd n); phase 2 with P the next
/// power of two >= 20 sqrt(t1 N), where t1 = 0 is replaced by 1 and p <= 16.
/// Noiseless; distributions come from the Grover-space reduction.
class BhtCounter {
  public:
    explicit BhtCounter(Oracle oracle) : oracle_(std::move(oracle)) {}

    [[nodiscard]] int phase1_bits() const { return (oracle_.n() + 1) / 2; }

    [[nodiscard]] int phase2_bits(double t1) const {
        const double target = 20.0 * std::sqrt(std::max(t1, 1.0) * static_cast<double>(oracle_.size()));
        const int bits = static_cast<int>(std::ceil(std::log2(target) - 1e-12));
        return std::clamp(bits, 1, kMaxBhtPhase2Bits);
    }

    BhtResult run(std::uint64_t seed, std::uint64_t run_index) {
        TrialRng rng(seed, run_index, /*stream=*/0xB47);
        BhtResult r;
        r.phase1_p = phase1_bits();
        r.phase1_m = StateVector::sample_index(distribution(r.phase1_p), rng);
        r.phase1_t = estimate_t(r.phase1_m, r.phase1_p, oracle_.n()).t_tilde;
        r.phase2_p = phase2_bits(r.phase1_t);
        r.phase2_m = StateVector::sample_index(distribution(r.phase2_p), rng);
        const auto est = estimate_t(r.phase2_m, r.phase2_p, oracle_.n());
        r.phase2_t = est.t_tilde;
        r.estimate = est.t_rounded;
        return r;
    }

    const ProbDist& distribution(int p) {
        auto it = cache_.find(p);
        if (it == cache_.end()) {
            it = cache_.emplace(p, run_phase_estimation(grover_space_circuit(oracle_, p, Ordering::ascending))).first;
        }
        return it->second;
    }

  private:
    Oracle oracle_;
    std::map<int, ProbDist> cache_;
};

inline BhtResult bht_count(const Oracle& oracle, std::uint64_t seed, std::uint64_t run_index = 0) {
    return BhtCounter(oracle).run(seed, run_index);
}

}  // namespace qcount
