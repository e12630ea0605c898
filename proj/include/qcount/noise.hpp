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

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qcount/common.hpp"
#include "qcount/rng.hpp"
#include "qcount/statevec.hpp"

namespace qcount {

enum class RegisterScope : std::uint8_t { none, first, second, both };
enum class StageScope : std::uint8_t { stage3_only, all_stages };
enum class NoiseMode : std::uint8_t { stochastic, single_event };
enum class Register : std::uint8_t { first, second };

inline std::string_view to_string(RegisterScope s) {
    switch (s) {
        case RegisterScope::none: return "none";
        case RegisterScope::first: return "first";
        case RegisterScope::second: return "second";
        case RegisterScope::both: return "both";
    }
    return "?";
}
inline std::string_view to_string(StageScope s) { return s == StageScope::stage3_only ? "stage3_only" : "all_stages"; }
inline std::string_view to_string(NoiseMode m) { return m == NoiseMode::stochastic ? "stochastic" : "single_event"; }
inline std::string_view to_string(Register r) { return r == Register::first ? "first" : "second"; }

inline RegisterScope parse_register_scope(std::string_view s) {
    if (s == "none") return RegisterScope::none;
    if (s == "first") return RegisterScope::first;
    if (s == "second") return RegisterScope::second;
    if (s == "both") return RegisterScope::both;
    throw std::invalid_argument("unknown register scope '" + std::string(s) + "'");
}
inline StageScope parse_stage_scope(std::string_view s) {
    if (s == "stage3_only") return StageScope::stage3_only;
    if (s == "all_stages") return StageScope::all_stages;
    throw std::invalid_argument("unknown stage scope '" + std::string(s) + "'");
}
inline NoiseMode parse_noise_mode(std::string_view s) {
    if (s == "stochastic") return NoiseMode::stochastic;
    if (s == "single_event") return NoiseMode::single_event;
    throw std::invalid_argument("unknown noise mode '" + std::string(s) + "'");
}
inline Register parse_register(std::string_view s) {
    if (s == "first" || s == "1") return Register::first;
    if (s == "second" || s == "2") return Register::second;
    throw std::invalid_argument("unknown register '" + std::string(s) + "'");
}

/// One disturbance placed after `k` controlled-U applications of the block
/// controlled by line `j` (k = 0: before the block, k = 2^j: after it). The
/// meaning of (j, k) does not depend on the ordering.
struct ErrorEvent {
    Pauli pauli = Pauli::I;
    std::optional<Mat2> unitary;  ///< overrides `pauli`; second register only
    Register reg = Register::first;
    int j = 0;
    std::uint64_t k = 0;
    int q = 0;  ///< target qubit within the second register

    [[nodiscard]] Mat2 matrix() const { return unitary ? *unitary : pauli_matrix(pauli); }
};

struct NoiseConfig {
    double d = 0.0;
    RegisterScope register_scope = RegisterScope::none;
    StageScope stage_scope = StageScope::stage3_only;
    NoiseMode mode = NoiseMode::stochastic;
    std::optional<ErrorEvent> event;

    static NoiseConfig none() { return {}; }

    static NoiseConfig depolarizing(double d, RegisterScope scope, StageScope stages = StageScope::stage3_only) {
        NoiseConfig c;
        c.d = d;
        c.register_scope = scope;
        c.stage_scope = stages;
        c.mode = NoiseMode::stochastic;
        return c;
    }

    static NoiseConfig single(ErrorEvent e) {
        NoiseConfig c;
        c.mode = NoiseMode::single_event;
        c.register_scope = e.reg == Register::first ? RegisterScope::first : RegisterScope::second;
        c.event = e;
        return c;
    }

    /// True when no stochastic channel fires.
    [[nodiscard]] bool stochastic_active() const {
        return mode == NoiseMode::stochastic && d > 0.0 && register_scope != RegisterScope::none;
    }

    [[nodiscard]] bool noiseless() const { return !stochastic_active() && mode != NoiseMode::single_event; }

    void validate() const {
        if (!(d >= 0.0 && d <= 1.0)) throw std::invalid_argument("noise: d must lie in [0, 1]");
        if (mode == NoiseMode::single_event && !event) {
            throw std::invalid_argument("noise: single_event mode requires an event");
        }
        if (mode == NoiseMode::stochastic && event) {
            throw std::invalid_argument("noise: an event is only allowed in single_event mode");
        }
    }
};

/// Throws unless `e` is a legal position in a circuit with p control lines and
/// an n-qubit second register.
inline void validate_event(const ErrorEvent& e, int p, int n) {
    if (e.j < 0 || e.j >= p) {
        throw std::out_of_range("error event: j = " + std::to_string(e.j) + " outside [0, " + std::to_string(p - 1) + "]");
    }
    if (e.k > (std::uint64_t{1} << e.j)) {
        throw std::out_of_range("error event: k = " + std::to_string(e.k) + " exceeds 2^j = " +
                                std::to_string(std::uint64_t{1} << e.j));
    }
    if (e.reg == Register::second && (e.q < 0 || e.q >= n)) {
        throw std::out_of_range("error event: q = " + std::to_string(e.q) + " outside the second register");
    }
    if (e.reg == Register::first && e.unitary) {
        throw std::invalid_argument("error event: arbitrary unitaries are only supported on the second register");
    }
}

/// Number of controlled-U applications executed before event (j, k).
inline std::uint64_t applications_before(int p, Ordering ordering, int j, std::uint64_t k) {
    const std::uint64_t block = std::uint64_t{1} << j;
    if (ordering == Ordering::ascending) return block - 1 + k;
    return (std::uint64_t{1} << p) - 2 * block + k;
}

/// Applies the depolarizing channel to every listed qubit by pure-state
/// sampling: with probability d one of I, X, Y, Z is drawn uniformly.
inline void depolarize_step(StateVector& state, std::span<const int> qubits, double d, TrialRng& rng) {
    for (int q : qubits) {
        if (rng.uniform() < d) state.apply_pauli(q, kAllPaulis[rng.below(4)]);
    }
}

// ---------------------------------------------------------------------------
// Time model

struct CircuitStep {
    enum class Kind : std::uint8_t {
        prepare,         ///< |0>^p (x) |u>; semi-classical: reset of the control qubit
        hadamard,        ///< H on every control line (or the single semi-classical control)
        controlled_u,    ///< one application of controlled-U for line `line`, sub-step `index`
        qft_gate,        ///< gate `index` of the inverse QFT network
        rotation,        ///< semi-classical feed-forward phase for line `line`
        measure,
    };
    Kind kind = Kind::prepare;
    int line = -1;
    std::uint64_t index = 0;

    friend bool operator==(const CircuitStep&, const CircuitStep&) = default;
};

struct NoiseStep {
    RegisterScope scope = RegisterScope::none;
    friend bool operator==(const NoiseStep&, const NoiseStep&) = default;
};

using ScheduleEntry = std::variant<CircuitStep, NoiseStep>;

/// Execution order of one run. One unit of time is one controlled-U
/// application; stochastic noise fires after every unit on the qubits in
/// scope. With all_stages, preparation, the Hadamard layer, each inverse-QFT
/// gate and the measurement are one unit each as well.
inline std::vector<ScheduleEntry> schedule(int p, Ordering ordering, const NoiseConfig& noise) {
    if (p < 1 || p > 24) throw std::invalid_argument("schedule: p must be in [1, 24]");
    std::vector<ScheduleEntry> out;
    const bool noisy = noise.stochastic_active();
    const bool every_stage = noisy && noise.stage_scope == StageScope::all_stages;
    const auto step = [&](CircuitStep::Kind kind, int line = -1, std::uint64_t index = 0, bool unit_noise = false) {
        out.emplace_back(CircuitStep{kind, line, index});
        if (unit_noise) out.emplace_back(NoiseStep{noise.register_scope});
    };
    const auto block = [&](int line) {
        for (std::uint64_t i = 0; i < (std::uint64_t{1} << line); ++i) {
            step(CircuitStep::Kind::controlled_u, line, i, noisy);
        }
    };

    if (ordering == Ordering::semi_classical) {
        for (int line = p - 1; line >= 0; --line) {
            step(CircuitStep::Kind::prepare, line, 0, every_stage);
            step(CircuitStep::Kind::hadamard, line, 0, every_stage);
            block(line);
            step(CircuitStep::Kind::rotation, line, 0, every_stage && line < p - 1);
            step(CircuitStep::Kind::hadamard, line, 1, every_stage);
            if (every_stage) out.emplace_back(NoiseStep{noise.register_scope});
            step(CircuitStep::Kind::measure, line);
        }
        return out;
    }

    step(CircuitStep::Kind::prepare, -1, 0, every_stage);
    step(CircuitStep::Kind::hadamard, -1, 0, every_stage);
    if (ordering == Ordering::ascending) {
        for (int line = 0; line < p; ++line) block(line);
    } else {
        for (int line = p - 1; line >= 0; --line) block(line);
    }
    const std::uint64_t qft_gates = static_cast<std::uint64_t>(p) * (p + 1) / 2;
    for (std::uint64_t g = 0; g < qft_gates; ++g) step(CircuitStep::Kind::qft_gate, -1, g, every_stage);
    if (every_stage) out.emplace_back(NoiseStep{noise.register_scope});
    step(CircuitStep::Kind::measure);
    return out;
}

/// Number of time units (noise firings) in a schedule.
inline std::uint64_t noise_units(const std::vector<ScheduleEntry>& sched) {
    std::uint64_t units = 0;
    for (const auto& e : sched) units += std::holds_alternative<NoiseStep>(e) ? 1 : 0;
    return units;
}

/// Expected number of depolarizing firings on `qubits` qubits during stage (iii).
inline double expected_channel_firings(int p, int qubits, double d) {
    return d * qubits * (std::ldexp(1.0, p) - 1.0);
}

}  // namespace qcount
