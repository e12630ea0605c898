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

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qcount/common.hpp"
#include "qcount/rng.hpp"

namespace qcount {

/// Gate of the in-place inverse QFT decomposition: a Hadamard on `target`, or a
/// phase e^{i angle} on the |11> component of (`control`, `target`).
struct QftGate {
    enum class Kind { hadamard, controlled_phase };
    Kind kind = Kind::hadamard;
    int target = 0;
    int control = -1;
    double angle = 0.0;
};

/// Gate list for the inverse QFT on `span`, excluding the final bit reversal.
///
/// Line L (relative to span.start) is processed from the top down: H on L, then
/// a phase -2pi/2^{L-i+1} with every lower line i still holding its input bit.
/// Afterwards line L holds output bit (length-1-L). p(p+1)/2 gates in total.
inline std::vector<QftGate> inverse_qft_gates(RegisterSpan span) {
    std::vector<QftGate> gates;
    gates.reserve(static_cast<std::size_t>(span.length * (span.length + 1) / 2));
    for (int line = span.length - 1; line >= 0; --line) {
        gates.push_back({QftGate::Kind::hadamard, span.start + line, -1, 0.0});
        for (int lower = line - 1; lower >= 0; --lower) {
            const double angle = -kTwoPi / std::ldexp(1.0, line - lower + 1);
            gates.push_back({QftGate::Kind::controlled_phase, span.start + line, span.start + lower, angle});
        }
    }
    return gates;
}

/// Dense pure state over `num_qubits` qubits. Qubit q is bit q of the index.
class StateVector {
  public:
    explicit StateVector(int num_qubits) : num_qubits_(num_qubits) {
        if (num_qubits < 0 || num_qubits > 30) {
            throw std::invalid_argument("StateVector: unsupported qubit count " + std::to_string(num_qubits));
        }
        amps_.assign(std::size_t{1} << num_qubits, Complex{0.0, 0.0});
        amps_[0] = 1.0;
    }

    static StateVector from_amplitudes(std::vector<Complex> amps) {
        const std::size_t len = amps.size();
        if (len == 0 || (len & (len - 1)) != 0) {
            throw std::invalid_argument("StateVector: amplitude count must be a power of two");
        }
        StateVector sv(0);
        sv.num_qubits_ = std::countr_zero(len);
        sv.amps_ = std::move(amps);
        return sv;
    }

    [[nodiscard]] int num_qubits() const { return num_qubits_; }
    [[nodiscard]] std::size_t size() const { return amps_.size(); }
    [[nodiscard]] std::span<Complex> amplitudes() { return amps_; }
    [[nodiscard]] std::span<const Complex> amplitudes() const { return amps_; }
    Complex& operator[](std::size_t i) { return amps_[i]; }
    const Complex& operator[](std::size_t i) const { return amps_[i]; }

    [[nodiscard]] double norm_squared() const {
        double s = 0.0;
        for (const auto& a : amps_) s += std::norm(a);
        return s;
    }

    void reset_to_basis(std::uint64_t index) {
        std::fill(amps_.begin(), amps_.end(), Complex{0.0, 0.0});
        amps_.at(index) = 1.0;
    }

    void apply_1q(int qubit, const Mat2& gate) {
        check_qubit(qubit);
        check_unitary(gate);
        apply_1q_unchecked(qubit, gate);
    }

    void apply_1q_unchecked(int qubit, const Mat2& g) {
        const std::size_t stride = std::size_t{1} << qubit;
        const std::size_t n = amps_.size();
        for (std::size_t base = 0; base < n; base += 2 * stride) {
            for (std::size_t i = base; i < base + stride; ++i) {
                const Complex a0 = amps_[i];
                const Complex a1 = amps_[i + stride];
                amps_[i] = g[0] * a0 + g[1] * a1;
                amps_[i + stride] = g[2] * a0 + g[3] * a1;
            }
        }
    }

    void apply_pauli(int qubit, Pauli p) {
        check_qubit(qubit);
        const std::size_t bit = std::size_t{1} << qubit;
        switch (p) {
            case Pauli::I: return;
            case Pauli::X:
                for (std::size_t i = 0; i < amps_.size(); ++i)
                    if (!(i & bit)) std::swap(amps_[i], amps_[i | bit]);
                return;
            case Pauli::Y:
                for (std::size_t i = 0; i < amps_.size(); ++i) {
                    if (i & bit) continue;
                    const Complex a0 = amps_[i];
                    const Complex a1 = amps_[i | bit];
                    amps_[i] = Complex{a1.imag(), -a1.real()};        // -i * a1
                    amps_[i | bit] = Complex{-a0.imag(), a0.real()};  // i * a0
                }
                return;
            case Pauli::Z:
                for (std::size_t i = 0; i < amps_.size(); ++i)
                    if (i & bit) amps_[i] = -amps_[i];
                return;
        }
    }

    /// Multiplies every amplitude with both bits set by e^{i angle}.
    void apply_controlled_phase(int control, int target, double angle) {
        check_qubit(control);
        check_qubit(target);
        const std::size_t both = (std::size_t{1} << control) | (std::size_t{1} << target);
        const Complex phase = std::polar(1.0, angle);
        for (std::size_t i = 0; i < amps_.size(); ++i)
            if ((i & both) == both) amps_[i] *= phase;
    }

    /// Phase e^{i angle} on the |1> component of `qubit`.
    void apply_phase(int qubit, double angle) {
        check_qubit(qubit);
        const std::size_t bit = std::size_t{1} << qubit;
        const Complex phase = std::polar(1.0, angle);
        for (std::size_t i = 0; i < amps_.size(); ++i)
            if (i & bit) amps_[i] *= phase;
    }

    /// Applies `block` to the `target` register on the subspace where `control`
    /// is 1. `block` is called with a span over the 2^target.length amplitudes of
    /// one fixed assignment of the remaining qubits.
    template <class Block>
    void apply_controlled_block(int control, RegisterSpan target, Block&& block) {
        check_qubit(control);
        check_span(target);
        if (target.contains(control)) {
            throw std::invalid_argument("apply_controlled_block: control qubit lies inside the target register");
        }
        const std::size_t cbit = std::size_t{1} << control;
        const std::size_t dim = target.dim();
        if (target.start == 0) {
            for (std::size_t base = 0; base < amps_.size(); base += dim) {
                if (base & cbit) block(std::span<Complex>(amps_.data() + base, dim));
            }
            return;
        }
        // Non-contiguous target: gather, apply, scatter.
        std::vector<Complex> buf(dim);
        const std::size_t tmask = target.mask() << target.start;
        for (std::size_t base = 0; base < amps_.size(); ++base) {
            if ((base & tmask) != 0 || !(base & cbit)) continue;
            for (std::size_t x = 0; x < dim; ++x) buf[x] = amps_[base | (x << target.start)];
            block(std::span<Complex>(buf));
            for (std::size_t x = 0; x < dim; ++x) amps_[base | (x << target.start)] = buf[x];
        }
    }

    void apply(const QftGate& g) {
        if (g.kind == QftGate::Kind::hadamard) {
            apply_1q_unchecked(g.target, hadamard_matrix());
        } else {
            apply_controlled_phase(g.control, g.target, g.angle);
        }
    }

    /// Reverses the bit order of `span` (the swap network closing the QFT).
    void reverse_bits(RegisterSpan span) {
        check_span(span);
        const auto rev = [&](std::uint64_t v) {
            std::uint64_t r = 0;
            for (int b = 0; b < span.length; ++b) r |= ((v >> b) & 1u) << (span.length - 1 - b);
            return r;
        };
        const std::uint64_t mask = span.mask() << span.start;
        for (std::size_t i = 0; i < amps_.size(); ++i) {
            const std::uint64_t v = (i & mask) >> span.start;
            const std::uint64_t j = (i & ~mask) | (rev(v) << span.start);
            if (j > i) std::swap(amps_[i], amps_[j]);
        }
    }

    /// |m> -> P^{-1/2} sum_{m'} e^{-2 pi i m m'/P} |m'>, output in natural order.
    void inverse_qft(RegisterSpan span) {
        check_span(span);
        for (const auto& g : inverse_qft_gates(span)) apply(g);
        reverse_bits(span);
    }

    /// Inverse of inverse_qft: the same network with conjugated phases.
    void forward_qft(RegisterSpan span) {
        check_span(span);
        reverse_bits(span);
        auto gates = inverse_qft_gates(span);
        std::reverse(gates.begin(), gates.end());
        for (auto g : gates) {
            g.angle = -g.angle;
            apply(g);
        }
    }

    [[nodiscard]] ProbDist marginal_distribution(RegisterSpan span) const {
        check_span(span);
        ProbDist dist(span.dim(), 0.0);
        for (std::size_t i = 0; i < amps_.size(); ++i) {
            dist[(i >> span.start) & span.mask()] += std::norm(amps_[i]);
        }
        return dist;
    }

    /// Samples an outcome on `span`, projects onto it and renormalizes.
    template <class Rng>
    std::uint64_t measure(RegisterSpan span, Rng& rng) {
        const ProbDist dist = marginal_distribution(span);
        const std::uint64_t outcome = sample_index(dist, rng);
        const double p = dist[outcome];
        const double scale = 1.0 / std::sqrt(p);
        for (std::size_t i = 0; i < amps_.size(); ++i) {
            if (((i >> span.start) & span.mask()) == outcome) {
                amps_[i] *= scale;
            } else {
                amps_[i] = 0.0;
            }
        }
        return outcome;
    }

    /// Inverse-CDF sample; never returns a zero-probability index.
    template <class Rng>
    static std::uint64_t sample_index(const ProbDist& dist, Rng& rng) {
        double sum = 0.0;
        for (double x : dist) sum += x;
        const double u = rng.uniform() * sum;
        double acc = 0.0;
        std::uint64_t last_nonzero = 0;
        for (std::size_t i = 0; i < dist.size(); ++i) {
            if (dist[i] <= 0.0) continue;
            last_nonzero = i;
            acc += dist[i];
            if (u < acc) return i;
        }
        return last_nonzero;
    }

  private:
    void check_qubit(int q) const {
        if (q < 0 || q >= num_qubits_) {
            throw std::out_of_range("qubit " + std::to_string(q) + " out of range for " +
                                    std::to_string(num_qubits_) + "-qubit state");
        }
    }

    void check_span(RegisterSpan s) const {
        if (s.start < 0 || s.length < 0 || s.start + s.length > num_qubits_) {
            throw std::out_of_range("register span out of range");
        }
    }

    static void check_unitary(const Mat2& g) {
        // U^dagger U == I
        const Complex m00 = std::conj(g[0]) * g[0] + std::conj(g[2]) * g[2];
        const Complex m01 = std::conj(g[0]) * g[1] + std::conj(g[2]) * g[3];
        const Complex m11 = std::conj(g[1]) * g[1] + std::conj(g[3]) * g[3];
        constexpr double tol = 1e-12;
        if (std::abs(m00 - 1.0) > tol || std::abs(m11 - 1.0) > tol || std::abs(m01) > tol) {
            throw std::invalid_argument("apply_1q: gate is not unitary");
        }
    }

    int num_qubits_ = 0;
    std::vector<Complex> amps_;
};

}  // namespace qcount
