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

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qcount {

using Complex = std::complex<double>;

/// Probability vector indexed by a register outcome.
using ProbDist = std::vector<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Row-major 2x2 complex matrix.
using Mat2 = std::array<Complex, 4>;

enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

inline constexpr std::array<Pauli, 4> kAllPaulis{Pauli::I, Pauli::X, Pauli::Y, Pauli::Z};

inline Mat2 pauli_matrix(Pauli p) {
    using namespace std::complex_literals;
    switch (p) {
        case Pauli::I: return {1.0, 0.0, 0.0, 1.0};
        case Pauli::X: return {0.0, 1.0, 1.0, 0.0};
        case Pauli::Y: return {0.0, -1i, 1i, 0.0};
        case Pauli::Z: return {1.0, 0.0, 0.0, -1.0};
    }
    throw std::invalid_argument("unknown Pauli");
}

inline Mat2 hadamard_matrix() {
    const double s = 1.0 / std::numbers::sqrt2;
    return {s, s, s, -s};
}

inline char pauli_char(Pauli p) { return "IXYZ"[static_cast<int>(p)]; }

inline Pauli parse_pauli(std::string_view s) {
    if (s == "I" || s == "i" || s == "0") return Pauli::I;
    if (s == "X" || s == "x") return Pauli::X;
    if (s == "Y" || s == "y") return Pauli::Y;
    if (s == "Z" || s == "z") return Pauli::Z;
    throw std::invalid_argument("unknown Pauli '" + std::string(s) + "'");
}

enum class Ordering : std::uint8_t { ascending, descending, semi_classical };

inline std::string_view to_string(Ordering o) {
    switch (o) {
        case Ordering::ascending: return "ascending";
        case Ordering::descending: return "descending";
        case Ordering::semi_classical: return "semi_classical";
    }
    return "?";
}

inline Ordering parse_ordering(std::string_view s) {
    if (s == "ascending" || s == "asc") return Ordering::ascending;
    if (s == "descending" || s == "desc") return Ordering::descending;
    if (s == "semi_classical" || s == "semi") return Ordering::semi_classical;
    throw std::invalid_argument("unknown ordering '" + std::string(s) + "'");
}

/// Contiguous run of qubits (bit positions of the amplitude index).
struct RegisterSpan {
    int start = 0;
    int length = 0;

    [[nodiscard]] std::uint64_t dim() const { return std::uint64_t{1} << length; }
    [[nodiscard]] std::uint64_t mask() const { return dim() - 1; }
    [[nodiscard]] bool contains(int qubit) const { return qubit >= start && qubit < start + length; }
    friend bool operator==(const RegisterSpan&, const RegisterSpan&) = default;
};

/// Layout of the two-register counting circuit: the second register sits on the
/// low bit positions [0, n), the first register on [n, n + p). Control line j of
/// the first register is bit n + j and carries weight 2^j in m.
struct TwoRegisterLayout {
    int p = 0;
    int n = 0;

    [[nodiscard]] RegisterSpan first() const { return {n, p}; }
    [[nodiscard]] RegisterSpan second() const { return {0, n}; }
    [[nodiscard]] int control_qubit(int line) const { return n + line; }
    [[nodiscard]] int total_qubits() const { return p + n; }
};

inline double total(const ProbDist& dist) {
    double s = 0.0;
    for (double x : dist) s += x;
    return s;
}

}  // namespace qcount
