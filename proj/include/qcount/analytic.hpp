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
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include "qcount/common.hpp"

/// Closed forms for the counting distributions under a single error event,
/// each backed by an explicit direct sum over the first-register index m.
///
/// Direct sums use the kernel e^{+2 pi i m m'/P}; the magnitudes below are
/// invariant under conjugating that kernel because the disturbed states are
/// real up to a global phase.
namespace qcount::analytic {

/// sin(pi x) / (M sin(pi x / M)), continuous in x. At x = a M the limit
/// (-1)^{a (M-1)} is returned.
inline double dirichlet_ratio(double x, std::uint64_t M) {
    if (M == 0) throw std::invalid_argument("dirichlet_ratio: M must be >= 1");
    if (M == 1) return 1.0;
    const double m = static_cast<double>(M);
    const double a = std::nearbyint(x / m);
    const double r = x - a * m;
    const bool odd_a = std::fmod(std::fabs(a), 2.0) == 1.0;
    const double sign = (M % 2 == 0 && odd_a) ? -1.0 : 1.0;
    if (r == 0.0) return sign;
    return sign * std::sin(kPi * r) / (m * std::sin(kPi * r / m));
}

/// Sum_{m < P} e^{2 pi i E(m) / P}. E is reduced mod P before exponentiation.
template <class Exponent>
Complex brute_force_sum(Exponent&& exponent, std::uint64_t P) {
    if (P == 0 || P > (std::uint64_t{1} << 20)) throw std::invalid_argument("brute_force_sum: P must be in [1, 2^20]");
    const double pd = static_cast<double>(P);
    Complex s{0.0, 0.0};
    for (std::uint64_t m = 0; m < P; ++m) {
        const double e = std::fmod(static_cast<double>(exponent(m)), pd);
        s += std::polar(1.0, kTwoPi * e / pd);
    }
    return s;
}

/// Position of an error inside the controlled-U stage plus the evaluation point.
struct KernelParams {
    int p = 0;
    int j = 0;
    std::uint64_t k = 0;
    double f = 0.0;
    std::uint64_t m_prime = 0;

    [[nodiscard]] std::uint64_t P() const { return std::uint64_t{1} << p; }

    void validate() const {
        if (p < 1 || p > 20) throw std::invalid_argument("KernelParams: p must be in [1, 20]");
        if (j < 0 || j >= p) throw std::out_of_range("KernelParams: j outside [0, p-1]");
        if (k > (std::uint64_t{1} << j)) throw std::out_of_range("KernelParams: k > 2^j");
        if (m_prime >= P()) throw std::out_of_range("KernelParams: m' >= 2^p");
    }
};

namespace detail {

struct SplitIndex {
    std::uint64_t high, bit, low;
};

inline SplitIndex split(std::uint64_t m, int j) {
    return {m >> (j + 1), (m >> j) & 1u, m & ((std::uint64_t{1} << j) - 1)};
}

}  // namespace detail

/// |(1/P) Sum_m e^{2 pi i (a_high h + a_bit m_j + a_low l) / P}| over the split
/// m = h 2^{j+1} + m_j 2^j + l, evaluated as a product of three kernels.
inline double split_sum_magnitude(int p, int j, double a_high, double a_bit, double a_low) {
    const double P = std::ldexp(1.0, p);
    const std::uint64_t H = std::uint64_t{1} << (p - j - 1);
    const std::uint64_t L = std::uint64_t{1} << j;
    return std::fabs(dirichlet_ratio(static_cast<double>(H) * a_high / P, H)) *
           std::fabs(std::cos(kPi * a_bit / P)) *
           std::fabs(dirichlet_ratio(static_cast<double>(L) * a_low / P, L));
}

enum class Branch { plus, minus };

inline double branch_sign(Branch b) { return b == Branch::plus ? 1.0 : -1.0; }

/// |c^i_{+-}(m')| for a first-register error sigma_i on line j after k
/// controlled-G applications of that line's block, as the direct sum
///   (1 / sqrt2 P) |Sum_m e^{2 pi i m m'/P} s_i(m) e^{+-i theta e_i(m)}|
/// with e(m) = m + (1 - 2 m_j) k for X/Y and e(m) = m for I/Z, and
/// s(m) = (-1)^{m_j} for Y/Z. m is the first-register value after the error.
inline double coeff_first_register(Pauli pauli, Branch branch, const KernelParams& kp) {
    kp.validate();
    const double P = static_cast<double>(kp.P());
    const double s = branch_sign(branch);
    const bool shifted = pauli == Pauli::X || pauli == Pauli::Y;
    const bool signed_bit = pauli == Pauli::Y || pauli == Pauli::Z;
    const double k = static_cast<double>(kp.k);
    const auto exponent = [&](std::uint64_t m) {
        const double mj = static_cast<double>((m >> kp.j) & 1u);
        const double md = static_cast<double>(m);
        // theta e(m) = 2 pi f e(m) / P
        const double shift = shifted ? (1.0 - 2.0 * mj) * k : 0.0;
        double e = md * static_cast<double>(kp.m_prime) + s * kp.f * (md + shift);
        if (signed_bit) e += mj * P / 2.0;
        return e;
    };
    return std::abs(brute_force_sum(exponent, kp.P())) / (std::numbers::sqrt2 * P);
}

/// Three-kernel product form of coeff_first_register.
inline double coeff_first_register_factored(Pauli pauli, Branch branch, const KernelParams& kp) {
    kp.validate();
    const double P = static_cast<double>(kp.P());
    const double s = branch_sign(branch);
    const double x = static_cast<double>(kp.m_prime) + s * kp.f;
    const double bit_base = std::ldexp(x, kp.j);
    double a_bit = bit_base;
    if (pauli == Pauli::X || pauli == Pauli::Y) a_bit -= s * 2.0 * static_cast<double>(kp.k) * kp.f;
    if (pauli == Pauli::Y || pauli == Pauli::Z) a_bit += P / 2.0;
    return split_sum_magnitude(kp.p, kp.j, std::ldexp(x, kp.j + 1), a_bit, x) / std::numbers::sqrt2;
}

/// Depolarizing-averaged distribution for one first-register error on line j:
///   (1/4) Sum_i Prob^{(i,j,k)}(m') = (1/4) [A(m'+f)^2 + A(m'-f)^2],
///   A(x) = K_{2^{p-j-1}}(x) K_{2^j}(x / 2^{p-j}).
/// Independent of k.
inline ProbDist prob_first_register_avg(int p, int j, double f) {
    if (p < 1 || p > 24) throw std::invalid_argument("prob_first_register_avg: p must be in [1, 24]");
    if (j < 0 || j >= p) throw std::out_of_range("prob_first_register_avg: j outside [0, p-1]");
    const std::uint64_t P = std::uint64_t{1} << p;
    const std::uint64_t H = std::uint64_t{1} << (p - j - 1);
    const std::uint64_t L = std::uint64_t{1} << j;
    const double low_scale = std::ldexp(1.0, -(p - j));
    const auto A = [&](double x) { return dirichlet_ratio(x, H) * dirichlet_ratio(x * low_scale, L); };
    ProbDist out(P);
    for (std::uint64_t m = 0; m < P; ++m) {
        const double a = A(static_cast<double>(m) + f);
        const double b = A(static_cast<double>(m) - f);
        out[m] = 0.25 * (a * a + b * b);
    }
    return out;
}

/// The same average assembled from the per-Pauli direct sums at a given k.
inline ProbDist prob_first_register_avg_direct(int p, int j, std::uint64_t k, double f) {
    const std::uint64_t P = std::uint64_t{1} << p;
    ProbDist out(P, 0.0);
    for (std::uint64_t m = 0; m < P; ++m) {
        const KernelParams kp{p, j, k, f, m};
        double s = 0.0;
        for (Pauli pauli : kAllPaulis) {
            for (Branch b : {Branch::plus, Branch::minus}) {
                const double c = coeff_first_register(pauli, b, kp);
                s += c * c;
            }
        }
        out[m] = 0.25 * s;
    }
    return out;
}

/// Averaged over every control line, (1/4p) Sum_j Sum_i Prob^{(i,j,k)}.
inline ProbDist prob_first_register_line_average(int p, double f) {
    ProbDist avg(std::uint64_t{1} << p, 0.0);
    for (int j = 0; j < p; ++j) {
        const auto d = prob_first_register_avg(p, j, f);
        for (std::size_t m = 0; m < d.size(); ++m) avg[m] += d[m] / p;
    }
    return avg;
}

/// Plain noiseless kernel |K_P(m' + f)|.
inline double noiseless_kernel(int p, double f, std::uint64_t m_prime) {
    return std::fabs(dirichlet_ratio(static_cast<double>(m_prime) + f, std::uint64_t{1} << p));
}

// ---------------------------------------------------------------------------
// Second-register sums

enum class SecondRegisterForm { asc_plus, asc_eb, des_eb, des_eg };

inline SecondRegisterForm parse_second_register_form(std::string_view s) {
    if (s == "asc_plus" || s == "asc-plus") return SecondRegisterForm::asc_plus;
    if (s == "asc_eb" || s == "asc-eb") return SecondRegisterForm::asc_eb;
    if (s == "des_eb" || s == "des-eb") return SecondRegisterForm::des_eb;
    if (s == "des_eg" || s == "des-eg") return SecondRegisterForm::des_eg;
    throw std::invalid_argument("unknown second-register form '" + std::string(s) + "'");
}

inline std::string_view to_string(SecondRegisterForm w) {
    switch (w) {
        case SecondRegisterForm::asc_plus: return "asc_plus";
        case SecondRegisterForm::asc_eb: return "asc_eb";
        case SecondRegisterForm::des_eb: return "des_eb";
        case SecondRegisterForm::des_eg: return "des_eg";
    }
    return "?";
}

/// Exponent E(m) of the direct sum (1/P)|Sum_m e^{2 pi i E(m)/P}|.
///   r  = k m_j + (m mod 2^j)                 G applications before the error, ascending
///   r' = m - 2^j m_j - (m mod 2^j) + k m_j   the same, descending
///   asc_plus: m m' + (m - 2r) f
///   asc_eb:   m m' + r f + (m - r) P/2
///   des_eb:   m m' + r' f + (m - r') P/2
///   des_eg:   m m' + r' f
inline double second_register_exponent(SecondRegisterForm which, const KernelParams& kp, std::uint64_t m) {
    const auto sp = detail::split(m, kp.j);
    const double md = static_cast<double>(m);
    const double mp = static_cast<double>(kp.m_prime);
    const double half_p = static_cast<double>(kp.P()) / 2.0;
    const double kmj = static_cast<double>(kp.k * sp.bit);
    const double r = kmj + static_cast<double>(sp.low);
    const double r_des = static_cast<double>(sp.high << (kp.j + 1)) + kmj;
    switch (which) {
        case SecondRegisterForm::asc_plus: return md * mp + (md - 2.0 * r) * kp.f;
        case SecondRegisterForm::asc_eb: return md * mp + r * kp.f + (md - r) * half_p;
        case SecondRegisterForm::des_eb: return md * mp + r_des * kp.f + (md - r_des) * half_p;
        case SecondRegisterForm::des_eg: return md * mp + r_des * kp.f;
    }
    throw std::invalid_argument("second_register_exponent: unknown form");
}

inline double second_register_sum_direct(SecondRegisterForm which, const KernelParams& kp) {
    kp.validate();
    const auto e = [&](std::uint64_t m) { return second_register_exponent(which, kp, m); };
    return std::abs(brute_force_sum(e, kp.P())) / static_cast<double>(kp.P());
}

/// Three-kernel product form of second_register_sum_direct.
inline double second_register_sum(SecondRegisterForm which, const KernelParams& kp) {
    kp.validate();
    const double mp = static_cast<double>(kp.m_prime);
    const double f = kp.f;
    const double k = static_cast<double>(kp.k);
    const double half_p = static_cast<double>(kp.P()) / 2.0;
    const double block = std::ldexp(1.0, kp.j);
    const double hi = 2.0 * block;
    switch (which) {
        case SecondRegisterForm::asc_plus:
            return split_sum_magnitude(kp.p, kp.j, hi * (mp + f), block * (mp + f) - 2.0 * k * f, mp - f);
        case SecondRegisterForm::asc_eb:
            return split_sum_magnitude(kp.p, kp.j, hi * (mp + half_p), block * mp + k * f + (block - k) * half_p,
                                       mp + f);
        case SecondRegisterForm::des_eb:
            return split_sum_magnitude(kp.p, kp.j, hi * (mp + f), block * mp + k * f + (block - k) * half_p,
                                       mp + half_p);
        case SecondRegisterForm::des_eg:
            return split_sum_magnitude(kp.p, kp.j, hi * (mp + f), block * mp + k * f, mp);
    }
    throw std::invalid_argument("second_register_sum: unknown form");
}

/// second_register_sum over every m' in [0, 2^p).
inline std::vector<double> second_register_profile(SecondRegisterForm which, int p, int j, std::uint64_t k, double f) {
    std::vector<double> out(std::uint64_t{1} << p);
    for (std::uint64_t m = 0; m < out.size(); ++m) out[m] = second_register_sum(which, {p, j, k, f, m});
    return out;
}

}  // namespace qcount::analytic
