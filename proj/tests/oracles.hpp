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

// Independent reference computations shared by the unit tests. Nothing here
// calls into the library's simulation code.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace qcount::testing {

using C = std::complex<double>;
inline constexpr double kTau = 2.0 * std::numbers::pi;

inline std::vector<C> random_state(std::size_t dim, std::mt19937_64& gen) {
    std::normal_distribution<double> g;
    std::vector<C> v(dim);
    double s = 0.0;
    for (auto& a : v) {
        a = {g(gen), g(gen)};
        s += std::norm(a);
    }
    for (auto& a : v) a /= std::sqrt(s);
    return v;
}

/// out[m'] = P^{-1/2} sum_m exp(-2 pi i m m' / P) in[m], applied to the bits
/// [start, start + len) of every basis index, with the register read most
/// significant bit first after the transform (as the library's readout).
inline std::vector<C> dft_on_register(const std::vector<C>& in, int start, int len) {
    const std::size_t P = std::size_t{1} << len;
    const std::size_t mask = (P - 1) << start;
    std::vector<C> out(in.size(), 0.0);
    for (std::size_t idx = 0; idx < in.size(); ++idx) {
        if (in[idx] == C{0.0, 0.0}) continue;
        const std::size_t m = (idx & mask) >> start;
        const std::size_t rest = idx & ~mask;
        for (std::size_t mp = 0; mp < P; ++mp) {
            const double ang = -kTau * static_cast<double>((m * mp) % P) / static_cast<double>(P);
            out[rest | (mp << start)] += in[idx] * std::polar(1.0 / std::sqrt(static_cast<double>(P)), ang);
        }
    }
    return out;
}

/// Dense Grover matrix (2|s><s| - I)(I - 2 sum_{x marked} |x><x|), row major.
inline std::vector<C> dense_grover(std::size_t N, const std::vector<std::uint64_t>& marked) {
    std::vector<double> flip(N, 1.0);
    for (auto x : marked) flip[x] = -1.0;
    std::vector<C> G(N * N);
    for (std::size_t r = 0; r < N; ++r)
        for (std::size_t c = 0; c < N; ++c) G[r * N + c] = (2.0 / static_cast<double>(N) - (r == c ? 1.0 : 0.0)) * flip[c];
    return G;
}

inline std::vector<C> matvec(const std::vector<C>& M, const std::vector<C>& v) {
    const std::size_t n = v.size();
    std::vector<C> out(n, 0.0);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) out[r] += M[r * n + c] * v[c];
    return out;
}

inline double max_diff(const std::vector<C>& a, const std::vector<C>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

inline double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

inline double tv(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
    return 0.5 * s;
}

inline double sum(const std::vector<double>& a) {
    double s = 0.0;
    for (double x : a) s += x;
    return s;
}

/// Textbook phase-estimation output: |P^{-1} sum_m exp(2 pi i m (phi - m'/P))|^2.
inline std::vector<double> phase_estimation_oracle(double phi, int p) {
    const std::size_t P = std::size_t{1} << p;
    std::vector<double> out(P);
    for (std::size_t mp = 0; mp < P; ++mp) {
        C s = 0.0;
        for (std::size_t m = 0; m < P; ++m)
            s += std::polar(1.0, kTau * static_cast<double>(m) * (phi - static_cast<double>(mp) / static_cast<double>(P)));
        out[mp] = std::norm(s) / static_cast<double>(P * P);
    }
    return out;
}

/// 3-sigma multinomial bound check per bin.
inline bool within_3sigma(const std::vector<std::uint64_t>& counts, const std::vector<double>& p, std::uint64_t trials) {
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double mean = p[i] * static_cast<double>(trials);
        const double sd = std::sqrt(static_cast<double>(trials) * p[i] * (1.0 - p[i]));
        if (std::abs(static_cast<double>(counts[i]) - mean) > 3.0 * sd + 1.0) return false;
    }
    return true;
}

}  // namespace qcount::testing
