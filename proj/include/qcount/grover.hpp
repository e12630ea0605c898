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
#include <charconv>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qcount/common.hpp"

namespace qcount {

/// Marked set I of f: {0..N-1} -> {0,1}, N = 2^n.
class Oracle {
  public:
    Oracle(int n, std::vector<std::uint64_t> marked) : n_(n), marked_(std::move(marked)) {
        if (n < 1 || n > 26) throw std::invalid_argument("Oracle: n must be in [1, 26]");
        std::sort(marked_.begin(), marked_.end());
        marked_.erase(std::unique(marked_.begin(), marked_.end()), marked_.end());
        if (!marked_.empty() && marked_.back() >= size()) {
            throw std::invalid_argument("Oracle: marked item " + std::to_string(marked_.back()) +
                                        " >= N = " + std::to_string(size()));
        }
        // Dense bitmap once lookups by binary search stop paying off.
        if (marked_.size() * 64 > size()) {
            bitmap_.assign(size(), 0);
            for (auto x : marked_) bitmap_[x] = 1;
        }
    }

    /// Parses "0-12", "1,5,9" or mixtures like "0-3,7".
    static Oracle parse(int n, std::string_view text) { return Oracle(n, parse_marked(text)); }

    static std::vector<std::uint64_t> parse_marked(std::string_view text) {
        std::vector<std::uint64_t> out;
        const auto parse_int = [&](std::string_view tok) {
            while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
            while (!tok.empty() && tok.back() == ' ') tok.remove_suffix(1);
            std::uint64_t v = 0;
            const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
            if (tok.empty() || ec != std::errc{} || ptr != tok.data() + tok.size()) {
                throw std::invalid_argument("marked set: bad integer '" + std::string(tok) + "'");
            }
            return v;
        };
        while (!text.empty()) {
            const auto comma = text.find(',');
            std::string_view tok = text.substr(0, comma);
            text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
            if (tok.find_first_not_of(' ') == std::string_view::npos) continue;
            const auto dash = tok.find('-');
            if (dash == std::string_view::npos) {
                out.push_back(parse_int(tok));
            } else {
                const auto lo = parse_int(tok.substr(0, dash));
                const auto hi = parse_int(tok.substr(dash + 1));
                if (hi < lo) throw std::invalid_argument("marked set: empty range '" + std::string(tok) + "'");
                for (auto v = lo; v <= hi; ++v) out.push_back(v);
            }
        }
        return out;
    }

    [[nodiscard]] int n() const { return n_; }
    [[nodiscard]] std::uint64_t size() const { return std::uint64_t{1} << n_; }
    [[nodiscard]] std::uint64_t count() const { return marked_.size(); }
    [[nodiscard]] const std::vector<std::uint64_t>& marked() const { return marked_; }

    [[nodiscard]] bool is_marked(std::uint64_t x) const {
        if (!bitmap_.empty()) return x < bitmap_.size() && bitmap_[x] != 0;
        return std::binary_search(marked_.begin(), marked_.end(), x);
    }

    /// Range-compressed text form, e.g. "0-12,40".
    [[nodiscard]] std::string to_string() const {
        std::string s;
        for (std::size_t i = 0; i < marked_.size();) {
            std::size_t j = i;
            while (j + 1 < marked_.size() && marked_[j + 1] == marked_[j] + 1) ++j;
            if (!s.empty()) s += ',';
            s += std::to_string(marked_[i]);
            if (j > i) s += '-' + std::to_string(marked_[j]);
            i = j + 1;
        }
        return s;
    }

  private:
    int n_;
    std::vector<std::uint64_t> marked_;
    std::vector<std::uint8_t> bitmap_;
};

struct GroverAngle {
    double theta = 0.0;

    /// Eigenphase in Fourier-bin units for a first register of p qubits.
    [[nodiscard]] double frequency(int p) const { return std::ldexp(1.0, p) * theta / kTwoPi; }
};

inline GroverAngle grover_angle(const Oracle& oracle) {
    const double ratio = static_cast<double>(oracle.count()) / static_cast<double>(oracle.size());
    return {2.0 * std::asin(std::sqrt(ratio))};
}

struct GoodBadBasis {
    std::optional<std::vector<Complex>> b;  ///< uniform over unmarked items; absent when t = N
    std::optional<std::vector<Complex>> g;  ///< uniform over marked items; absent when t = 0
};

inline GoodBadBasis good_bad_basis(const Oracle& oracle) {
    const std::uint64_t N = oracle.size();
    const std::uint64_t t = oracle.count();
    GoodBadBasis out;
    if (t < N) {
        const double a = 1.0 / std::sqrt(static_cast<double>(N - t));
        std::vector<Complex> b(N);
        for (std::uint64_t x = 0; x < N; ++x) b[x] = oracle.is_marked(x) ? 0.0 : a;
        out.b = std::move(b);
    }
    if (t > 0) {
        const double a = 1.0 / std::sqrt(static_cast<double>(t));
        std::vector<Complex> g(N, 0.0);
        for (auto x : oracle.marked()) g[x] = a;
        out.g = std::move(g);
    }
    return out;
}

/// G = U2 U1 in place: phase flip on marked items, then reflection about |s>.
inline void apply_grover(const Oracle& oracle, std::span<Complex> state) {
    if (state.size() != oracle.size()) {
        throw std::invalid_argument("apply_grover: state dimension " + std::to_string(state.size()) +
                                    " != N = " + std::to_string(oracle.size()));
    }
    for (auto x : oracle.marked()) state[x] = -state[x];
    Complex sum{0.0, 0.0};
    for (const auto& a : state) sum += a;
    const Complex twice_mean = 2.0 * sum / static_cast<double>(state.size());
    for (auto& a : state) a = twice_mean - a;
}

inline std::vector<Complex> uniform_state(std::uint64_t dim) {
    return std::vector<Complex>(dim, Complex{1.0 / std::sqrt(static_cast<double>(dim)), 0.0});
}

/// G restricted to the Grover space in (|b>, |g>) coordinates.
inline Mat2 grover_space_rotation(const Oracle& oracle) {
    const double th = grover_angle(oracle).theta;
    return {std::cos(th), -std::sin(th), std::sin(th), std::cos(th)};
}

/// |s> in (|b>, |g>) coordinates.
inline std::vector<Complex> grover_space_start(const Oracle& oracle) {
    const double half = 0.5 * grover_angle(oracle).theta;
    return {std::cos(half), std::sin(half)};
}

/// phi = u|b> + v|g> + u_e|e_b> + v_e|e_g>, with e_b in H_b orthogonal to |b>
/// and e_g in H_g orthogonal to |g>.
struct SixBasisDecomposition {
    Complex u{}, v{}, u_e{}, v_e{};
    std::optional<std::vector<Complex>> e_b;
    std::optional<std::vector<Complex>> e_g;

    [[nodiscard]] double weight() const {
        return std::norm(u) + std::norm(v) + std::norm(u_e) + std::norm(v_e);
    }
};

inline constexpr double kResidualThreshold = 1e-10;

namespace detail {

inline Complex inner(std::span<const Complex> a, std::span<const Complex> b) {
    Complex s{0.0, 0.0};
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

inline double norm(std::span<const Complex> a) { return std::sqrt(std::real(inner(a, a))); }

}  // namespace detail

inline SixBasisDecomposition decompose_six_basis(std::span<const Complex> phi, const Oracle& oracle) {
    if (phi.size() != oracle.size()) throw std::invalid_argument("decompose_six_basis: dimension mismatch");
    if (std::abs(detail::norm(phi) - 1.0) > 1e-9) {
        throw std::invalid_argument("decompose_six_basis: input is not normalized");
    }
    const auto basis = good_bad_basis(oracle);
    SixBasisDecomposition out;
    const std::uint64_t N = oracle.size();

    // Project onto H_b (unmarked coordinates) and H_g (marked coordinates),
    // then strip the |b> and |g> components.
    std::vector<Complex> res_b(N, 0.0), res_g(N, 0.0);
    for (std::uint64_t x = 0; x < N; ++x) (oracle.is_marked(x) ? res_g : res_b)[x] = phi[x];
    if (basis.b) {
        out.u = detail::inner(*basis.b, phi);
        for (std::uint64_t x = 0; x < N; ++x) res_b[x] -= out.u * (*basis.b)[x];
    }
    if (basis.g) {
        out.v = detail::inner(*basis.g, phi);
        for (std::uint64_t x = 0; x < N; ++x) res_g[x] -= out.v * (*basis.g)[x];
    }
    if (const double nb = detail::norm(res_b); nb >= kResidualThreshold) {
        out.u_e = nb;
        for (auto& a : res_b) a /= nb;
        out.e_b = std::move(res_b);
    }
    if (const double ng = detail::norm(res_g); ng >= kResidualThreshold) {
        out.v_e = ng;
        for (auto& a : res_g) a /= ng;
        out.e_g = std::move(res_g);
    }
    return out;
}

inline std::vector<Complex> reconstruct(const SixBasisDecomposition& d, const Oracle& oracle) {
    const auto basis = good_bad_basis(oracle);
    std::vector<Complex> out(oracle.size(), 0.0);
    const auto add = [&](Complex c, const std::optional<std::vector<Complex>>& vec) {
        if (!vec) return;
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += c * (*vec)[i];
    };
    add(d.u, basis.b);
    add(d.v, basis.g);
    add(d.u_e, d.e_b);
    add(d.v_e, d.e_g);
    return out;
}

/// || G phi - B coords(phi) || with B = rotation(theta) (+) (-1) (+) (+1) acting
/// on (u, v, u_e, v_e).
inline double verify_block_action(const Oracle& oracle, std::span<const Complex> phi) {
    if (oracle.count() == 0 || oracle.count() == oracle.size()) {
        throw std::invalid_argument("verify_block_action: oracle must have 0 < t < N");
    }
    const auto d = decompose_six_basis(phi, oracle);
    std::vector<Complex> g_phi(phi.begin(), phi.end());
    apply_grover(oracle, g_phi);

    const double th = grover_angle(oracle).theta;
    SixBasisDecomposition mapped = d;
    mapped.u = std::cos(th) * d.u - std::sin(th) * d.v;
    mapped.v = std::sin(th) * d.u + std::cos(th) * d.v;
    mapped.u_e = -d.u_e;
    mapped.v_e = d.v_e;
    const auto expected = reconstruct(mapped, oracle);
    double s = 0.0;
    for (std::size_t i = 0; i < expected.size(); ++i) s += std::norm(g_phi[i] - expected[i]);
    return std::sqrt(s);
}

}  // namespace qcount
