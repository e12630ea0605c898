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
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "qcount/common.hpp"

namespace qcount::harness {

struct ComparisonReport {
    double total_variation = 0.0;
    double max_abs_diff = 0.0;
    std::optional<double> chi_square_p;
};

inline void require_same_length(std::size_t a, std::size_t b) {
    if (a != b) {
        throw std::invalid_argument("compare: length mismatch (" + std::to_string(a) + " vs " + std::to_string(b) + ")");
    }
}

/// TV = 1/2 sum |a_i - b_i|.
inline double total_variation(const ProbDist& a, const ProbDist& b) {
    require_same_length(a.size(), b.size());
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
    return 0.5 * s;
}

inline double max_abs_diff(const ProbDist& a, const ProbDist& b) {
    require_same_length(a.size(), b.size());
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

/// Upper tail of the chi-square distribution.
inline double chi_square_sf(double statistic, double dof) {
    if (dof <= 0.0) return 1.0;
    if (!std::isfinite(statistic)) return 0.0;
    if (statistic <= 0.0) return 1.0;
    return boost::math::gamma_q(0.5 * dof, 0.5 * statistic);
}

/// Goodness of fit of a sampled histogram against expected probabilities.
/// Bins with expected count below `min_expected` are pooled into one cell.
inline double chi_square_gof_p(const std::vector<std::uint64_t>& counts, const ProbDist& expected,
                               double min_expected = 5.0) {
    require_same_length(counts.size(), expected.size());
    double trials = 0.0;
    for (auto c : counts) trials += static_cast<double>(c);
    if (trials == 0.0) throw std::invalid_argument("chi-square: empty histogram");
    double stat = 0.0;
    int cells = 0;
    double pooled_obs = 0.0, pooled_exp = 0.0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        const double e = expected[i] * trials;
        const double o = static_cast<double>(counts[i]);
        if (e < min_expected) {
            pooled_obs += o;
            pooled_exp += e;
            continue;
        }
        stat += (o - e) * (o - e) / e;
        ++cells;
    }
    if (pooled_exp > 0.0) {
        stat += (pooled_obs - pooled_exp) * (pooled_obs - pooled_exp) / pooled_exp;
        ++cells;
    } else if (pooled_obs > 0.0) {
        return 0.0;
    }
    return chi_square_sf(stat, cells - 1);
}

/// Homogeneity test of two histograms over the same bins (2 x K contingency
/// table; bins empty in both are dropped).
inline double chi_square_homogeneity_p(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
    require_same_length(a.size(), b.size());
    double na = 0.0, nb = 0.0;
    for (auto c : a) na += static_cast<double>(c);
    for (auto c : b) nb += static_cast<double>(c);
    if (na == 0.0 || nb == 0.0) throw std::invalid_argument("chi-square: empty histogram");
    const double n = na + nb;
    double stat = 0.0;
    int cols = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double col = static_cast<double>(a[i]) + static_cast<double>(b[i]);
        if (col == 0.0) continue;
        ++cols;
        const double ea = na * col / n, eb = nb * col / n;
        stat += (static_cast<double>(a[i]) - ea) * (static_cast<double>(a[i]) - ea) / ea;
        stat += (static_cast<double>(b[i]) - eb) * (static_cast<double>(b[i]) - eb) / eb;
    }
    return chi_square_sf(stat, cols - 1);
}

inline ComparisonReport compare(const ProbDist& a, const ProbDist& b) {
    return {total_variation(a, b), max_abs_diff(a, b), std::nullopt};
}

/// Sampled histogram against a reference distribution; adds the chi-square p-value.
inline ComparisonReport compare(const std::vector<std::uint64_t>& counts, const ProbDist& reference) {
    require_same_length(counts.size(), reference.size());
    double trials = 0.0;
    for (auto c : counts) trials += static_cast<double>(c);
    ProbDist freq(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i) freq[i] = trials > 0 ? static_cast<double>(counts[i]) / trials : 0.0;
    auto r = compare(freq, reference);
    r.chi_square_p = chi_square_gof_p(counts, reference);
    return r;
}

}  // namespace qcount::harness
