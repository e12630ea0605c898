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
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qcount/common.hpp"

namespace qcount::harness {

/// Shortest round-tripping decimal; at least 12 significant digits are kept.
inline std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    if (std::strtod(buf, nullptr) != v) std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void write_m_dist(std::ostream& os, const ProbDist& dist) {
    os << "m_prime,probability\n";
    for (std::size_t m = 0; m < dist.size(); ++m) os << m << ',' << format_real(dist[m]) << '\n';
}

/// `counts` is empty for exact runs; the count column is then left blank.
inline void write_t_dist(std::ostream& os, const ProbDist& freq, const std::vector<std::uint64_t>& counts = {}) {
    if (!counts.empty() && counts.size() != freq.size()) throw std::invalid_argument("write_t_dist: length mismatch");
    os << "t_estimate,count,frequency\n";
    for (std::size_t t = 0; t < freq.size(); ++t) {
        os << t << ',';
        if (!counts.empty()) os << counts[t];
        os << ',' << format_real(freq[t]) << '\n';
    }
}

/// Stacked distributions: one block of rows per label.
inline void write_stacked(std::ostream& os, const std::string& axis, const std::vector<std::string>& labels,
                          const std::vector<ProbDist>& dists, const std::string& value_column = "probability") {
    if (labels.size() != dists.size()) throw std::invalid_argument("write_stacked: label count mismatch");
    os << axis << ",m_prime," << value_column << '\n';
    for (std::size_t r = 0; r < dists.size(); ++r)
        for (std::size_t m = 0; m < dists[r].size(); ++m) os << labels[r] << ',' << m << ',' << format_real(dists[r][m]) << '\n';
}

struct CsvDistribution {
    ProbDist values;
    std::optional<std::vector<std::uint64_t>> counts;
};

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream is(line);
    while (std::getline(is, cell, ',')) {
        if (!cell.empty() && cell.back() == '\r') cell.pop_back();
        out.push_back(cell);
    }
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

}  // namespace detail

/// Reads an m_dist or t_dist file. Rows must be indexed 0, 1, 2, ...
inline CsvDistribution read_distribution(std::istream& is, const std::string& source = "<csv>") {
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error(source + ":1: empty file");
    const auto header = detail::split_csv_line(line);
    bool t_dist = false;
    if (header == std::vector<std::string>{"m_prime", "probability"}) {
        t_dist = false;
    } else if (header == std::vector<std::string>{"t_estimate", "count", "frequency"}) {
        t_dist = true;
    } else {
        throw std::runtime_error(source + ":1: unrecognized header '" + line + "'");
    }
    CsvDistribution out;
    std::vector<std::uint64_t> counts;
    bool all_counts = true;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        const auto cells = detail::split_csv_line(line);
        const auto where = source + ":" + std::to_string(lineno) + ": ";
        if (cells.size() != header.size()) throw std::runtime_error(where + "expected " + std::to_string(header.size()) + " columns");
        try {
            if (std::stoull(cells[0]) != out.values.size()) throw std::runtime_error(where + "index out of sequence");
            out.values.push_back(std::stod(cells.back()));
            if (t_dist) {
                if (cells[1].empty()) {
                    all_counts = false;
                } else {
                    counts.push_back(std::stoull(cells[1]));
                }
            }
        } catch (const std::logic_error&) {
            throw std::runtime_error(where + "malformed number");
        }
    }
    if (t_dist && all_counts && !out.values.empty()) out.counts = std::move(counts);
    return out;
}

inline CsvDistribution read_distribution_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error(path + ": cannot open");
    return read_distribution(is, path);
}

}  // namespace qcount::harness
