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
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"

#include "qcount/analytic.hpp"
#include "qcount/circuits.hpp"
#include "qcount/harness/compare.hpp"
#include "qcount/harness/config.hpp"
#include "qcount/harness/csv.hpp"

namespace qcount::harness {

/// One computed distribution. For the second-register analytic forms the
/// values are kernel magnitudes, not probabilities.
struct RunOutput {
    ProbDist m_dist;
    std::vector<std::uint64_t> m_counts;  ///< sampled runs only
    ProbDist t_freq;
    std::vector<std::uint64_t> t_counts;  ///< sampled runs only
    bool is_distribution = true;
};

/// Folds a distribution over m' into one over rounded t estimates [0, N].
inline ProbDist t_distribution(const ProbDist& m_dist, int p, int n) {
    ProbDist out((std::size_t{1} << n) + 1, 0.0);
    for (std::uint64_t m = 0; m < m_dist.size(); ++m)
        out[static_cast<std::size_t>(estimate_t(m, p, n).t_rounded)] += m_dist[m];
    return out;
}

inline RunOutput compute(const ExperimentConfig& c, Ordering ordering, int workers = 0) {
    const Oracle oracle = c.oracle();
    RunOutput out;
    switch (c.method) {
        case Method::analytic: {
            const double f = grover_angle(oracle).frequency(c.p);
            if (c.form == "noiseless") {
                out.m_dist = closed_form_noiseless(c.p, oracle);
            } else if (c.form == "prob-avg") {
                out.m_dist = analytic::prob_first_register_avg(c.p, c.j, f);
            } else {
                out.m_dist = analytic::second_register_profile(analytic::parse_second_register_form(c.form), c.p, c.j, c.k, f);
                out.is_distribution = false;
                return out;
            }
            break;
        }
        case Method::exact: out.m_dist = run_counting_exact({c.p, oracle, ordering}, c.noise); break;
        case Method::sampled: {
            if (!c.seed) throw std::invalid_argument("sampled runs need a seed");
            auto counts = run_counting_sampled({c.p, oracle, ordering}, c.noise, c.trials, *c.seed, workers);
            out.m_dist = counts.m_frequencies();
            out.m_counts = counts.m_counts;
            out.t_counts = counts.t_counts;
            out.t_freq.resize(counts.t_counts.size());
            for (std::size_t t = 0; t < out.t_freq.size(); ++t)
                out.t_freq[t] = static_cast<double>(counts.t_counts[t]) / static_cast<double>(counts.trials);
            return out;
        }
    }
    out.t_freq = t_distribution(out.m_dist, c.p, c.n);
    return out;
}

/// Cyclic local maxima, strongest first.
inline json peaks(const ProbDist& dist, int p, int n, std::size_t limit = 8) {
    const std::size_t P = dist.size();
    std::vector<std::size_t> idx;
    for (std::size_t m = 0; m < P; ++m) {
        const double l = dist[(m + P - 1) % P], r = dist[(m + 1) % P];
        if (dist[m] > 0.0 && dist[m] >= l && dist[m] >= r) idx.push_back(m);
    }
    std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return dist[a] > dist[b]; });
    json out = json::array();
    for (std::size_t i = 0; i < std::min(limit, idx.size()); ++i) {
        const auto m = idx[i];
        out.push_back({{"m_prime", m}, {"value", dist[m]}, {"t_estimate", estimate_t(m, p, n).t_tilde}});
    }
    return out;
}

inline std::size_t argmax(const ProbDist& d) {
    return static_cast<std::size_t>(std::max_element(d.begin(), d.end()) - d.begin());
}

/// Mass on the wrong outputs t' = 0 and t' = N.
inline double edge_mass(const ProbDist& t_freq) { return t_freq.front() + t_freq.back(); }

namespace detail {

inline void write_file(const std::filesystem::path& path, const std::function<void(std::ostream&)>& body) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error(path.string() + ": cannot write");
    body(os);
    if (!os) throw std::runtime_error(path.string() + ": write failed");
}

inline ExperimentConfig with_value(ExperimentConfig c, const std::string& axis, const json& v) {
    if (axis == "ordering") {
        c.orderings = {parse_ordering(v.get<std::string>())};
    } else if (axis == "d") {
        c.noise.d = v.get<double>();
        c.noise.validate();
    } else if (axis == "j" || axis == "k") {
        const auto value = v.get<std::uint64_t>();
        if (c.method == Method::analytic) {
            if (axis == "j") c.j = static_cast<int>(value); else c.k = value;
            if (c.j < 0 || c.j >= c.p) throw std::invalid_argument("sweep: j out of range");
            if (c.k > (std::uint64_t{1} << c.j)) throw std::invalid_argument("sweep: k out of range for this j");
        } else {
            auto& e = *c.noise.event;
            if (axis == "j") e.j = static_cast<int>(value); else e.k = value;
            validate_event(e, c.p, c.n);
        }
    }
    return c;
}

inline std::string label_of(const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

}  // namespace detail

inline json run_comparisons(const ExperimentConfig& c, const RunOutput& r, const ProbDist& reference) {
    json s;
    if (!r.is_distribution) return s;
    const auto rep = r.m_counts.empty() ? compare(r.m_dist, reference) : compare(r.m_counts, reference);
    s["tv_vs_noiseless"] = rep.total_variation;
    s["max_abs_diff_vs_noiseless"] = rep.max_abs_diff;
    if (rep.chi_square_p) s["chi_square_p_vs_noiseless"] = *rep.chi_square_p;
    (void)c;
    return s;
}

/// Runs one experiment, writes its CSVs and summary.json into `out_dir`, and
/// returns the summary.
inline json run_experiment(const ExperimentConfig& c, const std::filesystem::path& out_dir, int workers = 0) {
    const auto start = std::chrono::steady_clock::now();
    std::filesystem::create_directories(out_dir);
    const Oracle oracle = c.oracle();
    const ProbDist reference = closed_form_noiseless(c.p, oracle);

    json summary;
    summary["name"] = c.name;
    summary["config"] = c.source;
    summary["workers"] = c.method == Method::sampled ? worker_count(workers) : 1;
    summary["grover_frequency"] = grover_angle(oracle).frequency(c.p);
    json files = json::array();

    if (c.sweep) {
        std::vector<std::string> labels;
        std::vector<ProbDist> rows;
        json entries = json::array();
        bool distributions = true;
        for (const auto& v : c.sweep->values) {
            const auto cv = detail::with_value(c, c.sweep->axis, v);
            const auto r = compute(cv, cv.orderings.front(), workers);
            distributions = distributions && r.is_distribution;
            labels.push_back(detail::label_of(v));
            rows.push_back(r.m_dist);
            json e = run_comparisons(cv, r, reference);
            e["value"] = v;
            e["argmax"] = argmax(r.m_dist);
            e["peaks"] = peaks(r.m_dist, c.p, c.n);
            entries.push_back(e);
        }
        ProbDist avg(rows.front().size(), 0.0);
        for (const auto& row : rows)
            for (std::size_t m = 0; m < avg.size(); ++m) avg[m] += row[m] / static_cast<double>(rows.size());
        labels.emplace_back("average");
        rows.push_back(avg);
        detail::write_file(out_dir / "sweep.csv", [&](std::ostream& os) {
            write_stacked(os, c.sweep->axis, labels, rows, distributions ? "probability" : "magnitude");
        });
        files.push_back("sweep.csv");
        summary["sweep"] = {{"axis", c.sweep->axis}, {"rows", entries}, {"average_peaks", peaks(avg, c.p, c.n)}};
        if (distributions) summary["sweep"]["average_tv_vs_noiseless"] = total_variation(avg, reference);
    } else {
        json runs = json::array();
        std::vector<RunOutput> results;
        for (Ordering o : c.orderings) {
            auto r = compute(c, o, workers);
            const std::string suffix = c.orderings.size() > 1 ? "_" + std::string(to_string(o)) : "";
            json e = run_comparisons(c, r, reference);
            e["ordering"] = to_string(o);
            e["argmax"] = argmax(r.m_dist);
            e["peaks"] = peaks(r.m_dist, c.p, c.n);
            if (r.is_distribution) e["t_edge_mass"] = edge_mass(r.t_freq);
            if (c.wants("m_dist")) {
                const auto name = "m_dist" + suffix + ".csv";
                detail::write_file(out_dir / name, [&](std::ostream& os) {
                    if (r.is_distribution) {
                        write_m_dist(os, r.m_dist);
                    } else {
                        write_stacked(os, "form", {c.form}, {r.m_dist}, "magnitude");
                    }
                });
                files.push_back(name);
            }
            if (c.wants("t_dist") && r.is_distribution) {
                const auto name = "t_dist" + suffix + ".csv";
                detail::write_file(out_dir / name, [&](std::ostream& os) { write_t_dist(os, r.t_freq, r.t_counts); });
                files.push_back(name);
            }
            runs.push_back(e);
            results.push_back(std::move(r));
        }
        if (c.wants("compare")) {
            detail::write_file(out_dir / "compare.csv", [&](std::ostream& os) {
                os << "ordering,total_variation,max_abs_diff,chi_square_p\n";
                for (std::size_t i = 0; i < results.size(); ++i) {
                    if (!results[i].is_distribution) continue;
                    const auto rep = results[i].m_counts.empty() ? compare(results[i].m_dist, reference)
                                                                 : compare(results[i].m_counts, reference);
                    os << to_string(c.orderings[i]) << ',' << format_real(rep.total_variation) << ','
                       << format_real(rep.max_abs_diff) << ',';
                    if (rep.chi_square_p) os << format_real(*rep.chi_square_p);
                    os << '\n';
                }
            });
            files.push_back("compare.csv");
        }
        if (c.wants("analytic")) {
            detail::write_file(out_dir / "analytic.csv", [&](std::ostream& os) { write_m_dist(os, reference); });
            files.push_back("analytic.csv");
        }
        summary["runs"] = runs;
        if (results.size() == 2 && !results[0].t_counts.empty() && !results[1].t_counts.empty()) {
            // Edge (t' in {0, N}) versus rest, second ordering against the first.
            const auto fold = [](const std::vector<std::uint64_t>& t) {
                std::uint64_t edge = t.front() + t.back(), total = 0;
                for (auto x : t) total += x;
                return std::vector<std::uint64_t>{edge, total - edge};
            };
            summary["edge_homogeneity_p"] = chi_square_homogeneity_p(fold(results[0].t_counts), fold(results[1].t_counts));
            summary["t_homogeneity_p"] = chi_square_homogeneity_p(results[0].t_counts, results[1].t_counts);
        }
    }
    summary["files"] = files;
    summary["wall_time_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    detail::write_file(out_dir / "summary.json", [&](std::ostream& os) { os << summary.dump(2) << '\n'; });
    return summary;
}

}  // namespace qcount::harness
